#pragma once

#include <string>

#include <nlohmann/json_fwd.hpp>

#include "sclp/core/problem.hpp"
#include "sclp/core/solution.hpp"

namespace sclp::core {

// Problem files carry keys K,I,J,L,G,H,F,a,b,c,d,alpha,gamma,T and the
// optional applied costs h,g.  Matrices are row-major arrays of arrays; an
// absent or empty F/d means L = 0.
SclpProblem problem_from_json(const nlohmann::json& j);
nlohmann::json problem_to_json(const SclpProblem& p);

SclpProblem load_problem(const std::string& path);
void save_problem(const SclpProblem& p, const std::string& path);

nlohmann::json solution_to_json(const SclpProblem& p, const SolutionState& s);

}  // namespace sclp::core
