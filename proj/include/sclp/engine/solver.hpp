#pragma once

#include <string>

#include "sclp/core/problem.hpp"
#include "sclp/core/solution.hpp"
#include "sclp/engine/boundary.hpp"
#include "sclp/engine/certificate.hpp"
#include "sclp/engine/collision.hpp"
#include "sclp/engine/values.hpp"

namespace sclp::engine {

enum class SolveStatus {
    Optimal,
    Infeasible,
    Unbounded,
    IterationLimit,
    NumericalFailure,
    RecursionLimit,
};

const char* to_string(SolveStatus s);

struct SolveResult {
    SolveStatus status = SolveStatus::NumericalFailure;
    core::SolutionState state;
    SolverDiagnostics diagnostics;
    CertificateReport certificate;
    std::string message;

    bool ok() const { return status == SolveStatus::Optimal && certificate.pass(); }
};

// Boundary LPs plus the first Rates-LP basis: the optimal solution for a
// vanishing horizon, the start of the parametric line.
struct InitResult {
    SolveStatus status = SolveStatus::NumericalFailure;
    core::SolutionState state;
    BoundaryResult boundary;
};

InitResult initialize(const core::SclpProblem& p, const SolverConfig& cfg = {});

// Full solve: grows the horizon from 0 to p.T along the parametric line,
// classifying and applying collisions until theta reaches 1, then verifies
// the optimality certificate.
SolveResult solve(const core::SclpProblem& p, const SolverConfig& cfg = {});

// Warm start from an existing optimal state along an arbitrary line
// (rolling-horizon re-solves enter here).
SolveResult solve_along_line(const core::SclpProblem& p, core::SolutionState start,
                             const core::ParametricLine& line,
                             const SolverConfig& cfg = {});

// Reduced-dimension sub-problem built at a collision: zero states keep their
// rows, controls with positive dual states drop out, servers with no
// remaining activity drop out.  index maps recover parent variables.
struct SubproblemInfo {
    core::SclpProblem problem;
    core::ParametricLine line;
    std::vector<int> state_map;    // sub state index -> parent state index
    std::vector<int> control_map;  // sub control index -> parent control index
    std::vector<int> server_map;   // sub server row -> parent server row
};

SubproblemInfo formulate_subproblem(const core::SclpProblem& p, const Vector& x_star,
                                    const Vector& q_star, const Vector& dx_star,
                                    double t_star, double zero_tol);

}  // namespace sclp::engine
