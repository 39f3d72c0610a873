#pragma once

#include <vector>

#include "sclp/core/problem.hpp"
#include "sclp/lp/simplex.hpp"

namespace sclp::engine {

// Solutions of the pair of boundary LPs
//   max [0 d']x0 s.t. [I F]x0 = alpha, x0 >= 0
//   min [b' on the capacity block] qN s.t. H'q_u - q_s = gamma, qN >= 0.
// They do not involve T, so they hold for every horizon.
struct BoundaryResult {
    lp::LpStatus primal_status = lp::LpStatus::Singular;
    lp::LpStatus dual_status = lp::LpStatus::Singular;
    Vector x0;             // length K+L
    Vector qN;             // length J+I
    std::vector<int> K0;   // states with x0_k above zero_tol
    std::vector<int> JN1;  // dual states with qN_j above zero_tol
};

BoundaryResult solve_boundary(const core::SclpProblem& p, double zero_tol);

}  // namespace sclp::engine
