#pragma once

#include "sclp/disc/discretize.hpp"

namespace sclp::disc {

struct IpmResult {
    bool converged = false;
    double objective = 0.0;  // cost'z (before the offset)
    std::vector<double> z;   // primal variables, stage layout u|x|s
    long iterations = 0;
    double gap = 0.0;
    double primal_infeasibility = 0.0;
    double dual_infeasibility = 0.0;
};

// Mehrotra predictor-corrector interior-point solve of the
// finite-differences discretization.  The normal equations are
// block-tridiagonal in the time stages (the only coupling is x[n] shared by
// consecutive flow rows), so each iteration costs O(N (K+I)^3).
IpmResult solve_staircase_ipm(const DiscreteLp& lp, double tolerance,
                              int max_iterations);

}  // namespace sclp::disc
