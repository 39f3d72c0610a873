#pragma once

#include "sclp/engine/solver.hpp"

namespace sclp::engine {

// Warm-started re-solve for the period [t0, T+t0]: the solved state is
// truncated at t0, x(t0) becomes the new initial inventory, and the horizon
// grows back from T-t0 to T along the regular parametric line.  Returns the
// shifted problem alongside its solution.
struct RollingResult {
    core::SclpProblem shifted;
    SolveResult result;
    bool warm_start_used = false;
};

RollingResult resolve_rolling_horizon(const core::SclpProblem& p,
                                      const core::SolutionState& s, double t0,
                                      const SolverConfig& cfg = {});

}  // namespace sclp::engine
