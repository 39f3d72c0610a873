#pragma once

#include <vector>

#include "sclp/core/solution.hpp"
#include "sclp/engine/collision.hpp"

namespace sclp::engine {

// Forward accumulation of x[n] from x0 and backward accumulation of q[n]
// from qN, with their parametric derivatives.
void recompute_breakpoint_values(core::SolutionState& s, const Vector& dx0,
                                 const Vector& dqN);

// Rebuilds the tracked local-minima index from scratch.
void rebuild_minima(core::SolutionState& s);

// Incremental variant: slopes changed only for intervals [lo, hi] (inclusive,
// post-edit indexing) after an edit that shifted later intervals by `shift`.
void update_minima_after_edit(core::SolutionState& s, int lo, int hi, int shift);

struct ThetaCandidate {
    enum class Kind { Interval, StateMin, DualMin };
    Kind kind;
    int index;  // interval index, or state/control index
    int n;      // breakpoint index for minima, interval index otherwise
    double ratio;
};

struct ThetaStep {
    double theta_next = 1.0;
    double increment = 0.0;
    std::vector<ThetaCandidate> candidates;  // all ratios within compare_tol of the best
};

// Eq-driven ratio search over shrinking intervals and tracked local minima
// with negative drift.  Returns theta_next >= 1 with no candidates when
// nothing binds before the goal.
ThetaStep find_next_theta(const core::SolutionState& s, const ToleranceState& tol);

}  // namespace sclp::engine
