#pragma once

#include <functional>
#include <string>
#include <vector>

#include "sclp/core/solution.hpp"
#include "sclp/types.hpp"

namespace sclp::engine {

// Taxonomy of events along the parametric line.  Breakpoint indices follow
// the convention that intervals n+1..n' (1-based) shrink for Type I/II, i.e.
// 0-based intervals n..n'-1, leaving neighbors at 0-based intervals n-1 and
// n'.  Type III stores n == n' and the entity hitting zero.
struct Collision {
    enum class Kind { TypeI, TypeII, TypeIII };
    Kind kind = Kind::TypeI;
    int n = -1;
    int n_prime = -1;
    VarId entity;  // Type III only: state xdot_k or control u_j id
    double theta_at = 0.0;

    int first_interval() const { return n; }        // 0-based shrinking range
    int last_interval() const { return n_prime - 1; }
};

const char* to_string(Collision::Kind k);

enum class ErrType {
    None,
    AmbiguousClassification,  // tie structure unresolvable at current tolerances
    IncorrectCollision,       // |B_n \ B_n'| > 2 after a shrink
    IncorrectPivot,           // sign jump tests failed on the new basis
    IncorrectSubproblem,      // splice ends not adjacent / sub-solve failed
    ZeroLengthShrink,         // interval created last iteration shrinks again
    SingularBreakpoints,      // breakpoint system factorization failed
    DegenerateStructure,      // no valid pivot/basis candidate found
};

const char* to_string(ErrType e);

// Zero / comparison tolerances with the adjustment ladder of the robust
// solver loop.  adjust() moves by `factor` in a direction keyed to the error
// type and clamps to [lo, hi]; reset() restores defaults.
struct ToleranceState {
    double zero_tol = 1e-11;
    double compare_tol = 1e-10;
    double lo = 1e-13;
    double hi = 1e-7;
    double factor = 10.0;

    double default_zero = 1e-11;
    double default_compare = 1e-10;

    bool in_bounds() const {
        return zero_tol >= lo && zero_tol <= hi && compare_tol >= lo &&
               compare_tol <= hi && zero_tol <= compare_tol;
    }
    // True if another adjustment for `e` can still move a tolerance.
    bool can_adjust(ErrType e) const;
    void adjust(ErrType e);
    void reset();
};

struct SolverDiagnostics {
    long iterations = 0;
    int subproblems = 0;
    int max_subproblem_depth = 0;
    int rewinds = 0;
    int tolerance_adjustments = 0;
    double wall_time_s = 0.0;
};

// Hooks for fault-injection tests.  misclassify sees every honestly
// classified collision and may corrupt it in place; the observers fire on
// snapshot capture and on every state restore.
struct TestHooks {
    std::function<bool(Collision&)> misclassify;
    std::function<void(const core::SolutionState&)> on_snapshot;
    std::function<void(const core::SolutionState&)> on_rewind;
};

struct SolverConfig {
    ToleranceState tolerances;
    long iteration_cap_factor = 100;  // cap = factor * 2K * (K+I)
    int recursion_cap = 10;
    int rewind_depth = 3;
    int dictionary_budget = 128;  // anchors; env SCLP_DICT_BUDGET overrides
    bool perturb = false;
    std::uint64_t perturb_seed = 0;
    double perturb_magnitude = 1e-7;
    bool check_certificate_each_iteration = false;  // debug mode
    TestHooks hooks;
};

}  // namespace sclp::engine
