#pragma once

#include <utility>
#include <vector>

#include "sclp/core/problem.hpp"
#include "sclp/types.hpp"

namespace sclp::core {

// Signature of a Rates-LP basis.  K_set holds the states whose derivative is
// basic (unrestricted slope); J_set holds the controls pinned at zero.  The
// basic set is exactly {xdot_k : k in K_set} + {u_j : j not in J_set}.
struct BaseSignature {
    std::vector<int> K_set;  // sorted, unique
    std::vector<int> J_set;  // sorted, unique

    bool state_basic(int k) const;
    bool control_basic(int j) const;
    bool operator==(const BaseSignature&) const = default;
};

// One leaving / one entering variable between adjacent bases.
struct PivotRecord {
    VarId leaving;
    VarId entering;
    int position = -1;  // pivot between interval position and position+1
};

// Returns true iff exactly one variable leaves and one enters between b1, b2.
bool adjacent(const BaseSignature& b1, const BaseSignature& b2);

// The (leaving, entering) pair for adjacent signatures.
std::pair<VarId, VarId> pivot_pair(const BaseSignature& b1, const BaseSignature& b2,
                                   int num_controls);

// Endpoints of the homotopy: the solver moves boundary values and horizon
// from L0 to L1 as theta goes 0 -> 1.
struct ParametricLine {
    Vector x0_init, qN_init;
    double T_init = 0.0;
    Vector x0_goal, qN_goal;
    double T_goal = 0.0;

    double horizon_at(double theta) const { return (1 - theta) * T_init + theta * T_goal; }
    Vector x0_at(double theta) const { return (1 - theta) * x0_init + theta * x0_goal; }
    Vector qN_at(double theta) const { return (1 - theta) * qN_init + theta * qN_goal; }
};

// Piecewise solution state.  Interval n (0-based) carries constant controls
// u[n] and state slopes xdot[n]; dual controls p[n] and dual slopes qdot[n]
// live on the reversed clock.  Breakpoint values x[n], q[n] are indexed
// 0..N; q[N] is the dual boundary (q at reversed time 0).
struct SolutionState {
    std::vector<BaseSignature> bases;

    Vector tau;        // interval lengths, length N
    Vector delta_tau;  // d tau / d theta

    Vector x0;  // boundary primal states, length K+L
    Vector qN;  // boundary dual states, length J+I

    std::vector<Vector> u;     // per interval, length J+I
    std::vector<Vector> xdot;  // per interval, length K+L
    std::vector<Vector> p;     // per interval, length K+L
    std::vector<Vector> qdot;  // per interval, length J+I

    std::vector<Vector> x;  // breakpoint values, N+1 entries of length K+L
    std::vector<Vector> q;  // breakpoint values, N+1 entries of length J+I

    std::vector<Vector> delta_x;  // d x[n] / d theta
    std::vector<Vector> delta_q;

    // Per-state / per-dual-state breakpoint indices of tracked local minima.
    std::vector<std::vector<int>> x_minima;
    std::vector<std::vector<int>> q_minima;

    double theta = 0.0;
    double horizon = 0.0;

    int num_intervals() const { return static_cast<int>(bases.size()); }
    std::vector<double> breakpoints() const;  // t_0 = 0 .. t_N = horizon
    bool complete() const;
};

// Exact integral of the SCLP objective (gamma' + (T-t)c')u + d'x over the
// piecewise solution.  u is piecewise constant and x piecewise linear, so
// every interval integrates in closed form.
double evaluate_primal_objective(const SclpProblem& p, const SolutionState& s);

// Exact integral of the dual objective (alpha' + (T-t)a')p + b'q under the
// reversed-time convention p^n = p(T-t).
double evaluate_dual_objective(const SclpProblem& p, const SolutionState& s);

// Directly integrated holding cost int h'x + g'u dt of the applied form.
double evaluate_holding_objective(const SclpProblem& p, const SolutionState& s);

// State by linear interpolation and the interval's constant control;
// right-continuous at breakpoints, clamped to the last interval at t=horizon.
// Throws std::out_of_range for t outside [0, horizon].
std::pair<Vector, Vector> trajectory_at(const SolutionState& s, double t);

}  // namespace sclp::core
