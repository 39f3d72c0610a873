#include "sclp/engine/rolling.hpp"

#include <algorithm>
#include <stdexcept>

namespace sclp::engine {

RollingResult resolve_rolling_horizon(const core::SclpProblem& p,
                                      const core::SolutionState& s, double t0,
                                      const SolverConfig& cfg) {
    if (t0 < 0.0 || t0 >= p.T)
        throw std::out_of_range("resolve_rolling_horizon: t0 outside [0, T)");

    RollingResult out;
    auto [x_t0, u_t0] = core::trajectory_at(s, t0);
    (void)u_t0;

    out.shifted = p;
    out.shifted.alpha = x_t0.head(p.K()).cwiseMax(0.0);
    if (p.applied) {
        out.shifted.applied->objective_constant = core::applied_objective_constant(
            out.shifted.applied->h, out.shifted.alpha, out.shifted.a, out.shifted.T);
    }
    if (t0 == 0.0) {
        out.result.status = SolveStatus::Optimal;
        out.result.state = s;
        out.result.certificate = check_certificate(p, s);
        out.warm_start_used = true;
        return out;
    }

    // Truncate: keep the interval containing t0 (shortened) and everything
    // after it.  Zero-length leading intervals are dropped.
    const auto bp = s.breakpoints();
    int m = s.num_intervals() - 1;
    for (int i = 0; i < s.num_intervals(); ++i) {
        if (t0 < bp[i + 1]) {
            m = i;
            break;
        }
    }
    core::SolutionState start;
    const int N = s.num_intervals();
    start.bases.assign(s.bases.begin() + m, s.bases.end());
    start.u.assign(s.u.begin() + m, s.u.end());
    start.xdot.assign(s.xdot.begin() + m, s.xdot.end());
    start.p.assign(s.p.begin() + m, s.p.end());
    start.qdot.assign(s.qdot.begin() + m, s.qdot.end());
    start.tau = Vector(N - m);
    start.tau[0] = bp[m + 1] - t0;
    for (int i = m + 1; i < N; ++i) start.tau[i - m] = s.tau[i];
    start.delta_tau = Vector::Zero(N - m);
    start.x0 = x_t0;
    start.qN = s.qN;
    start.theta = 0.0;
    start.horizon = p.T - t0;

    core::ParametricLine line;
    line.x0_init = line.x0_goal = start.x0;
    line.qN_init = line.qN_goal = s.qN;
    line.T_init = p.T - t0;
    line.T_goal = p.T;

    // Warm-start compatibility can fail when a state is parked at a positive
    // level with a nonbasic slope at t0; fall back to a cold solve then.
    bool compatible = true;
    for (Index k = 0; k < start.x0.size(); ++k) {
        if (start.x0[k] > cfg.tolerances.zero_tol &&
            !start.bases.front().state_basic(static_cast<int>(k)))
            compatible = false;
    }
    if (compatible) {
        out.warm_start_used = true;
        out.result = solve_along_line(out.shifted, std::move(start), line, cfg);
    } else {
        out.warm_start_used = false;
        out.result = solve(out.shifted, cfg);
    }
    return out;
}

}  // namespace sclp::engine
