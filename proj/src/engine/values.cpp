#include "sclp/engine/values.hpp"

#include <algorithm>
#include <cmath>

namespace sclp::engine {

using core::SolutionState;

void recompute_breakpoint_values(SolutionState& s, const Vector& dx0, const Vector& dqN) {
    const int N = s.num_intervals();
    s.x.assign(N + 1, Vector());
    s.q.assign(N + 1, Vector());
    s.delta_x.assign(N + 1, Vector());
    s.delta_q.assign(N + 1, Vector());

    s.x[0] = s.x0;
    s.delta_x[0] = dx0;
    for (int n = 0; n < N; ++n) {
        s.x[n + 1] = s.x[n] + s.tau[n] * s.xdot[n];
        s.delta_x[n + 1] = s.delta_x[n] + s.delta_tau[n] * s.xdot[n];
    }
    s.q[N] = s.qN;
    s.delta_q[N] = dqN;
    for (int n = N - 1; n >= 0; --n) {
        s.q[n] = s.q[n + 1] + s.tau[n] * s.qdot[n];
        s.delta_q[n] = s.delta_q[n + 1] + s.delta_tau[n] * s.qdot[n];
    }
}

namespace {

// Tracked minima of a piecewise linear function given per-interval slopes.
// Sign classification is exact: only nonbasic (identically zero) slopes count
// as flat, so a valley is recorded once at its first breakpoint.
std::vector<int> scan_minima_forward(const std::vector<Vector>& slopes, int comp, int N) {
    std::vector<int> out;
    double last_sign = 0.0;  // sign of the last nonzero slope seen
    for (int n = 1; n <= N; ++n) {
        const double before = slopes[n - 1][comp];
        if (before != 0.0) last_sign = before;
        if (last_sign >= 0.0) continue;
        if (n == N) {
            out.push_back(N);  // decreasing into the end of the horizon
            break;
        }
        // Find the next nonzero slope at or after interval n.
        double next_sign = 0.0;
        for (int m = n; m < N; ++m) {
            if (slopes[m][comp] != 0.0) {
                next_sign = slopes[m][comp];
                break;
            }
        }
        if (next_sign > 0.0) {
            out.push_back(n);
            last_sign = next_sign;
        } else if (next_sign == 0.0) {
            out.push_back(n);  // flat to the end after a descent
            break;
        }
    }
    return out;
}

// Dual states accumulate backward: on the reversed clock interval n comes
// before breakpoint n, interval n-1 after, so the scan mirrors.
std::vector<int> scan_minima_backward(const std::vector<Vector>& slopes, int comp, int N) {
    std::vector<int> out;
    double last_sign = 0.0;
    for (int n = N - 1; n >= 0; --n) {
        const double before = slopes[n][comp];
        if (before != 0.0) last_sign = before;
        if (last_sign >= 0.0) continue;
        if (n == 0) {
            out.push_back(0);
            break;
        }
        double next_sign = 0.0;
        for (int m = n - 1; m >= 0; --m) {
            if (slopes[m][comp] != 0.0) {
                next_sign = slopes[m][comp];
                break;
            }
        }
        if (next_sign > 0.0) {
            out.push_back(n);
            last_sign = next_sign;
        } else if (next_sign == 0.0) {
            out.push_back(n);
            break;
        }
    }
    std::sort(out.begin(), out.end());
    return out;
}

}  // namespace

void rebuild_minima(SolutionState& s) {
    const int N = s.num_intervals();
    const int num_states = s.x0.size();
    const int num_duals = s.qN.size();
    s.x_minima.assign(num_states, {});
    s.q_minima.assign(num_duals, {});
    for (int k = 0; k < num_states; ++k) s.x_minima[k] = scan_minima_forward(s.xdot, k, N);
    for (int j = 0; j < num_duals; ++j) s.q_minima[j] = scan_minima_backward(s.qdot, j, N);
}

namespace {

// Tracked-minimum test at one breakpoint.  Forward (primal) orientation: the
// descent must end exactly at n and the next nonzero slope, if any, ascend.
bool is_min_forward(const std::vector<Vector>& slopes, int comp, int N, int n) {
    if (n < 1 || n > N) return false;
    if (!(slopes[n - 1][comp] < 0.0)) return false;
    for (int m = n; m < N; ++m) {
        const double sl = slopes[m][comp];
        if (sl != 0.0) return sl > 0.0;
    }
    return true;  // flat (or nothing) to the end
}

bool is_min_backward(const std::vector<Vector>& slopes, int comp, int N, int n) {
    if (n < 0 || n > N - 1) return false;
    if (!(slopes[n][comp] < 0.0)) return false;
    for (int m = n - 1; m >= 0; --m) {
        const double sl = slopes[m][comp];
        if (sl != 0.0) return sl > 0.0;
    }
    return true;
}

}  // namespace

void update_minima_after_edit(SolutionState& s, int lo, int hi, int shift) {
    // Intervals [lo, hi] (post-edit indexing) carry new slopes; the edit
    // shifted every older interval index beyond the window by `shift`.  A
    // breakpoint's tracked-minimum status depends on the slope just before it
    // and on the zero-slope run following it, so only breakpoints adjacent to
    // the window or reaching it across a flat run can change.
    const int N = s.num_intervals();
    const int hi_old = hi - shift;

    auto patch = [&](std::vector<int>& mins, const std::vector<Vector>& slopes, int comp,
                     bool forward) {
        // Walk outward across exact zero slopes to the nearest breakpoint
        // whose lookahead can reach the edited window.
        int reach_lo = lo;
        if (forward) {
            int m = lo - 1;
            while (m >= 0 && slopes[m][comp] == 0.0) --m;
            reach_lo = m + 1;
        }
        int reach_hi = hi + 1;
        if (!forward) {
            int m = hi + 1;
            while (m < N && slopes[m][comp] == 0.0) ++m;
            reach_hi = m;
        }
        std::vector<int> out;
        for (int bp : mins) {
            if (bp <= lo && bp < reach_lo) {
                out.push_back(bp);
            } else if (bp > hi_old + 1) {
                const int moved = bp + shift;
                if (moved > reach_hi) out.push_back(moved);
            }
            // Breakpoints inside the old window or the reach zone are rescanned.
        }
        for (int bp = std::max(forward ? 1 : 0, reach_lo); bp <= std::min(N, reach_hi); ++bp) {
            const bool hit = forward ? is_min_forward(slopes, comp, N, bp)
                                     : is_min_backward(slopes, comp, N, bp);
            if (hit) out.push_back(bp);
        }
        std::sort(out.begin(), out.end());
        out.erase(std::unique(out.begin(), out.end()), out.end());
        mins = std::move(out);
    };

    for (size_t k = 0; k < s.x_minima.size(); ++k)
        patch(s.x_minima[k], s.xdot, static_cast<int>(k), true);
    for (size_t j = 0; j < s.q_minima.size(); ++j)
        patch(s.q_minima[j], s.qdot, static_cast<int>(j), false);
}

ThetaStep find_next_theta(const core::SolutionState& s, const ToleranceState& tol) {
    ThetaStep out;
    const int N = s.num_intervals();
    const double remaining = 1.0 - s.theta;

    std::vector<ThetaCandidate> all;
    double best = std::numeric_limits<double>::infinity();

    const double tau_scale = std::max(1.0, s.horizon);
    for (int i = 0; i < N; ++i) {
        if (s.delta_tau[i] < -tol.zero_tol * tau_scale) {
            const double ratio = std::max(0.0, s.tau[i]) / (-s.delta_tau[i]);
            all.push_back({ThetaCandidate::Kind::Interval, i, i, ratio});
            best = std::min(best, ratio);
        }
    }
    for (size_t k = 0; k < s.x_minima.size(); ++k) {
        for (int n : s.x_minima[k]) {
            const double dx = s.delta_x[n][k];
            const double val = s.x[n][k];
            if (dx < -tol.zero_tol * std::max(1.0, std::abs(val))) {
                const double ratio = std::max(0.0, val) / (-dx);
                all.push_back({ThetaCandidate::Kind::StateMin, static_cast<int>(k), n, ratio});
                best = std::min(best, ratio);
            }
        }
    }
    for (size_t j = 0; j < s.q_minima.size(); ++j) {
        for (int n : s.q_minima[j]) {
            const double dq = s.delta_q[n][j];
            const double val = s.q[n][j];
            if (dq < -tol.zero_tol * std::max(1.0, std::abs(val))) {
                const double ratio = std::max(0.0, val) / (-dq);
                all.push_back({ThetaCandidate::Kind::DualMin, static_cast<int>(j), n, ratio});
                best = std::min(best, ratio);
            }
        }
    }

    if (all.empty() || best >= remaining - tol.compare_tol) {
        out.theta_next = 1.0;
        out.increment = remaining;
        return out;
    }

    out.increment = best;
    out.theta_next = s.theta + best;
    const double window = tol.compare_tol * (1.0 + best);
    for (auto& c : all)
        if (c.ratio <= best + window) out.candidates.push_back(c);
    return out;
}

}  // namespace sclp::engine
