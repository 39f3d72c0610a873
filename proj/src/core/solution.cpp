#include "sclp/core/solution.hpp"

#include <algorithm>
#include <stdexcept>

namespace sclp::core {

bool BaseSignature::state_basic(int k) const {
    return std::binary_search(K_set.begin(), K_set.end(), k);
}

bool BaseSignature::control_basic(int j) const {
    return !std::binary_search(J_set.begin(), J_set.end(), j);
}

namespace {

// Elements of a minus b, both sorted.
std::vector<int> set_minus(const std::vector<int>& a, const std::vector<int>& b) {
    std::vector<int> out;
    std::set_difference(a.begin(), a.end(), b.begin(), b.end(), std::back_inserter(out));
    return out;
}

}  // namespace

bool adjacent(const BaseSignature& b1, const BaseSignature& b2) {
    // Leaving: basic in b1 and not in b2; entering: the reverse.
    const auto k_leave = set_minus(b1.K_set, b2.K_set);
    const auto k_enter = set_minus(b2.K_set, b1.K_set);
    // For controls basic means "not in J_set", so the roles flip.
    const auto j_leave = set_minus(b2.J_set, b1.J_set);
    const auto j_enter = set_minus(b1.J_set, b2.J_set);
    return k_leave.size() + j_leave.size() == 1 && k_enter.size() + j_enter.size() == 1;
}

std::pair<VarId, VarId> pivot_pair(const BaseSignature& b1, const BaseSignature& b2,
                                   int num_controls) {
    const auto k_leave = set_minus(b1.K_set, b2.K_set);
    const auto k_enter = set_minus(b2.K_set, b1.K_set);
    const auto j_leave = set_minus(b2.J_set, b1.J_set);
    const auto j_enter = set_minus(b1.J_set, b2.J_set);
    if (k_leave.size() + j_leave.size() != 1 || k_enter.size() + j_enter.size() != 1)
        throw std::logic_error("pivot_pair: bases are not adjacent");
    VarId leave = k_leave.empty() ? VarId::control(j_leave[0])
                                  : VarId::state(k_leave[0], num_controls);
    VarId enter = k_enter.empty() ? VarId::control(j_enter[0])
                                  : VarId::state(k_enter[0], num_controls);
    return {leave, enter};
}

std::vector<double> SolutionState::breakpoints() const {
    std::vector<double> t(tau.size() + 1, 0.0);
    for (Index n = 0; n < tau.size(); ++n) t[n + 1] = t[n] + tau[n];
    return t;
}

bool SolutionState::complete() const {
    const auto N = bases.size();
    return N > 0 && tau.size() == static_cast<Index>(N) && u.size() == N &&
           xdot.size() == N && p.size() == N && qdot.size() == N && x.size() == N + 1 &&
           q.size() == N + 1;
}

double evaluate_primal_objective(const SclpProblem& prob, const SolutionState& s) {
    if (!s.complete()) throw std::invalid_argument("evaluate_primal_objective: incomplete solution");
    const Index J = prob.J(), L = prob.L(), K = prob.K();
    const double T = s.horizon;
    double value = 0.0;
    const auto t = s.breakpoints();
    for (int n = 0; n < s.num_intervals(); ++n) {
        const double tn = t[n], tn1 = t[n + 1], len = s.tau[n];
        if (len == 0.0) continue;
        const auto u_real = s.u[n].head(J);
        // int_{tn}^{tn1} (gamma + (T-t)c)'u dt
        value += prob.gamma.dot(u_real) * len;
        value += prob.c.dot(u_real) * (T * len - 0.5 * (tn1 * tn1 - tn * tn));
        if (L > 0) {
            // d'x over the interval; x is linear so the trapezoid is exact.
            const auto x_lo = s.x[n].segment(K, L);
            const auto x_hi = s.x[n + 1].segment(K, L);
            value += 0.5 * len * prob.d.dot(x_lo + x_hi);
        }
    }
    return value;
}

double evaluate_dual_objective(const SclpProblem& prob, const SolutionState& s) {
    if (!s.complete()) throw std::invalid_argument("evaluate_dual_objective: incomplete solution");
    const Index K = prob.K(), J = prob.J(), I = prob.I();
    const double T = s.horizon;
    double value = 0.0;
    const auto t = s.breakpoints();
    for (int n = 0; n < s.num_intervals(); ++n) {
        const double tn = t[n], tn1 = t[n + 1], len = s.tau[n];
        if (len == 0.0) continue;
        // Interval n occupies reversed time (T-tn1, T-tn); p is constant there
        // and q runs linearly between q[n+1] and q[n].
        const auto p_real = s.p[n].head(K);
        value += prob.alpha.dot(p_real) * len;
        value += prob.a.dot(p_real) * 0.5 * (tn1 * tn1 - tn * tn);
        value += 0.5 * len * prob.b.dot(s.q[n].segment(J, I) + s.q[n + 1].segment(J, I));
    }
    return value;
}

double evaluate_holding_objective(const SclpProblem& prob, const SolutionState& s) {
    if (!prob.applied) throw std::invalid_argument("problem carries no applied costs");
    if (!s.complete()) throw std::invalid_argument("evaluate_holding_objective: incomplete solution");
    const Index K = prob.K(), J = prob.J();
    const auto& h = prob.applied->h;
    const auto& g = prob.applied->g;
    double value = 0.0;
    for (int n = 0; n < s.num_intervals(); ++n) {
        const double len = s.tau[n];
        if (len == 0.0) continue;
        value += 0.5 * len * h.dot(s.x[n].head(K) + s.x[n + 1].head(K));
        value += len * g.dot(s.u[n].head(J));
    }
    return value;
}

std::pair<Vector, Vector> trajectory_at(const SolutionState& s, double t) {
    if (t < 0.0 || t > s.horizon * (1 + 1e-12) + 1e-300)
        throw std::out_of_range("trajectory_at: t outside [0, horizon]");
    t = std::min(t, s.horizon);
    const auto bp = s.breakpoints();
    // Right-continuous: pick the first interval whose right end exceeds t.
    int n = s.num_intervals() - 1;
    for (int m = 0; m < s.num_intervals(); ++m) {
        if (t < bp[m + 1]) {
            n = m;
            break;
        }
    }
    Vector x = s.x[n] + (t - bp[n]) * s.xdot[n];
    return {std::move(x), s.u[n]};
}

}  // namespace sclp::core
