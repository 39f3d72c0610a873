#include "sclp/engine/certificate.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

namespace sclp::engine {

using core::SclpProblem;
using core::SolutionState;

namespace {

std::string at(const char* what, int n, int idx) {
    std::ostringstream os;
    os << what << " at breakpoint " << n << ", component " << idx;
    return os.str();
}

}  // namespace

CertificateReport check_certificate(const SclpProblem& prob, const SolutionState& s,
                                    const CertificateTolerances& tol) {
    CertificateReport r;
    if (!s.complete()) {
        r.violations.push_back("solution is incomplete");
        return r;
    }
    const Index K = prob.K(), J = prob.J(), I = prob.I(), L = prob.L();
    const int N = s.num_intervals();

    // (i) Compatibility with the boundary: positive x0 states keep a basic
    // slope in the first interval; positive qN duals keep their control at
    // zero in the last interval.
    r.compatible = true;
    for (Index k = 0; k < s.x0.size(); ++k) {
        if (s.x0[k] > tol.zero_tol && !s.bases.front().state_basic(static_cast<int>(k))) {
            r.compatible = false;
            r.violations.push_back("boundary compatibility: x0 state " +
                                   std::to_string(k) + " not basic in B_1");
        }
    }
    for (Index j = 0; j < s.qN.size(); ++j) {
        if (s.qN[j] > tol.zero_tol && s.bases.back().control_basic(static_cast<int>(j))) {
            r.compatible = false;
            r.violations.push_back("boundary compatibility: qN dual " + std::to_string(j) +
                                   " has a basic control in B_N");
        }
    }

    // (ii) Pairwise adjacency.
    r.adjacent = true;
    for (int n = 0; n + 1 < N; ++n) {
        if (!core::adjacent(s.bases[n], s.bases[n + 1])) {
            r.adjacent = false;
            r.violations.push_back("bases " + std::to_string(n) + "," +
                                   std::to_string(n + 1) + " not adjacent");
        }
    }

    // (iii) Per-interval feasibility of both rate systems, recomputed from the
    // problem data rather than trusted from the solver.
    r.bases_feasible = true;
    const double rate_scale =
        1.0 + std::max({prob.a.lpNorm<Eigen::Infinity>(), prob.b.lpNorm<Eigen::Infinity>(),
                        prob.c.lpNorm<Eigen::Infinity>()});
    for (int n = 0; n < N; ++n) {
        const auto& u = s.u[n];
        const auto& xdot = s.xdot[n];
        const auto& p = s.p[n];
        const auto& qdot = s.qdot[n];
        for (Index j = 0; j < u.size(); ++j)
            if (u[j] < -tol.zero_tol * rate_scale) {
                r.bases_feasible = false;
                r.violations.push_back(at("negative control", n, static_cast<int>(j)));
            }
        for (Index k = 0; k < p.size(); ++k)
            if (p[k] < -tol.zero_tol * rate_scale) {
                r.bases_feasible = false;
                r.violations.push_back(at("negative dual control", n, static_cast<int>(k)));
            }
        // Primal rates: G u + xdot_slack (+F xdot_struct) = a; H u + slack = b.
        Vector res_flow = prob.G * u.head(J) + xdot.head(K) - prob.a;
        if (L > 0) res_flow += prob.F * xdot.tail(L);
        Vector res_cap = prob.H * u.head(J) + u.tail(I) - prob.b;
        // Dual rates: G'p - qdot_slack + H'qdot_cap = c (+ F'p = d block).
        Vector res_dual =
            prob.G.transpose() * p.head(K) - qdot.head(J) +
            prob.H.transpose() * qdot.tail(I) - prob.c;
        double res = std::max(res_flow.lpNorm<Eigen::Infinity>(),
                              res_cap.lpNorm<Eigen::Infinity>());
        res = std::max(res, res_dual.lpNorm<Eigen::Infinity>());
        if (L > 0) {
            Vector res_dual2 = prob.F.transpose() * p.head(K) - p.tail(L) - prob.d;
            res = std::max(res, res_dual2.lpNorm<Eigen::Infinity>());
        }
        if (res > tol.residual_tol * rate_scale) {
            r.bases_feasible = false;
            r.violations.push_back("rate residual " + std::to_string(res) +
                                   " in interval " + std::to_string(n));
        }
    }

    // (iv) Positivity of interval lengths and all breakpoint values.
    r.values_nonnegative = true;
    const double horizon_scale = 1.0 + std::abs(s.horizon);
    for (Index n = 0; n < s.tau.size(); ++n)
        if (s.tau[n] < -tol.zero_tol * horizon_scale) {
            r.values_nonnegative = false;
            r.violations.push_back("negative interval length tau[" + std::to_string(n) + "]");
        }
    double sum_tau = s.tau.sum();
    if (std::abs(sum_tau - s.horizon) > 1e-9 * horizon_scale) {
        r.values_nonnegative = false;
        r.violations.push_back("interval lengths do not sum to the horizon");
    }
    const double x_scale = 1.0 + s.x0.lpNorm<Eigen::Infinity>();
    const double q_scale = 1.0 + s.qN.lpNorm<Eigen::Infinity>();
    for (int n = 0; n <= N; ++n) {
        for (Index k = 0; k < s.x[n].size(); ++k)
            if (s.x[n][k] < -tol.zero_tol * x_scale) {
                r.values_nonnegative = false;
                r.violations.push_back(at("negative state", n, static_cast<int>(k)));
            }
        for (Index j = 0; j < s.q[n].size(); ++j)
            if (s.q[n][j] < -tol.zero_tol * q_scale) {
                r.values_nonnegative = false;
                r.violations.push_back(at("negative dual state", n, static_cast<int>(j)));
            }
    }

    // (v) Strong duality.
    r.primal_objective = evaluate_primal_objective(prob, s);
    r.dual_objective = evaluate_dual_objective(prob, s);
    r.relative_gap = std::abs(r.primal_objective - r.dual_objective) /
                     std::max(1.0, std::abs(r.primal_objective));
    r.duality_gap_ok = r.relative_gap <= tol.gap_tol;
    if (!r.duality_gap_ok)
        r.violations.push_back("duality gap " + std::to_string(r.relative_gap));

    // (vi) Complementary slackness integrals; x, q are piecewise linear and
    // p, u piecewise constant, so the trapezoid per interval is exact.
    double xp = 0.0, uq = 0.0;
    for (int n = 0; n < N; ++n) {
        const double len = s.tau[n];
        if (len <= 0.0) continue;
        xp += 0.5 * len * s.p[n].dot(s.x[n] + s.x[n + 1]);
        uq += 0.5 * len * s.u[n].dot(s.q[n] + s.q[n + 1]);
    }
    const double obj_scale = std::max(1.0, std::abs(r.primal_objective));
    r.slackness_xp = std::abs(xp) / obj_scale;
    r.slackness_uq = std::abs(uq) / obj_scale;
    r.slackness_ok = r.slackness_xp <= tol.slack_tol && r.slackness_uq <= tol.slack_tol;
    if (!r.slackness_ok)
        r.violations.push_back("complementary slackness integrals " +
                               std::to_string(r.slackness_xp) + ", " +
                               std::to_string(r.slackness_uq));
    return r;
}

}  // namespace sclp::engine
