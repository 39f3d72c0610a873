#include "sclp/disc/discretize.hpp"

#include <algorithm>
#include <cmath>

#include "sclp/disc/ipm.hpp"
#include "sclp/lp/simplex.hpp"

namespace sclp::disc {

using core::SclpProblem;

namespace {

void fill_costs(const SclpProblem& p, DiscreteLp& lp) {
    const int N = lp.N;
    const double tau = lp.tau;
    const Index K = lp.K, J = lp.J;
    lp.cost.assign(lp.num_cols, 0.0);
    if (p.applied) {
        lp.holding_form = true;
        const auto& h = p.applied->h;
        const auto& g = p.applied->g;
        for (int n = 0; n < N; ++n) {
            for (Index j = 0; j < J; ++j) lp.cost[lp.col_u(n, j)] = tau * g[j];
            const double w = (n + 1 < N) ? 1.0 : 0.5;  // trapezoid weights
            for (Index k = 0; k < K; ++k) lp.cost[lp.col_x(n, k)] = tau * w * h[k];
        }
        lp.objective_offset = 0.5 * tau * p.applied->h.dot(p.alpha);
        lp.objective_constant =
            core::applied_objective_constant(p.applied->h, p.alpha, p.a, p.T);
    } else {
        // Maximize the SCLP objective; stored negated for minimization.
        lp.holding_form = false;
        for (int n = 0; n < N; ++n) {
            const double w = p.T - tau * (n + 0.5);
            for (Index j = 0; j < J; ++j)
                lp.cost[lp.col_u(n, j)] = -tau * (p.gamma[j] + p.c[j] * w);
        }
    }
}

DiscreteLp build_common(const SclpProblem& p, int N, DiscreteLp::Form form) {
    if (p.L() != 0 || p.d.size() != 0)
        throw std::invalid_argument("discretization supports empty F and d only");
    if (N < 1) throw std::invalid_argument("discretization needs N >= 1");
    DiscreteLp lp;
    lp.form = form;
    lp.N = N;
    lp.tau = p.T / N;
    lp.K = p.K();
    lp.J = p.J();
    lp.I = p.I();
    lp.num_cols = N * static_cast<int>(lp.J + lp.K);
    lp.num_rows = N * static_cast<int>(lp.K + lp.I);
    lp.rhs.assign(lp.num_rows, 0.0);
    fill_costs(p, lp);
    return lp;
}

}  // namespace

DiscreteLp build_discretized_lp(const SclpProblem& p, int N) {
    DiscreteLp lp = build_common(p, N, DiscreteLp::Form::FiniteDifferences);
    const Index K = lp.K, J = lp.J, I = lp.I;
    const double tau = lp.tau;
    for (int n = 0; n < N; ++n) {
        for (Index k = 0; k < K; ++k) {
            const int row = lp.row_flow(n, static_cast<int>(k));
            for (Index j = 0; j < J; ++j)
                if (p.G(k, j) != 0.0)
                    lp.entries.push_back({row, lp.col_u(n, static_cast<int>(j)),
                                          tau * p.G(k, j)});
            lp.entries.push_back({row, lp.col_x(n, static_cast<int>(k)), 1.0});
            if (n > 0)
                lp.entries.push_back({row, lp.col_x(n - 1, static_cast<int>(k)), -1.0});
            lp.rhs[row] = tau * p.a[k] + (n == 0 ? p.alpha[k] : 0.0);
        }
        for (Index i = 0; i < I; ++i) {
            const int row = lp.row_cap(n, static_cast<int>(i));
            for (Index j = 0; j < J; ++j)
                if (p.H(i, j) != 0.0)
                    lp.entries.push_back({row, lp.col_u(n, static_cast<int>(j)), p.H(i, j)});
            lp.rhs[row] = p.b[i];
        }
    }
    return lp;
}

DiscreteLp build_naive_discretized_lp(const SclpProblem& p, int N) {
    DiscreteLp lp = build_common(p, N, DiscreteLp::Form::Naive);
    const Index K = lp.K, J = lp.J, I = lp.I;
    const double tau = lp.tau;
    for (int n = 0; n < N; ++n) {
        for (Index k = 0; k < K; ++k) {
            const int row = lp.row_flow(n, static_cast<int>(k));
            for (int m = 0; m <= n; ++m)
                for (Index j = 0; j < J; ++j)
                    if (p.G(k, j) != 0.0)
                        lp.entries.push_back({row, lp.col_u(m, static_cast<int>(j)),
                                              tau * p.G(k, j)});
            lp.entries.push_back({row, lp.col_x(n, static_cast<int>(k)), 1.0});
            lp.rhs[row] = p.alpha[k] + tau * p.a[k] * (n + 1);
        }
        for (Index i = 0; i < I; ++i) {
            const int row = lp.row_cap(n, static_cast<int>(i));
            for (Index j = 0; j < J; ++j)
                if (p.H(i, j) != 0.0)
                    lp.entries.push_back({row, lp.col_u(n, static_cast<int>(j)), p.H(i, j)});
            lp.rhs[row] = p.b[i];
        }
    }
    return lp;
}

double recover_holding_objective(double v_lp1, const Vector& h, const Vector& alpha,
                                 const Vector& a, double T) {
    return core::applied_objective_constant(h, alpha, a, T) - v_lp1;
}

namespace {

DiscreteSolution solve_dense(const DiscreteLp& lp, long iterations_hint) {
    // Standard form with explicit capacity slacks for the lp-kernel simplex.
    const int slack0 = lp.num_cols;
    lp::SignRestrictedLp dlp;
    dlp.A = Matrix::Zero(lp.num_rows, lp.num_cols + lp.N * lp.I);
    dlp.rhs = Vector(lp.num_rows);
    dlp.obj = Vector::Zero(lp.num_cols + lp.N * lp.I);
    dlp.maximize = false;
    dlp.domain.assign(lp.num_cols + lp.N * lp.I, lp::VarDomain::NonNegative);
    for (const auto& e : lp.entries) dlp.A(e.row, e.col) = e.value;
    for (int n = 0; n < lp.N; ++n)
        for (int i = 0; i < lp.I; ++i)
            dlp.A(lp.row_cap(n, i), slack0 + n * static_cast<int>(lp.I) + i) = 1.0;
    for (int r = 0; r < lp.num_rows; ++r) dlp.rhs[r] = lp.rhs[r];
    for (int c = 0; c < lp.num_cols; ++c) dlp.obj[c] = lp.cost[c];

    lp::SimplexConfig scfg;
    scfg.max_iterations = std::max<long>(20000, iterations_hint);
    auto sol = lp::solve_lp(dlp, scfg);
    if (sol.status != lp::LpStatus::Optimal)
        throw std::runtime_error(std::string("discretized LP: ") + lp::to_string(sol.status));

    DiscreteSolution out;
    out.solver_id = "dense-simplex";
    out.iterations = sol.iterations;
    out.value = sol.objective + lp.objective_offset;
    out.u.resize(lp.N);
    out.x.resize(lp.N + 1);
    for (int n = 0; n < lp.N; ++n) {
        out.u[n] = Vector(lp.J);
        for (int j = 0; j < lp.J; ++j) out.u[n][j] = sol.primal[lp.col_u(n, j)];
        out.x[n + 1] = Vector(lp.K);
        for (int k = 0; k < lp.K; ++k) out.x[n + 1][k] = sol.primal[lp.col_x(n, k)];
    }
    return out;
}

}  // namespace

DiscreteSolution solve_discretized(const DiscreteLp& lp, const DiscretizeConfig& cfg) {
    const long nvars = static_cast<long>(lp.num_cols);
    if (nvars > cfg.variable_budget)
        throw BudgetExceeded("discretized LP exceeds the variable budget (" +
                             std::to_string(nvars) + " > " +
                             std::to_string(cfg.variable_budget) +
                             "); emit an MPS file for an external solver");
    if (nvars <= cfg.dense_variable_budget || lp.form == DiscreteLp::Form::Naive)
        return solve_dense(lp, 100L * (lp.num_rows + nvars));

    auto res = solve_staircase_ipm(lp, cfg.ipm_tolerance, cfg.ipm_max_iterations);
    if (!res.converged)
        throw std::runtime_error("staircase interior-point solve did not converge");
    DiscreteSolution out;
    out.solver_id = "staircase-ipm";
    out.iterations = res.iterations;
    out.value = res.objective + lp.objective_offset;
    out.u.resize(lp.N);
    out.x.resize(lp.N + 1);
    for (int n = 0; n < lp.N; ++n) {
        out.u[n] = Vector(lp.J);
        for (int j = 0; j < lp.J; ++j) out.u[n][j] = res.z[lp.col_ipm_u(n, j)];
        out.x[n + 1] = Vector(lp.K);
        for (int k = 0; k < lp.K; ++k) out.x[n + 1][k] = res.z[lp.col_ipm_x(n, k)];
    }
    return out;
}

}  // namespace sclp::disc
