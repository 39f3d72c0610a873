#include "sclp/engine/rates.hpp"

#include <algorithm>
#include <cmath>

namespace sclp::engine {

RatesLpData build_rates_data(const core::SclpProblem& p) {
    RatesLpData rl;
    rl.K = p.K();
    rl.I = p.I();
    rl.J = p.J();
    rl.L = p.L();
    rl.space = p.var_space();
    const Index m = rl.K + rl.I;
    const Index n = rl.space.total();
    rl.cols = Matrix::Zero(m, n);
    rl.rhs = Vector(m);
    rl.obj = Vector::Zero(n);

    // Control columns: u_j -> [G_j; H_j]; slack u_{J+i} -> [0; e_i].
    rl.cols.block(0, 0, rl.K, rl.J) = p.G;
    rl.cols.block(rl.K, 0, rl.I, rl.J) = p.H;
    for (Index i = 0; i < rl.I; ++i) rl.cols(rl.K + i, rl.J + i) = 1.0;
    // State columns: xdot_k -> [e_k; 0]; structural xdot_{K+l} -> [F_l; 0].
    const Index s0 = rl.J + rl.I;
    for (Index k = 0; k < rl.K; ++k) rl.cols(k, s0 + k) = 1.0;
    if (rl.L > 0) rl.cols.block(0, s0 + rl.K, rl.K, rl.L) = p.F;

    rl.rhs.head(rl.K) = p.a;
    rl.rhs.tail(rl.I) = p.b;
    rl.obj.head(rl.J) = p.c;
    if (rl.L > 0) rl.obj.segment(s0 + rl.K, rl.L) = p.d;
    return rl;
}

namespace {

std::vector<int> basic_variable_ids(const RatesLpData& rl, const core::BaseSignature& sig) {
    std::vector<int> ids;
    const int nc = rl.space.num_controls;
    for (int j = 0; j < nc; ++j)
        if (sig.control_basic(j)) ids.push_back(j);
    for (int k : sig.K_set) ids.push_back(nc + k);
    return ids;
}

}  // namespace

bool signature_is_square(const RatesLpData& rl, const core::BaseSignature& sig) {
    const auto ids = basic_variable_ids(rl, sig);
    return static_cast<Index>(ids.size()) == rl.K + rl.I;
}

BasisValues evaluate_signature(const RatesLpData& rl, const core::BaseSignature& sig) {
    const Index m = rl.K + rl.I;
    const auto ids = basic_variable_ids(rl, sig);
    if (static_cast<Index>(ids.size()) != m)
        throw lp::SingularMatrixError("evaluate_signature: signature not square");

    Matrix B(m, m);
    Vector obj_b(m);
    for (Index i = 0; i < m; ++i) {
        B.col(i) = rl.cols.col(ids[i]);
        obj_b[i] = rl.obj[ids[i]];
    }
    lp::PfiLu factor(std::move(B));
    const Vector z = factor.solve(rl.rhs);
    const Vector y = factor.solve_transpose(obj_b);

    BasisValues out;
    out.u = Vector::Zero(rl.space.num_controls);
    out.xdot = Vector::Zero(rl.space.num_states);
    for (Index i = 0; i < m; ++i) {
        const VarId v{ids[i]};
        if (rl.space.is_control(v))
            out.u[rl.space.control_index(v)] = z[i];
        else
            out.xdot[rl.space.state_index(v)] = z[i];
    }
    // Dual controls: p_k = y_k on the flow rows, with the structural block
    // p_{K+l} = F_l'y - d_l; dual slopes qdot_j = col_j'y - obj_j.
    out.p = Vector::Zero(rl.space.num_states);
    out.p.head(rl.K) = y.head(rl.K);
    if (rl.L > 0) {
        const Index s0 = rl.J + rl.I;
        out.p.tail(rl.L) =
            rl.cols.block(0, s0 + rl.K, rl.K, rl.L).transpose() * y.head(rl.K) -
            rl.obj.segment(s0 + rl.K, rl.L);
    }
    out.qdot = rl.cols.leftCols(rl.space.num_controls).transpose() * y -
               rl.obj.head(rl.space.num_controls);
    return out;
}

lp::SignRestrictedLp make_rates_lp(const RatesLpData& rl, const std::vector<int>& K_free,
                                   const std::vector<int>& J_zero) {
    lp::SignRestrictedLp out;
    out.A = rl.cols;
    out.rhs = rl.rhs;
    out.obj = rl.obj;
    out.maximize = true;
    out.domain.assign(rl.space.total(), lp::VarDomain::NonNegative);
    const int nc = rl.space.num_controls;
    for (int k : K_free) out.domain[nc + k] = lp::VarDomain::Free;
    for (int j : J_zero) out.domain[j] = lp::VarDomain::FixedZero;
    return out;
}

RatesSolveResult solve_rates_lp(const RatesLpData& rl, const std::vector<int>& K_free,
                                const std::vector<int>& J_zero,
                                const lp::SimplexConfig& cfg) {
    RatesSolveResult out;
    auto lp_obj = make_rates_lp(rl, K_free, J_zero);
    auto sol = lp::solve_lp(lp_obj, cfg);
    out.status = sol.status;
    if (sol.status != lp::LpStatus::Optimal) return out;

    // Promote nonbasic free variables via degenerate exchanges so the
    // signature carries every unrestricted slope it can.
    auto& dict = sol.dict;
    for (int v = 0; v < rl.space.total(); ++v) {
        if (lp_obj.domain[v] != lp::VarDomain::Free || dict.contains(v)) continue;
        Vector w = dict.factor.solve(lp_obj.A.col(v));
        int best_pos = -1;
        double best_piv = cfg.pivot_tol * 100;
        for (Index i = 0; i < w.size(); ++i) {
            const int bv = dict.basic[i];
            if (lp_obj.domain[bv] == lp::VarDomain::Free) continue;
            if (std::abs(dict.basic_values[i]) > cfg.feas_tol) continue;
            if (std::abs(w[i]) > best_piv) {
                best_piv = std::abs(w[i]);
                best_pos = static_cast<int>(i);
            }
        }
        if (best_pos >= 0) {
            try {
                dict = lp::pivot(lp_obj, dict, dict.basic[best_pos], v, cfg);
            } catch (const lp::NumericalPivotError&) {
            } catch (const lp::SingularMatrixError&) {
            }
        }
    }

    core::BaseSignature sig;
    const int nc = rl.space.num_controls;
    std::vector<bool> control_in(nc, false);
    for (int var : dict.basic) {
        if (var < nc)
            control_in[var] = true;
        else
            sig.K_set.push_back(var - nc);
    }
    for (int j = 0; j < nc; ++j)
        if (!control_in[j]) sig.J_set.push_back(j);
    std::sort(sig.K_set.begin(), sig.K_set.end());

    out.signature = std::move(sig);
    out.values = evaluate_signature(rl, out.signature);
    return out;
}

}  // namespace sclp::engine
