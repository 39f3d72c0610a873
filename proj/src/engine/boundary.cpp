#include "sclp/engine/boundary.hpp"

namespace sclp::engine {

BoundaryResult solve_boundary(const core::SclpProblem& p, double zero_tol) {
    BoundaryResult out;
    const Index K = p.K(), J = p.J(), I = p.I(), L = p.L();

    if (L == 0) {
        // [I]x0 = alpha forces x0 = alpha.
        out.x0 = p.alpha;
        out.primal_status = lp::LpStatus::Optimal;
    } else {
        lp::SignRestrictedLp blp;
        blp.A = Matrix(K, K + L);
        blp.A.leftCols(K) = Matrix::Identity(K, K);
        blp.A.rightCols(L) = p.F;
        blp.rhs = p.alpha;
        blp.obj = Vector::Zero(K + L);
        blp.obj.tail(L) = p.d;
        blp.maximize = true;
        blp.domain.assign(K + L, lp::VarDomain::NonNegative);
        auto sol = lp::solve_lp(blp);
        out.primal_status = sol.status;
        if (sol.status != lp::LpStatus::Optimal) return out;
        out.x0 = sol.primal;
    }

    {
        // Variables ordered like the dual states q_j: slacks q_1..q_J then the
        // capacity duals q_{J+1}..q_{J+I}; rows are H'q_u - q_s = gamma.
        lp::SignRestrictedLp blp;
        blp.A = Matrix(J, J + I);
        blp.A.leftCols(J) = -Matrix::Identity(J, J);
        blp.A.rightCols(I) = p.H.transpose();
        blp.rhs = p.gamma;
        blp.obj = Vector::Zero(J + I);
        blp.obj.tail(I) = p.b;
        blp.maximize = false;
        blp.domain.assign(J + I, lp::VarDomain::NonNegative);
        auto sol = lp::solve_lp(blp);
        out.dual_status = sol.status;
        if (sol.status != lp::LpStatus::Optimal) return out;
        out.qN = sol.primal;
    }

    for (Index k = 0; k < out.x0.size(); ++k)
        if (out.x0[k] > zero_tol) out.K0.push_back(static_cast<int>(k));
    for (Index j = 0; j < out.qN.size(); ++j)
        if (out.qN[j] > zero_tol) out.JN1.push_back(static_cast<int>(j));
    return out;
}

}  // namespace sclp::engine
