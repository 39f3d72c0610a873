#include "sclp/engine/breakpoints.hpp"

#include <stdexcept>

namespace sclp::engine {

void BreakpointSystem::rebuild(const RatesLpData& rl, const core::SolutionState& s) {
    rl_ = &rl;
    n_ = s.num_intervals();
    rows_.clear();
    rows_.reserve(n_ - 1);
    for (int m = 0; m + 1 < n_; ++m) {
        auto [leave, enter] =
            core::pivot_pair(s.bases[m], s.bases[m + 1], rl.space.num_controls);
        rows_.push_back(BreakpointRow{leave, m + 1});
    }
    Matrix A(n_, n_);
    for (int i = 0; i < n_; ++i) A.col(i) = build_column(i, s);
    factor_.emplace(std::move(A));
}

Vector BreakpointSystem::build_column(int interval, const core::SolutionState& s) const {
    Vector col(n_);
    for (int r = 0; r < n_ - 1; ++r) {
        const auto& row = rows_[r];
        if (rl_->space.is_state(row.var)) {
            const int k = rl_->space.state_index(row.var);
            col[r] = interval < row.pos ? s.xdot[interval][k] : 0.0;
        } else {
            const int j = rl_->space.control_index(row.var);
            col[r] = interval >= row.pos ? s.qdot[interval][j] : 0.0;
        }
    }
    col[n_ - 1] = 1.0;  // horizon row
    return col;
}

void BreakpointSystem::apply_simple_replace(int interval, const core::SolutionState& s) {
    auto [v_left, e_left] = core::pivot_pair(s.bases[interval - 1], s.bases[interval],
                                             rl_->space.num_controls);
    auto [v_right, e_right] = core::pivot_pair(s.bases[interval], s.bases[interval + 1],
                                               rl_->space.num_controls);
    int have = 0;
    for (auto& row : rows_) {
        if (row.pos != interval && row.pos != interval + 1) continue;
        if (row.var == v_left)
            row.pos = interval;
        else if (row.var == v_right)
            row.pos = interval + 1;
        else
            throw std::logic_error("apply_simple_replace: defining variables changed");
        ++have;
    }
    if (have != 2) throw std::logic_error("apply_simple_replace: rows not found");
    factor_->replace_column(interval, build_column(interval, s));
}

Vector BreakpointSystem::build_rhs(const Vector& x0, const Vector& qN,
                                   double horizon) const {
    Vector rhs(n_);
    for (int r = 0; r < n_ - 1; ++r) {
        const auto& row = rows_[r];
        if (rl_->space.is_state(row.var))
            rhs[r] = -x0[rl_->space.state_index(row.var)];
        else
            rhs[r] = -qN[rl_->space.control_index(row.var)];
    }
    rhs[n_ - 1] = horizon;
    return rhs;
}

BreakpointSystem::TauSolution BreakpointSystem::solve(const Vector& x0, const Vector& qN,
                                                      const Vector& dx0, const Vector& dqN,
                                                      double horizon, double dT) const {
    TauSolution out;
    out.tau = factor_->solve(build_rhs(x0, qN, horizon));
    out.delta_tau = factor_->solve(build_rhs(dx0, dqN, dT));
    return out;
}

Vector BreakpointSystem::solve_delta(const Vector& dx0, const Vector& dqN,
                                     double dT) const {
    return factor_->solve(build_rhs(dx0, dqN, dT));
}

double BreakpointSystem::residual(const Vector& tau, const Vector& x0, const Vector& qN,
                                  double horizon) const {
    const Vector rhs = build_rhs(x0, qN, horizon);
    return (factor_->matrix() * tau - rhs).lpNorm<Eigen::Infinity>();
}

}  // namespace sclp::engine
