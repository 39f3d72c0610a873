#pragma once

#include <optional>
#include <vector>

#include "sclp/core/solution.hpp"
#include "sclp/engine/rates.hpp"
#include "sclp/lp/pfi.hpp"

namespace sclp::engine {

// One equation of the breakpoint system: the named variable's accumulated
// value vanishes at breakpoint `pos`.  A state row sums xdot over intervals
// before pos; a dual row sums qdot over intervals from pos on.  Rows keep
// their defining variable across one-for-one basis replacements; only their
// positions and one interval column change, which is what makes the
// product-form update applicable there.
struct BreakpointRow {
    VarId var;
    int pos = 0;
};

class BreakpointSystem {
  public:
    // Full assembly from the solution's pivot chain; factorizes from scratch.
    void rebuild(const RatesLpData& rl, const core::SolutionState& s);

    // PFI path for a one-for-one basis replacement at `interval`: the two
    // defining rows are re-positioned by matching their variables against the
    // new pivots and column `interval` is recomputed.  Throws
    // SingularMatrixError if the update degenerates.
    void apply_simple_replace(int interval, const core::SolutionState& s);

    bool valid() const { return n_ > 0; }
    int num_intervals() const { return n_; }
    int eta_count() const { return factor_ ? factor_->eta_count() : 0; }
    const std::vector<BreakpointRow>& rows() const { return rows_; }

    struct TauSolution {
        Vector tau;
        Vector delta_tau;
    };
    // Interval lengths and parametric derivatives at the given boundary data.
    // Throws SingularMatrixError on a degenerate system.
    TauSolution solve(const Vector& x0, const Vector& qN, const Vector& dx0,
                      const Vector& dqN, double horizon, double dT) const;

    Vector solve_delta(const Vector& dx0, const Vector& dqN, double dT) const;

    double residual(const Vector& tau, const Vector& x0, const Vector& qN,
                    double horizon) const;

  private:
    Vector build_column(int interval, const core::SolutionState& s) const;
    Vector build_rhs(const Vector& x0, const Vector& qN, double horizon) const;

    const RatesLpData* rl_ = nullptr;
    std::vector<BreakpointRow> rows_;  // N-1 rows; the last matrix row is the horizon
    std::optional<lp::PfiLu> factor_;
    int n_ = 0;
};

}  // namespace sclp::engine
