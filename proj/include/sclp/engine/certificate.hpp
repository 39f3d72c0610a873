#pragma once

#include <string>
#include <vector>

#include "sclp/core/problem.hpp"
#include "sclp/core/solution.hpp"

namespace sclp::engine {

// Full optimality verification from solution values alone: boundary
// compatibility, pairwise adjacency, per-interval primal/dual feasibility,
// positivity of all breakpoint values and interval lengths, strong-duality
// gap and the complementary-slackness integrals.
struct CertificateReport {
    bool compatible = false;      // K0 within K_1 and J_{N+1} within J_N
    bool adjacent = false;        // consecutive bases exchange exactly one pair
    bool bases_feasible = false;  // u >= 0, p >= 0, residuals of both rate systems
    bool values_nonnegative = false;  // tau, x[n], q[n] above -zero_tol
    bool duality_gap_ok = false;
    bool slackness_ok = false;

    double primal_objective = 0.0;
    double dual_objective = 0.0;
    double relative_gap = 0.0;
    double slackness_xp = 0.0;  // int x(t)'p(T-t) dt, relative to objective scale
    double slackness_uq = 0.0;

    std::vector<std::string> violations;

    bool pass() const {
        return compatible && adjacent && bases_feasible && values_nonnegative &&
               duality_gap_ok && slackness_ok;
    }
};

struct CertificateTolerances {
    double zero_tol = 1e-9;      // positivity slack, scaled by value magnitudes
    double residual_tol = 1e-8;  // rate-equation residuals, relative
    double gap_tol = 1e-8;       // |primal-dual| / max(1, |primal|)
    double slack_tol = 1e-8;     // Eq-3 integrals relative to objective scale
};

CertificateReport check_certificate(const core::SclpProblem& p,
                                    const core::SolutionState& s,
                                    const CertificateTolerances& tol = {});

}  // namespace sclp::engine
