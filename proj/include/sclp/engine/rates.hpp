#pragma once

#include "sclp/core/problem.hpp"
#include "sclp/core/solution.hpp"
#include "sclp/lp/simplex.hpp"

namespace sclp::engine {

// Column data of the Rates-LP shared by every basis evaluation:
//   [G 0]u + [I F]xdot = a  (K rows),  [H I]u = b  (I rows).
// Columns are indexed by VarId: controls first, then state derivatives.
struct RatesLpData {
    Matrix cols;  // (K+I) x (J+I+K+L)
    Vector rhs;   // (a; b)
    Vector obj;   // c on real controls, d on structural states, else 0
    VarSpace space;
    Index K = 0, I = 0, J = 0, L = 0;
};

RatesLpData build_rates_data(const core::SclpProblem& p);

// Primal and dual values attached to one Rates-LP basis.
struct BasisValues {
    Vector u;     // length J+I
    Vector xdot;  // length K+L
    Vector p;     // length K+L
    Vector qdot;  // length J+I
};

// Values for the basis named by a signature (basic set = {xdot_k : k in K_set}
// + {u_j : j not in J_set}).  Throws lp::SingularMatrixError if the named
// columns do not form a basis.
BasisValues evaluate_signature(const RatesLpData& rl, const core::BaseSignature& sig);

// Signature sanity: |K_set| - |J_set| must equal K+L-(J... basis squareness.
bool signature_is_square(const RatesLpData& rl, const core::BaseSignature& sig);

struct RatesSolveResult {
    lp::LpStatus status = lp::LpStatus::Singular;
    core::BaseSignature signature;
    BasisValues values;
};

// Cold two-phase solve of Rates-LP(K_free, J_zero): xdot_k free for k in
// K_free (nonnegative otherwise), u_j fixed at zero for j in J_zero.  Free
// variables are promoted into the basis by degenerate pivots where possible
// so the returned signature reflects them.
RatesSolveResult solve_rates_lp(const RatesLpData& rl, const std::vector<int>& K_free,
                                const std::vector<int>& J_zero,
                                const lp::SimplexConfig& cfg = {});

// The sign-restricted LP object itself (exposed for reuse by dictionaries).
lp::SignRestrictedLp make_rates_lp(const RatesLpData& rl, const std::vector<int>& K_free,
                                   const std::vector<int>& J_zero);

}  // namespace sclp::engine
