#pragma once

#include <optional>
#include <string>
#include <vector>

#include "sclp/types.hpp"

namespace sclp::core {

// Costs of the applied form  min int h'x(t) + g'u(t) dt.  Kept alongside the
// transformed problem so both objectives stay reportable.
struct AppliedCosts {
    Vector h;                 // holding cost per fluid unit per time, length K
    Vector g;                 // operating cost per unit processed, length J
    double objective_constant = 0.0;  // h'(alpha*T + a*T^2/2)
};

// Computes h'(alpha*T + a*T^2/2).  Single definition so the stored constant
// can be compared bitwise against a recomputation.
double applied_objective_constant(const Vector& h, const Vector& alpha, const Vector& a,
                                  double T);

// Data of the separated continuous linear program
//
//   max  int_0^T (gamma' + (T-t)c') u(t) + d' x(t) dt
//   s.t. int_0^t G u(s) ds + F x(t) <= alpha + a t
//        H u(t) <= b,   x(t), u(t) >= 0.
//
// G is KxJ, H is IxJ, F is KxL; F and d may be empty (L = 0).
struct SclpProblem {
    Matrix G;
    Matrix H;
    Matrix F;
    Vector a;      // length K
    Vector b;      // length I
    Vector c;      // length J
    Vector d;      // length L
    Vector alpha;  // length K
    Vector gamma;  // length J
    double T = 0.0;

    std::optional<AppliedCosts> applied;

    Index K() const { return G.rows(); }
    Index J() const { return G.cols(); }
    Index I() const { return H.rows(); }
    Index L() const { return F.cols(); }

    VarSpace var_space() const {
        return VarSpace{static_cast<int>(J() + I()), static_cast<int>(K() + L())};
    }
};

struct ValidationReport {
    bool valid = true;
    std::vector<std::string> violations;

    void fail(std::string msg) {
        valid = false;
        violations.push_back(std::move(msg));
    }
};

// Structural checks: dimension consistency, b > 0, alpha >= 0, T > 0 and the
// empty-F/d conventions.  Feasibility detection is left to the solver.
ValidationReport validate_problem(const SclpProblem& p);

struct TransformedObjective {
    Vector gamma;
    Vector c;
    double constant = 0.0;
};

// Rewrites the applied objective min int h'x + g'u dt into the SCLP form:
// gamma = -g, c' = h'G, constant = h'(alpha*T + a*T^2/2).  The minimal
// holding cost is then  constant - (optimal SCLP value).
// Throws std::invalid_argument on dimension mismatch.
TransformedObjective transform_applied_objective(const Vector& h, const Vector& g,
                                                 const Matrix& G, const Vector& alpha,
                                                 const Vector& a, double T);

// Convenience constructor for problems given in applied (holding-cost) form.
SclpProblem make_applied_problem(Matrix G, Matrix H, Vector a, Vector b, Vector alpha,
                                 double T, Vector h, Vector g);

}  // namespace sclp::core
