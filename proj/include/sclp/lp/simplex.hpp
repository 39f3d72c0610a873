#pragma once

#include <vector>

#include "sclp/lp/pfi.hpp"
#include "sclp/types.hpp"

namespace sclp::lp {

enum class VarDomain { Free, NonNegative, FixedZero };

enum class LpStatus { Optimal, Infeasible, Unbounded, Singular, IterationLimit };

const char* to_string(LpStatus s);

// Equality-constrained LP with per-variable domain tags:
//   max/min obj'z  s.t.  A z = rhs,  z_i in domain(i).
struct SignRestrictedLp {
    Matrix A;
    Vector rhs;
    Vector obj;
    std::vector<VarDomain> domain;
    bool maximize = true;

    Index rows() const { return A.rows(); }
    Index cols() const { return A.cols(); }
};

struct SimplexConfig {
    double pivot_tol = 1e-10;
    double opt_tol = 1e-9;
    double feas_tol = 1e-9;
    int bland_threshold = 20;    // degenerate pivots before Bland's rule kicks in
    int refactor_interval = 50;  // PFI terms between refactorizations
    double drift_tol = 1e-8;     // residual drift forcing a refactorization
    long max_iterations = 0;     // 0 = (rows + cols) * 200
};

// Basis snapshot: which variable sits in each row, with the factorized basis
// matrix and the current basic values (free variables may be negative).
struct Dictionary {
    std::vector<int> basic;  // variable index per basis position
    PfiLu factor;            // factorization of the basis columns
    Vector basic_values;

    int position_of(int var) const;
    bool contains(int var) const { return position_of(var) >= 0; }
};

struct LpSolution {
    LpStatus status = LpStatus::Singular;
    Dictionary dict;
    Vector primal;  // full-length variable values
    Vector dual;    // row multipliers y solving B'y = obj_B
    double objective = 0.0;
    long iterations = 0;
    bool used_bland = false;
};

// Two-phase primal simplex.  Free variables price with either sign; fixed-zero
// variables never enter a basis.  Dantzig pricing with a Bland fallback after
// cfg.bland_threshold consecutive degenerate pivots.
LpSolution solve_lp(const SignRestrictedLp& lp, const SimplexConfig& cfg = {});

// Exchanges one basic variable.  The entering column is read from lp.A;
// throws NumericalPivotError when the pivot element is below cfg.pivot_tol.
Dictionary pivot(const SignRestrictedLp& lp, const Dictionary& dict, int leaving,
                 int entering, const SimplexConfig& cfg = {});

// Fresh factorization of the basis given by `basic` with recomputed values.
Dictionary dictionary_for_basis(const SignRestrictedLp& lp, std::vector<int> basic);

}  // namespace sclp::lp
