#pragma once

#include <string>
#include <vector>

#include "sclp/core/problem.hpp"

namespace sclp::disc {

// Sparse standard-form LP on a uniform time grid.  Variables per interval n:
// controls u[n] (J), states x[n] (K, with x[0] eliminated into the
// right-hand side), capacity slacks s[n] (I).  The finite-differences
// formulation keeps the nonzero count linear in N; the naive one carries the
// cumulative-sum rows instead and is quadratic.
struct DiscreteLp {
    enum class Form { FiniteDifferences, Naive };
    Form form = Form::FiniteDifferences;

    int N = 0;       // interval count
    double tau = 0;  // T / N
    Index K = 0, J = 0, I = 0;

    struct Entry {
        int row;
        int col;
        double value;
    };
    std::vector<Entry> entries;
    std::vector<double> rhs;   // length num_rows
    std::vector<double> cost;  // length num_cols, minimization sense
    int num_rows = 0;          // N*(K+I): K flow equalities + I capacity <= rows per stage
    int num_cols = 0;          // N*(J+K)

    // Reported value = cost'z + objective_offset, in the minimization sense
    // of the holding-cost form (when applied costs exist) or the negated
    // SCLP form otherwise.
    double objective_offset = 0.0;
    double objective_constant = 0.0;  // h'(alpha T + a T^2/2) when applied
    bool holding_form = false;

    // Columns: per-interval blocks [u[n] | x[n]] with x[0] already
    // substituted out (the x stored at block n is the state at grid n+1).
    int col_u(int n, int j) const { return n * static_cast<int>(J + K) + j; }
    int col_x(int n, int k) const {
        return n * static_cast<int>(J + K) + static_cast<int>(J) + k;
    }
    // Rows grouped by stage: [flow (=) | capacity (<=)].
    int row_flow(int n, int k) const { return n * static_cast<int>(K + I) + k; }
    int row_cap(int n, int i) const {
        return n * static_cast<int>(K + I) + static_cast<int>(K) + i;
    }
    bool row_is_equality(int row) const {
        return row % static_cast<int>(K + I) < static_cast<int>(K);
    }

    long nonzeros() const { return static_cast<long>(entries.size()); }
};

// Finite-differences discretization (x[n] - x[n-1] rows).  Requires F and d
// empty; throws std::invalid_argument otherwise.
DiscreteLp build_discretized_lp(const core::SclpProblem& p, int N);

// Cumulative-sum formulation used for the equivalence tests.
DiscreteLp build_naive_discretized_lp(const core::SclpProblem& p, int N);

struct DiscreteSolution {
    double value = 0.0;  // V_LP in the form's reported sense
    std::vector<Vector> u;  // per interval
    std::vector<Vector> x;  // per grid point 0..N (x[0] = alpha)
    long iterations = 0;
    std::string solver_id;  // "dense-simplex" or "staircase-ipm"
};

struct DiscretizeConfig {
    long dense_variable_budget = 2000;   // route to the dense simplex below this
    long variable_budget = 20000;        // hard budget; beyond it only emit
    double ipm_tolerance = 1e-11;
    int ipm_max_iterations = 200;
};

class BudgetExceeded : public std::runtime_error {
  public:
    explicit BudgetExceeded(const std::string& msg) : std::runtime_error(msg) {}
};

// Solves the discretized LP internally.  Small instances go through the
// dense simplex; larger ones through the structured interior-point method
// (finite-differences form only).  Throws BudgetExceeded past the budget
// (emit an MPS file instead) and std::runtime_error on infeasible input.
DiscreteSolution solve_discretized(const DiscreteLp& lp,
                                   const DiscretizeConfig& cfg = {});

// V_LP = h'(alpha T + a T^2 / 2) - V_LP1.
double recover_holding_objective(double v_lp1, const Vector& h, const Vector& alpha,
                                 const Vector& a, double T);

}  // namespace sclp::disc
