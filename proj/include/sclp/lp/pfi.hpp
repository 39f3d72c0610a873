#pragma once

#include <stdexcept>
#include <utility>
#include <vector>

#include "sclp/types.hpp"

namespace sclp::lp {

class SingularMatrixError : public std::runtime_error {
  public:
    explicit SingularMatrixError(const std::string& what, double rcond_estimate = 0.0)
        : std::runtime_error(what), rcond_(rcond_estimate) {}
    double rcond_estimate() const { return rcond_; }

  private:
    double rcond_;
};

class NumericalPivotError : public std::runtime_error {
  public:
    explicit NumericalPivotError(const std::string& what) : std::runtime_error(what) {}
};

// LU factorization with product-form-of-inverse column updates.  The base LU
// is refreshed by refactorize(); between refreshes every replaced column
// appends one eta term, so solves stay O(m^2 + m * etas).
class PfiLu {
  public:
    PfiLu() = default;
    explicit PfiLu(Matrix A, double pivot_tol = 1e-12);

    Index dim() const { return A_.rows(); }
    int eta_count() const { return static_cast<int>(etas_.size()); }
    double rcond() const { return rcond_; }
    const Matrix& matrix() const { return A_; }

    Vector solve(Vector rhs) const;
    Vector solve_transpose(Vector rhs) const;

    // Replaces column `col` of the represented matrix.  Throws
    // SingularMatrixError when the update would make the matrix numerically
    // singular (eta pivot below pivot_tol).
    void replace_column(Index col, const Vector& new_col);

    // Collapses all eta terms into a fresh factorization of the current matrix.
    void refactorize();

  private:
    struct Eta {
        Index row;
        Vector w;  // B^-1 * new_col at the time of the update
    };

    void factorize();

    Matrix A_;  // current represented matrix, kept explicit for refactorization
    Eigen::PartialPivLU<Matrix> lu_;
    std::vector<Eta> etas_;
    double pivot_tol_ = 1e-12;
    double rcond_ = 0.0;
};

// One-shot solve of A x = rhs with a residual guarantee
// ||A x - rhs||_inf <= 1e-9 (1 + ||rhs||_inf); applies one step of iterative
// refinement before giving up.  Throws SingularMatrixError otherwise.
Vector lu_solve(const Matrix& A, const Vector& rhs);

}  // namespace sclp::lp
