#include "sclp/lp/pfi.hpp"

#include <cmath>

namespace sclp::lp {

PfiLu::PfiLu(Matrix A, double pivot_tol) : A_(std::move(A)), pivot_tol_(pivot_tol) {
    if (A_.rows() != A_.cols()) throw std::invalid_argument("PfiLu: matrix not square");
    factorize();
}

void PfiLu::factorize() {
    lu_.compute(A_);
    rcond_ = lu_.rcond();
    if (!(rcond_ > pivot_tol_ * 1e-3) || !std::isfinite(rcond_))
        throw SingularMatrixError("PfiLu: matrix numerically singular", rcond_);
    etas_.clear();
}

Vector PfiLu::solve(Vector rhs) const {
    Vector x = lu_.solve(rhs);
    for (const auto& e : etas_) {
        const double xr = x[e.row] / e.w[e.row];
        x -= xr * e.w;
        x[e.row] = xr;
    }
    return x;
}

Vector PfiLu::solve_transpose(Vector rhs) const {
    // B^T = (B0 E1 ... Ek)^T, so the eta transposes apply last-to-first.
    for (auto it = etas_.rbegin(); it != etas_.rend(); ++it) {
        const auto& e = *it;
        rhs[e.row] -= (e.w.dot(rhs) - rhs[e.row]) / e.w[e.row];
    }
    return lu_.transpose().solve(rhs);
}

void PfiLu::replace_column(Index col, const Vector& new_col) {
    Vector w = solve(new_col);
    if (std::abs(w[col]) < pivot_tol_)
        throw SingularMatrixError("PfiLu: column update makes matrix singular",
                                  std::abs(w[col]));
    A_.col(col) = new_col;
    etas_.push_back(Eta{col, std::move(w)});
}

void PfiLu::refactorize() { factorize(); }

Vector lu_solve(const Matrix& A, const Vector& rhs) {
    if (A.rows() != A.cols() || A.rows() != rhs.size())
        throw std::invalid_argument("lu_solve: shape mismatch");
    Eigen::PartialPivLU<Matrix> lu(A);
    const double rcond = lu.rcond();
    if (!(rcond > 1e-15) || !std::isfinite(rcond))
        throw SingularMatrixError("lu_solve: matrix numerically singular", rcond);
    Vector x = lu.solve(rhs);
    const double bound = 1e-9 * (1.0 + rhs.lpNorm<Eigen::Infinity>());
    Vector r = rhs - A * x;
    if (r.lpNorm<Eigen::Infinity>() > bound) {
        x += lu.solve(r);  // one refinement step
        r = rhs - A * x;
        if (r.lpNorm<Eigen::Infinity>() > bound)
            throw SingularMatrixError("lu_solve: residual bound not met", rcond);
    }
    return x;
}

}  // namespace sclp::lp
