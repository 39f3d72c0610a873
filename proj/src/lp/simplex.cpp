#include "sclp/lp/simplex.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace sclp::lp {

const char* to_string(LpStatus s) {
    switch (s) {
        case LpStatus::Optimal: return "optimal";
        case LpStatus::Infeasible: return "infeasible";
        case LpStatus::Unbounded: return "unbounded";
        case LpStatus::Singular: return "singular";
        case LpStatus::IterationLimit: return "iteration-limit";
    }
    return "?";
}

int Dictionary::position_of(int var) const {
    for (size_t i = 0; i < basic.size(); ++i)
        if (basic[i] == var) return static_cast<int>(i);
    return -1;
}

namespace {

// Internal working problem: rows sign-flipped so rhs >= 0, artificials
// appended after the original columns.
struct Tableau {
    const SignRestrictedLp* lp = nullptr;
    Matrix A;          // original columns, rows possibly negated
    Vector rhs;        // nonnegative
    int n_orig = 0;
    int n_art = 0;

    Vector column(int var) const {
        if (var < n_orig) return A.col(var);
        Vector col = Vector::Zero(A.rows());
        col[var - n_orig] = 1.0;
        return col;
    }
    VarDomain domain(int var) const {
        return var < n_orig ? lp->domain[var] : VarDomain::NonNegative;
    }
};

struct Basis {
    std::vector<int> vars;        // variable per row
    std::vector<int> pos_of;      // variable -> row position or -1
    PfiLu factor;
    Vector values;                // basic values, row order

    void assign(const Tableau& t, std::vector<int> v, double pivot_tol) {
        vars = std::move(v);
        pos_of.assign(t.n_orig + t.n_art, -1);
        Matrix B(t.A.rows(), t.A.rows());
        for (size_t i = 0; i < vars.size(); ++i) {
            pos_of[vars[i]] = static_cast<int>(i);
            B.col(static_cast<Index>(i)) = t.column(vars[i]);
        }
        factor = PfiLu(std::move(B), pivot_tol);
        values = factor.solve(t.rhs);
    }
};

class PrimalSimplex {
  public:
    PrimalSimplex(const Tableau& t, const SimplexConfig& cfg) : t_(t), cfg_(cfg) {}

    // Runs phase `obj` to optimality over the admissible variables.
    // `enterable(var)` filters entering candidates.
    template <typename Pred>
    LpStatus run(Basis& basis, const Vector& obj, Pred enterable, long& iters,
                 long max_iters, bool& used_bland) {
        const Index m = t_.A.rows();
        int degenerate_streak = 0;
        while (true) {
            if (++iters > max_iters) return LpStatus::IterationLimit;

            Vector obj_b(m);
            for (Index i = 0; i < m; ++i) obj_b[i] = obj[basis.vars[i]];
            Vector y = basis.factor.solve_transpose(obj_b);

            // Pricing: reduced cost d_j = obj_j - y'A_j for admissible nonbasic.
            const bool bland = degenerate_streak >= cfg_.bland_threshold;
            if (bland) used_bland = true;
            int enter = -1, enter_dir = +1;
            double best = cfg_.opt_tol;
            Vector yTA(t_.n_orig + t_.n_art);
            yTA.head(t_.n_orig) = t_.A.transpose() * y;
            yTA.tail(t_.n_art) = y;  // artificial columns are unit vectors
            for (int v = 0; v < t_.n_orig + t_.n_art; ++v) {
                if (basis.pos_of[v] >= 0 || !enterable(v)) continue;
                const VarDomain dom = t_.domain(v);
                if (dom == VarDomain::FixedZero) continue;
                const double d = obj[v] - yTA[v];
                if (dom == VarDomain::NonNegative) {
                    if (d > (bland ? cfg_.opt_tol : best)) {
                        enter = v;
                        enter_dir = +1;
                        best = d;
                        if (bland) break;
                    }
                } else {  // Free
                    if (std::abs(d) > (bland ? cfg_.opt_tol : best)) {
                        enter = v;
                        enter_dir = d > 0 ? +1 : -1;
                        best = std::abs(d);
                        if (bland) break;
                    }
                }
            }
            if (enter < 0) return LpStatus::Optimal;

            // Direction: increasing the entering variable by s (times dir)
            // moves basic values by -s * dir * w.
            Vector w = basis.factor.solve(t_.column(enter));
            int leave_pos = -1;
            double best_ratio = std::numeric_limits<double>::infinity();
            for (Index i = 0; i < m; ++i) {
                if (t_.domain(basis.vars[i]) == VarDomain::Free) continue;
                const double rate = enter_dir * w[i];
                if (rate > cfg_.pivot_tol) {
                    const double ratio = std::max(basis.values[i], 0.0) / rate;
                    const bool better =
                        ratio < best_ratio - 1e-12 ||
                        (ratio < best_ratio + 1e-12 &&
                         (leave_pos < 0 ||
                          (bland ? basis.vars[i] < basis.vars[leave_pos]
                                 : std::abs(rate) > std::abs(enter_dir * w[leave_pos]))));
                    if (better) {
                        leave_pos = static_cast<int>(i);
                        best_ratio = ratio;
                    }
                }
            }
            if (leave_pos < 0) return LpStatus::Unbounded;

            degenerate_streak = best_ratio <= cfg_.feas_tol ? degenerate_streak + 1 : 0;

            // Pivot: update values, replace the basis column.
            const double step = best_ratio;
            basis.values -= (enter_dir * step) * w;
            basis.values[leave_pos] = enter_dir * step;
            basis.pos_of[basis.vars[leave_pos]] = -1;
            basis.pos_of[enter] = leave_pos;
            basis.vars[leave_pos] = enter;
            basis.factor.replace_column(leave_pos, t_.column(enter));

            if (basis.factor.eta_count() >= cfg_.refactor_interval) {
                basis.factor.refactorize();
                basis.values = basis.factor.solve(t_.rhs);
            } else if (basis.factor.eta_count() % 8 == 0) {
                const double drift = (basis.factor.matrix() * basis.values - t_.rhs)
                                         .lpNorm<Eigen::Infinity>();
                if (drift > cfg_.drift_tol * (1.0 + t_.rhs.lpNorm<Eigen::Infinity>())) {
                    basis.factor.refactorize();
                    basis.values = basis.factor.solve(t_.rhs);
                }
            }
        }
    }

  private:
    const Tableau& t_;
    const SimplexConfig& cfg_;
};

}  // namespace

LpSolution solve_lp(const SignRestrictedLp& lp, const SimplexConfig& cfg) {
    const Index m = lp.rows();
    const Index n = lp.cols();
    LpSolution out;
    if (lp.rhs.size() != m || lp.obj.size() != n ||
        static_cast<Index>(lp.domain.size()) != n)
        throw std::invalid_argument("solve_lp: shape mismatch");

    Tableau t;
    t.lp = &lp;
    t.A = lp.A;
    t.rhs = lp.rhs;
    t.n_orig = static_cast<int>(n);
    t.n_art = static_cast<int>(m);
    for (Index i = 0; i < m; ++i) {
        if (t.rhs[i] < 0) {
            t.rhs[i] = -t.rhs[i];
            t.A.row(i) = -t.A.row(i);
        }
    }

    const long max_iters =
        cfg.max_iterations > 0 ? cfg.max_iterations : 200 * (m + n) + 2000;
    long iters = 0;

    // Phase 1: minimize the artificial sum, starting from the artificial basis.
    Basis basis;
    {
        std::vector<int> art(m);
        for (Index i = 0; i < m; ++i) art[i] = t.n_orig + static_cast<int>(i);
        try {
            basis.assign(t, std::move(art), cfg.pivot_tol);
        } catch (const SingularMatrixError&) {
            out.status = LpStatus::Singular;
            return out;
        }
    }
    Vector phase1_obj = Vector::Zero(t.n_orig + t.n_art);
    phase1_obj.tail(t.n_art).setConstant(-1.0);

    PrimalSimplex simplex(t, cfg);
    LpStatus st;
    try {
        st = simplex.run(
            basis, phase1_obj, [&](int v) { return v < t.n_orig; }, iters, max_iters,
            out.used_bland);
    } catch (const SingularMatrixError&) {
        out.status = LpStatus::Singular;
        return out;
    }
    if (st == LpStatus::IterationLimit) {
        out.status = st;
        out.iterations = iters;
        return out;
    }
    double art_sum = 0.0;
    for (Index i = 0; i < m; ++i)
        if (basis.vars[i] >= t.n_orig) art_sum += std::abs(basis.values[i]);
    if (art_sum > cfg.feas_tol * (1.0 + t.rhs.lpNorm<Eigen::Infinity>())) {
        out.status = LpStatus::Infeasible;
        out.iterations = iters;
        return out;
    }

    // Drive basic artificials out where a nonzero original pivot exists;
    // rows with no candidate are redundant and keep their artificial at zero.
    for (Index i = 0; i < m; ++i) {
        if (basis.vars[i] < t.n_orig) continue;
        Vector ei = Vector::Zero(m);
        ei[i] = 1.0;
        Vector row = basis.factor.solve_transpose(ei);  // row i of B^-1
        int enter = -1;
        double best = cfg.pivot_tol * 10;
        for (int v = 0; v < t.n_orig; ++v) {
            if (basis.pos_of[v] >= 0 || lp.domain[v] == VarDomain::FixedZero) continue;
            const double piv = std::abs(row.dot(t.A.col(v)));
            if (piv > best) {
                best = piv;
                enter = v;
            }
        }
        if (enter >= 0) {
            basis.pos_of[basis.vars[i]] = -1;
            basis.pos_of[enter] = static_cast<int>(i);
            basis.vars[i] = enter;
            try {
                basis.factor.replace_column(i, t.column(enter));
                basis.values = basis.factor.solve(t.rhs);
            } catch (const SingularMatrixError&) {
                out.status = LpStatus::Singular;
                return out;
            }
        }
    }

    // Phase 2 on the real objective; artificials may no longer enter.
    Vector phase2_obj = Vector::Zero(t.n_orig + t.n_art);
    const double sense = lp.maximize ? 1.0 : -1.0;
    phase2_obj.head(t.n_orig) = sense * lp.obj;
    try {
        st = simplex.run(
            basis, phase2_obj,
            [&](int v) { return v < t.n_orig; }, iters, max_iters, out.used_bland);
    } catch (const SingularMatrixError&) {
        out.status = LpStatus::Singular;
        return out;
    }
    if (st == LpStatus::IterationLimit || st == LpStatus::Unbounded) {
        out.status = st;
        out.iterations = iters;
        return out;
    }

    out.status = LpStatus::Optimal;
    out.iterations = iters;
    out.primal = Vector::Zero(n);
    for (Index i = 0; i < m; ++i)
        if (basis.vars[i] < t.n_orig) out.primal[basis.vars[i]] = basis.values[i];
    {
        Vector obj_b(m);
        for (Index i = 0; i < m; ++i) obj_b[i] = phase2_obj[basis.vars[i]];
        Vector y = basis.factor.solve_transpose(obj_b);
        // Undo the row flips and the sense scaling so duals match lp.A, lp.obj.
        for (Index i = 0; i < m; ++i)
            if (lp.rhs[i] < 0) y[i] = -y[i];
        out.dual = sense * y;
    }
    out.objective = lp.obj.dot(out.primal);

    out.dict.basic = basis.vars;
    out.dict.basic_values = basis.values;
    Matrix B(m, m);
    for (Index i = 0; i < m; ++i) B.col(i) = t.column(basis.vars[i]);
    // Rebuild against the unflipped rows so callers see the original system.
    for (Index i = 0; i < m; ++i)
        if (lp.rhs[i] < 0) B.row(i) = -B.row(i);
    out.dict.factor = PfiLu(std::move(B), cfg.pivot_tol);
    out.dict.basic_values = out.dict.factor.solve(lp.rhs);
    return out;
}

Dictionary dictionary_for_basis(const SignRestrictedLp& lp, std::vector<int> basic) {
    const Index m = lp.rows();
    if (static_cast<Index>(basic.size()) != m)
        throw std::invalid_argument("dictionary_for_basis: wrong basis size");
    Dictionary d;
    Matrix B(m, m);
    for (Index i = 0; i < m; ++i) B.col(i) = lp.A.col(basic[i]);
    d.factor = PfiLu(std::move(B));
    d.basic_values = d.factor.solve(lp.rhs);
    d.basic = std::move(basic);
    return d;
}

Dictionary pivot(const SignRestrictedLp& lp, const Dictionary& dict, int leaving,
                 int entering, const SimplexConfig& cfg) {
    if (entering < 0 || entering >= lp.cols() || leaving < 0 || leaving >= lp.cols())
        throw std::invalid_argument("pivot: variable index out of range");
    if (lp.domain[entering] == VarDomain::FixedZero)
        throw std::invalid_argument("pivot: entering variable is fixed at zero");
    const int pos = dict.position_of(leaving);
    if (pos < 0) throw std::invalid_argument("pivot: leaving variable not basic");
    if (dict.contains(entering)) throw std::invalid_argument("pivot: entering already basic");

    Vector w = dict.factor.solve(lp.A.col(entering));
    if (std::abs(w[pos]) < cfg.pivot_tol)
        throw NumericalPivotError("pivot: pivot element below tolerance");

    Dictionary out = dict;
    out.basic[pos] = entering;
    out.factor.replace_column(pos, lp.A.col(entering));
    if (out.factor.eta_count() >= cfg.refactor_interval) out.factor.refactorize();
    out.basic_values = out.factor.solve(lp.rhs);
    return out;
}

}  // namespace sclp::lp
