#include "sclp/core/problem.hpp"

#include <sstream>
#include <stdexcept>

namespace sclp::core {

double applied_objective_constant(const Vector& h, const Vector& alpha, const Vector& a,
                                  double T) {
    return h.dot(alpha * T + a * (T * T / 2.0));
}

ValidationReport validate_problem(const SclpProblem& p) {
    ValidationReport r;
    const Index K = p.G.rows(), J = p.G.cols(), I = p.H.rows(), L = p.F.cols();

    auto check_len = [&](const Vector& v, Index want, const char* name) {
        if (v.size() != want) {
            std::ostringstream os;
            os << "dimension mismatch: " << name << " has length " << v.size()
               << ", expected " << want;
            r.fail(os.str());
        }
    };

    if (K < 1 || J < 1 || I < 1) r.fail("G and H must be nonempty (K, J, I >= 1)");
    if (p.H.cols() != J) r.fail("H column count differs from G column count");
    if (p.F.size() > 0 && p.F.rows() != K) r.fail("F row count differs from G row count");

    check_len(p.a, K, "a");
    check_len(p.b, I, "b");
    check_len(p.c, J, "c");
    check_len(p.alpha, K, "alpha");
    check_len(p.gamma, J, "gamma");
    check_len(p.d, L, "d");

    if (!(p.T > 0.0)) r.fail("horizon T must be positive");

    for (Index i = 0; i < p.b.size(); ++i)
        if (!(p.b[i] > 0.0)) r.fail("nonpositive capacity b[" + std::to_string(i) + "]");
    for (Index k = 0; k < p.alpha.size(); ++k)
        if (p.alpha[k] < 0.0)
            r.fail("negative initial inventory alpha[" + std::to_string(k) + "]");

    if (p.F.size() == 0 && p.d.size() != 0)
        r.fail("d must be empty when F is empty");

    if (p.applied) {
        check_len(p.applied->h, K, "h");
        check_len(p.applied->g, J, "g");
        if (p.applied->h.size() == K && p.applied->g.size() == J) {
            const double want =
                applied_objective_constant(p.applied->h, p.alpha, p.a, p.T);
            if (want != p.applied->objective_constant)
                r.fail("stored objective_constant differs from recomputation");
        }
    }
    return r;
}

TransformedObjective transform_applied_objective(const Vector& h, const Vector& g,
                                                 const Matrix& G, const Vector& alpha,
                                                 const Vector& a, double T) {
    if (h.size() != G.rows() || g.size() != G.cols() || alpha.size() != G.rows() ||
        a.size() != G.rows())
        throw std::invalid_argument("transform_applied_objective: dimension mismatch");
    TransformedObjective out;
    out.gamma = -g;
    out.c = G.transpose() * h;  // c' = h'G
    out.constant = applied_objective_constant(h, alpha, a, T);
    return out;
}

SclpProblem make_applied_problem(Matrix G, Matrix H, Vector a, Vector b, Vector alpha,
                                 double T, Vector h, Vector g) {
    SclpProblem p;
    const auto tr = transform_applied_objective(h, g, G, alpha, a, T);
    p.G = std::move(G);
    p.H = std::move(H);
    p.F = Matrix(p.G.rows(), 0);
    p.a = std::move(a);
    p.b = std::move(b);
    p.c = tr.c;
    p.d = Vector(0);
    p.alpha = std::move(alpha);
    p.gamma = tr.gamma;
    p.T = T;
    p.applied = AppliedCosts{std::move(h), std::move(g), tr.constant};
    return p;
}

}  // namespace sclp::core
