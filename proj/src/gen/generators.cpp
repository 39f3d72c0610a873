#include "sclp/gen/generators.hpp"

#include <stdexcept>

namespace sclp::gen {

using core::SclpProblem;

core::SclpProblem generate_reentrant(const ReentrantConfig& cfg) {
    const int I = cfg.servers, K = cfg.buffers;
    if (I < 1 || K < I) throw std::invalid_argument("re-entrant config needs K >= I >= 1");
    const double T = cfg.horizon > 0 ? cfg.horizon : 1.5 * K;
    Uniform01 u(cfg.seed);

    Vector alpha(K), a(K), h(K), m(K);
    for (int k = 1; k <= K; ++k) {
        const double bar = 15.0 * (K - k + 1) / K;
        alpha[k - 1] = 0.8 * bar + 0.45 * bar * u.next();
    }
    for (int k = 1; k <= K; ++k) {
        const double bar = 0.45 * (K - k + 1) / K;
        a[k - 1] = 0.8 * bar + 0.45 * bar * u.next();
    }
    for (int k = 0; k < K; ++k) h[k] = 10.0 * u.next();
    for (int k = 1; k <= K; ++k) {
        const double bar = 1.0 / k;
        m[k - 1] = 0.08 * bar + 0.045 * bar * u.next();
    }

    // Chain routing: work enters buffer k via step k and leaves to k+1.
    Matrix G = Matrix::Zero(K, K);
    for (int k = 0; k < K; ++k) {
        G(k, k) = 1.0;
        if (k + 1 < K) G(k + 1, k) = -1.0;
    }
    Matrix H = Matrix::Zero(I, K);
    for (int k = 0; k < K; ++k) H((k % I), k) = m[k];
    Vector b = Vector::Ones(I);

    return core::make_applied_problem(std::move(G), std::move(H), std::move(a),
                                      std::move(b), std::move(alpha), T, std::move(h),
                                      Vector::Zero(K));
}

core::SclpProblem generate_mcqn(const McqnConfig& cfg) {
    const int I = cfg.servers, K = cfg.buffers;
    if (I < 1 || K < 1) throw std::invalid_argument("MCQN config needs K, I >= 1");
    if (K < 2) throw std::invalid_argument("MCQN routing needs at least 2 classes");
    Uniform01 u(cfg.seed);

    Vector alpha(K), a(K), h(K), m(K);
    for (int k = 0; k < K; ++k) {
        alpha[k] = u.next();
        a[k] = 0.05 * u.next();
        h[k] = 2.0 * u.next();
        m[k] = 0.2 * u.next();
    }

    // Routing: class j feeds class l with probability p_{l,j}; a fixed
    // fraction leaves the system, so every column of G sums to that fraction.
    Matrix G = Matrix::Zero(K, K);
    const double mass = 1.0 - cfg.leave_probability;
    for (int j = 0; j < K; ++j) {
        std::vector<int> selected;
        for (int l = 0; l < K; ++l) {
            if (l == j) continue;
            if (u.next() < cfg.routing_density) selected.push_back(l);
        }
        std::vector<double> weight;
        double total = 0.0;
        for (size_t i = 0; i < selected.size(); ++i) {
            weight.push_back(u.next());
            total += weight.back();
        }
        G(j, j) = 1.0;
        if (selected.empty() || total == 0.0) {
            // Degenerate draw: route the whole mass to one other class.
            int l = static_cast<int>(u.next() * (K - 1));
            l = std::min(l, K - 2);
            if (l >= j) ++l;
            G(l, j) = -mass;
        } else {
            for (size_t i = 0; i < selected.size(); ++i)
                G(selected[i], j) = -mass * weight[i] / total;
        }
    }

    Matrix H = Matrix::Zero(I, K);
    for (int j = 0; j < K; ++j) H((j % I), j) = m[j];
    Vector b = Vector::Ones(I);

    SclpProblem p = core::make_applied_problem(std::move(G), std::move(H), std::move(a),
                                               std::move(b), std::move(alpha),
                                               cfg.horizon, std::move(h), Vector::Zero(K));
    return p;
}

}  // namespace sclp::gen
