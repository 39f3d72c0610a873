#include "sclp/engine/solver.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <deque>
#include <optional>
#include <random>
#include <sstream>

#include "sclp/engine/breakpoints.hpp"

namespace sclp::engine {

const char* to_string(Collision::Kind k) {
    switch (k) {
        case Collision::Kind::TypeI: return "Type-I";
        case Collision::Kind::TypeII: return "Type-II";
        case Collision::Kind::TypeIII: return "Type-III";
    }
    return "?";
}

const char* to_string(ErrType e) {
    switch (e) {
        case ErrType::None: return "none";
        case ErrType::AmbiguousClassification: return "ambiguous classification";
        case ErrType::IncorrectCollision: return "incorrect collision";
        case ErrType::IncorrectPivot: return "incorrect pivot";
        case ErrType::IncorrectSubproblem: return "incorrect sub-problem";
        case ErrType::ZeroLengthShrink: return "zero-length interval shrink";
        case ErrType::SingularBreakpoints: return "singular breakpoint system";
        case ErrType::DegenerateStructure: return "degenerate structure";
    }
    return "?";
}

const char* to_string(SolveStatus s) {
    switch (s) {
        case SolveStatus::Optimal: return "optimal";
        case SolveStatus::Infeasible: return "infeasible";
        case SolveStatus::Unbounded: return "unbounded";
        case SolveStatus::IterationLimit: return "iteration-limit";
        case SolveStatus::NumericalFailure: return "numerical-failure";
        case SolveStatus::RecursionLimit: return "recursion-limit";
    }
    return "?";
}

bool ToleranceState::can_adjust(ErrType e) const {
    if (e == ErrType::AmbiguousClassification) return compare_tol / factor >= lo;
    return compare_tol * factor <= hi || zero_tol * factor <= hi;
}

void ToleranceState::adjust(ErrType e) {
    if (e == ErrType::AmbiguousClassification) {
        // Ties that cannot be separated: tighten the comparison window.
        compare_tol = std::max(lo, compare_tol / factor);
        zero_tol = std::min(zero_tol, compare_tol);
    } else {
        // Impossible-situation errors: widen what counts as zero so nearby
        // events merge into one collision.
        zero_tol = std::min(hi, zero_tol * factor);
        compare_tol = std::min(hi, std::max(compare_tol * factor, zero_tol));
    }
}

void ToleranceState::reset() {
    zero_tol = default_zero;
    compare_tol = default_compare;
}

namespace {

using core::BaseSignature;
using core::ParametricLine;
using core::SclpProblem;
using core::SolutionState;

struct EngineError {
    ErrType type;
    std::string msg;
};

bool same_collision(const Collision& a, const Collision& b) {
    return a.kind == b.kind && a.n == b.n && a.n_prime == b.n_prime &&
           a.entity.id == b.entity.id;
}

// Basic-set difference as variable ids: elements basic in `a` and not in `b`.
std::vector<VarId> basis_minus(const BaseSignature& a, const BaseSignature& b,
                               int num_controls) {
    std::vector<VarId> out;
    for (int k : a.K_set)
        if (!b.state_basic(k)) out.push_back(VarId::state(k, num_controls));
    for (int j : b.J_set)
        if (a.control_basic(j)) out.push_back(VarId::control(j));
    return out;
}

BaseSignature sig_without(const BaseSignature& sig, VarId v, const VarSpace& space) {
    BaseSignature out = sig;
    if (space.is_state(v)) {
        const int k = space.state_index(v);
        out.K_set.erase(std::remove(out.K_set.begin(), out.K_set.end(), k),
                        out.K_set.end());
    } else {
        const int j = space.control_index(v);
        auto it = std::lower_bound(out.J_set.begin(), out.J_set.end(), j);
        out.J_set.insert(it, j);
    }
    return out;
}

BaseSignature sig_with(const BaseSignature& sig, VarId w, const VarSpace& space) {
    BaseSignature out = sig;
    if (space.is_state(w)) {
        const int k = space.state_index(w);
        auto it = std::lower_bound(out.K_set.begin(), out.K_set.end(), k);
        if (it == out.K_set.end() || *it != k) out.K_set.insert(it, k);
    } else {
        const int j = space.control_index(w);
        out.J_set.erase(std::remove(out.J_set.begin(), out.J_set.end(), j),
                        out.J_set.end());
    }
    return out;
}

bool subset_of(const std::vector<int>& a, const std::vector<int>& b) {
    return std::includes(b.begin(), b.end(), a.begin(), a.end());
}

struct Bridge {
    std::vector<BaseSignature> sigs;
    std::vector<BasisValues> vals;
};

SolveResult solve_impl(const SclpProblem& p, const SolverConfig& cfg, int depth);

// ---------------------------------------------------------------------------

class Engine {
  public:
    Engine(const SclpProblem& prob, const SolverConfig& cfg, int depth)
        : prob_(prob), cfg_(cfg), depth_(depth), rl_(build_rates_data(prob)) {
        tol_ = cfg_.tolerances;
        tol_.default_zero = cfg_.tolerances.zero_tol;
        tol_.default_compare = cfg_.tolerances.compare_tol;
        const double KK = static_cast<double>(rl_.K + rl_.L);
        iter_cap_ = std::max<long>(
            1000, static_cast<long>(cfg_.iteration_cap_factor * 2.0 * KK * (KK + rl_.I)));
        x_scale_ = 1.0 + std::max(prob.alpha.lpNorm<Eigen::Infinity>(),
                                  prob.a.lpNorm<Eigen::Infinity>() * prob.T);
        q_scale_ = 1.0 + (prob.gamma.lpNorm<Eigen::Infinity>() +
                          prob.c.lpNorm<Eigen::Infinity>() * prob.T);
        rate_scale_ = 1.0 + std::max({prob.a.lpNorm<Eigen::Infinity>(),
                                      prob.b.lpNorm<Eigen::Infinity>(),
                                      prob.c.lpNorm<Eigen::Infinity>()});
        tau_scale_ = 1.0 + prob.T;
    }

    SolveResult run(SolutionState start, ParametricLine line, BoundaryResult boundary);

    SolverDiagnostics& diagnostics() { return diag_; }

  private:
    struct Snapshot {
        SolutionState state;
        Collision col;
    };

    void refresh_all();
    Collision classify(const ThetaStep& step);
    void apply(const Collision& col, double theta_star);
    void finalize();
    void restore(const Snapshot& snap);
    bool error_recovery(const EngineError& first);

    Bridge build_bridge(int left, int right, const Vector& x_star, const Vector& q_star,
                        VarId forced_zero, double theta_star);
    Bridge bridge_from_subproblem(int left, int right, const Vector& x_star,
                                  const Vector& q_star, double theta_star);
    bool jump_tests_ok(const BaseSignature* left, const BaseSignature& d,
                       const BasisValues& dv, const BaseSignature* right) const;
    bool compatible_front(const BaseSignature& sig) const;
    bool compatible_back(const BaseSignature& sig) const;

    Vector dx0() const { return line_.x0_goal - line_.x0_init; }
    Vector dqN() const { return line_.qN_goal - line_.qN_init; }
    double dT() const { return line_.T_goal - line_.T_init; }

    const SclpProblem& prob_;
    SolverConfig cfg_;
    int depth_;
    RatesLpData rl_;
    ParametricLine line_;
    SolutionState s_;
    BreakpointSystem bp_;
    BoundaryResult boundary_;
    ToleranceState tol_;
    SolverDiagnostics diag_;
    long iter_cap_ = 0;
    double x_scale_ = 1, q_scale_ = 1, rate_scale_ = 1, tau_scale_ = 1;
    std::deque<Snapshot> history_;
    std::optional<Collision> prev_collision_;
};

void Engine::refresh_all() {
    recompute_breakpoint_values(s_, dx0(), dqN());
    rebuild_minima(s_);
}

bool Engine::compatible_front(const BaseSignature& sig) const {
    return subset_of(boundary_.K0, sig.K_set);
}

bool Engine::compatible_back(const BaseSignature& sig) const {
    return subset_of(boundary_.JN1, sig.J_set);
}

Collision Engine::classify(const ThetaStep& step) {
    const int N = s_.num_intervals();
    const double dtheta = step.increment;
    Vector tau_star = s_.tau + dtheta * s_.delta_tau;

    std::vector<const ThetaCandidate*> ints, mins;
    for (const auto& c : step.candidates) {
        if (c.kind == ThetaCandidate::Kind::Interval)
            ints.push_back(&c);
        else
            mins.push_back(&c);
    }
    if (ints.empty() && mins.empty())
        throw EngineError{ErrType::AmbiguousClassification, "no candidates"};

    Collision col;
    col.theta_at = s_.theta + dtheta;

    if (!ints.empty()) {
        std::vector<char> marked(N, 0);
        int first = N;
        for (auto* c : ints) {
            marked[c->index] = 1;
            first = std::min(first, c->index);
        }
        const auto near_zero = [&](int i) {
            return tau_star[i] <= tol_.zero_tol * tau_scale_;
        };
        int lo = first, hi = first;
        bool grown = true;
        while (grown) {
            grown = false;
            if (lo > 0 && (marked[lo - 1] || near_zero(lo - 1))) {
                --lo;
                grown = true;
            }
            if (hi + 1 < N && (marked[hi + 1] || near_zero(hi + 1))) {
                ++hi;
                grown = true;
            }
        }
        if (lo == 0 && hi == N - 1)
            throw EngineError{ErrType::AmbiguousClassification,
                              "entire horizon classified as shrinking"};
        // A simultaneous state/dual zero at the merge point cannot be ordered
        // against the interval shrink at the current tolerances.
        for (auto* c : mins)
            if (c->n >= lo && c->n <= hi + 1)
                throw EngineError{ErrType::AmbiguousClassification,
                                  "interval shrink ties with a state zero"};

        col.n = lo;
        col.n_prime = hi + 1;
        if (lo == 0) {
            col.kind = compatible_front(s_.bases[hi + 1]) ? Collision::Kind::TypeI
                                                          : Collision::Kind::TypeII;
        } else if (hi == N - 1) {
            col.kind = compatible_back(s_.bases[lo - 1]) ? Collision::Kind::TypeI
                                                         : Collision::Kind::TypeII;
        } else {
            const auto leaving =
                basis_minus(s_.bases[lo - 1], s_.bases[hi + 1], rl_.space.num_controls);
            if (leaving.size() == 1)
                col.kind = Collision::Kind::TypeI;
            else if (leaving.size() == 2)
                col.kind = Collision::Kind::TypeII;
            else
                throw EngineError{ErrType::IncorrectCollision,
                                  "neighbors differ by " + std::to_string(leaving.size()) +
                                      " exchanges"};
        }
        return col;
    }

    // Pure state/dual event: lowest breakpoint wins; states take precedence
    // over duals at the same breakpoint.
    const ThetaCandidate* pick = nullptr;
    for (auto* c : mins) {
        if (!pick || c->n < pick->n ||
            (c->n == pick->n &&
             (c->kind == ThetaCandidate::Kind::StateMin &&
              pick->kind == ThetaCandidate::Kind::DualMin)) ||
            (c->n == pick->n && c->kind == pick->kind && c->index < pick->index))
            pick = c;
    }
    // Distinct tied locations stay pending; a tie at the same breakpoint
    // between a state and a dual is ambiguous.
    for (auto* c : mins)
        if (c != pick && c->n == pick->n && c->kind != pick->kind)
            throw EngineError{ErrType::AmbiguousClassification,
                              "state and dual state vanish together"};
    // The insertion point must not sit inside a zero-length cluster.
    if (pick->n > 0 && tau_star[pick->n - 1] <= tol_.zero_tol * tau_scale_)
        throw EngineError{ErrType::AmbiguousClassification,
                          "state zero at a vanishing interval"};
    if (pick->n < N && tau_star[pick->n] <= tol_.zero_tol * tau_scale_)
        throw EngineError{ErrType::AmbiguousClassification,
                          "state zero at a vanishing interval"};

    col.kind = Collision::Kind::TypeIII;
    col.n = col.n_prime = pick->n;
    col.entity = pick->kind == ThetaCandidate::Kind::StateMin
                     ? VarId::state(pick->index, rl_.space.num_controls)
                     : VarId::control(pick->index);
    return col;
}

bool Engine::jump_tests_ok(const BaseSignature* left, const BaseSignature& d,
                           const BasisValues& dv, const BaseSignature* right) const {
    const double jtol = tol_.zero_tol * rate_scale_;
    if (right) {
        const auto leave = basis_minus(d, *right, rl_.space.num_controls);
        if (leave.size() != 1) return false;
        if (rl_.space.is_state(leave[0]) &&
            dv.xdot[rl_.space.state_index(leave[0])] > jtol)
            return false;
    }
    if (left) {
        const auto leave = basis_minus(*left, d, rl_.space.num_controls);
        if (leave.size() != 1) return false;
        if (rl_.space.is_control(leave[0]) &&
            dv.qdot[rl_.space.control_index(leave[0])] > jtol)
            return false;
    }
    return true;
}

Bridge Engine::build_bridge(int left, int right, const Vector& x_star,
                            const Vector& q_star, VarId forced_zero, double theta_star) {
    const int N = s_.num_intervals();
    const bool has_left = left >= 0;
    const bool has_right = right < N;
    const BaseSignature* bl = has_left ? &s_.bases[left] : nullptr;
    const BaseSignature* br = has_right ? &s_.bases[right] : nullptr;

    // Sign sets at the merge point.
    std::vector<int> K_free, J_zero;
    for (Index k = 0; k < x_star.size(); ++k) {
        if (forced_zero.valid() && rl_.space.is_state(forced_zero) &&
            rl_.space.state_index(forced_zero) == static_cast<int>(k))
            continue;
        if (x_star[k] > tol_.zero_tol * x_scale_) K_free.push_back(static_cast<int>(k));
    }
    for (Index j = 0; j < q_star.size(); ++j) {
        if (forced_zero.valid() && rl_.space.is_control(forced_zero) &&
            rl_.space.control_index(forced_zero) == static_cast<int>(j))
            continue;
        if (q_star[j] > tol_.zero_tol * q_scale_) J_zero.push_back(static_cast<int>(j));
    }

    // Collect single-pivot candidates in preference order.
    std::vector<BaseSignature> cands;
    auto push_cand = [&](BaseSignature sig) {
        if (std::find(cands.begin(), cands.end(), sig) == cands.end())
            cands.push_back(std::move(sig));
    };
    if (has_left && has_right) {
        if (forced_zero.valid()) {
            // State or dual state reached zero at an interior breakpoint: the
            // new basis drops the state slope (or admits the control) while
            // keeping the old pivot's other exchange.
            auto [v, w] = core::pivot_pair(*bl, *br, rl_.space.num_controls);
            if (rl_.space.is_state(forced_zero)) {
                if (bl->state_basic(rl_.space.state_index(forced_zero)) &&
                    forced_zero != v)
                    push_cand(sig_with(sig_without(*bl, forced_zero, rl_.space), w,
                                       rl_.space));
            } else {
                if (!bl->control_basic(rl_.space.control_index(forced_zero)) &&
                    forced_zero != w)
                    push_cand(sig_with(sig_without(*bl, v, rl_.space), forced_zero,
                                       rl_.space));
            }
        } else {
            const auto V = basis_minus(*bl, *br, rl_.space.num_controls);
            const auto W = basis_minus(*br, *bl, rl_.space.num_controls);
            // Generalized swapped order first: apply the run's last exchange
            // before its first.
            auto [v_last, w_last] =
                core::pivot_pair(s_.bases[right - 1], *br, rl_.space.num_controls);
            auto in = [](const std::vector<VarId>& set, VarId v) {
                return std::find(set.begin(), set.end(), v) != set.end();
            };
            if (in(V, v_last) && in(W, w_last))
                push_cand(sig_with(sig_without(*bl, v_last, rl_.space), w_last, rl_.space));
            for (VarId v : V)
                for (VarId w : W)
                    push_cand(sig_with(sig_without(*bl, v, rl_.space), w, rl_.space));
        }
    }

    for (auto& sig : cands) {
        if (!signature_is_square(rl_, sig)) continue;
        bool removed_dup = false;
        for (int m = std::max(0, left + 1); m < right; ++m)
            if (sig == s_.bases[m]) removed_dup = true;
        if (removed_dup || (bl && sig == *bl) || (br && sig == *br)) continue;
        try {
            BasisValues vals = evaluate_signature(rl_, sig);
            if (!jump_tests_ok(bl, sig, vals, br)) continue;
            Bridge b;
            b.sigs.push_back(std::move(sig));
            b.vals.push_back(std::move(vals));
            return b;
        } catch (const lp::SingularMatrixError&) {
            continue;
        }
    }

    // Fresh Rates-LP solve under the merge-point sign restrictions.
    auto res = solve_rates_lp(rl_, K_free, J_zero);
    if (res.status == lp::LpStatus::Optimal) {
        const auto& d = res.signature;
        const bool dup = (bl && d == *bl) || (br && d == *br);
        const bool adj_l = !bl || core::adjacent(*bl, d);
        const bool adj_r = !br || core::adjacent(d, *br);
        const bool compat_l = has_left || compatible_front(d);
        const bool compat_r = has_right || compatible_back(d);
        if (!dup && adj_l && adj_r && compat_l && compat_r) {
            if (jump_tests_ok(bl, d, res.values, br)) {
                Bridge b;
                b.sigs.push_back(res.signature);
                b.vals.push_back(res.values);
                return b;
            }
            throw EngineError{ErrType::IncorrectPivot,
                              "new basis fails the sign jump tests"};
        }
        if (!dup && (has_left || compat_l) && (has_right || compat_r))
            return bridge_from_subproblem(left, right, x_star, q_star, theta_star);
        throw EngineError{ErrType::IncorrectPivot,
                          "Rates-LP returned a neighboring basis"};
    }
    throw EngineError{ErrType::DegenerateStructure,
                      std::string("Rates-LP at the collision point: ") +
                          lp::to_string(res.status)};
}

Bridge Engine::bridge_from_subproblem(int left, int right, const Vector& x_star,
                                      const Vector& q_star, double theta_star) {
    if (depth_ + 1 > cfg_.recursion_cap)
        throw EngineError{ErrType::IncorrectSubproblem, "recursion cap reached"};
    if (rl_.L > 0)
        throw EngineError{ErrType::IncorrectSubproblem,
                          "sub-problem reduction requires empty F"};

    const int N = s_.num_intervals();
    const bool has_left = left >= 0;
    const bool has_right = right < N;

    // First-order growth of the zero states at the merge point, used as the
    // reduced problem's initial inventories.
    const int bp = std::min(right, N);
    Vector dxs = s_.delta_x[std::max(0, std::min(bp, N))];
    const auto t_all = s_.breakpoints();
    const double t_star = t_all[std::max(0, std::min(bp, N))];

    SubproblemInfo info =
        formulate_subproblem(prob_, x_star, q_star, dxs, t_star, tol_.zero_tol * x_scale_);
    ++diag_.subproblems;

    SolverConfig sub_cfg = cfg_;
    sub_cfg.hooks = {};
    SolveResult sub = solve_impl(info.problem, sub_cfg, depth_ + 1);
    diag_.max_subproblem_depth =
        std::max(diag_.max_subproblem_depth, depth_ + 1 + sub.diagnostics.max_subproblem_depth);
    diag_.iterations += sub.diagnostics.iterations;
    diag_.subproblems += sub.diagnostics.subproblems;
    if (sub.status != SolveStatus::Optimal)
        throw EngineError{ErrType::IncorrectSubproblem,
                          std::string("sub-problem solve: ") + to_string(sub.status)};

    // Lift the sub-problem bases back into the parent variable space.
    const auto& sp = info.problem;
    const int sub_J = static_cast<int>(sp.J());
    std::vector<int> pinned_controls;
    {
        std::vector<char> kept(rl_.J, 0);
        for (int j : info.control_map) kept[j] = 1;
        for (int j = 0; j < rl_.J; ++j)
            if (!kept[j]) pinned_controls.push_back(j);
    }
    Bridge b;
    for (const auto& sub_sig : sub.state.bases) {
        BaseSignature sig;
        for (int k = 0; k < static_cast<int>(x_star.size()); ++k)
            if (x_star[k] > tol_.zero_tol * x_scale_) sig.K_set.push_back(k);
        for (int ks : sub_sig.K_set) sig.K_set.push_back(info.state_map[ks]);
        std::sort(sig.K_set.begin(), sig.K_set.end());

        for (int js : sub_sig.J_set) {
            if (js < sub_J)
                sig.J_set.push_back(info.control_map[js]);
            else
                sig.J_set.push_back(static_cast<int>(rl_.J) +
                                    info.server_map[js - sub_J]);
        }
        for (int j : pinned_controls) sig.J_set.push_back(j);
        std::sort(sig.J_set.begin(), sig.J_set.end());
        if (b.sigs.empty() || !(b.sigs.back() == sig)) b.sigs.push_back(std::move(sig));
    }

    // Trim ends equal to the neighbors, then validate the splice contract.
    while (!b.sigs.empty() && has_left && b.sigs.front() == s_.bases[left])
        b.sigs.erase(b.sigs.begin());
    while (!b.sigs.empty() && has_right && b.sigs.back() == s_.bases[right])
        b.sigs.pop_back();
    if (b.sigs.empty())
        throw EngineError{ErrType::IncorrectSubproblem, "sub-problem bridge is empty"};

    for (auto& sig : b.sigs) {
        if (!signature_is_square(rl_, sig))
            throw EngineError{ErrType::IncorrectSubproblem, "lifted basis not square"};
        try {
            b.vals.push_back(evaluate_signature(rl_, sig));
        } catch (const lp::SingularMatrixError&) {
            throw EngineError{ErrType::IncorrectSubproblem, "lifted basis singular"};
        }
    }
    if (has_left && !core::adjacent(s_.bases[left], b.sigs.front()))
        throw EngineError{ErrType::IncorrectSubproblem,
                          "first sub-problem basis not adjacent to the left neighbor"};
    if (has_right && !core::adjacent(b.sigs.back(), s_.bases[right]))
        throw EngineError{ErrType::IncorrectSubproblem,
                          "last sub-problem basis not adjacent to the right neighbor"};
    for (size_t i = 0; i + 1 < b.sigs.size(); ++i)
        if (!core::adjacent(b.sigs[i], b.sigs[i + 1]))
            throw EngineError{ErrType::IncorrectSubproblem, "bridge chain not adjacent"};
    if (!has_left && !compatible_front(b.sigs.front()))
        throw EngineError{ErrType::IncorrectSubproblem, "bridge incompatible with x0"};
    if (!has_right && !compatible_back(b.sigs.back()))
        throw EngineError{ErrType::IncorrectSubproblem, "bridge incompatible with qN"};
    if (!jump_tests_ok(has_left ? &s_.bases[left] : nullptr, b.sigs.front(),
                       b.vals.front(), nullptr) ||
        !jump_tests_ok(nullptr, b.sigs.back(), b.vals.back(),
                       has_right ? &s_.bases[right] : nullptr))
        throw EngineError{ErrType::IncorrectSubproblem, "bridge fails sign jump tests"};
    return b;
}

void Engine::apply(const Collision& col, double theta_star) {
    const double dtheta = theta_star - s_.theta;
    if (prev_collision_ && same_collision(*prev_collision_, col) && dtheta <= 1e-14)
        throw EngineError{ErrType::ZeroLengthShrink,
                          "collision repeats without parametric progress"};

    const int N = s_.num_intervals();
    Vector tau_star = (s_.tau + dtheta * s_.delta_tau).cwiseMax(0.0);
    auto x_at = [&](int n) { return (s_.x[n] + dtheta * s_.delta_x[n]).eval(); };
    auto q_at = [&](int n) { return (s_.q[n] + dtheta * s_.delta_q[n]).eval(); };

    int pos = 0, rm = 0;
    Bridge bridge;
    if (col.kind == Collision::Kind::TypeI) {
        pos = col.n;
        rm = col.n_prime - col.n;
    } else if (col.kind == Collision::Kind::TypeII) {
        pos = col.n;
        rm = col.n_prime - col.n;
        bridge = build_bridge(col.n - 1, col.n_prime, x_at(col.n), q_at(col.n_prime),
                              VarId{}, theta_star);
    } else {
        pos = col.n;
        rm = 0;
        bridge = build_bridge(col.n - 1, col.n, x_at(col.n), q_at(col.n), col.entity,
                              theta_star);
    }
    const int ins = static_cast<int>(bridge.sigs.size());
    const bool simple = col.kind == Collision::Kind::TypeII && rm == 1 && ins == 1 &&
                        col.n > 0 && col.n_prime < N;

    // Splice the per-interval data and interval lengths.
    auto splice = [&](auto& vec, auto&& make_new) {
        vec.erase(vec.begin() + pos, vec.begin() + pos + rm);
        for (int i = ins - 1; i >= 0; --i) vec.insert(vec.begin() + pos, make_new(i));
    };
    splice(s_.bases, [&](int i) { return bridge.sigs[i]; });
    splice(s_.u, [&](int i) { return bridge.vals[i].u; });
    splice(s_.xdot, [&](int i) { return bridge.vals[i].xdot; });
    splice(s_.p, [&](int i) { return bridge.vals[i].p; });
    splice(s_.qdot, [&](int i) { return bridge.vals[i].qdot; });
    {
        std::vector<double> t(tau_star.data(), tau_star.data() + tau_star.size());
        t.erase(t.begin() + pos, t.begin() + pos + rm);
        t.insert(t.begin() + pos, static_cast<size_t>(ins), 0.0);
        s_.tau = Eigen::Map<Vector>(t.data(), static_cast<Index>(t.size()));
    }
    s_.theta = theta_star;
    s_.horizon = line_.horizon_at(theta_star);
    s_.x0 = line_.x0_at(theta_star);
    s_.qN = line_.qN_at(theta_star);

    // Post-edit chain checks around the splice.
    const int Nn = s_.num_intervals();
    for (int m = std::max(0, pos - 1); m < std::min(Nn - 1, pos + ins); ++m)
        if (!core::adjacent(s_.bases[m], s_.bases[m + 1]))
            throw EngineError{ErrType::IncorrectPivot, "splice broke adjacency"};
    if (pos == 0 && !compatible_front(s_.bases.front()))
        throw EngineError{ErrType::IncorrectPivot, "first basis incompatible with x0"};
    if (pos + ins >= Nn && !compatible_back(s_.bases.back()))
        throw EngineError{ErrType::IncorrectPivot, "last basis incompatible with qN"};

    // Update the breakpoint system and re-derive tau / delta_tau.
    bool rebuilt = false;
    if (simple && bp_.valid() && bp_.eta_count() < 40) {
        try {
            bp_.apply_simple_replace(pos, s_);
        } catch (const lp::SingularMatrixError&) {
            rebuilt = true;
        } catch (const std::logic_error&) {
            rebuilt = true;
        }
    } else {
        rebuilt = true;
    }
    try {
        if (rebuilt) {
            bp_.rebuild(rl_, s_);
            auto sol = bp_.solve(s_.x0, s_.qN, dx0(), dqN(), s_.horizon, dT());
            if ((sol.tau - s_.tau).lpNorm<Eigen::Infinity>() > 1e-6 * tau_scale_)
                throw EngineError{ErrType::DegenerateStructure,
                                  "re-solved interval lengths disagree with the splice"};
            s_.tau = sol.tau;
            s_.delta_tau = sol.delta_tau;
        } else {
            s_.delta_tau = bp_.solve_delta(dx0(), dqN(), dT());
        }
    } catch (const lp::SingularMatrixError&) {
        throw EngineError{ErrType::SingularBreakpoints, "breakpoint system singular"};
    }

    // Gates: lengths stay nonnegative and every inserted interval opens.
    for (Index i = 0; i < s_.tau.size(); ++i)
        if (s_.tau[i] < -tol_.zero_tol * tau_scale_ * 10)
            throw EngineError{ErrType::IncorrectCollision,
                              "negative interval length after surgery"};
    for (int i = pos; i < pos + ins; ++i)
        if (s_.delta_tau[i] <= tol_.zero_tol)
            throw EngineError{ErrType::ZeroLengthShrink,
                              "inserted interval does not open"};

    recompute_breakpoint_values(s_, dx0(), dqN());
    update_minima_after_edit(s_, pos, pos + ins - 1, ins - rm);
}

void Engine::finalize() {
    s_.theta = 1.0;
    s_.horizon = line_.T_goal;
    s_.x0 = line_.x0_goal;
    s_.qN = line_.qN_goal;
    try {
        bp_.rebuild(rl_, s_);
        auto sol = bp_.solve(s_.x0, s_.qN, dx0(), dqN(), s_.horizon, dT());
        s_.tau = sol.tau;
        s_.delta_tau = sol.delta_tau;
    } catch (const lp::SingularMatrixError&) {
        throw EngineError{ErrType::SingularBreakpoints, "breakpoint system singular"};
    }
    for (Index i = 0; i < s_.tau.size(); ++i)
        if (s_.tau[i] < -tol_.zero_tol * tau_scale_ * 10)
            throw EngineError{ErrType::IncorrectCollision,
                              "negative interval length at the goal"};
    recompute_breakpoint_values(s_, dx0(), dqN());
    rebuild_minima(s_);
}

void Engine::restore(const Snapshot& snap) {
    s_ = snap.state;
    bp_.rebuild(rl_, s_);
    if (cfg_.hooks.on_rewind) cfg_.hooks.on_rewind(s_);
}

bool Engine::error_recovery(const EngineError& first) {
    // Ladder 1: adjust tolerances and reclassify at the current state.
    ErrType cur = first.type;
    Collision last_failed;
    bool have_failed = false;
    while (tol_.can_adjust(cur)) {
        tol_.adjust(cur);
        ++diag_.tolerance_adjustments;
        try {
            ThetaStep step = find_next_theta(s_, tol_);
            if (step.theta_next >= 1.0 - 1e-15) {
                finalize();
                tol_.reset();
                return true;
            }
            Collision col = classify(step);
            if (have_failed && same_collision(col, last_failed)) continue;
            Snapshot snap{s_, col};
            try {
                apply(col, step.theta_next);
                history_.push_front(std::move(snap));
                while (static_cast<int>(history_.size()) > cfg_.rewind_depth)
                    history_.pop_back();
                prev_collision_ = col;
                tol_.reset();
                return true;
            } catch (const EngineError& e2) {
                restore(snap);
                last_failed = col;
                have_failed = true;
                cur = e2.type;
            }
        } catch (const EngineError& e2) {
            cur = e2.type;
        }
    }
    tol_.reset();

    // Ladder 2: rewind to stored iterations and look for a different
    // classification there.
    while (!history_.empty()) {
        Snapshot snap = std::move(history_.front());
        history_.pop_front();
        restore(snap);
        ++diag_.rewinds;
        prev_collision_.reset();

        bool adjusted = true;
        while (adjusted) {
            try {
                ThetaStep step = find_next_theta(s_, tol_);
                if (step.theta_next >= 1.0 - 1e-15) {
                    finalize();
                    tol_.reset();
                    return true;
                }
                Collision col = classify(step);
                if (!same_collision(col, snap.col)) {
                    Snapshot snap2{s_, col};
                    try {
                        apply(col, step.theta_next);
                        history_.push_front(std::move(snap2));
                        prev_collision_ = col;
                        tol_.reset();
                        return true;
                    } catch (const EngineError& e2) {
                        restore(snap2);
                        if (!tol_.can_adjust(e2.type)) break;
                        tol_.adjust(e2.type);
                        ++diag_.tolerance_adjustments;
                        continue;
                    }
                }
                if (!tol_.can_adjust(ErrType::AmbiguousClassification)) break;
                tol_.adjust(ErrType::AmbiguousClassification);
                ++diag_.tolerance_adjustments;
            } catch (const EngineError& e2) {
                if (!tol_.can_adjust(e2.type)) break;
                tol_.adjust(e2.type);
                ++diag_.tolerance_adjustments;
            }
            adjusted = true;
        }
        tol_.reset();
    }
    return false;
}

SolveResult Engine::run(SolutionState start, ParametricLine line, BoundaryResult boundary) {
    const auto t0 = std::chrono::steady_clock::now();
    SolveResult out;
    s_ = std::move(start);
    line_ = std::move(line);
    boundary_ = std::move(boundary);

    auto make_result = [&](SolveStatus st, std::string msg = {}) {
        out.status = st;
        out.state = s_;
        out.message = std::move(msg);
        out.diagnostics = diag_;
        out.diagnostics.wall_time_s =
            std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
        if (s_.complete()) out.certificate = check_certificate(prob_, s_);
        return out;
    };

    try {
        bp_.rebuild(rl_, s_);
        auto sol =
            bp_.solve(s_.x0, s_.qN, dx0(), dqN(), line_.horizon_at(s_.theta), dT());
        s_.tau = sol.tau;
        s_.delta_tau = sol.delta_tau;
    } catch (const lp::SingularMatrixError&) {
        return make_result(SolveStatus::NumericalFailure, "initial breakpoint system singular");
    }
    refresh_all();

    long guard = 0;
    while (true) {
        if (s_.theta >= 1.0) break;
        if (diag_.iterations >= iter_cap_ || ++guard > 3 * iter_cap_)
            return make_result(SolveStatus::IterationLimit, "iteration cap reached");

        ThetaStep step = find_next_theta(s_, tol_);
        try {
            if (step.theta_next >= 1.0 - 1e-15) {
                finalize();
                break;
            }
            Collision col = classify(step);
            if (cfg_.hooks.misclassify) cfg_.hooks.misclassify(col);
            Snapshot snap{s_, col};
            if (cfg_.hooks.on_snapshot) cfg_.hooks.on_snapshot(s_);
            try {
                apply(col, step.theta_next);
            } catch (const EngineError& e) {
                restore(snap);
                if (!error_recovery(e))
                    return make_result(SolveStatus::NumericalFailure, e.msg);
                ++diag_.iterations;
                continue;
            }
            ++diag_.iterations;
            history_.push_front(std::move(snap));
            while (static_cast<int>(history_.size()) > cfg_.rewind_depth)
                history_.pop_back();
            prev_collision_ = col;
            if (cfg_.check_certificate_each_iteration) {
                auto cert = check_certificate(prob_, s_);
                if (!cert.pass())
                    throw EngineError{ErrType::IncorrectPivot,
                                      "debug certificate failed mid-solve"};
            }
        } catch (const EngineError& e) {
            if (!error_recovery(e)) return make_result(SolveStatus::NumericalFailure, e.msg);
            ++diag_.iterations;
        }
    }

    return make_result(SolveStatus::Optimal);
}

// ---------------------------------------------------------------------------

InitResult initialize_impl(const SclpProblem& p, const SolverConfig& cfg) {
    InitResult out;
    const auto rl = build_rates_data(p);
    out.boundary = solve_boundary(p, cfg.tolerances.zero_tol *
                                         (1.0 + p.alpha.lpNorm<Eigen::Infinity>()));
    if (out.boundary.primal_status != lp::LpStatus::Optimal ||
        out.boundary.dual_status != lp::LpStatus::Optimal) {
        const auto st = out.boundary.primal_status != lp::LpStatus::Optimal
                            ? out.boundary.primal_status
                            : out.boundary.dual_status;
        out.status = st == lp::LpStatus::Infeasible ? SolveStatus::Infeasible
                     : st == lp::LpStatus::Unbounded ? SolveStatus::Unbounded
                                                     : SolveStatus::NumericalFailure;
        return out;
    }

    auto first = solve_rates_lp(rl, out.boundary.K0, out.boundary.JN1);
    if (first.status != lp::LpStatus::Optimal) {
        out.status = first.status == lp::LpStatus::Infeasible ? SolveStatus::Infeasible
                     : first.status == lp::LpStatus::Unbounded ? SolveStatus::Unbounded
                                                               : SolveStatus::NumericalFailure;
        return out;
    }

    SolutionState s;
    s.bases.push_back(first.signature);
    s.u.push_back(first.values.u);
    s.xdot.push_back(first.values.xdot);
    s.p.push_back(first.values.p);
    s.qdot.push_back(first.values.qdot);
    s.x0 = out.boundary.x0;
    s.qN = out.boundary.qN;
    s.tau = Vector::Zero(1);
    s.delta_tau = Vector::Zero(1);
    s.theta = 0.0;
    s.horizon = 0.0;
    out.state = std::move(s);
    out.status = SolveStatus::Optimal;
    return out;
}

SolveResult solve_impl(const SclpProblem& p, const SolverConfig& cfg, int depth) {
    SolveResult out;
    auto init = initialize_impl(p, cfg);
    if (init.status != SolveStatus::Optimal) {
        out.status = init.status;
        out.message = "initialization failed";
        return out;
    }
    ParametricLine line;
    line.x0_init = line.x0_goal = init.boundary.x0;
    line.qN_init = line.qN_goal = init.boundary.qN;
    line.T_init = 0.0;
    line.T_goal = p.T;

    Engine eng(p, cfg, depth);
    return eng.run(std::move(init.state), line, std::move(init.boundary));
}

}  // namespace

InitResult initialize(const SclpProblem& p, const SolverConfig& cfg) {
    return initialize_impl(p, cfg);
}

SolveResult solve(const SclpProblem& p, const SolverConfig& cfg) {
    if (!cfg.perturb) return solve_impl(p, cfg, 0);
    // Seeded multiplicative jitter on a and c restores non-degeneracy.
    SclpProblem q = p;
    std::mt19937_64 rng(cfg.perturb_seed);
    auto jitter = [&](Vector& v) {
        for (Index i = 0; i < v.size(); ++i) {
            const double u = static_cast<double>(rng() >> 11) * 0x1.0p-53;
            v[i] *= 1.0 + cfg.perturb_magnitude * (2.0 * u - 1.0);
        }
    };
    jitter(q.a);
    jitter(q.c);
    return solve_impl(q, cfg, 0);
}

SolveResult solve_along_line(const SclpProblem& p, SolutionState start,
                             const ParametricLine& line, const SolverConfig& cfg) {
    auto boundary = solve_boundary(p, cfg.tolerances.zero_tol *
                                          (1.0 + p.alpha.lpNorm<Eigen::Infinity>()));
    Engine eng(p, cfg, 0);
    return eng.run(std::move(start), line, std::move(boundary));
}

SubproblemInfo formulate_subproblem(const SclpProblem& p, const Vector& x_star,
                                    const Vector& q_star, const Vector& dx_star,
                                    double t_star, double zero_tol) {
    if (p.L() != 0)
        throw std::invalid_argument("formulate_subproblem: F must be empty");
    SubproblemInfo info;
    const Index K = p.K(), J = p.J(), I = p.I();

    for (Index k = 0; k < K; ++k)
        if (x_star[k] <= zero_tol) info.state_map.push_back(static_cast<int>(k));
    for (Index j = 0; j < J; ++j)
        if (q_star[j] <= zero_tol) info.control_map.push_back(static_cast<int>(j));
    if (info.state_map.empty() || info.control_map.empty())
        throw std::invalid_argument("formulate_subproblem: reduction is empty");

    std::vector<char> row_used(I, 0);
    for (int j : info.control_map)
        for (Index i = 0; i < I; ++i)
            if (p.H(i, j) != 0.0) row_used[i] = 1;
    for (Index i = 0; i < I; ++i)
        if (row_used[i]) info.server_map.push_back(static_cast<int>(i));
    if (info.server_map.empty())
        throw std::invalid_argument("formulate_subproblem: no active servers");

    const Index Ks = info.state_map.size(), Js = info.control_map.size(),
                Is = info.server_map.size();
    SclpProblem sub;
    sub.G = Matrix(Ks, Js);
    sub.H = Matrix(Is, Js);
    sub.F = Matrix(Ks, 0);
    sub.a = Vector(Ks);
    sub.b = Vector(Is);
    sub.c = Vector(Js);
    sub.d = Vector(0);
    sub.alpha = Vector(Ks);
    sub.gamma = Vector(Js);
    for (Index ks = 0; ks < Ks; ++ks) {
        const int k = info.state_map[ks];
        sub.a[ks] = p.a[k];
        sub.alpha[ks] = std::max(0.0, dx_star[k]);
        for (Index js = 0; js < Js; ++js) sub.G(ks, js) = p.G(k, info.control_map[js]);
    }
    for (Index is = 0; is < Is; ++is) {
        const int i = info.server_map[is];
        sub.b[is] = p.b[i];
        for (Index js = 0; js < Js; ++js) sub.H(is, js) = p.H(i, info.control_map[js]);
    }
    for (Index js = 0; js < Js; ++js) {
        const int j = info.control_map[js];
        sub.c[js] = p.c[j];
        sub.gamma[js] = p.gamma[j] + (p.T - t_star) * p.c[j];
    }
    sub.T = 1.0;

    info.problem = std::move(sub);
    info.line.x0_init = info.line.x0_goal = info.problem.alpha;
    info.line.qN_init = info.line.qN_goal = Vector::Zero(Js + Is);
    info.line.T_init = 0.0;
    info.line.T_goal = info.problem.T;
    return info;
}

}  // namespace sclp::engine
