#include "sclp/engine/sequence.hpp"

#include <algorithm>
#include <cstdlib>

namespace sclp::engine {

BaseSequence::BaseSequence(const RatesLpData* rl, int dictionary_budget)
    : rl_(rl), budget_(std::max(1, dictionary_budget)) {
    if (const char* env = std::getenv("SCLP_DICT_BUDGET")) {
        const int v = std::atoi(env);
        if (v > 0) budget_ = v;
    }
}

core::PivotRecord BaseSequence::pivot_record(int n) const {
    auto [leave, enter] = core::pivot_pair(sigs_[n], sigs_[n + 1], rl_->space.num_controls);
    return core::PivotRecord{leave, enter, n};
}

void BaseSequence::append(core::BaseSignature sig, BasisValues vals) {
    sigs_.push_back(std::move(sig));
    vals_.push_back(std::move(vals));
    invalidate_anchors();
}

void BaseSequence::insert(int pos, std::vector<core::BaseSignature> sigs,
                          std::vector<BasisValues> vals) {
    sigs_.insert(sigs_.begin() + pos, std::make_move_iterator(sigs.begin()),
                 std::make_move_iterator(sigs.end()));
    vals_.insert(vals_.begin() + pos, std::make_move_iterator(vals.begin()),
                 std::make_move_iterator(vals.end()));
    invalidate_anchors();
}

void BaseSequence::remove(int first, int last) {
    sigs_.erase(sigs_.begin() + first, sigs_.begin() + last + 1);
    vals_.erase(vals_.begin() + first, vals_.begin() + last + 1);
    invalidate_anchors();
}

void BaseSequence::replace(int pos, core::BaseSignature sig, BasisValues vals) {
    sigs_[pos] = std::move(sig);
    vals_[pos] = std::move(vals);
    invalidate_anchors();
}

bool BaseSequence::pairwise_adjacent() const {
    for (int n = 0; n + 1 < size(); ++n)
        if (!core::adjacent(sigs_[n], sigs_[n + 1])) return false;
    return true;
}

std::vector<int> BaseSequence::basis_ids(int n) const {
    std::vector<int> ids;
    const int nc = rl_->space.num_controls;
    for (int j = 0; j < nc; ++j)
        if (sigs_[n].control_basic(j)) ids.push_back(j);
    for (int k : sigs_[n].K_set) ids.push_back(nc + k);
    return ids;
}

lp::Dictionary BaseSequence::build_dictionary(int n) const {
    lp::SignRestrictedLp lp_obj;
    lp_obj.A = rl_->cols;
    lp_obj.rhs = rl_->rhs;
    lp_obj.obj = rl_->obj;
    lp_obj.domain.assign(rl_->space.total(), lp::VarDomain::NonNegative);
    return lp::dictionary_for_basis(lp_obj, basis_ids(n));
}

void BaseSequence::ensure_anchor_plan() const {
    if (!anchors_.empty() || size() == 0) return;
    const int count = std::min(budget_, size());
    for (int i = 0; i < count; ++i) {
        const int pos = static_cast<int>(static_cast<long>(i) * size() / count);
        anchors_.emplace(pos, build_dictionary(pos));
    }
}

std::vector<int> BaseSequence::anchor_positions() const {
    ensure_anchor_plan();
    std::vector<int> out;
    for (const auto& [pos, d] : anchors_) out.push_back(pos);
    return out;
}

lp::Dictionary BaseSequence::reconstruct_dictionary(int n) const {
    if (n < 0 || n >= size())
        throw std::out_of_range("reconstruct_dictionary: position out of range");
    ensure_anchor_plan();
    auto it = anchors_.upper_bound(n);
    if (it == anchors_.begin()) {
        // No anchor at or before n; factorize directly and store.
        return anchors_.emplace(n, build_dictionary(n)).first->second;
    }
    --it;
    lp::Dictionary dict = it->second;

    lp::SignRestrictedLp lp_obj;
    lp_obj.A = rl_->cols;
    lp_obj.rhs = rl_->rhs;
    lp_obj.obj = rl_->obj;
    lp_obj.domain.assign(rl_->space.total(), lp::VarDomain::NonNegative);

    for (int m = it->first; m < n; ++m) {
        const auto rec = pivot_record(m);
        try {
            dict = lp::pivot(lp_obj, dict, rec.leaving.id, rec.entering.id);
        } catch (const lp::NumericalPivotError&) {
            // Replay hit a tiny pivot: refactorize a fresh anchor at m+1.
            dict = build_dictionary(m + 1);
            anchors_.emplace(m + 1, dict);
        }
    }
    return dict;
}

}  // namespace sclp::engine
