#pragma once

#include <map>
#include <optional>
#include <vector>

#include "sclp/core/solution.hpp"
#include "sclp/engine/rates.hpp"

namespace sclp::engine {

// Ordered Rates-LP bases with their cached values, pivot records between
// consecutive bases, and a budgeted store of simplex dictionaries.  Only
// evenly spaced anchor dictionaries are kept; anything else is rebuilt by
// replaying the pivots from the nearest anchor at or before the position.
class BaseSequence {
  public:
    BaseSequence() = default;
    BaseSequence(const RatesLpData* rl, int dictionary_budget);

    int size() const { return static_cast<int>(sigs_.size()); }
    const core::BaseSignature& signature(int n) const { return sigs_[n]; }
    const BasisValues& values(int n) const { return vals_[n]; }
    const std::vector<core::BaseSignature>& signatures() const { return sigs_; }

    // Pivot record between bases n and n+1.
    core::PivotRecord pivot_record(int n) const;

    void append(core::BaseSignature sig, BasisValues vals);
    void insert(int pos, std::vector<core::BaseSignature> sigs,
                std::vector<BasisValues> vals);
    void remove(int first, int last);  // inclusive range of positions
    void replace(int pos, core::BaseSignature sig, BasisValues vals);

    bool pairwise_adjacent() const;

    // Dictionary of the Rates-LP basis at position n, reconstructed from the
    // nearest stored anchor by pivot replay.  A tiny replay pivot triggers a
    // fresh anchor factorization at n.
    lp::Dictionary reconstruct_dictionary(int n) const;

    // Positions currently holding stored dictionaries (for tests).
    std::vector<int> anchor_positions() const;

  private:
    void invalidate_anchors() { anchors_.clear(); }
    void ensure_anchor_plan() const;
    lp::Dictionary build_dictionary(int n) const;
    std::vector<int> basis_ids(int n) const;

    const RatesLpData* rl_ = nullptr;
    int budget_ = 128;
    std::vector<core::BaseSignature> sigs_;
    std::vector<BasisValues> vals_;
    mutable std::map<int, lp::Dictionary> anchors_;
};

}  // namespace sclp::engine
