#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace lsss {

/// Participant subsets are bitmasks: bit i set <=> participant i (0-based)
/// is in the set. At most 64 participants.
using SubsetMask = std::uint64_t;

SubsetMask mask_of(const std::vector<int>& participants);
std::vector<int> mask_members(SubsetMask m);
int popcount(SubsetMask m);
SubsetMask full_mask(int n);  // {0,...,n-1}

struct ContractedStructure;

/// A monotone access structure over participants {0,...,n-1}, stored by
/// its basis (the antichain of minimal authorized subsets).
class AccessStructure {
  public:
    /// Input basis members may contain redundant supersets; the stored
    /// basis is the minimized antichain, sorted.
    AccessStructure(int n, std::vector<SubsetMask> basis);

    int n() const { return n_; }
    const std::vector<SubsetMask>& basis() const { return basis_; }

    /// True iff some basis member is contained in `a`.
    bool is_authorized(SubsetMask a) const;

    /// True iff every participant appears in some minimal authorized set.
    bool is_connected() const;

    /// Structure on the participants outside q authorizing exactly the
    /// sets A with A ∪ q authorized here. Survivors are re-indexed
    /// 0..n-|q|-1 in ascending old order; the map records new -> old.
    ContractedStructure contract(SubsetMask q) const;

    /// All subsets of size >= t are authorized.
    static AccessStructure threshold(int t, int n);

    /// t when this is exactly a t-out-of-n threshold structure.
    std::optional<int> threshold_value() const;

    bool operator==(const AccessStructure& other) const {
        return n_ == other.n_ && basis_ == other.basis_;
    }

    /// `n=4; basis={1,2,4},{1,3,4}` (participants 1-based in text form).
    std::string to_text() const;
    static AccessStructure from_text(std::string_view text);

  private:
    int n_;
    std::vector<SubsetMask> basis_;
};

struct ContractedStructure {
    AccessStructure structure;
    std::vector<int> index_map;  // new participant index -> old
};

}  // namespace lsss
