#pragma once

#include <array>
#include <cstdint>
#include <string>
#include <vector>

namespace defects {

/// Strictly increasing multi-index over axes 1..n, degree k = length.
/// Used to enumerate the independent components of alternating tensors.
class MultiIndex {
public:
    MultiIndex() = default;
    MultiIndex(std::initializer_list<int> axes);
    explicit MultiIndex(const std::vector<int>& axes);

    int degree() const { return k_; }
    int operator[](int i) const { return entries_[static_cast<std::size_t>(i)]; }
    bool contains(int axis) const;
    bool operator==(const MultiIndex& other) const;
    bool operator<(const MultiIndex& other) const;

    /// Complement within 1..n, increasing.
    MultiIndex complement(int n) const;

    std::string to_string() const;

    /// Validates strictly increasing entries in 1..n.
    bool valid(int n) const;

private:
    int k_ = 0;
    std::array<std::uint8_t, 4> entries_{};  // 1-based axes; k_ <= 4 at desk scale
};

/// Result of merging two multi-indices: degenerate when they share an axis,
/// otherwise the sorted union with the permutation sign of the interleave.
struct MergeResult {
    bool degenerate = true;
    int sign = 0;
    MultiIndex merged;
};

MergeResult merge_indices(const MultiIndex& a, const MultiIndex& b);

/// Sign and remainder of inserting a single axis in front of mu; degenerate if present.
MergeResult merge_axis(int axis, const MultiIndex& mu);

/// All increasing degree-k multi-indices over 1..n, lexicographic. Cached.
const std::vector<MultiIndex>& index_set(int n, int k);

/// Position of mu within index_set(n, mu.degree()); -1 if absent.
int index_position(int n, const MultiIndex& mu);

/// Number of increasing degree-k multi-indices over 1..n (binomial coefficient).
int index_count(int n, int k);

}  // namespace defects
