#include "defects/multi_index.hpp"

#include <algorithm>
#include <functional>
#include <map>
#include <mutex>
#include <stdexcept>

namespace defects {

MultiIndex::MultiIndex(std::initializer_list<int> axes) {
    if (axes.size() > 4) throw std::invalid_argument("MultiIndex: degree > 4 unsupported");
    for (int a : axes) entries_[static_cast<std::size_t>(k_++)] = static_cast<std::uint8_t>(a);
}

MultiIndex::MultiIndex(const std::vector<int>& axes) {
    if (axes.size() > 4) throw std::invalid_argument("MultiIndex: degree > 4 unsupported");
    for (int a : axes) entries_[static_cast<std::size_t>(k_++)] = static_cast<std::uint8_t>(a);
}

bool MultiIndex::contains(int axis) const {
    for (int i = 0; i < k_; ++i)
        if (entries_[static_cast<std::size_t>(i)] == axis) return true;
    return false;
}

bool MultiIndex::operator==(const MultiIndex& other) const {
    if (k_ != other.k_) return false;
    for (int i = 0; i < k_; ++i)
        if (entries_[static_cast<std::size_t>(i)] != other.entries_[static_cast<std::size_t>(i)]) return false;
    return true;
}

bool MultiIndex::operator<(const MultiIndex& other) const {
    if (k_ != other.k_) return k_ < other.k_;
    for (int i = 0; i < k_; ++i) {
        auto a = entries_[static_cast<std::size_t>(i)], b = other.entries_[static_cast<std::size_t>(i)];
        if (a != b) return a < b;
    }
    return false;
}

MultiIndex MultiIndex::complement(int n) const {
    std::vector<int> rest;
    for (int axis = 1; axis <= n; ++axis)
        if (!contains(axis)) rest.push_back(axis);
    return MultiIndex(rest);
}

std::string MultiIndex::to_string() const {
    std::string s = "(";
    for (int i = 0; i < k_; ++i) {
        if (i) s += ",";
        s += std::to_string(int(entries_[static_cast<std::size_t>(i)]));
    }
    return s + ")";
}

bool MultiIndex::valid(int n) const {
    for (int i = 0; i < k_; ++i) {
        int e = entries_[static_cast<std::size_t>(i)];
        if (e < 1 || e > n) return false;
        if (i > 0 && e <= entries_[static_cast<std::size_t>(i - 1)]) return false;
    }
    return true;
}

MergeResult merge_indices(const MultiIndex& a, const MultiIndex& b) {
    MergeResult out;
    std::vector<int> cat;
    cat.reserve(static_cast<std::size_t>(a.degree() + b.degree()));
    for (int i = 0; i < a.degree(); ++i) cat.push_back(a[i]);
    for (int i = 0; i < b.degree(); ++i) cat.push_back(b[i]);

    // Inversion count of the interleave; a repeated axis flags degeneracy.
    int inversions = 0;
    for (std::size_t i = 0; i < cat.size(); ++i)
        for (std::size_t j = i + 1; j < cat.size(); ++j) {
            if (cat[i] == cat[j]) return out;
            if (cat[i] > cat[j]) ++inversions;
        }
    std::sort(cat.begin(), cat.end());
    out.degenerate = false;
    out.sign = (inversions % 2 == 0) ? 1 : -1;
    out.merged = MultiIndex(cat);
    return out;
}

MergeResult merge_axis(int axis, const MultiIndex& mu) {
    return merge_indices(MultiIndex{axis}, mu);
}

const std::vector<MultiIndex>& index_set(int n, int k) {
    static std::map<std::pair<int, int>, std::vector<MultiIndex>> cache;
    static std::mutex mtx;
    std::lock_guard<std::mutex> lock(mtx);
    auto key = std::make_pair(n, k);
    auto it = cache.find(key);
    if (it != cache.end()) return it->second;

    std::vector<MultiIndex> out;
    if (k >= 0 && k <= n) {
        std::vector<int> pick;
        // Recursive enumeration unrolled as an explicit stack; k <= 4 keeps it trivial.
        std::function<void(int)> rec = [&](int start) {
            if (static_cast<int>(pick.size()) == k) {
                out.emplace_back(pick);
                return;
            }
            for (int a = start; a <= n; ++a) {
                pick.push_back(a);
                rec(a + 1);
                pick.pop_back();
            }
        };
        rec(1);
    }
    auto [pos, inserted] = cache.emplace(key, std::move(out));
    (void)inserted;
    return pos->second;
}

int index_position(int n, const MultiIndex& mu) {
    const auto& set = index_set(n, mu.degree());
    for (std::size_t i = 0; i < set.size(); ++i)
        if (set[i] == mu) return static_cast<int>(i);
    return -1;
}

int index_count(int n, int k) {
    return static_cast<int>(index_set(n, k).size());
}

}  // namespace defects
