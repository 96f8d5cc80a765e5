#pragma once

#include <compare>
#include <cstdint>
#include <numeric>
#include <string>
#include <vector>

namespace fusionkit {

/// A normal-ordered mode monomial acting on a highest-weight vector,
/// recorded as the weakly decreasing list of its creation-mode magnitudes:
/// parts (n1 >= n2 >= ... >= nr >= 1) stand for L(-n1)...L(-nr)v or
/// alpha(-n1)...alpha(-nr)v. The empty partition is the highest-weight
/// vector itself.
class Partition {
public:
    Partition() = default;
    explicit Partition(std::vector<int> parts) : parts_(std::move(parts)) {}

    static Partition empty() { return Partition(); }

    int degree() const { return std::accumulate(parts_.begin(), parts_.end(), 0); }
    int length() const { return static_cast<int>(parts_.size()); }
    bool is_empty() const { return parts_.empty(); }
    int min_part() const { return parts_.empty() ? 0 : parts_.back(); }

    const std::vector<int>& parts() const { return parts_; }
    int part(int i) const { return parts_[static_cast<std::size_t>(i)]; }

    /// Partition with the leading (largest) part removed.
    Partition tail() const {
        return Partition(std::vector<int>(parts_.begin() + 1, parts_.end()));
    }

    /// Partition with an extra part n >= leading part prepended.
    Partition prepend(int n) const {
        std::vector<int> p;
        p.reserve(parts_.size() + 1);
        p.push_back(n);
        p.insert(p.end(), parts_.begin(), parts_.end());
        return Partition(std::move(p));
    }

    std::string str() const;

    /// Ordered by (degree, then lexicographic parts): pivots in echelon
    /// reduction eliminate high-degree keys first.
    friend std::strong_ordering operator<=>(const Partition& a, const Partition& b) {
        int da = a.degree(), db = b.degree();
        if (da != db) return da <=> db;
        return a.parts_ <=> b.parts_;
    }
    friend bool operator==(const Partition& a, const Partition& b) = default;

private:
    std::vector<int> parts_;
};

/// All partitions of n with every part >= min_part, in increasing key order.
std::vector<Partition> partitions_of(int n, int min_part);

/// Number of partitions of n with every part >= min_part.
long partition_count(int n, int min_part);

}  // namespace fusionkit
