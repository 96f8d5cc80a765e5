#pragma once

#include <map>
#include <utility>
#include <vector>

#include "fusionkit/rational.hpp"

namespace fusionkit {

/// Sparse vector over an ordered basis-key type K. Never stores zero
/// coefficients; iteration order is the key order, so every downstream
/// computation is deterministic.
template <typename K>
class SparseVec {
public:
    using Map = std::map<K, Scalar>;

    SparseVec() = default;

    static SparseVec unit(const K& k) {
        SparseVec v;
        v.m_[k] = Scalar(1);
        return v;
    }

    bool is_zero() const { return m_.empty(); }
    std::size_t size() const { return m_.size(); }

    Scalar coeff(const K& k) const {
        auto it = m_.find(k);
        return it == m_.end() ? Scalar(0) : it->second;
    }

    void add(const K& k, const Scalar& c) {
        if (c.is_zero()) return;
        auto [it, inserted] = m_.try_emplace(k, c);
        if (!inserted) {
            it->second += c;
            if (it->second.is_zero()) m_.erase(it);
        }
    }

    SparseVec& operator+=(const SparseVec& o) {
        for (const auto& [k, c] : o.m_) add(k, c);
        return *this;
    }
    SparseVec& operator-=(const SparseVec& o) {
        for (const auto& [k, c] : o.m_) add(k, -c);
        return *this;
    }
    SparseVec& operator*=(const Scalar& c) {
        if (c.is_zero()) {
            m_.clear();
            return *this;
        }
        for (auto& [k, v] : m_) v *= c;
        return *this;
    }

    friend SparseVec operator+(SparseVec a, const SparseVec& b) { return a += b; }
    friend SparseVec operator-(SparseVec a, const SparseVec& b) { return a -= b; }
    friend SparseVec operator*(const Scalar& c, SparseVec v) { return v *= c; }

    friend bool operator==(const SparseVec& a, const SparseVec& b) { return a.m_ == b.m_; }

    /// Largest key with nonzero coefficient; requires !is_zero().
    const K& leading_key() const { return m_.rbegin()->first; }

    typename Map::const_iterator begin() const { return m_.begin(); }
    typename Map::const_iterator end() const { return m_.end(); }
    const Map& entries() const { return m_; }

private:
    Map m_;
};

/// Row-echelon basis with full back-substitution: each row has pivot
/// coefficient 1 and its pivot key occurs in no other row, so reduce() is
/// the unique normal form modulo the row span. Pivots are the largest keys
/// of their rows; with keys ordered by (degree, ...) this eliminates
/// high-degree keys and leaves low-degree representatives.
template <typename K>
class EchelonBasis {
public:
    /// Normal form of v against the current rows. Rows are fully
    /// inter-reduced, so eliminating each pivot key present in v (largest
    /// first) never reintroduces a pivot key.
    SparseVec<K> reduce(SparseVec<K> v) const {
        if (rows_.empty()) return v;
        for (;;) {
            const K* hit = nullptr;
            for (const auto& [k, c] : v) {
                if (rows_.count(k) != 0) hit = &k;  // ascending scan keeps the largest
            }
            if (hit == nullptr) return v;
            v -= v.coeff(*hit) * rows_.at(*hit);
        }
    }

    /// Inserts v; returns the normal form of v against the previous rows
    /// (zero iff v was already in the span). Rows are kept fully
    /// inter-reduced so reduce() is a single elimination pass.
    SparseVec<K> insert(SparseVec<K> v) {
        v = reduce(std::move(v));
        if (v.is_zero()) return v;
        SparseVec<K> row = v;
        row *= Scalar(1) / row.coeff(row.leading_key());
        const K pivot = row.leading_key();
        for (auto& [p, r] : rows_) {
            Scalar c = r.coeff(pivot);
            if (!c.is_zero()) r -= c * row;
        }
        rows_.emplace(pivot, std::move(row));
        return v;
    }

    /// Full back-substitution: afterwards no row contains another row's
    /// pivot key, so the rows form the reduced echelon form.
    void normalize() {
        for (auto it = rows_.rbegin(); it != rows_.rend(); ++it) {
            SparseVec<K> tail = it->second;
            tail.add(it->first, Scalar(-1));
            SparseVec<K> reduced;
            {
                // reduce the tail against all rows except this one
                SparseVec<K> t = std::move(tail);
                for (;;) {
                    const K* hit = nullptr;
                    for (const auto& [k, c] : t) {
                        if (k != it->first && rows_.count(k) != 0) hit = &k;
                    }
                    if (hit == nullptr) break;
                    t -= t.coeff(*hit) * rows_.at(*hit);
                }
                reduced = std::move(t);
            }
            reduced.add(it->first, Scalar(1));
            it->second = std::move(reduced);
        }
    }

    bool contains(const SparseVec<K>& v) const { return reduce(v).is_zero(); }

    std::size_t rank() const { return rows_.size(); }

    const std::map<K, SparseVec<K>>& rows() const { return rows_; }

    bool is_pivot(const K& k) const { return rows_.count(k) != 0; }

private:
    std::map<K, SparseVec<K>> rows_;  // pivot key -> reduced row
};

template <typename K>
struct KernelResult {
    std::size_t dimension = 0;
    std::vector<SparseVec<K>> basis;  // exact kernel vectors over `keys`
};

/// Solves <constraint_i, x> = 0 over the span of `keys`; returns the kernel
/// dimension and an explicit basis. With no constraints the kernel is the
/// whole key space.
template <typename K>
KernelResult<K> solve_kernel(const std::vector<K>& keys,
                             const std::vector<SparseVec<K>>& constraints) {
    EchelonBasis<K> ech;
    for (const auto& c : constraints) ech.insert(c);
    ech.normalize();  // kernel extraction below needs the reduced form
    KernelResult<K> out;
    for (const K& free_key : keys) {
        if (ech.is_pivot(free_key)) continue;
        SparseVec<K> v = SparseVec<K>::unit(free_key);
        for (const auto& [pivot, row] : ech.rows()) {
            Scalar c = row.coeff(free_key);
            if (!c.is_zero()) v.add(pivot, -c);
        }
        out.basis.push_back(std::move(v));
    }
    out.dimension = out.basis.size();
    return out;
}

}  // namespace fusionkit
