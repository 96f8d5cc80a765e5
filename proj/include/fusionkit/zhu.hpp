#pragma once

#include "fusionkit/voa.hpp"

namespace fusionkit {

/// a o v = sum_j binom(wt a, j) a(j-2) v. Generates O(V) (target = the VOA)
/// and O(M) (target = a module). Inhomogeneous a extends linearly with
/// per-component weights.
PBWVector zhu_circ(const ModuleSpec& voa, const PBWVector& a, const ModuleSpec& target,
                   const PBWVector& v);

/// a * v = sum_j binom(wt a, j) a(j-1) v (the left star action; on the VOA
/// itself this is the A(V) product).
PBWVector zhu_star_left(const ModuleSpec& voa, const PBWVector& a, const ModuleSpec& target,
                        const PBWVector& v);

/// v * a = sum_j binom(wt a - 1, j) a(j-1) v (the right star action).
PBWVector zhu_star_right(const ModuleSpec& voa, const PBWVector& v, const PBWVector& a,
                         const ModuleSpec& target);

/// Windowed model of A(V) = V/O(V) or A(M) = M/O(M): basis of states of
/// weight (degree) <= max_weight together with the echelonized span of the
/// a o v generators that lie fully inside the window. The quotient dimension
/// is a certified upper bound for the image of the window; excluded counts
/// the generators rejected by the window.
struct ZhuWindow {
    ModuleSpec voa;
    ModuleSpec target;
    int max_weight = 0;
    std::vector<Partition> basis;
    EchelonBasis<Partition> o_span;
    long excluded = 0;

    long dimension() const { return static_cast<long>(basis.size()) - o_span.rank(); }

    /// Normal form modulo the windowed O-span; WindowOverflow when v sticks
    /// out of the window.
    PBWVector reduce(const PBWVector& v) const {
        ensure_within(v, max_weight, "ZhuWindow::reduce");
        return o_span.reduce(v);
    }
};

ZhuWindow build_zhu_window(const ModuleSpec& voa, const ModuleSpec& target, int max_weight);

/// theta[a] = [e^{L(1)} (-1)^{L(0)} a]; an anti-involution of A(V).
PBWVector zhu_theta(const ModuleSpec& voa, const PBWVector& a);

/// Finite-dimensional bottom level with its zero-mode action o(a).
class BottomModule {
public:
    using Matrix = std::vector<std::vector<Scalar>>;

    /// The 1-dimensional bottom of a highest-weight module: o(a) is the
    /// eigenvalue of a(wt a - 1) on the highest-weight vector.
    static BottomModule from_module(const ModuleSpec& m);

    /// Explicit action matrices keyed by vacuum-VOA basis states.
    static BottomModule from_matrices(int dimension, std::map<Partition, Matrix> matrices);

    int dimension() const { return dim_; }
    const ModuleSpec* module() const { return has_module_ ? &module_ : nullptr; }

    /// o(a) for a single basis state a of the vacuum VOA.
    Matrix o_matrix(const ModuleSpec& voa, const Partition& a) const;

    /// o(x) for a state vector; entries combine linearly.
    Matrix o_matrix(const ModuleSpec& voa, const PBWVector& x) const;

private:
    int dim_ = 1;
    bool has_module_ = false;
    ModuleSpec module_;
    std::map<Partition, Matrix> matrices_;
};

/// Basis key of the windowed bimodule tensor model: a PBW monomial of M^1
/// paired with a bottom-basis index of M^2(0).
struct BimodKey {
    Partition mu;
    int idx = 0;

    friend std::strong_ordering operator<=>(const BimodKey& a, const BimodKey& b) {
        if (auto c = a.mu <=> b.mu; c != 0) return c;
        return a.idx <=> b.idx;
    }
    friend bool operator==(const BimodKey&, const BimodKey&) = default;
};

/// Windowed model of A(M^1) (x)_{A(V)} M^2(0): the span of M^1_{<=W} (x) M^2(0)
/// modulo O(M^1) (x) M^2(0) and (v * a) (x) u - v (x) o(a)u, keeping only
/// relation instances that lie fully inside the window.
struct BimoduleWindow {
    int max_weight = 0;
    std::vector<BimodKey> basis;
    EchelonBasis<BimodKey> relations;
    long excluded = 0;

    long dimension() const { return static_cast<long>(basis.size()) - relations.rank(); }

    SparseVec<BimodKey> reduce(const SparseVec<BimodKey>& x) const {
        return relations.reduce(x);
    }
};

BimoduleWindow build_bimodule_tensor_window(const ModuleSpec& m1, const BottomModule& bottom2,
                                            int max_weight);

}  // namespace fusionkit
