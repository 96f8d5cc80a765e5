#pragma once

#include <set>

#include "fusionkit/voa.hpp"

namespace fusionkit {

struct NotInClass : std::runtime_error {
    explicit NotInClass(const std::string& what) : std::runtime_error(what) {}
};

struct ZeroMarkedPoint : std::runtime_error {
    explicit ZeroMarkedPoint(const std::string& what) : std::runtime_error(what) {}
};

/// One symbol a (x) z^n / (z-w)^m with a a vacuum-VOA basis monomial.
/// Negative m records zeros at the marked point: (z-w)^{-m}.
struct ChiralTermKey {
    Partition state;
    int n = 0;
    int m = 0;

    friend std::strong_ordering operator<=>(const ChiralTermKey&, const ChiralTermKey&) = default;
    friend bool operator==(const ChiralTermKey&, const ChiralTermKey&) = default;
};

enum class RestrictionClass { full, inftyLeq0, inftyLt0, wLeq0, wLt0 };

/// Finite rational combination of symbols a (x) z^n/(z-w)^m in the chiral Lie
/// algebra on P^1 minus {infinity, w, 0}. States are expanded over the PBW
/// basis so that no two terms share a (basis key, n, m) triple.
struct ChiralElement {
    AlgebraSpec algebra;
    Scalar marked_point = Scalar(1);
    SparseVec<ChiralTermKey> terms;

    bool is_zero() const { return terms.is_zero(); }
};

/// c * a (x) z^n/(z-w)^m with a any (possibly inhomogeneous) VOA vector.
ChiralElement chiral_term(const AlgebraSpec& alg, const PBWVector& a, int n, int m,
                          const Scalar& w = Scalar(1), const Scalar& c = Scalar(1));

ChiralElement chiral_add(const ChiralElement& x, const ChiralElement& y);
ChiralElement chiral_scale(const Scalar& c, ChiralElement x);

/// [a (x) z^n/(z-w)^m, b (x) z^s/(z-w)^t]
///   = sum_{i,j>=0} binom(n,i) binom(-m,j) a(i+j)b (x) z^{n+s-i}/(z-w)^{m+t+j}.
ChiralElement chiral_bracket(const ChiralElement& x, const ChiralElement& y);

/// Canonical form modulo Im(nabla), the defining relations of the chiral Lie
/// algebra: states are projected layer by layer onto a complement of L(-1)V
/// (rewriting (L(-1)b)(x)f into -b(x)f'), and vacuum terms reduce to their
/// residue classes at 0 and w. Two elements are equal in the algebra iff
/// their canonical forms have identical terms.
ChiralElement nabla_normal_form(const ChiralElement& x);

/// Equality in the chiral Lie algebra (modulo Im nabla).
bool chiral_equal(const ChiralElement& x, const ChiralElement& y);

bool in_class(const ChiralElement& x, RestrictionClass cls);

/// All classes containing x (full is always present).
std::set<RestrictionClass> classify(const ChiralElement& x);

/// rho_1: action on the module attached to the marked point w.
PBWVector rho_one(const ChiralElement& x, const ModuleSpec& m1, const PBWVector& v);

/// rho_0: action on the module attached to 0.
PBWVector rho_zero(const ChiralElement& x, const ModuleSpec& m2, const PBWVector& v);

/// rho_infty: action on the graded dual of the module attached to infinity.
/// The contragredient twist reduces to transposed plain modes: the result
/// pairs as <rho_infty(x) v', u> = -sum_j binom(-m,j)(-1)^j w^j <v', a(n-m-j) u>.
PBWVector rho_infty(const ChiralElement& x, const ModuleSpec& m3, const PBWVector& dual);

/// Rewrites x as a combination over the spanning set of the named class via
/// the addition move, the L(-1)-derivative move, and (w side) the division
/// move. Idempotent on spanning symbols. Throws NotInClass when x does not
/// classify, ZeroMarkedPoint when a w-side move needs w != 0.
ChiralElement normal_form(const ChiralElement& x, RestrictionClass cls);

/// Spanning symbols of the class for all basis states of weight <= max_weight
/// and pole/zero layers bounded by `layers` (for the infinite z^{wt-k} resp.
/// (z-w)^{wt-1+k} families).
std::vector<ChiralElement> spanning_set(const AlgebraSpec& alg, RestrictionClass cls,
                                        const Scalar& w, int max_weight, int layers);

/// Quotient maps onto L(V)_0. Infinity side: a (x) z^n/(z-w)^m maps to
/// a_[wt a-1] when n-m = wt a-1, else 0. Marked-point side: a (x) z^n (z-w)^p
/// maps to w^n a_[wt a-1] when p = wt a-1, else 0.
L0Element quotient_to_l0_infty(const ChiralElement& x);
L0Element quotient_to_l0_w(const ChiralElement& x);

/// Section of the quotient map: a_[wt a-1] represented by a (x) z^{wt a-1}
/// (infinity side) or a (x) (z-w)^{wt a-1} (marked-point side).
ChiralElement l0_section_infty(const AlgebraSpec& alg, const L0Element& x, const Scalar& w);
ChiralElement l0_section_w(const AlgebraSpec& alg, const L0Element& x, const Scalar& w);

}  // namespace fusionkit
