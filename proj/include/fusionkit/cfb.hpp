#pragma once

#include "fusionkit/odot.hpp"

namespace fusionkit {

struct WellDefinednessViolation : std::runtime_error {
    explicit WellDefinednessViolation(const std::string& what) : std::runtime_error(what) {}
};

/// Exact reducer onto the contracted-product bottom class: rewrites any
/// v1 (x) v2 into a multiple of hw (x) hw by (i) descending the leading
/// creation mode of v1 through the ideal element g (x) z^{wt+m-2}/(z-1)^m
/// and (ii) stripping the leading mode of v2 through the k >= 2 family.
/// Supports the paper's example shapes (one-dimensional bottoms with a
/// terminating rewrite order); throws WellDefinednessViolation on a cycle.
class OdotReducer {
public:
    OdotReducer(ModuleSpec m1, ModuleSpec m2);

    /// Coefficient of the bottom class hw (.) hw in the class of mu1 (x) mu2.
    Scalar bottom_coefficient(const Partition& mu1, const Partition& mu2);

    const ModuleSpec& m1() const { return m1_; }
    const ModuleSpec& m2() const { return m2_; }

private:
    Scalar reduce_vec(const PBWVector& v1, const Partition& mu2);
    Scalar reduce_mixed(const Partition& mu1, const PBWVector& v2);

    ModuleSpec m1_;
    ModuleSpec m2_;
    ModuleSpec voa_;
    std::map<std::pair<Partition, Partition>, Scalar> memo_;
    std::set<std::pair<Partition, Partition>> in_progress_;
};

/// A restricted conformal block: a functional on
/// M^3(0)^* (x) M^1_{<=D} (x) M^2_{<=D} arising from a Hom-solution,
/// phi(v'_3 (x) v1 (x) v2) = <v'_3, F(v1 (.) v2)>. The stored normalization
/// is the value of F on the bottom class.
class RestrictedBlock {
public:
    RestrictedBlock(ModuleSpec m1, ModuleSpec m2, ModuleSpec m3, Scalar bottom_value);

    /// phi on basis monomials (the bottom dual slot is one-dimensional).
    Scalar eval(const Partition& mu1, const Partition& mu2) const;
    Scalar eval(const PBWVector& v1, const PBWVector& v2) const;

    const ModuleSpec& m1() const { return m1_; }
    const ModuleSpec& m2() const { return m2_; }
    const ModuleSpec& m3() const { return m3_; }
    bool is_zero_block() const { return bottom_value_.is_zero(); }

private:
    ModuleSpec m1_, m2_, m3_;
    Scalar bottom_value_;
    mutable OdotReducer reducer_;
};

/// Builds the block of the normalized Hom-solution of a fusion computation.
/// With fusion dimension zero the zero block is returned.
RestrictedBlock hom_to_block(const ModuleSpec& m1, const ModuleSpec& m2, const ModuleSpec& m3,
                             const FusionResult& fusion);

/// Audits the defining invariance: phi annihilates every in-window instance
/// of the <=0 spanning elements (weights <= max_weight, depth window d).
/// Returns the number of violations (zero for a genuine block).
long restricted_block_violations(const RestrictedBlock& phi, int max_weight, int d1, int d2);

/// Descendant key of the extended functional: modes b'(n1)...b'(nr) applied
/// to the bottom dual vector, each recorded as (state, n).
using DualChain = std::vector<std::pair<Partition, int>>;

/// The extension of a restricted block to dual descendants, evaluated
/// lazily by the defining recursion
///   psi(b'(n) x' (x) v1 (x) v2) = psi(x' (x) rho_1(b (x) z^n) v1 (x) v2)
///                               + psi(x' (x) v1 (x) rho_0(b (x) z^n) v2)
/// with values memoized per (chain, v1, v2) key.
class ExtendedBlock {
public:
    ExtendedBlock(RestrictedBlock phi, int dual_depth);

    Scalar eval(const DualChain& chain, const Partition& mu1, const Partition& mu2) const;
    Scalar eval(const DualChain& chain, const PBWVector& v1, const PBWVector& v2) const;

    const RestrictedBlock& bottom() const { return phi_; }
    int dual_depth() const { return depth_; }

    /// Corrupts one memoized value (for checker-soundness tests).
    void corrupt(const DualChain& chain, const Partition& mu1, const Partition& mu2,
                 const Scalar& delta);

private:
    RestrictedBlock phi_;
    int depth_;
    struct Key {
        DualChain chain;
        Partition mu1;
        Partition mu2;
        friend bool operator<(const Key& a, const Key& b) {
            if (a.chain != b.chain) return a.chain < b.chain;
            if (!(a.mu1 == b.mu1)) return a.mu1 < b.mu1;
            return a.mu2 < b.mu2;
        }
    };
    mutable std::map<Key, Scalar> memo_;
};

/// Builds the extension and audits well-definedness: for every in-window
/// pair of modes the two bracket-compatible evaluation orders must agree
/// (throws WellDefinednessViolation otherwise).
ExtendedBlock extend_block(const RestrictedBlock& phi, int dual_depth, int max_weight,
                           int d1, int d2);

/// One invariance failure of an extended block.
struct InvarianceViolation {
    std::string element;
    DualChain chain;
    Partition mu1;
    Partition mu2;
};

/// Machine check of the extension theorem: evaluates psi(X.(v'_3 (x) v1 (x) v2))
/// for every spanning element X of the full chiral Lie algebra (four
/// families, wt a <= max_weight, layers bounded by the window) and every
/// in-window triple; a genuine block yields no violations.
std::vector<InvarianceViolation> check_invariance(const ExtendedBlock& psi, int max_weight,
                                                  int d1, int d2);

/// Restriction G: psi evaluated on the bottom layer; together with the
/// extension F these are mutually inverse on windows.
Scalar restrict_block_value(const ExtendedBlock& psi, const Partition& mu1,
                            const Partition& mu2);

/// Layerwise dual-basis form of an extended block: the functional on
/// M^3(d)^* (x) v1 (x) v2 solved from all depth-one chains of weight up to
/// chain_weight. The overdetermined solve doubles as a well-definedness
/// audit (throws on inconsistency). Returned as values on dual basis keys.
std::map<Partition, Scalar> dual_layer_values(const ExtendedBlock& psi, int layer,
                                              int chain_weight, const Partition& mu1,
                                              const Partition& mu2);

/// The w-translated block on the w-restricted datum (v1 in the bottom of
/// M^1): phi_w(v'_3 (x) v1 (x) v2) = phi_1(...) w^{deg v'_3 - deg v2}.
/// Values are reported against dual basis keys of (M^3)'.
class MarkedPointBlock {
public:
    MarkedPointBlock(const ExtendedBlock& psi, Scalar w, int dual_depth, int chain_weight,
                     int d2);

    Scalar eval(const Partition& dual_key, const Partition& mu2) const;
    const Scalar& marked_point() const { return w_; }
    Scalar conformal_exponent() const;  // h = h1 + h2 - h3, carried symbolically

    const ModuleSpec& m1() const { return psi_->bottom().m1(); }
    const ModuleSpec& m2() const { return psi_->bottom().m2(); }
    const ModuleSpec& m3() const { return psi_->bottom().m3(); }

private:
    const ExtendedBlock* psi_;
    Scalar w_;
    int dual_depth_;
    int chain_weight_;
    std::map<std::pair<Partition, Partition>, Scalar> values_;  // (dual key, mu2)
};

/// Coefficient blocks of the generalized intertwining operator attached to
/// a w-restricted block: <v'_3 | v1(n) v2> = phi_1(v'_3 (x) v1 (x) v2) when
/// deg v'_3 = deg v2 - n - 1, else 0. Matrices are indexed by (dual key of
/// M^3, basis key of M^2).
std::map<std::pair<Partition, Partition>, Scalar> materialize_io(const MarkedPointBlock& phi,
                                                                 int n, int d2);

}  // namespace fusionkit
