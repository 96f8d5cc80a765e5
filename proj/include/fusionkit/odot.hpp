#pragma once

#include "fusionkit/chiral.hpp"
#include "fusionkit/zhu.hpp"

namespace fusionkit {

struct InconsistentWindows : std::runtime_error {
    explicit InconsistentWindows(const std::string& what) : std::runtime_error(what) {}
};

struct HypothesisUnmet : std::runtime_error {
    explicit HypothesisUnmet(const std::string& what) : std::runtime_error(what) {}
};

/// Degree window for contracted-tensor-product computations: module depths
/// d1, d2 and the generator weight cutoff max_weight.
struct OdotWindow {
    int d1 = 4;
    int d2 = 4;
    int max_weight = 4;
};

/// Basis key of M^1 (x) M^2. Ordered with the M^2-degree dominant so that
/// echelon pivots eliminate high-degree right factors first (the rewrite
/// orientation: decrease deg v2, then deg v1, then monomial order).
struct PairKey {
    Partition mu1;
    Partition mu2;

    friend std::strong_ordering operator<=>(const PairKey& a, const PairKey& b) {
        if (auto c = a.mu2.degree() <=> b.mu2.degree(); c != 0) return c;
        if (auto c = a.mu1.degree() <=> b.mu1.degree(); c != 0) return c;
        if (auto c = a.mu2 <=> b.mu2; c != 0) return c;
        return a.mu1 <=> b.mu1;
    }
    friend bool operator==(const PairKey&, const PairKey&) = default;
};

using PairVec = SparseVec<PairKey>;

/// Windowed model of the contracted tensor product M^1 (.) M^2. Relations
/// are collected on a padded working window and the object of interest is
/// the image of the nominal window inside that quotient: padding keeps the
/// starved corner keys of the working rectangle (which no admitted relation
/// can reach) away from the reported classes. The image rank is a certified
/// upper bound on the dimension of the window's image in the true quotient.
struct OdotSpace {
    ModuleSpec m1;
    ModuleSpec m2;
    OdotWindow window;        // nominal window
    OdotWindow working;       // padded window carrying the relations
    std::vector<PairKey> basis;  // nominal keys
    EchelonBasis<PairKey> relations;
    EchelonBasis<PairKey> image;  // span of the reduced nominal keys
    long excluded = 0;

    long dimension() const { return static_cast<long>(image.rank()); }

    /// Pivot keys of the image rows: canonical representatives.
    std::vector<PairKey> quotient_basis() const;

    /// All free (non-pivot) keys of the working quotient.
    std::vector<PairKey> working_free_keys() const;

    PairVec reduce(const PairVec& x) const { return relations.reduce(x); }
};

/// Relation rows rho_1(X) (x) id + id (x) rho_0(X) for X over the ideal
/// spanning set, restricted to instances that stay inside the window.
struct OdotRelations {
    std::vector<PairVec> rows;
    long excluded = 0;
};
OdotRelations odot_relation_rows(const ModuleSpec& m1, const ModuleSpec& m2,
                                 const OdotWindow& window);

/// Builds the windowed quotient twice -- (a) straight echelon over the
/// in-window relation rows, (b) the rewrite route of the bottom-generated
/// case (strip M^2 down to its bottom, then eliminate on M^1 (x) M^2(0)) --
/// and throws InconsistentWindows if the two dimensions disagree.
OdotSpace build_odot(const ModuleSpec& m1, const ModuleSpec& m2, const OdotWindow& window,
                     bool cross_check = true);

/// a_[wt a - 1].(v1 (.) v2) = sum_j binom(wt a-1, j) a(j)v1 (.) v2
///                          + v1 (.) o(a)v2, reduced to quotient normal form.
PairVec l0_act_on_odot(const OdotSpace& space, const PBWVector& a, const PairVec& x);

/// The left A(V)-action [a].(v1 (.) v2) = (a*v1 - v1*a) (.) v2 + v1 (.) o(a)v2.
/// Both this expression and the alternative o(a)v1 (.) v2 +
/// v1 (.) Res Y(a,z)v2 (-1+z)^{wt a-1} are evaluated and must agree in the
/// quotient; requires one of the modules to be bottom-generated.
PairVec av_act_on_odot(const OdotSpace& space, const PBWVector& a, const PairVec& x);

/// L(V)_0-equivariance constraints and their kernel: linear maps
/// F : (M^1 (.) M^2) -> M^3(0) with F(a.x) = o(a) F(x) for all windowed a.
struct FusionResult {
    OdotSpace space;
    long odot_dimension = 0;
    long fusion_dimension = 0;
    bool stable = false;
    long excluded_relations = 0;
    long skipped_constraints = 0;  // skips touching the reported image
    std::vector<PairKey> quotient_keys;  // working free keys (solution domain)
    // Hom-solutions: each is a bottom-dim x quotient-key matrix, stored as
    // rows of coefficients aligned with quotient_keys.
    std::vector<std::vector<std::vector<Scalar>>> hom_basis;
};

FusionResult fusion_rule(const ModuleSpec& m1, const ModuleSpec& m2,
                         const BottomModule& bottom3, const OdotWindow& window,
                         bool stability_sweep = true);

/// Window for the w-side quotient: dual depth d3 of (M^3)', depth d2 of M^2,
/// and the generator weight cutoff.
struct BoxdotWindow {
    int d3 = 3;
    int d2 = 3;
    int max_weight = 4;
};

struct DualPairKey {
    Partition mu3;  // dual-basis monomial of (M^3)'
    Partition mu2;

    friend std::strong_ordering operator<=>(const DualPairKey& a, const DualPairKey& b) {
        if (auto c = a.mu3.degree() + a.mu2.degree() <=> b.mu3.degree() + b.mu2.degree();
            c != 0) {
            return c;
        }
        if (auto c = a.mu3 <=> b.mu3; c != 0) return c;
        return a.mu2 <=> b.mu2;
    }
    friend bool operator==(const DualPairKey&, const DualPairKey&) = default;
};

using DualPairVec = SparseVec<DualPairKey>;

/// Windowed model of (M^3)' [.] M^2 at marked point w: the dual-pair window
/// modulo in-window instances of the w-side augmented-ideal relations.
struct BoxdotSpace {
    ModuleSpec m3;
    ModuleSpec m2;
    Scalar marked_point;
    BoxdotWindow window;   // nominal
    BoxdotWindow working;  // padded window carrying the relations
    std::vector<DualPairKey> basis;  // nominal keys
    EchelonBasis<DualPairKey> relations;
    EchelonBasis<DualPairKey> image;
    long excluded = 0;

    long dimension() const { return static_cast<long>(image.rank()); }
    std::vector<DualPairKey> quotient_basis() const;
    std::vector<DualPairKey> working_free_keys() const;
    DualPairVec reduce(const DualPairVec& x) const { return relations.reduce(x); }
};

BoxdotSpace build_boxdot(const ModuleSpec& m3, const ModuleSpec& m2, const Scalar& w,
                         const BoxdotWindow& window);

/// a_[wt a-1] acting on the [.] quotient through the class of
/// a (x) (z-w)^{wt a-1}.
DualPairVec l0_act_on_boxdot(const BoxdotSpace& space, const PBWVector& a,
                             const DualPairVec& x);

/// dim Hom_{L(V)_0}((M^3)' [.] M^2, M^1(0)^*), the w-side fusion count of
/// the generalized-nuclear-democracy description.
struct BoxdotHomResult {
    long boxdot_dimension = 0;
    long hom_dimension = 0;
    long skipped_constraints = 0;
};
BoxdotHomResult boxdot_hom(const BoxdotSpace& space, const BottomModule& bottom1);

/// The comparison epimorphism pi : A(M^1) (x)_{A(V)} M^2(0) ->> M^1 (.) M^2,
/// [v1] (x) u |-> v1 (.) u, evaluated on a windowed bimodule key.
PairVec pi_map(const OdotSpace& target, const BimodKey& key);

}  // namespace fusionkit
