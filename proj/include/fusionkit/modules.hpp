#pragma once

#include <stdexcept>
#include <string>
#include <vector>

#include "fusionkit/partition.hpp"
#include "fusionkit/rational.hpp"
#include "fusionkit/sparse.hpp"

namespace fusionkit {

struct WindowOverflow : std::runtime_error {
    explicit WindowOverflow(const std::string& what) : std::runtime_error(what) {}
};

struct MarkedPointMismatch : std::runtime_error {
    explicit MarkedPointMismatch(const std::string& what) : std::runtime_error(what) {}
};

enum class AlgebraKind { virasoro, heisenberg };

/// Virasoro algebra with central charge c, or the rank-1 Heisenberg
/// algebra of level k.
struct AlgebraSpec {
    AlgebraKind kind = AlgebraKind::virasoro;
    Scalar parameter;  // central charge c, or level k

    friend bool operator==(const AlgebraSpec&, const AlgebraSpec&) = default;

    /// Weight of the generating state of the vacuum VOA (omega resp. alpha).
    int generator_weight() const { return kind == AlgebraKind::virasoro ? 2 : 1; }
};

enum class ModuleFlavor { verma, vacuumVOA, fock };

/// Finite combination of normal-ordered PBW monomials applied to a
/// highest-weight vector; term degrees are the partition degrees.
using PBWVector = SparseVec<Partition>;

/// A truncated highest-weight module: Verma M(c,h), Fock M(k,lambda), or the
/// vacuum quotient serving as the VOA itself.
struct ModuleSpec {
    AlgebraSpec algebra;
    ModuleFlavor flavor = ModuleFlavor::verma;
    Scalar highest_weight;          // h (Virasoro) or lambda (Heisenberg)
    bool bottom_generated = true;   // all concrete flavors are

    static ModuleSpec virasoro_verma(const Scalar& c, const Scalar& h) {
        return {{AlgebraKind::virasoro, c}, ModuleFlavor::verma, h, true};
    }
    static ModuleSpec virasoro_vacuum(const Scalar& c) {
        return {{AlgebraKind::virasoro, c}, ModuleFlavor::vacuumVOA, Scalar(0), true};
    }
    static ModuleSpec heisenberg_fock(const Scalar& k, const Scalar& lambda) {
        return {{AlgebraKind::heisenberg, k}, ModuleFlavor::fock, lambda, true};
    }
    static ModuleSpec heisenberg_vacuum(const Scalar& k) {
        return {{AlgebraKind::heisenberg, k}, ModuleFlavor::vacuumVOA, Scalar(0), true};
    }

    friend bool operator==(const ModuleSpec&, const ModuleSpec&) = default;

    /// Smallest admissible part in a basis partition.
    int min_part() const {
        return (algebra.kind == AlgebraKind::virasoro && flavor == ModuleFlavor::vacuumVOA) ? 2
                                                                                            : 1;
    }

    /// L(0)-eigenvalue of the bottom: h for Virasoro, lambda^2/(2k) for Fock.
    Scalar conformal_weight() const {
        if (algebra.kind == AlgebraKind::virasoro) return highest_weight;
        return highest_weight * highest_weight / (Scalar(2) * algebra.parameter);
    }
};

/// Exact action of the generator mode L(n) (resp. alpha(n)) on v, computed by
/// recursive commutation back to normal order. Degree shifts by -n.
PBWVector mode_act(const ModuleSpec& m, int n, const PBWVector& v);

/// dim of the degree-n graded piece (partition count with the part bound).
long graded_dimension(const ModuleSpec& m, int n);

/// PBW basis of the degree-n piece, in key order.
std::vector<Partition> graded_basis(const ModuleSpec& m, int n);

/// All basis partitions of degree <= max_degree, in key order.
std::vector<Partition> window_basis(const ModuleSpec& m, int max_degree);

/// Natural pairing between a graded-dual vector (coordinates in the dual PBW
/// basis) and a module vector; zero across different degrees.
Scalar dual_pairing(const PBWVector& dual, const PBWVector& v);

/// Largest term degree of v (0 for the zero vector).
int max_degree(const PBWVector& v);

/// Drops all terms of degree > max_degree. Use only in contexts that record
/// the exclusion; exact paths must call ensure_within instead.
PBWVector truncate_above(const PBWVector& v, int max_degree);

/// Throws WindowOverflow if v has a term of degree > max_degree.
void ensure_within(const PBWVector& v, int max_degree, const char* where);

}  // namespace fusionkit
