#pragma once

#include <functional>

#include "fusionkit/modules.hpp"

namespace fusionkit {

struct NonHomogeneous : std::runtime_error {
    explicit NonHomogeneous(const std::string& what) : std::runtime_error(what) {}
};

/// Element of the vacuum VOA together with its L(0)-weight.
struct VoaState {
    PBWVector vec;
    int weight = 0;

    bool is_zero() const { return vec.is_zero(); }
};

/// Vacuum module of the algebra (the VOA as a module over itself).
ModuleSpec vacuum_module(const AlgebraSpec& alg);

/// The vacuum 1 (weight 0).
VoaState vacuum_state(const AlgebraSpec& alg);

/// The generating state: omega = L(-2)1 (weight 2) or alpha = alpha(-1)1
/// (weight 1).
VoaState generator_state(const AlgebraSpec& alg);

/// Wraps a single PBW monomial of the vacuum module as a homogeneous state.
VoaState basis_state(const Partition& mu);

/// Weight of a homogeneous vector; throws NonHomogeneous otherwise.
int state_weight(const PBWVector& v);

/// Exact action of the mode a(n) of a homogeneous state a on v in the module
/// `target`, computed by peeling the leading creation mode of a and applying
/// the component Borcherds identity until only generator modes remain.
/// 1(n) = delta_{n,-1} id. Degree shifts by wt a - n - 1.
PBWVector composite_mode(const ModuleSpec& voa, const PBWVector& a, int n,
                         const ModuleSpec& target, const PBWVector& v);

PBWVector composite_mode(const ModuleSpec& voa, const VoaState& a, int n,
                         const ModuleSpec& target, const PBWVector& v);

/// o(a) = a(wt a - 1): the degree-preserving zero mode. Extends linearly over
/// inhomogeneous a (each homogeneous component uses its own weight).
PBWVector zero_mode(const ModuleSpec& voa, const PBWVector& a, const ModuleSpec& target,
                    const PBWVector& v);

/// theta(a) = e^{L(1)} (-1)^{L(0)} a; an involution on the vacuum VOA.
PBWVector theta_voa(const ModuleSpec& voa, const PBWVector& a);

/// The operator a'(n) = sum_j ((-1)^{wt a}/j!) (L(1)^j a)(2 wt a - n - j - 2)
/// acting on the module `target` (the contragredient-mode combination).
/// Degree shifts by -wt a + n + 1.
PBWVector contragredient_op(const ModuleSpec& voa, const VoaState& a, int n,
                            const ModuleSpec& target, const PBWVector& v);

/// Transpose action on a graded-dual vector: result satisfies
/// <result, x> = <dual, op(x)> for every x; `shift` is the degree shift of
/// op on the module, so the dual degree shifts by -shift.
PBWVector transpose_on_dual(const ModuleSpec& m,
                            const std::function<PBWVector(const PBWVector&)>& op, int shift,
                            const PBWVector& dual);

/// Contragredient mode a'(n) acting on a graded-dual window vector (the
/// transpose of contragredient_op); dual degree shifts by -wt a + n + 1.
PBWVector contragredient_mode(const ModuleSpec& voa, const VoaState& a, int n,
                              const ModuleSpec& target, const PBWVector& dual);

/// Element of the degree-zero Borcherds Lie algebra L(V)_0, stored as a
/// vector of vacuum-VOA states a standing for a_[wt a - 1]. The rewrite
/// (L(-1)a)_[wt a] = -(wt a) a_[wt a - 1] makes the representation redundant;
/// l0_canonicalize fixes a canonical representative.
struct L0Element {
    PBWVector states;

    bool is_zero() const { return states.is_zero(); }
};

/// Reduces modulo span{(L(-1) + L(0)) a : wt a <= max_weight - 1}; canonical
/// for elements supported in weights <= max_weight.
L0Element l0_canonicalize(const ModuleSpec& voa, const L0Element& x, int max_weight);

/// [a_[wt a-1], b_[wt b-1]] = sum_j binom(wt a - 1, j) (a(j)b)_[...], expanded
/// per basis monomial and re-normalized by the L(-1)-rewrite.
L0Element l0_bracket(const ModuleSpec& voa, const L0Element& x, const L0Element& y,
                     int canon_weight);

/// Representation of L(V)_0 on a module: a_[wt a - 1] acts as o(a).
PBWVector l0_act(const ModuleSpec& voa, const L0Element& x, const ModuleSpec& target,
                 const PBWVector& v);

}  // namespace fusionkit
