#include "fusionkit/voa.hpp"

#include <mutex>
#include <tuple>

namespace fusionkit {

ModuleSpec vacuum_module(const AlgebraSpec& alg) {
    return alg.kind == AlgebraKind::virasoro ? ModuleSpec::virasoro_vacuum(alg.parameter)
                                             : ModuleSpec::heisenberg_vacuum(alg.parameter);
}

VoaState vacuum_state(const AlgebraSpec&) { return {PBWVector::unit(Partition()), 0}; }

VoaState generator_state(const AlgebraSpec& alg) {
    int n = alg.generator_weight();
    return {PBWVector::unit(Partition({n})), n};
}

VoaState basis_state(const Partition& mu) { return {PBWVector::unit(mu), mu.degree()}; }

int state_weight(const PBWVector& v) {
    if (v.is_zero()) return 0;
    int w = v.begin()->first.degree();
    for (const auto& [k, c] : v) {
        if (k.degree() != w) throw NonHomogeneous("state has mixed weights");
    }
    return w;
}

namespace {

// Generator mode B(s) on a module vector: omega(s) = L(s-1), alpha(s) = alpha(s).
PBWVector generator_mode(const ModuleSpec& target, int s, const PBWVector& v) {
    int shift = target.algebra.kind == AlgebraKind::virasoro ? -1 : 0;
    return mode_act(target, s + shift, v);
}

struct TargetId {
    int kind;
    Scalar parameter;
    int flavor;
    Scalar highest_weight;

    friend bool operator<(const TargetId& a, const TargetId& b) {
        return std::tie(a.kind, a.parameter, a.flavor, a.highest_weight) <
               std::tie(b.kind, b.parameter, b.flavor, b.highest_weight);
    }
};

PBWVector composite_mode_monomial(const ModuleSpec& voa, const Partition& mu, int n,
                                  const ModuleSpec& target, const PBWVector& v);

// memoized per (state monomial, mode, target module, target monomial)
const PBWVector& composite_mode_single(const ModuleSpec& voa, const Partition& mu, int n,
                                       const ModuleSpec& target, const Partition& nu) {
    using Key = std::tuple<TargetId, Partition, int, Partition>;
    static std::map<Key, PBWVector> cache;
    static std::mutex mtx;
    Key key{{static_cast<int>(target.algebra.kind), target.algebra.parameter,
             static_cast<int>(target.flavor), target.highest_weight},
            mu,
            n,
            nu};
    {
        std::lock_guard<std::mutex> lock(mtx);
        auto it = cache.find(key);
        if (it != cache.end()) return it->second;
    }
    PBWVector value = composite_mode_monomial(voa, mu, n, target, PBWVector::unit(nu));
    std::lock_guard<std::mutex> lock(mtx);
    return cache.emplace(std::move(key), std::move(value)).first->second;
}

PBWVector composite_mode_vec(const ModuleSpec& voa, const PBWVector& a, int n,
                             const ModuleSpec& target, const PBWVector& v) {
    PBWVector out;
    for (const auto& [mu, ca] : a) {
        for (const auto& [nu, cv] : v) {
            PBWVector part = composite_mode_single(voa, mu, n, target, nu);
            part *= ca * cv;
            out += part;
        }
    }
    return out;
}

// A leading creation mode identifies the monomial state as mu = B(l)c with B
// the generating state, so its modes resolve through the m = 0 case of the
// component Borcherds identity (iterate formula):
//   (B(l)c)(n) = sum_i (-1)^i binom(l,i) [ B(l-i) c(n+i) - (-1)^l c(n+l-i) B(i) ].
PBWVector composite_mode_monomial(const ModuleSpec& voa, const Partition& mu, int n,
                                  const ModuleSpec& target, const PBWVector& v) {
    if (v.is_zero()) return {};
    if (mu.is_empty()) return n == -1 ? v : PBWVector{};  // vacuum property

    const int gen_wt = voa.algebra.generator_weight();
    const int m1 = mu.part(0);
    const int l = voa.algebra.kind == AlgebraKind::virasoro ? -m1 + 1 : -m1;
    const Partition c_mon = mu.tail();
    const int wt_c = c_mon.degree();
    const int deg_v = max_degree(v);

    PBWVector out;

    // sum_i (-1)^i binom(l,i) B(l-i) c(n+i) v ; c(n+i)v vanishes once its
    // degree deg v + wt_c - (n+i) - 1 drops below 0.
    for (int i = 0; n + i <= deg_v + wt_c - 1; ++i) {
        Scalar b = binomial(l, i);
        if (b.is_zero()) continue;
        PBWVector inner = composite_mode_vec(voa, PBWVector::unit(c_mon), n + i, target, v);
        if (inner.is_zero()) continue;
        PBWVector term = generator_mode(target, l - i, inner);
        term *= sign_pow(i) * b;
        out += term;
    }

    // - sum_i (-1)^{l+i} binom(l,i) c(n+l-i) B(i) v ; B(i)v vanishes once
    // deg v + gen_wt - i - 1 < 0.
    for (int i = 0; i <= deg_v + gen_wt - 1; ++i) {
        Scalar b = binomial(l, i);
        if (b.is_zero()) continue;
        PBWVector inner = generator_mode(target, i, v);
        if (inner.is_zero()) continue;
        PBWVector term = composite_mode_vec(voa, PBWVector::unit(c_mon), n + l - i, target, inner);
        term *= sign_pow(l + i) * b;
        out -= term;
    }

    return out;
}

}  // namespace

PBWVector composite_mode(const ModuleSpec& voa, const PBWVector& a, int n,
                         const ModuleSpec& target, const PBWVector& v) {
    return composite_mode_vec(voa, a, n, target, v);
}

PBWVector composite_mode(const ModuleSpec& voa, const VoaState& a, int n,
                         const ModuleSpec& target, const PBWVector& v) {
    return composite_mode_vec(voa, a.vec, n, target, v);
}

PBWVector zero_mode(const ModuleSpec& voa, const PBWVector& a, const ModuleSpec& target,
                    const PBWVector& v) {
    PBWVector out;
    for (const auto& [mu, c] : a) {
        PBWVector part =
            composite_mode_vec(voa, PBWVector::unit(mu), mu.degree() - 1, target, v);
        part *= c;
        out += part;
    }
    return out;
}

PBWVector theta_voa(const ModuleSpec& voa, const PBWVector& a) {
    PBWVector out;
    for (const auto& [mu, c] : a) {
        int wt = mu.degree();
        PBWVector cur = PBWVector::unit(mu);
        cur *= sign_pow(wt) * c;
        BigInt fact = 1;
        for (int j = 0; !cur.is_zero(); ++j) {
            if (j > 0) fact *= j;
            PBWVector term = cur;
            term *= Scalar(BigInt(1), fact);
            out += term;
            cur = mode_act(voa, 1, cur);
        }
    }
    return out;
}

PBWVector contragredient_op(const ModuleSpec& voa, const VoaState& a, int n,
                            const ModuleSpec& target, const PBWVector& v) {
    PBWVector out;
    PBWVector la = a.vec;  // L(1)^j a
    BigInt fact = 1;
    for (int j = 0; !la.is_zero(); ++j) {
        if (j > 0) fact *= j;
        PBWVector term = composite_mode(voa, la, 2 * a.weight - n - j - 2, target, v);
        term *= Scalar(sign_pow(a.weight)) * Scalar(BigInt(1), fact);
        out += term;
        la = mode_act(voa, 1, la);
    }
    return out;
}

PBWVector transpose_on_dual(const ModuleSpec& m,
                            const std::function<PBWVector(const PBWVector&)>& op, int shift,
                            const PBWVector& dual) {
    PBWVector out;
    // group dual support by degree
    std::map<int, PBWVector> layers;
    for (const auto& [k, c] : dual) layers[k.degree()].add(k, c);
    for (const auto& [d, layer] : layers) {
        int source_deg = d - shift;
        if (source_deg < 0) continue;
        for (const auto& kappa : graded_basis(m, source_deg)) {
            Scalar val = dual_pairing(layer, op(PBWVector::unit(kappa)));
            out.add(kappa, val);
        }
    }
    return out;
}

PBWVector contragredient_mode(const ModuleSpec& voa, const VoaState& a, int n,
                              const ModuleSpec& target, const PBWVector& dual) {
    int shift = -a.weight + n + 1;
    return transpose_on_dual(
        target, [&](const PBWVector& x) { return contragredient_op(voa, a, n, target, x); },
        shift, dual);
}

L0Element l0_canonicalize(const ModuleSpec& voa, const L0Element& x, int max_weight) {
    EchelonBasis<Partition> rel;
    for (int w = 0; w + 1 <= max_weight; ++w) {
        for (const auto& mu : graded_basis(voa, w)) {
            // (L(-1) + L(0)) a
            PBWVector row = mode_act(voa, -1, PBWVector::unit(mu));
            row.add(mu, Scalar(w));
            rel.insert(row);
        }
    }
    return {rel.reduce(x.states)};
}

L0Element l0_bracket(const ModuleSpec& voa, const L0Element& x, const L0Element& y,
                     int canon_weight) {
    PBWVector acc;
    for (const auto& [mu, cx] : x.states) {
        int wa = mu.degree();
        for (const auto& [nu, cy] : y.states) {
            int wb = nu.degree();
            for (int j = 0; wa + wb - j - 1 >= 0; ++j) {
                Scalar b = binomial(wa - 1, j);
                if (b.is_zero()) continue;
                PBWVector prod = composite_mode(voa, PBWVector::unit(mu), j, voa,
                                                PBWVector::unit(nu));
                prod *= b * cx * cy;
                acc += prod;
            }
        }
    }
    return l0_canonicalize(voa, {acc}, canon_weight);
}

PBWVector l0_act(const ModuleSpec& voa, const L0Element& x, const ModuleSpec& target,
                 const PBWVector& v) {
    return zero_mode(voa, x.states, target, v);
}

}  // namespace fusionkit
