#include "fusionkit/chiral.hpp"

#include <mutex>
#include <tuple>

namespace fusionkit {

namespace {

void check_same_point(const ChiralElement& x, const ChiralElement& y) {
    if (!(x.marked_point == y.marked_point)) {
        throw MarkedPointMismatch("chiral elements live at different marked points");
    }
}

bool key_in_class(const ChiralTermKey& k, RestrictionClass cls) {
    int wt = k.state.degree();
    switch (cls) {
        case RestrictionClass::full:
            return true;
        case RestrictionClass::inftyLeq0:
            return k.n - k.m <= wt - 1;
        case RestrictionClass::inftyLt0:
            return k.n - k.m < wt - 1;
        case RestrictionClass::wLeq0:
            return -k.m >= wt - 1;
        case RestrictionClass::wLt0:
            return -k.m > wt - 1;
    }
    return false;
}

}  // namespace

ChiralElement chiral_term(const AlgebraSpec& alg, const PBWVector& a, int n, int m,
                          const Scalar& w, const Scalar& c) {
    ChiralElement x{alg, w, {}};
    for (const auto& [mu, coef] : a) x.terms.add({mu, n, m}, c * coef);
    return x;
}

ChiralElement chiral_add(const ChiralElement& x, const ChiralElement& y) {
    check_same_point(x, y);
    ChiralElement out = x;
    out.terms += y.terms;
    return out;
}

ChiralElement chiral_scale(const Scalar& c, ChiralElement x) {
    x.terms *= c;
    return x;
}

ChiralElement chiral_bracket(const ChiralElement& x, const ChiralElement& y) {
    check_same_point(x, y);
    const ModuleSpec voa = vacuum_module(x.algebra);
    ChiralElement out{x.algebra, x.marked_point, {}};
    for (const auto& [kx, cx] : x.terms) {
        const int wa = kx.state.degree();
        for (const auto& [ky, cy] : y.terms) {
            const int wb = ky.state.degree();
            // a(i+j)b vanishes once i+j > wa + wb - 1.
            for (int i = 0; i <= wa + wb - 1; ++i) {
                Scalar bi = binomial(kx.n, i);
                if (bi.is_zero()) continue;
                for (int j = 0; i + j <= wa + wb - 1; ++j) {
                    Scalar bj = binomial(-kx.m, j);
                    if (bj.is_zero()) continue;
                    PBWVector prod = composite_mode(voa, PBWVector::unit(kx.state), i + j, voa,
                                                    PBWVector::unit(ky.state));
                    if (prod.is_zero()) continue;
                    Scalar coef = cx * cy * bi * bj;
                    for (const auto& [mu, pc] : prod) {
                        out.terms.add({mu, kx.n + ky.n - i, kx.m + ky.m + j}, coef * pc);
                    }
                }
            }
        }
    }
    return out;
}

namespace {

// Augmented elimination rows for one weight layer: image = L(-1) e_nu over
// the layer's keys, payload = e_nu. Reduction tracks the preimage.
struct LMinusOneSplit {
    std::vector<std::pair<PBWVector, PBWVector>> rows;  // (image, preimage), image pivot-normalized

    // v = L(-1) * pre + residual with residual supported off the pivots.
    std::pair<PBWVector, PBWVector> split(PBWVector v) const {
        PBWVector pre;
        for (const auto& [image, payload] : rows) {
            Scalar c = v.coeff(image.leading_key());
            if (c.is_zero()) continue;
            v -= c * image;
            pre += c * payload;
        }
        return {std::move(v), std::move(pre)};
    }
};

LMinusOneSplit l_minus_one_split_impl(const ModuleSpec& voa, int layer_weight);

const LMinusOneSplit& l_minus_one_split(const ModuleSpec& voa, int layer_weight) {
    using Key = std::tuple<int, Scalar, int>;
    static std::map<Key, LMinusOneSplit> cache;
    static std::mutex mtx;
    Key key{static_cast<int>(voa.algebra.kind), voa.algebra.parameter, layer_weight};
    std::lock_guard<std::mutex> lock(mtx);
    auto it = cache.find(key);
    if (it != cache.end()) return it->second;
    return cache.emplace(std::move(key), l_minus_one_split_impl(voa, layer_weight))
        .first->second;
}

LMinusOneSplit l_minus_one_split_impl(const ModuleSpec& voa, int layer_weight) {
    LMinusOneSplit out;
    if (layer_weight <= 0) return out;
    for (const auto& nu : graded_basis(voa, layer_weight - 1)) {
        PBWVector image = mode_act(voa, -1, PBWVector::unit(nu));
        PBWVector pre = PBWVector::unit(nu);
        for (const auto& [img, pay] : out.rows) {
            Scalar c = image.coeff(img.leading_key());
            if (c.is_zero()) continue;
            image -= c * img;
            pre -= c * pay;
        }
        if (image.is_zero()) continue;
        Scalar inv = Scalar(1) / image.coeff(image.leading_key());
        image *= inv;
        pre *= inv;
        out.rows.emplace_back(std::move(image), std::move(pre));
    }
    return out;
}

// Partial-fraction decomposition of z^n (z-w)^{-m} over the function basis
// {z^k : k in Z} u {(z-w)^{-j} : j >= 1}, recorded as keys (k,0) and (0,j).
void function_canonicalize(int n, int m, const Scalar& w, const Scalar& coef,
                           std::map<std::pair<int, int>, Scalar>& out) {
    if (coef.is_zero()) return;
    if (m <= 0) {
        // polynomial factor: expand (z-w)^{-m} binomially into z-powers
        for (int i = 0; i <= -m; ++i) {
            Scalar c = coef * binomial(-m, i) * sign_pow(-m - i) * pow_scalar(w, -m - i);
            if (c.is_zero()) continue;
            auto [it, ok] = out.try_emplace({n + i, 0}, c);
            if (!ok) it->second += c;
        }
        return;
    }
    if (n == 0) {
        auto [it, ok] = out.try_emplace({0, m}, coef);
        if (!ok) it->second += coef;
        return;
    }
    if (n > 0) {
        // z = (z-w) + w
        function_canonicalize(n - 1, m - 1, w, coef, out);
        function_canonicalize(n - 1, m, w, coef * w, out);
        return;
    }
    // n < 0: 1/(z(z-w)) = (1/w)(1/(z-w) - 1/z)
    Scalar c = coef / w;
    function_canonicalize(n + 1, m, w, c, out);
    function_canonicalize(n, m - 1, w, -c, out);
}

}  // namespace

ChiralElement nabla_normal_form(const ChiralElement& x) {
    const ModuleSpec voa = vacuum_module(x.algebra);
    const Scalar& w = x.marked_point;
    if (w.is_zero()) throw ZeroMarkedPoint("nabla normal form needs w != 0");
    ChiralElement out{x.algebra, w, {}};

    // Rewrite every rational function over the partial-fraction basis, then
    // work down through state weights; the L(-1)-rewrite only lowers them and
    // maps basis functions to basis functions.
    std::map<int, SparseVec<ChiralTermKey>> by_weight;
    for (const auto& [k, c] : x.terms) {
        std::map<std::pair<int, int>, Scalar> funcs;
        function_canonicalize(k.n, k.m, w, c, funcs);
        for (const auto& [nm, fc] : funcs) {
            by_weight[k.state.degree()].add({k.state, nm.first, nm.second}, fc);
        }
    }

    while (!by_weight.empty()) {
        auto it = std::prev(by_weight.end());
        const int wt = it->first;
        SparseVec<ChiralTermKey> layer = it->second;
        by_weight.erase(it);
        if (layer.is_zero()) continue;
        if (wt == 0) {
            // vacuum terms: 1 (x) f is exact unless f has a residue, so only
            // the classes of z^{-1} and (z-w)^{-1} survive.
            for (const auto& [k, c] : layer) {
                if (k.m == 0 && k.n == -1) out.terms.add(k, c);
                if (k.m == 1 && k.n == 0) out.terms.add(k, c);
            }
            continue;
        }
        const LMinusOneSplit& split = l_minus_one_split(voa, wt);
        std::map<std::pair<int, int>, PBWVector> groups;
        for (const auto& [k, c] : layer) groups[{k.n, k.m}].add(k.state, c);
        for (const auto& [nm, vec] : groups) {
            auto [residual, pre] = split.split(vec);
            for (const auto& [mu, c] : residual) out.terms.add({mu, nm.first, nm.second}, c);
            if (pre.is_zero()) continue;
            // (L(-1)b)(x)f = -b(x)f' ; for basis functions f' is again basic:
            // (z^n)' = n z^{n-1}, ((z-w)^{-m})' = -m (z-w)^{-m-1}.
            for (const auto& [mu, c] : pre) {
                if (nm.second == 0 && nm.first != 0) {
                    by_weight[mu.degree()].add({mu, nm.first - 1, 0}, -c * Scalar(nm.first));
                }
                if (nm.second != 0) {
                    by_weight[mu.degree()].add({mu, 0, nm.second + 1}, c * Scalar(nm.second));
                }
            }
        }
    }
    return out;
}

bool chiral_equal(const ChiralElement& x, const ChiralElement& y) {
    check_same_point(x, y);
    ChiralElement diff = x;
    diff.terms -= y.terms;
    return nabla_normal_form(diff).is_zero();
}

bool in_class(const ChiralElement& x, RestrictionClass cls) {
    for (const auto& [k, c] : x.terms) {
        if (!key_in_class(k, cls)) return false;
    }
    return true;
}

std::set<RestrictionClass> classify(const ChiralElement& x) {
    std::set<RestrictionClass> out{RestrictionClass::full};
    for (auto cls : {RestrictionClass::inftyLeq0, RestrictionClass::inftyLt0,
                     RestrictionClass::wLeq0, RestrictionClass::wLt0}) {
        if (in_class(x, cls)) out.insert(cls);
    }
    return out;
}

PBWVector rho_one(const ChiralElement& x, const ModuleSpec& m1, const PBWVector& v) {
    const ModuleSpec voa = vacuum_module(x.algebra);
    const Scalar& w = x.marked_point;
    PBWVector out;
    const int deg_v = max_degree(v);
    for (const auto& [k, c] : x.terms) {
        const int wt = k.state.degree();
        // sum_j binom(n,j) w^{n-j} a(j-m) v ; a(j-m)v dies once j-m exceeds
        // deg v + wt - 1.
        for (int j = 0; j - k.m <= deg_v + wt - 1; ++j) {
            Scalar b = binomial(k.n, j);
            if (b.is_zero()) continue;
            PBWVector term = composite_mode(voa, PBWVector::unit(k.state), j - k.m, m1, v);
            if (term.is_zero()) continue;
            term *= c * b * pow_scalar(w, k.n - j);
            out += term;
        }
    }
    return out;
}

PBWVector rho_zero(const ChiralElement& x, const ModuleSpec& m2, const PBWVector& v) {
    const ModuleSpec voa = vacuum_module(x.algebra);
    const Scalar& w = x.marked_point;
    PBWVector out;
    const int deg_v = max_degree(v);
    for (const auto& [k, c] : x.terms) {
        const int wt = k.state.degree();
        // sum_j binom(-m,j) (-1)^{-m-j} w^{-m-j} a(n+j) v
        for (int j = 0; k.n + j <= deg_v + wt - 1; ++j) {
            Scalar b = binomial(-k.m, j);
            if (b.is_zero()) continue;
            PBWVector term = composite_mode(voa, PBWVector::unit(k.state), k.n + j, m2, v);
            if (term.is_zero()) continue;
            term *= c * b * sign_pow(-k.m - j) * pow_scalar(w, -k.m - j);
            out += term;
        }
    }
    return out;
}

PBWVector rho_infty(const ChiralElement& x, const ModuleSpec& m3, const PBWVector& dual) {
    const ModuleSpec voa = vacuum_module(x.algebra);
    const Scalar& w = x.marked_point;
    PBWVector out;
    if (dual.is_zero()) return out;
    const int top = max_degree(dual);
    for (const auto& [k, c] : x.terms) {
        const int wt = k.state.degree();
        // -sum_j binom(-m,j) (-1)^j w^j a(n-m-j)^T ; the transpose shifts the
        // dual degree by (n-m-j) - wt + 1, so large j drops below degree 0.
        for (int j = 0; top + (k.n - k.m - j) - wt + 1 >= 0; ++j) {
            Scalar b = binomial(-k.m, j);
            if (b.is_zero()) continue;
            const int mode = k.n - k.m - j;
            PBWVector term = transpose_on_dual(
                m3,
                [&](const PBWVector& u) {
                    return composite_mode(voa, PBWVector::unit(k.state), mode, m3, u);
                },
                wt - mode - 1, dual);
            if (term.is_zero()) continue;
            term *= Scalar(-1) * c * b * sign_pow(j) * pow_scalar(w, j);
            out += term;
        }
    }
    return out;
}

namespace {

struct Reducer {
    AlgebraSpec alg;
    Scalar w;
    RestrictionClass cls;
    ModuleSpec voa;

    bool is_spanning(int wt, int n, int m) const {
        switch (cls) {
            case RestrictionClass::inftyLeq0:
                return (m == 1 && n == wt) || (m == 0 && n <= wt - 1);
            case RestrictionClass::inftyLt0:
                return (m == 1 && n == wt - 1) || (m == 0 && n <= wt - 2);
            case RestrictionClass::full:
                return (m == 1 && n == wt - 1) || m == 0;
            case RestrictionClass::wLeq0:
                return (n == -1 && -m == wt) || (n == 0 && -m >= wt - 1);
            case RestrictionClass::wLt0:
                return (n == -1 && -m == wt) || (n == 0 && -m >= wt);
        }
        return false;
    }

    void reduce_term(const Partition& mu, int n, int m, const Scalar& coef,
                     SparseVec<ChiralTermKey>& out) const {
        if (coef.is_zero()) return;
        const int wt = mu.degree();
        if (is_spanning(wt, n, m)) {
            out.add({mu, n, m}, coef);
            return;
        }
        const bool w_side = cls == RestrictionClass::wLeq0 || cls == RestrictionClass::wLt0;
        if (!w_side) {
            if (m >= 2) {
                // (m-1) X_a(n,m) = (L(-1)a)(n, m-1) + n X_a(n-1, m-1)
                Scalar inv(1, m - 1);
                PBWVector la = mode_act(voa, -1, PBWVector::unit(mu));
                for (const auto& [nu, c2] : la) reduce_term(nu, n, m - 1, coef * inv * c2, out);
                if (n != 0) reduce_term(mu, n - 1, m - 1, coef * inv * Scalar(n), out);
                return;
            }
            if (m == 1) {
                // X(n,1) = [X(n+1,1) - X(n,0)] / w ascends towards the
                // boundary column; past it, descend via
                // X(n,1) = X(n-1,0) + w X(n-1,1).
                const int target_n = (cls == RestrictionClass::inftyLeq0) ? wt : wt - 1;
                if (n < target_n) {
                    Scalar inv = Scalar(1) / w;
                    reduce_term(mu, n + 1, 1, coef * inv, out);
                    reduce_term(mu, n, 0, -coef * inv, out);
                } else {
                    reduce_term(mu, n - 1, 0, coef, out);
                    reduce_term(mu, n - 1, 1, coef * w, out);
                }
                return;
            }
            // m <= 0: expand the polynomial (z-w)^{-m} into powers of z.
            for (int i = 0; i <= -m; ++i) {
                Scalar b = binomial(-m, i) * sign_pow(-m - i) * pow_scalar(w, -m - i);
                reduce_term(mu, n + i, 0, coef * b, out);
            }
            return;
        }
        // w side; p = -m is the (z-w)-exponent.
        const int p = -m;
        if (w.is_zero()) throw ZeroMarkedPoint("w-side normal form needs w != 0");
        if (n > 0) {
            // X(n,p) = X(n-1, p+1) + w X(n-1, p)
            reduce_term(mu, n - 1, m - 1, coef, out);
            reduce_term(mu, n - 1, m, coef * w, out);
            return;
        }
        if (n == -1) {
            // descend in p: X(-1,q) = X(0,q-1) - w X(-1,q-1); at the bottom
            // layer ascend instead: X(-1,wt-1) = [X(0,wt-1) - X(-1,wt)] / w.
            if (p > wt) {
                reduce_term(mu, 0, m + 1, coef, out);
                reduce_term(mu, -1, m + 1, -coef * w, out);
            } else {
                Scalar inv = Scalar(1) / w;
                reduce_term(mu, 0, m, coef * inv, out);
                reduce_term(mu, -1, m - 1, -coef * inv, out);
            }
            return;
        }
        // n <= -2: division move, nbar = -n-1 >= 1:
        // X_a(n,p) = [ (nbar - p - 1) X_a(n+1,p) - X_{L(-1)a}(n+1, p+1) ] / (nbar w)
        const long nbar = -static_cast<long>(n) - 1;
        Scalar inv = Scalar(1) / (Scalar(nbar) * w);
        reduce_term(mu, n + 1, m, coef * inv * Scalar(nbar - p - 1), out);
        PBWVector la = mode_act(voa, -1, PBWVector::unit(mu));
        for (const auto& [nu, c2] : la) reduce_term(nu, n + 1, m - 1, -coef * inv * c2, out);
    }
};

}  // namespace

ChiralElement normal_form(const ChiralElement& x, RestrictionClass cls) {
    if (!in_class(x, cls)) throw NotInClass("element does not lie in the requested class");
    Reducer red{x.algebra, x.marked_point, cls, vacuum_module(x.algebra)};
    ChiralElement out{x.algebra, x.marked_point, {}};
    for (const auto& [k, c] : x.terms) red.reduce_term(k.state, k.n, k.m, c, out.terms);
    return out;
}

std::vector<ChiralElement> spanning_set(const AlgebraSpec& alg, RestrictionClass cls,
                                        const Scalar& w, int max_weight, int layers) {
    const ModuleSpec voa = vacuum_module(alg);
    std::vector<ChiralElement> out;
    for (int wt = 0; wt <= max_weight; ++wt) {
        for (const auto& mu : graded_basis(voa, wt)) {
            PBWVector a = PBWVector::unit(mu);
            switch (cls) {
                case RestrictionClass::inftyLeq0:
                    out.push_back(chiral_term(alg, a, wt, 1, w));
                    for (int k = 1; k <= layers; ++k) {
                        out.push_back(chiral_term(alg, a, wt - k, 0, w));
                    }
                    break;
                case RestrictionClass::inftyLt0:
                    out.push_back(chiral_term(alg, a, wt - 1, 1, w));
                    for (int k = 2; k <= layers; ++k) {
                        out.push_back(chiral_term(alg, a, wt - k, 0, w));
                    }
                    break;
                case RestrictionClass::full:
                    out.push_back(chiral_term(alg, a, wt - 1, 1, w));
                    out.push_back(chiral_term(alg, a, wt - 1, 0, w));
                    for (int k = 2; k <= layers; ++k) {
                        out.push_back(chiral_term(alg, a, wt - k, 0, w));
                    }
                    for (int l = 0; l <= layers; ++l) {
                        out.push_back(chiral_term(alg, a, wt + l, 0, w));
                    }
                    break;
                case RestrictionClass::wLeq0:
                    out.push_back(chiral_term(alg, a, -1, -wt, w));
                    for (int k = 0; k <= layers; ++k) {
                        out.push_back(chiral_term(alg, a, 0, -(wt - 1 + k), w));
                    }
                    break;
                case RestrictionClass::wLt0:
                    out.push_back(chiral_term(alg, a, -1, -wt, w));
                    for (int k = 1; k <= layers; ++k) {
                        out.push_back(chiral_term(alg, a, 0, -(wt - 1 + k), w));
                    }
                    break;
            }
        }
    }
    return out;
}

L0Element quotient_to_l0_infty(const ChiralElement& x) {
    L0Element out;
    for (const auto& [k, c] : x.terms) {
        if (k.n - k.m == k.state.degree() - 1) out.states.add(k.state, c);
    }
    return out;
}

L0Element quotient_to_l0_w(const ChiralElement& x) {
    L0Element out;
    for (const auto& [k, c] : x.terms) {
        if (-k.m == k.state.degree() - 1) {
            out.states.add(k.state, c * pow_scalar(x.marked_point, k.n));
        }
    }
    return out;
}

ChiralElement l0_section_infty(const AlgebraSpec& alg, const L0Element& x, const Scalar& w) {
    ChiralElement out{alg, w, {}};
    for (const auto& [mu, c] : x.states) out.terms.add({mu, mu.degree() - 1, 0}, c);
    return out;
}

ChiralElement l0_section_w(const AlgebraSpec& alg, const L0Element& x, const Scalar& w) {
    ChiralElement out{alg, w, {}};
    for (const auto& [mu, c] : x.states) out.terms.add({mu, 0, -(mu.degree() - 1)}, c);
    return out;
}

}  // namespace fusionkit
