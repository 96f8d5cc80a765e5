#include "fusionkit/cfb.hpp"

namespace fusionkit {

OdotReducer::OdotReducer(ModuleSpec m1, ModuleSpec m2)
    : m1_(std::move(m1)), m2_(std::move(m2)), voa_(vacuum_module(m1_.algebra)) {}

Scalar OdotReducer::reduce_vec(const PBWVector& v1, const Partition& mu2) {
    Scalar acc(0);
    for (const auto& [nu, c] : v1) acc += c * bottom_coefficient(nu, mu2);
    return acc;
}

Scalar OdotReducer::reduce_mixed(const Partition& mu1, const PBWVector& v2) {
    Scalar acc(0);
    for (const auto& [nu, c] : v2) acc += c * bottom_coefficient(mu1, nu);
    return acc;
}

Scalar OdotReducer::bottom_coefficient(const Partition& mu1, const Partition& mu2) {
    if (mu1.is_empty() && mu2.is_empty()) return Scalar(1);
    auto key = std::make_pair(mu1, mu2);
    auto it = memo_.find(key);
    if (it != memo_.end()) return it->second;
    if (!in_progress_.insert(key).second) {
        throw WellDefinednessViolation("contracted-product rewrite does not terminate");
    }

    const bool vir = m1_.algebra.kind == AlgebraKind::virasoro;
    const int gen_wt = m1_.algebra.generator_weight();
    const int mode_shift = vir ? -1 : 0;
    Scalar val(0);

    if (!mu1.is_empty()) {
        const int n1 = mu1.part(0);
        const Partition tail = mu1.tail();
        if (vir && n1 == 1) {
            // the k = 2 family: L(-1) v1 (.) v2 = -v1 (.) L(-1) v2
            val = -reduce_mixed(tail, mode_act(m2_, -1, PBWVector::unit(mu2)));
        } else {
            // descend the leading creation mode through the ideal element
            // g (x) z^{wt+m-2}/(z-1)^m whose rho_1 leads with g(-m).
            const int m = vir ? n1 - 1 : n1;
            const int n = gen_wt + m - 2;
            for (int j = 1; j <= n; ++j) {
                Scalar b = binomial(n, j);
                if (b.is_zero()) continue;
                PBWVector img = mode_act(m1_, j - m + mode_shift, PBWVector::unit(tail));
                if (img.is_zero()) continue;
                val -= b * reduce_vec(img, mu2);
            }
            for (int j = 0; n + j <= mu2.degree() + gen_wt - 1; ++j) {
                Scalar b = binomial(-m, j) * sign_pow(m + j);
                if (b.is_zero()) continue;
                PBWVector img = mode_act(m2_, n + j + mode_shift, PBWVector::unit(mu2));
                if (img.is_zero()) continue;
                val -= b * reduce_mixed(tail, img);
            }
        }
    } else {
        // strip the leading mode of v2 through the k >= 2 family
        const int n1 = mu2.part(0);
        const int k = n1 + 1;
        const Partition rest = mu2.tail();
        for (int j = 0; j <= gen_wt - 1; ++j) {
            Scalar b = binomial(gen_wt - k, j);
            if (b.is_zero()) continue;
            PBWVector img = mode_act(m1_, j + mode_shift, PBWVector::unit(mu1));
            if (img.is_zero()) continue;
            val -= b * reduce_vec(img, rest);
        }
    }

    in_progress_.erase(key);
    memo_.emplace(std::move(key), val);
    return val;
}

RestrictedBlock::RestrictedBlock(ModuleSpec m1, ModuleSpec m2, ModuleSpec m3,
                                 Scalar bottom_value)
    : m1_(m1), m2_(m2), m3_(std::move(m3)), bottom_value_(std::move(bottom_value)),
      reducer_(std::move(m1), std::move(m2)) {}

Scalar RestrictedBlock::eval(const Partition& mu1, const Partition& mu2) const {
    if (bottom_value_.is_zero()) return Scalar(0);
    return bottom_value_ * reducer_.bottom_coefficient(mu1, mu2);
}

Scalar RestrictedBlock::eval(const PBWVector& v1, const PBWVector& v2) const {
    Scalar acc(0);
    for (const auto& [nu1, c1] : v1) {
        for (const auto& [nu2, c2] : v2) acc += c1 * c2 * eval(nu1, nu2);
    }
    return acc;
}

RestrictedBlock hom_to_block(const ModuleSpec& m1, const ModuleSpec& m2, const ModuleSpec& m3,
                             const FusionResult& fusion) {
    Scalar bottom(0);
    if (fusion.fusion_dimension > 0) bottom = Scalar(1);  // normalized Hom basis
    return RestrictedBlock(m1, m2, m3, bottom);
}

namespace {

// rho_infty of an inftyLeq0 element on the one-dimensional bottom dual:
// the scalar by which it acts (class <= 0 keeps the bottom).
Scalar rho_infty_bottom_scalar(const ChiralElement& x, const ModuleSpec& m3) {
    PBWVector img = rho_infty(x, m3, PBWVector::unit(Partition()));
    return img.coeff(Partition());
}

}  // namespace

long restricted_block_violations(const RestrictedBlock& phi, int max_weight, int d1, int d2) {
    const AlgebraSpec alg = phi.m1().algebra;
    long violations = 0;
    for (const auto& x :
         spanning_set(alg, RestrictionClass::inftyLeq0, Scalar(1), max_weight, d2 + 1)) {
        Scalar inf_scalar = rho_infty_bottom_scalar(x, phi.m3());
        for (int a1 = 0; a1 <= d1; ++a1) {
            for (const auto& mu1 : graded_basis(phi.m1(), a1)) {
                PBWVector r1 = rho_one(x, phi.m1(), PBWVector::unit(mu1));
                for (int a2 = 0; a2 <= d2; ++a2) {
                    for (const auto& mu2 : graded_basis(phi.m2(), a2)) {
                        Scalar val = inf_scalar * phi.eval(mu1, mu2);
                        val += phi.eval(r1, PBWVector::unit(mu2));
                        val += phi.eval(PBWVector::unit(mu1),
                                        rho_zero(x, phi.m2(), PBWVector::unit(mu2)));
                        if (!val.is_zero()) ++violations;
                    }
                }
            }
        }
    }
    return violations;
}

ExtendedBlock::ExtendedBlock(RestrictedBlock phi, int dual_depth)
    : phi_(std::move(phi)), depth_(dual_depth) {}

Scalar ExtendedBlock::eval(const DualChain& chain, const Partition& mu1,
                           const Partition& mu2) const {
    if (chain.empty()) return phi_.eval(mu1, mu2);
    Key key{chain, mu1, mu2};
    auto it = memo_.find(key);
    if (it != memo_.end()) return it->second;

    const auto& [b, n] = chain.front();
    DualChain rest(chain.begin() + 1, chain.end());
    const ModuleSpec voa = vacuum_module(phi_.m1().algebra);
    const int wb = b.degree();

    Scalar val(0);
    // rho_1(b (x) z^n) v1 = sum_j binom(n,j) b(j) v1
    for (int j = 0; j <= mu1.degree() + wb - 1; ++j) {
        Scalar coef = binomial(n, j);
        if (coef.is_zero()) continue;
        PBWVector img = composite_mode(voa, PBWVector::unit(b), j, phi_.m1(),
                                       PBWVector::unit(mu1));
        if (img.is_zero()) continue;
        val += coef * eval(rest, img, PBWVector::unit(mu2));
    }
    // rho_0(b (x) z^n) v2 = b(n) v2
    PBWVector img2 = composite_mode(voa, PBWVector::unit(b), n, phi_.m2(),
                                    PBWVector::unit(mu2));
    if (!img2.is_zero()) val += eval(rest, PBWVector::unit(mu1), img2);

    memo_.emplace(std::move(key), val);
    return val;
}

Scalar ExtendedBlock::eval(const DualChain& chain, const PBWVector& v1,
                           const PBWVector& v2) const {
    Scalar acc(0);
    for (const auto& [nu1, c1] : v1) {
        for (const auto& [nu2, c2] : v2) acc += c1 * c2 * eval(chain, nu1, nu2);
    }
    return acc;
}

void ExtendedBlock::corrupt(const DualChain& chain, const Partition& mu1, const Partition& mu2,
                            const Scalar& delta) {
    Scalar v = eval(chain, mu1, mu2);
    memo_[Key{chain, mu1, mu2}] = v + delta;
}

ExtendedBlock extend_block(const RestrictedBlock& phi, int dual_depth, int max_weight, int d1,
                           int d2) {
    ExtendedBlock psi(phi, dual_depth);
    const ModuleSpec voa = vacuum_module(phi.m1().algebra);

    // Well-definedness audit: evaluating along b'(m) a'(n) must match the
    // bracket-reordered route: b'(m)a'(n) - a'(n)b'(m) = sum_i binom(n,i)
    // (a(i)b)'(m+n-i) as operators on the dual descendants.
    std::vector<std::pair<Partition, int>> modes;
    for (int w = 0; w <= max_weight; ++w) {
        for (const auto& mu : graded_basis(voa, w)) {
            for (int s = 1; s + 1 <= dual_depth; ++s) modes.emplace_back(mu, w - 1 + s);
        }
    }
    for (const auto& [b, m] : modes) {
        for (const auto& [a, n] : modes) {
            int total = (-b.degree() + m + 1) + (-a.degree() + n + 1);
            if (total > dual_depth) continue;
            for (int a1 = 0; a1 <= d1; ++a1) {
                for (const auto& mu1 : graded_basis(phi.m1(), a1)) {
                    for (int a2 = 0; a2 <= d2; ++a2) {
                        for (const auto& mu2 : graded_basis(phi.m2(), a2)) {
                            Scalar lhs = psi.eval({{b, m}, {a, n}}, mu1, mu2) -
                                         psi.eval({{a, n}, {b, m}}, mu1, mu2);
                            Scalar rhs(0);
                            for (int i = 0; a.degree() + b.degree() - i - 1 >= 0; ++i) {
                                Scalar coef = binomial(n, i);
                                if (coef.is_zero()) continue;
                                PBWVector prod = composite_mode(voa, PBWVector::unit(a), i,
                                                                voa, PBWVector::unit(b));
                                if (prod.is_zero()) continue;
                                for (const auto& [c, cc] : prod) {
                                    rhs += coef * cc * psi.eval({{c, m + n - i}}, mu1, mu2);
                                }
                            }
                            if (!(lhs == rhs)) {
                                throw WellDefinednessViolation(
                                    "extension: bracket-reordered evaluation disagrees");
                            }
                        }
                    }
                }
            }
        }
    }
    return psi;
}

std::vector<InvarianceViolation> check_invariance(const ExtendedBlock& psi, int max_weight,
                                                  int d1, int d2) {
    std::vector<InvarianceViolation> out;
    const RestrictedBlock& phi = psi.bottom();
    const AlgebraSpec alg = phi.m1().algebra;
    const ModuleSpec voa = vacuum_module(alg);

    // dual-layer chains: depth-one descendants plus the bottom itself
    std::vector<DualChain> chains;
    chains.push_back({});
    for (int w = 0; w <= max_weight; ++w) {
        for (const auto& mu : graded_basis(voa, w)) {
            for (int s = 1; s <= psi.dual_depth(); ++s) {
                chains.push_back({{mu, mu.degree() - 1 + s}});
            }
        }
    }

    int layers = std::max(d1, d2) + 1;
    for (const auto& x :
         spanning_set(alg, RestrictionClass::full, Scalar(1), max_weight, layers)) {
        for (const auto& chain : chains) {
            int chain_deg = 0;
            for (const auto& [b, n] : chain) chain_deg += -b.degree() + n + 1;
            for (int a1 = 0; a1 <= d1; ++a1) {
                for (const auto& mu1 : graded_basis(phi.m1(), a1)) {
                    for (int a2 = 0; a2 <= d2; ++a2) {
                        for (const auto& mu2 : graded_basis(phi.m2(), a2)) {
                            Scalar val(0);
                            // rho_infty part: prepend a(n-m-j)^T to the chain;
                            // terms below the dual bottom vanish.
                            for (const auto& [k, c] : x.terms) {
                                int wt = k.state.degree();
                                for (int j = 0;; ++j) {
                                    int mode = k.n - k.m - j;
                                    if (chain_deg + (mode - wt + 1) < 0) break;
                                    Scalar coef = binomial(-k.m, j) * sign_pow(j);
                                    if (!coef.is_zero()) {
                                        DualChain pre{{k.state, mode}};
                                        pre.insert(pre.end(), chain.begin(), chain.end());
                                        val -= c * coef * psi.eval(pre, mu1, mu2);
                                    }
                                    if (k.m <= 0 && j >= -k.m) break;
                                }
                            }
                            val += psi.eval(chain, rho_one(x, phi.m1(), PBWVector::unit(mu1)),
                                            PBWVector::unit(mu2));
                            val += psi.eval(chain, PBWVector::unit(mu1),
                                            rho_zero(x, phi.m2(), PBWVector::unit(mu2)));
                            if (!val.is_zero()) {
                                std::string desc;
                                for (const auto& [k, c] : x.terms) {
                                    desc += k.state.str() + " z^" + std::to_string(k.n) +
                                            "/(z-1)^" + std::to_string(k.m) + " ";
                                }
                                out.push_back({desc, chain, mu1, mu2});
                            }
                        }
                    }
                }
            }
        }
    }
    return out;
}

Scalar restrict_block_value(const ExtendedBlock& psi, const Partition& mu1,
                            const Partition& mu2) {
    return psi.eval({}, mu1, mu2);
}

std::map<Partition, Scalar> dual_layer_values(const ExtendedBlock& psi, int layer,
                                              int chain_weight, const Partition& mu1,
                                              const Partition& mu2) {
    const RestrictedBlock& phi = psi.bottom();
    const ModuleSpec voa = vacuum_module(phi.m1().algebra);
    const ModuleSpec& m3 = phi.m3();
    auto basis = graded_basis(m3, layer);
    if (layer == 0) {
        return {{Partition(), psi.eval({}, mu1, mu2)}};
    }

    // Chains b'(n) with growing state weight until their dual vectors span
    // the layer; L(-1)-descendant states only repeat earlier rows, so the
    // weight may need to exceed the layer. The overdetermined rows double as
    // a consistency audit. chain_weight caps the escalation.
    const int cap = std::max(chain_weight, 2 * layer + voa.algebra.generator_weight() + 2);
    std::map<Partition, Scalar> solution;
    std::vector<std::pair<SparseVec<Partition>, Scalar>> reduced;
    for (int w = 0; w <= cap; ++w) {
        for (const auto& b : graded_basis(voa, w)) {
            int n = b.degree() - 1 + layer;
            SparseVec<Partition> dual_vec;
            for (const auto& kappa : basis) {
                PBWVector img = composite_mode(voa, PBWVector::unit(b), n, m3,
                                               PBWVector::unit(kappa));
                Scalar c = img.coeff(Partition());
                if (!c.is_zero()) dual_vec.add(kappa, c);
            }
            if (dual_vec.is_zero()) continue;
            Scalar rhs = psi.eval({{b, n}}, mu1, mu2);
            for (const auto& [rvec, rval] : reduced) {
                Scalar c = dual_vec.coeff(rvec.leading_key());
                if (c.is_zero()) continue;
                dual_vec -= c * rvec;
                rhs -= c * rval;
            }
            if (dual_vec.is_zero()) {
                if (!rhs.is_zero()) {
                    throw WellDefinednessViolation(
                        "extension: dual-layer system is inconsistent");
                }
                continue;
            }
            Scalar inv = Scalar(1) / dual_vec.coeff(dual_vec.leading_key());
            dual_vec *= inv;
            rhs *= inv;
            reduced.emplace_back(std::move(dual_vec), rhs);
        }
        if (reduced.size() == basis.size()) break;
    }
    if (reduced.size() < basis.size()) {
        throw WellDefinednessViolation(
            "extension: dual-layer chains do not span; raise the chain weight");
    }
    // back-substitute (rows are triangular against leading keys)
    for (auto it = reduced.rbegin(); it != reduced.rend(); ++it) {
        Scalar val = it->second;
        for (const auto& [kappa, c] : it->first) {
            if (kappa == it->first.leading_key()) continue;
            val -= c * solution.at(kappa);
        }
        solution[it->first.leading_key()] = val;
    }
    return solution;
}

MarkedPointBlock::MarkedPointBlock(const ExtendedBlock& psi, Scalar w, int dual_depth,
                                   int chain_weight, int d2)
    : psi_(&psi), w_(std::move(w)), dual_depth_(dual_depth), chain_weight_(chain_weight) {
    if (w_.is_zero()) throw ZeroMarkedPoint("marked-point block needs w != 0");
    const ModuleSpec& m2 = psi.bottom().m2();
    for (int d3 = 0; d3 <= dual_depth_; ++d3) {
        for (int a2 = 0; a2 <= d2; ++a2) {
            for (const auto& mu2 : graded_basis(m2, a2)) {
                auto layer = dual_layer_values(psi, d3, chain_weight_, Partition(), mu2);
                for (const auto& [kappa, value] : layer) {
                    values_[{kappa, mu2}] =
                        value * pow_scalar(w_, kappa.degree() - mu2.degree());
                }
            }
        }
    }
}

Scalar MarkedPointBlock::eval(const Partition& dual_key, const Partition& mu2) const {
    auto it = values_.find({dual_key, mu2});
    return it == values_.end() ? Scalar(0) : it->second;
}

Scalar MarkedPointBlock::conformal_exponent() const {
    return m1().conformal_weight() + m2().conformal_weight() - m3().conformal_weight();
}

std::map<std::pair<Partition, Partition>, Scalar> materialize_io(const MarkedPointBlock& phi,
                                                                 int n, int d2) {
    std::map<std::pair<Partition, Partition>, Scalar> out;
    const ModuleSpec& m2 = phi.m2();
    const ModuleSpec& m3 = phi.m3();
    for (int a2 = 0; a2 <= d2; ++a2) {
        int d3 = a2 - n - 1;
        if (d3 < 0) continue;
        for (const auto& mu2 : graded_basis(m2, a2)) {
            for (const auto& kappa : graded_basis(m3, d3)) {
                // component values are read off the w = 1 block
                Scalar v = phi.eval(kappa, mu2) *
                           pow_scalar(phi.marked_point(), mu2.degree() - kappa.degree());
                if (!v.is_zero()) out[{kappa, mu2}] = v;
            }
        }
    }
    return out;
}

}  // namespace fusionkit
