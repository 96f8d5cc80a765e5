#include "fusionkit/selftest.hpp"

#include <random>

#include "fusionkit/cfb.hpp"

namespace fusionkit {

namespace {

const Scalar kC(1);
const AlgebraSpec kVir{AlgebraKind::virasoro, kC};
const Scalar kLevel(1);

PBWVector random_vector(const ModuleSpec& m, int max_deg, std::mt19937_64& rng) {
    std::uniform_int_distribution<long> coeff(-3, 3);
    std::uniform_int_distribution<int> deg(0, max_deg);
    PBWVector v;
    for (int t = 0; t < 3; ++t) {
        auto basis = graded_basis(m, deg(rng));
        if (basis.empty()) continue;
        std::uniform_int_distribution<std::size_t> pick(0, basis.size() - 1);
        v.add(basis[pick(rng)], Scalar(coeff(rng)));
    }
    return v;
}

ChiralElement random_chiral(const Scalar& w, std::mt19937_64& rng, int max_wt) {
    const ModuleSpec voa = vacuum_module(kVir);
    std::uniform_int_distribution<int> wt(0, max_wt);
    std::uniform_int_distribution<int> nm(-2, 2);
    std::uniform_int_distribution<long> coeff(-2, 2);
    ChiralElement x{kVir, w, {}};
    for (int t = 0; t < 2; ++t) {
        auto basis = graded_basis(voa, wt(rng));
        if (basis.empty()) continue;
        std::uniform_int_distribution<std::size_t> pick(0, basis.size() - 1);
        x.terms.add({basis[pick(rng)], nm(rng), nm(rng)}, Scalar(coeff(rng)));
    }
    return x;
}

Partition random_state(const ModuleSpec& voa, int max_wt, std::mt19937_64& rng) {
    std::uniform_int_distribution<int> wt(0, max_wt);
    for (;;) {
        auto basis = graded_basis(voa, wt(rng));
        if (basis.empty()) continue;
        std::uniform_int_distribution<std::size_t> pick(0, basis.size() - 1);
        return basis[pick(rng)];
    }
}

SuiteResult suite_lie_axioms(std::mt19937_64& rng) {
    SuiteResult res{"chiral-bracket-lie-axioms", 0, 0};
    for (int trial = 0; trial < 60; ++trial) {
        ChiralElement x = random_chiral(Scalar(1), rng, 3);
        ChiralElement y = random_chiral(Scalar(1), rng, 3);
        ChiralElement z = random_chiral(Scalar(1), rng, 2);
        ++res.instances;
        if (!nabla_normal_form(chiral_add(chiral_bracket(x, y), chiral_bracket(y, x)))
                 .is_zero()) {
            ++res.failures;
        }
        ++res.instances;
        ChiralElement jac = chiral_add(
            chiral_add(chiral_bracket(chiral_bracket(x, y), z),
                       chiral_bracket(chiral_bracket(y, z), x)),
            chiral_bracket(chiral_bracket(z, x), y));
        if (!nabla_normal_form(jac).is_zero()) ++res.failures;
    }
    return res;
}

SuiteResult suite_representations(std::mt19937_64& rng) {
    SuiteResult res{"rho-representation-property", 0, 0};
    auto m1 = ModuleSpec::virasoro_verma(kC, Scalar(2, 5));
    auto m2 = ModuleSpec::virasoro_vacuum(kC);
    auto m3 = ModuleSpec::virasoro_verma(kC, Scalar(1, 7));
    for (int trial = 0; trial < 40; ++trial) {
        ChiralElement x = random_chiral(Scalar(1), rng, 3);
        ChiralElement y = random_chiral(Scalar(1), rng, 3);
        ChiralElement br = chiral_bracket(x, y);
        PBWVector v1 = random_vector(m1, 3, rng);
        ++res.instances;
        if (!(rho_one(br, m1, v1) == rho_one(x, m1, rho_one(y, m1, v1)) -
                                         rho_one(y, m1, rho_one(x, m1, v1)))) {
            ++res.failures;
        }
        PBWVector v2 = random_vector(m2, 3, rng);
        ++res.instances;
        if (!(rho_zero(br, m2, v2) == rho_zero(x, m2, rho_zero(y, m2, v2)) -
                                          rho_zero(y, m2, rho_zero(x, m2, v2)))) {
            ++res.failures;
        }
        PBWVector d3 = random_vector(m3, 3, rng);
        ++res.instances;
        if (!(rho_infty(br, m3, d3) == rho_infty(x, m3, rho_infty(y, m3, d3)) -
                                           rho_infty(y, m3, rho_infty(x, m3, d3)))) {
            ++res.failures;
        }
    }
    return res;
}

SuiteResult suite_borcherds(std::mt19937_64& rng) {
    SuiteResult res{"borcherds-identity", 0, 0};
    const ModuleSpec voa = vacuum_module(kVir);
    auto m = ModuleSpec::virasoro_verma(kC, Scalar(1, 2));
    std::uniform_int_distribution<int> idx(-2, 2);
    for (int trial = 0; trial < 110; ++trial) {
        PBWVector a = PBWVector::unit(random_state(voa, 4, rng));
        PBWVector b = PBWVector::unit(random_state(voa, 4, rng));
        int wa = state_weight(a), wb = state_weight(b);
        PBWVector v = random_vector(m, 3, rng);
        int dv = max_degree(v);
        int l = idx(rng), mm = idx(rng), nn = idx(rng);
        PBWVector lhs;
        for (int i = 0; nn + i <= dv + wb - 1; ++i) {
            Scalar coef = sign_pow(i) * binomial(l, i);
            if (coef.is_zero()) continue;
            lhs += coef * composite_mode(voa, a, mm + l - i, m,
                                         composite_mode(voa, b, nn + i, m, v));
        }
        for (int i = 0; mm + i <= dv + wa - 1; ++i) {
            Scalar coef = sign_pow(l + i) * binomial(l, i);
            if (coef.is_zero()) continue;
            lhs -= coef * composite_mode(voa, b, nn + l - i, m,
                                         composite_mode(voa, a, mm + i, m, v));
        }
        PBWVector rhs;
        for (int i = 0; wa + wb - (l + i) - 1 >= 0; ++i) {
            Scalar coef = binomial(mm, i);
            if (coef.is_zero()) continue;
            PBWVector ab = composite_mode(voa, a, l + i, voa, b);
            if (ab.is_zero()) continue;
            rhs += coef * composite_mode(voa, ab, mm + nn - i, m, v);
        }
        ++res.instances;
        if (!(lhs == rhs)) ++res.failures;
    }
    return res;
}

SuiteResult suite_normal_forms(std::mt19937_64& rng) {
    SuiteResult res{"spanning-set-normal-forms", 0, 0};
    const ModuleSpec voa = vacuum_module(kVir);
    auto m1 = ModuleSpec::virasoro_verma(kC, Scalar(1, 3));
    auto m2 = ModuleSpec::virasoro_vacuum(kC);
    auto m3 = ModuleSpec::virasoro_verma(kC, Scalar(1, 2));
    std::uniform_int_distribution<int> extra(0, 3);
    std::uniform_int_distribution<long> coeff(-2, 2);

    auto random_in_class = [&](RestrictionClass cls, const Scalar& w) {
        ChiralElement x{kVir, w, {}};
        for (int t = 0; t < 2; ++t) {
            Partition mu = random_state(voa, 3, rng);
            int wta = mu.degree();
            int n = 0, m = 0;
            switch (cls) {
                case RestrictionClass::inftyLeq0:
                    m = extra(rng) - 1;
                    n = wta - 1 + m - extra(rng);
                    break;
                case RestrictionClass::inftyLt0:
                    m = extra(rng) - 1;
                    n = wta - 2 + m - extra(rng);
                    break;
                case RestrictionClass::full:
                    m = extra(rng) - 1;
                    n = extra(rng) - 2;
                    break;
                case RestrictionClass::wLeq0:
                    m = -(wta - 1) - extra(rng);
                    n = extra(rng) - 2;
                    break;
                case RestrictionClass::wLt0:
                    m = -wta - extra(rng);
                    n = extra(rng) - 2;
                    break;
            }
            x.terms.add({mu, n, m}, Scalar(coeff(rng)));
        }
        return x;
    };

    for (auto cls : {RestrictionClass::inftyLeq0, RestrictionClass::inftyLt0,
                     RestrictionClass::full, RestrictionClass::wLeq0,
                     RestrictionClass::wLt0}) {
        bool wside = cls == RestrictionClass::wLeq0 || cls == RestrictionClass::wLt0;
        Scalar w = wside ? Scalar(2, 3) : Scalar(1);
        for (int trial = 0; trial < 25; ++trial) {
            ChiralElement x = random_in_class(cls, w);
            ChiralElement nf = normal_form(x, cls);
            ++res.instances;
            if (!(normal_form(nf, cls).terms == nf.terms)) ++res.failures;  // idempotent
            ++res.instances;
            PBWVector v1 = random_vector(m1, 3, rng);
            PBWVector v2 = random_vector(m2, 3, rng);
            PBWVector d3 = random_vector(m3, 3, rng);
            bool same = rho_one(x, m1, v1) == rho_one(nf, m1, v1) &&
                        rho_zero(x, m2, v2) == rho_zero(nf, m2, v2) &&
                        rho_infty(x, m3, d3) == rho_infty(nf, m3, d3);
            if (!same) ++res.failures;
        }
    }
    return res;
}

SuiteResult suite_quotient_maps(std::mt19937_64& rng) {
    SuiteResult res{"quotient-maps-mutually-inverse", 0, 0};
    const ModuleSpec voa = vacuum_module(kVir);
    auto m3 = ModuleSpec::virasoro_verma(kC, Scalar(3, 4));
    PBWVector bottom_dual = PBWVector::unit(Partition());
    std::uniform_int_distribution<int> extra(0, 3);
    for (int trial = 0; trial < 110; ++trial) {
        Partition mu = random_state(voa, 4, rng);
        // phi(psi(a_[wt-1])) = a_[wt-1]
        L0Element e{PBWVector::unit(mu)};
        ++res.instances;
        if (!(quotient_to_l0_infty(l0_section_infty(kVir, e, Scalar(1))).states == e.states)) {
            ++res.failures;
        }
        // psi(phi(x)) = x modulo the augmented ideal
        int wta = mu.degree();
        int m = extra(rng) - 1;
        int n = wta - 1 + m - extra(rng);
        ChiralElement x = chiral_term(kVir, PBWVector::unit(mu), n, m);
        ChiralElement back = l0_section_infty(kVir, quotient_to_l0_infty(x), Scalar(1));
        ChiralElement defect = chiral_add(x, chiral_scale(Scalar(-1), back));
        ++res.instances;
        if (!quotient_to_l0_infty(defect).is_zero() ||
            !rho_infty(defect, m3, bottom_dual).is_zero()) {
            ++res.failures;
        }
    }
    return res;
}

SuiteResult suite_star_bimodule(std::mt19937_64& rng) {
    SuiteResult res{"star-bimodule-containments", 0, 0};
    const ModuleSpec voa = vacuum_module(kVir);
    auto m = ModuleSpec::virasoro_verma(kC, Scalar(1, 3));
    ZhuWindow om = build_zhu_window(voa, m, 9);
    for (int trial = 0; trial < 20; ++trial) {
        PBWVector a = PBWVector::unit(random_state(voa, 2, rng));
        PBWVector b = PBWVector::unit(random_state(voa, 2, rng));
        auto basis = graded_basis(m, std::uniform_int_distribution<int>(0, 2)(rng));
        std::uniform_int_distribution<std::size_t> pick(0, basis.size() - 1);
        PBWVector v = PBWVector::unit(basis[pick(rng)]);

        PBWVector ovb = zhu_circ(voa, a, voa, b);
        PBWVector omv = zhu_circ(voa, b, m, v);
        std::vector<PBWVector> members = {
            zhu_star_left(voa, ovb, m, v),
            zhu_star_right(voa, v, ovb, m),
            zhu_star_left(voa, a, m, omv),
            zhu_star_right(voa, omv, a, m),
            zhu_star_left(voa, zhu_star_left(voa, a, voa, b), m, v) -
                zhu_star_left(voa, a, m, zhu_star_left(voa, b, m, v)),
            zhu_star_right(voa, zhu_star_right(voa, v, a, m), b, m) -
                zhu_star_right(voa, v, zhu_star_left(voa, a, voa, b), m),
            zhu_star_right(voa, zhu_star_left(voa, a, m, v), b, m) -
                zhu_star_left(voa, a, m, zhu_star_right(voa, v, b, m)),
        };
        for (const auto& x : members) {
            ++res.instances;
            if (max_degree(x) > om.max_weight || !om.reduce(x).is_zero()) ++res.failures;
        }
    }
    return res;
}

SuiteResult suite_av_action(std::mt19937_64& rng) {
    SuiteResult res{"av-action-factors-through-l0", 0, 0};
    auto m1 = ModuleSpec::virasoro_verma(kC, Scalar(1, 3));
    auto m2 = ModuleSpec::virasoro_vacuum(kC);
    const ModuleSpec voa = vacuum_module(kVir);
    OdotSpace space = build_odot(m1, m2, {5, 3, 3}, false);
    // keep clear of the working-window edge so every action stays inside
    std::vector<PairKey> qkeys;
    for (const auto& k : space.working_free_keys()) {
        if (k.mu1.degree() + 3 <= space.working.d1 && k.mu2.degree() <= space.working.d2) {
            qkeys.push_back(k);
        }
    }
    std::uniform_int_distribution<std::size_t> pick(0, qkeys.size() - 1);
    for (int trial = 0; trial < 110; ++trial) {
        PBWVector a = PBWVector::unit(random_state(voa, 3, rng));
        PairVec x = PairVec::unit(qkeys[pick(rng)]);
        ++res.instances;
        if (!(av_act_on_odot(space, a, x) == l0_act_on_odot(space, a, x))) ++res.failures;
    }
    return res;
}

SuiteResult suite_boxdot_agreement(std::mt19937_64& rng) {
    SuiteResult res{"boxdot-odot-fusion-agreement", 0, 0};
    std::uniform_int_distribution<long> num(-3, 3);
    std::uniform_int_distribution<long> den(1, 3);
    std::uniform_int_distribution<int> wsel(0, 2);
    const Scalar ws[3] = {Scalar(1), Scalar(2), Scalar(1, 3)};
    for (int trial = 0; trial < 100; ++trial) {
        Scalar lam(num(rng), den(rng));
        Scalar mu(num(rng), den(rng));
        bool matched = trial % 2 == 0;
        Scalar nu = matched ? lam + mu : lam + mu + Scalar(den(rng));
        auto m1 = ModuleSpec::heisenberg_fock(kLevel, lam);
        auto m2 = ModuleSpec::heisenberg_fock(kLevel, mu);
        auto m3 = ModuleSpec::heisenberg_fock(kLevel, nu);
        FusionResult fr = fusion_rule(m1, m2, BottomModule::from_module(m3), {2, 2, 2}, false);
        BoxdotSpace bs = build_boxdot(m3, m2, ws[wsel(rng)], {2, 2, 2});
        BoxdotHomResult hr = boxdot_hom(bs, BottomModule::from_module(m1));
        ++res.instances;
        if (hr.hom_dimension != fr.fusion_dimension ||
            fr.fusion_dimension != (matched ? 1 : 0)) {
            ++res.failures;
        }
    }
    return res;
}

SuiteResult suite_checker_soundness(bool corrupt) {
    SuiteResult res{"invariance-checker-soundness", 0, 0};
    auto m1 = ModuleSpec::virasoro_verma(kC, Scalar(1, 3));
    auto m2 = ModuleSpec::virasoro_vacuum(kC);
    auto m3 = ModuleSpec::virasoro_verma(kC, Scalar(1, 3));
    FusionResult fr = fusion_rule(m1, m2, BottomModule::from_module(m3), {3, 3, 3}, false);
    ExtendedBlock psi = extend_block(hom_to_block(m1, m2, m3, fr), 3, 3, 2, 2);
    if (corrupt) psi.corrupt({{Partition({2}), 2}}, Partition(), Partition(), Scalar(1, 7));
    auto violations = check_invariance(psi, 3, 2, 2);
    ++res.instances;
    // a corrupted value must surface as a failing report; a clean block
    // must come back silent
    res.failures = static_cast<long>(violations.size());
    if (corrupt && violations.empty()) res.failures = 1;  // checker missed it
    return res;
}

}  // namespace

std::vector<SuiteResult> run_selftest(std::uint64_t seed, bool corrupt) {
    std::mt19937_64 rng(seed);
    std::vector<SuiteResult> out;
    out.push_back(suite_lie_axioms(rng));
    out.push_back(suite_representations(rng));
    out.push_back(suite_borcherds(rng));
    out.push_back(suite_normal_forms(rng));
    out.push_back(suite_quotient_maps(rng));
    out.push_back(suite_star_bimodule(rng));
    out.push_back(suite_av_action(rng));
    out.push_back(suite_boxdot_agreement(rng));
    out.push_back(suite_checker_soundness(corrupt));
    return out;
}

}  // namespace fusionkit
