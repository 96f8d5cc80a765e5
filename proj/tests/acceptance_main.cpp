// Acceptance suite: one pass/fail line per criterion, exact arithmetic
// throughout (tolerance zero everywhere).
#include <chrono>
#include <iostream>

#include "fusionkit/cfb.hpp"
#include "fusionkit/selftest.hpp"

using namespace fusionkit;
using Clock = std::chrono::steady_clock;

namespace {

int g_failures = 0;

void report(int criterion, const std::string& name, bool pass) {
    std::cout << "criterion " << criterion << " [" << name << "]: "
              << (pass ? "PASS" : "FAIL") << "\n";
    if (!pass) ++g_failures;
}

double seconds_since(Clock::time_point t0) {
    return std::chrono::duration<double>(Clock::now() - t0).count();
}

const Scalar kC(1);
const Scalar kLevel(1);

// 1. Virasoro fusion zero: c=1, h1=1/3, weight 1/2 on M^3, at D=4, W=4,
//    within 10 seconds.
void criterion1() {
    auto t0 = Clock::now();
    auto m1 = ModuleSpec::virasoro_verma(kC, Scalar(1, 3));
    auto m2 = ModuleSpec::virasoro_vacuum(kC);
    auto m3 = ModuleSpec::virasoro_verma(kC, Scalar(1, 2));
    FusionResult fr = fusion_rule(m1, m2, BottomModule::from_module(m3), {4, 4, 4});
    double secs = seconds_since(t0);
    bool pass = fr.fusion_dimension == 0 && secs < 10.0;
    report(1, "virasoro fusion zero in <10s", pass);
    if (secs >= 10.0) std::cout << "  runtime " << secs << "s exceeded the budget\n";
}

// 2. Virasoro collapse: dim(M(c,h1) (.) M_c) = 1 with the bottom-pair
//    representative, omega_[1]-eigenvalue exactly h1, stability across
//    window increments, and fusion dimension 1 when h3 = h1.
void criterion2() {
    auto m1 = ModuleSpec::virasoro_verma(kC, Scalar(1, 3));
    auto m2 = ModuleSpec::virasoro_vacuum(kC);
    auto m3 = ModuleSpec::virasoro_verma(kC, Scalar(1, 3));
    FusionResult fr = fusion_rule(m1, m2, BottomModule::from_module(m3), {4, 4, 4});
    bool pass = fr.odot_dimension == 1 && fr.stable && fr.fusion_dimension == 1;
    auto reps = fr.space.quotient_basis();
    pass = pass && reps.size() == 1 && reps[0].mu1 == Partition() &&
           reps[0].mu2 == Partition();
    PairVec x = PairVec::unit({Partition(), Partition()});
    PBWVector omega = generator_state(m1.algebra).vec;
    pass = pass && l0_act_on_odot(fr.space, omega, x) == Scalar(1, 3) * x;
    report(2, "virasoro odot collapse with eigenvalue h1", pass);
}

// 3. Strict comparison gap: the windowed bimodule tensor dimension is >= 2
//    at W >= 2 while the contracted product stays one-dimensional.
void criterion3() {
    auto m1 = ModuleSpec::virasoro_verma(kC, Scalar(1, 3));
    auto m2 = ModuleSpec::virasoro_vacuum(kC);
    bool pass = true;
    for (int w = 2; w <= 4; ++w) {
        BimoduleWindow bw =
            build_bimodule_tensor_window(m1, BottomModule::from_module(m2), w);
        OdotSpace space = build_odot(m1, m2, {w, w, w});
        pass = pass && bw.dimension() >= 2 && space.dimension() == 1 &&
               bw.dimension() > space.dimension();
    }
    report(3, "strict pi-gap: bimodule window exceeds odot", pass);
}

// 4. Heisenberg: dim = 1 with alpha_[0]-eigenvalue lambda+mu and fusion
//    dimension delta_{nu, lambda+mu} over the stated rational test points.
void criterion4() {
    bool pass = true;
    AlgebraSpec heis{AlgebraKind::heisenberg, kLevel};
    std::vector<Scalar> charges = {Scalar(1, 2), Scalar(-1, 3), Scalar(2)};
    for (const auto& lam : charges) {
        for (const auto& mu : charges) {
            auto m1 = ModuleSpec::heisenberg_fock(kLevel, lam);
            auto m2 = ModuleSpec::heisenberg_fock(kLevel, mu);
            OdotSpace space = build_odot(m1, m2, {3, 3, 3});
            pass = pass && space.dimension() == 1;
            PairVec x = PairVec::unit({Partition(), Partition()});
            pass = pass &&
                   l0_act_on_odot(space, generator_state(heis).vec, x) == (lam + mu) * x;
            for (const auto& nu : {lam + mu, lam + mu + Scalar(1, 5)}) {
                auto m3 = ModuleSpec::heisenberg_fock(kLevel, nu);
                FusionResult fr =
                    fusion_rule(m1, m2, BottomModule::from_module(m3), {3, 3, 3}, false);
                long expect = (nu == lam + mu) ? 1 : 0;
                pass = pass && fr.fusion_dimension == expect;
            }
        }
    }
    report(4, "heisenberg charge conservation", pass);
}

// 5. Extension invariance for both example blocks: all four spanning
//    families with wt a <= 4 on all in-window triples, zero violations;
//    corruption is detected; restriction and extension invert each other.
void criterion5() {
    bool pass = true;

    auto vm1 = ModuleSpec::virasoro_verma(kC, Scalar(1, 3));
    auto vm2 = ModuleSpec::virasoro_vacuum(kC);
    auto vm3 = ModuleSpec::virasoro_verma(kC, Scalar(1, 3));
    FusionResult vfr =
        fusion_rule(vm1, vm2, BottomModule::from_module(vm3), {4, 4, 4}, false);
    RestrictedBlock vphi = hom_to_block(vm1, vm2, vm3, vfr);
    pass = pass && restricted_block_violations(vphi, 4, 4, 4) == 0;
    ExtendedBlock vpsi = extend_block(vphi, 3, 4, 2, 2);
    pass = pass && check_invariance(vpsi, 4, 2, 2).empty();

    auto hm1 = ModuleSpec::heisenberg_fock(kLevel, Scalar(1, 2));
    auto hm2 = ModuleSpec::heisenberg_fock(kLevel, Scalar(1, 2));
    auto hm3 = ModuleSpec::heisenberg_fock(kLevel, Scalar(1));
    FusionResult hfr =
        fusion_rule(hm1, hm2, BottomModule::from_module(hm3), {4, 4, 4}, false);
    RestrictedBlock hphi = hom_to_block(hm1, hm2, hm3, hfr);
    pass = pass && restricted_block_violations(hphi, 4, 4, 4) == 0;
    ExtendedBlock hpsi = extend_block(hphi, 3, 4, 2, 2);
    pass = pass && check_invariance(hpsi, 4, 2, 2).empty();

    // corruption detection
    ExtendedBlock bad = extend_block(vphi, 3, 4, 2, 2);
    bad.corrupt({{Partition({2}), 2}}, Partition(), Partition(), Scalar(1, 7));
    pass = pass && !check_invariance(bad, 4, 2, 2).empty();

    // round trips: G(F(phi)) = phi on the window
    for (int d1 = 0; d1 <= 4; ++d1) {
        for (const auto& mu1 : graded_basis(vm1, d1)) {
            for (int d2 = 0; d2 <= 4; ++d2) {
                for (const auto& mu2 : graded_basis(vm2, d2)) {
                    pass = pass &&
                           restrict_block_value(vpsi, mu1, mu2) == vphi.eval(mu1, mu2);
                }
            }
        }
    }
    // F(G(psi)) = psi on descendant layers within the window
    RestrictedBlock vphi2(vm1, vm2, vm3,
                          restrict_block_value(vpsi, Partition(), Partition()));
    ExtendedBlock vpsi2 = extend_block(vphi2, 3, 4, 2, 2);
    const ModuleSpec voa = vacuum_module(vm1.algebra);
    for (int w = 0; w <= 4; ++w) {
        for (const auto& b : graded_basis(voa, w)) {
            for (int s = 1; s <= 3; ++s) {
                DualChain chain{{b, b.degree() - 1 + s}};
                for (const auto& mu1 : {Partition(), Partition({2})}) {
                    for (const auto& mu2 : {Partition(), Partition({2})}) {
                        pass = pass &&
                               vpsi2.eval(chain, mu1, mu2) == vpsi.eval(chain, mu1, mu2);
                    }
                }
            }
        }
    }
    report(5, "extension invariance, soundness, round trips", pass);
}

// 6. Property suites, each >= 100 randomized seed-reproducible instances,
//    all green, total runtime < 2 minutes.
void criterion6() {
    auto t0 = Clock::now();
    auto results = run_selftest(20240901, false);
    double secs = seconds_since(t0);
    bool pass = secs < 120.0;
    long randomized_min = 1000000;
    for (const auto& suite : results) {
        pass = pass && suite.failures == 0;
        if (suite.name != "invariance-checker-soundness") {
            randomized_min = std::min(randomized_min, suite.instances);
        }
    }
    pass = pass && randomized_min >= 100;
    report(6, "property suites (>=100 instances each, <2min)", pass);
    if (secs >= 120.0) std::cout << "  runtime " << secs << "s exceeded the budget\n";
}

// 7. Determinism: two identical selftest runs produce identical reports,
//    and rerunning a fusion computation reproduces every reported number.
void criterion7() {
    auto r1 = run_selftest(424242, false);
    auto r2 = run_selftest(424242, false);
    bool pass = r1.size() == r2.size();
    for (std::size_t i = 0; pass && i < r1.size(); ++i) {
        pass = r1[i].name == r2[i].name && r1[i].instances == r2[i].instances &&
               r1[i].failures == r2[i].failures;
    }
    auto m1 = ModuleSpec::virasoro_verma(kC, Scalar(1, 3));
    auto m2 = ModuleSpec::virasoro_vacuum(kC);
    auto m3 = ModuleSpec::virasoro_verma(kC, Scalar(1, 3));
    FusionResult fa = fusion_rule(m1, m2, BottomModule::from_module(m3), {3, 3, 3}, false);
    FusionResult fb = fusion_rule(m1, m2, BottomModule::from_module(m3), {3, 3, 3}, false);
    pass = pass && fa.fusion_dimension == fb.fusion_dimension &&
           fa.odot_dimension == fb.odot_dimension &&
           fa.excluded_relations == fb.excluded_relations &&
           fa.quotient_keys == fb.quotient_keys;
    report(7, "determinism of reports and computations", pass);
}

}  // namespace

int main() {
    criterion1();
    criterion2();
    criterion3();
    criterion4();
    criterion5();
    criterion6();
    criterion7();
    if (g_failures == 0) {
        std::cout << "acceptance: all criteria PASS\n";
        return 0;
    }
    std::cout << "acceptance: " << g_failures << " criteria FAILED\n";
    return 1;
}
