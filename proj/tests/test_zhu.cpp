#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <random>

#include "fusionkit/zhu.hpp"

using namespace fusionkit;

namespace {

const Scalar kC(1);
const AlgebraSpec kVir{AlgebraKind::virasoro, kC};

PBWVector unit(std::initializer_list<int> parts) { return PBWVector::unit(Partition(parts)); }

}  // namespace

TEST_CASE("circ product: vacuum left factor vanishes, omega gives the L-chain") {
    auto voa = vacuum_module(kVir);
    auto m = ModuleSpec::virasoro_verma(kC, Scalar(2, 5));
    PBWVector hw = PBWVector::unit(Partition());

    // Y(1,z) = Id forces 1(-2) = 0, so 1 o v = 0.
    CHECK(zhu_circ(voa, vacuum_state(kVir).vec, m, hw).is_zero());

    // omega o v = (L(-3) + 2L(-2) + L(-1)) v, term by term.
    PBWVector omega = generator_state(kVir).vec;
    PBWVector expect = mode_act(m, -3, hw) + Scalar(2) * mode_act(m, -2, hw) +
                       mode_act(m, -1, hw);
    CHECK(zhu_circ(voa, omega, m, hw) == expect);

    // a o b is inhomogeneous with top weight wt a + wt b + 1
    PBWVector ab = zhu_circ(voa, omega, voa, omega);
    CHECK(max_degree(ab) == 2 + 2 + 1);
}

TEST_CASE("star product: unit and the omega*omega hand value") {
    auto voa = vacuum_module(kVir);
    PBWVector omega = generator_state(kVir).vec;
    PBWVector one = vacuum_state(kVir).vec;

    // [1]*[b] = [b] holds on the nose
    CHECK(zhu_star_left(voa, one, voa, omega) == omega);
    // v * 1 = v as well (only the j = 0 term survives)
    CHECK(zhu_star_right(voa, omega, one, voa) == omega);

    // omega * omega = L(-2)^2 1 + 2 L(-3)1 + 2 L(-2)1
    PBWVector expect = unit({2, 2}) + Scalar(2) * unit({3}) + Scalar(2) * unit({2});
    CHECK(zhu_star_left(voa, omega, voa, omega) == expect);

    // a * v - v * a = sum_j binom(wt a - 1, j) a(j) v
    std::mt19937_64 rng(31);
    std::uniform_int_distribution<int> wsel(0, 4);
    for (int trial = 0; trial < 20; ++trial) {
        auto ab = graded_basis(voa, wsel(rng));
        auto vb = graded_basis(voa, wsel(rng));
        if (ab.empty() || vb.empty()) continue;
        PBWVector a = PBWVector::unit(ab[0]);
        PBWVector v = PBWVector::unit(vb[vb.size() - 1]);
        PBWVector lhs = zhu_star_left(voa, a, voa, v) - zhu_star_right(voa, v, a, voa);
        PBWVector rhs;
        int wa = state_weight(a);
        for (int j = 0; j <= max_degree(v) + wa; ++j) {
            Scalar b = binomial(wa - 1, j);
            if (b.is_zero()) continue;
            rhs += b * composite_mode(voa, a, j, voa, v);
        }
        CHECK(lhs == rhs);
    }
}

TEST_CASE("windowed A(V): associativity and theta anti-involution") {
    auto voa = vacuum_module(kVir);
    const int W = 12;
    ZhuWindow zw = build_zhu_window(voa, voa, W);

    std::vector<Partition> small;
    for (int w = 0; w <= 4; ++w) {
        for (const auto& mu : graded_basis(voa, w)) small.push_back(mu);
    }
    for (const auto& pa : small) {
        for (const auto& pb : small) {
            PBWVector a = PBWVector::unit(pa), b = PBWVector::unit(pb);
            // theta([a]*[b]) = theta([b]) * theta([a])
            PBWVector lhs = zhu_theta(voa, zhu_star_left(voa, a, voa, b));
            PBWVector rhs =
                zhu_star_left(voa, zhu_theta(voa, b), voa, zhu_theta(voa, a));
            CHECK(zw.reduce(lhs) == zw.reduce(rhs));
            for (const auto& pc : small) {
                PBWVector c = PBWVector::unit(pc);
                PBWVector l = zhu_star_left(voa, zhu_star_left(voa, a, voa, b), voa, c);
                PBWVector r = zhu_star_left(voa, a, voa, zhu_star_left(voa, b, voa, c));
                CHECK(zw.reduce(l) == zw.reduce(r));
            }
        }
    }
    // theta fixes [1] and [omega] and squares to the identity
    CHECK(zhu_theta(voa, vacuum_state(kVir).vec) == vacuum_state(kVir).vec);
    CHECK(zhu_theta(voa, generator_state(kVir).vec) == generator_state(kVir).vec);
}

TEST_CASE("o(O(V)) annihilates every bottom level") {
    auto voa = vacuum_module(kVir);
    std::mt19937_64 rng(37);
    std::uniform_int_distribution<long> hw_num(-6, 6);
    for (int trial = 0; trial < 8; ++trial) {
        Scalar h(hw_num(rng), 3);
        auto m = ModuleSpec::virasoro_verma(kC, h);
        PBWVector bottom = PBWVector::unit(Partition());
        for (int wa = 0; wa <= 3; ++wa) {
            for (int wb = 0; wb <= 3; ++wb) {
                for (const auto& pa : graded_basis(voa, wa)) {
                    for (const auto& pb : graded_basis(voa, wb)) {
                        PBWVector ob = zhu_circ(voa, PBWVector::unit(pa), voa,
                                                PBWVector::unit(pb));
                        CHECK(zero_mode(voa, ob, m, bottom).is_zero());
                    }
                }
            }
        }
    }
    // Heisenberg bottoms too
    AlgebraSpec heis{AlgebraKind::heisenberg, Scalar(1)};
    auto hvoa = vacuum_module(heis);
    auto fock = ModuleSpec::heisenberg_fock(Scalar(1), Scalar(-2, 3));
    PBWVector bottom = PBWVector::unit(Partition());
    for (int wa = 0; wa <= 3; ++wa) {
        for (int wb = 0; wb <= 3; ++wb) {
            for (const auto& pa : graded_basis(hvoa, wa)) {
                for (const auto& pb : graded_basis(hvoa, wb)) {
                    PBWVector ob =
                        zhu_circ(hvoa, PBWVector::unit(pa), hvoa, PBWVector::unit(pb));
                    CHECK(zero_mode(hvoa, ob, fock, bottom).is_zero());
                }
            }
        }
    }
}

TEST_CASE("the seven bimodule containments hold after windowed reduction") {
    auto voa = vacuum_module(kVir);
    auto m = ModuleSpec::virasoro_verma(kC, Scalar(1, 3));
    const int W = 12;
    ZhuWindow om = build_zhu_window(voa, m, W);  // O(M)-span on the module window

    std::vector<Partition> states;  // VOA states, wt <= 3
    for (int w = 0; w <= 3; ++w) {
        for (const auto& mu : graded_basis(voa, w)) states.push_back(mu);
    }
    std::vector<Partition> mvecs;  // module vectors, deg <= 3
    for (int d = 0; d <= 3; ++d) {
        for (const auto& mu : graded_basis(m, d)) mvecs.push_back(mu);
    }

    for (const auto& pa : states) {
        PBWVector a = PBWVector::unit(pa);
        for (const auto& pb : states) {
            PBWVector b = PBWVector::unit(pb);
            PBWVector ovb = zhu_circ(voa, a, voa, b);  // an O(V) generator
            for (const auto& pv : mvecs) {
                PBWVector v = PBWVector::unit(pv);
                // O(V)*v and v*O(V) land in O(M)
                CHECK(om.reduce(zhu_star_left(voa, ovb, m, v)).is_zero());
                CHECK(om.reduce(zhu_star_right(voa, v, ovb, m)).is_zero());
                // a*O(M) and O(M)*a land in O(M)
                PBWVector omv = zhu_circ(voa, b, m, v);
                CHECK(om.reduce(zhu_star_left(voa, a, m, omv)).is_zero());
                CHECK(om.reduce(zhu_star_right(voa, omv, a, m)).is_zero());
                // associativity defects land in O(M)
                PBWVector d1 = zhu_star_left(voa, zhu_star_left(voa, a, voa, b), m, v) -
                               zhu_star_left(voa, a, m, zhu_star_left(voa, b, m, v));
                CHECK(om.reduce(d1).is_zero());
                PBWVector d2 =
                    zhu_star_right(voa, zhu_star_right(voa, v, a, m), b, m) -
                    zhu_star_right(voa, v, zhu_star_left(voa, a, voa, b), m);
                CHECK(om.reduce(d2).is_zero());
                PBWVector d3 = zhu_star_right(voa, zhu_star_left(voa, a, m, v), b, m) -
                               zhu_star_left(voa, a, m, zhu_star_right(voa, v, b, m));
                CHECK(om.reduce(d3).is_zero());
            }
        }
    }
}

TEST_CASE("bimodule tensor window: Virasoro grows, Heisenberg collapses") {
    // Virasoro: A(M(c,h1)) (x)_{A(V)} M_c(0) is C[t1]; windowed dims grow.
    auto m1 = ModuleSpec::virasoro_verma(kC, Scalar(1, 3));
    BottomModule vac_bottom = BottomModule::from_module(ModuleSpec::virasoro_vacuum(kC));
    CHECK(build_bimodule_tensor_window(m1, vac_bottom, 0).dimension() == 1);
    long prev = 0;
    for (int W = 2; W <= 6; W += 2) {
        long dim = build_bimodule_tensor_window(m1, vac_bottom, W).dimension();
        CHECK(dim >= 2);
        CHECK(dim >= prev);
        prev = dim;
    }

    // Heisenberg: A(M^1) (x)_{A(V)} M^2(0) is 1-dimensional at every window.
    auto h1 = ModuleSpec::heisenberg_fock(Scalar(1), Scalar(1, 2));
    BottomModule mu_bottom =
        BottomModule::from_module(ModuleSpec::heisenberg_fock(Scalar(1), Scalar(1, 2)));
    for (int W = 1; W <= 5; ++W) {
        CHECK(build_bimodule_tensor_window(h1, mu_bottom, W).dimension() == 1);
    }
}

TEST_CASE("explicit bottom matrices are honored") {
    auto voa = vacuum_module(kVir);
    std::map<Partition, BottomModule::Matrix> mats;
    mats[Partition({2})] = {{Scalar(3, 2)}};  // o(omega) acts by 3/2
    BottomModule bm = BottomModule::from_matrices(1, std::move(mats));
    CHECK(bm.o_matrix(voa, Partition({2}))[0][0] == Scalar(3, 2));
    CHECK(bm.o_matrix(voa, Partition({3}))[0][0].is_zero());
}
