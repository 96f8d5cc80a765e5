#include "fusionkit/odot.hpp"

#include <set>

#include "fusionkit/threads.hpp"

namespace fusionkit {

namespace {

// Ideal spanning elements at w = 1: a (x) z^{wt a-1}/(z-1) and
// a (x) z^{wt a-k}, k >= 2 (pool bounded by the window depth).
std::vector<ChiralElement> ideal_instances(const AlgebraSpec& alg, int max_weight,
                                           int k_limit) {
    const ModuleSpec voa = vacuum_module(alg);
    std::vector<ChiralElement> out;
    for (int wa = 1; wa <= max_weight; ++wa) {
        for (const auto& a : graded_basis(voa, wa)) {
            PBWVector av = PBWVector::unit(a);
            out.push_back(chiral_term(alg, av, wa - 1, 1));
            for (int k = 2; k <= k_limit; ++k) {
                out.push_back(chiral_term(alg, av, wa - k, 0));
            }
        }
    }
    return out;
}

}  // namespace

std::vector<PairKey> OdotSpace::quotient_basis() const {
    std::vector<PairKey> out;
    for (const auto& [pivot, row] : image.rows()) out.push_back(pivot);
    return out;
}

std::vector<PairKey> OdotSpace::working_free_keys() const {
    std::vector<PairKey> out;
    for (int d1 = 0; d1 <= working.d1; ++d1) {
        for (const auto& v1 : graded_basis(m1, d1)) {
            for (int d2 = 0; d2 <= working.d2; ++d2) {
                for (const auto& v2 : graded_basis(m2, d2)) {
                    PairKey k{v1, v2};
                    if (!relations.is_pivot(k)) out.push_back(k);
                }
            }
        }
    }
    std::sort(out.begin(), out.end());
    return out;
}

OdotRelations odot_relation_rows(const ModuleSpec& m1, const ModuleSpec& m2,
                                 const OdotWindow& window) {
    OdotRelations out;
    auto instances = ideal_instances(m1.algebra, window.max_weight, window.d2 + 1);
    std::vector<OdotRelations> chunks(instances.size());
    parallel_for(instances.size(), [&](std::size_t idx) {
        const auto& inst = instances[idx];
        OdotRelations& chunk = chunks[idx];
        // rho_1 depends only on v1 and rho_0 only on v2; precompute each side.
        std::vector<std::pair<Partition, PBWVector>> side1, side0;
        for (int d1 = 0; d1 <= window.d1; ++d1) {
            for (const auto& v1 : graded_basis(m1, d1)) {
                side1.emplace_back(v1, rho_one(inst, m1, PBWVector::unit(v1)));
            }
        }
        for (int d2 = 0; d2 <= window.d2; ++d2) {
            for (const auto& v2 : graded_basis(m2, d2)) {
                side0.emplace_back(v2, rho_zero(inst, m2, PBWVector::unit(v2)));
            }
        }
        for (const auto& [v1, r1] : side1) {
            bool fits1 = max_degree(r1) <= window.d1;
            for (const auto& [v2, r0] : side0) {
                if (!fits1 || max_degree(r0) > window.d2) {
                    ++chunk.excluded;
                    continue;
                }
                PairVec row;
                for (const auto& [nu, c] : r1) row.add({nu, v2}, c);
                for (const auto& [nu, c] : r0) row.add({v1, nu}, c);
                if (!row.is_zero()) chunk.rows.push_back(std::move(row));
            }
        }
    });
    for (auto& chunk : chunks) {
        out.excluded += chunk.excluded;
        for (auto& row : chunk.rows) out.rows.push_back(std::move(row));
    }
    return out;
}

namespace {

// Route (b): rewrite v1 (x) v2 into the span of M^1 (x) M^2(0) by stripping
// the leading creation mode of v2 through the k >= 2 relation family. Exact;
// the M^1-side degree grows by at most deg v2.
using StripCache = std::map<std::pair<Partition, Partition>, PairVec>;

PairVec strip_monomial(const ModuleSpec& m1, const Partition& mu1, const Partition& mu2,
                       StripCache& cache);

PairVec strip_to_bottom(const ModuleSpec& m1, const PBWVector& v1, const Partition& mu2,
                        StripCache& cache) {
    PairVec out;
    for (const auto& [nu, c] : v1) {
        PairVec part = strip_monomial(m1, nu, mu2, cache);
        part *= c;
        out += part;
    }
    return out;
}

PairVec strip_monomial(const ModuleSpec& m1, const Partition& mu1, const Partition& mu2,
                       StripCache& cache) {
    if (mu2.is_empty()) return PairVec::unit({mu1, mu2});
    auto it = cache.find({mu1, mu2});
    if (it != cache.end()) return it->second;
    const int gen_wt = m1.algebra.generator_weight();
    const int n1 = mu2.part(0);
    const int k = n1 + 1;
    const Partition rest = mu2.tail();
    PairVec out;
    // v1 (.) a(wt-k)v2' = -sum_j binom(wt-k, j) a(j)v1 (.) v2'
    const int mode_shift = m1.algebra.kind == AlgebraKind::virasoro ? -1 : 0;
    for (int j = 0; j <= mu1.degree() + gen_wt - 1; ++j) {
        Scalar b = binomial(gen_wt - k, j);
        if (b.is_zero()) continue;
        PBWVector av1 = mode_act(m1, j + mode_shift, PBWVector::unit(mu1));
        if (av1.is_zero()) continue;
        av1 *= -b;
        out += strip_to_bottom(m1, av1, rest, cache);
    }
    cache.emplace(std::make_pair(mu1, mu2), out);
    return out;
}

long route_b_dimension(const ModuleSpec& m1, const ModuleSpec& m2, const OdotWindow& window) {
    const int lifted = window.d1 + window.d2;
    const Partition bottom;  // M^2(0) is spanned by the highest-weight vector
    PBWVector bottom_vec = PBWVector::unit(bottom);
    StripCache cache;

    EchelonBasis<PairKey> rel;
    for (const auto& inst : ideal_instances(m1.algebra, window.max_weight, window.d2 + 1)) {
        PBWVector r0 = rho_zero(inst, m2, bottom_vec);
        for (int d1 = 0; d1 <= lifted; ++d1) {
            for (const auto& v1 : graded_basis(m1, d1)) {
                PBWVector r1 = rho_one(inst, m1, PBWVector::unit(v1));
                if (max_degree(r1) > lifted) continue;
                PairVec row;
                for (const auto& [nu, c] : r1) row.add({nu, bottom}, c);
                // strip the M^2-side image back down to the bottom
                for (const auto& [nu, c] : r0) {
                    PairVec s = strip_monomial(m1, v1, nu, cache);
                    s *= c;
                    row += s;
                }
                bool fits = true;
                for (const auto& [key, c] : row) {
                    if (key.mu1.degree() > lifted) fits = false;
                }
                if (fits) rel.insert(row);
            }
        }
    }

    EchelonBasis<PairKey> image;
    for (int d1 = 0; d1 <= window.d1; ++d1) {
        for (const auto& v1 : graded_basis(m1, d1)) {
            for (int d2 = 0; d2 <= window.d2; ++d2) {
                for (const auto& v2 : graded_basis(m2, d2)) {
                    image.insert(rel.reduce(strip_monomial(m1, v1, v2, cache)));
                }
            }
        }
    }
    return static_cast<long>(image.rank());
}

}  // namespace

namespace {

constexpr int kWindowPad = 2;

OdotSpace build_odot_route_a(const ModuleSpec& m1, const ModuleSpec& m2,
                             const OdotWindow& window) {
    OdotWindow working{window.d1 + kWindowPad, window.d2 + kWindowPad, window.max_weight};
    OdotSpace space{m1, m2, window, working, {}, {}, {}, 0};
    for (int d1 = 0; d1 <= window.d1; ++d1) {
        for (const auto& v1 : graded_basis(m1, d1)) {
            for (int d2 = 0; d2 <= window.d2; ++d2) {
                for (const auto& v2 : graded_basis(m2, d2)) space.basis.push_back({v1, v2});
            }
        }
    }
    std::sort(space.basis.begin(), space.basis.end(),
              [](const PairKey& a, const PairKey& b) { return a < b; });
    OdotRelations rel = odot_relation_rows(m1, m2, working);
    space.excluded = rel.excluded;
    for (auto& row : rel.rows) space.relations.insert(std::move(row));
    for (const auto& key : space.basis) {
        space.image.insert(space.relations.reduce(PairVec::unit(key)));
    }
    return space;
}

}  // namespace

OdotSpace build_odot(const ModuleSpec& m1, const ModuleSpec& m2, const OdotWindow& window,
                     bool cross_check) {
    if (!(m1.algebra == m2.algebra)) {
        throw std::invalid_argument("build_odot: modules over different algebras");
    }
    OdotSpace space = build_odot_route_a(m1, m2, window);
    if (!cross_check) return space;

    if (m2.bottom_generated) {
        long dim_b = route_b_dimension(m1, m2, window);
        if (dim_b != space.dimension()) {
            // Disagreement at one window can be a truncation artifact; it is
            // a defect only if it persists at stabilized windows.
            bool persists = true;
            long prev_a = space.dimension(), prev_b = dim_b;
            for (int inc = 1; inc <= 2; ++inc) {
                OdotWindow wider{window.d1 + inc, window.d2 + inc, window.max_weight};
                long da = build_odot_route_a(m1, m2, wider).dimension();
                long db = route_b_dimension(m1, m2, wider);
                if (da != prev_a || db != prev_b || da == db) persists = false;
                prev_a = da;
                prev_b = db;
            }
            if (persists) {
                throw InconsistentWindows(
                    "contracted tensor product: rewrite route dimension " +
                    std::to_string(dim_b) + " != linear-algebra route dimension " +
                    std::to_string(space.dimension()) + " at stabilized windows");
            }
        }
    }
    return space;
}

PairVec l0_act_on_odot(const OdotSpace& space, const PBWVector& a, const PairVec& x) {
    const ModuleSpec voa = vacuum_module(space.m1.algebra);
    PairVec out;
    for (const auto& [key, cx] : x) {
        PBWVector v1 = PBWVector::unit(key.mu1);
        PBWVector v2 = PBWVector::unit(key.mu2);
        for (const auto& [mu, ca] : a) {
            const int wa = mu.degree();
            PBWVector amu = PBWVector::unit(mu);
            for (int j = 0; j <= key.mu1.degree() + wa - 1; ++j) {
                Scalar b = binomial(wa - 1, j);
                if (b.is_zero()) continue;
                PBWVector img = composite_mode(voa, amu, j, space.m1, v1);
                if (img.is_zero()) continue;
                ensure_within(img, space.working.d1, "l0_act_on_odot");
                for (const auto& [nu, c] : img) out.add({nu, key.mu2}, cx * ca * b * c);
            }
            PBWVector img2 = zero_mode(voa, amu, space.m2, v2);
            ensure_within(img2, space.working.d2, "l0_act_on_odot");
            for (const auto& [nu, c] : img2) out.add({key.mu1, nu}, cx * ca * c);
        }
    }
    return space.reduce(out);
}

PairVec av_act_on_odot(const OdotSpace& space, const PBWVector& a, const PairVec& x) {
    if (!space.m1.bottom_generated && !space.m2.bottom_generated) {
        throw HypothesisUnmet("A(V)-action needs a bottom-generated factor");
    }
    const ModuleSpec voa = vacuum_module(space.m1.algebra);
    PairVec expr1, expr2;
    for (const auto& [key, cx] : x) {
        PBWVector v1 = PBWVector::unit(key.mu1);
        PBWVector v2 = PBWVector::unit(key.mu2);
        // (a*v1 - v1*a) (.) v2 + v1 (.) o(a)v2
        PBWVector left = zhu_star_left(voa, a, space.m1, v1) -
                         zhu_star_right(voa, v1, a, space.m1);
        ensure_within(left, space.working.d1, "av_act_on_odot");
        for (const auto& [nu, c] : left) expr1.add({nu, key.mu2}, cx * c);
        PBWVector oz = zero_mode(voa, a, space.m2, v2);
        for (const auto& [nu, c] : oz) expr1.add({key.mu1, nu}, cx * c);

        // o(a)v1 (.) v2 + v1 (.) Res Y(a,z)v2 (-1+z)^{wt a - 1}
        PBWVector ov1 = zero_mode(voa, a, space.m1, v1);
        for (const auto& [nu, c] : ov1) expr2.add({nu, key.mu2}, cx * c);
        for (const auto& [mu, ca] : a) {
            const int wa = mu.degree();
            for (int j = 0; j <= key.mu2.degree() + wa - 1; ++j) {
                Scalar b = binomial(wa - 1, j) * sign_pow(wa - 1 - j);
                if (b.is_zero()) continue;
                PBWVector img = composite_mode(voa, PBWVector::unit(mu), j, space.m2, v2);
                if (img.is_zero()) continue;
                ensure_within(img, space.working.d2, "av_act_on_odot");
                for (const auto& [nu, c] : img) expr2.add({key.mu1, nu}, cx * ca * b * c);
            }
        }
    }
    PairVec red1 = space.reduce(expr1);
    PairVec red2 = space.reduce(expr2);
    if (!(red1 == red2)) {
        throw InconsistentWindows(
            "A(V)-action: the two defining expressions disagree in the quotient");
    }
    return red1;
}

namespace {

FusionResult fusion_rule_once(const ModuleSpec& m1, const ModuleSpec& m2,
                              const BottomModule& bottom3, const OdotWindow& window) {
    const ModuleSpec voa = vacuum_module(m1.algebra);
    FusionResult res{build_odot(m1, m2, window)};
    res.odot_dimension = res.space.dimension();
    res.excluded_relations = res.space.excluded;
    res.quotient_keys = res.space.working_free_keys();

    // keys carrying the reported image: constraint skips only matter there
    std::set<PairKey> image_support;
    for (const auto& [pivot, row] : res.space.image.rows()) {
        for (const auto& [k, c] : row) image_support.insert(k);
    }

    const int b = bottom3.dimension();
    using HomKey = std::pair<int, PairKey>;
    std::vector<HomKey> unknowns;
    for (int r = 0; r < b; ++r) {
        for (const auto& k : res.quotient_keys) unknowns.emplace_back(r, k);
    }
    std::map<PairKey, std::size_t> qindex;
    for (std::size_t i = 0; i < res.quotient_keys.size(); ++i) {
        qindex[res.quotient_keys[i]] = i;
    }

    std::vector<SparseVec<HomKey>> constraints;
    for (int wa = 1; wa <= window.max_weight; ++wa) {
        for (const auto& a : graded_basis(voa, wa)) {
            PBWVector av = PBWVector::unit(a);
            BottomModule::Matrix om = bottom3.o_matrix(voa, a);
            for (const auto& xkey : res.quotient_keys) {
                PairVec ax;
                try {
                    ax = l0_act_on_odot(res.space, av, PairVec::unit(xkey));
                } catch (const WindowOverflow&) {
                    if (image_support.count(xkey) != 0) ++res.skipped_constraints;
                    continue;
                }
                for (int r = 0; r < b; ++r) {
                    SparseVec<HomKey> row;
                    for (const auto& [ykey, c] : ax) row.add({r, ykey}, c);
                    for (int s = 0; s < b; ++s) {
                        Scalar c = om[static_cast<std::size_t>(r)][static_cast<std::size_t>(s)];
                        if (!c.is_zero()) row.add({s, xkey}, -c);
                    }
                    if (!row.is_zero()) constraints.push_back(std::move(row));
                }
            }
        }
    }
    auto kernel = solve_kernel(unknowns, constraints);

    // The kernel lives over the whole working quotient; the fusion count is
    // the rank of its restriction to the image of the nominal window.
    using ImgKey = std::pair<int, PairKey>;
    EchelonBasis<ImgKey> restricted;
    for (const auto& vec : kernel.basis) {
        std::vector<std::vector<Scalar>> mat(
            static_cast<std::size_t>(b),
            std::vector<Scalar>(res.quotient_keys.size(), Scalar(0)));
        for (const auto& [hk, c] : vec) {
            mat[static_cast<std::size_t>(hk.first)][qindex.at(hk.second)] = c;
        }
        SparseVec<ImgKey> values;
        for (int r = 0; r < b; ++r) {
            for (const auto& [pivot, row] : res.space.image.rows()) {
                Scalar acc(0);
                for (const auto& [k, c] : row) {
                    auto it = qindex.find(k);
                    if (it != qindex.end()) {
                        acc += c * mat[static_cast<std::size_t>(r)][it->second];
                    }
                }
                values.add({r, pivot}, acc);
            }
        }
        if (!restricted.insert(values).is_zero()) res.hom_basis.push_back(std::move(mat));
    }
    res.fusion_dimension = static_cast<long>(restricted.rank());
    return res;
}

}  // namespace

FusionResult fusion_rule(const ModuleSpec& m1, const ModuleSpec& m2,
                         const BottomModule& bottom3, const OdotWindow& window,
                         bool stability_sweep) {
    FusionResult res = fusion_rule_once(m1, m2, bottom3, window);
    if (stability_sweep) {
        OdotWindow w1{window.d1 + 1, window.d2 + 1, window.max_weight};
        OdotWindow w2{window.d1 + 2, window.d2 + 2, window.max_weight};
        long dim1 = build_odot(m1, m2, w1, false).dimension();
        long dim2 = build_odot(m1, m2, w2, false).dimension();
        res.stable = (res.odot_dimension == dim1 && dim1 == dim2 &&
                      res.skipped_constraints == 0);
    }
    return res;
}

std::vector<DualPairKey> BoxdotSpace::quotient_basis() const {
    std::vector<DualPairKey> out;
    for (const auto& [pivot, row] : image.rows()) out.push_back(pivot);
    return out;
}

std::vector<DualPairKey> BoxdotSpace::working_free_keys() const {
    std::vector<DualPairKey> out;
    for (int d3 = 0; d3 <= working.d3; ++d3) {
        for (const auto& v3 : graded_basis(m3, d3)) {
            for (int d2 = 0; d2 <= working.d2; ++d2) {
                for (const auto& v2 : graded_basis(m2, d2)) {
                    DualPairKey k{v3, v2};
                    if (!relations.is_pivot(k)) out.push_back(k);
                }
            }
        }
    }
    std::sort(out.begin(), out.end());
    return out;
}

BoxdotSpace build_boxdot(const ModuleSpec& m3, const ModuleSpec& m2, const Scalar& w,
                         const BoxdotWindow& window) {
    if (w.is_zero()) throw ZeroMarkedPoint("build_boxdot: marked point must be nonzero");
    if (!(m3.algebra == m2.algebra)) {
        throw std::invalid_argument("build_boxdot: modules over different algebras");
    }
    const AlgebraSpec alg = m3.algebra;
    const ModuleSpec voa = vacuum_module(alg);
    BoxdotWindow working{window.d3 + kWindowPad, window.d2 + kWindowPad, window.max_weight};
    BoxdotSpace space{m3, m2, w, window, working, {}, {}, {}, 0};
    for (int d3 = 0; d3 <= window.d3; ++d3) {
        for (const auto& v3 : graded_basis(m3, d3)) {
            for (int d2 = 0; d2 <= window.d2; ++d2) {
                for (const auto& v2 : graded_basis(m2, d2)) space.basis.push_back({v3, v2});
            }
        }
    }
    std::sort(space.basis.begin(), space.basis.end(),
              [](const DualPairKey& a, const DualPairKey& b) { return a < b; });

    std::vector<ChiralElement> ideal;
    for (int wa = 1; wa <= working.max_weight; ++wa) {
        for (const auto& a : graded_basis(voa, wa)) {
            PBWVector av = PBWVector::unit(a);
            ideal.push_back(chiral_term(alg, av, -1, -wa, w));  // a (x) (z-w)^{wt}/z
            for (int k = 1; k <= working.d3 + 1; ++k) {
                ideal.push_back(chiral_term(alg, av, 0, -(wa - 1 + k), w));
            }
        }
    }
    for (const auto& x : ideal) {
        for (int d3 = 0; d3 <= working.d3; ++d3) {
            for (const auto& v3 : graded_basis(m3, d3)) {
                PBWVector rinf = rho_infty(x, m3, PBWVector::unit(v3));
                bool fits3 = max_degree(rinf) <= working.d3;
                for (int d2 = 0; d2 <= working.d2; ++d2) {
                    for (const auto& v2 : graded_basis(m2, d2)) {
                        PBWVector r0 = rho_zero(x, m2, PBWVector::unit(v2));
                        if (!fits3 || max_degree(r0) > working.d2) {
                            ++space.excluded;
                            continue;
                        }
                        DualPairVec row;
                        for (const auto& [nu, c] : rinf) row.add({nu, v2}, c);
                        for (const auto& [nu, c] : r0) row.add({v3, nu}, c);
                        if (!row.is_zero()) space.relations.insert(row);
                    }
                }
            }
        }
    }
    for (const auto& key : space.basis) {
        space.image.insert(space.relations.reduce(DualPairVec::unit(key)));
    }
    return space;
}

DualPairVec l0_act_on_boxdot(const BoxdotSpace& space, const PBWVector& a,
                             const DualPairVec& x) {
    const AlgebraSpec alg = space.m3.algebra;
    DualPairVec out;
    for (const auto& [mu, ca] : a) {
        ChiralElement rep = chiral_term(alg, PBWVector::unit(mu), 0, -(mu.degree() - 1),
                                        space.marked_point);
        for (const auto& [key, cx] : x) {
            PBWVector rinf = rho_infty(rep, space.m3, PBWVector::unit(key.mu3));
            ensure_within(rinf, space.working.d3, "l0_act_on_boxdot");
            for (const auto& [nu, c] : rinf) out.add({nu, key.mu2}, ca * cx * c);
            PBWVector r0 = rho_zero(rep, space.m2, PBWVector::unit(key.mu2));
            ensure_within(r0, space.working.d2, "l0_act_on_boxdot");
            for (const auto& [nu, c] : r0) out.add({key.mu3, nu}, ca * cx * c);
        }
    }
    return space.reduce(out);
}

BoxdotHomResult boxdot_hom(const BoxdotSpace& space, const BottomModule& bottom1) {
    const ModuleSpec voa = vacuum_module(space.m3.algebra);
    BoxdotHomResult res;
    res.boxdot_dimension = space.dimension();
    auto qkeys = space.working_free_keys();

    std::set<DualPairKey> image_support;
    for (const auto& [pivot, row] : space.image.rows()) {
        for (const auto& [k, c] : row) image_support.insert(k);
    }

    const int b = bottom1.dimension();
    using HomKey = std::pair<int, DualPairKey>;
    std::vector<HomKey> unknowns;
    for (int r = 0; r < b; ++r) {
        for (const auto& k : qkeys) unknowns.emplace_back(r, k);
    }
    std::map<DualPairKey, std::size_t> qindex;
    for (std::size_t i = 0; i < qkeys.size(); ++i) qindex[qkeys[i]] = i;

    std::vector<SparseVec<HomKey>> constraints;
    for (int wa = 1; wa <= space.working.max_weight; ++wa) {
        for (const auto& a : graded_basis(voa, wa)) {
            PBWVector av = PBWVector::unit(a);
            BottomModule::Matrix om = bottom1.o_matrix(voa, a);
            for (const auto& xkey : qkeys) {
                DualPairVec ax;
                try {
                    ax = l0_act_on_boxdot(space, av, DualPairVec::unit(xkey));
                } catch (const WindowOverflow&) {
                    if (image_support.count(xkey) != 0) ++res.skipped_constraints;
                    continue;
                }
                // F(a.x) = -o(a)^T F(x) on the dual bottom
                for (int r = 0; r < b; ++r) {
                    SparseVec<HomKey> row;
                    for (const auto& [ykey, c] : ax) row.add({r, ykey}, c);
                    for (int s = 0; s < b; ++s) {
                        Scalar c = om[static_cast<std::size_t>(s)][static_cast<std::size_t>(r)];
                        if (!c.is_zero()) row.add({s, xkey}, c);
                    }
                    if (!row.is_zero()) constraints.push_back(std::move(row));
                }
            }
        }
    }
    auto kernel = solve_kernel(unknowns, constraints);

    using ImgKey = std::pair<int, DualPairKey>;
    EchelonBasis<ImgKey> restricted;
    for (const auto& vec : kernel.basis) {
        SparseVec<ImgKey> values;
        for (int r = 0; r < b; ++r) {
            for (const auto& [pivot, row] : space.image.rows()) {
                Scalar acc(0);
                for (const auto& [k, c] : row) acc += c * vec.coeff({r, k});
                values.add({r, pivot}, acc);
            }
        }
        restricted.insert(values);
    }
    res.hom_dimension = static_cast<long>(restricted.rank());
    return res;
}

PairVec pi_map(const OdotSpace& target, const BimodKey& key) {
    if (key.idx != 0) {
        throw std::invalid_argument("pi_map: bottom index out of range for a 1-dim bottom");
    }
    return target.reduce(PairVec::unit({key.mu, Partition()}));
}

}  // namespace fusionkit
