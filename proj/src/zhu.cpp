#include "fusionkit/zhu.hpp"

namespace fusionkit {

namespace {

// sum_j binom(wt a + off, j) a(j + shift) v per homogeneous component of a.
PBWVector star_like(const ModuleSpec& voa, const PBWVector& a, int off, int shift,
                    const ModuleSpec& target, const PBWVector& v) {
    PBWVector out;
    const int deg_v = max_degree(v);
    for (const auto& [mu, c] : a) {
        const int wa = mu.degree();
        for (int j = 0; j + shift <= deg_v + wa - 1; ++j) {
            Scalar b = binomial(wa + off, j);
            if (b.is_zero()) continue;
            PBWVector term = composite_mode(voa, PBWVector::unit(mu), j + shift, target, v);
            if (term.is_zero()) continue;
            term *= c * b;
            out += term;
        }
    }
    return out;
}

}  // namespace

PBWVector zhu_circ(const ModuleSpec& voa, const PBWVector& a, const ModuleSpec& target,
                   const PBWVector& v) {
    return star_like(voa, a, 0, -2, target, v);
}

PBWVector zhu_star_left(const ModuleSpec& voa, const PBWVector& a, const ModuleSpec& target,
                        const PBWVector& v) {
    return star_like(voa, a, 0, -1, target, v);
}

PBWVector zhu_star_right(const ModuleSpec& voa, const PBWVector& v, const PBWVector& a,
                         const ModuleSpec& target) {
    return star_like(voa, a, -1, -1, target, v);
}

ZhuWindow build_zhu_window(const ModuleSpec& voa, const ModuleSpec& target, int max_weight) {
    ZhuWindow zw{voa, target, max_weight, window_basis(target, max_weight), {}, 0};
    for (int wa = 1; wa <= max_weight; ++wa) {
        for (const auto& a : graded_basis(voa, wa)) {
            for (int dv = 0; dv <= max_weight; ++dv) {
                for (const auto& v : graded_basis(target, dv)) {
                    if (dv + wa + 1 > max_weight) {
                        ++zw.excluded;
                        continue;
                    }
                    zw.o_span.insert(
                        zhu_circ(voa, PBWVector::unit(a), target, PBWVector::unit(v)));
                }
            }
        }
    }
    return zw;
}

PBWVector zhu_theta(const ModuleSpec& voa, const PBWVector& a) { return theta_voa(voa, a); }

BottomModule BottomModule::from_module(const ModuleSpec& m) {
    BottomModule bm;
    bm.dim_ = 1;
    bm.has_module_ = true;
    bm.module_ = m;
    return bm;
}

BottomModule BottomModule::from_matrices(int dimension, std::map<Partition, Matrix> matrices) {
    BottomModule bm;
    bm.dim_ = dimension;
    bm.has_module_ = false;
    bm.matrices_ = std::move(matrices);
    return bm;
}

BottomModule::Matrix BottomModule::o_matrix(const ModuleSpec& voa, const Partition& a) const {
    if (!has_module_) {
        auto it = matrices_.find(a);
        if (it != matrices_.end()) return it->second;
        return Matrix(static_cast<std::size_t>(dim_),
                      std::vector<Scalar>(static_cast<std::size_t>(dim_), Scalar(0)));
    }
    PBWVector hw = PBWVector::unit(Partition());
    PBWVector img = zero_mode(voa, PBWVector::unit(a), module_, hw);
    return {{img.coeff(Partition())}};
}

BottomModule::Matrix BottomModule::o_matrix(const ModuleSpec& voa, const PBWVector& x) const {
    const auto d = static_cast<std::size_t>(dim_);
    Matrix acc(d, std::vector<Scalar>(d, Scalar(0)));
    for (const auto& [mu, c] : x) {
        Matrix part = o_matrix(voa, mu);
        for (std::size_t r = 0; r < d; ++r) {
            for (std::size_t s = 0; s < d; ++s) acc[r][s] += c * part[r][s];
        }
    }
    return acc;
}

BimoduleWindow build_bimodule_tensor_window(const ModuleSpec& m1, const BottomModule& bottom2,
                                            int max_weight) {
    const ModuleSpec voa = vacuum_module(m1.algebra);
    const int b = bottom2.dimension();
    BimoduleWindow bw;
    bw.max_weight = max_weight;
    for (const auto& mu : window_basis(m1, max_weight)) {
        for (int i = 0; i < b; ++i) bw.basis.push_back({mu, i});
    }
    for (int wa = 1; wa <= max_weight; ++wa) {
        for (const auto& a : graded_basis(voa, wa)) {
            PBWVector av = PBWVector::unit(a);
            BottomModule::Matrix om = bottom2.o_matrix(voa, a);
            for (int dv = 0; dv <= max_weight; ++dv) {
                for (const auto& v : graded_basis(m1, dv)) {
                    PBWVector vv = PBWVector::unit(v);
                    // O(M^1) (x) bottom
                    if (dv + wa + 1 <= max_weight) {
                        PBWVector circ = zhu_circ(voa, av, m1, vv);
                        for (int i = 0; i < b; ++i) {
                            SparseVec<BimodKey> row;
                            for (const auto& [nu, c] : circ) row.add({nu, i}, c);
                            bw.relations.insert(row);
                        }
                    } else {
                        ++bw.excluded;
                    }
                    // (v * a) (x) u = v (x) o(a) u
                    if (dv + wa <= max_weight) {
                        PBWVector vstara = zhu_star_right(voa, vv, av, m1);
                        for (int i = 0; i < b; ++i) {
                            SparseVec<BimodKey> row;
                            for (const auto& [nu, c] : vstara) row.add({nu, i}, c);
                            for (int k = 0; k < b; ++k) {
                                row.add({v, k}, -om[static_cast<std::size_t>(k)]
                                                    [static_cast<std::size_t>(i)]);
                            }
                            bw.relations.insert(row);
                        }
                    } else {
                        ++bw.excluded;
                    }
                }
            }
        }
    }
    return bw;
}

}  // namespace fusionkit
