#include "fusionkit/modules.hpp"

#include <mutex>
#include <tuple>

namespace fusionkit {

namespace {

struct ModuleId {
    int kind;
    Scalar parameter;
    int flavor;
    Scalar highest_weight;

    friend bool operator<(const ModuleId& a, const ModuleId& b) {
        return std::tie(a.kind, a.parameter, a.flavor, a.highest_weight) <
               std::tie(b.kind, b.parameter, b.flavor, b.highest_weight);
    }
};

ModuleId module_id(const ModuleSpec& m) {
    return {static_cast<int>(m.algebra.kind), m.algebra.parameter, static_cast<int>(m.flavor),
            m.highest_weight};
}

PBWVector mode_act_monomial_impl(const ModuleSpec& m, int n, const Partition& mu);

// memoized per (module, mode, monomial)
const PBWVector& mode_act_monomial(const ModuleSpec& m, int n, const Partition& mu) {
    using Key = std::tuple<ModuleId, int, Partition>;
    static std::map<Key, PBWVector> cache;
    static std::mutex mtx;
    Key key{module_id(m), n, mu};
    {
        std::lock_guard<std::mutex> lock(mtx);
        auto it = cache.find(key);
        if (it != cache.end()) return it->second;
    }
    PBWVector value = mode_act_monomial_impl(m, n, mu);
    std::lock_guard<std::mutex> lock(mtx);
    return cache.emplace(std::move(key), std::move(value)).first->second;
}

// L(n) or alpha(n) applied to a single normal-ordered monomial.
PBWVector mode_act_monomial_impl(const ModuleSpec& m, int n, const Partition& mu) {
    const bool vir = m.algebra.kind == AlgebraKind::virasoro;
    PBWVector out;
    if (mu.is_empty()) {
        if (n > 0) return out;  // highest weight annihilated
        if (n == 0) {
            out.add(mu, m.highest_weight);
            return out;
        }
        // Creation on the highest-weight vector.
        if (vir && m.flavor == ModuleFlavor::vacuumVOA && n == -1) return out;  // L(-1)vac = 0
        out.add(mu.prepend(-n), Scalar(1));
        return out;
    }
    const int m1 = mu.part(0);
    if (n <= -m1) {
        out.add(mu.prepend(-n), Scalar(1));
        return out;
    }
    // Commute past the leading creation mode.
    const Partition rest = mu.tail();
    // leading * (action on rest)
    for (const auto& [key, c] : mode_act_monomial(m, n, rest)) {
        for (const auto& [key2, c2] : mode_act_monomial(m, -m1, key)) out.add(key2, c * c2);
    }
    if (vir) {
        // [L(n), L(-m1)] = (n + m1) L(n - m1) + ((n^3 - n)/12) c delta_{n,m1}
        Scalar f(n + m1);
        if (!f.is_zero()) {
            for (const auto& [key, c] : mode_act_monomial(m, n - m1, rest)) out.add(key, f * c);
        }
        if (n == m1) {
            Scalar central = Scalar(static_cast<long>(n) * n * n - n, 12) * m.algebra.parameter;
            if (!central.is_zero()) out.add(rest, central);
        }
    } else {
        // [alpha(n), alpha(-m1)] = n k delta_{n,m1}
        if (n == m1) {
            Scalar central = Scalar(n) * m.algebra.parameter;
            if (!central.is_zero()) out.add(rest, central);
        }
    }
    return out;
}

}  // namespace

PBWVector mode_act(const ModuleSpec& m, int n, const PBWVector& v) {
    PBWVector out;
    for (const auto& [mu, c] : v) {
        for (const auto& [key, c2] : mode_act_monomial(m, n, mu)) out.add(key, c * c2);
    }
    return out;
}

long graded_dimension(const ModuleSpec& m, int n) {
    if (n < 0) return 0;
    return partition_count(n, m.min_part());
}

std::vector<Partition> graded_basis(const ModuleSpec& m, int n) {
    if (n < 0) return {};
    return partitions_of(n, m.min_part());
}

std::vector<Partition> window_basis(const ModuleSpec& m, int max_degree) {
    std::vector<Partition> out;
    for (int d = 0; d <= max_degree; ++d) {
        auto layer = graded_basis(m, d);
        out.insert(out.end(), layer.begin(), layer.end());
    }
    return out;
}

Scalar dual_pairing(const PBWVector& dual, const PBWVector& v) {
    Scalar acc(0);
    const PBWVector& shorter = dual.size() <= v.size() ? dual : v;
    const PBWVector& other = dual.size() <= v.size() ? v : dual;
    for (const auto& [k, c] : shorter) acc += c * other.coeff(k);
    return acc;
}

int max_degree(const PBWVector& v) {
    int d = 0;
    for (const auto& [k, c] : v) d = std::max(d, k.degree());
    return d;
}

PBWVector truncate_above(const PBWVector& v, int max_degree) {
    PBWVector out;
    for (const auto& [k, c] : v) {
        if (k.degree() <= max_degree) out.add(k, c);
    }
    return out;
}

void ensure_within(const PBWVector& v, int max_deg, const char* where) {
    if (max_degree(v) > max_deg) {
        throw WindowOverflow(std::string(where) + ": term exceeds degree window " +
                             std::to_string(max_deg));
    }
}

}  // namespace fusionkit
