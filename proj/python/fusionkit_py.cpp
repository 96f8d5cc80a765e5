#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "fusionkit/cfb.hpp"
#include "fusionkit/selftest.hpp"

namespace py = pybind11;
using namespace fusionkit;

namespace {

Scalar parse(const std::string& s) { return Scalar::parse(s); }

struct Modules {
    ModuleSpec m1, m2, m3;
};

Modules make_modules(const std::string& algebra, const std::string& param,
                     const std::string& w1, const std::string& w2, const std::string& w3) {
    if (algebra == "virasoro") {
        Scalar c = parse(param);
        ModuleSpec m2 = parse(w2).is_zero() ? ModuleSpec::virasoro_vacuum(c)
                                            : ModuleSpec::virasoro_verma(c, parse(w2));
        return {ModuleSpec::virasoro_verma(c, parse(w1)), m2,
                ModuleSpec::virasoro_verma(c, parse(w3))};
    }
    if (algebra == "heisenberg") {
        Scalar k = parse(param);
        return {ModuleSpec::heisenberg_fock(k, parse(w1)),
                ModuleSpec::heisenberg_fock(k, parse(w2)),
                ModuleSpec::heisenberg_fock(k, parse(w3))};
    }
    throw std::invalid_argument("algebra must be 'virasoro' or 'heisenberg'");
}

py::dict fusion_py(const std::string& algebra, const std::string& param,
                   const std::string& w1, const std::string& w2, const std::string& w3,
                   int depth, int maxwt, bool stability) {
    Modules mods = make_modules(algebra, param, w1, w2, w3);
    FusionResult fr = fusion_rule(mods.m1, mods.m2, BottomModule::from_module(mods.m3),
                                  {depth, depth, maxwt}, stability);
    py::dict out;
    out["odot_dimension"] = fr.odot_dimension;
    out["fusion_dimension"] = fr.fusion_dimension;
    out["excluded_relations"] = fr.excluded_relations;
    out["skipped_constraints"] = fr.skipped_constraints;
    out["stable"] = fr.stable;
    py::list basis;
    for (const auto& key : fr.space.quotient_basis()) {
        basis.append(py::make_tuple(key.mu1.str(), key.mu2.str()));
    }
    out["quotient_basis"] = basis;
    return out;
}

py::dict odot_py(const std::string& algebra, const std::string& param, const std::string& w1,
                 const std::string& w2, int depth, int maxwt) {
    Modules mods = make_modules(algebra, param, w1, w2, w1);
    OdotSpace space = build_odot(mods.m1, mods.m2, {depth, depth, maxwt});
    py::dict out;
    out["dimension"] = space.dimension();
    out["excluded_relations"] = space.excluded;
    py::list basis;
    for (const auto& key : space.quotient_basis()) {
        basis.append(py::make_tuple(key.mu1.str(), key.mu2.str()));
    }
    out["quotient_basis"] = basis;
    PBWVector gen = generator_state(mods.m1.algebra).vec;
    py::list action;
    auto reps = space.quotient_basis();
    for (const auto& col : reps) {
        PairVec img = l0_act_on_odot(space, gen, PairVec::unit(col));
        py::list column;
        for (const auto& row : reps) column.append(img.coeff(row).str());
        action.append(column);
    }
    out["generator_action"] = action;
    return out;
}

py::dict zhu_py(const std::string& algebra, const std::string& param, const std::string& w1,
                const std::string& w2, int depth, int maxwt) {
    Modules mods = make_modules(algebra, param, w1, w2, w1);
    const ModuleSpec voa = vacuum_module(mods.m1.algebra);
    ZhuWindow av = build_zhu_window(voa, voa, maxwt);
    BimoduleWindow bw =
        build_bimodule_tensor_window(mods.m1, BottomModule::from_module(mods.m2), maxwt);
    OdotSpace space = build_odot(mods.m1, mods.m2, {depth, depth, maxwt});
    py::dict out;
    out["av_dimension_bound"] = av.dimension();
    out["bimodule_tensor_dimension"] = bw.dimension();
    out["odot_dimension"] = space.dimension();
    out["strict_gap"] = bw.dimension() > space.dimension();
    return out;
}

py::dict blocks_py(const std::string& algebra, const std::string& param,
                   const std::string& w1, const std::string& w2, const std::string& w3,
                   int depth, int maxwt, int dual_depth, const std::string& mark) {
    Modules mods = make_modules(algebra, param, w1, w2, w3);
    FusionResult fr = fusion_rule(mods.m1, mods.m2, BottomModule::from_module(mods.m3),
                                  {depth, depth, maxwt}, false);
    RestrictedBlock phi = hom_to_block(mods.m1, mods.m2, mods.m3, fr);
    ExtendedBlock psi = extend_block(phi, dual_depth, maxwt, 2, 2);
    auto violations = check_invariance(psi, maxwt, std::min(depth, 2), std::min(depth, 2));
    MarkedPointBlock phiw(psi, parse(mark), dual_depth, 2 * dual_depth + 4, depth);
    py::dict out;
    out["fusion_dimension"] = fr.fusion_dimension;
    out["invariance_violations"] = static_cast<long>(violations.size());
    out["conformal_exponent"] = phiw.conformal_exponent().str();
    out["bottom_value"] = phiw.eval(Partition(), Partition()).str();
    return out;
}

py::list selftest_py(std::uint64_t seed, bool corrupt) {
    py::list out;
    for (const auto& suite : run_selftest(seed, corrupt)) {
        py::dict d;
        d["name"] = suite.name;
        d["instances"] = suite.instances;
        d["failures"] = suite.failures;
        out.append(d);
    }
    return out;
}

}  // namespace

PYBIND11_MODULE(_fusionkit, m) {
    m.doc() = "exact fusion rules via contracted tensor products";
    m.def("fusion", &fusion_py, py::arg("algebra"), py::arg("parameter"), py::arg("w1"),
          py::arg("w2"), py::arg("w3"), py::arg("depth") = 4, py::arg("maxwt") = 4,
          py::arg("stability") = true,
          "fusion dimension of (M1, M2; M3) via the contracted tensor product");
    m.def("odot", &odot_py, py::arg("algebra"), py::arg("parameter"), py::arg("w1"),
          py::arg("w2"), py::arg("depth") = 4, py::arg("maxwt") = 4,
          "windowed contracted-product quotient with the generator action");
    m.def("zhu", &zhu_py, py::arg("algebra"), py::arg("parameter"), py::arg("w1"),
          py::arg("w2"), py::arg("depth") = 4, py::arg("maxwt") = 4,
          "windowed Zhu-algebra comparison against the contracted product");
    m.def("blocks", &blocks_py, py::arg("algebra"), py::arg("parameter"), py::arg("w1"),
          py::arg("w2"), py::arg("w3"), py::arg("depth") = 3, py::arg("maxwt") = 3,
          py::arg("dual_depth") = 3, py::arg("mark") = "1",
          "extend the restricted block and verify invariance");
    m.def("selftest", &selftest_py, py::arg("seed") = 20240901, py::arg("corrupt") = false,
          "run the randomized property suites");
}
