#include <CLI11.hpp>

#include <chrono>
#include <iostream>

#include "fusionkit/cfb.hpp"
#include "fusionkit/report.hpp"
#include "fusionkit/selftest.hpp"

using namespace fusionkit;

namespace {

struct CommonOpts {
    int depth = 4;
    int maxwt = 4;
    int dual_depth = 3;
    std::string mark = "1";
    std::string format = "text";
    bool verify = false;
};

void add_common(CLI::App* cmd, CommonOpts& o) {
    cmd->add_option("--depth", o.depth, "module degree window D");
    cmd->add_option("--maxwt", o.maxwt, "generator weight cutoff W");
    cmd->add_option("--dual-depth", o.dual_depth, "dual module depth D3");
    cmd->add_option("--mark", o.mark, "marked point w (rational p/q)");
    cmd->add_option("--format", o.format, "output format: text or json")
        ->check(CLI::IsMember({"text", "json"}));
}

void emit(const Report& report, const CommonOpts& o,
          std::chrono::steady_clock::time_point start) {
    std::cout << (o.format == "json" ? report.json() : report.text());
    auto ms = std::chrono::duration_cast<std::chrono::milliseconds>(
                  std::chrono::steady_clock::now() - start)
                  .count();
    // timing stays off the report so identical runs stay byte-identical
    std::cerr << "timing_millis: " << ms << "\n";
}

struct Triple {
    ModuleSpec m1, m2, m3;
    std::vector<std::pair<std::string, Scalar>> params;
    std::string algebra;
};

Triple virasoro_triple(const std::string& c_s, const std::string& h1_s,
                       const std::string& h2_s, const std::string& h3_s) {
    Scalar c = Scalar::parse(c_s), h1 = Scalar::parse(h1_s), h2 = Scalar::parse(h2_s),
           h3 = Scalar::parse(h3_s);
    ModuleSpec m2 = h2.is_zero() ? ModuleSpec::virasoro_vacuum(c)
                                 : ModuleSpec::virasoro_verma(c, h2);
    return {ModuleSpec::virasoro_verma(c, h1), m2, ModuleSpec::virasoro_verma(c, h3),
            {{"c", c}, {"h1", h1}, {"h2", h2}, {"h3", h3}},
            "virasoro"};
}

Triple heisenberg_triple(const std::string& k_s, const std::string& l_s,
                         const std::string& m_s, const std::string& n_s) {
    Scalar k = Scalar::parse(k_s), lam = Scalar::parse(l_s), mu = Scalar::parse(m_s),
           nu = Scalar::parse(n_s);
    return {ModuleSpec::heisenberg_fock(k, lam), ModuleSpec::heisenberg_fock(k, mu),
            ModuleSpec::heisenberg_fock(k, nu),
            {{"level", k}, {"lambda", lam}, {"mu", mu}, {"nu", nu}},
            "heisenberg"};
}

void run_fusion(const Triple& t, const CommonOpts& o) {
    auto start = std::chrono::steady_clock::now();
    OdotWindow window{o.depth, o.depth, o.maxwt};
    FusionResult fr = fusion_rule(t.m1, t.m2, BottomModule::from_module(t.m3), window);

    Report rep("fusion");
    rep.add("algebra", t.algebra);
    for (const auto& [k, v] : t.params) rep.add(k, v);
    rep.add("depth1", static_cast<long>(window.d1));
    rep.add("depth2", static_cast<long>(window.d2));
    rep.add("maxwt", static_cast<long>(window.max_weight));
    rep.add("dual_depth", static_cast<long>(o.dual_depth));
    rep.add("odot_dimension", fr.odot_dimension);
    rep.add("excluded_relations", fr.excluded_relations);
    rep.add("skipped_constraints", fr.skipped_constraints);
    rep.add("fusion_dimension", fr.fusion_dimension);
    rep.add("stability", fr.stable);
    rep.add("caveat", fr.stable ? std::string("none")
                                : std::string("windowed dimensions are upper bounds until "
                                              "stabilized"));
    if (o.verify) {
        RestrictedBlock phi = hom_to_block(t.m1, t.m2, t.m3, fr);
        long base_viol = restricted_block_violations(phi, o.maxwt, o.depth, o.depth);
        ExtendedBlock psi = extend_block(phi, o.dual_depth, o.maxwt, 2, 2);
        auto violations = check_invariance(psi, o.maxwt, 2, 2);
        bool roundtrip = true;
        for (int d1 = 0; d1 <= 2 && roundtrip; ++d1) {
            for (const auto& mu1 : graded_basis(t.m1, d1)) {
                for (int d2 = 0; d2 <= 2; ++d2) {
                    for (const auto& mu2 : graded_basis(t.m2, d2)) {
                        if (!(restrict_block_value(psi, mu1, mu2) == phi.eval(mu1, mu2))) {
                            roundtrip = false;
                        }
                    }
                }
            }
        }
        rep.add("restricted_block_violations", base_viol);
        rep.add("invariance_violations", static_cast<long>(violations.size()));
        rep.add("restriction_roundtrip", roundtrip);
    } else {
        rep.add("invariance", "skipped (--verify to run)");
    }
    emit(rep, o, start);
}

void run_zhu(const Triple& t, const CommonOpts& o) {
    auto start = std::chrono::steady_clock::now();
    const ModuleSpec voa = vacuum_module(t.m1.algebra);
    ZhuWindow av = build_zhu_window(voa, voa, o.maxwt);
    ZhuWindow am = build_zhu_window(voa, t.m1, o.maxwt);
    BimoduleWindow bw = build_bimodule_tensor_window(t.m1, BottomModule::from_module(t.m2),
                                                     o.maxwt);
    OdotSpace space = build_odot(t.m1, t.m2, {o.depth, o.depth, o.maxwt});

    Report rep("zhu");
    rep.add("algebra", t.algebra);
    for (const auto& [k, v] : t.params) rep.add(k, v);
    rep.add("maxwt", static_cast<long>(o.maxwt));
    rep.add("depth", static_cast<long>(o.depth));
    rep.add("av_dimension_bound", av.dimension());
    rep.add("av_excluded", av.excluded);
    rep.add("am1_dimension_bound", am.dimension());
    rep.add("am1_excluded", am.excluded);
    rep.add("bimodule_tensor_dimension", bw.dimension());
    rep.add("bimodule_excluded", bw.excluded);
    rep.add("odot_dimension", space.dimension());
    rep.add("strict_gap", bw.dimension() > space.dimension());
    rep.add("caveat", "windowed Zhu dimensions are upper bounds; A(V) is not graded");
    emit(rep, o, start);
}

void run_odot(const Triple& t, const CommonOpts& o) {
    auto start = std::chrono::steady_clock::now();
    OdotSpace space = build_odot(t.m1, t.m2, {o.depth, o.depth, o.maxwt});
    Report rep("odot");
    rep.add("algebra", t.algebra);
    for (const auto& [k, v] : t.params) rep.add(k, v);
    rep.add("depth1", static_cast<long>(o.depth));
    rep.add("depth2", static_cast<long>(o.depth));
    rep.add("maxwt", static_cast<long>(o.maxwt));
    rep.add("dimension", space.dimension());
    rep.add("excluded_relations", space.excluded);
    auto reps = space.quotient_basis();
    std::string basis;
    for (const auto& key : reps) {
        if (!basis.empty()) basis += " ";
        basis += key.mu1.str() + "(.)" + key.mu2.str();
    }
    rep.add("quotient_basis", basis);
    // generator action matrix on the image, columns indexed by the basis
    const AlgebraSpec alg = t.m1.algebra;
    PBWVector gen = generator_state(alg).vec;
    std::string matrix;
    for (const auto& col : reps) {
        PairVec img = l0_act_on_odot(space, gen, PairVec::unit(col));
        std::string entry;
        for (const auto& row : reps) {
            if (!entry.empty()) entry += ",";
            entry += img.coeff(row).str();
        }
        if (!matrix.empty()) matrix += "; ";
        matrix += entry;
    }
    rep.add("generator_action", matrix);
    emit(rep, o, start);
}

void run_blocks(const Triple& t, const CommonOpts& o) {
    auto start = std::chrono::steady_clock::now();
    OdotWindow window{o.depth, o.depth, o.maxwt};
    FusionResult fr = fusion_rule(t.m1, t.m2, BottomModule::from_module(t.m3), window, false);
    RestrictedBlock phi = hom_to_block(t.m1, t.m2, t.m3, fr);
    long base_viol = restricted_block_violations(phi, o.maxwt, o.depth, o.depth);
    ExtendedBlock psi = extend_block(phi, o.dual_depth, o.maxwt, 2, 2);
    auto violations = check_invariance(psi, o.maxwt, std::min(o.depth, 2),
                                       std::min(o.depth, 2));
    Scalar w = Scalar::parse(o.mark);
    MarkedPointBlock phiw(psi, w, o.dual_depth, 2 * o.dual_depth + 4, o.depth);

    Report rep("blocks");
    rep.add("algebra", t.algebra);
    for (const auto& [k, v] : t.params) rep.add(k, v);
    rep.add("depth", static_cast<long>(o.depth));
    rep.add("maxwt", static_cast<long>(o.maxwt));
    rep.add("dual_depth", static_cast<long>(o.dual_depth));
    rep.add("marked_point", w);
    rep.add("fusion_dimension", fr.fusion_dimension);
    rep.add("restricted_block_violations", base_viol);
    rep.add("invariance_violations", static_cast<long>(violations.size()));
    rep.add("conformal_exponent", phiw.conformal_exponent());
    rep.add("bottom_value", phiw.eval(Partition(), Partition()));
    emit(rep, o, start);
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"fusionkit: exact fusion rules via contracted tensor products"};
    app.require_subcommand(1);

    CommonOpts fo, zo, oo, bo;
    zo.maxwt = 6;  // Zhu windows default wider so the bound sequences are informative
    std::string f_c = "1", f_h1 = "0", f_h2 = "0", f_h3 = "0";
    std::string f_k = "1", f_lam = "0", f_mu = "0", f_nu = "0";

    auto* fusion = app.add_subcommand("fusion", "fusion rule via the contracted product");
    fusion->require_subcommand(1);
    auto* fv = fusion->add_subcommand("virasoro", "Verma modules over the Virasoro VOA");
    fv->add_option("--c", f_c, "central charge");
    fv->add_option("--h1", f_h1, "weight of M1");
    fv->add_option("--h2", f_h2, "weight of M2 (0 selects the vacuum VOA)");
    fv->add_option("--h3", f_h3, "weight of M3");
    add_common(fv, fo);
    fv->add_flag("--verify", fo.verify, "extend the block and check invariance");
    auto* fh = fusion->add_subcommand("heisenberg", "Fock modules over the Heisenberg VOA");
    fh->add_option("--level", f_k, "level k");
    fh->add_option("--lambda", f_lam, "charge of M1");
    fh->add_option("--mu", f_mu, "charge of M2");
    fh->add_option("--nu", f_nu, "charge of M3");
    add_common(fh, fo);
    fh->add_flag("--verify", fo.verify, "extend the block and check invariance");

    std::string z_c = "1", z_h1 = "0", z_k = "1", z_lam = "0", z_mu = "0";
    auto* zhu = app.add_subcommand("zhu", "windowed Zhu-algebra comparison");
    zhu->require_subcommand(1);
    auto* zv = zhu->add_subcommand("virasoro", "");
    zv->add_option("--c", z_c, "central charge");
    zv->add_option("--h1", z_h1, "weight of M1");
    add_common(zv, zo);
    auto* zh = zhu->add_subcommand("heisenberg", "");
    zh->add_option("--level", z_k, "level k");
    zh->add_option("--lambda", z_lam, "charge of M1");
    zh->add_option("--mu", z_mu, "charge of M2");
    add_common(zh, zo);

    std::string o_alg = "virasoro", o_c = "1", o_h1 = "1/3", o_h2 = "0";
    std::string o_k = "1", o_lam = "1/2", o_mu = "1/2";
    auto* odot = app.add_subcommand("odot", "dump the contracted-product quotient");
    odot->add_option("--algebra", o_alg, "virasoro or heisenberg")
        ->check(CLI::IsMember({"virasoro", "heisenberg"}));
    odot->add_option("--c", o_c, "central charge");
    odot->add_option("--h1", o_h1, "weight of M1");
    odot->add_option("--h2", o_h2, "weight of M2 (0 selects the vacuum VOA)");
    odot->add_option("--level", o_k, "level k");
    odot->add_option("--lambda", o_lam, "charge of M1");
    odot->add_option("--mu", o_mu, "charge of M2");
    add_common(odot, oo);

    std::string b_alg = "virasoro", b_c = "1", b_h1 = "1/3", b_h2 = "0", b_h3 = "1/3";
    std::string b_k = "1", b_lam = "1/2", b_mu = "1/2", b_nu = "1";
    auto* blocks = app.add_subcommand("blocks", "extend a restricted block and verify it");
    blocks->add_option("--algebra", b_alg, "virasoro or heisenberg")
        ->check(CLI::IsMember({"virasoro", "heisenberg"}));
    blocks->add_option("--c", b_c, "central charge");
    blocks->add_option("--h1", b_h1, "");
    blocks->add_option("--h2", b_h2, "");
    blocks->add_option("--h3", b_h3, "");
    blocks->add_option("--level", b_k, "");
    blocks->add_option("--lambda", b_lam, "");
    blocks->add_option("--mu", b_mu, "");
    blocks->add_option("--nu", b_nu, "");
    add_common(blocks, bo);

    std::uint64_t seed = 20240901;
    bool corrupt = false;
    std::string s_format = "text";
    auto* selftest = app.add_subcommand("selftest", "run the property suites");
    selftest->add_option("--seed", seed, "RNG seed");
    selftest->add_flag("--corrupt", corrupt, "inject one violation (must fail)");
    selftest->add_option("--format", s_format, "text or json")
        ->check(CLI::IsMember({"text", "json"}));

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return 2;
    }

    try {
        if (fv->parsed()) run_fusion(virasoro_triple(f_c, f_h1, f_h2, f_h3), fo);
        if (fh->parsed()) run_fusion(heisenberg_triple(f_k, f_lam, f_mu, f_nu), fo);
        if (zv->parsed()) run_zhu(virasoro_triple(z_c, z_h1, "0", "0"), zo);
        if (zh->parsed()) run_zhu(heisenberg_triple(z_k, z_lam, z_mu, z_lam), zo);
        if (odot->parsed()) {
            Triple t = o_alg == "virasoro" ? virasoro_triple(o_c, o_h1, o_h2, o_h1)
                                           : heisenberg_triple(o_k, o_lam, o_mu, o_lam);
            run_odot(t, oo);
        }
        if (blocks->parsed()) {
            Triple t = b_alg == "virasoro" ? virasoro_triple(b_c, b_h1, b_h2, b_h3)
                                           : heisenberg_triple(b_k, b_lam, b_mu, b_nu);
            run_blocks(t, bo);
        }
        if (selftest->parsed()) {
            auto start = std::chrono::steady_clock::now();
            auto results = run_selftest(seed, corrupt);
            Report rep("selftest");
            rep.add("seed", static_cast<long>(seed));
            rep.add("corrupt", corrupt);
            long total = 0, failed = 0;
            for (const auto& suite : results) {
                rep.add(suite.name,
                        std::to_string(suite.instances) + " instances, " +
                            std::to_string(suite.failures) + " failures");
                total += suite.instances;
                failed += suite.failures;
            }
            rep.add("total_instances", total);
            rep.add("total_failures", failed);
            rep.add("result", failed == 0 ? "pass" : "fail");
            CommonOpts so;
            so.format = s_format;
            emit(rep, so, start);
            return failed == 0 ? 0 : 1;
        }
    } catch (const WellDefinednessViolation& e) {
        std::cerr << "well-definedness violation: " << e.what() << "\n";
        return 3;
    } catch (const InconsistentWindows& e) {
        std::cerr << "inconsistent windows: " << e.what() << "\n";
        return 3;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 0;
}
