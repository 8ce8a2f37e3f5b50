#include <cstdio>
#include <iostream>

#include "CLI11.hpp"
#include "orbicat/centre.hpp"
#include "orbicat/io.hpp"
#include "orbicat/locmod.hpp"
#include "orbicat/orbifold.hpp"
#include "orbicat/version.hpp"
#include "orbicat/wilson.hpp"

using namespace orbicat;

namespace {

struct RunConfig {
    double tol = 1e-9;
    std::uint64_t seed = 0;
    bool table = false;
    bool json = false;
    std::string out;
    Tolerance tolerance() const { return Tolerance{tol, tol}; }
};

ojson header(const std::string& cmd, const RunConfig& rc) {
    ojson j;
    j["version"] = kVersion;
    j["command"] = cmd;
    j["tol"] = rc.tol;
    j["seed"] = rc.seed;
    j["psi_branch"] = psi_branch();
    return j;
}

std::string fmt_cplx(const ojson& v) {
    char buf[64];
    double re = v[0].get<double>(), im = v[1].get<double>();
    if (std::abs(im) < 1e-9)
        std::snprintf(buf, sizeof buf, "%.6f", re);
    else
        std::snprintf(buf, sizeof buf, "%.6f%+.6fi", re, im);
    return buf;
}

bool is_cplx(const ojson& v) { return v.is_array() && v.size() == 2 && v[0].is_number() && v[1].is_number(); }

bool is_matrix(const ojson& v) {
    return v.is_array() && !v.empty() && v[0].is_array() && !v[0].empty() && is_cplx(v[0][0]);
}

std::string cell(const ojson& v) {
    if (is_cplx(v)) return fmt_cplx(v);
    if (v.is_string()) return v.get<std::string>();
    return v.dump();
}

// aligned plain-text rendering of a report
void render_table(const ojson& j, std::ostream& os, const std::string& indent = "") {
    size_t w = 0;
    for (auto& [k, v] : j.items()) w = std::max(w, k.size());
    for (auto& [k, v] : j.items()) {
        if (k == "checks" && v.is_object()) {
            os << indent << "checks:\n";
            size_t cw = 0;
            for (auto& [name, c] : v.items()) cw = std::max(cw, name.size());
            for (auto& [name, c] : v.items()) {
                char buf[64];
                std::snprintf(buf, sizeof buf, "%.3e", c["residual"].get<double>());
                os << indent << "  " << name << std::string(cw - name.size() + 2, ' ')
                   << (c["pass"].get<bool>() ? "pass" : "FAIL") << "  " << buf << "\n";
            }
        } else if (is_matrix(v)) {
            os << indent << k << ":\n";
            std::vector<std::vector<std::string>> cells;
            size_t cw = 0;
            for (auto& row : v) {
                cells.emplace_back();
                for (auto& e : row) {
                    cells.back().push_back(fmt_cplx(e));
                    cw = std::max(cw, cells.back().back().size());
                }
            }
            for (auto& row : cells) {
                os << indent << " ";
                for (auto& c : row) os << " " << std::string(cw - c.size(), ' ') << c;
                os << "\n";
            }
        } else if (v.is_object()) {
            os << indent << k << ":\n";
            render_table(v, os, indent + "  ");
        } else if (v.is_array() && !v.empty() && !is_cplx(v)) {
            os << indent << k << std::string(w - k.size() + 2, ' ');
            bool first = true;
            for (auto& e : v) {
                os << (first ? "" : ", ") << cell(e);
                first = false;
            }
            os << "\n";
        } else {
            os << indent << k << std::string(w - k.size() + 2, ' ') << cell(v) << "\n";
        }
    }
}

void emit(const ojson& j, const RunConfig& rc) {
    std::string text;
    if (rc.table) {
        std::ostringstream os;
        render_table(j, os);
        text = os.str();
    } else {
        text = pretty(j);
    }
    if (rc.out.empty())
        std::cout << text;
    else
        write_text_file(rc.out, text);
}

ojson cplx_list(const std::vector<cplx>& v) {
    ojson a = ojson::array();
    for (auto z : v) a.push_back(to_json(z));
    return a;
}

int cmd_cat_check(const std::string& path, const RunConfig& rc) {
    SkeletalCategory cat = load_category(path);
    ConditionReport r = check_category(cat, rc.tolerance());
    ojson j = header("cat check", rc);
    j["labels"] = cat.labels;
    j["global_dim"] = to_json(global_dimension(cat));
    j["checks"] = to_json(r);
    emit(j, rc);
    return r.pass() ? 0 : 1;
}

int cmd_build(const std::string& path, const RunConfig& rc) {
    OrbifoldDatum d = build_from_spherical(load_category(path));
    RunConfig q = rc;
    q.table = false;
    emit(datum_to_json(d), q);
    return 0;
}

int cmd_orbifold_check(const std::string& path, const RunConfig& rc) {
    OrbifoldDatum d = datum_from_json(read_json_file(path));
    ConditionReport r = verify_orbifold(d, rc.tolerance());
    ojson j = header("orbifold check", rc);
    j["labels"] = d.labels;
    j["trace_psi4"] = to_json(trace_psi4(d));
    j["checks"] = to_json(r);
    emit(j, rc);
    return r.pass() ? 0 : 1;
}

ojson grades_json(const WilsonObject& X) {
    ojson g = ojson::array();
    for (auto& [k, d] : X.M.dims) g.push_back({k[0], k[1], d});
    return g;
}

int cmd_ca_simples(const std::string& path, const RunConfig& rc) {
    WilsonCategory C(datum_from_json(read_json_file(path)));
    Tolerance tol = rc.tolerance();
    auto simples = enumerate_simples(C, rc.seed, tol);
    ojson j = header("ca simples", rc);
    j["simple_count"] = simples.size();
    ojson arr = ojson::array();
    double worst = 0;
    for (size_t k = 0; k < simples.size(); ++k) {
        ConditionReport r = C.check(simples[k], tol);
        for (auto& c : r.items) worst = std::max(worst, c.residual);
        arr.push_back({{"index", k},
                       {"grades", grades_json(simples[k])},
                       {"qdim", to_json(C.qdim(simples[k]))},
                       {"twist", to_json(k == 0 ? cplx(1.0) : C.twist_scalar(simples[k], tol))}});
    }
    if (!rc.table) j["simples"] = arr;
    ConditionReport checks;
    checks.tol = tol;
    checks.add("wilson_conditions", worst, std::max(1e-8, rc.tol));
    j["checks"] = to_json(checks);
    if (rc.table) {
        ojson t = ojson::array();
        for (auto& s : arr) t.push_back(s["qdim"]);
        j["qdims"] = t;
    }
    emit(j, rc);
    return checks.pass() ? 0 : 1;
}

ojson ca_report(const WilsonCategory& C, const CAModularData& r, const RunConfig& rc, ConditionReport& checks) {
    ojson j;
    j["simple_count"] = r.simples.size();
    j["qdims"] = cplx_list(r.md.qdim);
    j["smatrix"] = to_json(r.md.smatrix);
    j["tdiag"] = cplx_list(r.md.tdiag);
    j["global_dim"] = to_json(r.md.global_dim);
    checks = r.checks;
    double worst = 0;
    for (auto& X : r.simples)
        for (auto& c : C.check(X, rc.tolerance()).items) worst = std::max(worst, c.residual);
    checks.add("wilson_conditions", worst, std::max(1e-8, rc.tol));
    j["checks"] = to_json(checks);
    return j;
}

int cmd_ca_modular(const std::string& path, const RunConfig& rc) {
    WilsonCategory C(datum_from_json(read_json_file(path)));
    CAModularData r = modular_data(C, rc.seed, rc.tolerance());
    ConditionReport checks;
    ojson j = header("ca modular", rc);
    j.update(ca_report(C, r, rc, checks));
    emit(j, rc);
    return checks.pass() ? 0 : 1;
}

ConditionReport centre_checks(const SkeletalCategory& cat, const std::vector<HalfBraidedObject>& cs,
                              const ModularData& md, const RunConfig& rc) {
    ConditionReport c;
    c.tol = rc.tolerance();
    double hx = 0;
    for (auto& h : cs) hx = std::max(hx, hexagon_residual(cat, h));
    c.add("hexagon", hx, std::max(1e-8, rc.tol));
    cplx D = global_dimension(cat);
    c.add("global_dim", std::abs(md.global_dim - D * D) / std::abs(D * D), 1e-6);
    return c;
}

int cmd_centre(const std::string& path, const RunConfig& rc) {
    SkeletalCategory cat = load_category(path);
    auto cs = centre_simples(cat, rc.seed, rc.tolerance());
    ModularData md = centre_modular_data(cat, cs);
    ConditionReport c = centre_checks(cat, cs, md, rc);
    ojson j = header("centre", rc);
    j["simple_count"] = cs.size();
    j.update(modular_data_to_json(md));
    j["checks"] = to_json(c);
    emit(j, rc);
    return c.pass() ? 0 : 1;
}

ojson match_json(const MatchResult& m) {
    ojson j;
    j["status"] = m.matched ? "Match" : "NoMatch";
    j["perm"] = m.perm;
    j["residual"] = m.residual;
    return j;
}

int cmd_compare(const std::string& a, const std::string& b, const RunConfig& rc) {
    ModularData ma = modular_data_from_json(read_json_file(a));
    ModularData mb = modular_data_from_json(read_json_file(b));
    ojson j = header("compare", rc);
    try {
        MatchResult m = compare_modular_data(ma, mb, rc.tol);
        j.update(match_json(m));
        emit(j, rc);
        return m.matched ? 0 : 1;
    } catch (const Error& e) {
        if (e.kind() != "SizeMismatch") throw;
        j["status"] = "NoMatch";
        j["reason"] = "SizeMismatch";
        j["sizes"] = {ma.qdim.size(), mb.qdim.size()};
        emit(j, rc);
        return 1;
    }
}

int cmd_locmod(const std::string& cpath, const std::string& apath, const RunConfig& rc) {
    SkeletalCategory cat = load_category(cpath);
    AlgebraInMFC alg = algebra_from_json(read_json_file(apath), cat);
    Tolerance tol = rc.tolerance();
    ConditionReport checks = check_algebra(cat, alg, tol);
    ojson j = header("locmod", rc);
    j["support"] = alg.support;
    j["rescale"] = checks.info["rescale"];
    if (checks.pass()) {
        auto all = simple_modules(cat, alg, rc.seed, tol);
        auto loc = local_modules(cat, alg, rc.seed, tol);
        ojson mods = ojson::array();
        for (auto& M : all) mods.push_back({{"copies", M.copies}, {"locality", M.locality}});
        j["modules"] = mods;
        j["local_count"] = loc.size();
        try {
            ModularData md = locmod_modular_data(cat, alg, loc);
            j.update(modular_data_to_json(md));
            cplx dA = 0;
            for (int a : alg.support) dA += cat.qdim[a];
            cplx D = global_dimension(cat) / (dA * dA);
            checks.add("dimension_formula", std::abs(md.global_dim - D) / std::abs(D), 1e-6);
        } catch (const Error& e) {
            if (e.kind() != "DimensionMismatch") throw;
            checks.add("dimension_formula", e.residual(), 1e-6);
        }
    }
    j["checks"] = to_json(checks);
    emit(j, rc);
    return checks.pass() ? 0 : 1;
}

int cmd_centre_check(const std::string& path, const RunConfig& rc) {
    SkeletalCategory cat = load_category(path);
    Tolerance tol = rc.tolerance();
    ConditionReport all;
    all.tol = tol;
    OrbifoldDatum d = build_from_spherical(cat);
    all.merge(verify_orbifold(d, Tolerance{std::max(rc.tol, 1e-8), std::max(rc.tol, 1e-8)}), "orbifold.");
    WilsonCategory C(d);
    bool simple = C.is_simple_datum(tol);
    all.add_flag("datum_simple", simple);
    ojson j = header("centre-check", rc);
    j["labels"] = cat.labels;
    j["trace_psi4"] = to_json(trace_psi4(d));
    if (simple) {
        CAModularData r = modular_data(C, rc.seed, tol);
        ConditionReport ca;
        j["orbifold_route"] = ca_report(C, r, rc, ca);
        all.merge(ca, "ca.");
        auto cs = centre_simples(cat, rc.seed, tol);
        ModularData cmd = centre_modular_data(cat, cs);
        ojson oj = modular_data_to_json(cmd);
        oj["simple_count"] = cs.size();
        j["centre_route"] = oj;
        all.merge(centre_checks(cat, cs, cmd, rc), "centre.");
        try {
            MatchResult m = compare_modular_data(r.md, cmd, 1e-6);
            j["match"] = match_json(m);
            all.add_flag("match", m.matched, m.residual);
        } catch (const Error& e) {
            if (e.kind() != "SizeMismatch") throw;
            j["match"] = {{"status", "NoMatch"}, {"reason", "SizeMismatch"}};
            all.add_flag("match", false, 1.0);
        }
    }
    j["checks"] = to_json(all);
    emit(j, rc);
    return all.pass() ? 0 : 1;
}

void error_json(const std::string& kind, const std::string& msg, double residual) {
    ojson e;
    e["error"] = kind;
    e["message"] = msg;
    if (residual >= 0) e["residual"] = residual;
    std::cerr << e.dump() << "\n";
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Orbifold data, Wilson-line categories and their modular data"};
    app.set_version_flag("--version", std::string(kVersion));
    app.require_subcommand(1);
    RunConfig rc;
    auto common = [&](CLI::App* s, bool seed, bool fmt) {
        s->add_option("--tol", rc.tol, "numerical tolerance")->check(CLI::PositiveNumber);
        if (seed) s->add_option("--seed", rc.seed, "random seed");
        if (fmt) {
            auto* js = s->add_flag("--json", rc.json, "JSON output (default)");
            auto* tb = s->add_flag("--table", rc.table, "aligned text output");
            js->excludes(tb);
        }
        s->add_option("-o", rc.out, "output path");
    };
    std::string a, b;
    int code = 0;
    std::function<int()> run;

    auto* cat = app.add_subcommand("cat", "category files");
    cat->require_subcommand(1);
    auto* cat_check = cat->add_subcommand("check", "pentagon, hexagon and dimension checks");
    cat_check->add_option("cat", a, "category file or builtin:<name>")->required();
    common(cat_check, false, true);
    cat_check->callback([&] { run = [&] { return cmd_cat_check(a, rc); }; });

    auto* orb = app.add_subcommand("orbifold", "orbifold data");
    orb->require_subcommand(1);
    auto* build = orb->add_subcommand("build-spherical", "datum of a spherical category");
    build->add_option("cat", a, "category file or builtin:<name>")->required();
    build->add_option("-o", rc.out, "output path");
    build->callback([&] { run = [&] { return cmd_build(a, rc); }; });
    auto* ocheck = orb->add_subcommand("check", "verify O1-O8");
    ocheck->add_option("datum", a, "datum file")->required();
    common(ocheck, false, true);
    ocheck->callback([&] { run = [&] { return cmd_orbifold_check(a, rc); }; });

    auto* ca = app.add_subcommand("ca", "Wilson-line category");
    ca->require_subcommand(1);
    auto* simples = ca->add_subcommand("simples", "enumerate simple objects");
    simples->add_option("datum", a, "datum file")->required();
    common(simples, true, true);
    simples->callback([&] { run = [&] { return cmd_ca_simples(a, rc); }; });
    auto* modular = ca->add_subcommand("modular", "modular data");
    modular->add_option("datum", a, "datum file")->required();
    common(modular, true, true);
    modular->callback([&] { run = [&] { return cmd_ca_modular(a, rc); }; });

    auto* centre = app.add_subcommand("centre", "Drinfeld centre via the tube algebra");
    centre->add_option("cat", a, "category file or builtin:<name>")->required();
    common(centre, true, true);
    centre->callback([&] { run = [&] { return cmd_centre(a, rc); }; });

    auto* compare = app.add_subcommand("compare", "match two modular data up to relabelling");
    compare->add_option("a", a, "modular data file")->required();
    compare->add_option("b", b, "modular data file")->required();
    common(compare, false, true);
    compare->callback([&] {
        // matching tolerance unless given explicitly
        if (!compare->count("--tol")) rc.tol = 1e-6;
        run = [&] { return cmd_compare(a, b, rc); };
    });

    auto* locmod = app.add_subcommand("locmod", "local modules of a commutative algebra");
    locmod->add_option("cat", a, "category file or builtin:<name>")->required();
    locmod->add_option("alg", b, "algebra file")->required();
    common(locmod, true, true);
    locmod->callback([&] { run = [&] { return cmd_locmod(a, b, rc); }; });

    auto* cc = app.add_subcommand("centre-check", "orbifold route against the centre oracle");
    cc->add_option("cat", a, "category file or builtin:<name>")->required();
    common(cc, true, true);
    cc->callback([&] { run = [&] { return cmd_centre_check(a, rc); }; });

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::CallForVersion& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        error_json("UsageError", e.what(), -1);
        return 2;
    }
    try {
        code = run ? run() : 2;
    } catch (const Error& e) {
        error_json(e.kind(), e.what(), e.residual());
        return e.exit_code();
    } catch (const std::exception& e) {
        error_json("InternalError", e.what(), -1);
        return 1;
    }
    return code;
}
