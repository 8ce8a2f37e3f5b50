// One line per acceptance criterion; exit status 1 if any fails.
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <functional>
#include <random>
#include <set>
#include <sstream>
#include <string>

#include "fixtures.hpp"
#include "orbicat/io.hpp"

using namespace orbicat;
using fx::fixture;

namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t0) { return std::chrono::duration<double>(Clock::now() - t0).count(); }

struct Outcome {
    bool pass = true;
    std::ostringstream detail;
    void require(bool ok, const std::string& why) {
        if (!ok) {
            pass = false;
            detail << " [FAILED: " << why << "]";
        }
    }
};

std::string fmt(double x) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.3g", x);
    return buf;
}

const std::map<std::string, int> kCounts = {{"vec_z2", 4}, {"vec_z3", 9}, {"fibonacci", 4}, {"ising", 9}};
const std::map<std::string, double> kDims = {
    {"vec_z2", 4.0}, {"vec_z3", 9.0}, {"fibonacci", 13.090169943749475}, {"ising", 16.0}};

double worst_failing(const ConditionReport& r) {
    double w = 0;
    for (auto& c : r.items)
        if (!c.pass) w = std::max(w, c.residual);
    return w;
}

void c1(Outcome& o) {
    for (auto& nm : fx::spherical_names()) {
        auto t0 = Clock::now();
        auto rep = verify_orbifold(build_from_spherical(builtin(nm)), Tolerance{1e-8, 1e-8});
        double t = seconds_since(t0), worst = 0;
        for (auto c : {"O1", "O2", "O3", "O4", "O5", "O6", "O7", "O8"}) worst = std::max(worst, rep.residual(c));
        o.detail << " " << nm << "=" << fmt(worst) << "/" << fmt(t) << "s";
        o.require(rep.pass() && worst < 1e-8, nm + " residual");
        o.require(t < 10.0, nm + " runtime");
    }
}

void c2(Outcome& o) {
    for (auto& nm : fx::spherical_names()) {
        bool s = datum_is_simple(build_from_spherical(builtin(nm)));
        o.detail << " " << nm << "=" << (s ? "simple" : "not-simple");
        o.require(s, nm);
    }
}

void c3(Outcome& o) {
    for (auto& nm : fx::spherical_names()) {
        auto& F = fixture(nm);
        double sq = 0;
        for (auto& X : F.simples) sq += std::norm(F.C->qdim(X));
        cplx tr = trace_psi4(F.C->datum());
        double formula = std::abs(1.0 / (std::pow(F.C->phi(), 4) * tr * tr));
        double dimS2 = std::norm(global_dimension(F.cat));
        double rel = std::max({std::abs(sq - formula), std::abs(sq - dimS2), std::abs(sq - kDims.at(nm))}) / sq;
        o.detail << " " << nm << "=" << sq;
        o.require(rel < 1e-6, nm);
    }
}

void c4(Outcome& o) {
    for (auto& nm : fx::spherical_names()) {
        cplx tr = trace_psi4(build_from_spherical(builtin(nm)));
        double d = std::abs(tr - global_dimension(builtin(nm)));
        o.detail << " " << nm << "=" << fmt(d);
        o.require(d < 1e-9, nm);
    }
}

void c5(Outcome& o) {
    auto t0 = Clock::now();
    for (auto& nm : fx::spherical_names()) {
        auto cat = builtin(nm);
        WilsonCategory C(build_from_spherical(cat));
        auto orb = modular_data(C, 0, {});
        auto cs = centre_simples(cat, 0);
        auto cmd = centre_modular_data(cat, cs);
        auto m = compare_modular_data(orb.md, cmd, 1e-6);
        int count = (int)orb.simples.size();
        o.detail << " " << nm << "=" << count << (m.matched ? "/match" : "/nomatch") << "/" << fmt(m.residual);
        o.require(m.matched, nm + " match");
        o.require(count == kCounts.at(nm) && (int)cs.size() == count, nm + " count");
    }
    double t = seconds_since(t0);
    o.detail << " total=" << fmt(t) << "s";
    o.require(t < 300.0, "runtime");
}

void c6(Outcome& o) {
    for (auto& nm : fx::spherical_names()) {
        auto& F = fixture(nm);
        auto& C = *F.C;
        double crossing = 0, twist = 0;
        std::vector<int> hits(F.simples.size(), 0);
        bool each_simple = true;
        for (auto& h : centre_simples(F.cat, 0)) {
            auto X = centre_to_wilson(F.cat, C, h);
            auto rep = C.check(X, Tolerance{1e-8, 1e-8});
            for (auto c : {"T1", "T2", "T3", "T4", "T5", "T6", "T7"}) crossing = std::max(crossing, rep.residual(c));
            twist = std::max(twist, std::abs(C.twist_scalar(X, {}) - centre_twist(F.cat, h)));
            int tot = 0;
            for (size_t k = 0; k < F.simples.size(); ++k) {
                int d = C.hom_dim(X, F.simples[k], {});
                hits[k] += d;
                tot += d;
            }
            each_simple = each_simple && tot == 1;
        }
        bool bij = each_simple && hits == std::vector<int>(F.simples.size(), 1);
        o.detail << " " << nm << "=" << fmt(crossing) << "/" << fmt(twist) << (bij ? "/bijective" : "/not-bijective");
        o.require(crossing < 1e-8, nm + " crossings");
        o.require(twist < 1e-8, nm + " twist");
        o.require(bij, nm + " bijection");
    }
}

void c7(Outcome& o) {
    auto cat = builtin("toric_code");
    auto A = fx::z2_algebra(cat.label_index("e"));
    auto rep = check_algebra(cat, A, {});
    auto loc = local_modules(cat, A, 0, {});
    auto md = locmod_modular_data(cat, A, loc);
    o.detail << " 1+e: algebra=" << (rep.pass() ? "ok" : "bad") << " local=" << loc.size()
             << " global_dim=" << md.global_dim.real();
    o.require(rep.pass(), "algebra check");
    o.require(loc.size() == 1, "local module count");
    o.require(std::abs(md.global_dim - 1.0) < 1e-8, "global dimension");
    auto one = fx::unit_algebra();
    auto md1 = locmod_modular_data(cat, one, local_modules(cat, one, 0, {}));
    auto ref = category_modular_data(cat);
    double d = max_abs_diff(md1.smatrix, ref.smatrix);
    for (int i = 0; i < cat.n(); ++i)
        d = std::max({d, std::abs(md1.tdiag[i] - ref.tdiag[i]), std::abs(md1.qdim[i] - ref.qdim[i])});
    o.detail << " 1: diff=" << fmt(d);
    o.require(d < 1e-12, "unit algebra reproduction");
}

// (a)-(f) on every spherical builtin; residual maxima are reported
void c8(Outcome& o) {
    double a = 0, b = 0, c = 0, d = 0, e = 0, f = 0;
    int samples_min = 1 << 30;
    for (auto& nm : fx::spherical_names()) {
        auto& F = fixture(nm);
        auto& C = *F.C;
        std::mt19937_64 rng(41);
        auto P = C.pipe(GradedBimodule::elementary(C.n(), 1, 0));
        // (a)
        int samples = 0;
        for (int k = 0; k < 100; ++k) {
            auto g = fx::random_bimodule_map(P, P, rng);
            auto gb = C.average(g, P, P);
            a = std::max({a, fx::morphism_diff(C, C.average(gb, P, P), gb, P, P), C.morphism_residual(gb, P, P)});
            ++samples;
        }
        samples_min = std::min(samples_min, samples);
        // (b)
        int m = std::min<int>(3, F.simples.size());
        for (int i = 0; i < m; ++i)
            for (int j = 0; j < m; ++j)
                for (int k = 0; k < m; ++k) {
                    auto& X = F.simples[F.simples.size() - 1 - i];
                    auto& Y = F.simples[F.simples.size() - 1 - j];
                    auto& Z = F.simples[F.simples.size() - 1 - k];
                    auto YZ = C.tensor(Y, Z), XY = C.tensor(X, Y), YX = C.tensor(Y, X), XZ = C.tensor(X, Z),
                         ZX = C.tensor(Z, X);
                    auto lhs = C.braiding(X, YZ);
                    auto rhs = C.compose(
                        fx::transpose(fx::associator(Y, Z, X)),
                        C.compose(C.tensor_morphisms(C.identity(Y), C.braiding(X, Z), Y, Y, XZ, ZX),
                                  C.compose(fx::associator(Y, X, Z),
                                            C.compose(C.tensor_morphisms(C.braiding(X, Y), C.identity(Z), XY, YX, Z, Z),
                                                      fx::transpose(fx::associator(X, Y, Z))))));
                    b = std::max(b, fx::morphism_diff(C, lhs, rhs, C.tensor(X, YZ), C.tensor(YZ, X)));
                }
        for (auto& X : F.simples) {
            auto h = C.pipe(GradedBimodule::elementary(C.n(), 0, 0));
            auto g = fx::random_morphism(C, h, h, rng);
            auto nat_l = C.compose(C.braiding(h, X), C.tensor_morphisms(g, C.identity(X), h, h, X, X));
            auto nat_r = C.compose(C.tensor_morphisms(C.identity(X), g, X, X, h, h), C.braiding(h, X));
            b = std::max(b, fx::morphism_diff(C, nat_l, nat_r, C.tensor(h, X), C.tensor(X, h)));
            auto XX = C.tensor(X, X);
            b = std::max(b, fx::morphism_diff(C, C.compose(C.braiding_inverse(X, X), C.braiding(X, X)),
                                              C.identity(XX), XX, XX));
        }
        // (c) and (e)
        std::vector<WilsonObject> objs = {P, F.simples.back(), F.simples[1]};
        for (auto& X : objs) {
            auto g = fx::random_morphism(C, X, X, rng);
            auto l = C.left_trace(g, X), r = C.right_trace(g, X);
            cplx t = C.trace(g);
            for (size_t p = 0; p < l.size(); ++p) {
                c = std::max(c, std::abs(l[p] - r[p]));
                e = std::max(e, std::abs(l[p] - t));
            }
        }
        // (d)
        auto orep = verify_orbifold(C.datum(), {});
        d = std::max({d, orep.residual("O9'"), orep.residual("O10'")});
        objs.push_back(C.tensor(P, F.simples.back()));
        objs.push_back(C.dual(P));
        for (auto& X : objs) {
            auto rep = C.check(X, {});
            for (auto nmT : {"T8'", "T9'", "T10'", "T11'", "T12'", "T13'", "T14'", "T15'", "T16'"}) {
                const Condition* cnd = rep.find(nmT);
                d = std::max(d, cnd ? cnd->residual : INFINITY);
            }
        }
        // (f)
        auto N = fusion_rules(C, F.simples, {});
        for (size_t x = 0; x < F.simples.size(); ++x)
            for (size_t y = 0; y < F.simples.size(); ++y) {
                cplx s = 0;
                for (size_t z = 0; z < F.simples.size(); ++z) s += double(N[x][y][z]) * C.qdim(F.simples[z]);
                f = std::max(f, std::abs(s - C.qdim(F.simples[x]) * C.qdim(F.simples[y])));
            }
    }
    o.detail << " a=" << fmt(a) << "(" << samples_min << "/fixture) b=" << fmt(b) << " c=" << fmt(c)
             << " d=" << fmt(d) << " e=" << fmt(e) << " f=" << fmt(f);
    o.require(samples_min >= 100, "(a) sample count");
    o.require(a < 1e-8, "(a)");
    o.require(b < 1e-8, "(b)");
    o.require(c < 1e-8, "(c)");
    o.require(d < 1e-8, "(d)");
    o.require(e < 1e-8, "(e)");
    o.require(f < 1e-8, "(f)");
}

void c9(Outcome& o) {
    const double eps = 1e-3, floor = 1e-5;
    int total = 0, silent = 0;
    double weakest = INFINITY;
    auto tally = [&](const ConditionReport& r) {
        double w = worst_failing(r);
        ++total;
        if (r.pass() || w < floor) ++silent;
        weakest = std::min(weakest, w);
    };
    for (auto& nm : fx::spherical_names()) {
        auto cat = builtin(nm);
        for (auto& [key, v] : cat.F) {
            auto p = cat;
            p.F.at(key) += eps;
            tally(check_category(p, {}));
        }
        auto base = build_from_spherical(cat);
        for (int which = 0; which < 2; ++which)
            for (auto& [key, blk] : which ? base.alpha_bar : base.alpha) {
                auto d = base;
                (which ? d.alpha_bar : d.alpha).at(key).val(0, 0) += eps;
                tally(verify_orbifold(d, {}));
            }
        for (int i = 0; i <= base.n(); ++i) {
            auto d = base;
            if (i < base.n())
                d.psi[i] += eps;
            else
                d.phi += eps;
            tally(verify_orbifold(d, {}));
        }
    }
    o.detail << " perturbations=" << total << " silent=" << silent << " weakest=" << fmt(weakest);
    o.require(silent == 0, "silent acceptance");
}

std::string report_text(const std::string& nm, std::uint64_t seed) {
    auto cat = builtin(nm);
    WilsonCategory C(build_from_spherical(cat));
    auto r = modular_data(C, seed, {});
    ojson j;
    j["modular"] = modular_data_to_json(r.md);
    j["checks"] = to_json(r.checks);
    j["centre"] = modular_data_to_json(centre_modular_data(cat, centre_simples(cat, seed)));
    return pretty(j);
}

void c10(Outcome& o) {
    bool same = true;
    for (auto& nm : fx::spherical_names()) {
        setenv("ORBICAT_THREADS", "1", 1);
        std::string a = report_text(nm, 0);
        setenv("ORBICAT_THREADS", "4", 1);
        std::string b = report_text(nm, 0), c = report_text(nm, 0);
        same = same && a == b && b == c;
    }
    unsetenv("ORBICAT_THREADS");
    o.detail << " reports=" << (same ? "identical" : "differ");
    o.require(same, "byte identity");
    for (auto& nm : fx::spherical_names()) {
        auto& C = *fixture(nm).C;
        std::set<size_t> counts;
        for (std::uint64_t seed : {0ull, 1ull, 2ull, 99ull, 31337ull}) counts.insert(enumerate_simples(C, seed, {}).size());
        o.detail << " " << nm << "=" << *counts.begin() << (counts.size() == 1 ? "" : "+");
        o.require(counts.size() == 1, nm + " seed stability");
    }
}

}  // namespace

int main() {
    std::vector<std::pair<const char*, std::function<void(Outcome&)>>> crit = {
        {"orbifold verification", c1}, {"simplicity", c2},        {"dimension formula", c3},
        {"trace of psi^4", c4},        {"centre equivalence", c5}, {"bridge", c6},
        {"local modules", c7},         {"property suites", c8},    {"negative controls", c9},
        {"determinism", c10}};
    int failed = 0;
    for (size_t k = 0; k < crit.size(); ++k) {
        Outcome o;
        auto t0 = Clock::now();
        try {
            crit[k].second(o);
        } catch (const std::exception& e) {
            o.pass = false;
            o.detail << " [EXCEPTION: " << e.what() << "]";
        }
        std::printf("criterion %-2zu %-22s %s (%.2fs)%s\n", k + 1, crit[k].first, o.pass ? "PASS" : "FAIL",
                    seconds_since(t0), o.detail.str().c_str());
        std::fflush(stdout);
        if (!o.pass) ++failed;
    }
    std::printf("%d of %zu criteria passed\n", (int)(crit.size() - failed), crit.size());
    return failed ? 1 : 0;
}
