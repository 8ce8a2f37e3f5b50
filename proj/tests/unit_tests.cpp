#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>
#include <cstdio>
#include <set>

#include "fixtures.hpp"
#include "orbicat/io.hpp"

using namespace orbicat;
using fx::fixture;

static const double kGolden = (1.0 + std::sqrt(5.0)) / 2.0;
static const double kFibDim = (5.0 + std::sqrt(5.0)) / 2.0;

static Mat mat2(cplx a, cplx b, cplx c, cplx d) {
    Mat m(2, 2);
    m << a, b, c, d;
    return m;
}

TEST_SUITE("numeric") {
    TEST_CASE("split of the identity is trivial") {
        auto s = split_idempotent(Mat::Identity(3, 3), {});
        CHECK(max_abs_diff(s.embed, Mat::Identity(3, 3)) < 1e-12);
        CHECK(max_abs_diff(s.retract, Mat::Identity(3, 3)) < 1e-12);
    }
    TEST_CASE("split of zero has rank zero") {
        auto s = split_idempotent(Mat::Zero(2, 2), {});
        CHECK(s.embed.rows() == 2);
        CHECK(s.embed.cols() == 0);
        CHECK(s.retract.rows() == 0);
        CHECK(s.retract.cols() == 2);
    }
    TEST_CASE("split of the averaging projector on C^2") {
        Mat p = mat2(0.5, 0.5, 0.5, 0.5);
        auto s = split_idempotent(p, {});
        CHECK(s.embed.cols() == 1);
        CHECK(max_abs_diff(s.embed * s.retract, p) < 1e-12);
        CHECK(max_abs_diff(s.retract * s.embed, Mat::Identity(1, 1)) < 1e-12);
    }
    TEST_CASE("non-idempotent input is rejected") {
        CHECK_THROWS_AS(split_idempotent(mat2(1, 1, 0, 1), {}), Error);
    }
    TEST_CASE("primitive idempotents of the one-dimensional algebra") {
        auto es = primitive_idempotents({Mat::Identity(1, 1)}, 1, {});
        REQUIRE(es.size() == 1);
        CHECK(max_abs_diff(es[0], Mat::Identity(1, 1)) < 1e-12);
    }
    TEST_CASE("primitive idempotents of the diagonal algebra") {
        auto es = primitive_idempotents({mat2(1, 0, 0, 0), mat2(0, 0, 0, 1)}, 1, {});
        REQUIRE(es.size() == 2);
        std::set<int> diag;
        for (auto& e : es) {
            CHECK(rank(e, {}) == 1);
            CHECK(std::abs(e(0, 1)) < 1e-12);
            CHECK(std::abs(e(1, 0)) < 1e-12);
            diag.insert(std::abs(e(0, 0)) > 0.5 ? 0 : 1);
        }
        CHECK(diag.size() == 2);
    }
    TEST_CASE("full matrix algebra has a single idempotent class") {
        std::vector<Mat> B = {mat2(1, 0, 0, 0), mat2(0, 1, 0, 0), mat2(0, 0, 1, 0), mat2(0, 0, 0, 1)};
        auto es = primitive_idempotents(B, 3, {});
        REQUIRE(es.size() == 2);
        // e1 B e2 != 0: the two primitives are equivalent, so one class and one central idempotent
        double cross = 0;
        for (auto& b : B) cross = std::max(cross, max_abs(es[0] * b * es[1]));
        CHECK(cross > 1e-3);
        for (auto& e : es) {
            Mat span(4, 4);
            for (int k = 0; k < 4; ++k) {
                Mat x = e * B[k] * e;
                span.col(k) = Eigen::Map<Vec>(x.data(), 4);
            }
            CHECK(rank(span, {}) == 1);
        }
    }
    TEST_CASE("non-closed basis is rejected") {
        CHECK_THROWS_AS(primitive_idempotents({Mat::Identity(2, 2), mat2(0, 1, 0, 0), mat2(0, 0, 1, 0)}, 1, {}),
                        Error);
    }
    TEST_CASE("nullspace and range are orthonormal") {
        Mat m = mat2(1, 2, 2, 4);
        Mat k = nullspace(m, {}), r = range_basis(m, {});
        CHECK(k.cols() == 1);
        CHECK(r.cols() == 1);
        CHECK(max_abs(m * k) < 1e-12);
        CHECK(std::abs((k.adjoint() * k)(0, 0) - 1.0) < 1e-12);
    }
}

TEST_SUITE("fusion_data") {
    TEST_CASE("vec_z2 is consistent and not modular") {
        auto cat = builtin("vec_z2");
        auto rep = check_category(cat, {});
        CHECK(rep.pass());
        for (auto& c : rep.items) CHECK_MESSAGE(c.residual < 1e-12, c.name);
        CHECK(rep.info.at("modular") == 0.0);
        Mat s = s_matrix(cat);
        CHECK(max_abs_diff(s, mat2(1, 1, 1, 1)) < 1e-12);
    }
    TEST_CASE("fibonacci pentagon") {
        CHECK(pentagon_residual(builtin("fibonacci")) < 1e-9);
    }
    TEST_CASE("fibonacci with a perturbed F entry fails the pentagon") {
        auto cat = builtin("fibonacci");
        int t = cat.label_index("tau");
        cat.F.at({t, t, t, t, t, t, 0, 0, 0, 0}) += 1e-3;
        CHECK(pentagon_residual(cat) >= 1e-4);
        auto rep = check_category(cat, {});
        CHECK_FALSE(rep.pass());
        CHECK_FALSE(rep.find("pentagon")->pass);
    }
    TEST_CASE("global dimensions") {
        CHECK(std::abs(global_dimension(builtin("vec_z2")) - 2.0) < 1e-12);
        CHECK(std::abs(global_dimension(builtin("fibonacci")) - 3.6180340) < 1e-7);
        CHECK(std::abs(global_dimension(builtin("ising")) - 4.0) < 1e-12);
    }
    TEST_CASE("toric code twists and s-matrix") {
        auto cat = builtin("toric_code");
        REQUIRE(cat.twist.size() == 4);
        std::vector<double> tw;
        for (auto t : cat.twist) {
            CHECK(std::abs(t.imag()) < 1e-12);
            tw.push_back(t.real());
        }
        CHECK(tw == std::vector<double>{1, 1, 1, -1});
        Mat s = s_matrix(cat);
        CHECK(std::abs(s.determinant()) > 1.0);
        CHECK(check_category(cat, {}).info.at("modular") == 1.0);
    }
    TEST_CASE("builtin group and fibonacci data") {
        GroupSpec z2{{"0", "1"}, {{0, 1}, {1, 0}}, {}};
        auto cat = builtin_vec_g(z2);
        CHECK(cat.n() == 2);
        for (auto& [k, v] : cat.F) CHECK(std::abs(v - 1.0) < 1e-15);
        auto fib = builtin("fibonacci");
        CHECK(fib.n() == 2);
        CHECK(fib.N(1, 1, 1) == 1);
    }
    TEST_CASE("every builtin passes its own checks") {
        for (auto& nm : builtin_names()) {
            auto rep = check_category(builtin(nm), Tolerance{1e-9, 1e-9});
            CHECK_MESSAGE(rep.pass(), nm);
        }
    }
    TEST_CASE("duality and unit fusion") {
        for (auto& nm : builtin_names()) {
            auto cat = builtin(nm);
            for (int i = 0; i < cat.n(); ++i) {
                CHECK(cat.dual[cat.dual[i]] == i);
                for (int j = 0; j < cat.n(); ++j) {
                    CHECK(cat.N(i, j, 0) == (j == cat.dual[i] ? 1 : 0));
                    CHECK(cat.N(0, i, j) == (i == j ? 1 : 0));
                }
            }
        }
    }
    TEST_CASE("s squared is a multiple of charge conjugation for modular builtins") {
        for (auto nm : {"fibonacci", "ising", "toric_code"}) {
            auto cat = builtin(nm);
            Mat s = s_matrix(cat);
            Mat ss = s * s;
            cplx D = global_dimension(cat);
            Mat C = Mat::Zero(cat.n(), cat.n());
            for (int i = 0; i < cat.n(); ++i) C(i, cat.dual[i]) = D;
            CHECK_MESSAGE(max_abs_diff(ss, C) < 1e-9, nm);
        }
    }
    TEST_CASE("unknown builtin") {
        CHECK_THROWS_AS(builtin("nope"), Error);
        try {
            builtin("nope");
        } catch (const Error& e) {
            CHECK(e.kind() == "UnknownBuiltin");
            CHECK(e.exit_code() == 2);
        }
    }
}

TEST_SUITE("graded_vect") {
    TEST_CASE("elementary bimodules compose like matrix units") {
        auto e = tensor_over_A(GradedBimodule::elementary(3, 0, 1), GradedBimodule::elementary(3, 1, 2));
        CHECK(e.total() == 1);
        CHECK(e.dim(0, 2) == 1);
        auto z = tensor_over_A(GradedBimodule::elementary(3, 0, 1), GradedBimodule::elementary(3, 2, 1));
        CHECK(z.total() == 0);
    }
    TEST_CASE("vec_z2 defect squared has total dimension 8") {
        auto d = build_from_spherical(builtin("vec_z2"));
        int t1 = 0, t2 = 0;
        for (auto& [k, v] : tensor_T1T(d.T)) t1 += v;
        for (auto& [k, v] : tensor_T2T(d.T)) t2 += v;
        CHECK(t1 == 8);
        CHECK(t2 == 8);
    }
    TEST_CASE("unit bimodule acts trivially on the defect") {
        auto d = build_from_spherical(builtin("ising"));
        auto A = GradedBimodule::unit(d.n());
        for (int leg = 0; leg < 3; ++leg) CHECK(partial_tensor(d.T, A, leg).dims == d.T.dims);
    }
    TEST_CASE("vec_z2 defect against an elementary bimodule") {
        auto d = build_from_spherical(builtin("vec_z2"));
        auto r = partial_tensor(d.T, GradedBimodule::elementary(2, 0, 1), 1);
        for (int l = 0; l < 2; ++l)
            for (int i = 0; i < 2; ++i)
                for (int j = 0; j < 2; ++j) {
                    int expect = (i == 1 && l == (1 + i + j) % 2) ? 1 : 0;
                    CHECK(r.dim(l, i, j) == expect);
                }
    }
    TEST_CASE("zero bimodule gives zero") {
        auto d = build_from_spherical(builtin("fibonacci"));
        GradedBimodule z;
        z.n = d.n();
        for (int leg = 0; leg < 3; ++leg) CHECK(partial_tensor(d.T, z, leg).total() == 0);
    }
    TEST_CASE("duals of bimodules") {
        GradedBimodule M;
        M.n = 3;
        M.set(0, 1, 2);
        M.set(2, 2, 3);
        auto D = dual_bimodule(M);
        CHECK(D.dual.dim(1, 0) == 2);
        CHECK(D.dual.dim(2, 2) == 3);
        CHECK(D.dual.dim(0, 1) == 0);
        CHECK(zigzag_residual(M, D) < 1e-12);
        for (auto& [g, d] : M.dims) {
            Mat e = D.ev.blocks.at(g), c = D.coev.blocks.at(g);
            CHECK(std::abs((e * c)(0, 0) - double(d)) < 1e-12);
        }
        auto E = dual_bimodule(GradedBimodule::elementary(3, 0, 2));
        CHECK(E.dual.dims == GradedBimodule::elementary(3, 2, 0).dims);
    }
}

TEST_SUITE("orbifold") {
    TEST_CASE("vec_z2 datum") {
        auto d = build_from_spherical(builtin("vec_z2"));
        CHECK(std::abs(d.psi[0] - 1.0) < 1e-15);
        CHECK(std::abs(d.psi[1] - 1.0) < 1e-15);
        CHECK(std::abs(d.phi - 0.5) < 1e-15);
        CHECK(d.T.total() == 4);
        for (auto* m : {&d.alpha, &d.alpha_bar})
            for (auto& [k, b] : *m) {
                CHECK(b.val.rows() == 1);
                CHECK(b.val.cols() == 1);
                CHECK(std::abs(b.val(0, 0) - 1.0) < 1e-15);
            }
        auto rep = verify_orbifold(d, {});
        CHECK(rep.pass());
        CHECK(fx::max_item(rep) < 1e-10);
    }
    TEST_CASE("doubling phi breaks only O8") {
        auto d = build_from_spherical(builtin("vec_z2"));
        auto base = verify_orbifold(d, {});
        d.phi *= 2.0;
        auto rep = verify_orbifold(d, {});
        CHECK_FALSE(rep.find("O8")->pass);
        for (auto nm : {"O1", "O2", "O3", "O4", "O5", "O6", "O7"}) {
            CHECK(rep.find(nm)->pass);
            CHECK(rep.residual(nm) == base.residual(nm));
        }
    }
    TEST_CASE("perturbed fibonacci alpha fails an associativity-type condition") {
        auto d = build_from_spherical(builtin("fibonacci"));
        d.alpha.at({1, 1, 1, 1}).val(0, 0) += 1e-3;
        auto rep = verify_orbifold(d, {});
        double m = std::max({rep.residual("O1"), rep.residual("O2"), rep.residual("O3")});
        CHECK(m >= 1e-4);
        CHECK_FALSE(rep.pass());
    }
    TEST_CASE("fibonacci and ising normalisations") {
        auto f = build_from_spherical(builtin("fibonacci"));
        CHECK(std::abs(f.psi[1] - 1.27202) < 1e-5);
        CHECK(std::abs(f.phi - 2.0 / (5.0 + std::sqrt(5.0))) < 1e-12);
        CHECK(std::abs(f.phi - 0.27639) < 1e-5);
        auto i = build_from_spherical(builtin("ising"));
        CHECK(std::abs(i.phi - 0.25) < 1e-14);
    }
    TEST_CASE("trace of psi to the fourth") {
        CHECK(std::abs(trace_psi4(build_from_spherical(builtin("vec_z2"))) - 2.0) < 1e-12);
        CHECK(std::abs(trace_psi4(build_from_spherical(builtin("fibonacci"))) - kFibDim) < 1e-12);
        auto d = build_from_spherical(builtin("vec_z3"));
        d.psi.assign(3, 1.0);
        CHECK(std::abs(trace_psi4(d) - 3.0) < 1e-15);
    }
    TEST_CASE("every builtin datum verifies") {
        for (auto& nm : builtin_names()) {
            auto rep = verify_orbifold(build_from_spherical(builtin(nm)), Tolerance{1e-8, 1e-8});
            CHECK_MESSAGE(rep.pass(), nm);
        }
    }
    TEST_CASE("structural validation") {
        auto d = build_from_spherical(builtin("vec_z2"));
        d.psi[1] = 0.0;
        CHECK_THROWS_AS(validate_datum(d), Error);
        auto e = build_from_spherical(builtin("vec_z2"));
        e.alpha.begin()->second.val = Mat::Zero(2, 2);
        CHECK_THROWS_AS(validate_datum(e), Error);
    }
}

TEST_SUITE("wilson") {
    TEST_CASE("unit object of vec_z2") {
        auto& F = fixture("vec_z2");
        auto& C = *F.C;
        auto U = C.unit();
        CHECK(C.check(U, {}).pass());
        CHECK(std::abs(C.qdim(U) - 1.0) < 1e-12);
        CHECK(std::abs(C.twist_scalar(U, {}) - 1.0) < 1e-12);
        CHECK(std::abs(C.trace(C.identity(U)) - 1.0) < 1e-12);
        CHECK(C.hom_dim(U, U, {}) == 1);
    }
    TEST_CASE("scaling the unit crossing breaks a pseudo-inverse condition") {
        auto& C = *fixture("vec_z2").C;
        auto U = C.unit();
        for (auto& [g, m] : U.tau1) m *= 2.0;
        auto rep = C.check(U, {});
        CHECK((!rep.find("T4")->pass || !rep.find("T5")->pass));
    }
    TEST_CASE("pipe of E00 for vec_z2") {
        auto& C = *fixture("vec_z2").C;
        auto P = C.pipe(GradedBimodule::elementary(2, 0, 0));
        CHECK(C.check(P, {}).pass());
        CHECK(C.hom_dim(P, P, {}) == 2);
        CHECK(rank(C.average_matrix(P, P), {}) == 2);
    }
    TEST_CASE("pipe of the unit bimodule contains the unit") {
        for (auto nm : {"vec_z2", "fibonacci"}) {
            auto& C = *fixture(nm).C;
            auto P = C.pipe(GradedBimodule::unit(C.n()));
            CHECK(C.hom_dim(C.unit(), P, {}) >= 1);
        }
    }
    TEST_CASE("pipe of zero is zero") {
        auto& C = *fixture("vec_z2").C;
        GradedBimodule z;
        z.n = 2;
        auto P = C.pipe(z);
        CHECK(P.M.total() == 0);
        CHECK(C.hom_dim(C.unit(), C.zero(), {}) == 0);
    }
    TEST_CASE("averaging fixes morphisms and kills zero") {
        auto& C = *fixture("fibonacci").C;
        auto P = C.pipe(GradedBimodule::elementary(2, 1, 0));
        auto id = C.identity(P);
        CHECK(fx::morphism_diff(C, C.average(id, P, P), id, P, P) < 1e-10);
        Morphism z;
        auto az = C.average(z, P, P);
        CHECK(C.flatten(az, P, P).cwiseAbs().maxCoeff() < 1e-15);
    }
    TEST_CASE("simplicity of the datum") {
        CHECK(datum_is_simple(build_from_spherical(builtin("vec_z2"))));
        CHECK(datum_is_simple(build_from_spherical(builtin("ising"))));
        auto& C = *fixture("fibonacci").C;
        CHECK(C.hom_dim(C.unit(), C.unit(), {}) == 1);
        auto d = build_from_spherical(builtin("vec_z2"));
        auto sum = fx::direct_sum(d, d);
        CHECK_FALSE(datum_is_simple(sum));
    }
    TEST_CASE("simple counts and dimensions") {
        auto& z2 = fixture("vec_z2");
        REQUIRE(z2.simples.size() == 4);
        for (auto& X : z2.simples) CHECK(std::abs(z2.C->qdim(X) - 1.0) < 1e-10);
        auto& fib = fixture("fibonacci");
        REQUIRE(fib.simples.size() == 4);
        std::vector<double> q;
        for (auto& X : fib.simples) q.push_back(fib.C->qdim(X).real());
        std::sort(q.begin(), q.end());
        std::vector<double> expect = {1, kGolden, kGolden, kGolden * kGolden};
        for (int k = 0; k < 4; ++k) CHECK(std::abs(q[k] - expect[k]) < 1e-9);
        CHECK(fixture("ising").simples.size() == 9);
    }
    TEST_CASE("hom dimensions between simples") {
        auto& F = fixture("fibonacci");
        auto& C = *F.C;
        for (size_t a = 0; a < F.simples.size(); ++a)
            for (size_t b = 0; b < F.simples.size(); ++b)
                CHECK(C.hom_dim(F.simples[a], F.simples[b], {}) == (a == b ? 1 : 0));
        CHECK(C.hom_dim(F.simples[1], C.zero(), {}) == 0);
    }
    TEST_CASE("tensor with the unit and multiplicativity of qdim") {
        auto& F = fixture("fibonacci");
        auto& C = *F.C;
        for (auto& X : F.simples) {
            auto UX = C.tensor(C.unit(), X);
            CHECK(C.hom_dim(UX, X, {}) == 1);
            CHECK(C.hom_dim(UX, UX, {}) == 1);
        }
        for (auto& X : F.simples)
            for (auto& Y : F.simples) {
                auto XY = C.tensor(X, Y);
                CHECK(std::abs(C.qdim(XY) - C.qdim(X) * C.qdim(Y)) < 1e-8);
            }
    }
    TEST_CASE("toric fusion is the Klein four group") {
        auto& F = fixture("vec_z2");
        auto N = fusion_rules(*F.C, F.simples, {});
        const int n = 4;
        for (int a = 0; a < n; ++a) {
            CHECK(N[0][a][a] == 1);
            CHECK(N[a][0][a] == 1);
            CHECK(N[a][a][0] == 1);
            for (int b = 0; b < n; ++b) {
                int tot = 0;
                for (int c = 0; c < n; ++c) tot += N[a][b][c];
                CHECK(tot == 1);
            }
        }
        // the three non-unit simples multiply to each other
        for (int a = 1; a < n; ++a)
            for (int b = 1; b < n; ++b)
                if (a != b) CHECK(N[a][b][6 - a - b] == 1);
    }
    TEST_CASE("duals") {
        auto& F = fixture("vec_z2");
        auto& C = *F.C;
        CHECK(C.hom_dim(C.dual(C.unit()), C.unit(), {}) == 1);
        for (auto& X : fixture("fibonacci").simples) {
            auto& Cf = *fixture("fibonacci").C;
            CHECK(std::abs(Cf.qdim(Cf.dual(X)) - Cf.qdim(X)) < 1e-9);
        }
    }
    TEST_CASE("zig-zag identities for vec_z2 simples") {
        auto& F = fixture("vec_z2");
        auto& C = *F.C;
        for (auto& X : F.simples) {
            auto D = C.dual(X);
            auto XD = C.tensor(X, D), DX = C.tensor(D, X);
            auto XDX = C.tensor(XD, X), X_DX = C.tensor(X, DX);
            // X -> (X D) X -> X (D X) -> X; unitors are identities on blocks
            auto step1 = C.tensor_morphisms(C.coev(X), C.identity(X), C.unit(), XD, X, X);
            auto step2 = fx::associator(X, D, X);
            auto step3 = C.tensor_morphisms(C.identity(X), C.ev(X), X, X, DX, C.unit());
            auto z = C.compose(step3, C.compose(step2, step1));
            CHECK(fx::morphism_diff(C, z, C.identity(X), X, X) < 1e-10);
        }
    }
    TEST_CASE("braiding with the unit is the identity on blocks") {
        auto& F = fixture("fibonacci");
        auto& C = *F.C;
        for (auto& X : F.simples) {
            auto c = C.braiding(C.unit(), X);
            CHECK(fx::morphism_diff(C, c, C.identity(X), X, X) < 1e-10);
        }
    }
    TEST_CASE("twists of the orbifold categories") {
        auto& z2 = fixture("vec_z2");
        std::multiset<int> tw;
        for (auto& X : z2.simples) {
            cplx t = z2.C->twist_scalar(X, {});
            CHECK(std::abs(t.imag()) < 1e-10);
            tw.insert((int)std::lround(t.real()));
        }
        CHECK(tw == std::multiset<int>{1, 1, 1, -1});
        auto& fib = fixture("fibonacci");
        std::vector<double> args;
        for (auto& X : fib.simples) {
            cplx t = fib.C->twist_scalar(X, {});
            CHECK(std::abs(std::abs(t) - 1.0) < 1e-10);
            args.push_back(std::abs(std::arg(t)));
        }
        std::sort(args.begin(), args.end());
        CHECK(args[0] < 1e-9);
        CHECK(args[1] < 1e-9);
        CHECK(std::abs(args[2] - 4 * M_PI / 5) < 1e-9);
        CHECK(std::abs(args[3] - 4 * M_PI / 5) < 1e-9);
    }
    TEST_CASE("global dimensions of the orbifold categories") {
        auto check = [](const char* nm, double D) {
            auto r = modular_data(*fixture(nm).C, 0, {});
            CHECK_MESSAGE(std::abs(r.md.global_dim - D) < 1e-6 * D, nm);
            CHECK_MESSAGE(r.checks.pass(), nm);
            return r;
        };
        check("vec_z2", 4.0);
        check("fibonacci", kFibDim * kFibDim);
        auto r = check("ising", 16.0);
        CHECK(std::abs(r.md.smatrix.determinant()) > 1e-3);
    }
    TEST_CASE("trace on toric simples agrees with ev/coev traces") {
        auto& F = fixture("vec_z2");
        auto& C = *F.C;
        double D = 0;
        for (auto& X : F.simples) {
            auto id = C.identity(X);
            cplx t = C.trace(id);
            for (cplx l : C.left_trace(id, X)) CHECK(std::abs(l - t) < 1e-9);
            D += std::norm(C.qdim(X));
        }
        CHECK(std::abs(D - 4.0) < 1e-9);
    }
    TEST_CASE("trace needs a simple datum") {
        auto d = build_from_spherical(builtin("vec_z2"));
        WilsonCategory C(fx::direct_sum(d, d));
        CHECK_THROWS_AS(C.trace(C.identity(C.unit())), Error);
    }
}

TEST_SUITE("centre_oracle") {
    TEST_CASE("centre of Vect is Vect") {
        auto cs = centre_simples(builtin_vec_zn(1), 0);
        CHECK(cs.size() == 1);
    }
    TEST_CASE("centre of vec_z2") {
        auto cat = builtin("vec_z2");
        auto cs = centre_simples(cat, 0);
        REQUIRE(cs.size() == 4);
        int on0 = 0, on1 = 0;
        for (auto& h : cs) {
            REQUIRE(h.copies.size() == 1);
            (h.copies[0] == 0 ? on0 : on1)++;
            CHECK(hexagon_residual(cat, h) < 1e-12);
        }
        CHECK(on0 == 2);
        CHECK(on1 == 2);
        auto md = centre_modular_data(cat, cs);
        std::multiset<int> tw;
        for (auto t : md.tdiag) tw.insert((int)std::lround(t.real()));
        CHECK(tw == std::multiset<int>{1, 1, 1, -1});
        Mat expect(4, 4);
        expect << 1, 1, 1, 1, 1, 1, -1, -1, 1, -1, 1, -1, 1, -1, -1, 1;
        ModularData ref = md;
        ref.smatrix = expect;
        // the reference table up to relabelling, twists included
        ref.tdiag = {1.0, 1.0, 1.0, -1.0};
        CHECK(compare_modular_data(md, ref, 1e-9).matched);
    }
    TEST_CASE("centre of fibonacci and ising") {
        auto fib = builtin("fibonacci");
        auto cf = centre_simples(fib, 0);
        CHECK(cf.size() == 4);
        CHECK(std::abs(centre_modular_data(fib, cf).global_dim - kFibDim * kFibDim) < 1e-9);
        CHECK(std::abs(centre_modular_data(fib, cf).global_dim - 13.0902) < 1e-4);
        auto is = builtin("ising");
        auto ci = centre_simples(is, 0);
        CHECK(ci.size() == 9);
        CHECK(std::abs(centre_modular_data(is, ci).global_dim - 16.0) < 1e-9);
    }
    TEST_CASE("bridge sends the trivial half-braiding to the unit") {
        auto& F = fixture("vec_z2");
        auto cs = centre_simples(F.cat, 0);
        auto X = centre_to_wilson(F.cat, *F.C, cs[0]);
        CHECK(F.C->hom_dim(X, F.C->unit(), {}) == 1);
    }
    TEST_CASE("bridge on toric simples") {
        auto& F = fixture("vec_z2");
        auto& C = *F.C;
        std::vector<int> hits(F.simples.size(), 0);
        for (auto& h : centre_simples(F.cat, 0)) {
            auto X = centre_to_wilson(F.cat, C, h);
            CHECK(C.check(X, {}).pass());
            CHECK(std::abs(C.twist_scalar(X, {}) - centre_twist(F.cat, h)) < 1e-8);
            for (size_t k = 0; k < F.simples.size(); ++k) hits[k] += C.hom_dim(X, F.simples[k], {});
        }
        CHECK(hits == std::vector<int>(4, 1));
    }
    TEST_CASE("compare") {
        auto cat = builtin("toric_code");
        auto md = category_modular_data(cat);
        auto self = compare_modular_data(md, md, 1e-9);
        CHECK(self.matched);
        CHECK(self.perm == std::vector<int>{0, 1, 2, 3});
        auto& F = fixture("vec_z2");
        auto orb = modular_data(*F.C, 0, {}).md;
        CHECK(compare_modular_data(orb, md, 1e-6).matched);
        auto is = builtin("ising");
        auto zi = centre_modular_data(is, centre_simples(is, 0));
        CHECK_THROWS_AS(compare_modular_data(md, zi, 1e-6), Error);
    }
    TEST_CASE("compare rejects a wrong twist") {
        auto md = category_modular_data(builtin("toric_code"));
        auto bad = md;
        bad.tdiag[3] = 1.0;
        CHECK_FALSE(compare_modular_data(md, bad, 1e-6).matched);
    }
}

TEST_SUITE("locmod") {
    TEST_CASE("toric code with A = 1+e") {
        auto cat = builtin("toric_code");
        int e = cat.label_index("e");
        auto A = fx::z2_algebra(e);
        auto rep = check_algebra(cat, A, {});
        CHECK(rep.pass());
        auto all = simple_modules(cat, A, 0, {});
        auto loc = local_modules(cat, A, 0, {});
        CHECK(loc.size() == 1);
        bool filtered = false;
        for (auto& M : all)
            if (M.locality >= 0.1) filtered = true;
        CHECK(filtered);
        auto md = locmod_modular_data(cat, A, loc);
        CHECK(std::abs(md.global_dim - 1.0) < 1e-8);
        double sq = 0;
        for (auto q : md.qdim) sq += std::norm(q);
        CHECK(std::abs(sq - 4.0 / 4.0) < 1e-8);
    }
    TEST_CASE("toric code with A = 1+f is not commutative") {
        auto cat = builtin("toric_code");
        auto rep = check_algebra(cat, fx::z2_algebra(cat.label_index("f")), {});
        CHECK_FALSE(rep.pass());
        CHECK_FALSE(rep.find("twist_trivial")->pass);
    }
    TEST_CASE("unit algebra recovers the category") {
        for (auto nm : {"toric_code", "fibonacci", "ising"}) {
            auto cat = builtin(nm);
            auto A = fx::unit_algebra();
            CHECK(check_algebra(cat, A, {}).pass());
            auto loc = local_modules(cat, A, 0, {});
            CHECK(loc.size() == (size_t)cat.n());
            auto md = locmod_modular_data(cat, A, loc);
            auto ref = category_modular_data(cat);
            auto m = compare_modular_data(md, ref, 1e-9);
            CHECK_MESSAGE(m.matched, nm);
            CHECK(std::abs(md.global_dim - global_dimension(cat)) < 1e-8);
        }
        auto cat = builtin("toric_code");
        auto md = locmod_modular_data(cat, fx::unit_algebra(), local_modules(cat, fx::unit_algebra(), 0, {}));
        CHECK(max_abs_diff(md.smatrix, s_matrix(cat)) < 1e-12);
    }
    TEST_CASE("rescaled multiplication is normalised") {
        auto cat = builtin("toric_code");
        auto A = fx::z2_algebra(cat.label_index("e"));
        for (auto& [k, v] : A.mult) v *= 3.0;
        auto rep = check_algebra(cat, A, {});
        CHECK(rep.pass());
        CHECK(std::abs(rep.info.at("rescale") - 1.0 / 3.0) < 1e-12);
    }
}

TEST_SUITE("io") {
    TEST_CASE("category round trip") {
        for (auto& nm : builtin_names()) {
            auto cat = builtin(nm);
            auto j = nlohmann::json::parse(category_to_json(cat).dump());
            auto back = category_from_json(j);
            CHECK(back.labels == cat.labels);
            CHECK(back.Nt == cat.Nt);
            CHECK(back.F.size() == cat.F.size());
            for (auto& [k, v] : cat.F) CHECK(std::abs(back.F.at(k) - v) < 1e-15);
            CHECK(pretty(category_to_json(back)) == pretty(category_to_json(cat)));
        }
    }
    TEST_CASE("datum round trip") {
        auto d = build_from_spherical(builtin("ising"));
        auto back = datum_from_json(nlohmann::json::parse(datum_to_json(d).dump()));
        CHECK(pretty(datum_to_json(back)) == pretty(datum_to_json(d)));
        CHECK(verify_orbifold(back, {}).pass());
    }
    TEST_CASE("malformed inputs") {
        auto j = nlohmann::json::parse(category_to_json(builtin("vec_z2")).dump());
        j["N"] = 3;
        try {
            category_from_json(j);
            FAIL("accepted a bad category");
        } catch (const Error& e) {
            CHECK(e.exit_code() == 2);
        }
        auto d = nlohmann::json::parse(datum_to_json(build_from_spherical(builtin("vec_z2"))).dump());
        d.erase("psi");
        CHECK_THROWS_AS(datum_from_json(d), Error);
    }
    TEST_CASE("parse errors carry a location") {
        std::string path = "unit_tests_corrupt.json";
        write_text_file(path, "{\n  \"labels\": [\"0\", \"1\",\n  oops\n}\n");
        try {
            read_json_file(path);
            FAIL("parsed corrupted JSON");
        } catch (const Error& e) {
            CHECK(e.kind() == "ParseError");
            CHECK(e.exit_code() == 2);
            CHECK(std::string(e.what()).find(path + ":3:") != std::string::npos);
        }
        std::remove(path.c_str());
    }
    TEST_CASE("complex numbers") {
        CHECK(to_json(cplx(1e-15, 2.0)).dump() == "[0.0,2.0]");
        CHECK(cplx_from_json(nlohmann::json::parse("[1.5,-2]"), "x") == cplx(1.5, -2));
        CHECK(cplx_from_json(nlohmann::json::parse("3"), "x") == cplx(3, 0));
        CHECK_THROWS_AS(cplx_from_json(nlohmann::json::parse("\"a\""), "x"), Error);
    }
}
