#include <cmath>

#include "orbicat/fusion.hpp"

namespace orbicat {

namespace {

SkeletalCategory blank(std::vector<std::string> labels) {
    SkeletalCategory c;
    c.labels = std::move(labels);
    int n = c.n();
    c.Nt.assign((size_t)n * n * n, 0);
    c.dual.assign(n, 0);
    c.qdim.assign(n, 1.0);
    return c;
}

void setN(SkeletalCategory& c, int i, int j, int k) { c.Nt[((size_t)i * c.n() + j) * c.n() + k] = 1; }

void setF(SkeletalCategory& c, int i, int j, int k, int l, int b, int a, cplx v) {
    c.F[{i, j, k, l, b, a, 0, 0, 0, 0}] = v;
}

// every admissible multiplicity-free F entry set to 1
void unit_F(SkeletalCategory& c) {
    const int n = c.n();
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j)
            for (int k = 0; k < n; ++k)
                for (int l = 0; l < n; ++l)
                    for (int b : c.left_channels(i, j, k, l))
                        for (int a : c.right_channels(i, j, k, l)) setF(c, i, j, k, l, b, a, 1.0);
}

void fill_dual(SkeletalCategory& c) {
    for (int i = 0; i < c.n(); ++i)
        for (int j = 0; j < c.n(); ++j)
            if (c.N(i, j, 0)) c.dual[i] = j;
}

cplx expi(double x) { return std::polar(1.0, x); }

}  // namespace

SkeletalCategory builtin_vec_g(const GroupSpec& g, const Tolerance& tol) {
    const int n = (int)g.names.size();
    if ((int)g.mul.size() != n) throw Error("MalformedData", "group table arity");
    SkeletalCategory c = blank(g.names);
    for (int a = 0; a < n; ++a) {
        if ((int)g.mul[a].size() != n) throw Error("MalformedData", "group table arity");
        for (int b = 0; b < n; ++b) {
            int p = g.mul[a][b];
            if (p < 0 || p >= n) throw Error("MalformedData", "group table entry out of range");
            setN(c, a, b, p);
        }
    }
    if (c.label_index(g.names[0]) != 0) throw Error("MalformedData", "unit must be first");
    for (int a = 0; a < n; ++a)
        if (g.mul[0][a] != a || g.mul[a][0] != a) throw Error("MalformedData", "first element is not a unit");
    auto om = [&](int a, int b, int k) -> cplx { return g.omega.empty() ? cplx(1) : g.omega[a][b][k]; };
    double res = 0;
    for (int a = 0; a < n; ++a)
        for (int b = 0; b < n; ++b) {
            res = std::max({res, std::abs(om(0, a, b) - 1.0), std::abs(om(a, 0, b) - 1.0), std::abs(om(a, b, 0) - 1.0)});
            for (int k = 0; k < n; ++k)
                for (int d = 0; d < n; ++d) {
                    int ab = g.mul[a][b], kd = g.mul[k][d];
                    cplx lhs = om(b, k, d) * om(a, g.mul[b][k], d) * om(a, b, k);
                    cplx rhs = om(ab, k, d) * om(a, b, kd);
                    res = std::max(res, std::abs(lhs - rhs));
                }
        }
    if (res > tol.abs_eps) throw Error("InvalidCocycle", "cocycle condition or normalisation fails", res);
    for (int a = 0; a < n; ++a)
        for (int b = 0; b < n; ++b)
            for (int k = 0; k < n; ++k) {
                int ab = g.mul[a][b], bk = g.mul[b][k];
                setF(c, a, b, k, g.mul[ab][k], ab, bk, om(a, b, k));
            }
    fill_dual(c);
    // symmetric braiding for abelian groups with trivial cocycle
    bool abelian = true;
    for (int a = 0; a < n; ++a)
        for (int b = 0; b < n; ++b) abelian = abelian && g.mul[a][b] == g.mul[b][a];
    if (abelian && g.omega.empty()) {
        c.has_R = true;
        for (int a = 0; a < n; ++a)
            for (int b = 0; b < n; ++b) c.R[{a, b, g.mul[a][b], 0, 0}] = 1.0;
        c.twist.assign(n, 1.0);
    }
    return c;
}

SkeletalCategory builtin_vec_zn(int n) {
    GroupSpec g;
    for (int a = 0; a < n; ++a) {
        g.names.push_back(std::to_string(a));
        g.mul.push_back({});
        for (int b = 0; b < n; ++b) g.mul.back().push_back((a + b) % n);
    }
    return builtin_vec_g(g);
}

SkeletalCategory builtin_fibonacci() {
    SkeletalCategory c = blank({"1", "tau"});
    const double phi = (1 + std::sqrt(5.0)) / 2;
    setN(c, 0, 0, 0);
    setN(c, 0, 1, 1);
    setN(c, 1, 0, 1);
    setN(c, 1, 1, 0);
    setN(c, 1, 1, 1);
    fill_dual(c);
    c.qdim = {1.0, phi};
    unit_F(c);
    setF(c, 1, 1, 1, 1, 0, 0, 1 / phi);
    setF(c, 1, 1, 1, 1, 0, 1, 1 / std::sqrt(phi));
    setF(c, 1, 1, 1, 1, 1, 0, 1 / std::sqrt(phi));
    setF(c, 1, 1, 1, 1, 1, 1, -1 / phi);
    c.has_R = true;
    for (int a = 0; a < 2; ++a)
        for (int b = 0; b < 2; ++b)
            for (int k = 0; k < 2; ++k)
                if (c.N(a, b, k)) c.R[{a, b, k, 0, 0}] = 1.0;
    c.R[{1, 1, 0, 0, 0}] = expi(-4 * M_PI / 5);
    c.R[{1, 1, 1, 0, 0}] = expi(3 * M_PI / 5);
    c.twist = {1.0, expi(4 * M_PI / 5)};
    return c;
}

SkeletalCategory builtin_ising() {
    SkeletalCategory c = blank({"1", "sigma", "psi"});
    const int s = 1, p = 2;
    for (int a = 0; a < 3; ++a) {
        setN(c, 0, a, a);
        setN(c, a, 0, a);
    }
    setN(c, s, s, 0);
    setN(c, s, s, p);
    setN(c, s, p, s);
    setN(c, p, s, s);
    setN(c, p, p, 0);
    fill_dual(c);
    c.qdim = {1.0, std::sqrt(2.0), 1.0};
    unit_F(c);
    const double h = 1 / std::sqrt(2.0);
    setF(c, s, s, s, s, 0, 0, h);
    setF(c, s, s, s, s, 0, p, h);
    setF(c, s, s, s, s, p, 0, h);
    setF(c, s, s, s, s, p, p, -h);
    setF(c, p, s, p, s, s, s, -1.0);
    setF(c, s, p, s, p, s, s, -1.0);
    c.has_R = true;
    for (int a = 0; a < 3; ++a)
        for (int b = 0; b < 3; ++b)
            for (int k = 0; k < 3; ++k)
                if (c.N(a, b, k)) c.R[{a, b, k, 0, 0}] = 1.0;
    c.R[{s, s, 0, 0, 0}] = expi(-M_PI / 8);
    c.R[{s, s, p, 0, 0}] = expi(3 * M_PI / 8);
    c.R[{s, p, s, 0, 0}] = cplx(0, -1);
    c.R[{p, s, s, 0, 0}] = cplx(0, -1);
    c.R[{p, p, 0, 0, 0}] = -1.0;
    c.twist = {1.0, expi(M_PI / 8), -1.0};
    return c;
}

SkeletalCategory builtin_toric_code() {
    // labels 1,e,m,f as Z2xZ2 with bit0 = e, bit1 = m
    SkeletalCategory c = blank({"1", "e", "m", "f"});
    for (int a = 0; a < 4; ++a)
        for (int b = 0; b < 4; ++b) setN(c, a, b, a ^ b);
    fill_dual(c);
    unit_F(c);
    c.has_R = true;
    for (int a = 0; a < 4; ++a)
        for (int b = 0; b < 4; ++b) c.R[{a, b, a ^ b, 0, 0}] = ((a >> 1) & b & 1) ? -1.0 : 1.0;
    c.twist = {1.0, 1.0, 1.0, -1.0};
    return c;
}

SkeletalCategory builtin(const std::string& name) {
    if (name == "fibonacci") return builtin_fibonacci();
    if (name == "ising") return builtin_ising();
    if (name == "toric_code") return builtin_toric_code();
    if (name.rfind("vec_z", 0) == 0) {
        try {
            int n = std::stoi(name.substr(5));
            if (n >= 1 && n <= 64) return builtin_vec_zn(n);
        } catch (...) {
        }
    }
    throw Error("UnknownBuiltin", name);
}

std::vector<std::string> builtin_names() { return {"vec_z2", "vec_z3", "fibonacci", "ising", "toric_code"}; }

}  // namespace orbicat
