#pragma once
#include <map>
#include <memory>
#include <random>
#include <string>
#include <vector>

#include "orbicat/centre.hpp"
#include "orbicat/fusion.hpp"
#include "orbicat/locmod.hpp"
#include "orbicat/orbifold.hpp"
#include "orbicat/wilson.hpp"

namespace fx {

using namespace orbicat;

inline const std::vector<std::string>& spherical_names() {
    static const std::vector<std::string> v = {"vec_z2", "vec_z3", "fibonacci", "ising"};
    return v;
}

// Built once per process; enumeration is the expensive part.
struct Fixture {
    std::string name;
    SkeletalCategory cat;
    std::unique_ptr<WilsonCategory> C;
    std::vector<WilsonObject> simples;
};

inline Fixture& fixture(const std::string& name) {
    static std::map<std::string, std::unique_ptr<Fixture>> cache;
    auto& slot = cache[name];
    if (!slot) {
        slot = std::make_unique<Fixture>();
        slot->name = name;
        slot->cat = builtin(name);
        slot->C = std::make_unique<WilsonCategory>(build_from_spherical(slot->cat));
        slot->simples = enumerate_simples(*slot->C, 0, Tolerance{});
    }
    return *slot;
}

inline Mat random_matrix(int r, int c, std::mt19937_64& rng) {
    std::normal_distribution<double> g;
    Mat m(r, c);
    for (int i = 0; i < r; ++i)
        for (int j = 0; j < c; ++j) m(i, j) = cplx(g(rng), g(rng));
    return m;
}

// Arbitrary grade-preserving map X -> Y, not yet a C_A morphism.
inline Morphism random_bimodule_map(const WilsonObject& X, const WilsonObject& Y, std::mt19937_64& rng) {
    Morphism f;
    for (auto& [g, d] : X.M.dims) {
        int dy = Y.M.dim(g[0], g[1]);
        if (dy) f.blocks[g] = random_matrix(dy, d, rng);
    }
    return f;
}

inline Morphism random_morphism(const WilsonCategory& C, const WilsonObject& X, const WilsonObject& Y,
                                std::mt19937_64& rng) {
    return C.average(random_bimodule_map(X, Y, rng), X, Y);
}

inline double morphism_diff(const WilsonCategory& C, const Morphism& a, const Morphism& b, const WilsonObject& X,
                            const WilsonObject& Y) {
    Vec va = C.flatten(a, X, Y), vb = C.flatten(b, X, Y);
    return va.size() ? (va - vb).cwiseAbs().maxCoeff() : 0.0;
}

// Rebracketing (X Y) Z -> X (Y Z). Tensor blocks are ordered by the middle
// label, factors multiplied out with the right factor fastest.
inline Morphism associator(const WilsonObject& X, const WilsonObject& Y, const WilsonObject& Z) {
    const int n = X.M.n;
    auto XY = tensor_over_A(X.M, Y.M), YZ = tensor_over_A(Y.M, Z.M);
    auto XYZ = tensor_over_A(XY, Z.M);
    Morphism a;
    for (auto& [g, d] : XYZ.dims) {
        int p = g[0], q = g[1];
        Mat P = Mat::Zero(d, d);
        for (int j = 0; j < n; ++j)
            for (int k = 0; k < n; ++k) {
                int dx = X.M.dim(p, j), dy = Y.M.dim(j, k), dz = Z.M.dim(k, q);
                if (!dx || !dy || !dz) continue;
                int offL = 0;
                for (int k2 = 0; k2 < k; ++k2) offL += XY.dim(p, k2) * Z.M.dim(k2, q);
                int offXY = 0;
                for (int j2 = 0; j2 < j; ++j2) offXY += X.M.dim(p, j2) * Y.M.dim(j2, k);
                int offR = 0;
                for (int j2 = 0; j2 < j; ++j2) offR += X.M.dim(p, j2) * YZ.dim(j2, q);
                int offYZ = 0;
                for (int k2 = 0; k2 < k; ++k2) offYZ += Y.M.dim(j, k2) * Z.M.dim(k2, q);
                for (int x = 0; x < dx; ++x)
                    for (int y = 0; y < dy; ++y)
                        for (int z = 0; z < dz; ++z) {
                            int src = offL + (offXY + x * dy + y) * dz + z;
                            int dst = offR + x * YZ.dim(j, q) + offYZ + y * dz + z;
                            P(dst, src) = 1.0;
                        }
            }
        a.blocks[g] = P;
    }
    return a;
}

inline Morphism transpose(const Morphism& f) {
    Morphism t;
    for (auto& [g, b] : f.blocks) t.blocks[g] = b.transpose();
    return t;
}

// Two data side by side on disjoint label sets.
inline OrbifoldDatum direct_sum(const OrbifoldDatum& a, const OrbifoldDatum& b) {
    OrbifoldDatum s;
    const int na = a.n();
    s.labels = a.labels;
    for (auto& l : b.labels) s.labels.push_back(l + "'");
    s.T.n = na + b.n();
    for (auto& [g, d] : a.T.dims) s.T.set(g[0], g[1], g[2], d);
    for (auto& [g, d] : b.T.dims) s.T.set(g[0] + na, g[1] + na, g[2] + na, d);
    auto shift = [&](const std::map<Key4, AlphaBlock>& src, std::map<Key4, AlphaBlock>& dst, int off) {
        for (auto& [k, blk] : src) {
            AlphaBlock nb = blk;
            for (int& r : nb.rows) r += off;
            for (int& c : nb.cols) c += off;
            dst[{k[0] + off, k[1] + off, k[2] + off, k[3] + off}] = nb;
        }
    };
    shift(a.alpha, s.alpha, 0);
    shift(a.alpha_bar, s.alpha_bar, 0);
    shift(b.alpha, s.alpha, na);
    shift(b.alpha_bar, s.alpha_bar, na);
    s.psi = a.psi;
    s.psi.insert(s.psi.end(), b.psi.begin(), b.psi.end());
    s.phi = a.phi;
    return s;
}

inline AlgebraInMFC z2_algebra(int e) {
    AlgebraInMFC A;
    A.support = {0, e};
    A.mult[{0, 0, 0}] = 1.0;
    A.mult[{0, e, e}] = 1.0;
    A.mult[{e, 0, e}] = 1.0;
    A.mult[{e, e, 0}] = 1.0;
    return A;
}

inline AlgebraInMFC unit_algebra() {
    AlgebraInMFC A;
    A.support = {0};
    A.mult[{0, 0, 0}] = 1.0;
    return A;
}

inline double max_item(const ConditionReport& r) {
    double m = 0;
    for (auto& c : r.items) m = std::max(m, c.residual);
    return m;
}

inline std::string first_failure(const ConditionReport& r) {
    for (auto& c : r.items)
        if (!c.pass) return c.name;
    return "";
}

}  // namespace fx
