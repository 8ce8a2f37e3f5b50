#include <algorithm>
#include <cmath>
#include <numbers>
#include <random>

#include "orbicat/orbifold.hpp"
#include "orbicat/wilson.hpp"

namespace orbicat {

namespace {

// morphisms X -> X as block-diagonal matrices over the grades of X
Mat to_full(const Morphism& f, const WilsonObject& X) {
    int d = X.M.total();
    Mat m = Mat::Zero(d, d);
    int o = 0;
    for (auto& [g, k] : X.M.dims) {
        m.block(o, o, k, k) = f.block(g, k, k);
        o += k;
    }
    return m;
}

Morphism from_full(const Mat& m, const WilsonObject& X) {
    Morphism f;
    int o = 0;
    for (auto& [g, k] : X.M.dims) {
        f.blocks[g] = m.block(o, o, k, k);
        o += k;
    }
    return f;
}

struct Found {
    WilsonObject X;
    int first_pipe;
    cplx qdim, theta;
    std::vector<int> dims;
};

long long rnd(double v) { return std::llround(v * 1e6); }

}  // namespace

std::vector<WilsonObject> enumerate_simples(const WilsonCategory& C, std::uint64_t seed, const Tolerance& tol) {
    if (!C.is_simple_datum(tol)) throw Error("SimplenessRequired", "enumeration needs a simple orbifold datum");
    const int n = C.n();
    std::vector<Found> found;
    auto known = [&](const WilsonObject& Y) {
        for (auto& f : found)
            if (C.hom_dim(f.X, Y, tol) > 0) return true;
        return false;
    };
    found.push_back({C.unit(), -1, 1.0, 1.0, {}});
    for (int p = 0; p < n; ++p)
        for (int q = 0; q < n; ++q) {
            WilsonObject P = C.pipe(GradedBimodule::elementary(n, p, q));
            if (P.M.total() == 0) continue;
            Mat hb = C.hom_basis(P, P, tol);
            std::vector<Mat> basis;
            for (int c = 0; c < hb.cols(); ++c) basis.push_back(to_full(C.unflatten(hb.col(c), P, P), P));
            std::uint64_t s = seed ^ (0x9e3779b97f4a7c15ULL * (std::uint64_t)(p * n + q + 1));
            for (const Mat& e : primitive_idempotents(basis, s, tol)) {
                WilsonObject Y = C.retract(P, from_full(e, P), tol);
                if (Y.M.total() == 0 || known(Y)) continue;
                found.push_back({std::move(Y), p * n + q, 0.0, 0.0, {}});
            }
        }
    for (auto& f : found) {
        if (f.first_pipe < 0) continue;
        f.qdim = C.qdim(f.X);
        f.theta = C.twist_scalar(f.X, tol);
        for (int p = 0; p < n; ++p)
            for (int q = 0; q < n; ++q) f.dims.push_back(f.X.dim(p, q));
    }
    std::stable_sort(found.begin() + 1, found.end(), [](const Found& a, const Found& b) {
        auto key = [](const Found& f) {
            double arg = std::arg(f.theta);
            if (arg < 0) arg += 2 * std::numbers::pi;
            if (arg > 2 * std::numbers::pi - 1e-7) arg = 0;
            return std::make_tuple(rnd(f.qdim.real()), rnd(arg), f.dims, f.first_pipe);
        };
        return key(a) < key(b);
    });
    std::vector<WilsonObject> out;
    for (auto& f : found) out.push_back(std::move(f.X));
    return out;
}

CAModularData modular_data(const WilsonCategory& C, std::uint64_t seed, const Tolerance& tol) {
    CAModularData r;
    r.simples = enumerate_simples(C, seed, tol);
    const int m = (int)r.simples.size();
    ModularData& md = r.md;
    md.qdim.resize(m);
    md.tdiag.resize(m);
    for (int a = 0; a < m; ++a) {
        md.labels.push_back(a == 0 ? "1" : "X" + std::to_string(a));
        md.qdim[a] = C.qdim(r.simples[a]);
        md.tdiag[a] = a == 0 ? cplx(1.0) : C.twist_scalar(r.simples[a], tol);
    }
    md.smatrix = Mat::Zero(m, m);
    std::vector<std::pair<int, int>> pairs;
    for (int a = 0; a < m; ++a)
        for (int b = a; b < m; ++b) pairs.push_back({a, b});
    std::vector<cplx> vals(pairs.size());
    parallel_for((int)pairs.size(), [&](int k) {
        auto [a, b] = pairs[k];
        const WilsonObject &X = r.simples[a], &Y = r.simples[b];
        vals[k] = C.trace(C.compose(C.braiding(Y, X), C.braiding(X, Y)));
    });
    for (size_t k = 0; k < pairs.size(); ++k) {
        auto [a, b] = pairs[k];
        md.smatrix(a, b) = md.smatrix(b, a) = vals[k];
    }
    md.global_dim = 0.0;
    for (auto d : md.qdim) md.global_dim += d * d;

    ConditionReport& ch = r.checks;
    ch.tol = tol;
    double D2 = std::abs(md.global_dim);
    Mat u = md.smatrix * md.smatrix.adjoint() / md.global_dim - Mat::Identity(m, m);
    ch.add("s_invertible", max_abs(u), 1e-6);
    cplx tr4 = trace_psi4(C.datum());
    cplx phi = C.phi();
    cplx expect = 1.0 / (phi * phi * phi * phi * tr4 * tr4);
    ch.add("global_dim", std::abs(md.global_dim - expect) / std::abs(expect), 1e-6);
    double unit_row = 0;
    for (int b = 0; b < m; ++b) unit_row = std::max(unit_row, std::abs(md.smatrix(0, b) - md.qdim[b]));
    ch.add("s_unit_row", unit_row / D2, 1e-6);
    // sampled rows X != 1 must satisfy sum_Y d_Y S_XY = 0
    std::mt19937_64 rng(seed);
    std::vector<int> rows;
    for (int a = 1; a < m; ++a) rows.push_back(a);
    std::shuffle(rows.begin(), rows.end(), rng);
    if (rows.size() > 8) rows.resize(8);
    double lemma = 0;
    for (int a : rows) {
        cplx s = 0;
        for (int b = 0; b < m; ++b) s += md.qdim[b] * md.smatrix(a, b);
        lemma = std::max(lemma, std::abs(s) / D2);
    }
    ch.add("lemma_sampled", lemma, 1e-6);
    return r;
}

std::vector<std::vector<std::vector<int>>> fusion_rules(const WilsonCategory& C,
                                                        const std::vector<WilsonObject>& simples,
                                                        const Tolerance& tol) {
    const int m = (int)simples.size();
    std::vector<std::vector<std::vector<int>>> N(m, std::vector<std::vector<int>>(m, std::vector<int>(m, 0)));
    parallel_for(m * m, [&](int k) {
        int a = k / m, b = k % m;
        WilsonObject T = C.tensor(simples[a], simples[b]);
        for (int c = 0; c < m; ++c) N[a][b][c] = C.hom_dim(T, simples[c], tol);
    });
    return N;
}

}  // namespace orbicat
