#include <algorithm>
#include <cmath>
#include <numbers>

#include "fcache.hpp"
#include "orbicat/centre.hpp"

namespace orbicat {

namespace {

void require_mf(const SkeletalCategory& cat) {
    if (!cat.multiplicity_free())
        throw Error("MultiplicityUnsupported", "the centre oracle needs a multiplicity-free category");
}

long long rnd(double v) { return std::llround(v * 1e6); }

}  // namespace

std::map<int, int> HalfBraidedObject::mult() const {
    std::map<int, int> m;
    for (int c : copies) ++m[c];
    return m;
}

cplx HalfBraidedObject::G(const SkeletalCategory& cat, int x, int alpha, int beta, int s) const {
    auto it = gamma.find({x, s});
    if (it == gamma.end()) return 0.0;
    int col = -1, row = -1, k = 0;
    for (int a = 0; a < (int)copies.size(); ++a)
        if (cat.N(copies[a], x, s)) {
            if (a == alpha) col = k;
            ++k;
        }
    k = 0;
    for (int b = 0; b < (int)copies.size(); ++b)
        if (cat.N(x, copies[b], s)) {
            if (b == beta) row = k;
            ++k;
        }
    if (row < 0 || col < 0) return 0.0;
    return it->second(row, col);
}

Mat TubeAlgebra::left(int b) const {
    Mat L = Mat::Zero(dim(), dim());
    for (const auto& e : product)
        if (e.b == b) L(e.c, e.a) += e.val;
    return L;
}

Vec TubeAlgebra::unit(int n) const {
    Vec u = Vec::Zero(dim());
    for (int i = 0; i < n; ++i) u(index.at({i, 0, i, i})) = 1.0;
    return u;
}

TubeAlgebra tube_algebra(const SkeletalCategory& cat) {
    require_mf(cat);
    const int n = cat.n();
    TubeAlgebra A;
    for (int i = 0; i < n; ++i)
        for (int x = 0; x < n; ++x)
            for (int j = 0; j < n; ++j)
                for (int s = 0; s < n; ++s)
                    if (cat.N(i, x, s) && cat.N(x, j, s)) {
                        A.index[{i, x, j, s}] = (int)A.basis.size();
                        A.basis.push_back({i, x, j, s});
                    }
    detail::FCache F(cat);
    for (int i = 0; i < n; ++i)
        for (int x = 0; x < n; ++x)
            for (int y = 0; y < n; ++y)
                for (int k = 0; k < n; ++k) {
                    std::vector<std::array<int, 3>> P, E;
                    for (int j = 0; j < n; ++j)
                        for (int s1 = 0; s1 < n; ++s1)
                            for (int s2 = 0; s2 < n; ++s2)
                                if (A.index.count({i, x, j, s1}) && A.index.count({j, y, k, s2})) P.push_back({j, s1, s2});
                    if (P.empty()) continue;
                    for (int sg = 0; sg < n; ++sg)
                        for (int zp = 0; zp < n; ++zp)
                            for (int z = 0; z < n; ++z)
                                if (cat.N(x, y, zp) && cat.N(i, zp, sg) && cat.N(x, y, z) && cat.N(z, k, sg))
                                    E.push_back({sg, zp, z});
                    if (P.size() != E.size()) throw Error("SplitFailure", "tube product block is not square");
                    Mat M(P.size(), E.size());
                    for (size_t p = 0; p < P.size(); ++p) {
                        auto [j, s1, s2] = P[p];
                        for (size_t e = 0; e < E.size(); ++e) {
                            auto [sg, zp, z] = E[e];
                            M(p, e) = F.finv(i, x, y, sg, zp, s1) * F.f(x, j, y, sg, s1, s2) * F.finv(x, y, k, sg, s2, z);
                        }
                    }
                    Eigen::FullPivLU<Mat> lu(M);
                    if (!lu.isInvertible()) throw Error("SplitFailure", "singular tube product block");
                    Mat Mi = lu.inverse();
                    for (size_t p = 0; p < P.size(); ++p) {
                        auto [j, s1, s2] = P[p];
                        int a = A.index.at({i, x, j, s1}), b = A.index.at({j, y, k, s2});
                        for (size_t e = 0; e < E.size(); ++e) {
                            auto [sg, zp, z] = E[e];
                            if (zp != z || std::abs(Mi(e, p)) < 1e-14) continue;
                            A.product.push_back({a, b, A.index.at({i, z, k, sg}), Mi(e, p)});
                        }
                    }
                }
    return A;
}

double hexagon_residual(const SkeletalCategory& cat, const HalfBraidedObject& hb) {
    const int n = cat.n();
    const int r = (int)hb.copies.size();
    detail::FCache F(cat);
    double worst = 0;
    for (int al = 0; al < r; ++al) {
        int m = hb.copies[al];
        for (int x = 0; x < n; ++x)
            for (int y = 0; y < n; ++y)
                for (int s = 0; s < n; ++s)
                    for (int p = 0; p < n; ++p) {
                        if (!cat.N(m, x, p) || !cat.N(p, y, s)) continue;
                        for (int z = 0; z < n; ++z) {
                            if (!cat.N(x, y, z)) continue;
                            for (int de = 0; de < r; ++de) {
                                int md = hb.copies[de];
                                if (!cat.N(z, md, s)) continue;
                                cplx lhs = 0;
                                for (int be = 0; be < r; ++be) {
                                    int mb = hb.copies[be];
                                    if (!cat.N(x, mb, p)) continue;
                                    cplx g1 = hb.G(cat, x, al, be, p);
                                    if (g1 == 0.0) continue;
                                    for (int q = 0; q < n; ++q) {
                                        if (!cat.N(mb, y, q) || !cat.N(x, q, s) || !cat.N(y, md, q)) continue;
                                        lhs += g1 * F.f(x, mb, y, s, p, q) * hb.G(cat, y, be, de, q) *
                                               F.finv(x, y, md, s, q, z);
                                    }
                                }
                                cplx rhs = cat.N(m, z, s) ? F.f(m, x, y, s, p, z) * hb.G(cat, z, al, de, s) : 0.0;
                                worst = std::max(worst, std::abs(lhs - rhs));
                            }
                        }
                    }
    }
    return worst;
}

cplx centre_twist(const SkeletalCategory& cat, const HalfBraidedObject& hb) {
    cplx num = 0, q = 0;
    for (int a = 0; a < (int)hb.copies.size(); ++a) {
        q += cat.qdim[hb.copies[a]];
        for (int s = 0; s < cat.n(); ++s) num += cat.qdim[s] * hb.G(cat, hb.copies[a], a, a, s);
    }
    return num / q;
}

std::vector<HalfBraidedObject> centre_simples(const SkeletalCategory& cat, std::uint64_t seed, const Tolerance& tol) {
    require_mf(cat);
    const int n = cat.n();
    TubeAlgebra A = tube_algebra(cat);
    const int m = A.dim();
    std::vector<Mat> L(m);
    parallel_for(m, [&](int b) { L[b] = A.left(b); });
    Vec one = A.unit(n);
    std::vector<Mat> idem = primitive_idempotents(L, seed, tol);

    // one representative per isomorphism class: p ~ q iff q A p != 0
    std::vector<Vec> reps;
    std::vector<Mat> spans;
    for (const Mat& E : idem) {
        Vec p = E * one;
        Mat K(m, m);
        for (int t = 0; t < m; ++t) K.col(t) = L[t] * p;
        bool seen = false;
        for (const Vec& q : reps) {
            Mat Lq = Mat::Zero(m, m);
            for (int t = 0; t < m; ++t) Lq += q(t) * L[t];
            if (max_abs(Lq * K) > 1e3 * tol.rank_cut(1.0)) {
                seen = true;
                break;
            }
        }
        if (seen) continue;
        reps.push_back(p);
        spans.push_back(range_basis(K, tol));
    }

    struct Item {
        HalfBraidedObject hb;
        cplx qd, th;
    };
    std::vector<Item> items;
    for (const Mat& Q : spans) {
        std::vector<int> labs;
        std::vector<Vec> cols;
        for (int i = 0; i < n; ++i) {
            Mat Pi = L[A.index.at({i, 0, i, i})] * Q;
            Mat U = range_basis(Pi, tol);
            for (int c = 0; c < U.cols(); ++c) {
                cols.push_back(U.col(c));
                labs.push_back(i);
            }
        }
        const int r = (int)labs.size();
        Mat Qg(m, r);
        for (int c = 0; c < r; ++c) Qg.col(c) = cols[c];
        Mat Qp = Qg.completeOrthogonalDecomposition().pseudoInverse();
        HalfBraidedObject hb;
        hb.copies = labs;
        for (int x = 0; x < n; ++x)
            for (int s = 0; s < n; ++s) {
                std::vector<int> in, out;
                for (int a = 0; a < r; ++a)
                    if (cat.N(labs[a], x, s)) in.push_back(a);
                for (int b = 0; b < r; ++b)
                    if (cat.N(x, labs[b], s)) out.push_back(b);
                if (in.empty() && out.empty()) continue;
                Mat g = Mat::Zero(out.size(), in.size());
                for (size_t ca = 0; ca < in.size(); ++ca)
                    for (size_t rb = 0; rb < out.size(); ++rb) {
                        int a = in[ca], b = out[rb];
                        int t = A.index.at({labs[a], x, labs[b], s});
                        g(rb, ca) = (Qp.row(b) * L[t] * Qg.col(a)).value();
                    }
                hb.gamma[{x, s}] = std::move(g);
            }
        cplx qd = 0;
        for (int c : labs) qd += cat.qdim[c];
        items.push_back({std::move(hb), qd, 0.0});
    }
    cplx dim2 = 0, target = global_dimension(cat) * global_dimension(cat);
    for (auto& it : items) {
        it.th = centre_twist(cat, it.hb);
        dim2 += it.qd * it.qd;
    }
    double rel = std::abs(dim2 - target) / std::abs(target);
    if (rel > 1e-6) throw Error("SplitFailure", "centre simples do not exhaust the global dimension", rel);

    auto is_unit = [&](const Item& it) {
        if (it.hb.copies != std::vector<int>{0}) return false;
        for (int x = 0; x < n; ++x)
            if (std::abs(it.hb.G(cat, x, 0, 0, x) - 1.0) > 1e-6) return false;
        return true;
    };
    std::stable_sort(items.begin(), items.end(), [&](const Item& a, const Item& b) {
        auto key = [&](const Item& it) {
            double arg = std::arg(it.th);
            if (arg < 0) arg += 2 * std::numbers::pi;
            if (arg > 2 * std::numbers::pi - 1e-7) arg = 0;
            return std::make_tuple(!is_unit(it), rnd(it.qd.real()), rnd(arg), it.hb.copies);
        };
        return key(a) < key(b);
    });
    std::vector<HalfBraidedObject> out;
    for (auto& it : items) out.push_back(std::move(it.hb));
    return out;
}

ModularData centre_modular_data(const SkeletalCategory& cat, const std::vector<HalfBraidedObject>& simples) {
    const int m = (int)simples.size();
    ModularData md;
    md.smatrix = Mat::Zero(m, m);
    md.global_dim = 0.0;
    for (int a = 0; a < m; ++a) {
        md.labels.push_back(a == 0 ? "1" : "Z" + std::to_string(a));
        cplx q = 0;
        for (int c : simples[a].copies) q += cat.qdim[c];
        md.qdim.push_back(q);
        md.tdiag.push_back(centre_twist(cat, simples[a]));
        md.global_dim += q * q;
    }
    for (int z = 0; z < m; ++z)
        for (int w = 0; w < m; ++w) {
            const HalfBraidedObject &Z = simples[z], &W = simples[w];
            cplx s = 0;
            for (int a = 0; a < (int)Z.copies.size(); ++a)
                for (int b = 0; b < (int)W.copies.size(); ++b)
                    for (int t = 0; t < cat.n(); ++t)
                        s += cat.qdim[t] * Z.G(cat, W.copies[b], a, a, t) * W.G(cat, Z.copies[a], b, b, t);
            md.smatrix(z, w) = s;
        }
    return md;
}

}  // namespace orbicat
