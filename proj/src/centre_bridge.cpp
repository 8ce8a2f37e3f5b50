#include <algorithm>
#include <functional>

#include "orbicat/centre.hpp"

namespace orbicat {

WilsonObject centre_to_wilson(const SkeletalCategory& cat, const WilsonCategory& C, const HalfBraidedObject& hb) {
    const int n = cat.n();
    if (C.n() != n) throw Error("IndexMismatch", "category and datum label counts differ");
    const auto& labs = hb.copies;
    const int r = (int)labs.size();
    std::map<Grade2, std::vector<int>> Mb;
    WilsonObject X;
    X.M.n = n;
    for (int p = 0; p < n; ++p)
        for (int q = 0; q < n; ++q) {
            auto& v = Mb[{p, q}];
            for (int a = 0; a < r; ++a)
                if (cat.N(labs[a], q, p)) v.push_back(a);
            X.M.set(p, q, (int)v.size());
        }
    // inverse gamma_i per channel, rows over incoming copies
    std::map<std::array<int, 2>, Mat> ginv;
    for (auto& [k, g] : hb.gamma) {
        if (g.size() == 0) continue;
        if (g.rows() != g.cols()) throw Error("NotInvertible", "half-braiding block is not square");
        Eigen::FullPivLU<Mat> lu(g);
        if (!lu.isInvertible()) throw Error("NotInvertible", "half-braiding block is singular");
        ginv[k] = lu.inverse();
    }
    auto pos = [&](int x, int s, int copy, bool incoming) {
        int k = 0;
        for (int a = 0; a < r; ++a) {
            bool ok = incoming ? cat.N(labs[a], x, s) : cat.N(x, labs[a], s);
            if (!ok) continue;
            if (a == copy) return k;
            ++k;
        }
        return -1;
    };
    Layout L = C.layout(X);
    const AlphaTable& t = C.table();
    for (int l = 0; l < n; ++l)
        for (int i = 0; i < n; ++i)
            for (int j = 0; j < n; ++j) {
                int n0 = L.size(0, l, i, j), n1 = L.size(1, l, i, j), n2 = L.size(2, l, i, j);
                Mat A1 = Mat::Zero(n1, n0), A1b = Mat::Zero(n0, n1), A2 = Mat::Zero(n2, n0), A2b = Mat::Zero(n0, n2);
                for (int a = 0; a < n; ++a) {
                    int o0 = L.off(0, l, i, j, a);
                    if (o0 < 0) continue;
                    const auto& src = Mb.at({l, a});
                    for (int mi = 0; mi < (int)src.size(); ++mi) {
                        int al = src[mi], m = labs[al], x = o0 + mi;
                        for (int b = 0; b < n; ++b) {
                            int o1 = L.off(1, l, i, j, b);
                            if (o1 < 0) continue;
                            const auto& tg = Mb.at({b, i});
                            auto it = std::find(tg.begin(), tg.end(), al);
                            if (it == tg.end()) continue;
                            int y = o1 + int(it - tg.begin());
                            // F^{-1}(m,i,j,l)[a <- b] and F(m,i,j,l)[b,a]
                            auto bs = cat.left_channels(m, i, j, l), as = cat.right_channels(m, i, j, l);
                            auto pb = std::find(bs.begin(), bs.end(), b), pa = std::find(as.begin(), as.end(), a);
                            if (pb == bs.end() || pa == as.end()) continue;
                            Mat Fi = cat.fmat_inv(m, i, j, l);
                            A1(y, x) = Fi(pa - as.begin(), pb - bs.begin()) / t.w(b);
                            A1b(x, y) = cat.f(m, i, j, l, b, a) / t.w(a);
                        }
                        for (int c = 0; c < n; ++c) {
                            int o2 = L.off(2, l, i, j, c);
                            if (o2 < 0) continue;
                            const auto& tg = Mb.at({c, j});
                            for (int mj = 0; mj < (int)tg.size(); ++mj) {
                                int be = tg[mj], mp = labs[be], y = o2 + mj;
                                cplx v = 0, vb = 0;
                                for (int p = 0; p < n; ++p) {
                                    if (!cat.N(m, i, p) || !cat.N(i, mp, p)) continue;
                                    auto bs = cat.left_channels(m, i, j, l), as = cat.right_channels(m, i, j, l);
                                    auto pp = std::find(bs.begin(), bs.end(), p), pa = std::find(as.begin(), as.end(), a);
                                    auto bs2 = cat.left_channels(i, mp, j, l), as2 = cat.right_channels(i, mp, j, l);
                                    auto qp = std::find(bs2.begin(), bs2.end(), p), qc = std::find(as2.begin(), as2.end(), c);
                                    if (pp == bs.end() || pa == as.end() || qp == bs2.end() || qc == as2.end()) continue;
                                    cplx fi = cat.fmat_inv(m, i, j, l)(pa - as.begin(), pp - bs.begin());
                                    cplx f2 = cat.f(i, mp, j, l, p, c);
                                    v += fi * hb.G(cat, i, al, be, p) * f2;
                                    auto gi = ginv.find({i, p});
                                    if (gi == ginv.end()) continue;
                                    cplx f2i = cat.fmat_inv(i, mp, j, l)(qc - as2.begin(), qp - bs2.begin());
                                    cplx f1 = cat.f(m, i, j, l, p, a);
                                    vb += f2i * gi->second(pos(i, p, al, true), pos(i, p, be, false)) * f1;
                                }
                                A2(y, x) = v / t.w(c);
                                A2b(x, y) = vb / t.w(a);
                            }
                        }
                    }
                }
                if (n0 || n1) {
                    X.tau1[{l, i, j}] = std::move(A1);
                    X.tau1_bar[{l, i, j}] = std::move(A1b);
                }
                if (n0 || n2) {
                    X.tau2[{l, i, j}] = std::move(A2);
                    X.tau2_bar[{l, i, j}] = std::move(A2b);
                }
            }
    return X;
}

MatchResult compare_modular_data(const ModularData& a, const ModularData& b, double tol) {
    const int m = (int)a.qdim.size();
    if ((int)b.qdim.size() != m)
        throw Error("SizeMismatch", "label counts differ: " + std::to_string(m) + " vs " + std::to_string(b.qdim.size()));
    if (m == 0) return MatchResult{true, {}, 0.0};
    auto local = [&](int i, int j) {
        return std::max(std::abs(a.qdim[i] - b.qdim[j]), std::abs(a.tdiag[i] - b.tdiag[j]));
    };
    // depth-first search for a unit-fixing bijection within tolerance t
    auto search = [&](double t) {
        std::vector<int> perm(m, -1);
        std::vector<char> used(m, 0);
        std::function<bool(int)> go = [&](int i) {
            if (i == m) return true;
            for (int j = (i == 0 ? 0 : 1); j < (i == 0 ? 1 : m); ++j) {
                if (used[j] || local(i, j) > t) continue;
                bool ok = true;
                for (int k = 0; k <= i && ok; ++k) {
                    int jk = k == i ? j : perm[k];
                    if (std::abs(a.smatrix(i, k) - b.smatrix(j, jk)) > t) ok = false;
                }
                if (!ok) continue;
                perm[i] = j;
                used[j] = 1;
                if (go(i + 1)) return true;
                used[j] = 0;
                perm[i] = -1;
            }
            return false;
        };
        if (!go(0)) perm.clear();
        return perm;
    };
    auto residual = [&](const std::vector<int>& perm) {
        double r = 0;
        for (int i = 0; i < m; ++i) {
            r = std::max(r, local(i, perm[i]));
            for (int k = 0; k < m; ++k) r = std::max(r, std::abs(a.smatrix(i, k) - b.smatrix(perm[i], perm[k])));
        }
        return r;
    };
    MatchResult res;
    std::vector<int> perm = search(tol);
    if (!perm.empty()) {
        res.matched = true;
        res.residual = residual(perm);
        res.perm = std::move(perm);
        return res;
    }
    // no bijection: the residual of the first match at a looser tolerance
    double scale = 1.0;
    for (int i = 0; i < m; ++i) scale = std::max({scale, std::abs(a.qdim[i]), std::abs(b.qdim[i])});
    res.residual = 1e300;
    for (double t = std::max(tol, 1e-12) * 10; t < 1e3 * scale * scale; t *= 10) {
        perm = search(t);
        if (!perm.empty()) {
            res.residual = residual(perm);
            break;
        }
    }
    return res;
}

}  // namespace orbicat
