#include <Eigen/LU>

#include "orbicat/wilson.hpp"
#include "wilson_internal.hpp"

namespace orbicat {

Layout::Layout(const AlphaTable& t, const GradedBimodule& M) : n_(t.n()) {
    const int n = n_;
    if (M.n != n) throw Error("GradeMismatch", "bimodule index set differs from datum");
    dims_.assign((size_t)n * n, 0);
    for (auto& [g, d] : M.dims) dims_[(size_t)g[0] * n + g[1]] = d;
    size_.assign((size_t)3 * n * n * n, 0);
    off_.assign((size_t)3 * n * n * n * n, -1);
    lab_.assign((size_t)3 * n * n * n, {});
    for (int wh = 0; wh < 3; ++wh)
        for (int l = 0; l < n; ++l)
            for (int i = 0; i < n; ++i)
                for (int j = 0; j < n; ++j) {
                    size_t k = key3(wh, l, i, j);
                    for (int x = 0; x < n; ++x) {
                        int d = 0;
                        if (wh == 0 && t.T(x, i, j)) d = dim(l, x);
                        if (wh == 1 && t.T(l, x, j)) d = dim(x, i);
                        if (wh == 2 && t.T(l, i, x)) d = dim(x, j);
                        if (!d) continue;
                        off_[k * n + x] = size_[k];
                        size_[k] += d;
                        lab_[k].insert(lab_[k].end(), d, x);
                    }
                }
}

namespace detail {

const Mat* block(const std::map<Grade3, Mat>& m, int l, int i, int j) {
    auto it = m.find({l, i, j});
    return it == m.end() ? nullptr : &it->second;
}

const std::map<Grade3, Mat>& taus(const WilsonObject& X, int wh, bool bar) {
    if (wh == 1) return bar ? X.tau1_bar : X.tau1;
    return bar ? X.tau2_bar : X.tau2;
}

std::map<Grade3, Mat>& taus(WilsonObject& X, int wh, bool bar) {
    if (wh == 1) return bar ? X.tau1_bar : X.tau1;
    return bar ? X.tau2_bar : X.tau2;
}

void fill_bars(const WilsonCategory& C, WilsonObject& X, int wh) {
    Layout L = C.layout(X);
    auto& out = taus(X, wh, true);
    out.clear();
    for (auto& [g, t] : taus(X, wh, false)) {
        auto [l, i, j] = g;
        if (t.rows() != t.cols()) throw Error("GradeMismatch", "crossing block is not square");
        if (t.size() == 0) {
            out[g] = Mat(0, 0);
            continue;
        }
        Eigen::FullPivLU<Mat> lu(t);
        if (!lu.isInvertible()) throw Error("NotInvertible", "crossing block is singular");
        Mat inv = lu.inverse();
        const auto& l0 = L.labels(0, l, i, j);
        const auto& l1 = L.labels(wh, l, i, j);
        for (int r = 0; r < inv.rows(); ++r)
            for (int c = 0; c < inv.cols(); ++c) inv(r, c) /= C.w(l0[r]) * C.w(l1[c]);
        out[g] = std::move(inv);
    }
}

}  // namespace detail

using detail::block;
using detail::fill_bars;

WilsonCategory::WilsonCategory(OrbifoldDatum d) : d_(std::move(d)), t_((validate_datum(d_), d_)) {}

WilsonObject WilsonCategory::zero() const {
    WilsonObject X;
    X.M.n = n();
    return X;
}

WilsonObject WilsonCategory::unit() const {
    const int n = this->n();
    WilsonObject X;
    X.M = GradedBimodule::unit(n);
    for (int l = 0; l < n; ++l)
        for (int i = 0; i < n; ++i)
            for (int j = 0; j < n; ++j) {
                if (!t_.T(l, i, j)) continue;
                Mat a(1, 1), b(1, 1);
                a(0, 0) = 1.0 / (psi(i) * psi(l));
                b(0, 0) = 1.0 / (psi(j) * psi(l));
                X.tau1[{l, i, j}] = a;
                X.tau1_bar[{l, i, j}] = a;
                X.tau2[{l, i, j}] = b;
                X.tau2_bar[{l, i, j}] = b;
            }
    return X;
}

namespace {

// Basis of a pipe intermediate: per grade (p,q) a list of 4-tuples.
struct TupleBasis {
    int n = 0;
    std::vector<std::vector<std::array<int, 4>>> items;
    std::vector<std::map<std::array<int, 4>, int>> index;

    explicit TupleBasis(int n_) : n(n_), items((size_t)n_ * n_), index((size_t)n_ * n_) {}
    void add(int p, int q, const std::array<int, 4>& t) {
        auto& v = items[(size_t)p * n + q];
        index[(size_t)p * n + q][t] = (int)v.size();
        v.push_back(t);
    }
    int find(int p, int q, const std::array<int, 4>& t) const {
        auto& m = index[(size_t)p * n + q];
        auto it = m.find(t);
        return it == m.end() ? -1 : it->second;
    }
    const std::vector<std::array<int, 4>>& at(int p, int q) const { return items[(size_t)p * n + q]; }
    GradedBimodule bimodule() const {
        GradedBimodule M;
        M.n = n;
        for (int p = 0; p < n; ++p)
            for (int q = 0; q < n; ++q) M.set(p, q, (int)at(p, q).size());
        return M;
    }
};

}  // namespace

WilsonObject WilsonCategory::pipe(const GradedBimodule& M) const {
    const int n = this->n();
    if (M.n != n) throw Error("GradeMismatch", "bimodule index set differs from datum");
    const AlphaTable& t = t_;

    // H2(M): basis (k,u,v,m) with T_{l;k,u}, T_{r;k,v}, m < M_{uv}; only the leg-2 crossing
    TupleBasis B2(n);
    for (int l = 0; l < n; ++l)
        for (int r = 0; r < n; ++r)
            for (int k = 0; k < n; ++k)
                for (int u = 0; u < n; ++u)
                    for (int v = 0; v < n; ++v)
                        if (t.T(l, k, u) && t.T(r, k, v))
                            for (int m = 0; m < M.dim(u, v); ++m) B2.add(l, r, {k, u, v, m});
    WilsonObject K;
    K.M = B2.bimodule();
    Layout LK(t, K.M);
    for (int l = 0; l < n; ++l)
        for (int i = 0; i < n; ++i)
            for (int j = 0; j < n; ++j) {
                int s0 = LK.size(0, l, i, j), s2 = LK.size(2, l, i, j);
                if (!s0 && !s2) continue;
                Mat A = Mat::Zero(s2, s0);
                for (int a = 0; a < n; ++a) {
                    int oa = LK.off(0, l, i, j, a);
                    if (oa < 0) continue;
                    const auto& src = B2.at(l, a);
                    for (size_t x = 0; x < src.size(); ++x) {
                        auto [k, u, v, m] = src[x];
                        for (int c = 0; c < n; ++c) {
                            int oc = LK.off(2, l, i, j, c);
                            if (oc < 0) continue;
                            for (int k2 = 0; k2 < n; ++k2) {
                                cplx co = t.ab(l, i, k2, u, k, c);
                                if (co == 0.0) continue;
                                cplx ca = t.al(a, i, k2, v, j, k);
                                if (ca == 0.0) continue;
                                int y = B2.find(c, j, {k2, u, v, m});
                                if (y < 0) continue;
                                A(oc + y, oa + (int)x) += co * w(k) * ca;
                            }
                        }
                    }
                }
                K.tau2[{l, i, j}] = std::move(A);
            }

    // H12(K): basis (u,k,v,m) with T_{l;u,k}, T_{r;v,k}, m < K_{uv}
    TupleBasis B1(n);
    for (int l = 0; l < n; ++l)
        for (int r = 0; r < n; ++r)
            for (int u = 0; u < n; ++u)
                for (int k = 0; k < n; ++k)
                    for (int v = 0; v < n; ++v)
                        if (t.T(l, u, k) && t.T(r, v, k))
                            for (int m = 0; m < K.dim(u, v); ++m) B1.add(l, r, {u, k, v, m});
    WilsonObject P;
    P.M = B1.bimodule();
    Layout LP(t, P.M);
    for (int l = 0; l < n; ++l)
        for (int i = 0; i < n; ++i)
            for (int j = 0; j < n; ++j) {
                int s0 = LP.size(0, l, i, j), s1 = LP.size(1, l, i, j), s2 = LP.size(2, l, i, j);
                if (!s0 && !s1 && !s2) continue;
                Mat A1 = Mat::Zero(s1, s0), A2 = Mat::Zero(s2, s0);
                for (int a = 0; a < n; ++a) {
                    int oa = LP.off(0, l, i, j, a);
                    if (oa < 0) continue;
                    const auto& src = B1.at(l, a);
                    for (size_t x = 0; x < src.size(); ++x) {
                        auto [u, k, v, m] = src[x];
                        // leg 1
                        for (int b = 0; b < n; ++b) {
                            int ob = LP.off(1, l, i, j, b);
                            if (ob < 0) continue;
                            for (int k2 = 0; k2 < n; ++k2) {
                                cplx c1 = t.al(l, u, k2, j, k, b);
                                if (c1 == 0.0) continue;
                                cplx c2 = t.ab(a, v, k2, j, i, k);
                                if (c2 == 0.0) continue;
                                int y = B1.find(b, i, {u, k2, v, m});
                                if (y < 0) continue;
                                A1(ob + y, oa + (int)x) += c1 * w(k) * c2;
                            }
                        }
                        // leg 2, through the leg-2 crossing of K
                        for (int yy = 0; yy < n; ++yy) {
                            cplx c1 = t.al(a, i, yy, k, j, v);
                            if (c1 == 0.0) continue;
                            const Mat* kt = block(K.tau2, u, i, yy);
                            int ov = LK.off(0, u, i, yy, v);
                            if (!kt || ov < 0) continue;
                            const auto& lab2 = LK.labels(2, u, i, yy);
                            for (int row = 0; row < kt->rows(); ++row) {
                                cplx kv = (*kt)(row, ov + m);
                                if (kv == 0.0) continue;
                                int z = lab2[row];
                                int m2 = row - LK.off(2, u, i, yy, z);
                                for (int c = 0; c < n; ++c) {
                                    int oc = LP.off(2, l, i, j, c);
                                    if (oc < 0) continue;
                                    cplx c3 = t.ab(l, i, z, k, u, c);
                                    if (c3 == 0.0) continue;
                                    int y = B1.find(c, j, {z, k, yy, m2});
                                    if (y < 0) continue;
                                    A2(oc + y, oa + (int)x) += w(v) * w(z) * c1 * kv * c3;
                                }
                            }
                        }
                    }
                }
                P.tau1[{l, i, j}] = std::move(A1);
                P.tau2[{l, i, j}] = std::move(A2);
            }
    fill_bars(*this, P, 1);
    fill_bars(*this, P, 2);
    return P;
}

namespace detail {

TensorBasis::TensorBasis(const GradedBimodule& X, const GradedBimodule& Y) : n(X.n) {
    off.assign((size_t)n * n * n, -1);
    size.assign((size_t)n * n, 0);
    for (int p = 0; p < n; ++p)
        for (int q = 0; q < n; ++q)
            for (int b = 0; b < n; ++b) {
                int d = X.dim(p, b) * Y.dim(b, q);
                if (!d) continue;
                off[((size_t)p * n + q) * n + b] = size[(size_t)p * n + q];
                size[(size_t)p * n + q] += d;
            }
    M.n = n;
    for (int p = 0; p < n; ++p)
        for (int q = 0; q < n; ++q) M.set(p, q, size[(size_t)p * n + q]);
    ydim = Y;
}

}  // namespace detail

using detail::TensorBasis;

WilsonObject WilsonCategory::tensor(const WilsonObject& X, const WilsonObject& Y) const {
    const int n = this->n();
    TensorBasis TB(X.M, Y.M);
    WilsonObject Z;
    Z.M = TB.M;
    Layout LX(t_, X.M), LY(t_, Y.M), LZ(t_, Z.M);
    for (int wh = 1; wh <= 2; ++wh)
        for (int l = 0; l < n; ++l)
            for (int i = 0; i < n; ++i)
                for (int j = 0; j < n; ++j) {
                    int s0 = LZ.size(0, l, i, j), s1 = LZ.size(wh, l, i, j);
                    if (!s0 && !s1) continue;
                    Mat A = Mat::Zero(s1, s0);
                    for (int a = 0; a < n; ++a) {
                        int oa = LZ.off(0, l, i, j, a);
                        if (oa < 0) continue;
                        // source (b, x in X_{lb}, y in Y_{ba})
                        for (int b = 0; b < n; ++b) {
                            int ob = TB.at(l, a, b);
                            if (ob < 0) continue;
                            const Mat* ty = block(detail::taus(Y, wh, false), b, i, j);
                            int oy = LY.off(0, b, i, j, a);
                            if (!ty || oy < 0) continue;
                            const auto& ly = LY.labels(wh, b, i, j);
                            int xd = X.dim(l, b), yd = Y.dim(b, a);
                            for (int x = 0; x < xd; ++x)
                                for (int y = 0; y < yd; ++y) {
                                    int src = oa + ob + x * yd + y;
                                    for (int r = 0; r < ty->rows(); ++r) {
                                        cplx v1 = (*ty)(r, oy + y);
                                        if (v1 == 0.0) continue;
                                        int cc = ly[r];
                                        int y2 = r - LY.off(wh, b, i, j, cc);
                                        int gi = wh == 1 ? cc : i, gj = wh == 1 ? j : cc;
                                        const Mat* tx = block(detail::taus(X, wh, false), l, gi, gj);
                                        int ox = LX.off(0, l, gi, gj, b);
                                        if (!tx || ox < 0) continue;
                                        const auto& lx = LX.labels(wh, l, gi, gj);
                                        for (int r2 = 0; r2 < tx->rows(); ++r2) {
                                            cplx v2 = (*tx)(r2, ox + x);
                                            if (v2 == 0.0) continue;
                                            int c = lx[r2];
                                            int x2 = r2 - LX.off(wh, l, gi, gj, c);
                                            // target (c, (cc, x2, y2)) in Z_{c,i} or Z_{c,j}
                                            int tq = wh == 1 ? i : j;
                                            int oc = LZ.off(wh, l, i, j, c);
                                            int occ = TB.at(c, tq, cc);
                                            int tgt = oc + occ + x2 * Y.dim(cc, tq) + y2;
                                            A(tgt, src) += psi(b) * psi(cc) * v1 * v2;
                                        }
                                    }
                                }
                        }
                    }
                    detail::taus(Z, wh, false)[{l, i, j}] = std::move(A);
                }
    fill_bars(*this, Z, 1);
    fill_bars(*this, Z, 2);
    return Z;
}

WilsonObject WilsonCategory::dual(const WilsonObject& X) const {
    const int n = this->n();
    WilsonObject D;
    D.M.n = n;
    for (auto& [g, d] : X.M.dims) D.M.set(g[1], g[0], d);
    Layout LX(t_, X.M), LD(t_, D.M);
    for (int wh = 1; wh <= 2; ++wh)
        for (int l = 0; l < n; ++l)
            for (int i = 0; i < n; ++i)
                for (int j = 0; j < n; ++j) {
                    int s0 = LD.size(0, l, i, j), s1 = LD.size(wh, l, i, j);
                    if (!s0 && !s1) continue;
                    Mat A = Mat::Zero(s1, s0);
                    for (int a = 0; a < n; ++a) {
                        int oa = LD.off(0, l, i, j, a);
                        if (oa < 0) continue;
                        for (int b = 0; b < n; ++b) {
                            int ob = LD.off(wh, l, i, j, b);
                            if (ob < 0) continue;
                            // leg 1: bar tau1 of X at (a;b,j) from (i,t) to (l,s)
                            // leg 2: bar tau2 of X at (a;i,b) from (j,t) to (l,s)
                            int gi = wh == 1 ? b : i, gj = wh == 1 ? j : b;
                            int from = wh == 1 ? i : j;
                            const Mat* tb = block(detail::taus(X, wh, true), a, gi, gj);
                            if (!tb) continue;
                            int r0 = LX.off(0, a, gi, gj, l), c0 = LX.off(wh, a, gi, gj, from);
                            if (r0 < 0 || c0 < 0) continue;
                            int ds = D.dim(l, a), dt = D.dim(b, wh == 1 ? i : j);
                            for (int s = 0; s < ds; ++s)
                                for (int tt = 0; tt < dt; ++tt) A(ob + tt, oa + s) = (*tb)(r0 + s, c0 + tt);
                        }
                    }
                    detail::taus(D, wh, false)[{l, i, j}] = std::move(A);
                }
    fill_bars(*this, D, 1);
    fill_bars(*this, D, 2);
    return D;
}

WilsonObject WilsonCategory::direct_sum(const std::vector<const WilsonObject*>& xs) const {
    const int n = this->n();
    WilsonObject S;
    S.M.n = n;
    std::vector<std::vector<int>> base(xs.size(), std::vector<int>((size_t)n * n, 0));
    for (size_t o = 0; o < xs.size(); ++o)
        for (int p = 0; p < n; ++p)
            for (int q = 0; q < n; ++q) {
                base[o][(size_t)p * n + q] = S.dim(p, q);
                S.M.set(p, q, S.dim(p, q) + xs[o]->dim(p, q));
            }
    Layout LS(t_, S.M);
    for (int wh = 1; wh <= 2; ++wh)
        for (int bar = 0; bar < 2; ++bar)
            for (int l = 0; l < n; ++l)
                for (int i = 0; i < n; ++i)
                    for (int j = 0; j < n; ++j) {
                        int s0 = LS.size(0, l, i, j), s1 = LS.size(wh, l, i, j);
                        if (!s0 && !s1) continue;
                        Mat A = bar ? Mat::Zero(s0, s1) : Mat::Zero(s1, s0);
                        for (size_t o = 0; o < xs.size(); ++o) {
                            const Mat* tb = block(detail::taus(*xs[o], wh, bar), l, i, j);
                            if (!tb) continue;
                            Layout LO(t_, xs[o]->M);
                            auto pos = [&](int side, int idx) {
                                int x = LO.labels(side, l, i, j)[idx];
                                int m = idx - LO.off(side, l, i, j, x);
                                int p = side == 0 ? l : x, q = side == 0 ? x : (side == 1 ? i : j);
                                return LS.off(side, l, i, j, x) + base[o][(size_t)p * n + q] + m;
                            };
                            int rs = bar ? 0 : wh, cs = bar ? wh : 0;
                            for (int r = 0; r < tb->rows(); ++r)
                                for (int c = 0; c < tb->cols(); ++c)
                                    if ((*tb)(r, c) != 0.0) A(pos(rs, r), pos(cs, c)) = (*tb)(r, c);
                        }
                        detail::taus(S, wh, bar)[{l, i, j}] = std::move(A);
                    }
    return S;
}

WilsonObject WilsonCategory::retract(const WilsonObject& X, const Morphism& e, const Tolerance& tol) const {
    const int n = this->n();
    std::map<Grade2, Split> sp;
    WilsonObject R;
    R.M.n = n;
    for (auto& [g, d] : X.M.dims) {
        Mat blk = e.block(g, d, d);
        Split s = split_idempotent(blk, tol);
        R.M.set(g[0], g[1], (int)s.embed.cols());
        sp[g] = std::move(s);
    }
    Layout LX(t_, X.M), LR(t_, R.M);
    // block-diagonal embedding of side `side` at (l;i,j)
    auto embed = [&](int side, int l, int i, int j, bool retract_side) {
        int rows = retract_side ? LR.size(side, l, i, j) : LX.size(side, l, i, j);
        int cols = retract_side ? LX.size(side, l, i, j) : LR.size(side, l, i, j);
        Mat E = Mat::Zero(rows, cols);
        for (int x = 0; x < n; ++x) {
            int ox = LX.off(side, l, i, j, x);
            if (ox < 0) continue;
            Grade2 g = side == 0 ? Grade2{l, x} : Grade2{x, side == 1 ? i : j};
            const Split& s = sp.at(g);
            int orr = LR.off(side, l, i, j, x);
            if (orr < 0) continue;
            if (retract_side)
                E.block(orr, ox, s.retract.rows(), s.retract.cols()) = s.retract;
            else
                E.block(ox, orr, s.embed.rows(), s.embed.cols()) = s.embed;
        }
        return E;
    };
    for (int wh = 1; wh <= 2; ++wh)
        for (int l = 0; l < n; ++l)
            for (int i = 0; i < n; ++i)
                for (int j = 0; j < n; ++j) {
                    if (!LR.size(0, l, i, j) && !LR.size(wh, l, i, j)) continue;
                    const Mat* tx = block(detail::taus(X, wh, false), l, i, j);
                    const Mat* tbx = block(detail::taus(X, wh, true), l, i, j);
                    if (!tx || !tbx) throw Error("GradeMismatch", "object lacks a crossing block");
                    detail::taus(R, wh, false)[{l, i, j}] = embed(wh, l, i, j, true) * (*tx) * embed(0, l, i, j, false);
                    detail::taus(R, wh, true)[{l, i, j}] = embed(0, l, i, j, true) * (*tbx) * embed(wh, l, i, j, false);
                }
    return R;
}

}  // namespace orbicat
