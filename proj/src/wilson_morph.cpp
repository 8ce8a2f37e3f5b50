#include <unsupported/Eigen/KroneckerProduct>

#include "orbicat/wilson.hpp"
#include "wilson_internal.hpp"

namespace orbicat {

using detail::block;
using detail::TensorBasis;

namespace {

// block-diagonal lift of f onto side `side` of (l;i,j), rows in Y's basis, cols in X's
Mat lift(const Morphism& f, const Layout& LX, const Layout& LY, int side, int l, int i, int j, const WilsonCategory& C,
         bool weighted) {
    const int n = LX.n();
    Mat F = Mat::Zero(LY.size(side, l, i, j), LX.size(side, l, i, j));
    for (int x = 0; x < n; ++x) {
        int ox = LX.off(side, l, i, j, x), oy = LY.off(side, l, i, j, x);
        if (ox < 0 || oy < 0) continue;
        Grade2 g = side == 0 ? Grade2{l, x} : Grade2{x, side == 1 ? i : j};
        auto it = f.blocks.find(g);
        if (it == f.blocks.end()) continue;
        F.block(oy, ox, it->second.rows(), it->second.cols()) = weighted ? Mat(it->second * C.w(x)) : it->second;
    }
    return F;
}

}  // namespace

Morphism WilsonCategory::identity(const WilsonObject& X) const {
    Morphism f;
    for (auto& [g, d] : X.M.dims) f.blocks[g] = Mat::Identity(d, d);
    return f;
}

Morphism WilsonCategory::compose(const Morphism& g, const Morphism& f) const {
    Morphism h;
    for (auto& [k, fb] : f.blocks) {
        auto it = g.blocks.find(k);
        if (it == g.blocks.end()) continue;
        h.blocks[k] = it->second * fb;
    }
    return h;
}

Vec WilsonCategory::flatten(const Morphism& f, const WilsonObject& X, const WilsonObject& Y) const {
    std::vector<cplx> out;
    for (auto& [g, dx] : X.M.dims) {
        int dy = Y.dim(g[0], g[1]);
        if (!dy) continue;
        Mat b = f.block(g, dy, dx);
        if (b.rows() != dy || b.cols() != dx) throw Error("GradeMismatch", "morphism block shape");
        for (int c = 0; c < dx; ++c)
            for (int r = 0; r < dy; ++r) out.push_back(b(r, c));
    }
    return Eigen::Map<Vec>(out.data(), (Eigen::Index)out.size());
}

Morphism WilsonCategory::unflatten(const Vec& v, const WilsonObject& X, const WilsonObject& Y) const {
    Morphism f;
    Eigen::Index pos = 0;
    for (auto& [g, dx] : X.M.dims) {
        int dy = Y.dim(g[0], g[1]);
        if (!dy) continue;
        Mat b(dy, dx);
        for (int c = 0; c < dx; ++c)
            for (int r = 0; r < dy; ++r) b(r, c) = v(pos++);
        f.blocks[g] = std::move(b);
    }
    if (pos != v.size()) throw Error("GradeMismatch", "flat vector length");
    return f;
}

Morphism WilsonCategory::average(const Morphism& f, const WilsonObject& X, const WilsonObject& Y) const {
    const int n = this->n();
    Layout LX(t_, X.M), LY(t_, Y.M);
    Morphism cur = f;
    for (int wh = 1; wh <= 2; ++wh) {
        Morphism g;
        for (auto& [k, dx] : X.M.dims)
            if (int dy = Y.dim(k[0], k[1])) g.blocks[k] = Mat::Zero(dy, dx);
        for (int l = 0; l < n; ++l)
            for (int i = 0; i < n; ++i)
                for (int j = 0; j < n; ++j) {
                    if (!LX.size(0, l, i, j) || !LY.size(0, l, i, j)) continue;
                    const Mat* tx = block(detail::taus(X, wh, false), l, i, j);
                    const Mat* ty = block(detail::taus(Y, wh, true), l, i, j);
                    if (!tx || !ty) continue;
                    Mat F1 = lift(cur, LX, LY, wh, l, i, j, *this, true);
                    Mat G = (*ty) * F1 * (*tx);
                    cplx s = phi() * w(i) * w(j);
                    for (int a = 0; a < n; ++a) {
                        int ox = LX.off(0, l, i, j, a), oy = LY.off(0, l, i, j, a);
                        if (ox < 0 || oy < 0) continue;
                        Mat& gb = g.blocks.at({l, a});
                        gb += s * G.block(oy, ox, gb.rows(), gb.cols());
                    }
                }
        cur = std::move(g);
    }
    return cur;
}

Mat WilsonCategory::average_matrix(const WilsonObject& X, const WilsonObject& Y) const {
    Vec probe = flatten(Morphism{}, X, Y);
    const Eigen::Index d = probe.size();
    Mat P(d, d);
    std::vector<Vec> cols(d);
    parallel_for((int)d, [&](int c) {
        Vec e = Vec::Zero(d);
        e(c) = 1.0;
        cols[c] = flatten(average(unflatten(e, X, Y), X, Y), X, Y);
    });
    for (Eigen::Index c = 0; c < d; ++c) P.col(c) = cols[c];
    return P;
}

Mat WilsonCategory::hom_basis(const WilsonObject& X, const WilsonObject& Y, const Tolerance& tol) const {
    Mat P = average_matrix(X, Y);
    if (P.size() == 0) return Mat(0, 0);
    return range_basis(P, tol);
}

int WilsonCategory::hom_dim(const WilsonObject& X, const WilsonObject& Y, const Tolerance& tol) const {
    Mat P = average_matrix(X, Y);
    if (P.size() == 0) return 0;
    return rank(P, tol);
}

double WilsonCategory::morphism_residual(const Morphism& f, const WilsonObject& X, const WilsonObject& Y) const {
    const int n = this->n();
    Layout LX(t_, X.M), LY(t_, Y.M);
    double r = 0;
    for (int wh = 1; wh <= 2; ++wh)
        for (int l = 0; l < n; ++l)
            for (int i = 0; i < n; ++i)
                for (int j = 0; j < n; ++j) {
                    const Mat* tx = block(detail::taus(X, wh, false), l, i, j);
                    const Mat* ty = block(detail::taus(Y, wh, false), l, i, j);
                    Mat F0 = lift(f, LX, LY, 0, l, i, j, *this, false);
                    Mat F1 = lift(f, LX, LY, wh, l, i, j, *this, false);
                    Mat lhs = ty ? Mat(*ty * F0) : Mat::Zero(F1.rows(), F0.cols());
                    Mat rhs = tx ? Mat(F1 * *tx) : Mat::Zero(F1.rows(), F0.cols());
                    if (lhs.size()) r = std::max(r, max_abs_diff(lhs, rhs));
                }
    return r;
}

Morphism WilsonCategory::tensor_morphisms(const Morphism& f, const Morphism& g, const WilsonObject& X1,
                                          const WilsonObject& Y1, const WilsonObject& X2,
                                          const WilsonObject& Y2) const {
    const int n = this->n();
    TensorBasis S(X1.M, X2.M), T(Y1.M, Y2.M);
    Morphism h;
    for (int p = 0; p < n; ++p)
        for (int q = 0; q < n; ++q) {
            int ds = S.size[(size_t)p * n + q], dt = T.size[(size_t)p * n + q];
            if (!ds || !dt) continue;
            Mat B = Mat::Zero(dt, ds);
            for (int b = 0; b < n; ++b) {
                int os = S.at(p, q, b), ot = T.at(p, q, b);
                if (os < 0 || ot < 0) continue;
                Mat fb = f.block({p, b}, Y1.dim(p, b), X1.dim(p, b));
                Mat gb = g.block({b, q}, Y2.dim(b, q), X2.dim(b, q));
                Mat k = Eigen::kroneckerProduct(fb, gb);
                B.block(ot, os, k.rows(), k.cols()) = k;
            }
            h.blocks[{p, q}] = std::move(B);
        }
    return h;
}

namespace {

// shared body of the braiding and its mirror; forward maps X(x)Y -> Y(x)X
Morphism braid_impl(const WilsonCategory& C, const WilsonObject& X, const WilsonObject& Y, bool inverse) {
    const int n = C.n();
    const AlphaTable& t = C.table();
    TensorBasis XY(X.M, Y.M), YX(Y.M, X.M);
    Layout LX = C.layout(X), LY = C.layout(Y);
    Morphism out;
    auto col = [](const Mat* A, int c, auto&& fn) {
        for (int r = 0; r < A->rows(); ++r)
            if ((*A)(r, c) != 0.0) fn(r, (*A)(r, c));
    };
    for (int l = 0; l < n; ++l)
        for (int ff = 0; ff < n; ++ff) {
            int dxy = XY.size[(size_t)l * n + ff], dyx = YX.size[(size_t)l * n + ff];
            if (!dxy && !dyx) continue;
            Mat B = inverse ? Mat::Zero(dxy, dyx) : Mat::Zero(dyx, dxy);
            for (int i = 0; i < n; ++i)
                for (int j = 0; j < n; ++j) {
                    if (!t.T(ff, i, j)) continue;
                    cplx base = C.phi() * C.w(i) * C.w(j);
                    if (!inverse) {
                        // source (a, x in X_{la}, y in Y_{a,ff})
                        for (int a = 0; a < n; ++a) {
                            int oxy = XY.at(l, ff, a);
                            if (oxy < 0) continue;
                            const Mat* t1 = block(Y.tau1, a, i, j);
                            int oy0 = LY.off(0, a, i, j, ff);
                            if (!t1 || oy0 < 0) continue;
                            for (int x = 0; x < X.dim(l, a); ++x)
                                for (int y = 0; y < Y.dim(a, ff); ++y) {
                                    int src = oxy + x * Y.dim(a, ff) + y;
                                    col(t1, oy0 + y, [&](int r1, cplx v1) {
                                        int cc = LY.labels(1, a, i, j)[r1];
                                        int y1 = r1 - LY.off(1, a, i, j, cc);
                                        const Mat* t2 = block(X.tau2, l, cc, j);
                                        int ox0 = LX.off(0, l, cc, j, a);
                                        if (!t2 || ox0 < 0) return;
                                        col(t2, ox0 + x, [&](int r2, cplx v2) {
                                            int d = LX.labels(2, l, cc, j)[r2];
                                            int x1 = r2 - LX.off(2, l, cc, j, d);
                                            const Mat* t3 = block(Y.tau1_bar, l, i, d);
                                            int oy1 = LY.off(1, l, i, d, cc);
                                            if (!t3 || oy1 < 0) return;
                                            col(t3, oy1 + y1, [&](int r3, cplx v3) {
                                                int e = LY.labels(0, l, i, d)[r3];
                                                int y2 = r3 - LY.off(0, l, i, d, e);
                                                const Mat* t4 = block(X.tau2_bar, e, i, j);
                                                int ox2 = LX.off(2, e, i, j, d);
                                                int off_ff = LX.off(0, e, i, j, ff);
                                                if (!t4 || ox2 < 0 || off_ff < 0) return;
                                                for (int x2 = 0; x2 < X.dim(e, ff); ++x2) {
                                                    cplx v4 = (*t4)(off_ff + x2, ox2 + x1);
                                                    if (v4 == 0.0) continue;
                                                    int tgt = YX.index(l, ff, e, y2, x2);
                                                    B(tgt, src) += base * t.psi(a) * C.w(cc) * C.w(d) * t.psi(e) *
                                                                   v1 * v2 * v3 * v4;
                                                }
                                            });
                                        });
                                    });
                                }
                        }
                    } else {
                        // source (e, y2 in Y_{le}, x2 in X_{e,ff}); the four steps reversed
                        for (int e = 0; e < n; ++e) {
                            int oyx = YX.at(l, ff, e);
                            if (oyx < 0) continue;
                            const Mat* t4 = block(X.tau2, e, i, j);
                            int ox0 = LX.off(0, e, i, j, ff);
                            if (!t4 || ox0 < 0) continue;
                            for (int y2 = 0; y2 < Y.dim(l, e); ++y2)
                                for (int x2 = 0; x2 < X.dim(e, ff); ++x2) {
                                    int src = oyx + y2 * X.dim(e, ff) + x2;
                                    col(t4, ox0 + x2, [&](int r4, cplx v4) {
                                        int d = LX.labels(2, e, i, j)[r4];
                                        int x1 = r4 - LX.off(2, e, i, j, d);
                                        const Mat* t3 = block(Y.tau1, l, i, d);
                                        int oy0 = LY.off(0, l, i, d, e);
                                        if (!t3 || oy0 < 0) return;
                                        col(t3, oy0 + y2, [&](int r3, cplx v3) {
                                            int cc = LY.labels(1, l, i, d)[r3];
                                            int y1 = r3 - LY.off(1, l, i, d, cc);
                                            const Mat* t2 = block(X.tau2_bar, l, cc, j);
                                            int ox2 = LX.off(2, l, cc, j, d);
                                            if (!t2 || ox2 < 0) return;
                                            col(t2, ox2 + x1, [&](int r2, cplx v2) {
                                                int a = LX.labels(0, l, cc, j)[r2];
                                                int x = r2 - LX.off(0, l, cc, j, a);
                                                const Mat* t1 = block(Y.tau1_bar, a, i, j);
                                                int oy1 = LY.off(1, a, i, j, cc);
                                                int off_ff = LY.off(0, a, i, j, ff);
                                                if (!t1 || oy1 < 0 || off_ff < 0) return;
                                                for (int y = 0; y < Y.dim(a, ff); ++y) {
                                                    cplx v1 = (*t1)(off_ff + y, oy1 + y1);
                                                    if (v1 == 0.0) continue;
                                                    int tgt = XY.index(l, ff, a, x, y);
                                                    B(tgt, src) += base * t.psi(a) * C.w(cc) * C.w(d) * t.psi(e) *
                                                                   v1 * v2 * v3 * v4;
                                                }
                                            });
                                        });
                                    });
                                }
                        }
                    }
                }
            out.blocks[{l, ff}] = std::move(B);
        }
    return out;
}

}  // namespace

Morphism WilsonCategory::braiding(const WilsonObject& X, const WilsonObject& Y) const {
    return braid_impl(*this, X, Y, false);
}

Morphism WilsonCategory::braiding_inverse(const WilsonObject& X, const WilsonObject& Y) const {
    return braid_impl(*this, X, Y, true);
}

Morphism WilsonCategory::twist(const WilsonObject& X) const {
    const int n = this->n();
    Morphism c = braiding(X, X);
    TensorBasis XX(X.M, X.M);
    Morphism th;
    for (auto& [g, d] : X.M.dims) th.blocks[g] = Mat::Zero(d, d);
    for (auto& [g, d] : X.M.dims) {
        auto [p, b] = g;
        Mat& out = th.blocks[g];
        for (int q = 0; q < n; ++q) {
            auto it = c.blocks.find({p, q});
            if (it == c.blocks.end() || XX.at(p, q, b) < 0) continue;
            cplx s = w(q) / w(b);
            for (int y = 0; y < X.dim(b, q); ++y)
                for (int x = 0; x < d; ++x)
                    for (int x2 = 0; x2 < d; ++x2)
                        out(x2, x) += s * it->second(XX.index(p, q, b, x2, y), XX.index(p, q, b, x, y));
        }
    }
    return th;
}

cplx WilsonCategory::trace(const Morphism& f) const {
    if (!is_simple_datum(Tolerance{}))
        throw Error("SimplenessRequired", "the trace formula needs a simple orbifold datum");
    cplx s = 0;
    for (auto& [g, b] : f.blocks)
        if (b.rows() == b.cols()) s += w(g[0]) * w(g[1]) * b.trace();
    return s / trace_psi4(d_);
}

cplx WilsonCategory::qdim(const WilsonObject& X) const { return trace(identity(X)); }

cplx WilsonCategory::twist_scalar(const WilsonObject& X, const Tolerance& tol) const {
    Morphism th = twist(X);
    cplx q = qdim(X);
    if (std::abs(q) < tol.abs_eps) throw Error("NonScalarTwist", "vanishing dimension");
    cplx lam = trace(th) / q;
    double r = 0;
    for (auto& [g, b] : th.blocks) r = std::max(r, max_abs_diff(b, lam * Mat::Identity(b.rows(), b.cols())));
    if (r > std::max(1e-6, 1e3 * tol.abs_eps)) throw Error("NonScalarTwist", "twist is not a scalar", r);
    return lam;
}

namespace {

enum class Pairing { Ev, EvTilde, Coev, CoevTilde };

Morphism pairing(const WilsonCategory& C, const WilsonObject& X, Pairing kind) {
    const int n = C.n();
    WilsonObject D = C.dual(X);
    bool dual_first = kind == Pairing::Ev || kind == Pairing::CoevTilde;
    TensorBasis TB = dual_first ? TensorBasis(D.M, X.M) : TensorBasis(X.M, D.M);
    bool out = kind == Pairing::Ev || kind == Pairing::EvTilde;
    Morphism f;
    for (int p = 0; p < n; ++p) {
        int dt = TB.size[(size_t)p * n + p];
        if (!dt) continue;
        Mat v = Mat::Zero(dt, 1);
        for (int b = 0; b < n; ++b) {
            // the paired copies of X live in X_{bp} (dual first) or X_{pb}
            int d = dual_first ? X.dim(b, p) : X.dim(p, b);
            if (!d || TB.at(p, p, b) < 0) continue;
            for (int m = 0; m < d; ++m) v(TB.index(p, p, b, m, m), 0) = C.psi(b) / C.psi(p);
        }
        f.blocks[{p, p}] = out ? Mat(v.transpose()) : v;
    }
    return f;
}

}  // namespace

Morphism WilsonCategory::ev(const WilsonObject& X) const { return pairing(*this, X, Pairing::Ev); }
Morphism WilsonCategory::ev_tilde(const WilsonObject& X) const { return pairing(*this, X, Pairing::EvTilde); }
Morphism WilsonCategory::coev(const WilsonObject& X) const { return pairing(*this, X, Pairing::Coev); }
Morphism WilsonCategory::coev_tilde(const WilsonObject& X) const { return pairing(*this, X, Pairing::CoevTilde); }

std::vector<cplx> WilsonCategory::left_trace(const Morphism& f, const WilsonObject& X) const {
    // ev o (id_{X*} (x) f) o coev~
    WilsonObject D = dual(X);
    Morphism g = compose(ev(X), compose(tensor_morphisms(identity(D), f, D, D, X, X), coev_tilde(X)));
    std::vector<cplx> out(n(), 0.0);
    for (auto& [k, b] : g.blocks)
        if (b.size()) out[k[0]] = b(0, 0);
    return out;
}

std::vector<cplx> WilsonCategory::right_trace(const Morphism& f, const WilsonObject& X) const {
    // ev~ o (f (x) id_{X*}) o coev
    WilsonObject D = dual(X);
    Morphism g = compose(ev_tilde(X), compose(tensor_morphisms(f, identity(D), X, X, D, D), coev(X)));
    std::vector<cplx> out(n(), 0.0);
    for (auto& [k, b] : g.blocks)
        if (b.size()) out[k[0]] = b(0, 0);
    return out;
}

bool WilsonCategory::is_simple_datum(const Tolerance& tol) const {
    if (!simple_) {
        WilsonObject U = unit();
        simple_ = hom_dim(U, U, tol) == 1;
    }
    return *simple_;
}

WilsonObject unit_object(const OrbifoldDatum& d) { return WilsonCategory(d).unit(); }

bool datum_is_simple(const OrbifoldDatum& d, const Tolerance& tol) { return WilsonCategory(d).is_simple_datum(tol); }

}  // namespace orbicat
