#include <algorithm>
#include <functional>

#include "orbicat/wilson.hpp"
#include "wilson_internal.hpp"

namespace orbicat {

namespace {

using detail::block;

// Variables of a composite. Labels first, then multiplicity indices.
enum Var { vL, vI, vJ, vK, vAP, vA, vD, vE, vB, vG, vH, vM0, vM1, vM2, NV };
constexpr int kFirstMult = vM0;

enum Kind { Alpha, AlphaBar, Tau, TauBar };

struct Step {
    Kind kind;
    int wh;                   // crossing leg for Tau/TauBar
    std::array<int, 4> at;    // grade variables; the fourth is unused by crossings
    int in_lab, in_m, out_lab, out_m;
};

Step alpha(std::array<int, 4> at, int in, int out) { return {Alpha, 0, at, in, -1, out, -1}; }
Step tau(int wh, std::array<int, 3> at, int in, int in_m, int out, int out_m) {
    return {Tau, wh, {at[0], at[1], at[2], -1}, in, in_m, out, out_m};
}

Step reversed(const Step& s) {
    Step r = s;
    r.kind = s.kind == Alpha ? AlphaBar : s.kind == AlphaBar ? Alpha : s.kind == Tau ? TauBar : Tau;
    std::swap(r.in_lab, r.out_lab);
    std::swap(r.in_m, r.out_m);
    return r;
}

std::vector<Step> reversed(const std::vector<Step>& p) {
    std::vector<Step> out;
    for (auto it = p.rbegin(); it != p.rend(); ++it) out.push_back(reversed(*it));
    return out;
}

std::vector<Step> cat(std::vector<Step> a, const std::vector<Step>& b) {
    a.insert(a.end(), b.begin(), b.end());
    return a;
}

struct Term {
    std::array<int, NV> v;
    cplx c;
    unsigned created;
};

using Key = std::array<int, NV>;

class PathEval {
public:
    PathEval(const WilsonCategory& C, const WilsonObject& X) : C_(C), X_(X), L_(C.layout(X)) {}

    // terms of a path applied to a source assignment; w inserted on every label
    // that is created and then consumed along the path
    std::map<Key, cplx> run(const std::vector<Step>& path, const Key& src) const {
        std::vector<Term> cur{{src, 1.0, 0u}};
        const AlphaTable& t = C_.table();
        const int n = C_.n();
        for (const Step& s : path) {
            std::vector<Term> next;
            for (const Term& tm : cur) {
                auto wt = [&](int var) -> cplx {
                    return (tm.created >> var) & 1u ? C_.w(tm.v[var]) : cplx(1.0);
                };
                unsigned cr = (tm.created & ~(1u << s.in_lab)) | (1u << s.out_lab);
                if (s.kind == Alpha || s.kind == AlphaBar) {
                    int l = tm.v[s.at[0]], i = tm.v[s.at[1]], j = tm.v[s.at[2]], k = tm.v[s.at[3]];
                    int x = tm.v[s.in_lab];
                    cplx pre = tm.c * wt(s.in_lab);
                    for (int y = 0; y < n; ++y) {
                        cplx val = s.kind == Alpha ? t.al(l, i, j, k, x, y) : t.ab(l, i, j, k, x, y);
                        if (val == 0.0) continue;
                        Term nt{tm.v, pre * val, cr};
                        nt.v[s.in_lab] = -1;
                        nt.v[s.out_lab] = y;
                        next.push_back(nt);
                    }
                    continue;
                }
                int l = tm.v[s.at[0]], i = tm.v[s.at[1]], j = tm.v[s.at[2]];
                bool bar = s.kind == TauBar;
                const Mat* A = block(detail::taus(X_, s.wh, bar), l, i, j);
                if (!A) continue;
                int in_side = bar ? s.wh : 0, out_side = bar ? 0 : s.wh;
                int x = tm.v[s.in_lab], m = tm.v[s.in_m];
                int ox = L_.off(in_side, l, i, j, x);
                if (ox < 0 || m >= grade_dim(in_side, l, i, j, x)) continue;
                cplx pre = tm.c * wt(s.in_lab);
                const auto& lab = L_.labels(out_side, l, i, j);
                for (int r = 0; r < A->rows(); ++r) {
                    cplx val = (*A)(r, ox + m);
                    if (val == 0.0) continue;
                    Term nt{tm.v, pre * val, cr & ~(1u << s.out_m)};
                    nt.v[s.in_lab] = -1;
                    nt.v[s.in_m] = -1;
                    nt.v[s.out_lab] = lab[r];
                    nt.v[s.out_m] = r - L_.off(out_side, l, i, j, lab[r]);
                    next.push_back(nt);
                }
            }
            cur.swap(next);
        }
        std::map<Key, cplx> out;
        for (auto& tm : cur) out[tm.v] += tm.c;
        return out;
    }

    int grade_dim(int side, int l, int i, int j, int x) const {
        if (side == 0) return L_.dim(l, x);
        return L_.dim(x, side == 1 ? i : j);
    }
    int max_dim() const {
        int m = 0;
        for (auto& [g, d] : X_.M.dims) m = std::max(m, d);
        return m;
    }

private:
    const WilsonCategory& C_;
    const WilsonObject& X_;
    Layout L_;
};

double diff(const std::map<Key, cplx>& a, const std::map<Key, cplx>& b) {
    double r = 0;
    for (auto& [k, v] : a) {
        auto it = b.find(k);
        r = std::max(r, std::abs(v - (it == b.end() ? cplx(0) : it->second)));
    }
    for (auto& [k, v] : b)
        if (!a.count(k)) r = std::max(r, std::abs(v));
    return r;
}

// Residual of lhs = rhs over every source assignment.
double identity_residual(const PathEval& ev, int n, const std::vector<Step>& lhs, const std::vector<Step>& rhs) {
    // variables read before they are written
    std::vector<int> src;
    unsigned known = 0;
    auto need = [&](int v) {
        if (v >= 0 && !((known >> v) & 1u)) {
            src.push_back(v);
            known |= 1u << v;
        }
    };
    for (const Step& s : lhs) {
        for (int a : s.at) need(a);
        need(s.in_lab);
        need(s.in_m);
        known |= 1u << s.out_lab;
        if (s.out_m >= 0) known |= 1u << s.out_m;
    }
    const int md = ev.max_dim();
    std::vector<int> radix;
    for (int v : src) radix.push_back(v >= kFirstMult ? md : n);
    std::vector<double> part(n, 0.0);
    // split on the first source variable
    parallel_for(n, [&](int first) {
        std::vector<int> cnt(src.size(), 0);
        if (src.empty() || radix[0] <= first) return;
        cnt[0] = first;
        while (true) {
            Key key;
            key.fill(-1);
            for (size_t x = 0; x < src.size(); ++x) key[src[x]] = cnt[x];
            auto a = ev.run(lhs, key);
            auto b = ev.run(rhs, key);
            part[first] = std::max(part[first], diff(a, b));
            size_t p = 1;
            while (p < src.size() && ++cnt[p] == radix[p]) cnt[p++] = 0;
            if (p == src.size()) break;
        }
    });
    return *std::max_element(part.begin(), part.end());
}

struct Family {
    Step as;
    std::vector<Step> X, Y;
    Step at;
};

std::vector<Family> families() {
    std::vector<Family> f;
    Step as = alpha({vAP, vI, vJ, vK}, vA, vD);
    f.push_back({as,
                 {tau(1, {vL, vD, vK}, vAP, vM0, vE, vM1), tau(1, {vE, vI, vJ}, vD, vM1, vB, vM2)},
                 {tau(1, {vL, vI, vA}, vAP, vM0, vB, vM2)},
                 alpha({vL, vB, vJ, vK}, vA, vE)});
    f.push_back({as,
                 {tau(1, {vL, vD, vK}, vAP, vM0, vE, vM1), tau(2, {vE, vI, vJ}, vD, vM1, vH, vM2)},
                 {tau(2, {vL, vI, vA}, vAP, vM0, vG, vM1), tau(1, {vG, vJ, vK}, vA, vM1, vH, vM2)},
                 alpha({vL, vI, vH, vK}, vG, vE)});
    f.push_back({as,
                 {tau(2, {vL, vD, vK}, vAP, vM0, vB, vM2)},
                 {tau(2, {vL, vI, vA}, vAP, vM0, vG, vM1), tau(2, {vG, vJ, vK}, vA, vM1, vB, vM2)},
                 alpha({vL, vI, vJ, vB}, vG, vD)});
    return f;
}

}  // namespace

ConditionReport WilsonCategory::check(const WilsonObject& X, const Tolerance& tol) const {
    const int n = this->n();
    if (X.M.n != n) throw Error("GradeMismatch", "object index set differs from datum");
    Layout L = layout(X);
    for (int wh = 1; wh <= 2; ++wh)
        for (int bar = 0; bar < 2; ++bar)
            for (auto& [g, A] : detail::taus(X, wh, bar)) {
                auto [l, i, j] = g;
                int r = L.size(bar ? 0 : wh, l, i, j), c = L.size(bar ? wh : 0, l, i, j);
                if (A.rows() != r || A.cols() != c) throw Error("GradeMismatch", "crossing block shape");
            }

    ConditionReport rep;
    rep.tol = tol;
    PathEval ev(*this, X);
    auto fam = families();
    double base[3], p[3], b[3], bp[3];
    for (int f = 0; f < 3; ++f) {
        const Family& F = fam[f];
        base[f] = identity_residual(ev, n, cat({F.as}, F.X), cat(F.Y, {F.at}));
        p[f] = identity_residual(ev, n, cat(F.X, {reversed(F.at)}), cat({reversed(F.as)}, F.Y));
        b[f] = identity_residual(ev, n, cat({F.at}, reversed(F.X)), cat(reversed(F.Y), {F.as}));
        bp[f] = identity_residual(ev, n, cat(reversed(F.X), {reversed(F.as)}), cat({reversed(F.at)}, reversed(F.Y)));
    }
    rep.add("T1", base[0]);
    rep.add("T2", base[1]);
    rep.add("T3", base[2]);

    // T4, T5: the crossings are pseudo-inverse with w on the internal labels
    double r4 = 0, r5 = 0;
    for (int wh = 1; wh <= 2; ++wh)
        for (int l = 0; l < n; ++l)
            for (int i = 0; i < n; ++i)
                for (int j = 0; j < n; ++j) {
                    int s0 = L.size(0, l, i, j), s1 = L.size(wh, l, i, j);
                    if (!s0 && !s1) continue;
                    const Mat* t = block(detail::taus(X, wh, false), l, i, j);
                    const Mat* tb = block(detail::taus(X, wh, true), l, i, j);
                    if (!t || !tb) {
                        r4 = r5 = std::max(r4, 1.0);
                        continue;
                    }
                    Vec w0(s0), w1(s1);
                    for (int x = 0; x < s0; ++x) w0(x) = w(L.labels(0, l, i, j)[x]);
                    for (int x = 0; x < s1; ++x) w1(x) = w(L.labels(wh, l, i, j)[x]);
                    Mat a = w0.asDiagonal() * (*tb) * w1.asDiagonal() * (*t);
                    Mat c = w1.asDiagonal() * (*t) * w0.asDiagonal() * (*tb);
                    r4 = std::max(r4, max_abs_diff(a, Mat::Identity(s0, s0)));
                    r5 = std::max(r5, max_abs_diff(c, Mat::Identity(s1, s1)));
                }
    rep.add("T4", r4);
    rep.add("T5", r5);

    // T6: sum over the outer label; T7: sum over the crossed leg
    double r6 = 0, r7 = 0;
    for (int wh = 1; wh <= 2; ++wh) {
        auto entry = [&](bool bar, int l, int i, int j, int a, int m0, int b, int m) -> cplx {
            const Mat* A = block(detail::taus(X, wh, bar), l, i, j);
            int oa = L.off(0, l, i, j, a), ob = L.off(wh, l, i, j, b);
            if (!A || oa < 0 || ob < 0) return 0.0;
            return bar ? (*A)(oa + m0, ob + m) : (*A)(ob + m, oa + m0);
        };
        for (int a = 0; a < n; ++a)
            for (int b = 0; b < n; ++b)
                for (int x = 0; x < n; ++x)
                    for (int y = 0; y < n; ++y)
                        for (int yp = 0; yp < n; ++yp) {
                            int i = wh == 1 ? y : x, j = wh == 1 ? x : y;
                            int ib = wh == 1 ? yp : x, jb = wh == 1 ? x : yp;
                            int dm = X.dim(b, y), dmp = X.dim(b, yp);
                            if (!dm || !dmp) continue;
                            Mat acc = Mat::Zero(dm, dmp);
                            bool any = false;
                            for (int l = 0; l < n; ++l) {
                                if (L.off(0, l, i, j, a) < 0 || L.off(0, l, ib, jb, a) < 0) continue;
                                if (L.off(wh, l, i, j, b) < 0 || L.off(wh, l, ib, jb, b) < 0) continue;
                                any = true;
                                for (int m0 = 0; m0 < X.dim(l, a); ++m0)
                                    for (int m = 0; m < dm; ++m)
                                        for (int mp = 0; mp < dmp; ++mp)
                                            acc(m, mp) += w(l) * entry(false, l, i, j, a, m0, b, m) *
                                                          entry(true, l, ib, jb, a, m0, b, mp);
                            }
                            if (!any) continue;
                            for (int m = 0; m < dm; ++m)
                                for (int mp = 0; mp < dmp; ++mp) {
                                    cplx want = (y == yp && m == mp) ? 1.0 / w(y) : 0.0;
                                    r6 = std::max(r6, std::abs(acc(m, mp) - want));
                                }
                        }
        for (int l = 0; l < n; ++l)
            for (int lp = 0; lp < n; ++lp)
                for (int a = 0; a < n; ++a)
                    for (int b = 0; b < n; ++b)
                        for (int x = 0; x < n; ++x) {
                            int d0 = X.dim(l, a), d1 = X.dim(lp, a);
                            if (!d0 || !d1) continue;
                            Mat acc = Mat::Zero(d0, d1);
                            bool any = false;
                            for (int s = 0; s < n; ++s) {
                                int i = wh == 1 ? s : x, j = wh == 1 ? x : s;
                                if (L.off(0, l, i, j, a) < 0 || L.off(0, lp, i, j, a) < 0) continue;
                                if (L.off(wh, l, i, j, b) < 0 || L.off(wh, lp, i, j, b) < 0) continue;
                                any = true;
                                int dmm = X.dim(b, wh == 1 ? i : j);
                                for (int mm = 0; mm < dmm; ++mm)
                                    for (int m0 = 0; m0 < d0; ++m0)
                                        for (int m1 = 0; m1 < d1; ++m1)
                                            acc(m0, m1) += w(s) * entry(false, l, i, j, a, m0, b, mm) *
                                                           entry(true, lp, i, j, a, m1, b, mm);
                            }
                            if (!any) continue;
                            for (int m0 = 0; m0 < d0; ++m0)
                                for (int m1 = 0; m1 < d1; ++m1) {
                                    cplx want = (l == lp && m0 == m1) ? 1.0 / w(l) : 0.0;
                                    r7 = std::max(r7, std::abs(acc(m0, m1) - want));
                                }
                        }
    }
    rep.add("T6", r6);
    rep.add("T7", r7);
    const char* pn[3] = {"T8'", "T9'", "T10'"};
    const char* bn[3] = {"T11'", "T12'", "T13'"};
    const char* bpn[3] = {"T14'", "T15'", "T16'"};
    for (int f = 0; f < 3; ++f) rep.add(pn[f], p[f]);
    for (int f = 0; f < 3; ++f) rep.add(bn[f], b[f]);
    for (int f = 0; f < 3; ++f) rep.add(bpn[f], bp[f]);
    return rep;
}

ConditionReport check_wilson(const WilsonObject& X, const OrbifoldDatum& d, const Tolerance& tol) {
    return WilsonCategory(d).check(X, tol);
}

}  // namespace orbicat
