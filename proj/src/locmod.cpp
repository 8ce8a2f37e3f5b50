#include <algorithm>
#include <cmath>
#include <numbers>

#include <unsupported/Eigen/KroneckerProduct>

#include "fcache.hpp"
#include "orbicat/locmod.hpp"

namespace orbicat {

using detail::FCache;

bool AlgebraInMFC::contains(int a) const { return std::find(support.begin(), support.end(), a) != support.end(); }

cplx AlgebraInMFC::m(int a, int b, int c) const {
    auto it = mult.find({a, b, c});
    return it == mult.end() ? cplx(0) : it->second;
}

cplx FrobeniusStructure::d(int c, int a, int b) const {
    auto it = delta.find({c, a, b});
    return it == delta.end() ? cplx(0) : it->second;
}

int ModuleInMFC::count(int x) const { return (int)std::count(copies.begin(), copies.end(), x); }

namespace {

void validate(const SkeletalCategory& cat, const AlgebraInMFC& alg) {
    if (!cat.multiplicity_free()) throw Error("MultiplicityUnsupported", "local modules need a multiplicity-free category");
    if (!cat.has_R) throw Error("MalformedAlgebra", "the category has no braiding");
    const int n = cat.n();
    std::vector<int> s = alg.support;
    std::sort(s.begin(), s.end());
    if (std::adjacent_find(s.begin(), s.end()) != s.end()) throw Error("MalformedAlgebra", "repeated support label");
    for (int a : s)
        if (a < 0 || a >= n) throw Error("MalformedAlgebra", "support label out of range");
    if (s.empty() || s[0] != 0) throw Error("MalformedAlgebra", "support must contain the unit label");
    for (auto& [k, v] : alg.mult) {
        auto [a, b, c] = k;
        if (!alg.contains(a) || !alg.contains(b) || !alg.contains(c))
            throw Error("MalformedAlgebra", "multiplication index outside the support");
        if (!cat.N(a, b, c)) throw Error("MalformedAlgebra", "multiplication on a forbidden channel");
        if (!std::isfinite(v.real()) || !std::isfinite(v.imag())) throw Error("MalformedAlgebra", "non-finite entry");
    }
}

cplx theta(const SkeletalCategory& cat, int a) {
    if (!cat.twist.empty()) return cat.twist[a];
    cplx s = 0;
    for (int c = 0; c < cat.n(); ++c)
        if (cat.N(a, a, c)) s += cat.qdim[c] * cat.r(a, a, c);
    return s / cat.qdim[a];
}

cplx dim_A(const SkeletalCategory& cat, const AlgebraInMFC& alg) {
    cplx d = 0;
    for (int a : alg.support) d += cat.qdim[a];
    return d;
}

// position of a copy among the copies with the same label
std::vector<int> local_index(const std::vector<int>& copies) {
    std::vector<int> out(copies.size());
    std::map<int, int> seen;
    for (size_t k = 0; k < copies.size(); ++k) out[k] = seen[copies[k]]++;
    return out;
}

const Mat* act(const ModuleInMFC& M, int a, int x, int w) {
    auto it = M.action.find({a, x, w});
    return it == M.action.end() ? nullptr : &it->second;
}

std::vector<int> labels_of(const ModuleInMFC& M) {
    std::vector<int> l = M.copies;
    l.erase(std::unique(l.begin(), l.end()), l.end());
    return l;
}

// block offsets of grade-preserving maps M -> N, blocks column-major
struct HomLayout {
    std::map<int, int> off;
    int total = 0;
    HomLayout(const ModuleInMFC& M, const ModuleInMFC& N, int n) {
        for (int z = 0; z < n; ++z) {
            int r = N.count(z), c = M.count(z);
            if (!r || !c) continue;
            off[z] = total;
            total += r * c;
        }
    }
};

Mat hom_equations(const SkeletalCategory& cat, const AlgebraInMFC& alg, const ModuleInMFC& M, const ModuleInMFC& N,
                  const HomLayout& H) {
    const int n = cat.n();
    std::vector<Mat> rows;
    Eigen::Index nr = 0;
    for (int a : alg.support)
        for (int x = 0; x < n; ++x)
            for (int w = 0; w < n; ++w) {
                if (!cat.N(a, x, w)) continue;
                const Mat* rm = act(M, a, x, w);
                const Mat* rn = act(N, a, x, w);
                int mx = M.count(x), mw = M.count(w), nx = N.count(x), nw = N.count(w);
                if (!nw || !mx) continue;
                // f_w r_M - r_N f_x, an nw x mx block
                Mat E = Mat::Zero(nw * mx, H.total);
                if (rm && H.off.count(w)) {
                    Mat k = Eigen::kroneckerProduct(rm->transpose(), Mat::Identity(nw, nw));
                    E.middleCols(H.off.at(w), nw * mw) += k;
                }
                if (rn && H.off.count(x)) {
                    Mat k = Eigen::kroneckerProduct(Mat::Identity(mx, mx), *rn);
                    E.middleCols(H.off.at(x), nx * mx) -= k;
                }
                nr += E.rows();
                rows.push_back(std::move(E));
            }
    Mat A(nr, H.total);
    Eigen::Index r = 0;
    for (auto& E : rows) {
        A.middleRows(r, E.rows()) = E;
        r += E.rows();
    }
    return A;
}

Mat hom_space(const SkeletalCategory& cat, const AlgebraInMFC& alg, const ModuleInMFC& M, const ModuleInMFC& N,
              const HomLayout& H, const Tolerance& tol) {
    if (H.total == 0) return Mat(0, 0);
    Mat A = hom_equations(cat, alg, M, N, H);
    if (A.rows() == 0) return Mat::Identity(H.total, H.total);
    return nullspace(A, tol);
}

Mat to_full(const Vec& v, const ModuleInMFC& M, const HomLayout& H, int n) {
    int d = (int)M.copies.size();
    Mat F = Mat::Zero(d, d);
    int o = 0;
    for (int z = 0; z < n; ++z) {
        int c = M.count(z);
        if (!c) continue;
        for (int col = 0; col < c; ++col)
            for (int row = 0; row < c; ++row) F(o + row, o + col) = v(H.off.at(z) + col * c + row);
        o += c;
    }
    return F;
}

ModuleInMFC retract(const ModuleInMFC& M, const Mat& e, int n, const Tolerance& tol) {
    std::map<int, Split> sp;
    ModuleInMFC R;
    int o = 0;
    for (int z = 0; z < n; ++z) {
        int c = M.count(z);
        if (!c) continue;
        Split s = split_idempotent(e.block(o, o, c, c), tol);
        for (int k = 0; k < s.embed.cols(); ++k) R.copies.push_back(z);
        sp[z] = std::move(s);
        o += c;
    }
    for (auto& [k, r] : M.action) {
        auto [a, x, w] = k;
        const Split &sx = sp.at(x), &sw = sp.at(w);
        if (!sx.embed.cols() || !sw.embed.cols()) continue;
        R.action[k] = sw.retract * r * sx.embed;
    }
    return R;
}

long long rnd(double v) { return std::llround(v * 1e6); }

}  // namespace

AlgebraInMFC normalised(const AlgebraInMFC& alg, cplx* factor) {
    AlgebraInMFC out = alg;
    cplx u = alg.m(0, 0, 0);
    if (std::abs(u) < 1e-300) throw Error("MalformedAlgebra", "m(0,0,0) vanishes");
    for (auto& [k, v] : out.mult) v /= u;
    if (factor) *factor = 1.0 / u;
    return out;
}

FrobeniusStructure frobenius_structure(const SkeletalCategory& cat, const AlgebraInMFC& in) {
    validate(cat, in);
    FrobeniusStructure fs;
    AlgebraInMFC alg = normalised(in, &fs.rescale);
    const int n = cat.n();
    const auto& S = alg.support;
    FCache F(cat);
    std::map<std::array<int, 3>, int> var;
    for (int c : S)
        for (int a : S)
            for (int b : S)
                if (cat.N(a, b, c)) var[{c, a, b}] = (int)var.size();
    const int nv = (int)var.size();
    auto at = [&](int c, int a, int b) {
        auto it = var.find({c, a, b});
        return it == var.end() ? -1 : it->second;
    };
    std::vector<std::vector<std::pair<int, cplx>>> eqs;
    std::vector<cplx> rhs;
    for (int a : S)
        for (int b : S)
            for (int c : S)
                for (int d : S)
                    for (int e = 0; e < n; ++e) {
                        if (!cat.N(a, b, e) || !cat.N(c, d, e)) continue;
                        // Delta o mu against (id (x) mu)(Delta (x) id) and (mu (x) id)(id (x) Delta)
                        for (int form = 0; form < 2; ++form) {
                            std::vector<std::pair<int, cplx>> row;
                            if (alg.contains(e)) row.push_back({at(e, c, d), alg.m(a, b, e)});
                            for (int f : S) {
                                if (form == 0) {
                                    int v = at(a, c, f);
                                    if (v < 0 || !cat.N(f, b, d)) continue;
                                    row.push_back({v, -F.f(c, f, b, e, a, d) * alg.m(f, b, d)});
                                } else {
                                    int v = at(b, f, d);
                                    if (v < 0 || !cat.N(a, f, c)) continue;
                                    row.push_back({v, -F.finv(a, f, d, e, b, c) * alg.m(a, f, c)});
                                }
                            }
                            eqs.push_back(std::move(row));
                            rhs.push_back(0.0);
                        }
                    }
    const size_t nfrob = eqs.size();
    for (int c : S) {
        std::vector<std::pair<int, cplx>> row;
        for (int a : S)
            for (int b : S)
                if (int v = at(c, a, b); v >= 0) row.push_back({v, alg.m(a, b, c)});
        eqs.push_back(std::move(row));
        rhs.push_back(1.0);
    }
    Mat A = Mat::Zero((Eigen::Index)eqs.size(), nv);
    Vec y(eqs.size());
    for (size_t r = 0; r < eqs.size(); ++r) {
        for (auto [v, c] : eqs[r]) A(r, v) += c;
        y(r) = rhs[r];
    }
    Vec x = A.completeOrthogonalDecomposition().solve(y);
    Vec res = A * x - y;
    for (size_t r = 0; r < eqs.size(); ++r) {
        double v = std::abs(res(r));
        if (r < nfrob)
            fs.frobenius_residual = std::max(fs.frobenius_residual, v);
        else
            fs.separability_residual = std::max(fs.separability_residual, v);
    }
    for (auto& [k, v] : var) fs.delta[k] = x(v);
    cplx d0 = fs.d(0, 0, 0);
    fs.eps0 = std::abs(d0) > 1e-300 ? 1.0 / d0 : cplx(0);
    for (int a : S) {
        fs.counit_residual = std::max(fs.counit_residual, std::abs(fs.eps0 * fs.d(a, 0, a) - 1.0));
        fs.counit_residual = std::max(fs.counit_residual, std::abs(fs.eps0 * fs.d(a, a, 0) - 1.0));
    }
    return fs;
}

ConditionReport check_algebra(const SkeletalCategory& cat, const AlgebraInMFC& in, const Tolerance& tol) {
    FrobeniusStructure fs = frobenius_structure(cat, in);
    AlgebraInMFC alg = normalised(in);
    const int n = cat.n();
    const auto& S = alg.support;
    FCache F(cat);
    double assoc = 0, unit = 0, comm = 0, sym = 0, tw = 0;
    for (int a : S)
        for (int b : S)
            for (int c : S)
                for (int d : S)
                    for (int e = 0; e < n; ++e) {
                        if (!cat.N(a, b, e) || !cat.N(e, c, d)) continue;
                        cplx lhs = alg.contains(e) ? alg.m(a, b, e) * alg.m(e, c, d) : cplx(0);
                        cplx rhs = 0;
                        for (int f : S)
                            if (cat.N(b, c, f) && cat.N(a, f, d)) rhs += F.f(a, b, c, d, e, f) * alg.m(b, c, f) * alg.m(a, f, d);
                        assoc = std::max(assoc, std::abs(lhs - rhs));
                    }
    for (int a : S) {
        unit = std::max({unit, std::abs(alg.m(0, a, a) - 1.0), std::abs(alg.m(a, 0, a) - 1.0)});
        tw = std::max(tw, std::abs(theta(cat, a) - 1.0));
        int ad = cat.dual[a];
        cplx nu = cat.qdim[a] * cat.f(a, ad, a, a, 0, 0);
        sym = std::max(sym, std::abs(alg.m(a, ad, 0) - nu * alg.m(ad, a, 0)));
        for (int b : S)
            for (int c : S)
                if (cat.N(a, b, c)) comm = std::max(comm, std::abs(alg.m(a, b, c) - cat.r(a, b, c) * alg.m(b, a, c)));
    }
    ConditionReport rep;
    rep.tol = tol;
    double thr = std::max(1e-8, tol.abs_eps);
    rep.add("associativity", assoc, thr);
    rep.add("unit", std::max(unit, fs.counit_residual), thr);
    rep.add("commutativity", comm, thr);
    rep.add("frobenius", fs.frobenius_residual, thr);
    rep.add("delta_separability", fs.separability_residual, thr);
    rep.add("symmetry", sym, thr);
    rep.add("haploid", alg.contains(0) ? 0.0 : 1.0, thr);
    rep.add("twist_trivial", tw, thr);
    rep.info["rescale"] = fs.rescale.real();
    return rep;
}

ModuleInMFC induced_module(const SkeletalCategory& cat, const AlgebraInMFC& in, int x) {
    validate(cat, in);
    AlgebraInMFC alg = normalised(in);
    const int n = cat.n();
    FCache F(cat);
    // copies (a,y) with y in a x, sorted by y then a
    std::vector<std::pair<int, int>> cp;
    for (int y = 0; y < n; ++y)
        for (int a : alg.support)
            if (cat.N(a, x, y)) cp.push_back({y, a});
    std::sort(cp.begin(), cp.end());
    ModuleInMFC M;
    for (auto [y, a] : cp) M.copies.push_back(y);
    auto li = local_index(M.copies);
    for (int b : alg.support)
        for (size_t s = 0; s < cp.size(); ++s)
            for (size_t t = 0; t < cp.size(); ++t) {
                auto [y, a] = cp[s];
                auto [w, c] = cp[t];
                if (!cat.N(b, y, w) || !cat.N(b, a, c)) continue;
                cplx v = F.finv(b, a, x, w, y, c) * alg.m(b, a, c);
                if (v == 0.0) continue;
                Mat& blk = M.action[{b, y, w}];
                if (blk.size() == 0) blk = Mat::Zero(M.count(w), M.count(y));
                blk(li[t], li[s]) += v;
            }
    M.locality = locality_residual(cat, in, M);
    return M;
}

double module_residual(const SkeletalCategory& cat, const AlgebraInMFC& in, const ModuleInMFC& M) {
    AlgebraInMFC alg = normalised(in);
    const int n = cat.n();
    FCache F(cat);
    double r = 0;
    for (int x : labels_of(M)) {
        int mx = M.count(x);
        if (const Mat* u = act(M, 0, x, x)) r = std::max(r, max_abs_diff(*u, Mat::Identity(mx, mx)));
        else r = std::max(r, 1.0);
        for (int w = 0; w < n; ++w) {
            int mw = M.count(w);
            if (!mw) continue;
            for (int a : alg.support)
                for (int b : alg.support)
                    for (int e = 0; e < n; ++e) {
                        if (!cat.N(a, b, e) || !cat.N(e, x, w)) continue;
                        Mat lhs = Mat::Zero(mw, mx);
                        if (alg.contains(e))
                            if (const Mat* re = act(M, e, x, w)) lhs = alg.m(a, b, e) * *re;
                        Mat rhs = Mat::Zero(mw, mx);
                        for (int f = 0; f < n; ++f) {
                            const Mat* r1 = act(M, b, x, f);
                            const Mat* r2 = act(M, a, f, w);
                            if (!r1 || !r2 || !cat.N(a, f, w)) continue;
                            rhs += F.f(a, b, x, w, e, f) * (*r2) * (*r1);
                        }
                        r = std::max(r, max_abs_diff(lhs, rhs));
                    }
        }
    }
    return r;
}

double locality_residual(const SkeletalCategory& cat, const AlgebraInMFC&, const ModuleInMFC& M) {
    double scale = 0, r1 = 0, r2 = 0;
    for (auto& [k, r] : M.action) {
        auto [a, x, w] = k;
        double nr = max_abs(r);
        scale = std::max(scale, nr);
        cplx nu = cat.r(x, a, w) * cat.r(a, x, w);
        r1 = std::max(r1, nr * std::abs(nu - 1.0));
        if (std::abs(nu) > 0) r2 = std::max(r2, nr * std::abs(1.0 / nu - 1.0));
    }
    if (scale == 0) return 0;
    return std::max(r1, r2) / scale;
}

int module_hom_dim(const SkeletalCategory& cat, const AlgebraInMFC& alg, const ModuleInMFC& M, const ModuleInMFC& N,
                   const Tolerance& tol) {
    HomLayout H(M, N, cat.n());
    return (int)hom_space(cat, alg, M, N, H, tol).cols();
}

std::vector<ModuleInMFC> simple_modules(const SkeletalCategory& cat, const AlgebraInMFC& alg, std::uint64_t seed,
                                        const Tolerance& tol) {
    validate(cat, alg);
    const int n = cat.n();
    std::vector<std::vector<ModuleInMFC>> parts(n);
    parallel_for(n, [&](int x) {
        ModuleInMFC I = induced_module(cat, alg, x);
        HomLayout H(I, I, n);
        Mat B = hom_space(cat, alg, I, I, H, tol);
        std::vector<Mat> basis;
        for (int c = 0; c < B.cols(); ++c) basis.push_back(to_full(B.col(c), I, H, n));
        for (const Mat& e : primitive_idempotents(basis, seed + 7919ULL * (std::uint64_t)x, tol)) {
            ModuleInMFC R = retract(I, e, n, tol);
            if (R.copies.empty()) continue;
            R.locality = locality_residual(cat, alg, R);
            parts[x].push_back(std::move(R));
        }
    });
    std::vector<ModuleInMFC> out;
    for (auto& p : parts)
        for (auto& R : p) {
            bool seen = false;
            for (auto& K : out)
                if (module_hom_dim(cat, alg, K, R, tol) > 0) {
                    seen = true;
                    break;
                }
            if (!seen) out.push_back(std::move(R));
        }
    return out;
}

std::vector<ModuleInMFC> local_modules(const SkeletalCategory& cat, const AlgebraInMFC& alg, std::uint64_t seed,
                                       const Tolerance& tol) {
    std::vector<ModuleInMFC> out;
    for (auto& M : simple_modules(cat, alg, seed, tol))
        if (M.locality <= std::max(1e-8, tol.abs_eps * 10)) out.push_back(std::move(M));
    cplx dA = dim_A(cat, alg);
    auto key = [&](const ModuleInMFC& M) {
        cplx q = 0;
        for (int c : M.copies) q += cat.qdim[c];
        double arg = std::arg(theta(cat, M.copies[0]));
        if (arg < 0) arg += 2 * std::numbers::pi;
        if (arg > 2 * std::numbers::pi - 1e-7) arg = 0;
        return std::make_tuple(M.copies[0] != 0, rnd((q / dA).real()), rnd(arg), M.copies);
    };
    std::stable_sort(out.begin(), out.end(), [&](const ModuleInMFC& a, const ModuleInMFC& b) { return key(a) < key(b); });
    return out;
}

ModularData locmod_modular_data(const SkeletalCategory& cat, const AlgebraInMFC& in,
                                const std::vector<ModuleInMFC>& simples) {
    FrobeniusStructure fs = frobenius_structure(cat, in);
    AlgebraInMFC alg = normalised(in);
    const int n = cat.n();
    const int m = (int)simples.size();
    FCache F(cat);
    cplx dA = dim_A(cat, alg);
    ModularData md;
    md.smatrix = Mat::Zero(m, m);
    md.global_dim = 0.0;
    for (int k = 0; k < m; ++k) {
        const ModuleInMFC& M = simples[k];
        md.labels.push_back(k == 0 ? "1" : "L" + std::to_string(k));
        cplx q = 0;
        for (int c : M.copies) q += cat.qdim[c];
        md.qdim.push_back(q / dA);
        md.tdiag.push_back(theta(cat, M.copies[0]));
        md.global_dim += (q / dA) * (q / dA);
    }
    // S_MN = tr_C(P o c c) / dim A, P the projector of M (x) N onto M (x)_A N
    for (int s = 0; s < m; ++s)
        for (int t = 0; t < m; ++t) {
            const ModuleInMFC &M = simples[s], &N = simples[t];
            auto lm = local_index(M.copies), ln = local_index(N.copies);
            cplx tr = 0;
            for (int w = 0; w < n; ++w) {
                std::vector<std::array<int, 2>> basis;  // copy indices (alpha, beta)
                for (int al = 0; al < (int)M.copies.size(); ++al)
                    for (int be = 0; be < (int)N.copies.size(); ++be)
                        if (cat.N(M.copies[al], N.copies[be], w)) basis.push_back({al, be});
                if (basis.empty()) continue;
                for (auto [al, be] : basis) {
                    int x = M.copies[al], y = N.copies[be];
                    cplx mono = cat.r(y, x, w) * cat.r(x, y, w);
                    // diagonal entry of P at (al, be)
                    cplx p = 0;
                    for (int a : alg.support) {
                        int ad = cat.dual[a];
                        cplx dl = fs.d(0, a, ad);
                        if (dl == 0.0) continue;
                        const Mat* rn = act(N, ad, y, y);
                        const Mat* rm = act(M, a, x, x);
                        if (!rn || !rm) continue;
                        p += dl * F.f(a, ad, y, y, 0, y) * (*rn)(ln[be], ln[be]) * F.finv(x, a, y, w, y, x) *
                             cat.r(x, a, x) * (*rm)(lm[al], lm[al]);
                    }
                    tr += cat.qdim[w] * p * mono;
                }
            }
            md.smatrix(s, t) = tr / dA;
        }
    cplx dimC = global_dimension(cat);
    cplx expect = dimC / (dA * dA);
    double rel = std::abs(md.global_dim - expect) / std::abs(expect);
    if (rel > 1e-6) throw Error("DimensionMismatch", "sum of squared dimensions differs from Dim C / dim(A)^2", rel);
    return md;
}

}  // namespace orbicat
