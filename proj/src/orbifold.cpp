#include "orbicat/orbifold.hpp"

#include <algorithm>
#include <cmath>

namespace orbicat {

bool OrbifoldDatum::multiplicity_free() const {
    return std::all_of(T.dims.begin(), T.dims.end(), [](auto& kv) { return kv.second <= 1; });
}

AlphaTable::AlphaTable(const OrbifoldDatum& d) : n_(d.n()) {
    const size_t n6 = (size_t)n_ * n_ * n_ * n_ * n_ * n_;
    t_.assign((size_t)n_ * n_ * n_, 0);
    for (auto& [g, dim] : d.T.dims) t_[((size_t)g[0] * n_ + g[1]) * n_ + g[2]] = dim > 0;
    al_.assign(n6, 0.0);
    ab_.assign(n6, 0.0);
    for (auto& [k, blk] : d.alpha)
        for (size_t r = 0; r < blk.rows.size(); ++r)
            for (size_t c = 0; c < blk.cols.size(); ++c)
                al_[idx(k[0], k[1], k[2], k[3], blk.cols[c], blk.rows[r])] = blk.val(r, c);
    for (auto& [k, blk] : d.alpha_bar)
        for (size_t r = 0; r < blk.rows.size(); ++r)
            for (size_t c = 0; c < blk.cols.size(); ++c)
                ab_[idx(k[0], k[1], k[2], k[3], blk.cols[c], blk.rows[r])] = blk.val(r, c);
    psi_ = d.psi;
    for (auto p : psi_) w_.push_back(p * p);
}

std::vector<int> AlphaTable::source_channels(int l, int i, int j, int k) const {
    std::vector<int> out;
    for (int a = 0; a < n_; ++a)
        if (T(l, i, a) && T(a, j, k)) out.push_back(a);
    return out;
}

std::vector<int> AlphaTable::target_channels(int l, int i, int j, int k) const {
    std::vector<int> out;
    for (int b = 0; b < n_; ++b)
        if (T(l, b, k) && T(b, i, j)) out.push_back(b);
    return out;
}

void validate_datum(const OrbifoldDatum& d) {
    const int n = d.n();
    if (n == 0) throw Error("MalformedDatum", "no labels");
    if (d.T.n != n) throw Error("MalformedDatum", "T index set differs from labels");
    if ((int)d.psi.size() != n) throw Error("MalformedDatum", "psi arity");
    for (auto p : d.psi)
        if (std::abs(p) == 0.0 || !std::isfinite(std::abs(p))) throw Error("MalformedDatum", "psi not invertible");
    if (std::abs(d.phi) == 0.0 || !std::isfinite(std::abs(d.phi))) throw Error("MalformedDatum", "phi not invertible");
    if (!d.multiplicity_free())
        throw Error("MultiplicityUnsupported", "T blocks of dimension greater than one");
    OrbifoldDatum probe;
    probe.labels = d.labels;
    probe.T = d.T;
    probe.psi = d.psi;
    AlphaTable t(probe);
    auto check = [&](const std::map<Key4, AlphaBlock>& m, bool bar, const char* what) {
        for (auto& [k, blk] : m) {
            for (int x : k)
                if (x < 0 || x >= n) throw Error("MalformedDatum", std::string(what) + " index out of range");
            auto src = t.source_channels(k[0], k[1], k[2], k[3]);
            auto tgt = t.target_channels(k[0], k[1], k[2], k[3]);
            const auto& rows = bar ? src : tgt;
            const auto& cols = bar ? tgt : src;
            if (blk.rows != rows || blk.cols != cols || blk.val.rows() != (int)rows.size() ||
                blk.val.cols() != (int)cols.size())
                throw Error("MalformedDatum", std::string(what) + " block grades do not match T");
            if (!all_finite(blk.val)) throw Error("MalformedDatum", std::string(what) + " has non-finite entries");
        }
    };
    check(d.alpha, false, "alpha");
    check(d.alpha_bar, true, "alpha_bar");
}

namespace {

enum Slot { O1, O2, O3, O4, O5, O6, O7, O9p, O10p, NSLOT };

void o1(const AlphaTable& t, int i, double* r) {
    const int n = t.n();
    // ((ij)_p k)_q m)_l against (i(j(km)_s)_t)_l: two moves versus three with w on the new label
    for (int j = 0; j < n; ++j)
        for (int k = 0; k < n; ++k)
            for (int m = 0; m < n; ++m)
                for (int l = 0; l < n; ++l)
                    for (int s = 0; s < n; ++s) {
                        if (!t.T(s, k, m)) continue;
                        for (int tt = 0; tt < n; ++tt) {
                            if (!t.T(tt, j, s) || !t.T(l, i, tt)) continue;
                            for (int p = 0; p < n; ++p) {
                                if (!t.T(p, i, j)) continue;
                                for (int q = 0; q < n; ++q) {
                                    if (!t.T(q, p, k) || !t.T(l, q, m)) continue;
                                    cplx lhs = t.al(l, i, j, s, tt, p) * t.al(l, p, k, m, s, q);
                                    cplx rhs = 0;
                                    for (int x = 0; x < n; ++x)
                                        rhs += t.w(x) * t.al(tt, j, k, m, s, x) * t.al(l, i, x, m, tt, q) *
                                               t.al(q, i, j, k, x, p);
                                    r[O1] = std::max(r[O1], std::abs(lhs - rhs));
                                }
                            }
                        }
                    }
}

void o23(const AlphaTable& t, int l, double* r) {
    const int n = t.n();
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j)
            for (int k = 0; k < n; ++k) {
                auto as = t.source_channels(l, i, j, k);
                auto bs = t.target_channels(l, i, j, k);
                for (int a : as)
                    for (int a2 : as) {
                        cplx s = 0;
                        for (int b : bs) s += t.w(b) * t.ab(l, i, j, k, b, a2) * t.al(l, i, j, k, a, b);
                        cplx want = a == a2 ? 1.0 / t.w(a) : 0.0;
                        r[O2] = std::max(r[O2], std::abs(s - want));
                    }
                for (int b : bs)
                    for (int b2 : bs) {
                        cplx s = 0;
                        for (int a : as) s += t.w(a) * t.al(l, i, j, k, a, b2) * t.ab(l, i, j, k, b, a);
                        cplx want = b == b2 ? 1.0 / t.w(b) : 0.0;
                        r[O3] = std::max(r[O3], std::abs(s - want));
                    }
            }
}

// Contraction of alpha against alpha_bar over one outer leg with another leg left open.
// Positions index (l,i,j,k,a,b); `sum` is contracted, `open` differs between the two factors.
// The first remaining position is pinned to `first` so callers can split the work.
void contraction(const AlphaTable& t, int first, int sum, int open, Slot slot, Slot dual_slot, double* r) {
    const int n = t.n();
    // the four T factors of a block, as positions into (l,i,j,k,a,b)
    static const int fac[4][3] = {{0, 1, 4}, {4, 2, 3}, {0, 5, 3}, {5, 1, 2}};
    auto adm = [&](const int* v) {
        for (auto& f : fac) {
            if (f[0] == sum || f[1] == sum || f[2] == sum) continue;
            if (!t.T(v[f[0]], v[f[1]], v[f[2]])) return false;
        }
        return true;
    };
    int fp[4], nf = 0;
    for (int p = 0; p < 6; ++p)
        if (p != sum && p != open) fp[nf++] = p;
    int v[6] = {}, u[6] = {};
    v[fp[0]] = first;
    for (int code = 0; code < n * n * n; ++code) {
        v[fp[1]] = code % n;
        v[fp[2]] = (code / n) % n;
        v[fp[3]] = code / (n * n);
        for (int o1 = 0; o1 < n; ++o1)
            for (int o2 = 0; o2 < n; ++o2) {
                v[open] = o1;
                std::copy(v, v + 6, u);
                u[open] = o2;
                if (!adm(v) || !adm(u)) continue;
                cplx s = 0;
                for (int x = 0; x < n; ++x) {
                    v[sum] = x;
                    u[sum] = x;
                    s += t.w(x) * t.al(v[0], v[1], v[2], v[3], v[4], v[5]) *
                         t.ab(u[0], u[1], u[2], u[3], u[5], u[4]);
                }
                cplx want = o1 == o2 ? 1.0 / t.w(o1) : 0.0;
                r[slot] = std::max(r[slot], std::abs(s - want));
                if (dual_slot != NSLOT) {
                    cplx dd = o1 == o2 ? t.w(o1) * s : s;
                    r[dual_slot] = std::max(r[dual_slot], std::abs(dd - (o1 == o2 ? 1.0 : 0.0)));
                }
            }
    }
}

}  // namespace

ConditionReport verify_orbifold(const OrbifoldDatum& d, const Tolerance& tol) {
    validate_datum(d);
    AlphaTable t(d);
    const int n = d.n();
    std::vector<std::array<double, NSLOT>> part(n);
    for (auto& p : part) p.fill(0.0);
    parallel_for(n, [&](int x) {
        double* r = part[x].data();
        o1(t, x, r);
        o23(t, x, r);
        // positions: l=0 i=1 j=2 k=3 a=4 b=5
        contraction(t, x, 0, 2, O4, NSLOT, r);
        contraction(t, x, 3, 1, O5, NSLOT, r);
        contraction(t, x, 1, 3, O6, O9p, r);
        contraction(t, x, 2, 0, O7, O10p, r);
    });
    std::array<double, NSLOT> res{};
    for (auto& p : part)
        for (int s = 0; s < NSLOT; ++s) res[s] = std::max(res[s], p[s]);

    // bubble removal on each leg of T
    double o8 = 0;
    for (int x = 0; x < n; ++x) {
        cplx s0 = 0, s1 = 0, s2 = 0;
        for (int y = 0; y < n; ++y)
            for (int z = 0; z < n; ++z) {
                s0 += t.w(y) * t.w(z) * double(t.T(x, y, z));
                s1 += t.w(y) * t.w(z) * double(t.T(y, x, z));
                s2 += t.w(y) * t.w(z) * double(t.T(y, z, x));
            }
        cplx want = t.w(x) / d.phi;
        o8 = std::max({o8, std::abs(s0 - want), std::abs(s1 - want), std::abs(s2 - want)});
    }

    ConditionReport rep;
    rep.tol = tol;
    const char* names[NSLOT] = {"O1", "O2", "O3", "O4", "O5", "O6", "O7", "O9'", "O10'"};
    for (int s = 0; s < O9p; ++s) rep.add(names[s], res[s]);
    rep.add("O8", o8);
    rep.add(names[O9p], res[O9p]);
    rep.add(names[O10p], res[O10p]);
    return rep;
}

OrbifoldDatum build_from_spherical(const SkeletalCategory& cat) {
    const int n = cat.n();
    if ((int)cat.qdim.size() != n || n == 0) throw Error("NonsphericalInput", "qdim arity");
    double bad = std::abs(cat.qdim[0] - 1.0);
    for (int i = 0; i < n; ++i) {
        if (std::abs(cat.qdim[i]) < 1e-12) throw Error("NonsphericalInput", "vanishing quantum dimension");
        bad = std::max(bad, std::abs(cat.qdim[i] - cat.qdim[cat.dual[i]]));
        for (int j = 0; j < n; ++j) {
            cplx s = 0;
            for (int k = 0; k < n; ++k) s += double(cat.N(i, j, k)) * cat.qdim[k];
            bad = std::max(bad, std::abs(cat.qdim[i] * cat.qdim[j] - s));
        }
    }
    if (bad > 1e-8) throw Error("NonsphericalInput", "quantum dimensions are inconsistent", bad);
    if (!cat.multiplicity_free()) throw Error("MultiplicityUnsupported", "fusion multiplicities above one");

    OrbifoldDatum d;
    d.labels = cat.labels;
    d.T.n = n;
    for (int l = 0; l < n; ++l)
        for (int i = 0; i < n; ++i)
            for (int j = 0; j < n; ++j)
                if (cat.N(i, j, l)) d.T.set(l, i, j, 1);
    for (auto q : cat.qdim) {
        cplx r = std::sqrt(q);
        // negative reals: take the root on the positive imaginary axis
        if (q.imag() == 0.0 && q.real() < 0) r = cplx(0, std::sqrt(-q.real()));
        d.psi.push_back(r);
    }
    d.phi = 1.0 / global_dimension(cat);
    for (int l = 0; l < n; ++l)
        for (int i = 0; i < n; ++i)
            for (int j = 0; j < n; ++j)
                for (int k = 0; k < n; ++k) {
                    auto bs = cat.left_channels(i, j, k, l);
                    auto as = cat.right_channels(i, j, k, l);
                    if (bs.empty() && as.empty()) continue;
                    Mat F = cat.fmat(i, j, k, l);
                    Mat Fi = cat.fmat_inv(i, j, k, l);
                    AlphaBlock al{bs, as, Mat(bs.size(), as.size())};
                    AlphaBlock ab{as, bs, Mat(as.size(), bs.size())};
                    for (size_t x = 0; x < bs.size(); ++x)
                        for (size_t y = 0; y < as.size(); ++y) {
                            al.val(x, y) = Fi(y, x) / cat.qdim[bs[x]];
                            ab.val(y, x) = F(x, y) / cat.qdim[as[y]];
                        }
                    d.alpha[{l, i, j, k}] = std::move(al);
                    d.alpha_bar[{l, i, j, k}] = std::move(ab);
                }
    return d;
}

cplx trace_psi4(const OrbifoldDatum& d) {
    cplx s = 0;
    for (auto p : d.psi) s += p * p * p * p;
    return s;
}

}  // namespace orbicat
