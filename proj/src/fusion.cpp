#include "orbicat/fusion.hpp"

#include <Eigen/SVD>
#include <algorithm>
#include <cmath>
#include <tuple>

namespace orbicat {

bool SkeletalCategory::multiplicity_free() const {
    return std::all_of(Nt.begin(), Nt.end(), [](int v) { return v <= 1; });
}

cplx SkeletalCategory::f(int i, int j, int k, int l, int b, int a) const {
    auto it = F.find({i, j, k, l, b, a, 0, 0, 0, 0});
    return it == F.end() ? cplx(0) : it->second;
}

cplx SkeletalCategory::r(int a, int b, int c) const {
    auto it = R.find({a, b, c, 0, 0});
    return it == R.end() ? cplx(0) : it->second;
}

std::vector<int> SkeletalCategory::left_channels(int i, int j, int k, int l) const {
    std::vector<int> out;
    for (int b = 0; b < n(); ++b)
        if (N(i, j, b) && N(b, k, l)) out.push_back(b);
    return out;
}

std::vector<int> SkeletalCategory::right_channels(int i, int j, int k, int l) const {
    std::vector<int> out;
    for (int a = 0; a < n(); ++a)
        if (N(j, k, a) && N(i, a, l)) out.push_back(a);
    return out;
}

Mat SkeletalCategory::fmat(int i, int j, int k, int l) const {
    auto bs = left_channels(i, j, k, l);
    auto as = right_channels(i, j, k, l);
    Mat m(bs.size(), as.size());
    for (size_t x = 0; x < bs.size(); ++x)
        for (size_t y = 0; y < as.size(); ++y) m(x, y) = f(i, j, k, l, bs[x], as[y]);
    return m;
}

Mat SkeletalCategory::fmat_inv(int i, int j, int k, int l) const {
    Mat m = fmat(i, j, k, l);
    if (m.rows() != m.cols()) throw Error("MalformedData", "F block is not square");
    return m.size() ? Mat(m.inverse()) : m;
}

int SkeletalCategory::label_index(const std::string& name) const {
    for (int i = 0; i < n(); ++i)
        if (labels[i] == name) return i;
    return -1;
}

cplx global_dimension(const SkeletalCategory& cat) {
    cplx s = 0;
    for (auto d : cat.qdim) s += d * d;
    return s;
}

Mat s_matrix(const SkeletalCategory& cat) {
    const int n = cat.n();
    Mat s = Mat::Zero(n, n);
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j)
            for (int k = 0; k < n; ++k)
                if (cat.N(i, j, k)) s(i, j) += cat.r(j, i, k) * cat.r(i, j, k) * cat.qdim[k];
    return s;
}

namespace {

cplx fget(const SkeletalCategory& c, int i, int j, int k, int l, int b, int a, int m1, int m2, int m3,
          int m4) {
    auto it = c.F.find({i, j, k, l, b, a, m1, m2, m3, m4});
    return it == c.F.end() ? cplx(0) : it->second;
}

using Key5 = std::tuple<int, int, int, int, int>;

struct Space {
    std::map<Key5, int> idx;
    int add(const Key5& k) {
        auto it = idx.find(k);
        if (it != idx.end()) return it->second;
        int v = (int)idx.size();
        idx[k] = v;
        return v;
    }
};

}  // namespace

double pentagon_residual(const SkeletalCategory& c) {
    const int n = c.n();
    double worst = 0;
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j)
            for (int k = 0; k < n; ++k)
                for (int m = 0; m < n; ++m)
                    for (int l = 0; l < n; ++l) {
                        // leftmost (((ij)_p k)_q m)_l and rightmost (i(j(km)_s)_t)_l trees
                        Space LM, RM;
                        for (int p = 0; p < n; ++p)
                            for (int q = 0; q < n; ++q)
                                for (int a1 = 0; a1 < c.N(i, j, p); ++a1)
                                    for (int a2 = 0; a2 < c.N(p, k, q); ++a2)
                                        for (int a3 = 0; a3 < c.N(q, m, l); ++a3) LM.add({p, q, a1, a2, a3});
                        for (int s = 0; s < n; ++s)
                            for (int t = 0; t < n; ++t)
                                for (int b1 = 0; b1 < c.N(k, m, s); ++b1)
                                    for (int b2 = 0; b2 < c.N(j, s, t); ++b2)
                                        for (int b3 = 0; b3 < c.N(i, t, l); ++b3) RM.add({s, t, b1, b2, b3});
                        if (LM.idx.empty() && RM.idx.empty()) continue;
                        Mat P1 = Mat::Zero(LM.idx.size(), RM.idx.size());
                        Mat P2 = P1;
                        for (auto& [lk, li] : LM.idx) {
                            auto [p, q, a1, a2, a3] = lk;
                            // path through ((ij)_p (km)_s)_l
                            for (int s = 0; s < n; ++s)
                                for (int c1 = 0; c1 < c.N(k, m, s); ++c1)
                                    for (int c2 = 0; c2 < c.N(p, s, l); ++c2) {
                                        cplx f1 = fget(c, p, k, m, l, q, s, a2, a3, c1, c2);
                                        if (f1 == 0.0) continue;
                                        for (int t = 0; t < n; ++t)
                                            for (int b2 = 0; b2 < c.N(j, s, t); ++b2)
                                                for (int b3 = 0; b3 < c.N(i, t, l); ++b3) {
                                                    cplx f2 = fget(c, i, j, s, l, p, t, a1, c2, b2, b3);
                                                    if (f2 == 0.0) continue;
                                                    P1(li, RM.idx.at({s, t, c1, b2, b3})) += f1 * f2;
                                                }
                                    }
                            // path through ((i(jk)_r)_q m)_l and (i((jk)_r m)_t)_l
                            for (int r = 0; r < n; ++r)
                                for (int d1 = 0; d1 < c.N(j, k, r); ++d1)
                                    for (int d2 = 0; d2 < c.N(i, r, q); ++d2) {
                                        cplx g1 = fget(c, i, j, k, q, p, r, a1, a2, d1, d2);
                                        if (g1 == 0.0) continue;
                                        for (int t = 0; t < n; ++t)
                                            for (int e1 = 0; e1 < c.N(r, m, t); ++e1)
                                                for (int e2 = 0; e2 < c.N(i, t, l); ++e2) {
                                                    cplx g2 = fget(c, i, r, m, l, q, t, d2, a3, e1, e2);
                                                    if (g2 == 0.0) continue;
                                                    for (int s = 0; s < n; ++s)
                                                        for (int b1 = 0; b1 < c.N(k, m, s); ++b1)
                                                            for (int b2 = 0; b2 < c.N(j, s, t); ++b2) {
                                                                cplx g3 = fget(c, j, k, m, t, r, s, d1, e1, b1, b2);
                                                                if (g3 == 0.0) continue;
                                                                P2(li, RM.idx.at({s, t, b1, b2, e2})) += g1 * g2 * g3;
                                                            }
                                                }
                                    }
                        }
                        worst = std::max(worst, max_abs_diff(P1, P2));
                    }
    return worst;
}

namespace {

double hexagon_residual(const SkeletalCategory& c, bool inverse) {
    const int n = c.n();
    auto R = [&](int a, int b, int k) { return inverse ? 1.0 / c.r(b, a, k) : c.r(a, b, k); };
    double worst = 0;
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j)
            for (int k = 0; k < n; ++k)
                for (int l = 0; l < n; ++l)
                    for (int p : c.left_channels(i, j, k, l))
                        for (int cc : c.right_channels(j, k, i, l)) {
                            cplx lhs = 0;
                            for (int a : c.right_channels(i, j, k, l))
                                lhs += c.f(i, j, k, l, p, a) * R(i, a, l) * c.f(j, k, i, l, a, cc);
                            cplx rhs = R(i, j, p) * c.f(j, i, k, l, p, cc) * R(i, k, cc);
                            worst = std::max(worst, std::abs(lhs - rhs));
                        }
    return worst;
}

}  // namespace

ConditionReport check_category(const SkeletalCategory& cat, const Tolerance& tol) {
    const int n = cat.n();
    if (n == 0) throw Error("MalformedData", "no labels");
    if ((int)cat.dual.size() != n || (int)cat.qdim.size() != n || (int)cat.Nt.size() != n * n * n)
        throw Error("MalformedData", "arity mismatch between labels, dual, qdim and N");
    if (!cat.twist.empty() && (int)cat.twist.size() != n) throw Error("MalformedData", "twist arity");
    for (int d : cat.dual)
        if (d < 0 || d >= n) throw Error("MalformedData", "dual index out of range");
    for (auto& [k, v] : cat.F)
        for (int x = 0; x < 6; ++x)
            if (k[x] < 0 || k[x] >= n) throw Error("MalformedData", "F index out of range");
    for (auto& [k, v] : cat.R)
        for (int x = 0; x < 3; ++x)
            if (k[x] < 0 || k[x] >= n) throw Error("MalformedData", "R index out of range");

    ConditionReport rep;
    rep.tol = tol;
    double ab = tol.abs_eps;

    double unit = 0, dual = 0;
    for (int j = 0; j < n; ++j)
        for (int k = 0; k < n; ++k) {
            unit = std::max(unit, (double)std::abs(cat.N(0, j, k) - (j == k)));
            unit = std::max(unit, (double)std::abs(cat.N(j, 0, k) - (j == k)));
            dual = std::max(dual, (double)std::abs(cat.N(j, k, 0) - (k == cat.dual[j])));
        }
    if (cat.dual[0] != 0) dual = std::max(dual, 1.0);
    for (int i = 0; i < n; ++i)
        if (cat.dual[cat.dual[i]] != i) dual = std::max(dual, 1.0);
    rep.add("unit", unit, 0);
    rep.add("duality", dual, 0);

    double qd = std::abs(cat.qdim[0] - 1.0);
    double qnz = 0;
    for (int i = 0; i < n; ++i) {
        qd = std::max(qd, std::abs(cat.qdim[i] - cat.qdim[cat.dual[i]]));
        if (std::abs(cat.qdim[i]) <= ab) qnz = 1;
        for (int j = 0; j < n; ++j) {
            cplx s = 0;
            for (int k = 0; k < n; ++k) s += double(cat.N(i, j, k)) * cat.qdim[k];
            qd = std::max(qd, std::abs(cat.qdim[i] * cat.qdim[j] - s));
        }
    }
    rep.add("qdim", qd);
    rep.add_flag("qdim_nonzero", qnz == 0);
    rep.add("pentagon", pentagon_residual(cat));

    if (cat.has_R) {
        if (!cat.multiplicity_free())
            throw Error("MultiplicityUnsupported", "hexagon check needs multiplicity-free data");
        rep.add("hexagon", hexagon_residual(cat, false));
        rep.add("hexagon_inverse", hexagon_residual(cat, true));
        if (!cat.twist.empty()) {
            double bal = std::abs(cat.twist[0] - 1.0);
            for (int i = 0; i < n; ++i) {
                bal = std::max(bal, std::abs(cat.twist[i] - cat.twist[cat.dual[i]]));
                for (int j = 0; j < n; ++j)
                    for (int k = 0; k < n; ++k)
                        if (cat.N(i, j, k))
                            bal = std::max(bal, std::abs(cat.r(j, i, k) * cat.r(i, j, k) * cat.twist[i] *
                                                             cat.twist[j] -
                                                         cat.twist[k]));
            }
            rep.add("balancing", bal);
        }
        Mat s = s_matrix(cat);
        Eigen::JacobiSVD<Mat> svd(s);
        auto sv = svd.singularValues();
        double cond = sv(sv.size() - 1) > 0 ? sv(0) / sv(sv.size() - 1) : INFINITY;
        rep.info["modular"] = cond < 1.0 / ab ? 1.0 : 0.0;
        rep.info["s_condition_number"] = cond;
    }
    return rep;
}

ModularData category_modular_data(const SkeletalCategory& cat) {
    ModularData md;
    md.labels = cat.labels;
    md.qdim = cat.qdim;
    md.smatrix = s_matrix(cat);
    md.tdiag = cat.twist;
    md.global_dim = global_dimension(cat);
    return md;
}

}  // namespace orbicat
