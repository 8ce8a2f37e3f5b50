#include "orbicat/graded.hpp"

#include <unsupported/Eigen/KroneckerProduct>

namespace orbicat {

int GradedBimodule::dim(int i, int j) const {
    auto it = dims.find({i, j});
    return it == dims.end() ? 0 : it->second;
}

void GradedBimodule::set(int i, int j, int d) {
    if (i < 0 || j < 0 || i >= n || j >= n) throw Error("IndexMismatch", "grade outside index set");
    if (d < 0) throw Error("MalformedData", "negative dimension");
    if (d == 0)
        dims.erase({i, j});
    else
        dims[{i, j}] = d;
}

int GradedBimodule::total() const {
    int s = 0;
    for (auto& [g, d] : dims) s += d;
    return s;
}

GradedBimodule GradedBimodule::unit(int n) {
    GradedBimodule m;
    m.n = n;
    for (int i = 0; i < n; ++i) m.set(i, i, 1);
    return m;
}

GradedBimodule GradedBimodule::elementary(int n, int i, int j) {
    GradedBimodule m;
    m.n = n;
    m.set(i, j, 1);
    return m;
}

int GradedTrimodule::dim(int l, int i, int j) const {
    auto it = dims.find({l, i, j});
    return it == dims.end() ? 0 : it->second;
}

void GradedTrimodule::set(int l, int i, int j, int d) {
    if (l < 0 || i < 0 || j < 0 || l >= n || i >= n || j >= n)
        throw Error("IndexMismatch", "grade outside index set");
    if (d < 0) throw Error("MalformedData", "negative dimension");
    if (d == 0)
        dims.erase({l, i, j});
    else
        dims[{l, i, j}] = d;
}

int GradedTrimodule::total() const {
    int s = 0;
    for (auto& [g, d] : dims) s += d;
    return s;
}

GradedBimodule tensor_over_A(const GradedBimodule& M, const GradedBimodule& N) {
    if (M.n != N.n) throw Error("IndexMismatch", "bimodules over different index sets");
    GradedBimodule out;
    out.n = M.n;
    for (auto& [g, dm] : M.dims)
        for (int k = 0; k < N.n; ++k) {
            int dn = N.dim(g[1], k);
            if (dn) out.set(g[0], k, out.dim(g[0], k) + dm * dn);
        }
    return out;
}

GradedTrimodule partial_tensor(const GradedTrimodule& T, const GradedBimodule& M, int leg) {
    if (T.n != M.n) throw Error("IndexMismatch", "trimodule and bimodule over different index sets");
    if (leg < 0 || leg > 2) throw Error("UsageError", "leg must be 0, 1 or 2");
    GradedTrimodule out;
    out.n = T.n;
    const int n = T.n;
    auto bump = [&](int l, int i, int j, int d) { out.set(l, i, j, out.dim(l, i, j) + d); };
    for (auto& [g, dt] : T.dims) {
        auto [p, q, r] = g;
        for (int x = 0; x < n; ++x) {
            if (leg == 0) {
                // T_{p;q,r}, M_{x,p} -> grade (x;q,r)
                if (int dm = M.dim(x, p)) bump(x, q, r, dt * dm);
            } else if (leg == 1) {
                // T_{p;q,r} with q = b, M_{q,x} -> grade (p;x,r)
                if (int dm = M.dim(q, x)) bump(p, x, r, dt * dm);
            } else {
                // T_{p;q,r} with r = a, M_{r,x} -> grade (p;q,x)
                if (int dm = M.dim(r, x)) bump(p, q, x, dt * dm);
            }
        }
    }
    return out;
}

std::map<std::array<int, 4>, int> tensor_T1T(const GradedTrimodule& T) {
    std::map<std::array<int, 4>, int> out;
    // sum_b T_{l;b,k} T_{b;i,j}
    for (auto& [g1, d1] : T.dims)
        for (auto& [g2, d2] : T.dims)
            if (g1[1] == g2[0]) out[{g1[0], g2[1], g2[2], g1[2]}] += d1 * d2;
    return out;
}

std::map<std::array<int, 4>, int> tensor_T2T(const GradedTrimodule& T) {
    std::map<std::array<int, 4>, int> out;
    // sum_a T_{l;i,a} T_{a;j,k}
    for (auto& [g1, d1] : T.dims)
        for (auto& [g2, d2] : T.dims)
            if (g1[2] == g2[0]) out[{g1[0], g1[1], g2[1], g2[2]}] += d1 * d2;
    return out;
}

DualBimodule dual_bimodule(const GradedBimodule& M) {
    DualBimodule D;
    D.dual.n = M.n;
    for (auto& [g, d] : M.dims) {
        D.dual.set(g[1], g[0], d);
        // vec(identity) is the canonical pairing in the product basis
        Mat id = Mat::Identity(d, d);
        Mat v = id.reshaped(d * d, 1);
        D.ev.blocks[g] = v.transpose();
        D.coev.blocks[g] = v;
    }
    return D;
}

double zigzag_residual(const GradedBimodule& M, const DualBimodule& D) {
    double worst = 0;
    for (auto& [g, d] : M.dims) {
        Mat id = Mat::Identity(d, d);
        Mat ev = D.ev.block(g, 1, d * d);
        Mat coev = D.coev.block(g, d * d, 1);
        // (id_M (x) ev)(coev (x) id_M): M -> M (x) M* (x) M -> M
        Mat left = Eigen::kroneckerProduct(id, ev) * Eigen::kroneckerProduct(coev, id);
        // (ev (x) id_M*)(id_M* (x) coev): M* -> M* (x) M (x) M* -> M*
        Mat right = Eigen::kroneckerProduct(ev, id) * Eigen::kroneckerProduct(id, coev);
        worst = std::max({worst, max_abs_diff(left, id), max_abs_diff(right, id)});
    }
    return worst;
}

}  // namespace orbicat
