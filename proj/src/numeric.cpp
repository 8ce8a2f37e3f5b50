#include "orbicat/numeric.hpp"

#include <Eigen/Eigenvalues>
#include <Eigen/SVD>
#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <thread>

namespace orbicat {

int Error::exit_code() const {
    if (kind_ == "ParseError" || kind_ == "IOError" || kind_ == "UsageError" ||
        kind_ == "MalformedData" || kind_ == "MalformedDatum" || kind_ == "MalformedAlgebra" ||
        kind_ == "UnknownBuiltin")
        return 2;
    return 1;
}

double max_abs(const Mat& m) { return m.size() ? m.cwiseAbs().maxCoeff() : 0.0; }

double max_abs_diff(const Mat& a, const Mat& b) {
    if (a.rows() != b.rows() || a.cols() != b.cols()) return INFINITY;
    return a.size() ? (a - b).cwiseAbs().maxCoeff() : 0.0;
}

bool all_finite(const Mat& m) {
    for (Eigen::Index i = 0; i < m.size(); ++i)
        if (!std::isfinite(m.data()[i].real()) || !std::isfinite(m.data()[i].imag())) return false;
    return true;
}

int rank(const Mat& m, const Tolerance& tol) {
    if (m.size() == 0) return 0;
    Eigen::JacobiSVD<Mat> svd(m);
    const auto& s = svd.singularValues();
    double cut = tol.rank_cut(s(0));
    int r = 0;
    for (Eigen::Index i = 0; i < s.size(); ++i)
        if (s(i) > cut) ++r;
    return r;
}

Mat nullspace(const Mat& m, const Tolerance& tol) {
    const auto n = m.cols();
    if (n == 0) return Mat(0, 0);
    if (m.rows() == 0) return Mat::Identity(n, n);
    // pad so that V is square even for wide matrices
    Mat a = m;
    if (a.rows() < n) {
        a.conservativeResize(n, n);
        a.bottomRows(n - m.rows()).setZero();
    }
    Eigen::JacobiSVD<Mat> svd(a, Eigen::ComputeFullV);
    const auto& s = svd.singularValues();
    double cut = tol.rank_cut(s(0));
    int r = 0;
    for (Eigen::Index i = 0; i < s.size(); ++i)
        if (s(i) > cut) ++r;
    return svd.matrixV().rightCols(n - r);
}

Mat range_basis(const Mat& m, const Tolerance& tol) {
    if (m.size() == 0) return Mat(m.rows(), 0);
    Eigen::JacobiSVD<Mat> svd(m, Eigen::ComputeThinU);
    const auto& s = svd.singularValues();
    double cut = tol.rank_cut(s(0));
    int r = 0;
    for (Eigen::Index i = 0; i < s.size(); ++i)
        if (s(i) > cut) ++r;
    return svd.matrixU().leftCols(r);
}

Split split_idempotent(const Mat& p, const Tolerance& tol) {
    if (p.rows() != p.cols()) throw Error("NotIdempotent", "matrix is not square");
    const auto n = p.rows();
    double res = max_abs_diff(p * p, p);
    double thr = tol.abs_eps + tol.rel_eps * max_abs(p);
    if (res > 10 * thr) throw Error("NotIdempotent", "residual of p*p - p", res);
    Mat u = range_basis(p, tol);
    Split s;
    s.embed = u;
    s.retract = u.adjoint() * p;
    if (u.cols() == 0) {
        s.embed = Mat(n, 0);
        s.retract = Mat(0, n);
    }
    return s;
}

namespace {

// splitmix-style generator wrapped so draws are identical on every platform
struct Rng {
    std::uint64_t s;
    explicit Rng(std::uint64_t seed) : s(seed * 0x9E3779B97F4A7C15ULL + 0x2545F4914F6CDD1DULL) {}
    std::uint64_t next() {
        std::uint64_t z = (s += 0x9E3779B97F4A7C15ULL);
        z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
        z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
        return z ^ (z >> 31);
    }
    double uniform() { return (next() >> 11) * 0x1.0p-53; }
    cplx gauss() {
        double u1 = std::max(uniform(), 1e-300), u2 = uniform();
        double r = std::sqrt(-2.0 * std::log(u1));
        return {r * std::cos(2 * M_PI * u2), r * std::sin(2 * M_PI * u2)};
    }
};

Mat vec_of(const Mat& m) { return Eigen::Map<const Mat>(m.data(), m.size(), 1); }

// orthonormal basis (as vectors) of span{mats}
Mat span_basis(const std::vector<Mat>& mats, const Tolerance& tol) {
    if (mats.empty()) return Mat(0, 0);
    Mat v(mats[0].size(), (Eigen::Index)mats.size());
    for (size_t k = 0; k < mats.size(); ++k) v.col(k) = vec_of(mats[k]);
    return range_basis(v, tol);
}

std::vector<Mat> unvec(const Mat& q, Eigen::Index d) {
    std::vector<Mat> out;
    for (Eigen::Index k = 0; k < q.cols(); ++k) out.push_back(Eigen::Map<const Mat>(q.col(k).data(), d, d));
    return out;
}

struct Refiner {
    std::vector<Mat> basis;
    Tolerance tol;
    Rng rng;
    int retries = 0;

    void run(const Mat& e, const std::vector<Mat>& sub, std::vector<Mat>& out) {
        if (sub.size() <= 1) {
            out.push_back(e);
            return;
        }
        const int max_tries = 24;
        for (int attempt = 0; attempt < max_tries; ++attempt) {
            Mat x = Mat::Zero(e.rows(), e.cols());
            for (const auto& b : sub) x += rng.gauss() * b;
            Split sp = split_idempotent(e, tol);
            Mat y = sp.retract * x * sp.embed;
            Eigen::ComplexEigenSolver<Mat> es(y);
            Vec ev = es.eigenvalues();
            Mat v = es.eigenvectors();
            const auto r = ev.size();
            double scale = std::max(1.0, ev.cwiseAbs().maxCoeff());
            // single-linkage clustering of eigenvalues
            std::vector<int> cl(r, -1);
            int ncl = 0;
            for (Eigen::Index i = 0; i < r; ++i) {
                if (cl[i] >= 0) continue;
                cl[i] = ncl;
                std::vector<Eigen::Index> stack{i};
                while (!stack.empty()) {
                    auto a = stack.back();
                    stack.pop_back();
                    for (Eigen::Index b = 0; b < r; ++b)
                        if (cl[b] < 0 && std::abs(ev(a) - ev(b)) < 1e-6 * scale) {
                            cl[b] = ncl;
                            stack.push_back(b);
                        }
                }
                ++ncl;
            }
            double gap = INFINITY;
            for (Eigen::Index a = 0; a < r; ++a)
                for (Eigen::Index b = 0; b < r; ++b)
                    if (cl[a] != cl[b]) gap = std::min(gap, std::abs(ev(a) - ev(b)));
            if (ncl < 2 || gap < 1e-4 * scale) {
                ++retries;
                continue;
            }
            Mat vinv = v.inverse();
            // order clusters by representative eigenvalue for stable output
            std::vector<std::pair<cplx, int>> reps(ncl, {cplx(INFINITY, 0), 0});
            for (Eigen::Index i = 0; i < r; ++i)
                if (std::isinf(reps[cl[i]].first.real())) reps[cl[i]] = {ev(i), cl[i]};
            std::sort(reps.begin(), reps.end(), [](auto& p, auto& q) {
                if (p.first.real() != q.first.real()) return p.first.real() < q.first.real();
                return p.first.imag() < q.first.imag();
            });
            for (auto& [lam, c] : reps) {
                Mat sel = Mat::Zero(r, r);
                for (Eigen::Index i = 0; i < r; ++i)
                    if (cl[i] == c) sel(i, i) = 1.0;
                Mat q = v * sel * vinv;
                Mat p = sp.embed * q * sp.retract;
                std::vector<Mat> pap;
                for (const auto& b : basis) pap.push_back(p * b * p);
                Mat sb = span_basis(pap, tol);
                run(p, unvec(sb, p.rows()), out);
            }
            return;
        }
        throw Error("DegenerateSpectrum", "no separating random element after retries");
    }
};

}  // namespace

std::vector<Mat> primitive_idempotents(const std::vector<Mat>& basis, std::uint64_t seed,
                                       const Tolerance& tol) {
    if (basis.empty()) return {};
    const auto d = basis[0].rows();
    Mat q = span_basis(basis, tol);
    double scale = 1.0;
    for (const auto& b : basis) scale = std::max(scale, max_abs(b));
    double worst = 0;
    for (const auto& a : basis)
        for (const auto& b : basis) {
            Mat v = vec_of(a * b);
            worst = std::max(worst, max_abs(v - q * (q.adjoint() * v)));
        }
    if (worst > 1e3 * tol.rank_cut(scale * scale)) throw Error("NotClosed", "product leaves the span", worst);
    Mat one = vec_of(Mat::Identity(d, d));
    double ures = max_abs(one - q * (q.adjoint() * one));
    if (ures > 1e3 * tol.rank_cut(1.0)) throw Error("NotClosed", "identity not in the span", ures);

    Refiner rf{basis, tol, Rng(seed)};
    std::vector<Mat> out;
    rf.run(Mat::Identity(d, d), unvec(q, d), out);
    return out;
}

int worker_count() {
    const char* env = std::getenv("ORBICAT_THREADS");
    if (env) {
        int v = std::atoi(env);
        if (v >= 1) return v;
    }
    unsigned hw = std::thread::hardware_concurrency();
    return hw ? (int)std::min(hw, 8u) : 1;
}

void parallel_for(int n, const std::function<void(int)>& f) {
    int w = std::min(worker_count(), n);
    if (w <= 1) {
        for (int i = 0; i < n; ++i) f(i);
        return;
    }
    std::vector<std::thread> pool;
    std::vector<std::exception_ptr> errs(w);
    for (int t = 0; t < w; ++t)
        pool.emplace_back([&, t] {
            try {
                for (int i = t; i < n; i += w) f(i);
            } catch (...) {
                errs[t] = std::current_exception();
            }
        });
    for (auto& th : pool) th.join();
    for (auto& e : errs)
        if (e) std::rethrow_exception(e);
}

}  // namespace orbicat
