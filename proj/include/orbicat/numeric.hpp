#pragma once
#include <Eigen/Dense>
#include <complex>
#include <cstdint>
#include <functional>
#include <utility>
#include <vector>

#include "orbicat/errors.hpp"

namespace orbicat {

using cplx = std::complex<double>;
using Mat = Eigen::MatrixXcd;
using Vec = Eigen::VectorXcd;

struct Tolerance {
    double abs_eps = 1e-9;
    double rel_eps = 1e-9;

    bool close(cplx x, cplx y) const {
        return std::abs(x - y) <= abs_eps + rel_eps * std::max(std::abs(x), std::abs(y));
    }
    // scale-aware rank cut
    double rank_cut(double smax) const { return abs_eps * std::max(1.0, smax); }
};

double max_abs(const Mat& m);
double max_abs_diff(const Mat& a, const Mat& b);
bool all_finite(const Mat& m);

int rank(const Mat& m, const Tolerance& tol);
// Columns form an orthonormal basis of the kernel.
Mat nullspace(const Mat& m, const Tolerance& tol);
// Columns form an orthonormal basis of the column space.
Mat range_basis(const Mat& m, const Tolerance& tol);

struct Split {
    Mat embed;    // n x r
    Mat retract;  // r x n
};

Split split_idempotent(const Mat& p, const Tolerance& tol);

// Pairwise orthogonal primitive idempotents summing to the unit of the
// algebra spanned by `basis`.
std::vector<Mat> primitive_idempotents(const std::vector<Mat>& basis, std::uint64_t seed,
                                       const Tolerance& tol);

// Worker count from ORBICAT_THREADS, at least 1.
int worker_count();
// Runs f(0..n-1); results must be written to per-index slots.
void parallel_for(int n, const std::function<void(int)>& f);

}  // namespace orbicat
