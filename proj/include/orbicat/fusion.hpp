#pragma once
#include <array>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "orbicat/numeric.hpp"
#include "orbicat/report.hpp"

namespace orbicat {

using FKey = std::array<int, 10>;  // i j k l b a | m1 m2 m3 m4
using RKey = std::array<int, 5>;   // a b c | m1 m2

// Skeletal spherical fusion category. F(i,j,k,l,b,a) maps the tree ((ij)_b k)_l
// to (i(jk)_a)_l: coordinates transform as c_R[a] = sum_b c_L[b] F[b,a].
struct SkeletalCategory {
    std::vector<std::string> labels;
    std::vector<int> dual;
    std::vector<int> Nt;  // n^3, index (i*n+j)*n+k
    std::map<FKey, cplx> F;
    std::map<RKey, cplx> R;
    bool has_R = false;
    std::vector<cplx> qdim;
    std::vector<cplx> twist;  // empty when absent

    int n() const { return (int)labels.size(); }
    int N(int i, int j, int k) const { return Nt[((size_t)i * n() + j) * n() + k]; }
    bool multiplicity_free() const;

    // multiplicity-free accessors
    cplx f(int i, int j, int k, int l, int b, int a) const;
    cplx r(int a, int b, int c) const;
    std::vector<int> left_channels(int i, int j, int k, int l) const;   // b
    std::vector<int> right_channels(int i, int j, int k, int l) const;  // a
    // square block of F^{ijk}_l rows b, cols a (multiplicity-free)
    Mat fmat(int i, int j, int k, int l) const;
    // inverse block rows a, cols b
    Mat fmat_inv(int i, int j, int k, int l) const;
    int label_index(const std::string& name) const;
};

struct ModularData {
    std::vector<std::string> labels;
    std::vector<cplx> qdim;
    Mat smatrix;
    std::vector<cplx> tdiag;
    cplx global_dim;
};

ConditionReport check_category(const SkeletalCategory& cat, const Tolerance& tol);
cplx global_dimension(const SkeletalCategory& cat);
// unnormalised s_ij = sum_k N_ij^k R^{ji}_k R^{ij}_k |k|
Mat s_matrix(const SkeletalCategory& cat);
double pentagon_residual(const SkeletalCategory& cat);
ModularData category_modular_data(const SkeletalCategory& cat);

struct GroupSpec {
    std::vector<std::string> names;
    std::vector<std::vector<int>> mul;
    std::vector<std::vector<std::vector<cplx>>> omega;  // empty for trivial cocycle
};

SkeletalCategory builtin_vec_g(const GroupSpec& g, const Tolerance& tol = {});
SkeletalCategory builtin_vec_zn(int n);
SkeletalCategory builtin_fibonacci();
SkeletalCategory builtin_ising();
SkeletalCategory builtin_toric_code();
// "vec_z<n>", "fibonacci", "ising", "toric_code"
SkeletalCategory builtin(const std::string& name);
std::vector<std::string> builtin_names();

}  // namespace orbicat
