#pragma once
#include <array>
#include <map>
#include <string>
#include <vector>

#include "orbicat/fusion.hpp"
#include "orbicat/graded.hpp"
#include "orbicat/report.hpp"

namespace orbicat {

// One (l;i,j,k) block. For alpha rows are the T x1 T channels b and columns the
// T x2 T channels a; alpha_bar is the other way round.
struct AlphaBlock {
    std::vector<int> rows, cols;
    Mat val;
};

using Key4 = std::array<int, 4>;

struct OrbifoldDatum {
    std::vector<std::string> labels;
    GradedTrimodule T;
    std::map<Key4, AlphaBlock> alpha, alpha_bar;
    std::vector<cplx> psi;
    cplx phi = 1.0;

    int n() const { return (int)labels.size(); }
    bool multiplicity_free() const;
};

// Dense views of alpha and alpha_bar for a multiplicity-free datum.
class AlphaTable {
public:
    explicit AlphaTable(const OrbifoldDatum& d);
    int n() const { return n_; }
    bool T(int l, int i, int j) const { return t_[(l * n_ + i) * n_ + j]; }
    // alpha: T_{l;i,a} T_{a;j,k} -> T_{l;b,k} T_{b;i,j}
    cplx al(int l, int i, int j, int k, int a, int b) const { return al_[idx(l, i, j, k, a, b)]; }
    // alpha_bar: T_{l;b,k} T_{b;i,j} -> T_{l;i,a} T_{a;j,k}
    cplx ab(int l, int i, int j, int k, int b, int a) const { return ab_[idx(l, i, j, k, b, a)]; }
    cplx w(int i) const { return w_[i]; }
    cplx psi(int i) const { return psi_[i]; }
    std::vector<int> source_channels(int l, int i, int j, int k) const;  // a
    std::vector<int> target_channels(int l, int i, int j, int k) const;  // b

private:
    size_t idx(int l, int i, int j, int k, int a, int b) const {
        return ((((((size_t)l * n_ + i) * n_ + j) * n_ + k) * n_ + a) * n_ + b);
    }
    int n_;
    std::vector<char> t_;
    std::vector<cplx> al_, ab_, w_, psi_;
};

// Structural validation; throws MalformedDatum.
void validate_datum(const OrbifoldDatum& d);

// O1..O8 plus the dual forms O9', O10'.
ConditionReport verify_orbifold(const OrbifoldDatum& d, const Tolerance& tol);

// psi(i) = principal square root of the quantum dimension, phi = 1/Dim
OrbifoldDatum build_from_spherical(const SkeletalCategory& cat);

cplx trace_psi4(const OrbifoldDatum& d);

// "principal": the branch used for square roots of quantum dimensions
inline const char* psi_branch() { return "principal"; }

}  // namespace orbicat
