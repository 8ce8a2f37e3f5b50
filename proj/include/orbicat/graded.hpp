#pragma once
#include <array>
#include <map>
#include <vector>

#include "orbicat/numeric.hpp"

namespace orbicat {

using Grade2 = std::array<int, 2>;
using Grade3 = std::array<int, 3>;  // (l; i, j)

// I-I graded vector space, i.e. a bimodule over the diagonal algebra.
struct GradedBimodule {
    int n = 0;
    std::map<Grade2, int> dims;  // zero entries are never stored

    int dim(int i, int j) const;
    void set(int i, int j, int d);
    int total() const;
    static GradedBimodule unit(int n);
    static GradedBimodule elementary(int n, int i, int j);
};

struct GradedTrimodule {
    int n = 0;
    std::map<Grade3, int> dims;

    int dim(int l, int i, int j) const;
    void set(int l, int i, int j, int d);
    int total() const;
};

// Grade-preserving block map; blocks keyed by the grade they act on.
template <class G>
struct GradedMap {
    std::map<G, Mat> blocks;

    Mat block(const G& g, int rows, int cols) const {
        auto it = blocks.find(g);
        return it == blocks.end() ? Mat::Zero(rows, cols) : it->second;
    }
};

GradedBimodule tensor_over_A(const GradedBimodule& M, const GradedBimodule& N);
// leg 0: (M x0 T)_{l;ij} = sum_a M_{la} T_{a;ij}
// leg 1: (T x1 M)_{l;ij} = sum_b T_{l;bj} M_{bi}
// leg 2: (T x2 M)_{l;ij} = sum_a T_{l;ia} M_{aj}
GradedTrimodule partial_tensor(const GradedTrimodule& T, const GradedBimodule& M, int leg);
// T x1 T and T x2 T as I^4 graded spaces, keyed (l;i,j,k)
std::map<std::array<int, 4>, int> tensor_T1T(const GradedTrimodule& T);
std::map<std::array<int, 4>, int> tensor_T2T(const GradedTrimodule& T);

struct DualBimodule {
    GradedBimodule dual;  // dual_{ji} = dim M_{ij}
    // ev_{ij}: M*_{ji} (x) M_{ij} -> k, a 1 x d^2 row; coev_{ij}: k -> M_{ij} (x) M*_{ji}, d^2 x 1
    GradedMap<Grade2> ev, coev;
};

DualBimodule dual_bimodule(const GradedBimodule& M);
// worst blockwise deviation of the two zig-zag composites from the identity
double zigzag_residual(const GradedBimodule& M, const DualBimodule& D);

}  // namespace orbicat
