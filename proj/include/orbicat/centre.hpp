#pragma once
#include <array>
#include <map>
#include <vector>

#include "orbicat/fusion.hpp"
#include "orbicat/wilson.hpp"

namespace orbicat {

// Half-braided object (X, gamma) over a multiplicity-free category.
// X is a list of copies of simple labels, sorted by label. gamma[{x,s}] maps the
// trees (copy alpha, x)_s to (x, copy beta)_s; columns run over the copies
// alpha with N_{m_alpha x}^s and rows over the copies beta with N_{x m_beta}^s.
struct HalfBraidedObject {
    std::vector<int> copies;
    std::map<std::array<int, 2>, Mat> gamma;

    std::map<int, int> mult() const;
    // gamma coefficient G_x[alpha -> beta; s], zero when the trees do not exist
    cplx G(const SkeletalCategory& cat, int x, int alpha, int beta, int s) const;
};

// Tube algebra with basis (i,x,j,s): trees i x -> s -> x j.
struct TubeAlgebra {
    std::vector<std::array<int, 4>> basis;
    std::map<std::array<int, 4>, int> index;
    // structure constants: t_b * t_a = sum_c val t_c
    struct Entry {
        int a, b, c;
        cplx val;
    };
    std::vector<Entry> product;
    int dim() const { return (int)basis.size(); }
    // left multiplication by t_b
    Mat left(int b) const;
    Vec unit(int n) const;
};

TubeAlgebra tube_algebra(const SkeletalCategory& cat);

std::vector<HalfBraidedObject> centre_simples(const SkeletalCategory& cat, std::uint64_t seed,
                                              const Tolerance& tol = {});
double hexagon_residual(const SkeletalCategory& cat, const HalfBraidedObject& hb);
ModularData centre_modular_data(const SkeletalCategory& cat, const std::vector<HalfBraidedObject>& simples);
cplx centre_twist(const SkeletalCategory& cat, const HalfBraidedObject& hb);

WilsonObject centre_to_wilson(const SkeletalCategory& cat, const WilsonCategory& C, const HalfBraidedObject& hb);

struct MatchResult {
    bool matched = false;
    std::vector<int> perm;  // perm[i]: label of b matched to label i of a
    double residual = 0;
};

// Unit-fixing label bijection matching qdim, T and unnormalised S; throws SizeMismatch.
MatchResult compare_modular_data(const ModularData& a, const ModularData& b, double tol);

}  // namespace orbicat
