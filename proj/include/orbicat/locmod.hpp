#pragma once
#include <array>
#include <map>
#include <vector>

#include "orbicat/fusion.hpp"
#include "orbicat/report.hpp"

namespace orbicat {

// A = sum of the support labels, multiplicity free. mult[{a,b,c}] is the scalar
// of m on the splitting vertex c -> a b.
struct AlgebraInMFC {
    std::vector<int> support;
    std::map<std::array<int, 3>, cplx> mult;

    bool contains(int a) const;
    cplx m(int a, int b, int c) const;
};

// Coproduct and counit fixed by the Frobenius relations and mu o Delta = id.
struct FrobeniusStructure {
    std::map<std::array<int, 3>, cplx> delta;  // {c,a,b}: Delta on c -> a b
    cplx eps0 = 1.0;
    cplx rescale = 1.0;  // factor applied to the input multiplication
    double frobenius_residual = 0, separability_residual = 0, counit_residual = 0;

    cplx d(int c, int a, int b) const;
};

// Module M = sum of copies of simple labels; action[{a,x,w}] maps the copies of x
// to the copies of w along the vertex w -> a x.
struct ModuleInMFC {
    std::vector<int> copies;
    std::map<std::array<int, 3>, Mat> action;
    double locality = 0;

    int count(int x) const;
};

// Normalised copy of the input: mult divided by m(0,0,0).
AlgebraInMFC normalised(const AlgebraInMFC& alg, cplx* factor = nullptr);
FrobeniusStructure frobenius_structure(const SkeletalCategory& cat, const AlgebraInMFC& alg);

ConditionReport check_algebra(const SkeletalCategory& cat, const AlgebraInMFC& alg, const Tolerance& tol);

ModuleInMFC induced_module(const SkeletalCategory& cat, const AlgebraInMFC& alg, int x);
double module_residual(const SkeletalCategory& cat, const AlgebraInMFC& alg, const ModuleInMFC& M);
double locality_residual(const SkeletalCategory& cat, const AlgebraInMFC& alg, const ModuleInMFC& M);
int module_hom_dim(const SkeletalCategory& cat, const AlgebraInMFC& alg, const ModuleInMFC& M, const ModuleInMFC& N,
                   const Tolerance& tol);

// All simple A-modules (local or not), one per isomorphism class.
std::vector<ModuleInMFC> simple_modules(const SkeletalCategory& cat, const AlgebraInMFC& alg, std::uint64_t seed,
                                        const Tolerance& tol);
std::vector<ModuleInMFC> local_modules(const SkeletalCategory& cat, const AlgebraInMFC& alg, std::uint64_t seed,
                                       const Tolerance& tol);
ModularData locmod_modular_data(const SkeletalCategory& cat, const AlgebraInMFC& alg,
                                const std::vector<ModuleInMFC>& simples);

}  // namespace orbicat
