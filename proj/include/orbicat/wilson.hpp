#pragma once
#include <array>
#include <cstdint>
#include <map>
#include <memory>
#include <optional>
#include <vector>

#include "orbicat/fusion.hpp"
#include "orbicat/graded.hpp"
#include "orbicat/orbifold.hpp"
#include "orbicat/report.hpp"

namespace orbicat {

// Crossing blocks are keyed (l;i,j). Basis orderings, per (l;i,j):
//   S0 = M x0 T : (a, m)  with T_{a;ij} != 0, m < dim M_{la}
//   S1 = T x1 M : (b, m)  with T_{l;bj} != 0, m < dim M_{bi}
//   S2 = T x2 M : (c, m)  with T_{l;ic} != 0, m < dim M_{cj}
// labels ascending, multiplicity index fastest.
struct WilsonObject {
    GradedBimodule M;
    std::map<Grade3, Mat> tau1, tau2, tau1_bar, tau2_bar;

    int dim(int p, int q) const { return M.dim(p, q); }
};

// Grade-preserving map M -> N, blocks keyed (p,q) of shape dim N_pq x dim M_pq.
using Morphism = GradedMap<Grade2>;

// Offsets of the S0/S1/S2 bases of one object.
class Layout {
public:
    Layout(const AlphaTable& t, const GradedBimodule& M);
    // wh = 0, 1, 2
    int size(int wh, int l, int i, int j) const { return size_[key3(wh, l, i, j)]; }
    // start of label x inside the basis, -1 if absent
    int off(int wh, int l, int i, int j, int x) const { return off_[key3(wh, l, i, j) * n_ + x]; }
    // label of each basis position
    const std::vector<int>& labels(int wh, int l, int i, int j) const { return lab_[key3(wh, l, i, j)]; }
    int dim(int p, int q) const { return dims_[(size_t)p * n_ + q]; }
    int n() const { return n_; }

private:
    size_t key3(int wh, int l, int i, int j) const { return (((size_t)wh * n_ + l) * n_ + i) * n_ + j; }
    int n_;
    std::vector<int> dims_, size_, off_;
    std::vector<std::vector<int>> lab_;
};

// The category of Wilson objects of a fixed orbifold datum.
class WilsonCategory {
public:
    explicit WilsonCategory(OrbifoldDatum d);

    const OrbifoldDatum& datum() const { return d_; }
    const AlphaTable& table() const { return t_; }
    int n() const { return d_.n(); }
    cplx w(int i) const { return t_.w(i); }
    cplx psi(int i) const { return t_.psi(i); }
    cplx phi() const { return d_.phi; }
    Layout layout(const WilsonObject& X) const { return Layout(t_, X.M); }

    // T1-T7 and the derived T8'-T16'
    ConditionReport check(const WilsonObject& X, const Tolerance& tol) const;

    WilsonObject unit() const;
    WilsonObject zero() const;
    WilsonObject pipe(const GradedBimodule& M) const;
    WilsonObject tensor(const WilsonObject& X, const WilsonObject& Y) const;
    WilsonObject dual(const WilsonObject& X) const;
    WilsonObject direct_sum(const std::vector<const WilsonObject*>& xs) const;
    // image of an idempotent morphism e: X -> X
    WilsonObject retract(const WilsonObject& X, const Morphism& e, const Tolerance& tol) const;

    Morphism average(const Morphism& f, const WilsonObject& X, const WilsonObject& Y) const;
    // the averaging projector on grade-preserving maps X -> Y, in the flat coordinates below
    Mat average_matrix(const WilsonObject& X, const WilsonObject& Y) const;
    // orthonormal basis of Hom_{C_A}(X, Y) in flat coordinates
    Mat hom_basis(const WilsonObject& X, const WilsonObject& Y, const Tolerance& tol) const;
    int hom_dim(const WilsonObject& X, const WilsonObject& Y, const Tolerance& tol) const;
    // residual of condition (M)
    double morphism_residual(const Morphism& f, const WilsonObject& X, const WilsonObject& Y) const;

    // flat coordinates: blocks (p,q) in ascending order, column-major within a block
    Vec flatten(const Morphism& f, const WilsonObject& X, const WilsonObject& Y) const;
    Morphism unflatten(const Vec& v, const WilsonObject& X, const WilsonObject& Y) const;

    Morphism identity(const WilsonObject& X) const;
    Morphism compose(const Morphism& g, const Morphism& f) const;
    Morphism braiding(const WilsonObject& X, const WilsonObject& Y) const;          // X(x)Y -> Y(x)X
    Morphism braiding_inverse(const WilsonObject& X, const WilsonObject& Y) const;  // Y(x)X -> X(x)Y
    Morphism tensor_morphisms(const Morphism& f, const Morphism& g, const WilsonObject& X1,
                              const WilsonObject& Y1, const WilsonObject& X2, const WilsonObject& Y2) const;
    // partial trace of the self braiding over the right factor
    Morphism twist(const WilsonObject& X) const;
    cplx twist_scalar(const WilsonObject& X, const Tolerance& tol) const;

    Morphism ev(const WilsonObject& X) const;       // X* (x) X -> 1
    Morphism ev_tilde(const WilsonObject& X) const;  // X (x) X* -> 1
    Morphism coev(const WilsonObject& X) const;      // 1 -> X (x) X*
    Morphism coev_tilde(const WilsonObject& X) const;  // 1 -> X* (x) X

    // tr(w_p w_q f_pq) / tr psi^4; throws SimplenessRequired for non-simple data
    cplx trace(const Morphism& f) const;
    cplx qdim(const WilsonObject& X) const;
    // categorical left/right traces; entry p is the End(1) component at grade (p,p)
    std::vector<cplx> left_trace(const Morphism& f, const WilsonObject& X) const;
    std::vector<cplx> right_trace(const Morphism& f, const WilsonObject& X) const;

    bool is_simple_datum(const Tolerance& tol) const;

private:
    OrbifoldDatum d_;
    AlphaTable t_;
    mutable std::optional<bool> simple_;
};

struct CAModularData {
    std::vector<WilsonObject> simples;
    ModularData md;
    ConditionReport checks;
};

WilsonObject unit_object(const OrbifoldDatum& d);
bool datum_is_simple(const OrbifoldDatum& d, const Tolerance& tol = {});
ConditionReport check_wilson(const WilsonObject& X, const OrbifoldDatum& d, const Tolerance& tol);

// All simple objects up to isomorphism; unit first.
std::vector<WilsonObject> enumerate_simples(const WilsonCategory& C, std::uint64_t seed, const Tolerance& tol);
CAModularData modular_data(const WilsonCategory& C, std::uint64_t seed, const Tolerance& tol);
// N[a][b][c] = dim Hom(X_a (x) X_b, X_c)
std::vector<std::vector<std::vector<int>>> fusion_rules(const WilsonCategory& C,
                                                        const std::vector<WilsonObject>& simples,
                                                        const Tolerance& tol);

}  // namespace orbicat
