#pragma once
#include "orbicat/wilson.hpp"

namespace orbicat::detail {

const Mat* block(const std::map<Grade3, Mat>& m, int l, int i, int j);
const std::map<Grade3, Mat>& taus(const WilsonObject& X, int wh, bool bar);
std::map<Grade3, Mat>& taus(WilsonObject& X, int wh, bool bar);
// bar crossings from the pseudo-inverse relation
void fill_bars(const WilsonCategory& C, WilsonObject& X, int wh);

// (X (x) Y)_{pq} = sum_b X_{pb} (x) Y_{bq}, index b-block then x then y
struct TensorBasis {
    int n;
    std::vector<int> off, size;
    GradedBimodule M, ydim;
    TensorBasis(const GradedBimodule& X, const GradedBimodule& Y);
    int at(int p, int q, int b) const { return off[((size_t)p * n + q) * n + b]; }
    int index(int p, int q, int b, int x, int y) const { return at(p, q, b) + x * ydim.dim(b, q) + y; }
};

}  // namespace orbicat::detail
