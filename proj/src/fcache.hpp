#pragma once
#include <algorithm>
#include <array>
#include <map>

#include "orbicat/fusion.hpp"

namespace orbicat::detail {

// cached F blocks with channel lookup
class FCache {
public:
    explicit FCache(const SkeletalCategory& c) : c_(c) {}
    // F(i,j,k,l)[b,a]
    cplx f(int i, int j, int k, int l, int b, int a) { return c_.f(i, j, k, l, b, a); }
    // inverse block entry a <- b
    cplx finv(int i, int j, int k, int l, int a, int b) {
        auto key = std::array<int, 4>{i, j, k, l};
        auto it = inv_.find(key);
        if (it == inv_.end()) {
            Blk blk{c_.left_channels(i, j, k, l), c_.right_channels(i, j, k, l), Mat()};
            if (!blk.bs.empty()) blk.m = c_.fmat_inv(i, j, k, l);
            it = inv_.emplace(key, std::move(blk)).first;
        }
        const Blk& b0 = it->second;
        auto pb = std::find(b0.bs.begin(), b0.bs.end(), b);
        auto pa = std::find(b0.as.begin(), b0.as.end(), a);
        if (pb == b0.bs.end() || pa == b0.as.end()) return 0.0;
        return b0.m(pa - b0.as.begin(), pb - b0.bs.begin());
    }

private:
    struct Blk {
        std::vector<int> bs, as;
        Mat m;
    };
    const SkeletalCategory& c_;
    std::map<std::array<int, 4>, Blk> inv_;
};

}  // namespace orbicat::detail
