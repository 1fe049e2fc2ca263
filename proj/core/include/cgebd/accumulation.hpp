#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "cgebd/video.hpp"

namespace cgebd {

// Per-pixel motion and residual of P-frame t, traced back through the whole
// P-frame chain so the frame depends only on its GOP's I-frame:
//   F^t(p) = I(clamp(p + A^t(p))) + D^t(p), exactly.
// A is the end-to-end offset with the clamp applied on every hop, so
// p + A^t(p) always lands where sequential tracing lands (in frame).
struct AccumulatedPFrame {
    int t = 0;  // 1-based P-frame index within its GOP
    int height = 0;
    int width = 0;
    std::vector<int32_t> ay;  // H*W accumulated dy
    std::vector<int32_t> ax;  // H*W accumulated dx
    std::vector<int32_t> d;   // 3*H*W accumulated residual, frame byte order
};

struct AccumulateStats {
    uint64_t compositions = 0;  // one per (pixel, frame) processed
};

// Backward composition in O(T*H*W):
//   A^1(p) = clamp(p + M^1(p)) - p,                D^1(p) = R^1(p)
//   A^t(p) = q + A^{t-1}(q) - p, q = clamp(p+M^t), D^t(p) = R^t(p) + D^{t-1}(q)
// A GOP with zero P-frames yields an empty list.
std::vector<AccumulatedPFrame> accumulate_gop(const Gop& gop, int block_size, int height, int width,
                                              AccumulateStats* stats = nullptr);

// Rebuilds P-frame t from the I-frame alone; must equal the sequentially
// decoded frame bit for bit.
FramePlane reconstruct_from_accumulated(const FramePlane& iframe, const AccumulatedPFrame& acc);

// Debug dump: magic "ACC1" | u16 width | u16 height | u8 t | A as H*W pairs of
// i16 (dy, dx) | D as 3*H*W i16, both in frame byte order.
void write_accumulated_dump(const AccumulatedPFrame& acc, const std::string& path);

}  // namespace cgebd
