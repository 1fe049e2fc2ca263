#pragma once

#include <cstdint>
#include <vector>

#include "cgebd/video.hpp"

namespace cgebd {

// Encodes into GOPs of one raw I-frame plus up to gop_pframes P-frames, each
// P-frame stored as per-block motion vectors plus a lossless residual. The
// motion search is exhaustive over integer offsets in [-S, S]^2, minimizing
// the sum of absolute differences over the block (all three channels); ties
// go to the smallest |dy|+|dx|, then to row-major offset order. Out-of-frame
// reference coordinates are clamped per axis. Residuals are exact, so
// decoding reproduces the input bit for bit.
CompressedVideo encode_video(const RawVideo& video, const CodecParams& params, unsigned threads = 0);

// Motion-compensated reconstruction: F^0 = I, F^t(p) = F^{t-1}(clamp(p+mv)) + R^t(p).
// Intermediate arithmetic is exact in 32-bit ints; clipping to [0,255] happens
// only at the final conversion to bytes.
RawVideo decode_sequential(const CompressedVideo& cv);

// Per-pixel motion planes; every pixel carries its containing block's vector.
struct DenseMotion {
    int height = 0;
    int width = 0;
    std::vector<int32_t> dy;  // H*W
    std::vector<int32_t> dx;  // H*W
};

DenseMotion densify_motion_field(const MotionField& mf, int block_size, int height, int width);

namespace detail {
// SAD of one block of `cur` against `ref` displaced by (dy, dx), reference
// coordinates clamped into the frame. Exposed for tests.
int64_t block_sad(const uint8_t* cur, const uint8_t* ref, int width, int height,
                  int y0, int y1, int x0, int x1, int dy, int dx, int64_t cap);
}  // namespace detail

}  // namespace cgebd
