#pragma once

#include <cstdint>
#include <vector>

namespace cgebd {

// Frames are 8-bit RGB, row-major, pixel-interleaved: idx = (y*W + x)*3 + c.
using FramePlane = std::vector<uint8_t>;

struct RawVideo {
    int width = 0;
    int height = 0;
    float fps = 0.0f;
    std::vector<FramePlane> frames;

    void validate() const;  // throws std::invalid_argument
};

bool operator==(const RawVideo& a, const RawVideo& b);

struct CodecParams {
    int block_size = 8;     // B
    int search_radius = 8;  // S, integer-pel
    int gop_pframes = 11;   // T_enc

    void validate() const;
};

// One (dy, dx) offset per block, row-major over the ceil(H/B) x ceil(W/B)
// grid. Prediction convention, shared project-wide:
//   prediction(p) = reference(clamp(p + mv(block of p)))
struct MotionField {
    int rows = 0;
    int cols = 0;
    std::vector<int8_t> dy;
    std::vector<int8_t> dx;

    int8_t& dy_at(int r, int c) { return dy[static_cast<size_t>(r) * cols + c]; }
    int8_t& dx_at(int r, int c) { return dx[static_cast<size_t>(r) * cols + c]; }
    int8_t dy_at(int r, int c) const { return dy[static_cast<size_t>(r) * cols + c]; }
    int8_t dx_at(int r, int c) const { return dx[static_cast<size_t>(r) * cols + c]; }
};

// 3*H*W signed values in [-255, 255], same ordering as frame bytes.
struct ResidualPlane {
    std::vector<int16_t> values;
};

struct PFrame {
    MotionField motion;
    ResidualPlane residual;
};

struct Gop {
    FramePlane iframe;
    std::vector<PFrame> pframes;
};

struct CompressedVideo {
    CodecParams params;
    int width = 0;
    int height = 0;
    float fps = 0.0f;
    std::vector<Gop> gops;

    int num_frames() const;
    int motion_rows() const;
    int motion_cols() const;
    void validate() const;  // throws DataError on malformed structure
};

// Equality over everything the container persists. The search radius is an
// encoder-side knob that is not stored on disk, so it is excluded here.
bool structurally_equal(const CompressedVideo& a, const CompressedVideo& b);

inline int ceil_div(int a, int b) { return (a + b - 1) / b; }

}  // namespace cgebd
