#include "cgebd/codec.hpp"

#include <algorithm>
#include <cstdlib>
#include <limits>
#include <stdexcept>
#include <string>

#include "cgebd/errors.hpp"
#include "cgebd/parallel.hpp"

namespace cgebd {

namespace {

inline int clamp_coord(int v, int hi) {
    return v < 0 ? 0 : (v >= hi ? hi - 1 : v);
}

}  // namespace

namespace detail {

int64_t block_sad(const uint8_t* cur, const uint8_t* ref, int width, int height,
                  int y0, int y1, int x0, int x1, int dy, int dx, int64_t cap) {
    int64_t sad = 0;
    const bool x_inside = (x0 + dx >= 0) && (x1 - 1 + dx < width);
    for (int y = y0; y < y1; ++y) {
        const int ry = clamp_coord(y + dy, height);
        const uint8_t* cur_row = cur + (static_cast<size_t>(y) * width) * 3;
        const uint8_t* ref_row = ref + (static_cast<size_t>(ry) * width) * 3;
        if (x_inside) {
            const uint8_t* c = cur_row + static_cast<size_t>(x0) * 3;
            const uint8_t* r = ref_row + static_cast<size_t>(x0 + dx) * 3;
            const int n = (x1 - x0) * 3;
            int64_t row = 0;
            for (int i = 0; i < n; ++i) row += std::abs(static_cast<int>(c[i]) - static_cast<int>(r[i]));
            sad += row;
        } else {
            for (int x = x0; x < x1; ++x) {
                const int rx = clamp_coord(x + dx, width);
                const uint8_t* c = cur_row + static_cast<size_t>(x) * 3;
                const uint8_t* r = ref_row + static_cast<size_t>(rx) * 3;
                sad += std::abs(static_cast<int>(c[0]) - static_cast<int>(r[0]));
                sad += std::abs(static_cast<int>(c[1]) - static_cast<int>(r[1]));
                sad += std::abs(static_cast<int>(c[2]) - static_cast<int>(r[2]));
            }
        }
        if (sad > cap) return sad;  // cannot win anymore; exact compares below cap
    }
    return sad;
}

}  // namespace detail

namespace {

PFrame encode_pframe(const FramePlane& cur, const FramePlane& ref, int width, int height,
                     const CodecParams& params) {
    const int B = params.block_size;
    const int S = params.search_radius;
    const int rows = ceil_div(height, B);
    const int cols = ceil_div(width, B);

    PFrame out;
    out.motion.rows = rows;
    out.motion.cols = cols;
    out.motion.dy.assign(static_cast<size_t>(rows) * cols, 0);
    out.motion.dx.assign(static_cast<size_t>(rows) * cols, 0);

    for (int br = 0; br < rows; ++br) {
        for (int bc = 0; bc < cols; ++bc) {
            const int y0 = br * B;
            const int y1 = std::min(y0 + B, height);
            const int x0 = bc * B;
            const int x1 = std::min(x0 + B, width);

            int64_t best_sad = std::numeric_limits<int64_t>::max();
            int best_l1 = std::numeric_limits<int>::max();
            int best_dy = 0, best_dx = 0;
            for (int dy = -S; dy <= S; ++dy) {
                for (int dx = -S; dx <= S; ++dx) {
                    const int64_t sad = detail::block_sad(cur.data(), ref.data(), width, height,
                                                          y0, y1, x0, x1, dy, dx, best_sad);
                    const int l1 = std::abs(dy) + std::abs(dx);
                    if (sad < best_sad || (sad == best_sad && l1 < best_l1)) {
                        best_sad = sad;
                        best_l1 = l1;
                        best_dy = dy;
                        best_dx = dx;
                    }
                }
            }
            out.motion.dy_at(br, bc) = static_cast<int8_t>(best_dy);
            out.motion.dx_at(br, bc) = static_cast<int8_t>(best_dx);
        }
    }

    // Residual = actual - prediction, stored exactly.
    out.residual.values.resize(static_cast<size_t>(3) * width * height);
    for (int y = 0; y < height; ++y) {
        const int br = y / B;
        for (int x = 0; x < width; ++x) {
            const int bc = x / B;
            const int ry = clamp_coord(y + out.motion.dy_at(br, bc), height);
            const int rx = clamp_coord(x + out.motion.dx_at(br, bc), width);
            const size_t ci = (static_cast<size_t>(y) * width + x) * 3;
            const size_t ri = (static_cast<size_t>(ry) * width + rx) * 3;
            for (int c = 0; c < 3; ++c) {
                out.residual.values[ci + c] =
                    static_cast<int16_t>(static_cast<int>(cur[ci + c]) - static_cast<int>(ref[ri + c]));
            }
        }
    }
    return out;
}

}  // namespace

CompressedVideo encode_video(const RawVideo& video, const CodecParams& params, unsigned threads) {
    video.validate();
    params.validate();
    if (video.width > 0xffff || video.height > 0xffff)
        throw std::invalid_argument("encode_video: dimensions overflow the 16-bit header fields");

    const int gop_len = 1 + params.gop_pframes;
    const int num_frames = static_cast<int>(video.frames.size());
    const int num_gops = ceil_div(num_frames, gop_len);

    CompressedVideo cv;
    cv.params = params;
    cv.width = video.width;
    cv.height = video.height;
    cv.fps = video.fps;
    cv.gops.resize(num_gops);

    // GOPs are independent: the reference chain never crosses a GOP start.
    parallel_for(static_cast<size_t>(num_gops), threads, [&](size_t gi) {
        const int start = static_cast<int>(gi) * gop_len;
        const int end = std::min(start + gop_len, num_frames);
        Gop& gop = cv.gops[gi];
        gop.iframe = video.frames[start];
        gop.pframes.reserve(end - start - 1);
        for (int f = start + 1; f < end; ++f) {
            // Lossless residuals make the reconstructed reference equal the raw frame.
            gop.pframes.push_back(encode_pframe(video.frames[f], video.frames[f - 1],
                                                video.width, video.height, params));
        }
    });
    return cv;
}

RawVideo decode_sequential(const CompressedVideo& cv) {
    cv.validate();

    const int width = cv.width;
    const int height = cv.height;
    const int B = cv.params.block_size;
    const size_t plane = static_cast<size_t>(3) * width * height;

    RawVideo out;
    out.width = width;
    out.height = height;
    out.fps = cv.fps;
    out.frames.reserve(cv.num_frames());

    std::vector<int32_t> prev(plane), cur(plane);
    for (const Gop& gop : cv.gops) {
        out.frames.push_back(gop.iframe);
        for (size_t i = 0; i < plane; ++i) prev[i] = gop.iframe[i];
        for (const PFrame& pf : gop.pframes) {
            for (int y = 0; y < height; ++y) {
                const int br = y / B;
                for (int x = 0; x < width; ++x) {
                    const int bc = x / B;
                    const int ry = clamp_coord(y + pf.motion.dy_at(br, bc), height);
                    const int rx = clamp_coord(x + pf.motion.dx_at(br, bc), width);
                    const size_t ci = (static_cast<size_t>(y) * width + x) * 3;
                    const size_t ri = (static_cast<size_t>(ry) * width + rx) * 3;
                    cur[ci + 0] = prev[ri + 0] + pf.residual.values[ci + 0];
                    cur[ci + 1] = prev[ri + 1] + pf.residual.values[ci + 1];
                    cur[ci + 2] = prev[ri + 2] + pf.residual.values[ci + 2];
                }
            }
            FramePlane bytes(plane);
            for (size_t i = 0; i < plane; ++i)
                bytes[i] = static_cast<uint8_t>(std::clamp(cur[i], 0, 255));
            out.frames.push_back(std::move(bytes));
            std::swap(prev, cur);
        }
    }
    return out;
}

DenseMotion densify_motion_field(const MotionField& mf, int block_size, int height, int width) {
    if (block_size < 1) throw std::invalid_argument("densify_motion_field: block_size must be >= 1");
    if (mf.rows != ceil_div(height, block_size) || mf.cols != ceil_div(width, block_size) ||
        mf.dy.size() != static_cast<size_t>(mf.rows) * mf.cols ||
        mf.dx.size() != static_cast<size_t>(mf.rows) * mf.cols)
        throw std::invalid_argument("densify_motion_field: grid shape inconsistent with frame dimensions");

    DenseMotion out;
    out.height = height;
    out.width = width;
    out.dy.resize(static_cast<size_t>(height) * width);
    out.dx.resize(static_cast<size_t>(height) * width);
    for (int y = 0; y < height; ++y) {
        const int br = y / block_size;
        for (int x = 0; x < width; ++x) {
            const int bc = x / block_size;
            out.dy[static_cast<size_t>(y) * width + x] = mf.dy_at(br, bc);
            out.dx[static_cast<size_t>(y) * width + x] = mf.dx_at(br, bc);
        }
    }
    return out;
}

}  // namespace cgebd
