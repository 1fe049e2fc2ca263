#include "cgebd/video.hpp"

#include <stdexcept>
#include <string>

#include "cgebd/errors.hpp"

namespace cgebd {

void RawVideo::validate() const {
    if (width <= 0 || height <= 0) throw std::invalid_argument("RawVideo: non-positive dimensions");
    if (!(fps > 0.0f)) throw std::invalid_argument("RawVideo: fps must be > 0");
    if (frames.empty()) throw std::invalid_argument("RawVideo: at least one frame required");
    const size_t plane = static_cast<size_t>(3) * width * height;
    for (const auto& f : frames) {
        if (f.size() != plane) throw std::invalid_argument("RawVideo: frame size mismatch");
    }
}

bool operator==(const RawVideo& a, const RawVideo& b) {
    return a.width == b.width && a.height == b.height && a.fps == b.fps && a.frames == b.frames;
}

void CodecParams::validate() const {
    if (block_size < 1 || block_size > 255) throw std::invalid_argument("CodecParams: block_size out of [1,255]");
    if (search_radius < 0 || search_radius > 127)
        throw std::invalid_argument("CodecParams: search_radius out of [0,127]");
    if (gop_pframes < 1 || gop_pframes > 255) throw std::invalid_argument("CodecParams: gop_pframes out of [1,255]");
}

int CompressedVideo::num_frames() const {
    int n = 0;
    for (const auto& g : gops) n += 1 + static_cast<int>(g.pframes.size());
    return n;
}

int CompressedVideo::motion_rows() const { return ceil_div(height, params.block_size); }
int CompressedVideo::motion_cols() const { return ceil_div(width, params.block_size); }

void CompressedVideo::validate() const {
    params.validate();
    if (width <= 0 || height <= 0) throw DataError("CompressedVideo: non-positive dimensions");
    if (!(fps > 0.0f)) throw DataError("CompressedVideo: fps must be > 0");
    if (gops.empty()) throw DataError("CompressedVideo: at least one GOP required");
    const size_t plane = static_cast<size_t>(3) * width * height;
    const size_t blocks = static_cast<size_t>(motion_rows()) * motion_cols();
    for (size_t gi = 0; gi < gops.size(); ++gi) {
        const Gop& g = gops[gi];
        if (g.iframe.size() != plane) throw DataError("CompressedVideo: I-frame size mismatch in GOP " + std::to_string(gi));
        const size_t np = g.pframes.size();
        if (np > static_cast<size_t>(params.gop_pframes))
            throw DataError("CompressedVideo: GOP " + std::to_string(gi) + " has more P-frames than t_enc");
        if (gi + 1 < gops.size() && np != static_cast<size_t>(params.gop_pframes))
            throw DataError("CompressedVideo: non-final GOP " + std::to_string(gi) + " must have exactly t_enc P-frames");
        for (size_t pi = 0; pi < np; ++pi) {
            const PFrame& p = g.pframes[pi];
            if (p.motion.rows != motion_rows() || p.motion.cols != motion_cols() ||
                p.motion.dy.size() != blocks || p.motion.dx.size() != blocks)
                throw DataError("CompressedVideo: motion grid shape mismatch in GOP " + std::to_string(gi));
            for (size_t i = 0; i < blocks; ++i) {
                if (p.motion.dy[i] < -params.search_radius || p.motion.dy[i] > params.search_radius ||
                    p.motion.dx[i] < -params.search_radius || p.motion.dx[i] > params.search_radius)
                    throw DataError("CompressedVideo: motion vector magnitude exceeds search radius in GOP " +
                                    std::to_string(gi));
            }
            if (p.residual.values.size() != plane)
                throw DataError("CompressedVideo: residual size mismatch in GOP " + std::to_string(gi));
            for (int16_t v : p.residual.values) {
                if (v < -255 || v > 255)
                    throw DataError("CompressedVideo: residual value out of [-255,255] in GOP " + std::to_string(gi));
            }
        }
    }
}

bool structurally_equal(const CompressedVideo& a, const CompressedVideo& b) {
    if (a.params.block_size != b.params.block_size || a.params.gop_pframes != b.params.gop_pframes) return false;
    if (a.width != b.width || a.height != b.height || a.fps != b.fps) return false;
    if (a.gops.size() != b.gops.size()) return false;
    for (size_t i = 0; i < a.gops.size(); ++i) {
        const Gop& ga = a.gops[i];
        const Gop& gb = b.gops[i];
        if (ga.iframe != gb.iframe) return false;
        if (ga.pframes.size() != gb.pframes.size()) return false;
        for (size_t j = 0; j < ga.pframes.size(); ++j) {
            const PFrame& pa = ga.pframes[j];
            const PFrame& pb = gb.pframes[j];
            if (pa.motion.rows != pb.motion.rows || pa.motion.cols != pb.motion.cols) return false;
            if (pa.motion.dy != pb.motion.dy || pa.motion.dx != pb.motion.dx) return false;
            if (pa.residual.values != pb.residual.values) return false;
        }
    }
    return true;
}

}  // namespace cgebd
