#include "cgebd/accumulation.hpp"

#include <algorithm>
#include <stdexcept>

#include "cgebd/codec.hpp"
#include "cgebd/container.hpp"
#include "cgebd/errors.hpp"

namespace cgebd {

namespace {

inline int clamp_coord(int v, int hi) {
    return v < 0 ? 0 : (v >= hi ? hi - 1 : v);
}

}  // namespace

std::vector<AccumulatedPFrame> accumulate_gop(const Gop& gop, int block_size, int height, int width,
                                              AccumulateStats* stats) {
    const size_t npix = static_cast<size_t>(height) * width;
    const size_t plane = npix * 3;
    if (gop.iframe.size() != plane) throw std::invalid_argument("accumulate_gop: I-frame size mismatch");

    std::vector<AccumulatedPFrame> out;
    out.reserve(gop.pframes.size());
    uint64_t compositions = 0;

    const AccumulatedPFrame* prev = nullptr;
    for (size_t pi = 0; pi < gop.pframes.size(); ++pi) {
        const PFrame& pf = gop.pframes[pi];
        if (pf.residual.values.size() != plane)
            throw std::invalid_argument("accumulate_gop: residual size mismatch at P-frame " + std::to_string(pi + 1));
        const DenseMotion mv = densify_motion_field(pf.motion, block_size, height, width);

        AccumulatedPFrame acc;
        acc.t = static_cast<int>(pi) + 1;
        acc.height = height;
        acc.width = width;
        acc.ay.resize(npix);
        acc.ax.resize(npix);
        acc.d.resize(plane);

        for (int y = 0; y < height; ++y) {
            for (int x = 0; x < width; ++x) {
                const size_t p = static_cast<size_t>(y) * width + x;
                const int qy = clamp_coord(y + mv.dy[p], height);
                const int qx = clamp_coord(x + mv.dx[p], width);
                if (prev == nullptr) {
                    acc.ay[p] = qy - y;
                    acc.ax[p] = qx - x;
                    acc.d[p * 3 + 0] = pf.residual.values[p * 3 + 0];
                    acc.d[p * 3 + 1] = pf.residual.values[p * 3 + 1];
                    acc.d[p * 3 + 2] = pf.residual.values[p * 3 + 2];
                } else {
                    const size_t q = static_cast<size_t>(qy) * width + qx;
                    acc.ay[p] = qy + prev->ay[q] - y;
                    acc.ax[p] = qx + prev->ax[q] - x;
                    acc.d[p * 3 + 0] = pf.residual.values[p * 3 + 0] + prev->d[q * 3 + 0];
                    acc.d[p * 3 + 1] = pf.residual.values[p * 3 + 1] + prev->d[q * 3 + 1];
                    acc.d[p * 3 + 2] = pf.residual.values[p * 3 + 2] + prev->d[q * 3 + 2];
                }
                ++compositions;
            }
        }
        out.push_back(std::move(acc));
        prev = &out.back();
    }
    if (stats) stats->compositions = compositions;
    return out;
}

FramePlane reconstruct_from_accumulated(const FramePlane& iframe, const AccumulatedPFrame& acc) {
    const size_t npix = static_cast<size_t>(acc.height) * acc.width;
    if (iframe.size() != npix * 3) throw std::invalid_argument("reconstruct_from_accumulated: I-frame size mismatch");
    if (acc.ay.size() != npix || acc.ax.size() != npix || acc.d.size() != npix * 3)
        throw std::invalid_argument("reconstruct_from_accumulated: accumulated plane size mismatch");

    FramePlane out(npix * 3);
    for (int y = 0; y < acc.height; ++y) {
        for (int x = 0; x < acc.width; ++x) {
            const size_t p = static_cast<size_t>(y) * acc.width + x;
            const int ry = clamp_coord(y + acc.ay[p], acc.height);
            const int rx = clamp_coord(x + acc.ax[p], acc.width);
            const size_t r = static_cast<size_t>(ry) * acc.width + rx;
            for (int c = 0; c < 3; ++c) {
                const int v = static_cast<int>(iframe[r * 3 + c]) + acc.d[p * 3 + c];
                out[p * 3 + c] = static_cast<uint8_t>(std::clamp(v, 0, 255));
            }
        }
    }
    return out;
}

void write_accumulated_dump(const AccumulatedPFrame& acc, const std::string& path) {
    std::vector<uint8_t> bytes;
    bytes.reserve(9 + acc.ay.size() * 4 + acc.d.size() * 2);
    const char magic[4] = {'A', 'C', 'C', '1'};
    bytes.insert(bytes.end(), magic, magic + 4);
    auto put_u16 = [&](uint16_t v) {
        bytes.push_back(static_cast<uint8_t>(v & 0xff));
        bytes.push_back(static_cast<uint8_t>(v >> 8));
    };
    auto put_i16 = [&](int32_t v) { put_u16(static_cast<uint16_t>(static_cast<int16_t>(v))); };
    put_u16(static_cast<uint16_t>(acc.width));
    put_u16(static_cast<uint16_t>(acc.height));
    bytes.push_back(static_cast<uint8_t>(acc.t));
    for (size_t p = 0; p < acc.ay.size(); ++p) {
        put_i16(acc.ay[p]);
        put_i16(acc.ax[p]);
    }
    for (int32_t v : acc.d) put_i16(v);
    write_file_bytes(path, bytes);
}

}  // namespace cgebd
