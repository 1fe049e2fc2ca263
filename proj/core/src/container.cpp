#include "cgebd/container.hpp"

#include <cstring>
#include <fstream>
#include <string>

#include "cgebd/errors.hpp"

namespace cgebd {

namespace {

constexpr char kMagic[4] = {'C', 'G', 'V', '1'};
constexpr uint8_t kVersion = 1;

class ByteWriter {
public:
    void u8(uint8_t v) { buf_.push_back(v); }
    void u16(uint16_t v) {
        buf_.push_back(static_cast<uint8_t>(v & 0xff));
        buf_.push_back(static_cast<uint8_t>(v >> 8));
    }
    void u32(uint32_t v) {
        for (int i = 0; i < 4; ++i) buf_.push_back(static_cast<uint8_t>((v >> (8 * i)) & 0xff));
    }
    void f32(float v) {
        uint32_t bits;
        std::memcpy(&bits, &v, 4);
        u32(bits);
    }
    void i16(int16_t v) { u16(static_cast<uint16_t>(v)); }
    void bytes(const uint8_t* p, size_t n) { buf_.insert(buf_.end(), p, p + n); }
    std::vector<uint8_t> take() { return std::move(buf_); }

private:
    std::vector<uint8_t> buf_;
};

class ByteReader {
public:
    ByteReader(const uint8_t* data, size_t size) : data_(data), size_(size) {}

    size_t offset() const { return pos_; }

    void need(size_t n, const char* what) const {
        if (pos_ + n > size_)
            throw DataError("truncated container: need " + std::to_string(n) + " byte(s) for " + what +
                            " at offset " + std::to_string(pos_));
    }
    uint8_t u8(const char* what) {
        need(1, what);
        return data_[pos_++];
    }
    uint16_t u16(const char* what) {
        need(2, what);
        uint16_t v = static_cast<uint16_t>(data_[pos_]) | static_cast<uint16_t>(data_[pos_ + 1]) << 8;
        pos_ += 2;
        return v;
    }
    uint32_t u32(const char* what) {
        need(4, what);
        uint32_t v = 0;
        for (int i = 0; i < 4; ++i) v |= static_cast<uint32_t>(data_[pos_ + i]) << (8 * i);
        pos_ += 4;
        return v;
    }
    float f32(const char* what) {
        uint32_t bits = u32(what);
        float v;
        std::memcpy(&v, &bits, 4);
        return v;
    }
    int16_t i16() { return static_cast<int16_t>(static_cast<uint16_t>(data_[pos_++]) |
                                                static_cast<uint16_t>(data_[pos_++]) << 8); }
    const uint8_t* raw(size_t n, const char* what) {
        need(n, what);
        const uint8_t* p = data_ + pos_;
        pos_ += n;
        return p;
    }

private:
    const uint8_t* data_;
    size_t size_;
    size_t pos_ = 0;
};

}  // namespace

std::vector<uint8_t> serialize_container(const CompressedVideo& cv) {
    cv.validate();
    if (cv.gops.size() > 0xffffffffULL) throw DataError("serialize_container: too many GOPs");

    ByteWriter w;
    w.bytes(reinterpret_cast<const uint8_t*>(kMagic), 4);
    w.u8(kVersion);
    w.u16(static_cast<uint16_t>(cv.width));
    w.u16(static_cast<uint16_t>(cv.height));
    w.f32(cv.fps);
    w.u8(static_cast<uint8_t>(cv.params.block_size));
    w.u8(static_cast<uint8_t>(cv.params.gop_pframes));
    w.u32(static_cast<uint32_t>(cv.gops.size()));

    for (const Gop& gop : cv.gops) {
        w.u8(static_cast<uint8_t>(gop.pframes.size()));
        w.bytes(gop.iframe.data(), gop.iframe.size());
        for (const PFrame& pf : gop.pframes) {
            const size_t blocks = pf.motion.dy.size();
            for (size_t i = 0; i < blocks; ++i) {
                w.u8(static_cast<uint8_t>(pf.motion.dy[i]));
                w.u8(static_cast<uint8_t>(pf.motion.dx[i]));
            }
            for (int16_t v : pf.residual.values) w.i16(v);
        }
    }
    return w.take();
}

CompressedVideo parse_container(const uint8_t* data, size_t size) {
    ByteReader r(data, size);

    const uint8_t* magic = r.raw(4, "magic");
    if (std::memcmp(magic, kMagic, 4) != 0) {
        std::string got(reinterpret_cast<const char*>(magic), 4);
        throw DataError("bad magic: expected \"CGV1\", got \"" + got + "\"");
    }
    const uint8_t version = r.u8("version");
    if (version != kVersion)
        throw DataError("unsupported container version " + std::to_string(version) + " (expected 1)");

    CompressedVideo cv;
    cv.width = r.u16("width");
    cv.height = r.u16("height");
    cv.fps = r.f32("fps");
    cv.params.block_size = r.u8("block_size");
    cv.params.gop_pframes = r.u8("t_enc");
    const uint32_t num_gops = r.u32("num_gops");

    if (cv.width <= 0 || cv.height <= 0) throw DataError("container header: non-positive dimensions");
    if (!(cv.fps > 0.0f)) throw DataError("container header: fps must be > 0");
    if (cv.params.block_size < 1) throw DataError("container header: block_size must be >= 1");
    if (cv.params.gop_pframes < 1) throw DataError("container header: t_enc must be >= 1");
    if (num_gops < 1) throw DataError("container header: num_gops must be >= 1");

    const size_t plane = static_cast<size_t>(3) * cv.width * cv.height;
    const int rows = ceil_div(cv.height, cv.params.block_size);
    const int cols = ceil_div(cv.width, cv.params.block_size);
    const size_t blocks = static_cast<size_t>(rows) * cols;

    int max_component = 0;
    cv.gops.resize(num_gops);
    for (uint32_t gi = 0; gi < num_gops; ++gi) {
        Gop& gop = cv.gops[gi];
        const uint8_t pframe_count = r.u8("pframe_count");
        if (pframe_count > cv.params.gop_pframes)
            throw DataError("GOP " + std::to_string(gi) + ": pframe_count " + std::to_string(pframe_count) +
                            " exceeds t_enc " + std::to_string(cv.params.gop_pframes));
        if (gi + 1 < num_gops && pframe_count != cv.params.gop_pframes)
            throw DataError("GOP " + std::to_string(gi) + ": non-final GOP must have exactly t_enc P-frames");

        const uint8_t* iframe = r.raw(plane, "I-frame");
        gop.iframe.assign(iframe, iframe + plane);

        gop.pframes.resize(pframe_count);
        for (int pi = 0; pi < pframe_count; ++pi) {
            PFrame& pf = gop.pframes[pi];
            pf.motion.rows = rows;
            pf.motion.cols = cols;
            pf.motion.dy.resize(blocks);
            pf.motion.dx.resize(blocks);
            const uint8_t* mv = r.raw(blocks * 2, "motion grid");
            for (size_t i = 0; i < blocks; ++i) {
                pf.motion.dy[i] = static_cast<int8_t>(mv[2 * i]);
                pf.motion.dx[i] = static_cast<int8_t>(mv[2 * i + 1]);
                max_component = std::max({max_component, std::abs(static_cast<int>(pf.motion.dy[i])),
                                          std::abs(static_cast<int>(pf.motion.dx[i]))});
            }
            const uint8_t* res = r.raw(plane * 2, "residual");
            pf.residual.values.resize(plane);
            for (size_t i = 0; i < plane; ++i) {
                const int16_t v = static_cast<int16_t>(static_cast<uint16_t>(res[2 * i]) |
                                                       static_cast<uint16_t>(res[2 * i + 1]) << 8);
                if (v < -255 || v > 255)
                    throw DataError("GOP " + std::to_string(gi) + ": residual value " + std::to_string(v) +
                                    " out of [-255,255]");
                pf.residual.values[i] = v;
            }
        }
    }
    if (r.offset() != size)
        throw DataError("container has " + std::to_string(size - r.offset()) + " trailing byte(s)");

    // The radius is not stored; adopt the smallest one consistent with the data.
    cv.params.search_radius = std::max(max_component, 0);
    cv.validate();
    return cv;
}

void write_container(const CompressedVideo& cv, const std::string& path) {
    write_file_bytes(path, serialize_container(cv));
}

CompressedVideo read_container(const std::string& path) {
    const std::vector<uint8_t> bytes = read_file_bytes(path);
    try {
        return parse_container(bytes.data(), bytes.size());
    } catch (const DataError& e) {
        throw DataError(path + ": " + e.what());
    }
}

std::vector<uint8_t> read_file_bytes(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw DataError("cannot open file: " + path);
    in.seekg(0, std::ios::end);
    const std::streamoff size = in.tellg();
    in.seekg(0, std::ios::beg);
    std::vector<uint8_t> bytes(static_cast<size_t>(size));
    if (size > 0) in.read(reinterpret_cast<char*>(bytes.data()), size);
    if (!in) throw DataError("failed to read file: " + path);
    return bytes;
}

void write_file_bytes(const std::string& path, const std::vector<uint8_t>& bytes) {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw DataError("cannot open file for writing: " + path);
    out.write(reinterpret_cast<const char*>(bytes.data()), static_cast<std::streamsize>(bytes.size()));
    if (!out) throw DataError("failed to write file: " + path);
}

}  // namespace cgebd
