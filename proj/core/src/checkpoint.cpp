#include "cgebd/checkpoint.hpp"

#include <cstring>

#include "cgebd/container.hpp"
#include "cgebd/errors.hpp"

namespace cgebd {

namespace {
constexpr char kMagic[4] = {'C', 'K', 'P', '1'};
}

std::vector<uint8_t> serialize_checkpoint(const ParamSet& params) {
    std::vector<uint8_t> out;
    out.insert(out.end(), kMagic, kMagic + 4);
    auto put_u16 = [&](uint16_t v) {
        out.push_back(static_cast<uint8_t>(v & 0xff));
        out.push_back(static_cast<uint8_t>(v >> 8));
    };
    auto put_u32 = [&](uint32_t v) {
        for (int i = 0; i < 4; ++i) out.push_back(static_cast<uint8_t>((v >> (8 * i)) & 0xff));
    };
    put_u32(static_cast<uint32_t>(params.entries().size()));
    for (const auto& e : params.entries()) {
        if (e.name.size() > 0xffff) throw DataError("checkpoint: parameter name too long");
        put_u16(static_cast<uint16_t>(e.name.size()));
        out.insert(out.end(), e.name.begin(), e.name.end());
        out.push_back(static_cast<uint8_t>(e.value.rank()));
        for (int d : e.value.shape()) put_u32(static_cast<uint32_t>(d));
        const size_t base = out.size();
        out.resize(base + e.value.size() * 8);
        std::memcpy(out.data() + base, e.value.data(), e.value.size() * 8);
    }
    return out;
}

void save_checkpoint(const ParamSet& params, const std::string& path) {
    write_file_bytes(path, serialize_checkpoint(params));
}

void load_checkpoint(ParamSet& params, const std::string& path) {
    const std::vector<uint8_t> bytes = read_file_bytes(path);
    size_t pos = 0;
    auto need = [&](size_t n, const char* what) {
        if (pos + n > bytes.size())
            throw DataError(path + ": truncated checkpoint, need " + std::to_string(n) + " byte(s) for " +
                            what + " at offset " + std::to_string(pos));
    };
    need(4, "magic");
    if (std::memcmp(bytes.data(), kMagic, 4) != 0)
        throw DataError(path + ": bad magic, expected \"CKP1\"");
    pos = 4;
    auto get_u16 = [&](const char* what) {
        need(2, what);
        uint16_t v = static_cast<uint16_t>(bytes[pos]) | static_cast<uint16_t>(bytes[pos + 1]) << 8;
        pos += 2;
        return v;
    };
    auto get_u32 = [&](const char* what) {
        need(4, what);
        uint32_t v = 0;
        for (int i = 0; i < 4; ++i) v |= static_cast<uint32_t>(bytes[pos + i]) << (8 * i);
        pos += 4;
        return v;
    };

    const uint32_t count = get_u32("count");
    if (count != params.entries().size())
        throw DataError(path + ": checkpoint has " + std::to_string(count) + " parameters, model expects " +
                        std::to_string(params.entries().size()));

    size_t loaded = 0;
    for (uint32_t i = 0; i < count; ++i) {
        const uint16_t name_len = get_u16("name length");
        need(name_len, "name");
        std::string name(reinterpret_cast<const char*>(bytes.data() + pos), name_len);
        pos += name_len;
        need(1, "rank");
        const uint8_t rank = bytes[pos++];
        std::vector<int> shape(rank);
        for (uint8_t d = 0; d < rank; ++d) shape[d] = static_cast<int>(get_u32("dim"));

        ParamSet::Entry* e = params.find(name);
        if (!e) throw DataError(path + ": checkpoint parameter \"" + name + "\" not in model");
        if (e->value.shape() != shape)
            throw DataError(path + ": shape mismatch for \"" + name + "\": checkpoint " + shape_str(shape) +
                            ", model " + shape_str(e->value.shape()));
        const size_t n = shape_size(shape);
        need(n * 8, "data");
        std::memcpy(e->value.data(), bytes.data() + pos, n * 8);
        pos += n * 8;
        ++loaded;
    }
    if (pos != bytes.size()) throw DataError(path + ": trailing bytes in checkpoint");
    if (loaded != params.entries().size()) throw DataError(path + ": missing parameters in checkpoint");
}

}  // namespace cgebd
