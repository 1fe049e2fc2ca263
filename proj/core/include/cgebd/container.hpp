#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "cgebd/video.hpp"

namespace cgebd {

// Container layout (all multi-byte fields little-endian):
//   magic "CGV1" | u8 version=1 | u16 width | u16 height | f32 fps
//   u8 block_size | u8 t_enc | u32 num_gops
//   per GOP:
//     u8 pframe_count
//     I-frame: 3*H*W bytes, row-major, pixel-interleaved RGB
//     per P-frame:
//       MV grid: ceil(H/B)*ceil(W/B) pairs of i8 (dy, dx), row-major
//       residual: 3*H*W i16, same ordering as the I-frame bytes
//
// The encoder's search radius is not persisted; read_container sets it to the
// largest motion component seen (never below the format's own bound checks).
std::vector<uint8_t> serialize_container(const CompressedVideo& cv);
CompressedVideo parse_container(const uint8_t* data, size_t size);

void write_container(const CompressedVideo& cv, const std::string& path);
CompressedVideo read_container(const std::string& path);

// Debug dump of accumulated motion/residual planes, magic "ACC1"; see
// accumulation.hpp for the writer.

std::vector<uint8_t> read_file_bytes(const std::string& path);
void write_file_bytes(const std::string& path, const std::vector<uint8_t>& bytes);

}  // namespace cgebd
