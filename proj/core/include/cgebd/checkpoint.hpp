#pragma once

#include <string>
#include <vector>

#include "cgebd/params.hpp"

namespace cgebd {

// Checkpoint layout (little-endian):
//   magic "CKP1" | u32 count
//   per parameter: u16 name length | name bytes | u8 rank | u32 per dim | f64 data
std::vector<uint8_t> serialize_checkpoint(const ParamSet& params);
void save_checkpoint(const ParamSet& params, const std::string& path);

// Loads values into an already-built ParamSet; names and shapes must match
// exactly (order in the file is free).
void load_checkpoint(ParamSet& params, const std::string& path);

}  // namespace cgebd
