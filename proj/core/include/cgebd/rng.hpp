#pragma once

#include <cstdint>
#include <string_view>

namespace cgebd {

// xoshiro256++ seeded through splitmix64. Every random draw in the project
// goes through this generator so runs are reproducible across platforms and
// standard-library versions (std::shuffle / std::uniform_* are not portable).
class Rng {
public:
    explicit Rng(uint64_t seed);

    uint64_t next();

    // Uniform in [0, 1) with 53 bits of randomness.
    double uniform();
    double uniform(double lo, double hi);

    // Uniform integer in [0, n). n must be > 0.
    uint64_t bounded(uint64_t n);
    // Uniform integer in [lo, hi], inclusive.
    int uniform_int(int lo, int hi);

private:
    uint64_t s_[4];
};

// Stable FNV-1a hash, used to derive independent streams by name.
uint64_t hash_string(std::string_view s);

// Mixes a base seed with a stream index/name hash into a fresh seed.
uint64_t mix_seed(uint64_t seed, uint64_t stream);

}  // namespace cgebd
