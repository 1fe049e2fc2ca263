#pragma once

#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

#include "cgebd/tensor.hpp"

namespace cgebd {

struct SgdConfig {
    double learning_rate = 1e-2;
    double momentum = 0.9;
    double weight_decay = 1e-4;
    std::vector<int> decay_epochs{16, 24};
    double decay_factor = 0.1;
    int epochs = 30;

    void validate() const;
};

// Effective learning rate for a 1-based epoch: the base rate times
// decay_factor once per decay epoch already reached.
double learning_rate_at(const SgdConfig& cfg, int epoch);

// Named parameters with paired gradient and momentum buffers, kept in
// insertion order so batch accumulation and updates are deterministic.
class ParamSet {
public:
    struct Entry {
        std::string name;
        Tensor value;
        Tensor grad;
        Tensor momentum;
    };

    Tensor& add(const std::string& name, Tensor init);
    Entry* find(std::string_view name);
    const Entry* find(std::string_view name) const;
    const Tensor& value(std::string_view name) const;

    std::vector<Entry>& entries() { return entries_; }
    const std::vector<Entry>& entries() const { return entries_; }
    size_t total_elements() const;

    void zero_grads();

private:
    std::vector<Entry> entries_;
};

// g' = g + weight_decay * w;  v <- momentum * v + g';  w <- w - lr(epoch) * v.
// Throws NumericError if any gradient is not finite.
void sgd_step(ParamSet& params, const SgdConfig& cfg, int epoch);

// Uniform init in [-sqrt(6/fan_in), +sqrt(6/fan_in)] from a stream derived
// from (seed, name), so layouts can change without reshuffling other layers.
Tensor fan_in_uniform(std::vector<int> shape, int fan_in, uint64_t seed, std::string_view name);

}  // namespace cgebd
