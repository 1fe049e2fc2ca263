#include "cgebd/params.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "cgebd/errors.hpp"
#include "cgebd/rng.hpp"

namespace cgebd {

void SgdConfig::validate() const {
    if (learning_rate < 0 || momentum < 0 || weight_decay < 0)
        throw ConfigError("SgdConfig: negative hyperparameter");
    if (decay_factor <= 0 || decay_factor > 1) throw ConfigError("SgdConfig: decay_factor must be in (0,1]");
    if (epochs < 1) throw ConfigError("SgdConfig: epochs must be >= 1");
}

double learning_rate_at(const SgdConfig& cfg, int epoch) {
    double lr = cfg.learning_rate;
    for (int d : cfg.decay_epochs) {
        if (epoch >= d) lr *= cfg.decay_factor;
    }
    return lr;
}

Tensor& ParamSet::add(const std::string& name, Tensor init) {
    if (find(name) != nullptr) throw std::invalid_argument("ParamSet: duplicate parameter name " + name);
    Entry e;
    e.name = name;
    e.grad = Tensor(init.shape());
    e.momentum = Tensor(init.shape());
    e.value = std::move(init);
    entries_.push_back(std::move(e));
    return entries_.back().value;
}

ParamSet::Entry* ParamSet::find(std::string_view name) {
    for (auto& e : entries_)
        if (e.name == name) return &e;
    return nullptr;
}

const ParamSet::Entry* ParamSet::find(std::string_view name) const {
    for (const auto& e : entries_)
        if (e.name == name) return &e;
    return nullptr;
}

const Tensor& ParamSet::value(std::string_view name) const {
    const Entry* e = find(name);
    if (!e) throw std::invalid_argument("ParamSet: unknown parameter " + std::string(name));
    return e->value;
}

size_t ParamSet::total_elements() const {
    size_t n = 0;
    for (const auto& e : entries_) n += e.value.size();
    return n;
}

void ParamSet::zero_grads() {
    for (auto& e : entries_) e.grad.fill(0.0);
}

void sgd_step(ParamSet& params, const SgdConfig& cfg, int epoch) {
    cfg.validate();
    const double lr = learning_rate_at(cfg, epoch);
    for (auto& e : params.entries()) {
        for (size_t i = 0; i < e.value.size(); ++i) {
            const double g = e.grad[i];
            if (!std::isfinite(g))
                throw NumericError("sgd_step: non-finite gradient in parameter " + e.name);
            const double g_eff = g + cfg.weight_decay * e.value[i];
            e.momentum[i] = cfg.momentum * e.momentum[i] + g_eff;
            e.value[i] -= lr * e.momentum[i];
        }
    }
}

Tensor fan_in_uniform(std::vector<int> shape, int fan_in, uint64_t seed, std::string_view name) {
    if (fan_in < 1) throw std::invalid_argument("fan_in_uniform: fan_in must be >= 1");
    Rng rng(mix_seed(seed, hash_string(name)));
    const double bound = std::sqrt(6.0 / static_cast<double>(fan_in));
    Tensor t(std::move(shape));
    for (size_t i = 0; i < t.size(); ++i) t[i] = rng.uniform(-bound, bound);
    return t;
}

}  // namespace cgebd
