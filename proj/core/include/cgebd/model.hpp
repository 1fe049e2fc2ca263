#pragma once

#include <cstdint>
#include <vector>

#include "cgebd/boundary.hpp"
#include "cgebd/scce.hpp"

namespace cgebd {

// SCCE encoder plus temporal contrastive boundary head over a whole video.
// The model is pure given its parameters: distinct videos may be evaluated on
// separate tapes in parallel.
class GebdModel {
public:
    explicit GebdModel(ModelConfig cfg);

    void init(uint64_t seed);

    const ModelConfig& config() const { return cfg_; }
    ParamSet& params() { return params_; }
    const ParamSet& params() const { return params_; }

    // Ordered embeddings for one GOP: e_I (gap of x_I) first, then the
    // refined P-frame embeddings in sampled order.
    std::vector<Tape::Id> encode_gop(Tape& t, const GopInputs& gop) const;

    // Concatenated GOP embeddings -> contrast -> Conv1D classifier -> sigmoid.
    // The returned node holds the 1 x L score track.
    Tape::Id score_sequence(Tape& t, const std::vector<GopInputs>& gops) const;

private:
    ModelConfig cfg_;
    ParamSet params_;
};

// Original frame index of every sequence position, in order.
std::vector<int> sequence_frame_indices(const std::vector<GopInputs>& gops);

}  // namespace cgebd
