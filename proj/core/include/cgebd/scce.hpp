#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "cgebd/accumulation.hpp"
#include "cgebd/tape.hpp"
#include "cgebd/video.hpp"

namespace cgebd {

struct ModelConfig {
    int channels = 32;        // C, the shared feature width (divisible by 4)
    int reduction = 4;        // channel-gate bottleneck divisor
    int window_k = 8;         // temporal contrast window
    int sample_pframes = 3;   // P-frames sampled per GOP
    double label_alpha = 1.0; // Gaussian soft-label width
    double score_threshold = 0.5;
    int nms_radius = 2;
    bool vanilla = false;     // bypass the gating path: v = gap(x_M) + gap(x_R)

    void validate() const;
};

// Normalized network inputs for one GOP. Images are scaled to [0,1], motion
// offsets by 1/search_radius, residuals by 1/255. The downsampled planes are
// the raw motion/residual planes average-pooled to the feature resolution
// (H/8 x W/8) for the trunk concatenation.
struct PFrameInput {
    int t = 0;            // 1-based index within the GOP
    int frame_index = 0;  // global frame index
    Tensor motion;        // 2 x H x W
    Tensor residual;      // 3 x H x W
    Tensor motion_ds;     // 2 x H/8 x W/8
    Tensor residual_ds;   // 3 x H/8 x W/8
};

struct GopInputs {
    int iframe_index = 0;
    Tensor iframe;  // 3 x H x W
    std::vector<PFrameInput> pframes;
};

// Evenly spaced sampled P-frame indices: round(j * P / (s+1)) for j = 1..s
// with s = min(sample_count, P), duplicates removed, ascending.
std::vector<int> sample_pframe_indices(int available_pframes, int sample_count);

GopInputs prepare_gop_inputs(const Gop& gop, const CodecParams& params, int height, int width,
                             int gop_start_frame, int sample_pframes);
std::vector<GopInputs> prepare_video_inputs(const CompressedVideo& cv, int sample_pframes);

namespace scce {

// Registers every SCCE + boundary-head parameter with fan-in uniform weights
// and zero biases. Vanilla mode skips the trunk and gate parameters.
void build_params(ParamSet& params, const ModelConfig& cfg, uint64_t seed);

// Feature extractors into the shared C x H/8 x W/8 space. Frame dimensions
// must be divisible by 8.
Tape::Id iframe_features(Tape& t, const ParamSet& p, Tape::Id image);
Tape::Id motion_features(Tape& t, const ParamSet& p, Tape::Id motion);
Tape::Id residual_features(Tape& t, const ParamSet& p, Tape::Id residual);

// Two conv3x3+relu layers over [x_I; x_aux; aux_ds]; one trunk per branch
// ("m" or "r"), parameters shared across t within the branch.
Tape::Id fusion_trunk(Tape& t, const ParamSet& p, const std::string& branch, Tape::Id x_i,
                      Tape::Id x_aux, Tape::Id aux_ds);

// Squeeze-style gate: gap -> C/r dense -> relu -> C dense -> sigmoid.
Tape::Id channel_gate(Tape& t, const ParamSet& p, const std::string& branch, Tape::Id z);

// 3x3 conv to one logit map, then softmax over all positions.
Tape::Id spatial_gate(Tape& t, const ParamSet& p, const std::string& branch, Tape::Id z);

struct BranchEmbedding {
    Tape::Id x_cha;  // channel-reweighted I-frame features
    Tape::Id v_hat;  // spatially pooled refinement (C)
    Tape::Id v;      // v_hat + gap(x_aux) (C)
};

BranchEmbedding refine_branch(Tape& t, Tape::Id x_i, Tape::Id w_cha, Tape::Id w_spa, Tape::Id x_aux);

}  // namespace scce

}  // namespace cgebd
