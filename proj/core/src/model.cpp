#include "cgebd/model.hpp"

#include <stdexcept>

namespace cgebd {

GebdModel::GebdModel(ModelConfig cfg) : cfg_(cfg) { cfg_.validate(); }

void GebdModel::init(uint64_t seed) {
    params_ = ParamSet();
    scce::build_params(params_, cfg_, seed);
}

std::vector<Tape::Id> GebdModel::encode_gop(Tape& t, const GopInputs& gop) const {
    if (gop.iframe.empty()) throw std::invalid_argument("encode_gop: empty GOP inputs");

    const Tape::Id image = t.input(gop.iframe);
    const Tape::Id x_i = scce::iframe_features(t, params_, image);

    std::vector<Tape::Id> embeddings;
    embeddings.reserve(1 + gop.pframes.size());
    embeddings.push_back(t.global_avg_pool(x_i));  // e_I shares the embedding space

    for (const PFrameInput& pf : gop.pframes) {
        const Tape::Id motion = t.input(pf.motion);
        const Tape::Id residual = t.input(pf.residual);
        const Tape::Id x_m = scce::motion_features(t, params_, motion);
        const Tape::Id x_r = scce::residual_features(t, params_, residual);

        if (cfg_.vanilla) {
            embeddings.push_back(t.add(t.global_avg_pool(x_m), t.global_avg_pool(x_r)));
            continue;
        }

        const Tape::Id motion_ds = t.input(pf.motion_ds);
        const Tape::Id residual_ds = t.input(pf.residual_ds);

        // One trunk evaluation per branch feeds both gates.
        const Tape::Id z_m = scce::fusion_trunk(t, params_, "m", x_i, x_m, motion_ds);
        const scce::BranchEmbedding m =
            scce::refine_branch(t, x_i, scce::channel_gate(t, params_, "m", z_m),
                                scce::spatial_gate(t, params_, "m", z_m), x_m);

        const Tape::Id z_r = scce::fusion_trunk(t, params_, "r", x_i, x_r, residual_ds);
        const scce::BranchEmbedding r =
            scce::refine_branch(t, x_i, scce::channel_gate(t, params_, "r", z_r),
                                scce::spatial_gate(t, params_, "r", z_r), x_r);

        embeddings.push_back(t.add(m.v, r.v));  // v~ = v_M + v_R
    }
    return embeddings;
}

Tape::Id GebdModel::score_sequence(Tape& t, const std::vector<GopInputs>& gops) const {
    std::vector<Tape::Id> columns;
    for (const GopInputs& gop : gops) {
        const std::vector<Tape::Id> emb = encode_gop(t, gop);
        columns.insert(columns.end(), emb.begin(), emb.end());
    }
    if (columns.empty()) throw std::invalid_argument("score_sequence: no embeddings");
    const Tape::Id seq = t.stack_columns(columns);
    const Tape::Id contrast = contrast_features(t, params_, seq, cfg_.window_k);
    return classify_scores(t, params_, contrast);
}

std::vector<int> sequence_frame_indices(const std::vector<GopInputs>& gops) {
    std::vector<int> out;
    for (const GopInputs& gop : gops) {
        out.push_back(gop.iframe_index);
        for (const PFrameInput& pf : gop.pframes) out.push_back(pf.frame_index);
    }
    return out;
}

}  // namespace cgebd
