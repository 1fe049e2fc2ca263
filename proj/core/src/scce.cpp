#include "cgebd/scce.hpp"

#include <cmath>
#include <set>
#include <stdexcept>

#include "cgebd/codec.hpp"
#include "cgebd/errors.hpp"
#include "cgebd/ops.hpp"

namespace cgebd {

void ModelConfig::validate() const {
    if (channels < 4 || channels % 4 != 0) throw ConfigError("ModelConfig: channels must be a positive multiple of 4");
    if (reduction < 1 || channels % reduction != 0)
        throw ConfigError("ModelConfig: reduction must divide channels");
    if (window_k < 0) throw ConfigError("ModelConfig: window_k must be >= 0");
    if (sample_pframes < 0) throw ConfigError("ModelConfig: sample_pframes must be >= 0");
    if (label_alpha <= 0) throw ConfigError("ModelConfig: label_alpha must be > 0");
    if (nms_radius < 0) throw ConfigError("ModelConfig: nms_radius must be >= 0");
}

std::vector<int> sample_pframe_indices(int available_pframes, int sample_count) {
    const int s = std::min(sample_count, available_pframes);
    std::set<int> picked;
    for (int j = 1; j <= s; ++j) {
        const double pos = static_cast<double>(j) * available_pframes / (s + 1);
        picked.insert(static_cast<int>(std::lround(pos)));
    }
    return {picked.begin(), picked.end()};
}

GopInputs prepare_gop_inputs(const Gop& gop, const CodecParams& params, int height, int width,
                             int gop_start_frame, int sample_pframes) {
    if (height % 8 != 0 || width % 8 != 0)
        throw std::invalid_argument("prepare_gop_inputs: frame dimensions must be divisible by 8");

    const size_t npix = static_cast<size_t>(height) * width;
    GopInputs out;
    out.iframe_index = gop_start_frame;
    out.iframe = Tensor({3, height, width});
    // Bytes are pixel-interleaved; tensors are channel-major.
    for (int c = 0; c < 3; ++c)
        for (size_t p = 0; p < npix; ++p)
            out.iframe[static_cast<size_t>(c) * npix + p] = gop.iframe[p * 3 + c] / 255.0;

    const std::vector<int> sampled = sample_pframe_indices(static_cast<int>(gop.pframes.size()), sample_pframes);
    if (sampled.empty()) return out;

    const std::vector<AccumulatedPFrame> acc = accumulate_gop(gop, params.block_size, height, width);
    const double motion_scale = params.search_radius > 0 ? 1.0 / params.search_radius : 1.0;

    for (int t : sampled) {
        const AccumulatedPFrame& a = acc[static_cast<size_t>(t - 1)];
        PFrameInput in;
        in.t = t;
        in.frame_index = gop_start_frame + t;
        in.motion = Tensor({2, height, width});
        in.residual = Tensor({3, height, width});
        for (size_t p = 0; p < npix; ++p) {
            in.motion[p] = a.ay[p] * motion_scale;
            in.motion[npix + p] = a.ax[p] * motion_scale;
        }
        for (int c = 0; c < 3; ++c)
            for (size_t p = 0; p < npix; ++p)
                in.residual[static_cast<size_t>(c) * npix + p] = a.d[p * 3 + c] / 255.0;
        in.motion_ds = ops::avg_pool2d(in.motion, 8);
        in.residual_ds = ops::avg_pool2d(in.residual, 8);
        out.pframes.push_back(std::move(in));
    }
    return out;
}

std::vector<GopInputs> prepare_video_inputs(const CompressedVideo& cv, int sample_pframes) {
    std::vector<GopInputs> out;
    out.reserve(cv.gops.size());
    int frame = 0;
    for (const Gop& gop : cv.gops) {
        out.push_back(prepare_gop_inputs(gop, cv.params, cv.height, cv.width, frame, sample_pframes));
        frame += 1 + static_cast<int>(gop.pframes.size());
    }
    return out;
}

namespace scce {

namespace {

void add_conv(ParamSet& ps, const std::string& name, int cout, int cin, int k, uint64_t seed) {
    ps.add(name + ".w", fan_in_uniform({cout, cin, k, k}, cin * k * k, seed, name + ".w"));
    ps.add(name + ".b", Tensor({cout}));
}

void add_dense(ParamSet& ps, const std::string& name, int out, int in, uint64_t seed) {
    ps.add(name + ".w", fan_in_uniform({out, in}, in, seed, name + ".w"));
    ps.add(name + ".b", Tensor({out}));
}

// conv -> relu, the building block of every extractor and trunk stage.
Tape::Id conv_relu(Tape& t, const ParamSet& p, const std::string& name, Tape::Id x) {
    Tape::Id w = t.param(p, name + ".w");
    Tape::Id b = t.param(p, name + ".b");
    return t.relu(t.conv2d(x, w, b));
}

}  // namespace

void build_params(ParamSet& ps, const ModelConfig& cfg, uint64_t seed) {
    cfg.validate();
    const int c = cfg.channels;
    const int half = c / 2;

    add_conv(ps, "f_i.c1", half, 3, 3, seed);
    add_conv(ps, "f_i.c2", c, half, 3, seed);
    add_conv(ps, "f_i.c3", c, c, 3, seed);
    add_conv(ps, "f_m.c1", half, 2, 3, seed);
    add_conv(ps, "f_m.c2", c, half, 3, seed);
    add_conv(ps, "f_r.c1", half, 3, 3, seed);
    add_conv(ps, "f_r.c2", c, half, 3, seed);

    if (!cfg.vanilla) {
        add_conv(ps, "trunk_m.c1", c, 2 * c + 2, 3, seed);
        add_conv(ps, "trunk_m.c2", c, c, 3, seed);
        add_conv(ps, "trunk_r.c1", c, 2 * c + 3, 3, seed);
        add_conv(ps, "trunk_r.c2", c, c, 3, seed);
        const int mid = c / cfg.reduction;
        add_dense(ps, "gate_m.fc1", mid, c, seed);
        add_dense(ps, "gate_m.fc2", c, mid, seed);
        add_dense(ps, "gate_r.fc1", mid, c, seed);
        add_dense(ps, "gate_r.fc2", c, mid, seed);
        add_conv(ps, "gate_m.spa", 1, c, 3, seed);
        add_conv(ps, "gate_r.spa", 1, c, 3, seed);
    }

    if (cfg.window_k > 0) {
        ps.add("head.left.w", fan_in_uniform({cfg.window_k, c}, cfg.window_k, seed, "head.left.w"));
        ps.add("head.right.w", fan_in_uniform({cfg.window_k, c}, cfg.window_k, seed, "head.right.w"));
    }
    ps.add("head.cls1.w", fan_in_uniform({c, 2 * c, 3}, 2 * c * 3, seed, "head.cls1.w"));
    ps.add("head.cls1.b", Tensor({c}));
    ps.add("head.cls2.w", fan_in_uniform({1, c, 1}, c, seed, "head.cls2.w"));
    ps.add("head.cls2.b", Tensor({1}));
}

Tape::Id iframe_features(Tape& t, const ParamSet& p, Tape::Id image) {
    Tape::Id h = t.avg_pool2d(conv_relu(t, p, "f_i.c1", image), 2);
    h = t.avg_pool2d(conv_relu(t, p, "f_i.c2", h), 2);
    return t.avg_pool2d(conv_relu(t, p, "f_i.c3", h), 2);
}

Tape::Id motion_features(Tape& t, const ParamSet& p, Tape::Id motion) {
    Tape::Id h = t.avg_pool2d(conv_relu(t, p, "f_m.c1", motion), 2);
    h = t.avg_pool2d(conv_relu(t, p, "f_m.c2", h), 2);
    return t.avg_pool2d(h, 2);  // extra downsample to reach the shared H/8 grid
}

Tape::Id residual_features(Tape& t, const ParamSet& p, Tape::Id residual) {
    Tape::Id h = t.avg_pool2d(conv_relu(t, p, "f_r.c1", residual), 2);
    h = t.avg_pool2d(conv_relu(t, p, "f_r.c2", h), 2);
    return t.avg_pool2d(h, 2);
}

Tape::Id fusion_trunk(Tape& t, const ParamSet& p, const std::string& branch, Tape::Id x_i,
                      Tape::Id x_aux, Tape::Id aux_ds) {
    Tape::Id cat = t.concat_channels({x_i, x_aux, aux_ds});
    Tape::Id h = conv_relu(t, p, "trunk_" + branch + ".c1", cat);
    return conv_relu(t, p, "trunk_" + branch + ".c2", h);
}

Tape::Id channel_gate(Tape& t, const ParamSet& p, const std::string& branch, Tape::Id z) {
    Tape::Id h = t.global_avg_pool(z);
    Tape::Id mid = t.relu(t.dense(h, t.param(p, "gate_" + branch + ".fc1.w"),
                                  t.param(p, "gate_" + branch + ".fc1.b")));
    Tape::Id logits = t.dense(mid, t.param(p, "gate_" + branch + ".fc2.w"),
                              t.param(p, "gate_" + branch + ".fc2.b"));
    return t.sigmoid(logits);
}

Tape::Id spatial_gate(Tape& t, const ParamSet& p, const std::string& branch, Tape::Id z) {
    Tape::Id logits = t.conv2d(z, t.param(p, "gate_" + branch + ".spa.w"),
                               t.param(p, "gate_" + branch + ".spa.b"));
    return t.softmax_positions(logits);
}

BranchEmbedding refine_branch(Tape& t, Tape::Id x_i, Tape::Id w_cha, Tape::Id w_spa, Tape::Id x_aux) {
    BranchEmbedding out;
    out.x_cha = t.channel_mul(x_i, w_cha);
    out.v_hat = t.spatial_weighted_pool(out.x_cha, w_spa);
    out.v = t.add(out.v_hat, t.global_avg_pool(x_aux));
    return out;
}

}  // namespace scce

}  // namespace cgebd
