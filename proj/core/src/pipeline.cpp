#include "cgebd/pipeline.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <memory>
#include <sstream>

#include <json.hpp>

#include "cgebd/boundary.hpp"
#include "cgebd/checkpoint.hpp"
#include "cgebd/codec.hpp"
#include "cgebd/container.hpp"
#include "cgebd/errors.hpp"
#include "cgebd/model.hpp"
#include "cgebd/ops.hpp"
#include "cgebd/parallel.hpp"
#include "cgebd/rng.hpp"
#include "cgebd/synth.hpp"

namespace cgebd {

namespace fs = std::filesystem;
using nlohmann::json;

void PipelineConfig::validate() const {
    codec().validate();
    model().validate();
    sgd().validate();
    if (encoder != "scce" && encoder != "vanilla")
        throw ConfigError("config: encoder must be \"scce\" or \"vanilla\"");
    if (batch_size < 1) throw ConfigError("config: batch_size must be >= 1");
    if (train_videos < 1 || test_videos < 1) throw ConfigError("config: corpus sizes must be >= 1");
    if (frame_width % 8 != 0 || frame_height % 8 != 0)
        throw ConfigError("config: frame dimensions must be divisible by 8");
    if (num_frames < 1) throw ConfigError("config: num_frames must be >= 1");
    if (min_events < 0 || max_events < min_events) throw ConfigError("config: bad event count range");
    if (max_speed > search_radius)
        throw ConfigError("config: max_speed exceeds the codec search radius");
    if (!(fps > 0.0f)) throw ConfigError("config: fps must be > 0");
}

CodecParams PipelineConfig::codec() const {
    CodecParams p;
    p.block_size = block_size;
    p.search_radius = search_radius;
    p.gop_pframes = gop_pframes;
    return p;
}

ModelConfig PipelineConfig::model() const {
    ModelConfig m;
    m.channels = channels;
    m.reduction = reduction;
    m.window_k = window_k;
    m.sample_pframes = sample_pframes;
    m.label_alpha = label_alpha;
    m.score_threshold = score_threshold;
    m.nms_radius = nms_radius;
    m.vanilla = (encoder == "vanilla");
    return m;
}

SgdConfig PipelineConfig::sgd() const {
    SgdConfig s;
    s.learning_rate = learning_rate;
    s.momentum = momentum;
    s.weight_decay = weight_decay;
    s.decay_epochs = decay_epochs;
    s.decay_factor = decay_factor;
    s.epochs = epochs;
    return s;
}

namespace {

json config_to_json(const PipelineConfig& c) {
    json j;
    j["seed"] = c.seed;
    j["threads"] = c.threads;
    j["block_size"] = c.block_size;
    j["search_radius"] = c.search_radius;
    j["gop_pframes"] = c.gop_pframes;
    j["fps"] = c.fps;
    j["frame_width"] = c.frame_width;
    j["frame_height"] = c.frame_height;
    j["num_frames"] = c.num_frames;
    j["train_videos"] = c.train_videos;
    j["test_videos"] = c.test_videos;
    j["min_events"] = c.min_events;
    j["max_events"] = c.max_events;
    j["min_event_gap"] = c.min_event_gap;
    j["max_speed"] = c.max_speed;
    j["channels"] = c.channels;
    j["reduction"] = c.reduction;
    j["window_k"] = c.window_k;
    j["label_alpha"] = c.label_alpha;
    j["sample_pframes"] = c.sample_pframes;
    j["score_threshold"] = c.score_threshold;
    j["nms_radius"] = c.nms_radius;
    j["encoder"] = c.encoder;
    j["learning_rate"] = c.learning_rate;
    j["momentum"] = c.momentum;
    j["weight_decay"] = c.weight_decay;
    j["decay_epochs"] = c.decay_epochs;
    j["decay_factor"] = c.decay_factor;
    j["epochs"] = c.epochs;
    j["batch_size"] = c.batch_size;
    j["train_dir"] = c.train_dir;
    j["test_dir"] = c.test_dir;
    j["checkpoint_path"] = c.checkpoint_path;
    j["log_path"] = c.log_path;
    j["predictions_path"] = c.predictions_path;
    j["report_path"] = c.report_path;
    j["ablate_seeds"] = c.ablate_seeds;
    j["ablate_k_values"] = c.ablate_k_values;
    return j;
}

}  // namespace

PipelineConfig parse_config_json(const std::string& text, const std::string& origin) {
    json j;
    try {
        j = json::parse(text);
    } catch (const json::exception& e) {
        throw ConfigError(origin + ": invalid JSON: " + e.what());
    }
    if (!j.is_object()) throw ConfigError(origin + ": config must be a JSON object");

    PipelineConfig c;
    const json defaults = config_to_json(c);
    for (const auto& [key, value] : j.items()) {
        if (!defaults.contains(key)) throw ConfigError(origin + ": unknown config key \"" + key + "\"");
        (void)value;
    }
    try {
        auto get = [&](const char* key, auto& field) {
            if (j.contains(key)) field = j.at(key).get<std::decay_t<decltype(field)>>();
        };
        get("seed", c.seed);
        get("threads", c.threads);
        get("block_size", c.block_size);
        get("search_radius", c.search_radius);
        get("gop_pframes", c.gop_pframes);
        get("fps", c.fps);
        get("frame_width", c.frame_width);
        get("frame_height", c.frame_height);
        get("num_frames", c.num_frames);
        get("train_videos", c.train_videos);
        get("test_videos", c.test_videos);
        get("min_events", c.min_events);
        get("max_events", c.max_events);
        get("min_event_gap", c.min_event_gap);
        get("max_speed", c.max_speed);
        get("channels", c.channels);
        get("reduction", c.reduction);
        get("window_k", c.window_k);
        get("label_alpha", c.label_alpha);
        get("sample_pframes", c.sample_pframes);
        get("score_threshold", c.score_threshold);
        get("nms_radius", c.nms_radius);
        get("encoder", c.encoder);
        get("learning_rate", c.learning_rate);
        get("momentum", c.momentum);
        get("weight_decay", c.weight_decay);
        get("decay_epochs", c.decay_epochs);
        get("decay_factor", c.decay_factor);
        get("epochs", c.epochs);
        get("batch_size", c.batch_size);
        get("train_dir", c.train_dir);
        get("test_dir", c.test_dir);
        get("checkpoint_path", c.checkpoint_path);
        get("log_path", c.log_path);
        get("predictions_path", c.predictions_path);
        get("report_path", c.report_path);
        get("ablate_seeds", c.ablate_seeds);
        get("ablate_k_values", c.ablate_k_values);
    } catch (const json::exception& e) {
        throw ConfigError(origin + ": bad config value: " + e.what());
    }
    c.validate();
    return c;
}

PipelineConfig load_config(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open config file: " + path);
    std::stringstream ss;
    ss << in.rdbuf();
    return parse_config_json(ss.str(), path);
}

std::string dump_config(const PipelineConfig& cfg) { return config_to_json(cfg).dump(2) + "\n"; }

// ---------------------------------------------------------------------------
// synth

namespace {

void ensure_parent_dir(const std::string& path) {
    const fs::path p(path);
    if (p.has_parent_path()) fs::create_directories(p.parent_path());
}

void synth_split(const PipelineConfig& cfg, const std::string& dir, const std::string& prefix,
                 uint64_t split_seed, int count) {
    fs::create_directories(dir);
    CorpusParams corpus;
    corpus.num_frames = cfg.num_frames;
    corpus.fps = cfg.fps;
    corpus.width = cfg.frame_width;
    corpus.height = cfg.frame_height;
    corpus.min_events = cfg.min_events;
    corpus.max_events = cfg.max_events;
    corpus.min_event_gap = cfg.min_event_gap;
    corpus.max_speed = cfg.max_speed;

    std::vector<BoundaryAnnotation> annotations(static_cast<size_t>(count));
    parallel_for(static_cast<size_t>(count), cfg.threads, [&](size_t i) {
        char id[64];
        std::snprintf(id, sizeof(id), "%s_%03zu", prefix.c_str(), i);
        const SynthSpec spec = make_corpus_spec(split_seed, static_cast<int>(i), corpus);
        auto [video, ann] = generate_video(spec, id, cfg.search_radius);
        const CompressedVideo cv = encode_video(video, cfg.codec(), 1);
        write_container(cv, (fs::path(dir) / (std::string(id) + ".cgv")).string());
        annotations[i] = std::move(ann);
    });
    save_annotations(annotations, (fs::path(dir) / "annotations.json").string());
}

}  // namespace

void run_synth(const PipelineConfig& cfg) {
    cfg.validate();
    synth_split(cfg, cfg.train_dir, "train", mix_seed(cfg.seed, hash_string("train")), cfg.train_videos);
    synth_split(cfg, cfg.test_dir, "test", mix_seed(cfg.seed, hash_string("test")), cfg.test_videos);
}

// ---------------------------------------------------------------------------
// dataset

namespace {

// Accumulated planes stored compactly; tensors are rebuilt per use so a
// 200-video corpus stays within a few hundred MB.
struct CompactPFrame {
    int t = 0;
    int frame_index = 0;
    std::vector<int16_t> ay, ax;  // H*W
    std::vector<int32_t> d;       // 3*H*W
};

struct CompactGop {
    int iframe_index = 0;
    FramePlane iframe;
    std::vector<CompactPFrame> pframes;
};

struct DatasetVideo {
    std::string id;
    int width = 0, height = 0;
    int search_radius = 8;
    float fps = 0.0f;
    int num_frames = 0;
    std::vector<CompactGop> gops;
    std::vector<int> frame_indices;
    std::vector<double> targets;  // empty when no annotation is given
};

CompactGop compact_gop(const Gop& gop, const CodecParams& params, int height, int width,
                       int start_frame, int sample_pframes) {
    CompactGop out;
    out.iframe_index = start_frame;
    out.iframe = gop.iframe;
    const std::vector<int> sampled = sample_pframe_indices(static_cast<int>(gop.pframes.size()), sample_pframes);
    if (sampled.empty()) return out;
    const std::vector<AccumulatedPFrame> acc = accumulate_gop(gop, params.block_size, height, width);
    for (int t : sampled) {
        const AccumulatedPFrame& a = acc[static_cast<size_t>(t - 1)];
        CompactPFrame pf;
        pf.t = t;
        pf.frame_index = start_frame + t;
        pf.ay.assign(a.ay.begin(), a.ay.end());
        pf.ax.assign(a.ax.begin(), a.ax.end());
        pf.d = a.d;
        out.pframes.push_back(std::move(pf));
    }
    return out;
}

GopInputs expand_gop(const CompactGop& g, int height, int width, int search_radius) {
    GopInputs out;
    out.iframe_index = g.iframe_index;
    const size_t npix = static_cast<size_t>(height) * width;
    out.iframe = Tensor({3, height, width});
    for (int c = 0; c < 3; ++c)
        for (size_t p = 0; p < npix; ++p)
            out.iframe[static_cast<size_t>(c) * npix + p] = g.iframe[p * 3 + c] / 255.0;
    const double motion_scale = search_radius > 0 ? 1.0 / search_radius : 1.0;
    for (const CompactPFrame& pf : g.pframes) {
        PFrameInput in;
        in.t = pf.t;
        in.frame_index = pf.frame_index;
        in.motion = Tensor({2, height, width});
        in.residual = Tensor({3, height, width});
        for (size_t p = 0; p < npix; ++p) {
            in.motion[p] = pf.ay[p] * motion_scale;
            in.motion[npix + p] = pf.ax[p] * motion_scale;
        }
        for (int c = 0; c < 3; ++c)
            for (size_t p = 0; p < npix; ++p)
                in.residual[static_cast<size_t>(c) * npix + p] = pf.d[p * 3 + c] / 255.0;
        in.motion_ds = ops::avg_pool2d(in.motion, 8);
        in.residual_ds = ops::avg_pool2d(in.residual, 8);
        out.pframes.push_back(std::move(in));
    }
    return out;
}

std::vector<GopInputs> expand_video(const DatasetVideo& v) {
    std::vector<GopInputs> out;
    out.reserve(v.gops.size());
    for (const CompactGop& g : v.gops) out.push_back(expand_gop(g, v.height, v.width, v.search_radius));
    return out;
}

DatasetVideo load_dataset_video(const std::string& path, const std::string& id,
                                const PipelineConfig& cfg, const BoundaryAnnotation* ann) {
    const CompressedVideo cv = read_container(path);
    if (cv.height % 8 != 0 || cv.width % 8 != 0)
        throw DataError(path + ": frame dimensions must be divisible by 8");

    DatasetVideo v;
    v.id = id;
    v.width = cv.width;
    v.height = cv.height;
    // Containers do not persist the radius; normalize with the configured one.
    v.search_radius = cfg.search_radius;
    v.fps = cv.fps;
    v.num_frames = cv.num_frames();

    int frame = 0;
    for (const Gop& gop : cv.gops) {
        v.gops.push_back(compact_gop(gop, cv.params, cv.height, cv.width, frame, cfg.sample_pframes));
        frame += 1 + static_cast<int>(gop.pframes.size());
    }
    for (const CompactGop& g : v.gops) {
        v.frame_indices.push_back(g.iframe_index);
        for (const CompactPFrame& pf : g.pframes) v.frame_indices.push_back(pf.frame_index);
    }

    if (ann) {
        std::vector<int> positions;
        positions.reserve(ann->boundaries_sec.size());
        for (double b : ann->boundaries_sec)
            positions.push_back(map_time_to_position(b, v.fps, v.frame_indices));
        v.targets = gaussian_soft_labels(positions, static_cast<int>(v.frame_indices.size()), cfg.label_alpha);
    }
    return v;
}

std::vector<DatasetVideo> load_split(const PipelineConfig& cfg, const std::string& dir, bool with_targets) {
    const std::string ann_path = (fs::path(dir) / "annotations.json").string();
    if (!fs::exists(ann_path)) throw DataError("missing annotation file: " + ann_path);
    const std::vector<BoundaryAnnotation> annotations = load_annotations(ann_path);
    if (annotations.empty()) throw DataError(ann_path + ": no annotations");

    std::vector<DatasetVideo> videos(annotations.size());
    parallel_for(annotations.size(), cfg.threads, [&](size_t i) {
        const BoundaryAnnotation& ann = annotations[i];
        const std::string path = (fs::path(dir) / (ann.video_id + ".cgv")).string();
        if (!fs::exists(path)) throw DataError("missing container: " + path);
        videos[i] = load_dataset_video(path, ann.video_id, cfg, with_targets ? &ann : nullptr);
    });
    return videos;
}

}  // namespace

// ---------------------------------------------------------------------------
// train

TrainResult run_train(const PipelineConfig& cfg, bool quiet) {
    cfg.validate();
    const std::vector<DatasetVideo> videos = load_split(cfg, cfg.train_dir, true);

    GebdModel model(cfg.model());
    model.init(cfg.seed);
    const SgdConfig sgd = cfg.sgd();

    TrainResult result;
    result.checkpoint_path = cfg.checkpoint_path;

    std::vector<size_t> order(videos.size());
    for (size_t i = 0; i < order.size(); ++i) order[i] = i;

    for (int epoch = 1; epoch <= sgd.epochs; ++epoch) {
        // Deterministic Fisher-Yates; std::shuffle is implementation-defined.
        Rng shuffle_rng(mix_seed(cfg.seed, hash_string("shuffle") + static_cast<uint64_t>(epoch)));
        for (size_t i = order.size(); i > 1; --i) {
            const size_t j = shuffle_rng.bounded(i);
            std::swap(order[i - 1], order[j]);
        }

        double loss_sum = 0.0;
        for (size_t start = 0; start < order.size(); start += static_cast<size_t>(cfg.batch_size)) {
            const size_t end = std::min(order.size(), start + static_cast<size_t>(cfg.batch_size));
            const size_t n = end - start;

            std::vector<std::unique_ptr<Tape>> tapes(n);
            std::vector<double> losses(n, 0.0);
            parallel_for(n, cfg.threads, [&](size_t bi) {
                const DatasetVideo& v = videos[order[start + bi]];
                auto tape = std::make_unique<Tape>();
                const std::vector<GopInputs> gops = expand_video(v);
                const Tape::Id scores = model.score_sequence(*tape, gops);
                const Tape::Id loss = tape->bce_loss(scores, Tensor({static_cast<int>(v.targets.size())},
                                                                    v.targets));
                losses[bi] = tape->value(loss)[0];
                tape->backward(loss);
                tapes[bi] = std::move(tape);
            });

            model.params().zero_grads();
            for (size_t bi = 0; bi < n; ++bi) {
                if (!std::isfinite(losses[bi]))
                    throw NumericError("run_train: non-finite loss at epoch " + std::to_string(epoch) +
                                       ", video " + videos[order[start + bi]].id);
                loss_sum += losses[bi];
                tapes[bi]->add_param_grads_to(model.params(), 1.0 / static_cast<double>(n));
            }
            sgd_step(model.params(), sgd, epoch);
        }

        const double mean_loss = loss_sum / static_cast<double>(videos.size());
        result.epoch_mean_loss.push_back(mean_loss);
        if (!quiet) std::printf("epoch %d mean_loss %.6f\n", epoch, mean_loss);
    }

    ensure_parent_dir(cfg.checkpoint_path);
    save_checkpoint(model.params(), cfg.checkpoint_path);

    ensure_parent_dir(cfg.log_path);
    std::ofstream log(cfg.log_path, std::ios::trunc);
    if (!log) throw DataError("cannot open log file for writing: " + cfg.log_path);
    for (size_t e = 0; e < result.epoch_mean_loss.size(); ++e) {
        char line[96];
        std::snprintf(line, sizeof(line), "epoch %zu mean_loss %.12g\n", e + 1, result.epoch_mean_loss[e]);
        log << line;
    }
    return result;
}

// ---------------------------------------------------------------------------
// infer / eval

std::vector<VideoPredictions> run_infer(const PipelineConfig& cfg) {
    cfg.validate();

    std::vector<std::string> stems;
    for (const auto& entry : fs::directory_iterator(cfg.test_dir)) {
        if (entry.path().extension() == ".cgv") stems.push_back(entry.path().stem().string());
    }
    if (stems.empty()) throw DataError("no .cgv containers in " + cfg.test_dir);
    std::sort(stems.begin(), stems.end());

    GebdModel model(cfg.model());
    model.init(cfg.seed);
    load_checkpoint(model.params(), cfg.checkpoint_path);

    std::vector<VideoPredictions> preds(stems.size());
    parallel_for(stems.size(), cfg.threads, [&](size_t i) {
        const std::string path = (fs::path(cfg.test_dir) / (stems[i] + ".cgv")).string();
        const DatasetVideo v = load_dataset_video(path, stems[i], cfg, nullptr);
        Tape tape;
        const Tape::Id scores = model.score_sequence(tape, expand_video(v));
        const Tensor& s = tape.value(scores);
        VideoPredictions p;
        p.video_id = stems[i];
        p.scores.assign(s.data(), s.data() + s.size());
        p.boundaries_sec = pick_boundaries(p.scores, v.frame_indices, v.fps, cfg.score_threshold,
                                           cfg.nms_radius);
        preds[i] = std::move(p);
    });

    ensure_parent_dir(cfg.predictions_path);
    save_predictions_jsonl(preds, cfg.predictions_path);
    return preds;
}

EvalReport run_eval(const PipelineConfig& cfg) {
    cfg.validate();
    const std::vector<VideoPredictions> preds = load_predictions_jsonl(cfg.predictions_path);
    const std::vector<BoundaryAnnotation> annotations =
        load_annotations((fs::path(cfg.test_dir) / "annotations.json").string());
    const EvalReport report = score_corpus(preds, annotations);
    ensure_parent_dir(cfg.report_path);
    std::ofstream out(cfg.report_path, std::ios::trunc);
    if (!out) throw DataError("cannot open report file for writing: " + cfg.report_path);
    out << report_to_json(report);
    return report;
}

// ---------------------------------------------------------------------------
// gradcheck

GradCheckReport run_gradcheck(uint64_t seed) {
    // Toy dimensions keep the finite-difference sweep fast while exercising
    // every parameter of the full composite.
    PipelineConfig cfg;
    cfg.seed = seed;
    cfg.frame_width = 16;
    cfg.frame_height = 16;
    cfg.num_frames = 6;
    cfg.gop_pframes = 2;
    cfg.channels = 8;
    cfg.window_k = 2;
    cfg.sample_pframes = 2;

    SynthSpec spec;
    spec.seed = mix_seed(seed, hash_string("gradcheck"));
    spec.num_frames = cfg.num_frames;
    spec.fps = 6.0f;
    spec.width = cfg.frame_width;
    spec.height = cfg.frame_height;
    spec.min_object_size = 4;
    spec.max_object_size = 6;
    spec.max_speed = 2;
    spec.events = {{3, EventKind::Cut}};

    auto [video, ann] = generate_video(spec, "gradcheck", cfg.search_radius);
    const CompressedVideo cv = encode_video(video, cfg.codec(), 1);
    const std::vector<GopInputs> gops = prepare_video_inputs(cv, cfg.sample_pframes);
    const std::vector<int> frame_indices = sequence_frame_indices(gops);

    std::vector<int> positions;
    for (double b : ann.boundaries_sec) positions.push_back(map_time_to_position(b, cv.fps, frame_indices));
    const std::vector<double> targets =
        gaussian_soft_labels(positions, static_cast<int>(frame_indices.size()), cfg.label_alpha);

    GebdModel model(cfg.model());
    model.init(seed);

    const Tensor target_tensor({static_cast<int>(targets.size())}, targets);
    auto loss_fn = [&](bool with_grads) {
        Tape tape;
        const Tape::Id scores = model.score_sequence(tape, gops);
        const Tape::Id loss = tape.bce_loss(scores, target_tensor);
        if (with_grads) {
            tape.backward(loss);
            tape.add_param_grads_to(model.params());
        }
        return tape.value(loss)[0];
    };
    return gradient_check(loss_fn, model.params());
}

// ---------------------------------------------------------------------------
// ablate

namespace {

AblateRun ablate_single(PipelineConfig cfg, uint64_t seed, const std::string& encoder, int window_k,
                        const std::string& tag, bool quiet) {
    cfg.seed = seed;
    cfg.encoder = encoder;
    cfg.window_k = window_k;
    const fs::path out_dir = fs::path(cfg.checkpoint_path).parent_path();
    cfg.checkpoint_path = (out_dir / ("ablate_" + tag + ".ckpt")).string();
    cfg.log_path = (out_dir / ("ablate_" + tag + ".log")).string();
    cfg.predictions_path = (out_dir / ("ablate_" + tag + ".jsonl")).string();
    cfg.report_path = (out_dir / ("ablate_" + tag + ".json")).string();

    const TrainResult train = run_train(cfg, true);
    run_infer(cfg);
    const EvalReport report = run_eval(cfg);

    AblateRun run;
    run.seed = seed;
    run.encoder = encoder;
    run.window_k = window_k;
    run.f1_at_005 = report.f1.front();
    run.avg_f1 = report.avg_f1;
    run.final_loss = train.epoch_mean_loss.back();
    if (!quiet)
        std::printf("[ablate] %-16s seed %llu  F1@0.05 %.3f  avg F1 %.3f\n", tag.c_str(),
                    static_cast<unsigned long long>(seed), run.f1_at_005, run.avg_f1);
    return run;
}

}  // namespace

AblateResult run_ablate(const PipelineConfig& cfg, bool quiet) {
    cfg.validate();
    AblateResult result;

    for (uint64_t seed : cfg.ablate_seeds) {
        const std::string suffix = "s" + std::to_string(seed);
        result.encoder_runs.push_back(
            ablate_single(cfg, seed, "vanilla", cfg.window_k, "vanilla_" + suffix, quiet));
        result.encoder_runs.push_back(
            ablate_single(cfg, seed, "scce", cfg.window_k, "scce_" + suffix, quiet));
    }
    if (!cfg.ablate_k_values.empty() && !cfg.ablate_seeds.empty()) {
        for (int k : cfg.ablate_k_values) {
            result.window_runs.push_back(ablate_single(cfg, cfg.ablate_seeds.front(), "scce", k,
                                                       "k" + std::to_string(k), quiet));
        }
    }

    std::ostringstream os;
    char buf[160];
    os << "encoder comparison (F1@0.05 / avg F1 per seed)\n";
    os << "encoder ";
    for (uint64_t s : cfg.ablate_seeds) {
        std::snprintf(buf, sizeof(buf), "        seed %-10llu", static_cast<unsigned long long>(s));
        os << buf;
    }
    os << "\n";
    for (const std::string& enc : {std::string("vanilla"), std::string("scce")}) {
        std::snprintf(buf, sizeof(buf), "%-8s", enc.c_str());
        os << buf;
        for (uint64_t s : cfg.ablate_seeds) {
            for (const AblateRun& r : result.encoder_runs) {
                if (r.encoder == enc && r.seed == s) {
                    std::snprintf(buf, sizeof(buf), "  %6.3f / %6.3f   ", r.f1_at_005, r.avg_f1);
                    os << buf;
                }
            }
        }
        os << "\n";
    }
    for (uint64_t s : cfg.ablate_seeds) {
        double v = -1.0, m = -1.0;
        for (const AblateRun& r : result.encoder_runs) {
            if (r.seed != s) continue;
            (r.encoder == "scce" ? m : v) = r.f1_at_005;
        }
        if (m < v) {
            std::snprintf(buf, sizeof(buf), "FLAG: ordering flipped at seed %llu (scce %.3f < vanilla %.3f)\n",
                          static_cast<unsigned long long>(s), m, v);
            os << buf;
        }
    }
    if (!result.window_runs.empty()) {
        os << "\ncontrast window sweep (seed " << cfg.ablate_seeds.front() << ")\n";
        os << "k     F1@0.05   avg F1\n";
        for (const AblateRun& r : result.window_runs) {
            std::snprintf(buf, sizeof(buf), "%-4d  %7.3f  %7.3f\n", r.window_k, r.f1_at_005, r.avg_f1);
            os << buf;
        }
    }
    result.table = os.str();
    return result;
}

// ---------------------------------------------------------------------------
// inspect

std::string inspect_container(const std::string& path) {
    const CompressedVideo cv = read_container(path);
    std::ostringstream os;
    char buf[200];
    std::snprintf(buf, sizeof(buf),
                  "container %s\n  %dx%d @ %.3f fps, block %d, t_enc %d, %zu GOP(s), %d frame(s)\n",
                  path.c_str(), cv.width, cv.height, static_cast<double>(cv.fps), cv.params.block_size,
                  cv.params.gop_pframes, cv.gops.size(), cv.num_frames());
    os << buf;
    for (size_t gi = 0; gi < cv.gops.size(); ++gi) {
        const Gop& g = cv.gops[gi];
        long zero = 0, total = 0;
        int max_mag = 0;
        double mv_l1 = 0.0;
        double res_abs = 0.0;
        size_t res_n = 0;
        for (const PFrame& pf : g.pframes) {
            for (size_t i = 0; i < pf.motion.dy.size(); ++i) {
                const int dy = pf.motion.dy[i], dx = pf.motion.dx[i];
                if (dy == 0 && dx == 0) ++zero;
                max_mag = std::max({max_mag, std::abs(dy), std::abs(dx)});
                mv_l1 += std::abs(dy) + std::abs(dx);
                ++total;
            }
            for (int16_t v : pf.residual.values) res_abs += std::abs(v);
            res_n += pf.residual.values.size();
        }
        std::snprintf(buf, sizeof(buf),
                      "  GOP %2zu: %zu P-frame(s), zero-MV %5.1f%%, mean |mv| %5.2f, max |comp| %d, "
                      "mean |residual| %6.2f\n",
                      gi, g.pframes.size(), total ? 100.0 * zero / total : 0.0,
                      total ? mv_l1 / total : 0.0, max_mag, res_n ? res_abs / res_n : 0.0);
        os << buf;
    }
    return os.str();
}

}  // namespace cgebd
