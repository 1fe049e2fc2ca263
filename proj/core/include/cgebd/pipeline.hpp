#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "cgebd/gradcheck.hpp"
#include "cgebd/metrics.hpp"
#include "cgebd/scce.hpp"
#include "cgebd/video.hpp"

namespace cgebd {

// Flat configuration for the whole pipeline. Defaults carry the reference
// training recipe (SGD momentum 0.9, weight decay 1e-4, lr 1e-2 dropping by
// 10x after epochs 16 and 24, 30 epochs, batch 4, GOP 1+11, 3 sampled
// P-frames, contrast window 8, label width 1).
struct PipelineConfig {
    uint64_t seed = 7;
    unsigned threads = 0;  // 0 = hardware concurrency; results are identical either way

    // codec
    int block_size = 8;
    int search_radius = 8;
    int gop_pframes = 11;

    // synthetic corpus
    float fps = 12.0f;
    int frame_width = 64;
    int frame_height = 64;
    int num_frames = 48;
    int train_videos = 200;
    int test_videos = 50;
    int min_events = 1;
    int max_events = 3;
    int min_event_gap = 8;
    int max_speed = 2;

    // model
    int channels = 32;
    int reduction = 4;
    int window_k = 8;
    double label_alpha = 1.0;
    int sample_pframes = 3;
    double score_threshold = 0.5;
    int nms_radius = 2;
    std::string encoder = "scce";  // "scce" | "vanilla"

    // optimizer
    double learning_rate = 1e-2;
    double momentum = 0.9;
    double weight_decay = 1e-4;
    std::vector<int> decay_epochs{16, 24};
    double decay_factor = 0.1;
    int epochs = 30;
    int batch_size = 4;

    // paths
    std::string train_dir = "data/train";
    std::string test_dir = "data/test";
    std::string checkpoint_path = "out/model.ckpt";
    std::string log_path = "out/train_log.txt";
    std::string predictions_path = "out/predictions.jsonl";
    std::string report_path = "out/report.json";

    // ablation
    std::vector<uint64_t> ablate_seeds{1, 2, 3};
    std::vector<int> ablate_k_values{0, 2, 4, 8};

    void validate() const;
    CodecParams codec() const;
    ModelConfig model() const;
    SgdConfig sgd() const;
};

PipelineConfig load_config(const std::string& path);
PipelineConfig parse_config_json(const std::string& text, const std::string& origin);
std::string dump_config(const PipelineConfig& cfg);

// Generates both splits, encodes every video into a container under
// train_dir/test_dir and writes one annotations.json per split.
void run_synth(const PipelineConfig& cfg);

struct TrainResult {
    std::vector<double> epoch_mean_loss;
    std::string checkpoint_path;
};

// Seeded-shuffle SGD training of the boundary model on the encoded corpus;
// writes the checkpoint and a deterministic per-epoch loss log.
TrainResult run_train(const PipelineConfig& cfg, bool quiet = false);

// Scores every container in test_dir and writes JSON-lines predictions.
std::vector<VideoPredictions> run_infer(const PipelineConfig& cfg);

// Scores predictions against annotations; writes the JSON report and returns it.
EvalReport run_eval(const PipelineConfig& cfg);

// Finite-difference check of the full SCCE + head composite at toy dimensions.
GradCheckReport run_gradcheck(uint64_t seed);

struct AblateRun {
    uint64_t seed = 0;
    std::string encoder;
    int window_k = 0;
    double f1_at_005 = 0.0;
    double avg_f1 = 0.0;
    double final_loss = 0.0;
};

struct AblateResult {
    std::vector<AblateRun> encoder_runs;  // scce vs vanilla, per seed
    std::vector<AblateRun> window_runs;   // k sweep at the first seed
    std::string table;                    // rendered report
};

AblateResult run_ablate(const PipelineConfig& cfg, bool quiet = false);

std::string inspect_container(const std::string& path);

}  // namespace cgebd
