#include <cstdio>
#include <exception>
#include <string>

#include <CLI11.hpp>

#include "cgebd/codec.hpp"
#include "cgebd/container.hpp"
#include "cgebd/errors.hpp"
#include "cgebd/pipeline.hpp"

namespace {

constexpr int kExitConfig = 2;
constexpr int kExitData = 3;
constexpr int kExitNumeric = 4;

struct CommonOpts {
    std::string config_path;
    bool has_seed = false;
    uint64_t seed = 0;
    std::string out;
};

void add_common(CLI::App* cmd, CommonOpts& opts) {
    cmd->add_option("--config", opts.config_path, "pipeline config JSON");
    cmd->add_option("--seed", opts.seed, "override the config seed")->each([&](const std::string&) {
        opts.has_seed = true;
    });
    cmd->add_option("--out", opts.out, "override the subcommand's output path");
}

cgebd::PipelineConfig resolve_config(const CommonOpts& opts) {
    cgebd::PipelineConfig cfg =
        opts.config_path.empty() ? cgebd::PipelineConfig{} : cgebd::load_config(opts.config_path);
    if (opts.has_seed) cfg.seed = opts.seed;
    return cfg;
}

// Raw video import format for `encode`: magic "CGVI" | u16 width | u16 height
// | f32 fps | u32 num_frames | frames as 3*H*W bytes (row-major RGB).
cgebd::RawVideo read_raw_import(const std::string& path) {
    const std::vector<uint8_t> bytes = cgebd::read_file_bytes(path);
    size_t pos = 0;
    auto need = [&](size_t n, const char* what) {
        if (pos + n > bytes.size())
            throw cgebd::DataError(path + ": truncated raw video, need " + std::to_string(n) +
                                   " byte(s) for " + what + " at offset " + std::to_string(pos));
    };
    need(4, "magic");
    if (!(bytes[0] == 'C' && bytes[1] == 'G' && bytes[2] == 'V' && bytes[3] == 'I'))
        throw cgebd::DataError(path + ": bad magic, expected \"CGVI\"");
    pos = 4;
    auto u16 = [&](const char* what) {
        need(2, what);
        uint16_t v = static_cast<uint16_t>(bytes[pos]) | static_cast<uint16_t>(bytes[pos + 1]) << 8;
        pos += 2;
        return v;
    };
    auto u32 = [&](const char* what) {
        need(4, what);
        uint32_t v = 0;
        for (int i = 0; i < 4; ++i) v |= static_cast<uint32_t>(bytes[pos + i]) << (8 * i);
        pos += 4;
        return v;
    };
    cgebd::RawVideo video;
    video.width = u16("width");
    video.height = u16("height");
    const uint32_t fps_bits = u32("fps");
    std::memcpy(&video.fps, &fps_bits, 4);
    const uint32_t num_frames = u32("num_frames");
    const size_t plane = static_cast<size_t>(3) * video.width * video.height;
    for (uint32_t f = 0; f < num_frames; ++f) {
        need(plane, "frame");
        video.frames.emplace_back(bytes.begin() + static_cast<long>(pos),
                                  bytes.begin() + static_cast<long>(pos + plane));
        pos += plane;
    }
    video.validate();
    return video;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"compressed-domain generic event boundary detection pipeline"};
    app.require_subcommand(0, 1);

    CommonOpts opts;
    bool dump_defaults = false;
    app.add_flag("--dump-config", dump_defaults, "print the full default config and exit");

    auto* synth = app.add_subcommand("synth", "generate and encode the synthetic corpus");
    add_common(synth, opts);

    auto* encode = app.add_subcommand("encode", "encode a raw video file into a container");
    add_common(encode, opts);
    std::string encode_input;
    encode->add_option("--input", encode_input, "raw video file (CGVI format)")->required();

    auto* inspect = app.add_subcommand("inspect", "print container header and motion statistics");
    std::string inspect_path;
    inspect->add_option("path", inspect_path, "container file")->required();

    auto* train = app.add_subcommand("train", "train the boundary model");
    add_common(train, opts);

    auto* infer = app.add_subcommand("infer", "score containers and emit predictions");
    add_common(infer, opts);

    auto* eval = app.add_subcommand("eval", "evaluate predictions against annotations");
    add_common(eval, opts);

    auto* gradcheck = app.add_subcommand("gradcheck", "finite-difference check of the full model");
    add_common(gradcheck, opts);

    auto* ablate = app.add_subcommand("ablate", "encoder and window-size comparison runs");
    add_common(ablate, opts);

    CLI11_PARSE(app, argc, argv);

    try {
        if (dump_defaults) {
            std::fputs(cgebd::dump_config(cgebd::PipelineConfig{}).c_str(), stdout);
            return 0;
        }
        if (app.get_subcommands().empty()) {
            std::fputs(app.help().c_str(), stderr);
            return kExitConfig;
        }

        if (synth->parsed()) {
            cgebd::PipelineConfig cfg = resolve_config(opts);
            if (!opts.out.empty()) {
                cfg.train_dir = opts.out + "/train";
                cfg.test_dir = opts.out + "/test";
            }
            cgebd::run_synth(cfg);
            std::printf("wrote %d train + %d test videos under %s and %s\n", cfg.train_videos,
                        cfg.test_videos, cfg.train_dir.c_str(), cfg.test_dir.c_str());
        } else if (encode->parsed()) {
            cgebd::PipelineConfig cfg = resolve_config(opts);
            const std::string out = opts.out.empty() ? encode_input + ".cgv" : opts.out;
            const cgebd::RawVideo video = read_raw_import(encode_input);
            cgebd::write_container(cgebd::encode_video(video, cfg.codec(), cfg.threads), out);
            std::printf("encoded %s -> %s\n", encode_input.c_str(), out.c_str());
        } else if (inspect->parsed()) {
            std::fputs(cgebd::inspect_container(inspect_path).c_str(), stdout);
        } else if (train->parsed()) {
            cgebd::PipelineConfig cfg = resolve_config(opts);
            if (!opts.out.empty()) cfg.checkpoint_path = opts.out;
            const cgebd::TrainResult r = cgebd::run_train(cfg);
            std::printf("checkpoint written to %s\n", r.checkpoint_path.c_str());
        } else if (infer->parsed()) {
            cgebd::PipelineConfig cfg = resolve_config(opts);
            if (!opts.out.empty()) cfg.predictions_path = opts.out;
            const auto preds = cgebd::run_infer(cfg);
            std::printf("wrote %zu prediction(s) to %s\n", preds.size(), cfg.predictions_path.c_str());
        } else if (eval->parsed()) {
            cgebd::PipelineConfig cfg = resolve_config(opts);
            if (!opts.out.empty()) cfg.report_path = opts.out;
            const cgebd::EvalReport report = cgebd::run_eval(cfg);
            std::fputs(cgebd::render_report_table(report).c_str(), stdout);
            std::printf("report written to %s\n", cfg.report_path.c_str());
        } else if (gradcheck->parsed()) {
            cgebd::PipelineConfig cfg = resolve_config(opts);
            const cgebd::GradCheckReport report = cgebd::run_gradcheck(cfg.seed);
            std::printf("%s\n", report.summary().c_str());
            if (!report.pass(1e-5)) {
                std::fprintf(stderr, "gradcheck FAILED (tolerance 1e-5)\n");
                return kExitNumeric;
            }
            std::printf("gradcheck passed (tolerance 1e-5)\n");
        } else if (ablate->parsed()) {
            cgebd::PipelineConfig cfg = resolve_config(opts);
            const cgebd::AblateResult result = cgebd::run_ablate(cfg);
            std::fputs(result.table.c_str(), stdout);
            if (!opts.out.empty()) {
                std::ofstream out(opts.out, std::ios::trunc);
                out << result.table;
            }
        }
        return 0;
    } catch (const cgebd::ConfigError& e) {
        std::fprintf(stderr, "config error: %s\n", e.what());
        return kExitConfig;
    } catch (const cgebd::DataError& e) {
        std::fprintf(stderr, "data error: %s\n", e.what());
        return kExitData;
    } catch (const cgebd::NumericError& e) {
        std::fprintf(stderr, "numeric error: %s\n", e.what());
        return kExitNumeric;
    } catch (const std::exception& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return 1;
    }
}
