#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>
#include <cmath>

#include "cgebd/codec.hpp"
#include "cgebd/synth.hpp"

using namespace cgebd;

namespace {

double mean_abs_frame_diff(const FramePlane& a, const FramePlane& b) {
    double acc = 0.0;
    for (size_t i = 0; i < a.size(); ++i) acc += std::abs(static_cast<int>(a[i]) - static_cast<int>(b[i]));
    return acc / static_cast<double>(a.size());
}

}  // namespace

TEST_CASE("no events means an empty annotation") {
    SynthSpec spec;
    spec.seed = 5;
    const auto [video, ann] = generate_video(spec, "plain");
    CHECK(ann.boundaries_sec.empty());
    CHECK(static_cast<int>(video.frames.size()) == spec.num_frames);
}

TEST_CASE("identical specs produce byte-identical videos") {
    SynthSpec spec;
    spec.seed = 99;
    spec.events = {{10, EventKind::Cut}, {20, EventKind::MotionReversal}};
    const auto [va, aa] = generate_video(spec, "x");
    const auto [vb, ab] = generate_video(spec, "x");
    CHECK(va == vb);
    CHECK(aa.boundaries_sec == ab.boundaries_sec);
}

TEST_CASE("cuts spike the inter-frame difference") {
    SynthSpec spec;
    spec.seed = 7;
    spec.events = {{17, EventKind::Cut}};
    const auto [video, ann] = generate_video(spec, "cut");
    REQUIRE(ann.boundaries_sec.size() == 1);

    std::vector<double> diffs;
    for (size_t f = 1; f < video.frames.size(); ++f)
        diffs.push_back(mean_abs_frame_diff(video.frames[f - 1], video.frames[f]));
    const double cut_diff = diffs[16];  // between frames 16 and 17

    std::vector<double> others;
    for (size_t i = 0; i < diffs.size(); ++i)
        if (i != 16) others.push_back(diffs[i]);
    std::sort(others.begin(), others.end());
    const double median = others[others.size() / 2];
    CHECK(cut_diff > 10.0 * median);
}

TEST_CASE("annotation count equals event count and timestamps match") {
    SynthSpec spec;
    spec.seed = 3;
    spec.events = {{8, EventKind::Cut}, {20, EventKind::MotionReversal}, {33, EventKind::Cut}};
    const auto [video, ann] = generate_video(spec, "multi");
    REQUIRE(ann.boundaries_sec.size() == 3);
    CHECK(ann.boundaries_sec[0] == doctest::Approx(8 / 12.0));
    CHECK(ann.boundaries_sec[1] == doctest::Approx(20 / 12.0));
    CHECK(ann.boundaries_sec[2] == doctest::Approx(33 / 12.0));
}

TEST_CASE("object-interior blocks are exactly motion-compensable away from cuts") {
    // A large object guarantees at least one block fully inside it; that
    // block's residual must be exactly zero under the codec (static
    // background, rigid integer-pel translation).
    SynthSpec spec;
    spec.seed = 21;
    spec.min_object_size = 24;
    spec.max_object_size = 28;
    spec.max_speed = 1;
    const auto [video, ann] = generate_video(spec, "big");

    CodecParams params;
    const CompressedVideo cv = encode_video(video, params);
    int zero_blocks = 0;
    for (const Gop& g : cv.gops)
        for (const PFrame& pf : g.pframes) {
            const int B = params.block_size;
            for (int br = 0; br < pf.motion.rows; ++br)
                for (int bc = 0; bc < pf.motion.cols; ++bc) {
                    bool all_zero = true;
                    for (int y = br * B; y < std::min((br + 1) * B, cv.height) && all_zero; ++y)
                        for (int x = bc * B; x < std::min((bc + 1) * B, cv.width) && all_zero; ++x)
                            for (int c = 0; c < 3; ++c)
                                if (pf.residual.values[(static_cast<size_t>(y) * cv.width + x) * 3 + c] != 0)
                                    all_zero = false;
                    if (all_zero) ++zero_blocks;
                }
        }
    // essentially every block: static background + exactly compensable object
    CHECK(zero_blocks > 40 * 44);
}

TEST_CASE("spec validation") {
    SynthSpec spec;
    SUBCASE("events too close") {
        spec.events = {{10, EventKind::Cut}, {12, EventKind::Cut}};
        CHECK_THROWS_AS(spec.validate(), std::invalid_argument);
    }
    SUBCASE("event at frame zero") {
        spec.events = {{0, EventKind::Cut}};
        CHECK_THROWS_AS(spec.validate(), std::invalid_argument);
    }
    SUBCASE("speed above the codec radius") {
        spec.max_speed = 9;
        CHECK_THROWS_AS(generate_video(spec, "fast", 8), std::invalid_argument);
    }
}

TEST_CASE("corpus specs are valid, deterministic and independent per index") {
    CorpusParams params;
    for (int i = 0; i < 25; ++i) {
        const SynthSpec spec = make_corpus_spec(1234, i, params);
        CHECK_NOTHROW(spec.validate());
        CHECK(static_cast<int>(spec.events.size()) >= params.min_events);
        CHECK(static_cast<int>(spec.events.size()) <= params.max_events);
        for (size_t e = 1; e < spec.events.size(); ++e)
            CHECK(spec.events[e].frame - spec.events[e - 1].frame >= params.min_event_gap);
    }
    const SynthSpec a = make_corpus_spec(1234, 3, params);
    const SynthSpec b = make_corpus_spec(1234, 3, params);
    CHECK(a.seed == b.seed);
    CHECK(a.events.size() == b.events.size());
    const SynthSpec c = make_corpus_spec(1234, 4, params);
    CHECK(a.seed != c.seed);
}

TEST_CASE("object stays within the frame for every trajectory") {
    // Reversal-heavy plans fold the trajectory; positions must never clamp.
    CorpusParams params;
    for (int i = 0; i < 40; ++i) {
        const SynthSpec spec = make_corpus_spec(777, i, params);
        const auto [video, ann] = generate_video(spec, "traj");
        // If the object left the frame the paste would have thrown or
        // wrapped; a successful render plus exact codec round trip suffices.
        const CompressedVideo cv = encode_video(video, CodecParams{});
        CHECK(decode_sequential(cv) == video);
    }
}
