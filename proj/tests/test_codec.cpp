#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "cgebd/codec.hpp"
#include "cgebd/rng.hpp"
#include "oracle_naive.hpp"

using namespace cgebd;

namespace {

RawVideo static_video(int width, int height, int frames, uint8_t value) {
    RawVideo v;
    v.width = width;
    v.height = height;
    v.fps = 10.0f;
    v.frames.assign(static_cast<size_t>(frames),
                    FramePlane(static_cast<size_t>(3) * width * height, value));
    return v;
}

}  // namespace

TEST_CASE("static scene yields zero motion and zero residuals") {
    const RawVideo v = static_video(32, 32, 24, 137);
    const CompressedVideo cv = encode_video(v, CodecParams{});
    CHECK(cv.gops.size() == 2);  // 24 frames = 12 + 12
    for (const Gop& g : cv.gops) {
        for (const PFrame& pf : g.pframes) {
            for (size_t i = 0; i < pf.motion.dy.size(); ++i) {
                CHECK(pf.motion.dy[i] == 0);
                CHECK(pf.motion.dx[i] == 0);
            }
            for (int16_t r : pf.residual.values) CHECK(r == 0);
        }
    }
}

TEST_CASE("round trip is bit-exact on random videos") {
    Rng rng(42);
    for (int trial = 0; trial < 50; ++trial) {
        const int w = 8 + static_cast<int>(rng.bounded(25));
        const int h = 8 + static_cast<int>(rng.bounded(25));
        const int frames = 12 + static_cast<int>(rng.bounded(8));
        const RawVideo v = trial % 2 == 0 ? oracle::random_video(rng, w, h, frames)
                                          : oracle::drifting_video(rng, w, h, frames);
        const RawVideo decoded = decode_sequential(encode_video(v, CodecParams{}));
        REQUIRE(decoded == v);
    }
}

TEST_CASE("rigid +2 column translation finds mv (0,-2) on interior blocks") {
    // Content moves right by 2 px/frame: cur(y,x) = prev(y, x-2), so the
    // matching reference offset is dx = -2.
    const int w = 32, h = 32;
    RawVideo v;
    v.width = w;
    v.height = h;
    v.fps = 8.0f;
    Rng rng(7);
    FramePlane base(static_cast<size_t>(3) * w * h);
    for (auto& b : base) b = static_cast<uint8_t>(rng.bounded(256));
    for (int f = 0; f < 3; ++f) {
        FramePlane frame(base.size());
        for (int y = 0; y < h; ++y)
            for (int x = 0; x < w; ++x) {
                const int sx = std::clamp(x - 2 * f, 0, w - 1);
                for (int c = 0; c < 3; ++c)
                    frame[(static_cast<size_t>(y) * w + x) * 3 + c] =
                        base[(static_cast<size_t>(y) * w + sx) * 3 + c];
            }
        v.frames.push_back(std::move(frame));
    }

    CodecParams params;
    const CompressedVideo cv = encode_video(v, params);
    const PFrame& p1 = cv.gops[0].pframes[0];
    // interior blocks (skip the leading edge the content slides away from)
    for (int br = 0; br < p1.motion.rows; ++br) {
        for (int bc = 1; bc < p1.motion.cols; ++bc) {
            CHECK(p1.motion.dy_at(br, bc) == 0);
            CHECK(p1.motion.dx_at(br, bc) == -2);
        }
    }

    // every chosen vector agrees with the exhaustive oracle
    for (int br = 0; br < p1.motion.rows; ++br)
        for (int bc = 0; bc < p1.motion.cols; ++bc) {
            const int y0 = br * params.block_size, x0 = bc * params.block_size;
            const auto [dy, dx] = oracle::best_motion_vector(
                v.frames[1], v.frames[0], w, h, y0, std::min(y0 + params.block_size, h), x0,
                std::min(x0 + params.block_size, w), params.search_radius);
            CHECK(p1.motion.dy_at(br, bc) == dy);
            CHECK(p1.motion.dx_at(br, bc) == dx);
        }
}

TEST_CASE("encoder SAD at the chosen offset never exceeds SAD at zero offset") {
    Rng rng(99);
    const RawVideo v = oracle::drifting_video(rng, 24, 24, 6);
    CodecParams params;
    const CompressedVideo cv = encode_video(v, params);
    const int B = params.block_size;
    for (size_t pi = 0; pi < cv.gops[0].pframes.size(); ++pi) {
        const PFrame& pf = cv.gops[0].pframes[pi];
        const FramePlane& cur = v.frames[pi + 1];
        const FramePlane& ref = v.frames[pi];
        for (int br = 0; br < pf.motion.rows; ++br)
            for (int bc = 0; bc < pf.motion.cols; ++bc) {
                const int y0 = br * B, y1 = std::min(y0 + B, 24);
                const int x0 = bc * B, x1 = std::min(x0 + B, 24);
                const int64_t chosen =
                    detail::block_sad(cur.data(), ref.data(), 24, 24, y0, y1, x0, x1,
                                      pf.motion.dy_at(br, bc), pf.motion.dx_at(br, bc), INT64_MAX);
                const int64_t zero =
                    detail::block_sad(cur.data(), ref.data(), 24, 24, y0, y1, x0, x1, 0, 0, INT64_MAX);
                CHECK(chosen <= zero);
            }
    }
}

TEST_CASE("decode handles all-zero P-frames and residual-only coding") {
    const int w = 16, h = 16;
    Rng rng(3);
    FramePlane iframe(static_cast<size_t>(3) * w * h);
    for (auto& b : iframe) b = static_cast<uint8_t>(rng.bounded(256));

    CompressedVideo cv;
    cv.params = CodecParams{};
    cv.params.gop_pframes = 2;
    cv.width = w;
    cv.height = h;
    cv.fps = 5.0f;
    Gop gop;
    gop.iframe = iframe;
    PFrame zero_p;
    zero_p.motion.rows = 2;
    zero_p.motion.cols = 2;
    zero_p.motion.dy.assign(4, 0);
    zero_p.motion.dx.assign(4, 0);
    zero_p.residual.values.assign(iframe.size(), 0);
    gop.pframes.push_back(zero_p);

    SUBCASE("all-zero motion and residual reproduces the I-frame") {
        gop.pframes.push_back(zero_p);
        cv.gops.push_back(gop);
        const RawVideo out = decode_sequential(cv);
        REQUIRE(out.frames.size() == 3);
        CHECK(out.frames[1] == iframe);
        CHECK(out.frames[2] == iframe);
    }

    SUBCASE("residual-only P-frame decodes to the target") {
        FramePlane target(iframe.size());
        for (auto& b : target) b = static_cast<uint8_t>(rng.bounded(256));
        PFrame res_p = zero_p;
        for (size_t i = 0; i < iframe.size(); ++i)
            res_p.residual.values[i] = static_cast<int16_t>(static_cast<int>(target[i]) - iframe[i]);
        gop.pframes.push_back(res_p);
        cv.gops.push_back(gop);
        const RawVideo out = decode_sequential(cv);
        CHECK(out.frames[2] == target);
    }
}

TEST_CASE("decode rejects malformed input") {
    const RawVideo v = static_video(16, 16, 2, 50);
    CompressedVideo cv = encode_video(v, CodecParams{});

    SUBCASE("motion vector beyond the search radius") {
        cv.gops[0].pframes[0].motion.dy[0] = 9;  // radius is 8
        CHECK_THROWS_AS(decode_sequential(cv), DataError);
    }
    SUBCASE("residual out of range") {
        cv.gops[0].pframes[0].residual.values[0] = 300;
        CHECK_THROWS_AS(decode_sequential(cv), DataError);
    }
}

TEST_CASE("densify assigns each pixel its block's vector") {
    SUBCASE("single block broadcast") {
        MotionField mf;
        mf.rows = 1;
        mf.cols = 1;
        mf.dy = {3};
        mf.dx = {-1};
        const DenseMotion d = densify_motion_field(mf, 8, 8, 8);
        for (size_t i = 0; i < d.dy.size(); ++i) {
            CHECK(d.dy[i] == 3);
            CHECK(d.dx[i] == -1);
        }
    }

    SUBCASE("2x2 grid block membership") {
        MotionField mf;
        mf.rows = 2;
        mf.cols = 2;
        mf.dy = {0, 1, 2, 3};
        mf.dx = {0, 1, 2, 3};
        const DenseMotion d = densify_motion_field(mf, 8, 16, 16);
        CHECK(d.dy[static_cast<size_t>(0) * 16 + 15] == 1);  // pixel (0,15) in block (0,1)
        CHECK(d.dy[static_cast<size_t>(15) * 16 + 0] == 2);  // pixel (15,0) in block (1,0)
    }

    SUBCASE("random field equals the per-pixel lookup") {
        Rng rng(5);
        const int h = 19, w = 23, B = 8;
        MotionField mf;
        mf.rows = ceil_div(h, B);
        mf.cols = ceil_div(w, B);
        for (int i = 0; i < mf.rows * mf.cols; ++i) {
            mf.dy.push_back(static_cast<int8_t>(rng.uniform_int(-8, 8)));
            mf.dx.push_back(static_cast<int8_t>(rng.uniform_int(-8, 8)));
        }
        const DenseMotion d = densify_motion_field(mf, B, h, w);
        for (int y = 0; y < h; ++y)
            for (int x = 0; x < w; ++x) {
                CHECK(d.dy[static_cast<size_t>(y) * w + x] == mf.dy_at(y / B, x / B));
                CHECK(d.dx[static_cast<size_t>(y) * w + x] == mf.dx_at(y / B, x / B));
            }
    }

    SUBCASE("shape mismatch throws") {
        MotionField mf;
        mf.rows = 1;
        mf.cols = 1;
        mf.dy = {0};
        mf.dx = {0};
        CHECK_THROWS_AS(densify_motion_field(mf, 8, 16, 16), std::invalid_argument);
    }
}

TEST_CASE("encode rejects invalid input") {
    CHECK_THROWS_AS(encode_video(RawVideo{}, CodecParams{}), std::invalid_argument);
    RawVideo huge = static_video(8, 8, 1, 0);
    huge.width = 70000;  // would overflow the u16 header field
    CHECK_THROWS_AS(encode_video(huge, CodecParams{}), std::invalid_argument);
}

TEST_CASE("encoding is deterministic and parallelism-invariant") {
    Rng rng(1234);
    const RawVideo v = oracle::drifting_video(rng, 40, 24, 26);
    const CompressedVideo a = encode_video(v, CodecParams{}, 1);
    const CompressedVideo b = encode_video(v, CodecParams{}, 4);
    CHECK(structurally_equal(a, b));
    CHECK(a.params.search_radius == b.params.search_radius);
}
