#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "cgebd/boundary.hpp"
#include "cgebd/gradcheck.hpp"
#include "cgebd/ops.hpp"
#include "cgebd/rng.hpp"
#include "oracle_naive.hpp"

using namespace cgebd;

namespace {

ParamSet head_params(int k, int c, uint64_t seed) {
    ParamSet ps;
    if (k > 0) {
        ps.add("head.left.w", fan_in_uniform({k, c}, k, seed, "head.left.w"));
        ps.add("head.right.w", fan_in_uniform({k, c}, k, seed, "head.right.w"));
    }
    ps.add("head.cls1.w", fan_in_uniform({c, 2 * c, 3}, 2 * c * 3, seed, "head.cls1.w"));
    ps.add("head.cls1.b", Tensor({c}));
    ps.add("head.cls2.w", fan_in_uniform({1, c, 1}, c, seed, "head.cls2.w"));
    ps.add("head.cls2.b", Tensor({1}));
    return ps;
}

Tensor stack(const std::vector<Tensor>& cols) {
    const int c = static_cast<int>(cols[0].size());
    const int len = static_cast<int>(cols.size());
    Tensor seq({c, len});
    for (int l = 0; l < len; ++l)
        for (int ci = 0; ci < c; ++ci) seq[static_cast<size_t>(ci) * len + l] = cols[static_cast<size_t>(l)][static_cast<size_t>(ci)];
    return seq;
}

}  // namespace

TEST_CASE("contrast features: unit weights shift, edges pad with zero") {
    const int c = 3, len = 4, k = 1;
    ParamSet ps = head_params(k, c, 1);
    ps.find("head.left.w")->value.fill(1.0);
    ps.find("head.right.w")->value.fill(1.0);

    Rng rng(2);
    std::vector<Tensor> cols;
    for (int l = 0; l < len; ++l) cols.push_back(oracle::random_tensor(rng, {c}));
    const Tensor seq = stack(cols);

    Tape tape;
    const Tape::Id chi = contrast_features(tape, ps, tape.input(seq), k);
    const Tensor& out = tape.value(chi);
    REQUIRE(out.shape() == std::vector<int>{2 * c, len});

    // k=1 with unit weights: phi^l = v^{l-1}; phi^0 = 0 (left padding)
    for (int ci = 0; ci < c; ++ci) {
        CHECK(out[static_cast<size_t>(ci) * len + 0] == 0.0);
        for (int l = 1; l < len; ++l)
            CHECK(out[static_cast<size_t>(ci) * len + l] ==
                  doctest::Approx(cols[static_cast<size_t>(l - 1)][static_cast<size_t>(ci)]));
        // psi at the last position is zero (right padding)
        CHECK(out[static_cast<size_t>(c + ci) * len + (len - 1)] == 0.0);
    }
}

TEST_CASE("contrast features match the loop oracle for k=2") {
    const int c = 5, len = 9, k = 2;
    ParamSet ps = head_params(k, c, 3);
    Rng rng(4);
    std::vector<Tensor> cols;
    for (int l = 0; l < len; ++l) cols.push_back(oracle::random_tensor(rng, {c}));

    Tape tape;
    const Tape::Id chi = contrast_features(tape, ps, tape.input(stack(cols)), k);
    const Tensor& out = tape.value(chi);

    const auto ref = oracle::contrast(cols, ps.value("head.left.w"), ps.value("head.right.w"), k);
    double worst = 0.0;
    for (int l = 0; l < len; ++l)
        for (int ci = 0; ci < 2 * c; ++ci)
            worst = std::max(worst, std::abs(out[static_cast<size_t>(ci) * len + l] -
                                             ref[static_cast<size_t>(l)][static_cast<size_t>(ci)]));
    CHECK(worst < 1e-12);
}

TEST_CASE("k = 0 bypass duplicates the embedding") {
    const int c = 3, len = 4;
    ParamSet ps = head_params(0, c, 5);
    Rng rng(6);
    std::vector<Tensor> cols;
    for (int l = 0; l < len; ++l) cols.push_back(oracle::random_tensor(rng, {c}));
    Tape tape;
    const Tensor& out = tape.value(contrast_features(tape, ps, tape.input(stack(cols)), 0));
    for (int l = 0; l < len; ++l)
        for (int ci = 0; ci < c; ++ci) {
            CHECK(out[static_cast<size_t>(ci) * len + l] == cols[static_cast<size_t>(l)][static_cast<size_t>(ci)]);
            CHECK(out[static_cast<size_t>(c + ci) * len + l] == cols[static_cast<size_t>(l)][static_cast<size_t>(ci)]);
        }
}

TEST_CASE("negative k is rejected") {
    ParamSet ps = head_params(1, 2, 1);
    Tape tape;
    const Tape::Id seq = tape.input(Tensor({2, 3}));
    CHECK_THROWS_AS(contrast_features(tape, ps, seq, -1), std::invalid_argument);
}

TEST_CASE("classifier: zero weights score 0.5 everywhere; range is (0,1)") {
    const int c = 4, len = 6;
    ParamSet ps = head_params(2, c, 7);
    Rng rng(8);
    const Tensor chi = oracle::random_tensor(rng, {2 * c, len});

    SUBCASE("zero weights") {
        ps.find("head.cls1.w")->value.fill(0.0);
        ps.find("head.cls2.w")->value.fill(0.0);
        Tape tape;
        const Tensor& s = tape.value(classify_scores(tape, ps, tape.input(chi)));
        REQUIRE(s.size() == static_cast<size_t>(len));
        for (size_t i = 0; i < s.size(); ++i) CHECK(s[i] == 0.5);
    }
    SUBCASE("sigmoid range") {
        Tape tape;
        const Tensor& s = tape.value(classify_scores(tape, ps, tape.input(chi)));
        for (size_t i = 0; i < s.size(); ++i) {
            CHECK(s[i] > 0.0);
            CHECK(s[i] < 1.0);
        }
    }
}

TEST_CASE("contrast + classifier composite passes finite differences") {
    const int c = 4, len = 7, k = 2;
    ParamSet ps = head_params(k, c, 9);
    Rng rng(10);
    const Tensor seq = oracle::random_tensor(rng, {c, len});
    Tensor targets({len});
    for (int i = 0; i < len; ++i) targets[static_cast<size_t>(i)] = (i == 3) ? 1.0 : 0.1;

    auto loss_fn = [&](bool with_grads) {
        Tape tape;
        const Tape::Id scores = classify_scores(tape, ps, contrast_features(tape, ps, tape.input(seq), k));
        const Tape::Id loss = tape.bce_loss(scores, targets);
        if (with_grads) {
            tape.backward(loss);
            tape.add_param_grads_to(ps);
        }
        return tape.value(loss)[0];
    };
    const GradCheckReport report = gradient_check(loss_fn, ps);
    CHECK(report.max_rel_err < 1e-6);
}

TEST_CASE("gaussian soft labels") {
    SUBCASE("single boundary values") {
        const auto g = gaussian_soft_labels({4}, 9, 1.0);  // 0-based position 4
        CHECK(g[4] == doctest::Approx(1.0));
        CHECK(g[3] == doctest::Approx(std::exp(-0.5)).epsilon(1e-12));
        CHECK(g[5] == doctest::Approx(std::exp(-0.5)).epsilon(1e-12));
        CHECK(g[2] == doctest::Approx(std::exp(-2.0)).epsilon(1e-12));
        CHECK(g[6] == doctest::Approx(std::exp(-2.0)).epsilon(1e-12));
    }
    SUBCASE("no boundaries give an all-zero track") {
        const auto g = gaussian_soft_labels({}, 5, 1.0);
        for (double v : g) CHECK(v == 0.0);
    }
    SUBCASE("adjacent boundaries sum then clamp at one") {
        const auto g = gaussian_soft_labels({4, 5}, 10, 1.0);
        CHECK(g[4] == 1.0);  // 1 + exp(-0.5) clamped
        CHECK(g[5] == 1.0);
    }
    SUBCASE("symmetry and monotone decay around a single boundary") {
        const int L = 11, b = 5;
        const auto g = gaussian_soft_labels({b}, L, 1.0);
        for (int d = 1; d <= 5; ++d) {
            CHECK(g[static_cast<size_t>(b - d)] == doctest::Approx(g[static_cast<size_t>(b + d)]).epsilon(1e-15));
            CHECK(g[static_cast<size_t>(b + d)] <= g[static_cast<size_t>(b + d - 1)]);
        }
    }
    SUBCASE("position outside the sequence throws") {
        CHECK_THROWS_AS(gaussian_soft_labels({9}, 5, 1.0), std::invalid_argument);
    }
    SUBCASE("matches direct evaluation within 1e-12") {
        Rng rng(11);
        for (int trial = 0; trial < 20; ++trial) {
            const int L = 5 + static_cast<int>(rng.bounded(20));
            std::vector<int> positions;
            const int n = static_cast<int>(rng.bounded(4));
            for (int i = 0; i < n; ++i) positions.push_back(static_cast<int>(rng.bounded(static_cast<uint64_t>(L))));
            const auto g = gaussian_soft_labels(positions, L, 1.0);
            for (int i = 0; i < L; ++i) {
                double direct = 0.0;
                for (int b : positions) direct += std::exp(-0.5 * (i - b) * (i - b));
                direct = std::min(direct, 1.0);
                CHECK(std::abs(g[static_cast<size_t>(i)] - direct) < 1e-12);
            }
        }
    }
}

TEST_CASE("bce loss values and gradient") {
    SUBCASE("uniform 0.5 scores against hard labels give ln 2") {
        const std::vector<double> s(6, 0.5);
        const std::vector<double> g{0, 1, 0, 1, 1, 0};
        const BceResult r = bce_loss(s, g);
        CHECK(r.loss == doctest::Approx(std::log(2.0)).epsilon(1e-12));
    }
    SUBCASE("perfect prediction limit") {
        const std::vector<double> g{0, 1, 1, 0};
        std::vector<double> s;
        for (double v : g) s.push_back(std::clamp(v, 1e-9, 1.0 - 1e-9));
        CHECK(bce_loss(s, g).loss < 1e-8);
    }
    SUBCASE("gradient matches finite differences") {
        Rng rng(12);
        std::vector<double> s, g;
        for (int i = 0; i < 8; ++i) {
            s.push_back(rng.uniform(0.05, 0.95));
            g.push_back(rng.uniform(0.0, 1.0));
        }
        const BceResult r = bce_loss(s, g);
        for (size_t i = 0; i < s.size(); ++i) {
            const double h = 1e-7;
            std::vector<double> up = s, down = s;
            up[i] += h;
            down[i] -= h;
            const double numeric = (bce_loss(up, g).loss - bce_loss(down, g).loss) / (2 * h);
            CHECK(std::abs(r.grad[i] - numeric) / std::max(1.0, std::abs(numeric)) < 1e-6);
        }
    }
}

TEST_CASE("peak picking") {
    SUBCASE("single peak with timestamp") {
        const std::vector<double> s{0.1, 0.9, 0.2, 0.1};
        const std::vector<int> frames{0, 4, 8, 12};
        const auto out = pick_boundaries(s, frames, 8.0f, 0.5, 2);
        REQUIRE(out.size() == 1);
        CHECK(out[0] == doctest::Approx(0.5));
    }
    SUBCASE("all below threshold yields nothing") {
        const std::vector<double> s{0.4, 0.49, 0.3};
        CHECK(pick_boundaries(s, {0, 1, 2}, 1.0f, 0.5, 2).empty());
    }
    SUBCASE("plateau keeps the earlier position") {
        const std::vector<double> s{0.9, 0.9};
        const auto out = pick_boundaries(s, {0, 1}, 1.0f, 0.5, 2);
        REQUIRE(out.size() == 1);
        CHECK(out[0] == 0.0);
    }
    SUBCASE("shifting frame indices shifts timestamps only") {
        Rng rng(13);
        std::vector<double> s;
        for (int i = 0; i < 12; ++i) s.push_back(rng.uniform(0.0, 1.0));
        std::vector<int> frames, shifted;
        for (int i = 0; i < 12; ++i) {
            frames.push_back(i * 3);
            shifted.push_back(i * 3 + 30);
        }
        const auto a = pick_boundaries(s, frames, 10.0f, 0.5, 2);
        const auto b = pick_boundaries(s, shifted, 10.0f, 0.5, 2);
        REQUIRE(a.size() == b.size());
        for (size_t i = 0; i < a.size(); ++i) CHECK(b[i] == doctest::Approx(a[i] + 3.0));
    }
}

TEST_CASE("nearest-position mapping breaks ties toward the earlier index") {
    const std::vector<int> frames{0, 4, 8};
    CHECK(map_time_to_position(0.0, 1.0f, frames) == 0);
    CHECK(map_time_to_position(2.0, 1.0f, frames) == 0);  // tie 0 vs 4
    CHECK(map_time_to_position(6.5, 1.0f, frames) == 2);
    CHECK(map_time_to_position(100.0, 1.0f, frames) == 2);
}
