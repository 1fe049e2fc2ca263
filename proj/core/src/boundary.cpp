#include "cgebd/boundary.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace cgebd {

Tape::Id contrast_features(Tape& t, const ParamSet& p, Tape::Id seq, int k) {
    if (k < 0) throw std::invalid_argument("contrast_features: k must be >= 0");
    if (k == 0) return t.contrast1d_bypass(seq);
    return t.contrast1d(seq, t.param(p, "head.left.w"), t.param(p, "head.right.w"));
}

Tape::Id classify_scores(Tape& t, const ParamSet& p, Tape::Id contrast) {
    Tape::Id h = t.relu(t.conv1d(contrast, t.param(p, "head.cls1.w"), t.param(p, "head.cls1.b")));
    Tape::Id logits = t.conv1d(h, t.param(p, "head.cls2.w"), t.param(p, "head.cls2.b"));
    return t.sigmoid(logits);
}

std::vector<double> gaussian_soft_labels(const std::vector<int>& boundary_positions, int length,
                                         double alpha) {
    if (length < 1) throw std::invalid_argument("gaussian_soft_labels: length must be >= 1");
    if (alpha <= 0) throw std::invalid_argument("gaussian_soft_labels: alpha must be > 0");
    for (int b : boundary_positions) {
        if (b < 0 || b >= length)
            throw std::invalid_argument("gaussian_soft_labels: boundary position outside the sequence");
    }
    std::vector<double> g(static_cast<size_t>(length), 0.0);
    const double denom = 2.0 * alpha * alpha;
    for (int b : boundary_positions) {
        for (int i = 0; i < length; ++i) {
            const double d = static_cast<double>(i - b);
            g[static_cast<size_t>(i)] += std::exp(-d * d / denom);
        }
    }
    for (double& v : g) v = std::min(v, 1.0);
    return g;
}

BceResult bce_loss(const std::vector<double>& scores, const std::vector<double>& targets) {
    if (scores.size() != targets.size()) throw std::invalid_argument("bce_loss: length mismatch");
    if (scores.empty()) throw std::invalid_argument("bce_loss: empty inputs");
    const double n = static_cast<double>(scores.size());
    BceResult out;
    out.grad.resize(scores.size());
    for (size_t i = 0; i < scores.size(); ++i) {
        // Sigmoid outputs are strictly inside (0,1); the clamp guards direct calls.
        const double s = std::min(std::max(scores[i], 1e-12), 1.0 - 1e-12);
        const double g = targets[i];
        out.loss += -(g * std::log(s) + (1.0 - g) * std::log(1.0 - s));
        out.grad[i] = (s - g) / (s * (1.0 - s)) / n;
    }
    out.loss /= n;
    return out;
}

std::vector<double> pick_boundaries(const std::vector<double>& scores,
                                    const std::vector<int>& frame_indices, float fps,
                                    double threshold, int nms_radius) {
    if (scores.size() != frame_indices.size())
        throw std::invalid_argument("pick_boundaries: scores/frame_indices length mismatch");
    const int n = static_cast<int>(scores.size());
    std::vector<double> out;
    for (int l = 0; l < n; ++l) {
        if (scores[static_cast<size_t>(l)] < threshold) continue;
        bool peak = true;
        for (int m = std::max(0, l - nms_radius); m <= std::min(n - 1, l + nms_radius); ++m) {
            if (m == l) continue;
            const double sm = scores[static_cast<size_t>(m)];
            const double sl = scores[static_cast<size_t>(l)];
            if (sm > sl || (sm == sl && m < l)) {
                peak = false;
                break;
            }
        }
        if (peak) out.push_back(frame_indices[static_cast<size_t>(l)] / static_cast<double>(fps));
    }
    return out;
}

int map_time_to_position(double t_sec, float fps, const std::vector<int>& frame_indices) {
    if (frame_indices.empty()) throw std::invalid_argument("map_time_to_position: empty sequence");
    const double frame = t_sec * fps;
    int best = 0;
    double best_dist = std::abs(frame_indices[0] - frame);
    for (int i = 1; i < static_cast<int>(frame_indices.size()); ++i) {
        const double d = std::abs(frame_indices[static_cast<size_t>(i)] - frame);
        if (d < best_dist) {
            best_dist = d;
            best = i;
        }
    }
    return best;
}

}  // namespace cgebd
