#pragma once

#include <vector>

#include "cgebd/tape.hpp"

namespace cgebd {

// Temporal contrast over a C x L embedding sequence: per-position learnable
// elementwise sums of the k embeddings before and after, concatenated to
// 2C x L ("head.left.w"/"head.right.w", each k x C). k = 0 bypasses the
// window and duplicates the embedding.
Tape::Id contrast_features(Tape& t, const ParamSet& p, Tape::Id seq, int k);

// conv1d(2C -> C, kernel 3) -> relu -> conv1d(C -> 1, kernel 1) -> sigmoid.
Tape::Id classify_scores(Tape& t, const ParamSet& p, Tape::Id contrast);

// Gaussian soft labels: g_i = min(1, sum_b exp(-(i-b)^2 / (2 alpha^2))) over
// the 0-based boundary positions b. Targets above 1 are clamped after the
// summation so the BCE target range stays valid.
std::vector<double> gaussian_soft_labels(const std::vector<int>& boundary_positions, int length,
                                         double alpha = 1.0);

struct BceResult {
    double loss = 0.0;
    std::vector<double> grad;  // dL/dS per position
};

// Mean over positions of -[g ln S + (1-g) ln(1-S)].
BceResult bce_loss(const std::vector<double>& scores, const std::vector<double>& targets);

// Position l is a boundary iff S^l >= threshold and it strictly dominates its
// neighborhood within nms_radius (ties keep the earliest position). Returns
// timestamps frame_index / fps in seconds.
std::vector<double> pick_boundaries(const std::vector<double>& scores,
                                    const std::vector<int>& frame_indices, float fps,
                                    double threshold = 0.5, int nms_radius = 2);

// Nearest retained frame position for a timestamp; ties pick the earlier one.
int map_time_to_position(double t_sec, float fps, const std::vector<int>& frame_indices);

}  // namespace cgebd
