#pragma once

#include <vector>

#include "cgebd/tensor.hpp"

namespace cgebd::ops {

// Cross-correlation, stride 1, zero "same" padding, odd square kernels.
// x: Cin x H x W, w: Cout x Cin x K x K, b: Cout  ->  Cout x H x W
Tensor conv2d(const Tensor& x, const Tensor& w, const Tensor& b);
Tensor conv2d_grad_input(const Tensor& gy, const Tensor& w, int height, int width);
void conv2d_grad_params(const Tensor& gy, const Tensor& x, Tensor& gw, Tensor& gb);

// x: Cin x L, w: Cout x Cin x K (K odd), b: Cout  ->  Cout x L
Tensor conv1d(const Tensor& x, const Tensor& w, const Tensor& b);
Tensor conv1d_grad_input(const Tensor& gy, const Tensor& w, int length);
void conv1d_grad_params(const Tensor& gy, const Tensor& x, Tensor& gw, Tensor& gb);

// x: (in), w: out x in, b: (out)  ->  (out)
Tensor dense(const Tensor& x, const Tensor& w, const Tensor& b);
Tensor dense_grad_input(const Tensor& gy, const Tensor& w);
void dense_grad_params(const Tensor& gy, const Tensor& x, Tensor& gw, Tensor& gb);

Tensor relu(const Tensor& x);
Tensor relu_grad(const Tensor& x, const Tensor& gy);

Tensor sigmoid(const Tensor& x);
Tensor sigmoid_grad(const Tensor& y, const Tensor& gy);  // from the output y

// Softmax over every position of the (possibly leading-1-channel) map;
// output sums to 1 and keeps the input shape.
Tensor softmax_positions(const Tensor& x);
Tensor softmax_positions_grad(const Tensor& y, const Tensor& gy);

// Non-overlapping mean pooling by an integer factor; dims must divide.
Tensor avg_pool2d(const Tensor& x, int factor);
Tensor avg_pool2d_grad(const Tensor& gy, int factor, int height, int width);

// C x H x W -> (C)
Tensor global_avg_pool(const Tensor& x);
Tensor global_avg_pool_grad(const Tensor& gy, int height, int width);

// y(c,p) = x(c,p) * gate(c)
Tensor channel_mul(const Tensor& x, const Tensor& gate);

// v(c) = sum_p x(c,p) * wmap(p); wmap may be H x W or 1 x H x W
Tensor spatial_weighted_pool(const Tensor& x, const Tensor& wmap);

Tensor add(const Tensor& a, const Tensor& b);
Tensor concat_channels(const std::vector<const Tensor*>& xs);

// Temporal contrast: for each position l of seq (C x L), a learnable
// elementwise-weighted sum of the k neighbors before (wl) and after (wr),
// concatenated to 2C x L. Out-of-range neighbors contribute zero. k = 0
// bypasses the window: the output is [seq; seq].
Tensor contrast1d(const Tensor& seq, const Tensor& wl, const Tensor& wr);
void contrast1d_grad(const Tensor& gy, const Tensor& seq, const Tensor& wl, const Tensor& wr,
                     Tensor& gseq, Tensor& gwl, Tensor& gwr);
Tensor contrast1d_bypass(const Tensor& seq);

}  // namespace cgebd::ops
