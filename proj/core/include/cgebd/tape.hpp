#pragma once

#include <functional>
#include <string>
#include <vector>

#include "cgebd/params.hpp"
#include "cgebd/tensor.hpp"

namespace cgebd {

// Records a forward computation over the fixed op set and replays it in
// reverse to produce exact analytic gradients. Each op returns its output
// value plus the recorded gradient function; fan-out is handled by summing
// into the parent's gradient buffer. Gradients for parameters are collected
// per tape so independent samples can run on separate threads and be reduced
// in a fixed order afterwards.
class Tape {
public:
    using Id = int;

    Id input(Tensor value);
    Id param(const ParamSet& params, std::string_view name);

    Id conv2d(Id x, Id w, Id b);
    Id conv1d(Id x, Id w, Id b);
    Id dense(Id x, Id w, Id b);
    Id relu(Id x);
    Id sigmoid(Id x);
    Id softmax_positions(Id x);
    Id avg_pool2d(Id x, int factor);
    Id global_avg_pool(Id x);
    Id channel_mul(Id x, Id gate);
    Id spatial_weighted_pool(Id x, Id wmap);
    Id add(Id a, Id b);
    Id concat_channels(const std::vector<Id>& xs);
    Id contrast1d(Id seq, Id wl, Id wr);
    Id contrast1d_bypass(Id seq);
    // Stacks L vectors of length C into a C x L sequence.
    Id stack_columns(const std::vector<Id>& columns);
    // Mean binary cross-entropy of scores in (0,1) against fixed targets.
    Id bce_loss(Id scores, Tensor targets);

    const Tensor& value(Id id) const { return nodes_[static_cast<size_t>(id)].value; }
    size_t num_nodes() const { return nodes_.size(); }

    // Seeds d(loss) = seed and propagates. The loss node must be scalar.
    void backward(Id loss, double seed = 1.0);

    // Gradient w.r.t. any node from the last backward pass (empty if the node
    // was not reached).
    const Tensor& grad(Id id) const { return grads_[static_cast<size_t>(id)]; }

    // Adds this tape's parameter gradients into the ParamSet buffers, scaled.
    // Call from a single thread, in sample order, for determinism.
    void add_param_grads_to(ParamSet& params, double scale = 1.0) const;

private:
    struct Node {
        Tensor value;
        std::function<void(Tape&, const Tensor&)> back;  // null for leaves
    };

    Id emit(Tensor value, std::function<void(Tape&, const Tensor&)> back);
    Tensor& grad_buf(Id id);
    void accumulate(Id id, const Tensor& g);

    std::vector<Node> nodes_;
    std::vector<Tensor> grads_;
    std::vector<std::pair<Id, std::string>> param_nodes_;
};

}  // namespace cgebd
