#include "cgebd/tape.hpp"

#include <cmath>
#include <stdexcept>

#include "cgebd/ops.hpp"

namespace cgebd {

Tape::Id Tape::emit(Tensor value, std::function<void(Tape&, const Tensor&)> back) {
    nodes_.push_back(Node{std::move(value), std::move(back)});
    grads_.emplace_back();
    return static_cast<Id>(nodes_.size() - 1);
}

Tensor& Tape::grad_buf(Id id) {
    Tensor& g = grads_[static_cast<size_t>(id)];
    if (g.empty()) g = Tensor(nodes_[static_cast<size_t>(id)].value.shape());
    return g;
}

void Tape::accumulate(Id id, const Tensor& g) {
    Tensor& buf = grad_buf(id);
    for (size_t i = 0; i < g.size(); ++i) buf[i] += g[i];
}

Tape::Id Tape::input(Tensor value) { return emit(std::move(value), nullptr); }

Tape::Id Tape::param(const ParamSet& params, std::string_view name) {
    const ParamSet::Entry* e = params.find(name);
    if (!e) throw std::invalid_argument("Tape::param: unknown parameter " + std::string(name));
    Id id = emit(e->value, nullptr);
    param_nodes_.emplace_back(id, e->name);
    return id;
}

Tape::Id Tape::conv2d(Id x, Id w, Id b) {
    Tensor y = ops::conv2d(value(x), value(w), value(b));
    const int h = value(x).dim(1), wd = value(x).dim(2);
    return emit(std::move(y), [x, w, b, h, wd](Tape& t, const Tensor& gy) {
        t.accumulate(x, ops::conv2d_grad_input(gy, t.value(w), h, wd));
        ops::conv2d_grad_params(gy, t.value(x), t.grad_buf(w), t.grad_buf(b));
    });
}

Tape::Id Tape::conv1d(Id x, Id w, Id b) {
    Tensor y = ops::conv1d(value(x), value(w), value(b));
    const int len = value(x).dim(1);
    return emit(std::move(y), [x, w, b, len](Tape& t, const Tensor& gy) {
        t.accumulate(x, ops::conv1d_grad_input(gy, t.value(w), len));
        ops::conv1d_grad_params(gy, t.value(x), t.grad_buf(w), t.grad_buf(b));
    });
}

Tape::Id Tape::dense(Id x, Id w, Id b) {
    Tensor y = ops::dense(value(x), value(w), value(b));
    return emit(std::move(y), [x, w, b](Tape& t, const Tensor& gy) {
        t.accumulate(x, ops::dense_grad_input(gy, t.value(w)));
        ops::dense_grad_params(gy, t.value(x), t.grad_buf(w), t.grad_buf(b));
    });
}

Tape::Id Tape::relu(Id x) {
    return emit(ops::relu(value(x)), [x](Tape& t, const Tensor& gy) {
        t.accumulate(x, ops::relu_grad(t.value(x), gy));
    });
}

Tape::Id Tape::sigmoid(Id x) {
    Id id = emit(ops::sigmoid(value(x)), nullptr);
    nodes_[static_cast<size_t>(id)].back = [x, id](Tape& t, const Tensor& gy) {
        t.accumulate(x, ops::sigmoid_grad(t.value(id), gy));
    };
    return id;
}

Tape::Id Tape::softmax_positions(Id x) {
    Id id = emit(ops::softmax_positions(value(x)), nullptr);
    nodes_[static_cast<size_t>(id)].back = [x, id](Tape& t, const Tensor& gy) {
        t.accumulate(x, ops::softmax_positions_grad(t.value(id), gy));
    };
    return id;
}

Tape::Id Tape::avg_pool2d(Id x, int factor) {
    const int h = value(x).dim(1), w = value(x).dim(2);
    return emit(ops::avg_pool2d(value(x), factor), [x, factor, h, w](Tape& t, const Tensor& gy) {
        t.accumulate(x, ops::avg_pool2d_grad(gy, factor, h, w));
    });
}

Tape::Id Tape::global_avg_pool(Id x) {
    const int h = value(x).dim(1), w = value(x).dim(2);
    return emit(ops::global_avg_pool(value(x)), [x, h, w](Tape& t, const Tensor& gy) {
        t.accumulate(x, ops::global_avg_pool_grad(gy, h, w));
    });
}

Tape::Id Tape::channel_mul(Id x, Id gate) {
    return emit(ops::channel_mul(value(x), value(gate)), [x, gate](Tape& t, const Tensor& gy) {
        const Tensor& xv = t.value(x);
        const Tensor& gv = t.value(gate);
        const size_t plane = static_cast<size_t>(xv.dim(1)) * xv.dim(2);
        Tensor& gx = t.grad_buf(x);
        Tensor& gg = t.grad_buf(gate);
        for (int c = 0; c < xv.dim(0); ++c) {
            const double g = gv[static_cast<size_t>(c)];
            const double* xp = xv.data() + static_cast<size_t>(c) * plane;
            const double* gyp = gy.data() + static_cast<size_t>(c) * plane;
            double* gxp = gx.data() + static_cast<size_t>(c) * plane;
            double acc = 0.0;
            for (size_t i = 0; i < plane; ++i) {
                gxp[i] += gyp[i] * g;
                acc += gyp[i] * xp[i];
            }
            gg[static_cast<size_t>(c)] += acc;
        }
    });
}

Tape::Id Tape::spatial_weighted_pool(Id x, Id wmap) {
    return emit(ops::spatial_weighted_pool(value(x), value(wmap)), [x, wmap](Tape& t, const Tensor& gy) {
        const Tensor& xv = t.value(x);
        const Tensor& wv = t.value(wmap);
        const size_t plane = static_cast<size_t>(xv.dim(1)) * xv.dim(2);
        Tensor& gx = t.grad_buf(x);
        Tensor& gw = t.grad_buf(wmap);
        for (int c = 0; c < xv.dim(0); ++c) {
            const double g = gy[static_cast<size_t>(c)];
            const double* xp = xv.data() + static_cast<size_t>(c) * plane;
            double* gxp = gx.data() + static_cast<size_t>(c) * plane;
            for (size_t i = 0; i < plane; ++i) {
                gxp[i] += g * wv[i];
                gw[i] += g * xp[i];
            }
        }
    });
}

Tape::Id Tape::add(Id a, Id b) {
    return emit(ops::add(value(a), value(b)), [a, b](Tape& t, const Tensor& gy) {
        t.accumulate(a, gy);
        t.accumulate(b, gy);
    });
}

Tape::Id Tape::concat_channels(const std::vector<Id>& xs) {
    std::vector<const Tensor*> ptrs;
    ptrs.reserve(xs.size());
    for (Id x : xs) ptrs.push_back(&value(x));
    Tensor y = ops::concat_channels(ptrs);
    return emit(std::move(y), [xs](Tape& t, const Tensor& gy) {
        size_t off = 0;
        for (Id x : xs) {
            const Tensor& xv = t.value(x);
            Tensor& gx = t.grad_buf(x);
            for (size_t i = 0; i < xv.size(); ++i) gx[i] += gy[off + i];
            off += xv.size();
        }
    });
}

Tape::Id Tape::contrast1d(Id seq, Id wl, Id wr) {
    return emit(ops::contrast1d(value(seq), value(wl), value(wr)), [seq, wl, wr](Tape& t, const Tensor& gy) {
        ops::contrast1d_grad(gy, t.value(seq), t.value(wl), t.value(wr),
                             t.grad_buf(seq), t.grad_buf(wl), t.grad_buf(wr));
    });
}

Tape::Id Tape::contrast1d_bypass(Id seq) {
    return emit(ops::contrast1d_bypass(value(seq)), [seq](Tape& t, const Tensor& gy) {
        const size_t n = t.value(seq).size();
        Tensor& gs = t.grad_buf(seq);
        for (size_t i = 0; i < n; ++i) gs[i] += gy[i] + gy[n + i];
    });
}

Tape::Id Tape::stack_columns(const std::vector<Id>& columns) {
    if (columns.empty()) throw std::invalid_argument("stack_columns: no columns");
    const int c = static_cast<int>(value(columns[0]).size());
    const int len = static_cast<int>(columns.size());
    Tensor y({c, len});
    for (int l = 0; l < len; ++l) {
        const Tensor& v = value(columns[static_cast<size_t>(l)]);
        if (static_cast<int>(v.size()) != c) throw std::invalid_argument("stack_columns: column length mismatch");
        for (int ci = 0; ci < c; ++ci) y[static_cast<size_t>(ci) * len + l] = v[static_cast<size_t>(ci)];
    }
    return emit(std::move(y), [columns, c, len](Tape& t, const Tensor& gy) {
        for (int l = 0; l < len; ++l) {
            Tensor& g = t.grad_buf(columns[static_cast<size_t>(l)]);
            for (int ci = 0; ci < c; ++ci) g[static_cast<size_t>(ci)] += gy[static_cast<size_t>(ci) * len + l];
        }
    });
}

Tape::Id Tape::bce_loss(Id scores, Tensor targets) {
    const Tensor& s = value(scores);
    if (s.size() != targets.size()) throw std::invalid_argument("bce_loss: length mismatch");
    if (s.size() == 0) throw std::invalid_argument("bce_loss: empty score track");
    const double n = static_cast<double>(s.size());
    double loss = 0.0;
    for (size_t i = 0; i < s.size(); ++i) {
        // Guard: scores reach here through a sigmoid so they sit strictly in
        // (0,1); the clamp only protects hand-built inputs.
        const double si = std::min(std::max(s[i], 1e-12), 1.0 - 1e-12);
        loss += -(targets[i] * std::log(si) + (1.0 - targets[i]) * std::log(1.0 - si));
    }
    loss /= n;
    Tensor tgt = std::move(targets);
    return emit(Tensor::scalar(loss), [scores, tgt, n](Tape& t, const Tensor& gy) {
        const Tensor& s = t.value(scores);
        Tensor& gs = t.grad_buf(scores);
        const double g0 = gy[0] / n;
        for (size_t i = 0; i < s.size(); ++i) {
            const double si = std::min(std::max(s[i], 1e-12), 1.0 - 1e-12);
            gs[i] += g0 * (si - tgt[i]) / (si * (1.0 - si));
        }
    });
}

void Tape::backward(Id loss, double seed) {
    if (value(loss).size() != 1) throw std::invalid_argument("Tape::backward: loss must be scalar");
    for (auto& g : grads_) g = Tensor();
    grad_buf(loss)[0] = seed;
    for (Id id = loss; id >= 0; --id) {
        const Node& node = nodes_[static_cast<size_t>(id)];
        const Tensor& g = grads_[static_cast<size_t>(id)];
        if (node.back && !g.empty()) node.back(*this, g);
    }
}

void Tape::add_param_grads_to(ParamSet& params, double scale) const {
    for (const auto& [id, name] : param_nodes_) {
        const Tensor& g = grads_[static_cast<size_t>(id)];
        if (g.empty()) continue;
        ParamSet::Entry* e = params.find(name);
        if (!e) throw std::invalid_argument("add_param_grads_to: unknown parameter " + name);
        for (size_t i = 0; i < g.size(); ++i) e->grad[i] += scale * g[i];
    }
}

}  // namespace cgebd
