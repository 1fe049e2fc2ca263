#include "cgebd/ops.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace cgebd::ops {

namespace {

void check(bool ok, const char* msg) {
    if (!ok) throw std::invalid_argument(msg);
}

}  // namespace

Tensor conv2d(const Tensor& x, const Tensor& w, const Tensor& b) {
    check(x.rank() == 3, "conv2d: input must be C x H x W");
    check(w.rank() == 4, "conv2d: weights must be Cout x Cin x K x K");
    const int cin = x.dim(0), h = x.dim(1), wd = x.dim(2);
    const int cout = w.dim(0), k = w.dim(2);
    check(w.dim(1) == cin, "conv2d: channel mismatch");
    check(w.dim(3) == k && k % 2 == 1, "conv2d: kernel must be odd and square");
    check(b.rank() == 1 && b.dim(0) == cout, "conv2d: bias shape mismatch");
    const int r = k / 2;
    const size_t plane = static_cast<size_t>(h) * wd;

    Tensor y({cout, h, wd});
    for (int co = 0; co < cout; ++co) {
        double* yp = y.data() + static_cast<size_t>(co) * plane;
        const double bias = b[static_cast<size_t>(co)];
        for (size_t i = 0; i < plane; ++i) yp[i] = bias;
        for (int ci = 0; ci < cin; ++ci) {
            const double* xp = x.data() + static_cast<size_t>(ci) * plane;
            const double* wp = w.data() + ((static_cast<size_t>(co) * cin + ci) * k) * k;
            for (int ky = 0; ky < k; ++ky) {
                for (int kx = 0; kx < k; ++kx) {
                    const double wv = wp[static_cast<size_t>(ky) * k + kx];
                    const int dy = ky - r, dx = kx - r;
                    const int y0 = std::max(0, -dy), y1 = std::min(h, h - dy);
                    const int x0 = std::max(0, -dx), x1 = std::min(wd, wd - dx);
                    for (int yy = y0; yy < y1; ++yy) {
                        double* out_row = yp + static_cast<size_t>(yy) * wd;
                        const double* in_row = xp + static_cast<size_t>(yy + dy) * wd + dx;
                        for (int xx = x0; xx < x1; ++xx) out_row[xx] += wv * in_row[xx];
                    }
                }
            }
        }
    }
    return y;
}

Tensor conv2d_grad_input(const Tensor& gy, const Tensor& w, int height, int width) {
    const int cout = w.dim(0), cin = w.dim(1), k = w.dim(2);
    const int r = k / 2;
    const size_t plane = static_cast<size_t>(height) * width;

    Tensor gx({cin, height, width});
    for (int ci = 0; ci < cin; ++ci) {
        double* gxp = gx.data() + static_cast<size_t>(ci) * plane;
        for (int co = 0; co < cout; ++co) {
            const double* gyp = gy.data() + static_cast<size_t>(co) * plane;
            const double* wp = w.data() + ((static_cast<size_t>(co) * cin + ci) * k) * k;
            for (int ky = 0; ky < k; ++ky) {
                for (int kx = 0; kx < k; ++kx) {
                    const double wv = wp[static_cast<size_t>(ky) * k + kx];
                    const int dy = ky - r, dx = kx - r;
                    // gx[yi][xi] += wv * gy[yi - dy][xi - dx]
                    const int y0 = std::max(0, dy), y1 = std::min(height, height + dy);
                    const int x0 = std::max(0, dx), x1 = std::min(width, width + dx);
                    for (int yi = y0; yi < y1; ++yi) {
                        double* gx_row = gxp + static_cast<size_t>(yi) * width;
                        const double* gy_row = gyp + static_cast<size_t>(yi - dy) * width - dx;
                        for (int xi = x0; xi < x1; ++xi) gx_row[xi] += wv * gy_row[xi];
                    }
                }
            }
        }
    }
    return gx;
}

void conv2d_grad_params(const Tensor& gy, const Tensor& x, Tensor& gw, Tensor& gb) {
    const int cout = gy.dim(0), h = gy.dim(1), wd = gy.dim(2);
    const int cin = x.dim(0), k = gw.dim(2);
    const int r = k / 2;
    const size_t plane = static_cast<size_t>(h) * wd;

    for (int co = 0; co < cout; ++co) {
        const double* gyp = gy.data() + static_cast<size_t>(co) * plane;
        double s = 0.0;
        for (size_t i = 0; i < plane; ++i) s += gyp[i];
        gb[static_cast<size_t>(co)] += s;
        for (int ci = 0; ci < cin; ++ci) {
            const double* xp = x.data() + static_cast<size_t>(ci) * plane;
            double* gwp = gw.data() + ((static_cast<size_t>(co) * cin + ci) * k) * k;
            for (int ky = 0; ky < k; ++ky) {
                for (int kx = 0; kx < k; ++kx) {
                    const int dy = ky - r, dx = kx - r;
                    const int y0 = std::max(0, -dy), y1 = std::min(h, h - dy);
                    const int x0 = std::max(0, -dx), x1 = std::min(wd, wd - dx);
                    double acc = 0.0;
                    for (int yy = y0; yy < y1; ++yy) {
                        const double* gy_row = gyp + static_cast<size_t>(yy) * wd;
                        const double* x_row = xp + static_cast<size_t>(yy + dy) * wd + dx;
                        for (int xx = x0; xx < x1; ++xx) acc += gy_row[xx] * x_row[xx];
                    }
                    gwp[static_cast<size_t>(ky) * k + kx] += acc;
                }
            }
        }
    }
}

Tensor conv1d(const Tensor& x, const Tensor& w, const Tensor& b) {
    check(x.rank() == 2, "conv1d: input must be C x L");
    check(w.rank() == 3, "conv1d: weights must be Cout x Cin x K");
    const int cin = x.dim(0), len = x.dim(1);
    const int cout = w.dim(0), k = w.dim(2);
    check(w.dim(1) == cin, "conv1d: channel mismatch");
    check(k % 2 == 1, "conv1d: kernel must be odd");
    check(b.rank() == 1 && b.dim(0) == cout, "conv1d: bias shape mismatch");
    const int r = k / 2;

    Tensor y({cout, len});
    for (int co = 0; co < cout; ++co) {
        double* yp = y.data() + static_cast<size_t>(co) * len;
        for (int l = 0; l < len; ++l) yp[l] = b[static_cast<size_t>(co)];
        for (int ci = 0; ci < cin; ++ci) {
            const double* xp = x.data() + static_cast<size_t>(ci) * len;
            const double* wp = w.data() + (static_cast<size_t>(co) * cin + ci) * k;
            for (int kk = 0; kk < k; ++kk) {
                const double wv = wp[kk];
                const int d = kk - r;
                const int l0 = std::max(0, -d), l1 = std::min(len, len - d);
                for (int l = l0; l < l1; ++l) yp[l] += wv * xp[l + d];
            }
        }
    }
    return y;
}

Tensor conv1d_grad_input(const Tensor& gy, const Tensor& w, int length) {
    const int cout = w.dim(0), cin = w.dim(1), k = w.dim(2);
    const int r = k / 2;
    Tensor gx({cin, length});
    for (int ci = 0; ci < cin; ++ci) {
        double* gxp = gx.data() + static_cast<size_t>(ci) * length;
        for (int co = 0; co < cout; ++co) {
            const double* gyp = gy.data() + static_cast<size_t>(co) * length;
            const double* wp = w.data() + (static_cast<size_t>(co) * cin + ci) * k;
            for (int kk = 0; kk < k; ++kk) {
                const double wv = wp[kk];
                const int d = kk - r;
                const int l0 = std::max(0, d), l1 = std::min(length, length + d);
                for (int l = l0; l < l1; ++l) gxp[l] += wv * gyp[l - d];
            }
        }
    }
    return gx;
}

void conv1d_grad_params(const Tensor& gy, const Tensor& x, Tensor& gw, Tensor& gb) {
    const int cout = gy.dim(0), len = gy.dim(1);
    const int cin = x.dim(0), k = gw.dim(2);
    const int r = k / 2;
    for (int co = 0; co < cout; ++co) {
        const double* gyp = gy.data() + static_cast<size_t>(co) * len;
        double s = 0.0;
        for (int l = 0; l < len; ++l) s += gyp[l];
        gb[static_cast<size_t>(co)] += s;
        for (int ci = 0; ci < cin; ++ci) {
            const double* xp = x.data() + static_cast<size_t>(ci) * len;
            double* gwp = gw.data() + (static_cast<size_t>(co) * cin + ci) * k;
            for (int kk = 0; kk < k; ++kk) {
                const int d = kk - r;
                const int l0 = std::max(0, -d), l1 = std::min(len, len - d);
                double acc = 0.0;
                for (int l = l0; l < l1; ++l) acc += gyp[l] * xp[l + d];
                gwp[kk] += acc;
            }
        }
    }
}

Tensor dense(const Tensor& x, const Tensor& w, const Tensor& b) {
    check(w.rank() == 2, "dense: weights must be out x in");
    const int in = w.dim(1), out = w.dim(0);
    check(static_cast<int>(x.size()) == in, "dense: input length mismatch");
    check(b.rank() == 1 && b.dim(0) == out, "dense: bias shape mismatch");
    Tensor y({out});
    for (int o = 0; o < out; ++o) {
        const double* wp = w.data() + static_cast<size_t>(o) * in;
        double acc = b[static_cast<size_t>(o)];
        for (int i = 0; i < in; ++i) acc += wp[i] * x[static_cast<size_t>(i)];
        y[static_cast<size_t>(o)] = acc;
    }
    return y;
}

Tensor dense_grad_input(const Tensor& gy, const Tensor& w) {
    const int out = w.dim(0), in = w.dim(1);
    Tensor gx({in});
    for (int o = 0; o < out; ++o) {
        const double g = gy[static_cast<size_t>(o)];
        const double* wp = w.data() + static_cast<size_t>(o) * in;
        for (int i = 0; i < in; ++i) gx[static_cast<size_t>(i)] += g * wp[i];
    }
    return gx;
}

void dense_grad_params(const Tensor& gy, const Tensor& x, Tensor& gw, Tensor& gb) {
    const int out = gw.dim(0), in = gw.dim(1);
    for (int o = 0; o < out; ++o) {
        const double g = gy[static_cast<size_t>(o)];
        gb[static_cast<size_t>(o)] += g;
        double* gwp = gw.data() + static_cast<size_t>(o) * in;
        for (int i = 0; i < in; ++i) gwp[i] += g * x[static_cast<size_t>(i)];
    }
}

Tensor relu(const Tensor& x) {
    Tensor y(x.shape());
    for (size_t i = 0; i < x.size(); ++i) y[i] = x[i] > 0.0 ? x[i] : 0.0;
    return y;
}

Tensor relu_grad(const Tensor& x, const Tensor& gy) {
    Tensor gx(x.shape());
    for (size_t i = 0; i < x.size(); ++i) gx[i] = x[i] > 0.0 ? gy[i] : 0.0;
    return gx;
}

Tensor sigmoid(const Tensor& x) {
    Tensor y(x.shape());
    for (size_t i = 0; i < x.size(); ++i) y[i] = 1.0 / (1.0 + std::exp(-x[i]));
    return y;
}

Tensor sigmoid_grad(const Tensor& y, const Tensor& gy) {
    Tensor gx(y.shape());
    for (size_t i = 0; i < y.size(); ++i) gx[i] = gy[i] * y[i] * (1.0 - y[i]);
    return gx;
}

Tensor softmax_positions(const Tensor& x) {
    check(x.size() > 0, "softmax_positions: empty input");
    Tensor y(x.shape());
    double mx = x[0];
    for (size_t i = 1; i < x.size(); ++i) mx = std::max(mx, x[i]);
    double sum = 0.0;
    for (size_t i = 0; i < x.size(); ++i) {
        y[i] = std::exp(x[i] - mx);
        sum += y[i];
    }
    for (size_t i = 0; i < x.size(); ++i) y[i] /= sum;
    return y;
}

Tensor softmax_positions_grad(const Tensor& y, const Tensor& gy) {
    double dot = 0.0;
    for (size_t i = 0; i < y.size(); ++i) dot += gy[i] * y[i];
    Tensor gx(y.shape());
    for (size_t i = 0; i < y.size(); ++i) gx[i] = y[i] * (gy[i] - dot);
    return gx;
}

Tensor avg_pool2d(const Tensor& x, int factor) {
    check(x.rank() == 3, "avg_pool2d: input must be C x H x W");
    check(factor >= 1, "avg_pool2d: factor must be >= 1");
    const int c = x.dim(0), h = x.dim(1), w = x.dim(2);
    check(h % factor == 0 && w % factor == 0, "avg_pool2d: dimensions not divisible by factor");
    const int oh = h / factor, ow = w / factor;
    const double inv = 1.0 / (static_cast<double>(factor) * factor);

    Tensor y({c, oh, ow});
    for (int ci = 0; ci < c; ++ci) {
        const double* xp = x.data() + static_cast<size_t>(ci) * h * w;
        double* yp = y.data() + static_cast<size_t>(ci) * oh * ow;
        for (int oy = 0; oy < oh; ++oy) {
            for (int ox = 0; ox < ow; ++ox) {
                double acc = 0.0;
                for (int fy = 0; fy < factor; ++fy) {
                    const double* row = xp + (static_cast<size_t>(oy) * factor + fy) * w +
                                        static_cast<size_t>(ox) * factor;
                    for (int fx = 0; fx < factor; ++fx) acc += row[fx];
                }
                yp[static_cast<size_t>(oy) * ow + ox] = acc * inv;
            }
        }
    }
    return y;
}

Tensor avg_pool2d_grad(const Tensor& gy, int factor, int height, int width) {
    const int c = gy.dim(0), oh = gy.dim(1), ow = gy.dim(2);
    const double inv = 1.0 / (static_cast<double>(factor) * factor);
    Tensor gx({c, height, width});
    for (int ci = 0; ci < c; ++ci) {
        const double* gyp = gy.data() + static_cast<size_t>(ci) * oh * ow;
        double* gxp = gx.data() + static_cast<size_t>(ci) * height * width;
        for (int oy = 0; oy < oh; ++oy) {
            for (int ox = 0; ox < ow; ++ox) {
                const double g = gyp[static_cast<size_t>(oy) * ow + ox] * inv;
                for (int fy = 0; fy < factor; ++fy) {
                    double* row = gxp + (static_cast<size_t>(oy) * factor + fy) * width +
                                  static_cast<size_t>(ox) * factor;
                    for (int fx = 0; fx < factor; ++fx) row[fx] += g;
                }
            }
        }
    }
    return gx;
}

Tensor global_avg_pool(const Tensor& x) {
    check(x.rank() == 3, "global_avg_pool: input must be C x H x W");
    const int c = x.dim(0);
    const size_t plane = static_cast<size_t>(x.dim(1)) * x.dim(2);
    const double inv = 1.0 / static_cast<double>(plane);
    Tensor y({c});
    for (int ci = 0; ci < c; ++ci) {
        const double* xp = x.data() + static_cast<size_t>(ci) * plane;
        double acc = 0.0;
        for (size_t i = 0; i < plane; ++i) acc += xp[i];
        y[static_cast<size_t>(ci)] = acc * inv;
    }
    return y;
}

Tensor global_avg_pool_grad(const Tensor& gy, int height, int width) {
    const int c = gy.dim(0);
    const size_t plane = static_cast<size_t>(height) * width;
    const double inv = 1.0 / static_cast<double>(plane);
    Tensor gx({c, height, width});
    for (int ci = 0; ci < c; ++ci) {
        const double g = gy[static_cast<size_t>(ci)] * inv;
        double* gxp = gx.data() + static_cast<size_t>(ci) * plane;
        for (size_t i = 0; i < plane; ++i) gxp[i] = g;
    }
    return gx;
}

Tensor channel_mul(const Tensor& x, const Tensor& gate) {
    check(x.rank() == 3, "channel_mul: input must be C x H x W");
    check(static_cast<int>(gate.size()) == x.dim(0), "channel_mul: gate length mismatch");
    const size_t plane = static_cast<size_t>(x.dim(1)) * x.dim(2);
    Tensor y(x.shape());
    for (int c = 0; c < x.dim(0); ++c) {
        const double g = gate[static_cast<size_t>(c)];
        const double* xp = x.data() + static_cast<size_t>(c) * plane;
        double* yp = y.data() + static_cast<size_t>(c) * plane;
        for (size_t i = 0; i < plane; ++i) yp[i] = xp[i] * g;
    }
    return y;
}

Tensor spatial_weighted_pool(const Tensor& x, const Tensor& wmap) {
    check(x.rank() == 3, "spatial_weighted_pool: input must be C x H x W");
    const size_t plane = static_cast<size_t>(x.dim(1)) * x.dim(2);
    check(wmap.size() == plane, "spatial_weighted_pool: weight map size mismatch");
    Tensor y({x.dim(0)});
    for (int c = 0; c < x.dim(0); ++c) {
        const double* xp = x.data() + static_cast<size_t>(c) * plane;
        double acc = 0.0;
        for (size_t i = 0; i < plane; ++i) acc += xp[i] * wmap[i];
        y[static_cast<size_t>(c)] = acc;
    }
    return y;
}

Tensor add(const Tensor& a, const Tensor& b) {
    check(a.same_shape(b), "add: shape mismatch");
    Tensor y(a.shape());
    for (size_t i = 0; i < a.size(); ++i) y[i] = a[i] + b[i];
    return y;
}

Tensor concat_channels(const std::vector<const Tensor*>& xs) {
    check(!xs.empty(), "concat_channels: no inputs");
    const int h = xs[0]->dim(1), w = xs[0]->dim(2);
    int c = 0;
    for (const Tensor* t : xs) {
        check(t->rank() == 3 && t->dim(1) == h && t->dim(2) == w, "concat_channels: spatial shape mismatch");
        c += t->dim(0);
    }
    Tensor y({c, h, w});
    double* yp = y.data();
    for (const Tensor* t : xs) {
        std::copy(t->data(), t->data() + t->size(), yp);
        yp += t->size();
    }
    return y;
}

Tensor contrast1d(const Tensor& seq, const Tensor& wl, const Tensor& wr) {
    check(seq.rank() == 2, "contrast1d: sequence must be C x L");
    const int c = seq.dim(0), len = seq.dim(1);
    check(wl.rank() == 2 && wr.rank() == 2, "contrast1d: weights must be k x C");
    const int k = wl.dim(0);
    check(wr.dim(0) == k && wl.dim(1) == c && wr.dim(1) == c, "contrast1d: weight shape mismatch");
    check(k >= 1, "contrast1d: k must be >= 1 (use the bypass for k = 0)");

    Tensor y({2 * c, len});
    for (int ci = 0; ci < c; ++ci) {
        const double* sp = seq.data() + static_cast<size_t>(ci) * len;
        double* left = y.data() + static_cast<size_t>(ci) * len;
        double* right = y.data() + static_cast<size_t>(c + ci) * len;
        for (int l = 0; l < len; ++l) {
            double acc_l = 0.0, acc_r = 0.0;
            for (int j = 1; j <= k; ++j) {
                if (l - j >= 0) acc_l += wl[static_cast<size_t>(j - 1) * c + ci] * sp[l - j];
                if (l + j < len) acc_r += wr[static_cast<size_t>(j - 1) * c + ci] * sp[l + j];
            }
            left[l] = acc_l;
            right[l] = acc_r;
        }
    }
    return y;
}

void contrast1d_grad(const Tensor& gy, const Tensor& seq, const Tensor& wl, const Tensor& wr,
                     Tensor& gseq, Tensor& gwl, Tensor& gwr) {
    const int c = seq.dim(0), len = seq.dim(1);
    const int k = wl.dim(0);
    for (int ci = 0; ci < c; ++ci) {
        const double* sp = seq.data() + static_cast<size_t>(ci) * len;
        const double* gl = gy.data() + static_cast<size_t>(ci) * len;
        const double* gr = gy.data() + static_cast<size_t>(c + ci) * len;
        double* gs = gseq.data() + static_cast<size_t>(ci) * len;
        for (int j = 1; j <= k; ++j) {
            const double wlv = wl[static_cast<size_t>(j - 1) * c + ci];
            const double wrv = wr[static_cast<size_t>(j - 1) * c + ci];
            double awl = 0.0, awr = 0.0;
            for (int l = 0; l < len; ++l) {
                if (l - j >= 0) {
                    gs[l - j] += wlv * gl[l];
                    awl += gl[l] * sp[l - j];
                }
                if (l + j < len) {
                    gs[l + j] += wrv * gr[l];
                    awr += gr[l] * sp[l + j];
                }
            }
            gwl[static_cast<size_t>(j - 1) * c + ci] += awl;
            gwr[static_cast<size_t>(j - 1) * c + ci] += awr;
        }
    }
}

Tensor contrast1d_bypass(const Tensor& seq) {
    check(seq.rank() == 2, "contrast1d_bypass: sequence must be C x L");
    const int c = seq.dim(0), len = seq.dim(1);
    Tensor y({2 * c, len});
    std::copy(seq.data(), seq.data() + seq.size(), y.data());
    std::copy(seq.data(), seq.data() + seq.size(), y.data() + seq.size());
    return y;
}

}  // namespace cgebd::ops
