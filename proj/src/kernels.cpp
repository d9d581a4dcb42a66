#include "contdiff/kernels.hpp"

#include <cmath>

namespace contdiff::kernels {

namespace {
ExecMode g_mode = ExecMode::parallel;
}

ExecMode exec_mode() { return g_mode; }
void set_exec_mode(ExecMode m) { g_mode = m; }

// ---------------------------------------------------------------------------
// conv2d
// ---------------------------------------------------------------------------

namespace {

inline void conv2d_forward_one(const Conv2dDims& d, const double* in, const double* w,
                               const double* bias, double* out, int b, int co) {
    const int oh = d.out_h(), ow = d.out_w();
    const double* inb = in + static_cast<size_t>(b) * d.in_ch * d.in_h * d.in_w;
    double* o = out + (static_cast<size_t>(b) * d.out_ch + co) * oh * ow;
    for (int i = 0; i < oh * ow; ++i) o[i] = bias[co];
    for (int ci = 0; ci < d.in_ch; ++ci) {
        const double* inc = inb + static_cast<size_t>(ci) * d.in_h * d.in_w;
        const double* wc = w + (static_cast<size_t>(co) * d.in_ch + ci) * d.kernel * d.kernel;
        for (int kh = 0; kh < d.kernel; ++kh) {
            for (int kw = 0; kw < d.kernel; ++kw) {
                const double wv = wc[kh * d.kernel + kw];
                for (int ho = 0; ho < oh; ++ho) {
                    const int hi = ho + kh - d.pad;
                    if (hi < 0 || hi >= d.in_h) continue;
                    const double* irow = inc + static_cast<size_t>(hi) * d.in_w;
                    double* orow = o + static_cast<size_t>(ho) * ow;
                    const int w0 = std::max(0, d.pad - kw);
                    const int w1 = std::min(ow, d.in_w + d.pad - kw);
                    for (int wo = w0; wo < w1; ++wo) orow[wo] += wv * irow[wo + kw - d.pad];
                }
            }
        }
    }
}

inline void conv2d_backward_data_one(const Conv2dDims& d, const double* gout, const double* w,
                                     double* gin, int b, int ci) {
    const int oh = d.out_h(), ow = d.out_w();
    double* g = gin + (static_cast<size_t>(b) * d.in_ch + ci) * d.in_h * d.in_w;
    for (int i = 0; i < d.in_h * d.in_w; ++i) g[i] = 0.0;
    for (int co = 0; co < d.out_ch; ++co) {
        const double* gb = gout + (static_cast<size_t>(b) * d.out_ch + co) * oh * ow;
        const double* wc = w + (static_cast<size_t>(co) * d.in_ch + ci) * d.kernel * d.kernel;
        for (int kh = 0; kh < d.kernel; ++kh) {
            for (int kw = 0; kw < d.kernel; ++kw) {
                const double wv = wc[kh * d.kernel + kw];
                for (int ho = 0; ho < oh; ++ho) {
                    const int hi = ho + kh - d.pad;
                    if (hi < 0 || hi >= d.in_h) continue;
                    double* grow = g + static_cast<size_t>(hi) * d.in_w;
                    const double* gorow = gb + static_cast<size_t>(ho) * ow;
                    const int w0 = std::max(0, d.pad - kw);
                    const int w1 = std::min(ow, d.in_w + d.pad - kw);
                    for (int wo = w0; wo < w1; ++wo) grow[wo + kw - d.pad] += wv * gorow[wo];
                }
            }
        }
    }
}

// One weight element: accumulation order over (b, ho, wo) is identical in both
// modes because parallelization is over the weight index.
inline double conv2d_weight_grad_one(const Conv2dDims& d, const double* in, const double* gout,
                                     int co, int ci, int kh, int kw) {
    const int oh = d.out_h(), ow = d.out_w();
    double acc = 0.0;
    for (int b = 0; b < d.batch; ++b) {
        const double* inc = in + (static_cast<size_t>(b) * d.in_ch + ci) * d.in_h * d.in_w;
        const double* gb = gout + (static_cast<size_t>(b) * d.out_ch + co) * oh * ow;
        for (int ho = 0; ho < oh; ++ho) {
            const int hi = ho + kh - d.pad;
            if (hi < 0 || hi >= d.in_h) continue;
            const double* irow = inc + static_cast<size_t>(hi) * d.in_w;
            const double* gorow = gb + static_cast<size_t>(ho) * ow;
            const int w0 = std::max(0, d.pad - kw);
            const int w1 = std::min(ow, d.in_w + d.pad - kw);
            for (int wo = w0; wo < w1; ++wo) acc += irow[wo + kw - d.pad] * gorow[wo];
        }
    }
    return acc;
}

}  // namespace

void conv2d_forward(const Conv2dDims& d, std::span<const double> in, std::span<const double> w,
                    std::span<const double> bias, std::span<double> out) {
    const int nb = d.batch, nc = d.out_ch;
    if (g_mode == ExecMode::parallel) {
#pragma omp parallel for collapse(2) schedule(static)
        for (int b = 0; b < nb; ++b)
            for (int co = 0; co < nc; ++co)
                conv2d_forward_one(d, in.data(), w.data(), bias.data(), out.data(), b, co);
    } else {
        for (int b = 0; b < nb; ++b)
            for (int co = 0; co < nc; ++co)
                conv2d_forward_one(d, in.data(), w.data(), bias.data(), out.data(), b, co);
    }
}

void conv2d_backward_data(const Conv2dDims& d, std::span<const double> gout,
                          std::span<const double> w, std::span<double> gin) {
    const int nb = d.batch, nc = d.in_ch;
    if (g_mode == ExecMode::parallel) {
#pragma omp parallel for collapse(2) schedule(static)
        for (int b = 0; b < nb; ++b)
            for (int ci = 0; ci < nc; ++ci)
                conv2d_backward_data_one(d, gout.data(), w.data(), gin.data(), b, ci);
    } else {
        for (int b = 0; b < nb; ++b)
            for (int ci = 0; ci < nc; ++ci)
                conv2d_backward_data_one(d, gout.data(), w.data(), gin.data(), b, ci);
    }
}

void conv2d_backward_weights(const Conv2dDims& d, std::span<const double> in,
                             std::span<const double> gout, std::span<double> gw,
                             std::span<double> gbias) {
    const int k2 = d.kernel * d.kernel;
    const int nw = d.out_ch * d.in_ch * k2;
    if (g_mode == ExecMode::parallel) {
#pragma omp parallel for schedule(static)
        for (int idx = 0; idx < nw; ++idx) {
            const int co = idx / (d.in_ch * k2);
            const int ci = (idx / k2) % d.in_ch;
            const int kh = (idx % k2) / d.kernel;
            const int kw = idx % d.kernel;
            gw[idx] += conv2d_weight_grad_one(d, in.data(), gout.data(), co, ci, kh, kw);
        }
    } else {
        for (int idx = 0; idx < nw; ++idx) {
            const int co = idx / (d.in_ch * k2);
            const int ci = (idx / k2) % d.in_ch;
            const int kh = (idx % k2) / d.kernel;
            const int kw = idx % d.kernel;
            gw[idx] += conv2d_weight_grad_one(d, in.data(), gout.data(), co, ci, kh, kw);
        }
    }
    const int oh = d.out_h(), ow = d.out_w();
    for (int co = 0; co < d.out_ch; ++co) {
        double acc = 0.0;
        for (int b = 0; b < d.batch; ++b) {
            const double* gb = gout.data() + (static_cast<size_t>(b) * d.out_ch + co) * oh * ow;
            for (int i = 0; i < oh * ow; ++i) acc += gb[i];
        }
        gbias[co] += acc;
    }
}

// ---------------------------------------------------------------------------
// dense
// ---------------------------------------------------------------------------

void dense_forward(int batch, int in_dim, int out_dim, std::span<const double> in,
                   std::span<const double> w, std::span<const double> bias,
                   std::span<double> out) {
    auto body = [&](int b) {
        const double* x = in.data() + static_cast<size_t>(b) * in_dim;
        double* o = out.data() + static_cast<size_t>(b) * out_dim;
        for (int j = 0; j < out_dim; ++j) {
            const double* wr = w.data() + static_cast<size_t>(j) * in_dim;
            double acc = bias[j];
            for (int i = 0; i < in_dim; ++i) acc += wr[i] * x[i];
            o[j] = acc;
        }
    };
    if (g_mode == ExecMode::parallel) {
#pragma omp parallel for schedule(static)
        for (int b = 0; b < batch; ++b) body(b);
    } else {
        for (int b = 0; b < batch; ++b) body(b);
    }
}

void dense_backward_data(int batch, int in_dim, int out_dim, std::span<const double> gout,
                         std::span<const double> w, std::span<double> gin) {
    auto body = [&](int b) {
        const double* go = gout.data() + static_cast<size_t>(b) * out_dim;
        double* gi = gin.data() + static_cast<size_t>(b) * in_dim;
        for (int i = 0; i < in_dim; ++i) gi[i] = 0.0;
        for (int j = 0; j < out_dim; ++j) {
            const double* wr = w.data() + static_cast<size_t>(j) * in_dim;
            const double g = go[j];
            for (int i = 0; i < in_dim; ++i) gi[i] += g * wr[i];
        }
    };
    if (g_mode == ExecMode::parallel) {
#pragma omp parallel for schedule(static)
        for (int b = 0; b < batch; ++b) body(b);
    } else {
        for (int b = 0; b < batch; ++b) body(b);
    }
}

void dense_backward_weights(int batch, int in_dim, int out_dim, std::span<const double> in,
                            std::span<const double> gout, std::span<double> gw,
                            std::span<double> gbias) {
    auto body = [&](int j) {
        double* gwr = gw.data() + static_cast<size_t>(j) * in_dim;
        double gb = 0.0;
        for (int b = 0; b < batch; ++b) {
            const double g = gout[static_cast<size_t>(b) * out_dim + j];
            const double* x = in.data() + static_cast<size_t>(b) * in_dim;
            for (int i = 0; i < in_dim; ++i) gwr[i] += g * x[i];
            gb += g;
        }
        gbias[j] += gb;
    };
    if (g_mode == ExecMode::parallel) {
#pragma omp parallel for schedule(static)
        for (int j = 0; j < out_dim; ++j) body(j);
    } else {
        for (int j = 0; j < out_dim; ++j) body(j);
    }
}

// ---------------------------------------------------------------------------
// pooling / upsampling
// ---------------------------------------------------------------------------

void avgpool2_forward(int batch, int ch, int h, int w, std::span<const double> in,
                      std::span<double> out) {
    const int oh = h / 2, ow = w / 2, n = batch * ch;
    auto body = [&](int bc) {
        const double* x = in.data() + static_cast<size_t>(bc) * h * w;
        double* o = out.data() + static_cast<size_t>(bc) * oh * ow;
        for (int i = 0; i < oh; ++i)
            for (int j = 0; j < ow; ++j)
                o[i * ow + j] = 0.25 * (x[(2 * i) * w + 2 * j] + x[(2 * i) * w + 2 * j + 1] +
                                        x[(2 * i + 1) * w + 2 * j] + x[(2 * i + 1) * w + 2 * j + 1]);
    };
    if (g_mode == ExecMode::parallel) {
#pragma omp parallel for schedule(static)
        for (int bc = 0; bc < n; ++bc) body(bc);
    } else {
        for (int bc = 0; bc < n; ++bc) body(bc);
    }
}

void avgpool2_backward(int batch, int ch, int h, int w, std::span<const double> gout,
                       std::span<double> gin) {
    const int oh = h / 2, ow = w / 2, n = batch * ch;
    auto body = [&](int bc) {
        const double* go = gout.data() + static_cast<size_t>(bc) * oh * ow;
        double* gi = gin.data() + static_cast<size_t>(bc) * h * w;
        for (int i = 0; i < oh; ++i)
            for (int j = 0; j < ow; ++j) {
                const double g = 0.25 * go[i * ow + j];
                gi[(2 * i) * w + 2 * j] = g;
                gi[(2 * i) * w + 2 * j + 1] = g;
                gi[(2 * i + 1) * w + 2 * j] = g;
                gi[(2 * i + 1) * w + 2 * j + 1] = g;
            }
    };
    if (g_mode == ExecMode::parallel) {
#pragma omp parallel for schedule(static)
        for (int bc = 0; bc < n; ++bc) body(bc);
    } else {
        for (int bc = 0; bc < n; ++bc) body(bc);
    }
}

void maxpool2_forward(int batch, int ch, int h, int w, std::span<const double> in,
                      std::span<double> out, std::span<int> argmax) {
    const int oh = h / 2, ow = w / 2, n = batch * ch;
    auto body = [&](int bc) {
        const double* x = in.data() + static_cast<size_t>(bc) * h * w;
        double* o = out.data() + static_cast<size_t>(bc) * oh * ow;
        int* am = argmax.data() + static_cast<size_t>(bc) * oh * ow;
        for (int i = 0; i < oh; ++i)
            for (int j = 0; j < ow; ++j) {
                const int idx[4] = {(2 * i) * w + 2 * j, (2 * i) * w + 2 * j + 1,
                                    (2 * i + 1) * w + 2 * j, (2 * i + 1) * w + 2 * j + 1};
                int best = idx[0];
                for (int k = 1; k < 4; ++k)
                    if (x[idx[k]] > x[best]) best = idx[k];
                o[i * ow + j] = x[best];
                am[i * ow + j] = best;
            }
    };
    if (g_mode == ExecMode::parallel) {
#pragma omp parallel for schedule(static)
        for (int bc = 0; bc < n; ++bc) body(bc);
    } else {
        for (int bc = 0; bc < n; ++bc) body(bc);
    }
}

void maxpool2_backward(int batch, int ch, int h, int w, std::span<const double> gout,
                       std::span<const int> argmax, std::span<double> gin) {
    const int oh = h / 2, ow = w / 2, n = batch * ch;
    auto body = [&](int bc) {
        const double* go = gout.data() + static_cast<size_t>(bc) * oh * ow;
        const int* am = argmax.data() + static_cast<size_t>(bc) * oh * ow;
        double* gi = gin.data() + static_cast<size_t>(bc) * h * w;
        for (int i = 0; i < h * w; ++i) gi[i] = 0.0;
        for (int i = 0; i < oh * ow; ++i) gi[am[i]] += go[i];
    };
    if (g_mode == ExecMode::parallel) {
#pragma omp parallel for schedule(static)
        for (int bc = 0; bc < n; ++bc) body(bc);
    } else {
        for (int bc = 0; bc < n; ++bc) body(bc);
    }
}

void upsample2_forward(int batch, int ch, int h, int w, std::span<const double> in,
                       std::span<double> out) {
    const int oh = h * 2, ow = w * 2, n = batch * ch;
    auto body = [&](int bc) {
        const double* x = in.data() + static_cast<size_t>(bc) * h * w;
        double* o = out.data() + static_cast<size_t>(bc) * oh * ow;
        for (int i = 0; i < oh; ++i)
            for (int j = 0; j < ow; ++j) o[i * ow + j] = x[(i / 2) * w + j / 2];
    };
    if (g_mode == ExecMode::parallel) {
#pragma omp parallel for schedule(static)
        for (int bc = 0; bc < n; ++bc) body(bc);
    } else {
        for (int bc = 0; bc < n; ++bc) body(bc);
    }
}

void upsample2_backward(int batch, int ch, int h, int w, std::span<const double> gout,
                        std::span<double> gin) {
    const int oh = h * 2, ow = w * 2, n = batch * ch;
    auto body = [&](int bc) {
        const double* go = gout.data() + static_cast<size_t>(bc) * oh * ow;
        double* gi = gin.data() + static_cast<size_t>(bc) * h * w;
        for (int i = 0; i < h; ++i)
            for (int j = 0; j < w; ++j)
                gi[i * w + j] = go[(2 * i) * ow + 2 * j] + go[(2 * i) * ow + 2 * j + 1] +
                                go[(2 * i + 1) * ow + 2 * j] + go[(2 * i + 1) * ow + 2 * j + 1];
    };
    if (g_mode == ExecMode::parallel) {
#pragma omp parallel for schedule(static)
        for (int bc = 0; bc < n; ++bc) body(bc);
    } else {
        for (int bc = 0; bc < n; ++bc) body(bc);
    }
}

// ---------------------------------------------------------------------------
// activations
// ---------------------------------------------------------------------------

namespace {
inline double sigmoid(double x) { return 1.0 / (1.0 + std::exp(-x)); }
}

void silu_forward(std::span<const double> in, std::span<double> out) {
    const int64_t n = static_cast<int64_t>(in.size());
    if (g_mode == ExecMode::parallel) {
#pragma omp parallel for schedule(static)
        for (int64_t i = 0; i < n; ++i) out[i] = in[i] * sigmoid(in[i]);
    } else {
        for (int64_t i = 0; i < n; ++i) out[i] = in[i] * sigmoid(in[i]);
    }
}

void silu_backward(std::span<const double> in, std::span<const double> gout,
                   std::span<double> gin) {
    const int64_t n = static_cast<int64_t>(in.size());
    auto body = [&](int64_t i) {
        const double s = sigmoid(in[i]);
        gin[i] = gout[i] * (s + in[i] * s * (1.0 - s));
    };
    if (g_mode == ExecMode::parallel) {
#pragma omp parallel for schedule(static)
        for (int64_t i = 0; i < n; ++i) body(i);
    } else {
        for (int64_t i = 0; i < n; ++i) body(i);
    }
}

void relu_forward(std::span<const double> in, std::span<double> out) {
    const int64_t n = static_cast<int64_t>(in.size());
    if (g_mode == ExecMode::parallel) {
#pragma omp parallel for schedule(static)
        for (int64_t i = 0; i < n; ++i) out[i] = in[i] > 0.0 ? in[i] : 0.0;
    } else {
        for (int64_t i = 0; i < n; ++i) out[i] = in[i] > 0.0 ? in[i] : 0.0;
    }
}

void relu_backward(std::span<const double> in, std::span<const double> gout,
                   std::span<double> gin) {
    const int64_t n = static_cast<int64_t>(in.size());
    if (g_mode == ExecMode::parallel) {
#pragma omp parallel for schedule(static)
        for (int64_t i = 0; i < n; ++i) gin[i] = in[i] > 0.0 ? gout[i] : 0.0;
    } else {
        for (int64_t i = 0; i < n; ++i) gin[i] = in[i] > 0.0 ? gout[i] : 0.0;
    }
}

}  // namespace contdiff::kernels
