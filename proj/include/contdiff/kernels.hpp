#pragma once

#include <span>

#include "contdiff/tensor.hpp"

namespace contdiff::kernels {

// Every kernel has a serial reference implementation and an OpenMP variant.
// The OpenMP variants parallelize only over independent output elements and
// keep the per-element accumulation order of the serial code, so both modes
// produce bit-identical results. Tests compare them exactly; the bench tool
// compares their wall time.
enum class ExecMode { serial, parallel };

ExecMode exec_mode();
void set_exec_mode(ExecMode m);

struct Conv2dDims {
    int batch, in_ch, in_h, in_w;
    int out_ch, kernel, pad;  // stride fixed at 1
    int out_h() const { return in_h + 2 * pad - kernel + 1; }
    int out_w() const { return in_w + 2 * pad - kernel + 1; }
};

// out[b,co,ho,wo] = bias[co] + sum_{ci,kh,kw} w[co,ci,kh,kw] * in[b,ci,ho+kh-pad,wo+kw-pad]
void conv2d_forward(const Conv2dDims& d, std::span<const double> in, std::span<const double> w,
                    std::span<const double> bias, std::span<double> out);
void conv2d_backward_data(const Conv2dDims& d, std::span<const double> gout,
                          std::span<const double> w, std::span<double> gin);
// Accumulates into gw / gbias.
void conv2d_backward_weights(const Conv2dDims& d, std::span<const double> in,
                             std::span<const double> gout, std::span<double> gw,
                             std::span<double> gbias);

// out[b,o] = bias[o] + sum_i w[o,i] * in[b,i]
void dense_forward(int batch, int in_dim, int out_dim, std::span<const double> in,
                   std::span<const double> w, std::span<const double> bias,
                   std::span<double> out);
void dense_backward_data(int batch, int in_dim, int out_dim, std::span<const double> gout,
                         std::span<const double> w, std::span<double> gin);
void dense_backward_weights(int batch, int in_dim, int out_dim, std::span<const double> in,
                            std::span<const double> gout, std::span<double> gw,
                            std::span<double> gbias);

// 2x2 average pool, stride 2 (even input sides required).
void avgpool2_forward(int batch, int ch, int h, int w, std::span<const double> in,
                      std::span<double> out);
void avgpool2_backward(int batch, int ch, int h, int w, std::span<const double> gout,
                       std::span<double> gin);

// 2x2 max pool, stride 2; argmax recorded for backward (ties -> first index).
void maxpool2_forward(int batch, int ch, int h, int w, std::span<const double> in,
                      std::span<double> out, std::span<int> argmax);
void maxpool2_backward(int batch, int ch, int h, int w, std::span<const double> gout,
                       std::span<const int> argmax, std::span<double> gin);

// Nearest-neighbour 2x upsample.
void upsample2_forward(int batch, int ch, int h, int w, std::span<const double> in,
                       std::span<double> out);
void upsample2_backward(int batch, int ch, int h, int w, std::span<const double> gout,
                        std::span<double> gin);

// SiLU x*sigmoid(x) and its input-gradient.
void silu_forward(std::span<const double> in, std::span<double> out);
void silu_backward(std::span<const double> in, std::span<const double> gout,
                   std::span<double> gin);

void relu_forward(std::span<const double> in, std::span<double> out);
void relu_backward(std::span<const double> in, std::span<const double> gout,
                   std::span<double> gin);

}  // namespace contdiff::kernels
