#pragma once

#include <functional>
#include <span>

#include "contdiff/kernels.hpp"
#include "contdiff/rng.hpp"
#include "contdiff/tensor.hpp"

namespace contdiff::nn {

struct ParamView {
    double* value;
    double* grad;
    size_t count;
};
using ParamVisitor = std::function<void(const ParamView&)>;

// Layers cache whatever forward state their backward needs. Backward
// accumulates parameter gradients (callers zero them between steps) and
// returns the gradient w.r.t. the layer input.

struct Conv2d {
    int in_ch = 0, out_ch = 0, kernel = 3, pad = 1;
    std::vector<double> w, b, gw, gb;
    Tensor cached_in;

    void init(int in_channels, int out_channels, int kernel_size, RngStream& rng,
              bool zero_init = false);
    Tensor forward(const Tensor& x);
    Tensor backward(const Tensor& gout);
    void visit(const ParamVisitor& fn) {
        fn({w.data(), gw.data(), w.size()});
        fn({b.data(), gb.data(), b.size()});
    }
};

struct Dense {
    int in_dim = 0, out_dim = 0;
    std::vector<double> w, b, gw, gb;
    Tensor cached_in;

    void init(int in, int out, RngStream& rng, bool zero_init = false);
    Tensor forward(const Tensor& x);
    Tensor backward(const Tensor& gout);
    void visit(const ParamVisitor& fn) {
        fn({w.data(), gw.data(), w.size()});
        fn({b.data(), gb.data(), b.size()});
    }
};

struct SiLU {
    Tensor cached_in;
    Tensor forward(const Tensor& x);
    Tensor backward(const Tensor& gout);
};

struct ReLU {
    Tensor cached_in;
    Tensor forward(const Tensor& x);
    Tensor backward(const Tensor& gout);
};

struct AvgPool2 {
    std::vector<int> in_shape;
    Tensor forward(const Tensor& x);
    Tensor backward(const Tensor& gout);
};

struct MaxPool2 {
    std::vector<int> in_shape;
    std::vector<int> argmax;
    Tensor forward(const Tensor& x);
    Tensor backward(const Tensor& gout);
};

struct Upsample2 {
    std::vector<int> in_shape;
    Tensor forward(const Tensor& x);
    Tensor backward(const Tensor& gout);
};

// Global max over H,W: [B,C,H,W] -> [B,C].
struct GlobalMaxPool {
    std::vector<int> in_shape;
    std::vector<int> argmax;
    Tensor forward(const Tensor& x);
    Tensor backward(const Tensor& gout);
};

// Inverted dropout. In eval mode (train=false) it is the identity.
struct Dropout {
    double rate = 0.25;
    std::vector<double> mask;
    bool last_train = false;
    Tensor forward(const Tensor& x, bool train, RngStream* rng);
    Tensor backward(const Tensor& gout);
};

// Sinusoidal features of an integer timestep; deterministic in (t, dim).
Tensor sinusoidal_embedding(std::span<const int> t, int dim);

// y[b,c,h,w] = x[b,c,h,w] + bias[b,c]
void add_channel_bias(Tensor& x, const Tensor& bias);
// Sums a [B,C,H,W] gradient over H,W -> [B,C].
Tensor reduce_channel_grad(const Tensor& g);

Tensor concat_channels(const Tensor& a, const Tensor& b);
void split_channels(const Tensor& g, int ch_a, Tensor& ga, Tensor& gb);

}  // namespace contdiff::nn
