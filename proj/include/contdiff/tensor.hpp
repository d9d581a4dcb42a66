#pragma once

#include <cstddef>
#include <cstdint>
#include <initializer_list>
#include <numeric>
#include <stdexcept>
#include <string>
#include <vector>

namespace contdiff {

// Dense row-major tensor of doubles. Shape conventions used throughout:
// images [B, C, H, W], vectors [B, D], per-sample scalars [B].
struct Tensor {
    std::vector<int> shape;
    std::vector<double> data;

    Tensor() = default;

    explicit Tensor(std::vector<int> s) : shape(std::move(s)) {
        data.assign(static_cast<size_t>(count(shape)), 0.0);
    }

    Tensor(std::vector<int> s, std::vector<double> d) : shape(std::move(s)), data(std::move(d)) {
        if (static_cast<int64_t>(data.size()) != count(shape))
            throw std::invalid_argument("Tensor: data size does not match shape");
    }

    static int64_t count(const std::vector<int>& s) {
        int64_t n = 1;
        for (int d : s) {
            if (d < 0) throw std::invalid_argument("Tensor: negative dimension");
            n *= d;
        }
        return n;
    }

    static Tensor zeros(std::vector<int> s) { return Tensor(std::move(s)); }

    static Tensor full(std::vector<int> s, double v) {
        Tensor t(std::move(s));
        for (double& x : t.data) x = v;
        return t;
    }

    static Tensor scalar_batch(std::initializer_list<double> vals) {
        Tensor t({static_cast<int>(vals.size()), 1});
        size_t i = 0;
        for (double v : vals) t.data[i++] = v;
        return t;
    }

    int64_t numel() const { return static_cast<int64_t>(data.size()); }
    int dim(size_t i) const { return shape.at(i); }
    int ndim() const { return static_cast<int>(shape.size()); }

    bool same_shape(const Tensor& o) const { return shape == o.shape; }

    double& operator[](size_t i) { return data[i]; }
    double operator[](size_t i) const { return data[i]; }

    // [B,C,H,W] accessor
    double& at4(int b, int c, int h, int w) {
        const int C = shape[1], H = shape[2], W = shape[3];
        return data[((static_cast<size_t>(b) * C + c) * H + h) * W + w];
    }
    double at4(int b, int c, int h, int w) const {
        const int C = shape[1], H = shape[2], W = shape[3];
        return data[((static_cast<size_t>(b) * C + c) * H + h) * W + w];
    }

    // [B,D] accessor
    double& at2(int b, int d) { return data[static_cast<size_t>(b) * shape[1] + d]; }
    double at2(int b, int d) const { return data[static_cast<size_t>(b) * shape[1] + d]; }

    // Copy of row b for a [B, ...] tensor.
    Tensor slice_batch(int b) const {
        std::vector<int> s(shape.begin() + 1, shape.end());
        int64_t n = count(s);
        Tensor out(s);
        std::copy(data.begin() + b * n, data.begin() + (b + 1) * n, out.data.begin());
        return out;
    }

    std::string shape_str() const {
        std::string s = "[";
        for (size_t i = 0; i < shape.size(); ++i) {
            if (i) s += ",";
            s += std::to_string(shape[i]);
        }
        return s + "]";
    }
};

inline void check_same_shape(const Tensor& a, const Tensor& b, const char* what) {
    if (!a.same_shape(b))
        throw std::invalid_argument(std::string(what) + ": shape mismatch " + a.shape_str() +
                                    " vs " + b.shape_str());
}

}  // namespace contdiff
