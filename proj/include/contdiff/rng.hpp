#pragma once

#include <cstdint>
#include <random>
#include <span>
#include <string_view>
#include <vector>

#include "contdiff/tensor.hpp"

namespace contdiff {

// Deterministic random stream. Built on std::mt19937_64 (fully specified by the
// standard) with hand-rolled double/gaussian/int generation so sequences are
// identical across standard libraries. std::*_distribution is never used.
class RngStream {
public:
    explicit RngStream(uint64_t seed) : gen_(seed) {}

    uint64_t next_u64() { return gen_(); }

    // Uniform in [0,1) with 53 random bits.
    double uniform01() {
        return static_cast<double>(gen_() >> 11) * (1.0 / 9007199254740992.0);
    }

    // Standard normal via Box-Muller, cached spare.
    double gauss() {
        if (has_spare_) {
            has_spare_ = false;
            return spare_;
        }
        double u1 = uniform01();
        while (u1 <= 0.0) u1 = uniform01();
        const double u2 = uniform01();
        const double r = std::sqrt(-2.0 * std::log(u1));
        const double a = 6.283185307179586476925286766559 * u2;
        spare_ = r * std::sin(a);
        has_spare_ = true;
        return r * std::cos(a);
    }

    // Uniform integer in [lo, hi], both inclusive. Rejection sampling.
    int uniform_int(int lo, int hi) {
        if (hi < lo) throw std::invalid_argument("uniform_int: empty range");
        const uint64_t span = static_cast<uint64_t>(hi) - static_cast<uint64_t>(lo) + 1;
        const uint64_t limit = UINT64_MAX - UINT64_MAX % span;
        uint64_t x = gen_();
        while (x >= limit) x = gen_();
        return lo + static_cast<int>(x % span);
    }

    void fill_gauss(std::span<double> out) {
        for (double& x : out) x = gauss();
    }

    Tensor randn(std::vector<int> shape) {
        Tensor t(std::move(shape));
        fill_gauss(t.data);
        return t;
    }

    std::vector<int> uniform_ints(int n, int lo, int hi) {
        std::vector<int> v(static_cast<size_t>(n));
        for (int& x : v) x = uniform_int(lo, hi);
        return v;
    }

    // Fisher-Yates; std::shuffle is implementation-defined so we roll our own.
    template <typename T>
    void shuffle(std::vector<T>& v) {
        for (size_t i = v.size(); i > 1; --i) {
            const size_t j = static_cast<size_t>(uniform_int(0, static_cast<int>(i) - 1));
            std::swap(v[i - 1], v[j]);
        }
    }

private:
    std::mt19937_64 gen_;
    bool has_spare_ = false;
    double spare_ = 0.0;
};

// splitmix64, used to mix seed path components.
inline uint64_t mix64(uint64_t x) {
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

inline uint64_t hash_str(std::string_view s) {
    uint64_t h = 0xcbf29ce484222325ULL;
    for (char c : s) {
        h ^= static_cast<unsigned char>(c);
        h *= 0x100000001b3ULL;
    }
    return h;
}

// Derives the seed for a named stream. Independent purposes (training noise,
// replay generation, evaluation sampling, ...) get independent streams so that
// consuming one never perturbs another.
inline uint64_t derive_seed(uint64_t master, std::string_view purpose, uint64_t a = 0,
                            uint64_t b = 0) {
    uint64_t h = mix64(master);
    h = mix64(h ^ hash_str(purpose));
    h = mix64(h ^ a);
    h = mix64(h ^ b);
    return h;
}

inline RngStream make_stream(uint64_t master, std::string_view purpose, uint64_t a = 0,
                             uint64_t b = 0) {
    return RngStream(derive_seed(master, purpose, a, b));
}

}  // namespace contdiff
