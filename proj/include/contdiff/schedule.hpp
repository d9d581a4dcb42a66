#pragma once

#include <vector>

#include "contdiff/tensor.hpp"

namespace contdiff {

// Noise schedule over T discrete timesteps. Timesteps are 1-indexed (t in
// {1..T}); alpha_bar(0) == 1 by convention so a final sampler step can target
// the clean estimate directly.
struct VarianceSchedule {
    int horizon_T = 0;
    std::vector<double> betas;       // beta_t, index t-1
    std::vector<double> alphas;      // 1 - beta_t
    std::vector<double> alpha_bars;  // running product of alphas

    double beta(int t) const { return betas.at(static_cast<size_t>(t) - 1); }
    double alpha(int t) const { return alphas.at(static_cast<size_t>(t) - 1); }
    double alpha_bar(int t) const {
        if (t == 0) return 1.0;
        return alpha_bars.at(static_cast<size_t>(t) - 1);
    }

    void check_timestep(int t) const {
        if (t < 1 || t > horizon_T)
            throw std::invalid_argument("timestep " + std::to_string(t) + " outside {1.." +
                                        std::to_string(horizon_T) + "}");
    }
};

// Builds a schedule from explicit per-step variances. Validates the type
// invariants (all rates in (0,1), alpha_bars strictly decreasing).
VarianceSchedule make_schedule_from_betas(std::vector<double> betas);

// Linear interpolation of beta from beta_start to beta_end inclusive.
VarianceSchedule make_linear_schedule(int horizon_T, double beta_start, double beta_end);

}  // namespace contdiff
