#include "contdiff/schedule.hpp"

#include <stdexcept>

namespace contdiff {

VarianceSchedule make_schedule_from_betas(std::vector<double> betas) {
    if (betas.empty()) throw std::invalid_argument("schedule: need at least one timestep");
    VarianceSchedule s;
    s.horizon_T = static_cast<int>(betas.size());
    s.betas = std::move(betas);
    s.alphas.resize(s.betas.size());
    s.alpha_bars.resize(s.betas.size());
    double prod = 1.0;
    for (size_t i = 0; i < s.betas.size(); ++i) {
        const double b = s.betas[i];
        if (!(b > 0.0 && b < 1.0))
            throw std::invalid_argument("schedule: beta_t must lie in (0,1)");
        s.alphas[i] = 1.0 - b;
        prod *= s.alphas[i];
        s.alpha_bars[i] = prod;
        if (!(s.alpha_bars[i] > 0.0 && s.alpha_bars[i] < 1.0))
            throw std::invalid_argument("schedule: alpha_bar left (0,1)");
        if (i > 0 && !(s.alpha_bars[i] < s.alpha_bars[i - 1]))
            throw std::invalid_argument("schedule: alpha_bar not strictly decreasing");
    }
    return s;
}

VarianceSchedule make_linear_schedule(int horizon_T, double beta_start, double beta_end) {
    if (horizon_T < 1) throw std::invalid_argument("schedule: horizon_T must be >= 1");
    if (!(beta_start > 0.0 && beta_start <= beta_end && beta_end < 1.0))
        throw std::invalid_argument("schedule: require 0 < beta_start <= beta_end < 1");
    std::vector<double> betas(static_cast<size_t>(horizon_T));
    if (horizon_T == 1) {
        betas[0] = beta_start;
    } else {
        for (int i = 0; i < horizon_T; ++i)
            betas[static_cast<size_t>(i)] =
                beta_start + (beta_end - beta_start) * static_cast<double>(i) /
                                 static_cast<double>(horizon_T - 1);
    }
    return make_schedule_from_betas(std::move(betas));
}

}  // namespace contdiff
