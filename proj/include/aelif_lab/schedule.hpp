#pragma once

#include <cmath>
#include <cstddef>
#include <vector>

#include "aelif_lab/errors.hpp"
#include "aelif_lab/vec.hpp"

namespace aelif {

inline constexpr std::size_t kLatentDim = 8;
inline constexpr std::size_t kDefaultTimesteps = 100;
inline constexpr double kDefaultBetaMin = 1e-3;
inline constexpr double kDefaultBetaMax = 0.2;

// Linear beta schedule with cumulative signal retention alpha_bar.
struct NoiseSchedule {
    std::size_t timesteps = 0;
    Vec beta;       // per-step noise rates, strictly positive, nondecreasing
    Vec alpha_bar;  // prod(1 - beta[0..t]), strictly decreasing in (0, 1]
    double beta_min = 0.0;
    double beta_max = 0.0;
};

inline NoiseSchedule make_schedule(std::size_t timesteps = kDefaultTimesteps,
                                   double beta_min = kDefaultBetaMin,
                                   double beta_max = kDefaultBetaMax) {
    if (timesteps < 1) throw ConfigError("make_schedule: T must be >= 1");
    if (!(beta_min > 0.0) || !(beta_min <= beta_max) || !(beta_max < 1.0))
        throw ConfigError("make_schedule: need 0 < beta_min <= beta_max < 1");

    NoiseSchedule sched;
    sched.timesteps = timesteps;
    sched.beta_min = beta_min;
    sched.beta_max = beta_max;
    sched.beta.resize(timesteps);
    sched.alpha_bar.resize(timesteps);
    double prod = 1.0;
    for (std::size_t t = 0; t < timesteps; ++t) {
        const double frac = timesteps > 1 ? static_cast<double>(t) / static_cast<double>(timesteps - 1) : 0.0;
        sched.beta[t] = beta_min + frac * (beta_max - beta_min);
        prod *= 1.0 - sched.beta[t];
        sched.alpha_bar[t] = prod;
    }
    return sched;
}

// z_t = sqrt(alpha_bar_t) z0 + sqrt(1 - alpha_bar_t) eps
inline Vec forward_noise(const Vec& z0, std::size_t t, const Vec& eps, const NoiseSchedule& sched) {
    if (t >= sched.timesteps) throw ConfigError("forward_noise: t out of range");
    if (z0.size() != eps.size()) throw ConfigError("forward_noise: dimension mismatch");
    const double signal = std::sqrt(sched.alpha_bar[t]);
    const double noise = std::sqrt(1.0 - sched.alpha_bar[t]);
    Vec z(z0.size());
    for (std::size_t i = 0; i < z.size(); ++i) z[i] = signal * z0[i] + noise * eps[i];
    return z;
}

}  // namespace aelif
