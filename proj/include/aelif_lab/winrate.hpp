#pragma once

#include <algorithm>
#include <cstddef>
#include <string>
#include <vector>

#include "aelif_lab/errors.hpp"
#include "aelif_lab/vec.hpp"

namespace aelif {

struct WinRateRow {
    std::string category;
    double proportion = 0.0;  // percent in [0, 100]
};

// Percentage of paired comparisons where the augmented model's distance is
// strictly smaller. Ties count as losses for the augmented model.
inline double win_rate(const Vec& d_orig, const Vec& d_aug) {
    if (d_orig.size() != d_aug.size() || d_orig.empty())
        throw ConfigError("win_rate: lists must be equal length and non-empty");
    std::size_t wins = 0;
    for (std::size_t i = 0; i < d_orig.size(); ++i)
        if (d_aug[i] < d_orig[i]) ++wins;
    return 100.0 * static_cast<double>(wins) / static_cast<double>(d_orig.size());
}

inline WinRateRow win_rate_row(const std::string& category, const Vec& d_orig, const Vec& d_aug) {
    return WinRateRow{category, win_rate(d_orig, d_aug)};
}

// Aggregation rule for comparing both augmented variants against the original.
inline double best_of_aug(double d_mask, double d_noise) { return std::min(d_mask, d_noise); }

}  // namespace aelif
