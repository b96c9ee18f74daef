#pragma once

#include <cmath>
#include <cstddef>
#include <limits>
#include <string>
#include <vector>

#include "aelif_lab/errors.hpp"
#include "aelif_lab/features.hpp"
#include "aelif_lab/vec.hpp"

namespace aelif {

inline constexpr std::size_t kMaxSetSize = 512;

enum class SetLabel { original, augmented, train };

inline std::string to_string(SetLabel label) {
    switch (label) {
        case SetLabel::original: return "original";
        case SetLabel::augmented: return "augmented";
        case SetLabel::train: return "train";
    }
    throw ConfigError("unknown set label");
}

// A bag of unit-norm feature vectors.
struct EmbeddingSet {
    std::vector<Vec> vectors;
    SetLabel label = SetLabel::original;

    std::size_t size() const { return vectors.size(); }

    void validate() const {
        if (vectors.empty()) throw ConfigError("EmbeddingSet: must contain at least one vector");
        for (const Vec& v : vectors) detail::require_unit_norm(v, "EmbeddingSet");
    }
};

// W2 between two Dirac measures: the Euclidean distance.
inline double w2_point(const Vec& a, const Vec& b) {
    if (a.size() != b.size()) throw ConfigError("w2_point: dimension mismatch");
    detail::require_unit_norm(a, "w2_point");
    detail::require_unit_norm(b, "w2_point");
    return distance(a, b);
}

namespace detail {

// Shortest-augmenting-path assignment (Jonker-Volgenant style), O(n^3).
// Returns, for each row, the column of a minimum-cost perfect matching.
inline std::vector<std::size_t> solve_assignment(const std::vector<Vec>& cost) {
    const std::size_t n = cost.size();
    const double inf = std::numeric_limits<double>::infinity();
    std::vector<double> u(n + 1, 0.0), v(n + 1, 0.0), minv(n + 1);
    std::vector<std::size_t> match(n + 1, 0), way(n + 1, 0);

    for (std::size_t i = 1; i <= n; ++i) {
        match[0] = i;
        std::size_t j0 = 0;
        minv.assign(n + 1, inf);
        std::vector<bool> used(n + 1, false);
        do {
            used[j0] = true;
            const std::size_t i0 = match[j0];
            double delta = inf;
            std::size_t j1 = 0;
            for (std::size_t j = 1; j <= n; ++j) {
                if (used[j]) continue;
                const double cur = cost[i0 - 1][j - 1] - u[i0] - v[j];
                if (cur < minv[j]) {
                    minv[j] = cur;
                    way[j] = j0;
                }
                if (minv[j] < delta) {
                    delta = minv[j];
                    j1 = j;
                }
            }
            for (std::size_t j = 0; j <= n; ++j) {
                if (used[j]) {
                    u[match[j]] += delta;
                    v[j] -= delta;
                } else {
                    minv[j] -= delta;
                }
            }
            j0 = j1;
        } while (match[j0] != 0);
        do {
            const std::size_t j1 = way[j0];
            match[j0] = match[j1];
            j0 = j1;
        } while (j0 != 0);
    }

    std::vector<std::size_t> row_to_col(n);
    for (std::size_t j = 1; j <= n; ++j) row_to_col[match[j] - 1] = j - 1;
    return row_to_col;
}

}  // namespace detail

// Exact 2-Wasserstein between two equal-size empirical measures: optimal
// assignment under squared Euclidean cost, then sqrt(total / n).
inline double w2_set(const EmbeddingSet& a, const EmbeddingSet& b) {
    a.validate();
    b.validate();
    if (a.size() != b.size())
        throw ConfigError("w2_set: sets must have equal sizes (got " + std::to_string(a.size()) +
                          " and " + std::to_string(b.size()) + ")");
    if (a.size() > kMaxSetSize) throw ConfigError("w2_set: set size exceeds 512");

    const std::size_t n = a.size();
    std::vector<Vec> cost(n, Vec(n));
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j) cost[i][j] = squared_distance(a.vectors[i], b.vectors[j]);

    const auto row_to_col = detail::solve_assignment(cost);
    double total = 0.0;
    for (std::size_t i = 0; i < n; ++i) total += cost[i][row_to_col[i]];
    return std::sqrt(total / static_cast<double>(n));
}

// Closed-form W2 between diagonal Gaussian fits of the two sets; a cheap
// alternative for comparison, selectable via config.
inline double w2_set_gaussian_diag(const EmbeddingSet& a, const EmbeddingSet& b) {
    a.validate();
    b.validate();
    if (a.size() != b.size()) throw ConfigError("w2_set_gaussian_diag: sets must have equal sizes");

    const std::size_t dim = a.vectors.front().size();
    auto moments = [dim](const EmbeddingSet& s) {
        Vec mean(dim, 0.0), sd(dim, 0.0);
        for (const Vec& v : s.vectors)
            for (std::size_t k = 0; k < dim; ++k) mean[k] += v[k];
        for (double& m : mean) m /= static_cast<double>(s.size());
        for (const Vec& v : s.vectors)
            for (std::size_t k = 0; k < dim; ++k) {
                const double d = v[k] - mean[k];
                sd[k] += d * d;
            }
        for (double& x : sd) x = std::sqrt(x / static_cast<double>(s.size()));
        return std::pair<Vec, Vec>{mean, sd};
    };
    const auto [mean_a, sd_a] = moments(a);
    const auto [mean_b, sd_b] = moments(b);
    double total = squared_distance(mean_a, mean_b);
    for (std::size_t k = 0; k < dim; ++k) {
        const double d = sd_a[k] - sd_b[k];
        total += d * d;
    }
    return std::sqrt(total);
}

}  // namespace aelif
