#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <numeric>
#include <string>
#include <vector>

#include "aelif_lab/denoiser.hpp"
#include "aelif_lab/vec.hpp"

namespace testutil {

// Classic dynamic-programming edit distance; oracle for the perturb module.
inline std::size_t levenshtein(const std::string& a, const std::string& b) {
    std::vector<std::size_t> prev(b.size() + 1), cur(b.size() + 1);
    std::iota(prev.begin(), prev.end(), std::size_t{0});
    for (std::size_t i = 1; i <= a.size(); ++i) {
        cur[0] = i;
        for (std::size_t j = 1; j <= b.size(); ++j) {
            const std::size_t sub = prev[j - 1] + (a[i - 1] == b[j - 1] ? 0 : 1);
            cur[j] = std::min({prev[j] + 1, cur[j - 1] + 1, sub});
        }
        std::swap(prev, cur);
    }
    return prev[b.size()];
}

// Average ranks (ties averaged), for Spearman correlation.
inline aelif::Vec ranks(const aelif::Vec& values) {
    const std::size_t n = values.size();
    std::vector<std::size_t> order(n);
    std::iota(order.begin(), order.end(), std::size_t{0});
    std::sort(order.begin(), order.end(),
              [&](std::size_t a, std::size_t b) { return values[a] < values[b]; });
    aelif::Vec r(n);
    std::size_t i = 0;
    while (i < n) {
        std::size_t j = i;
        while (j + 1 < n && values[order[j + 1]] == values[order[i]]) ++j;
        const double avg = 0.5 * static_cast<double>(i + j) + 1.0;
        for (std::size_t k = i; k <= j; ++k) r[order[k]] = avg;
        i = j + 1;
    }
    return r;
}

inline double pearson(const aelif::Vec& x, const aelif::Vec& y) {
    const double n = static_cast<double>(x.size());
    double mx = 0.0, my = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        mx += x[i];
        my += y[i];
    }
    mx /= n;
    my /= n;
    double sxy = 0.0, sxx = 0.0, syy = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        sxy += (x[i] - mx) * (y[i] - my);
        sxx += (x[i] - mx) * (x[i] - mx);
        syy += (y[i] - my) * (y[i] - my);
    }
    return sxy / std::sqrt(sxx * syy);
}

inline double spearman(const aelif::Vec& x, const aelif::Vec& y) {
    return pearson(ranks(x), ranks(y));
}

// Max relative error between analytic gradients and central finite
// differences of `loss_fn` over every parameter scalar. The denominator is
// floored at 1e-6: below that the central difference is dominated by
// cancellation noise (~eps*|loss|/2h ~ 4e-11 here), not by the gradient.
template <typename LossFn>
double max_gradient_relative_error(aelif::DenoiserParams& params,
                                   const aelif::DenoiserParams& analytic_grads, LossFn&& loss_fn,
                                   double h = 1e-5) {
    std::vector<double*> slots;
    aelif::visit_params(params, [&](double& x) { slots.push_back(&x); });
    std::vector<const double*> grad_slots;
    aelif::visit_params(const_cast<aelif::DenoiserParams&>(analytic_grads),
                        [&](double& x) { grad_slots.push_back(&x); });

    double worst = 0.0;
    for (std::size_t i = 0; i < slots.size(); ++i) {
        const double saved = *slots[i];
        *slots[i] = saved + h;
        const double up = loss_fn();
        *slots[i] = saved - h;
        const double down = loss_fn();
        *slots[i] = saved;
        const double numeric = (up - down) / (2.0 * h);
        const double analytic = *grad_slots[i];
        const double scale = std::max({std::abs(numeric), std::abs(analytic), 1e-6});
        worst = std::max(worst, std::abs(numeric - analytic) / scale);
    }
    return worst;
}

// Minimum assignment cost by exhaustive permutation search; oracle for w2_set.
inline double brute_force_min_assignment(const std::vector<aelif::Vec>& a,
                                         const std::vector<aelif::Vec>& b) {
    const std::size_t n = a.size();
    std::vector<std::size_t> perm(n);
    std::iota(perm.begin(), perm.end(), std::size_t{0});
    double best = std::numeric_limits<double>::infinity();
    do {
        double total = 0.0;
        for (std::size_t i = 0; i < n; ++i) total += aelif::squared_distance(a[i], b[perm[i]]);
        best = std::min(best, total);
    } while (std::next_permutation(perm.begin(), perm.end()));
    return best;
}

}  // namespace testutil
