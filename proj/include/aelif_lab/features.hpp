#pragma once

#include <cmath>
#include <cstddef>
#include <cstdint>
#include <vector>

#include "aelif_lab/errors.hpp"
#include "aelif_lab/rng.hpp"
#include "aelif_lab/vec.hpp"

namespace aelif {

inline constexpr std::size_t kFeatureDim = 32;
inline constexpr std::uint64_t kFeatureExtractorSeed = 3141592653ULL;

// Frozen random projection followed by L2 normalization; the deterministic
// stand-in for a pretrained image-embedding model.
class FeatureExtractor {
public:
    explicit FeatureExtractor(std::size_t latent_dim = 8, std::size_t feature_dim = kFeatureDim,
                              std::uint64_t seed = kFeatureExtractorSeed) {
        Rng rng(seed);
        projection_.reserve(feature_dim);
        for (std::size_t f = 0; f < feature_dim; ++f)
            projection_.push_back(rng.normal_vector(latent_dim));
    }

    std::size_t feature_dim() const { return projection_.size(); }
    std::size_t latent_dim() const { return projection_.empty() ? 0 : projection_.front().size(); }

    Vec extract(const Vec& z) const {
        if (z.size() != latent_dim()) throw ConfigError("extract_features: dimension mismatch");
        if (!all_finite(z)) throw NumericError("extract_features: non-finite input");
        Vec out(feature_dim());
        for (std::size_t f = 0; f < feature_dim(); ++f) out[f] = dot(projection_[f], z);
        const double n = norm2(out);
        if (n == 0.0) throw NumericError("DegenerateFeature: zero vector has no direction");
        for (double& x : out) x /= n;
        return out;
    }

private:
    std::vector<Vec> projection_;  // feature_dim x latent_dim
};

inline Vec extract_features(const Vec& z, const FeatureExtractor& fe) { return fe.extract(z); }

namespace detail {

inline void require_unit_norm(const Vec& v, const char* who) {
    if (std::abs(norm2(v) - 1.0) > 1e-9)
        throw ConfigError(std::string(who) + ": input must be unit-norm");
}

}  // namespace detail

// Dot product of unit vectors, clamped into [-1, 1]. Bitwise-identical inputs
// short-circuit to 1.0 so self-similarity is exact.
inline double cosine_similarity(const Vec& a, const Vec& b) {
    if (a.size() != b.size()) throw ConfigError("cosine_similarity: dimension mismatch");
    detail::require_unit_norm(a, "cosine_similarity");
    detail::require_unit_norm(b, "cosine_similarity");
    if (a == b) return 1.0;
    const double d = dot(a, b);
    return d > 1.0 ? 1.0 : (d < -1.0 ? -1.0 : d);
}

}  // namespace aelif
