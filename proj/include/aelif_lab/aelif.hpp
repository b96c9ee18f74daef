#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <numeric>
#include <string>
#include <vector>

#include <json.hpp>

#include "aelif_lab/errors.hpp"
#include "aelif_lab/rng.hpp"
#include "aelif_lab/text_encoder.hpp"

namespace aelif {

enum class AelifMode { none, mask, noise_conv };

inline std::string to_string(AelifMode mode) {
    switch (mode) {
        case AelifMode::none: return "none";
        case AelifMode::mask: return "mask";
        case AelifMode::noise_conv: return "noise_conv";
    }
    throw ConfigError("unknown aelif mode");
}

inline AelifMode aelif_mode_from_string(const std::string& s) {
    if (s == "none") return AelifMode::none;
    if (s == "mask") return AelifMode::mask;
    if (s == "noise_conv") return AelifMode::noise_conv;
    throw ConfigError("unknown aelif mode: " + s);
}

// Augmentation settings. `p` is the magnitude for a direct application
// (inference sweeps); `p_max`/`apply_prob` govern training-time use, where
// each example is augmented with probability apply_prob and p ~ U[0, p_max].
struct AelifConfig {
    AelifMode mode = AelifMode::none;
    double p = 0.0;
    double mu = 0.0;
    double sigma = 1.0;
    double p_max = 0.3;
    double apply_prob = 0.5;

    void validate() const {
        if (p < 0.0 || p > 1.0) throw ConfigError("aelif: p must be in [0, 1]");
        if (p_max < 0.0 || p_max > 1.0) throw ConfigError("aelif: p_max must be in [0, 1]");
        if (sigma < 0.0) throw ConfigError("aelif: sigma must be >= 0");
        if (apply_prob < 0.0 || apply_prob > 1.0)
            throw ConfigError("aelif: apply_prob must be in [0, 1]");
    }
};

inline nlohmann::json aelif_to_json(const AelifConfig& c) {
    return nlohmann::json{{"mode", to_string(c.mode)}, {"p", c.p},
                          {"p_max", c.p_max},          {"mu", c.mu},
                          {"sigma", c.sigma},          {"apply_prob", c.apply_prob}};
}

inline AelifConfig aelif_from_json(const nlohmann::json& j) {
    AelifConfig c;
    if (j.contains("mode")) c.mode = aelif_mode_from_string(j.at("mode").get<std::string>());
    if (j.contains("p")) c.p = j.at("p").get<double>();
    if (j.contains("p_max")) c.p_max = j.at("p_max").get<double>();
    if (j.contains("mu")) c.mu = j.at("mu").get<double>();
    if (j.contains("sigma")) c.sigma = j.at("sigma").get<double>();
    if (j.contains("apply_prob")) c.apply_prob = j.at("apply_prob").get<double>();
    c.validate();
    return c;
}

struct PositionSelection {
    std::vector<std::size_t> positions;  // sorted ascending, no duplicates
    std::size_t count() const { return positions.size(); }
};

// Picks floor(L*p) distinct positions uniformly without replacement
// (partial Fisher-Yates over [0, L)).
inline PositionSelection select_positions(std::size_t length, double p, Rng& rng) {
    if (length < 1) throw ConfigError("select_positions: length must be >= 1");
    if (p < 0.0 || p > 1.0) throw ConfigError("select_positions: p must be in [0, 1]");

    const auto n = static_cast<std::size_t>(std::floor(static_cast<double>(length) * p));
    std::vector<std::size_t> pool(length);
    std::iota(pool.begin(), pool.end(), std::size_t{0});
    for (std::size_t i = 0; i < n; ++i) {
        const std::size_t j = i + rng.uniform_below(length - i);
        std::swap(pool[i], pool[j]);
    }
    PositionSelection sel;
    sel.positions.assign(pool.begin(), pool.begin() + static_cast<std::ptrdiff_t>(n));
    std::sort(sel.positions.begin(), sel.positions.end());
    return sel;
}

// Replaces floor(L*p) randomly selected token embeddings with the zero vector.
inline EmbeddingSequence aelif_mask(const EmbeddingSequence& z, double p, Rng& rng) {
    const auto sel = select_positions(z.length(), p, rng);
    EmbeddingSequence out = z;
    for (std::size_t pos : sel.positions) out.vectors[pos].assign(z.dim(), 0.0);
    return out;
}

// Multiplies floor(L*p) randomly selected token embeddings elementwise by a
// fresh noise vector with i.i.d. N(mu, sigma^2) components.
inline EmbeddingSequence aelif_noise_conv(const EmbeddingSequence& z, double p, double mu,
                                          double sigma, Rng& rng) {
    if (sigma < 0.0) throw ConfigError("aelif_noise_conv: sigma must be >= 0");
    const auto sel = select_positions(z.length(), p, rng);
    EmbeddingSequence out = z;
    for (std::size_t pos : sel.positions) {
        Vec& v = out.vectors[pos];
        for (double& x : v) x *= rng.normal(mu, sigma);
    }
    return out;
}

// Direct application at a fixed magnitude (mode none is the identity).
inline EmbeddingSequence apply_aelif(const EmbeddingSequence& z, const AelifConfig& cfg,
                                     double p, Rng& rng) {
    switch (cfg.mode) {
        case AelifMode::none: return z;
        case AelifMode::mask: return aelif_mask(z, p, rng);
        case AelifMode::noise_conv: return aelif_noise_conv(z, p, cfg.mu, cfg.sigma, rng);
    }
    throw ConfigError("unknown aelif mode");
}

}  // namespace aelif
