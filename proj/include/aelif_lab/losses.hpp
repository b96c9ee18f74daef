#pragma once

#include <cmath>
#include <cstddef>
#include <vector>

#include "aelif_lab/aelif.hpp"
#include "aelif_lab/denoiser.hpp"
#include "aelif_lab/errors.hpp"
#include "aelif_lab/rng.hpp"
#include "aelif_lab/schedule.hpp"
#include "aelif_lab/text_encoder.hpp"
#include "aelif_lab/vocabulary.hpp"

namespace aelif {

struct Example {
    Vec z0;
    TokenSequence tokens;
};

struct LossResult {
    double loss = 0.0;
    DenoiserParams grads;
};

namespace detail {

// How each token position was transformed, for backprop through the operator.
enum class AugKind { identity, zeroed, scaled };

struct AugRecord {
    std::vector<AugKind> kind;
    std::vector<Vec> scale;  // per-position noise vector where kind == scaled
};

// Training-time policy: with probability apply_prob, apply the configured
// operator at magnitude p ~ U[0, p_max]. Consumes the stream exactly like the
// public operators (position selection, then per-position draws ascending).
inline EmbeddingSequence apply_training_aelif(const EmbeddingSequence& z, const AelifConfig& cfg,
                                              Rng& rng, AugRecord& record) {
    record.kind.assign(z.length(), AugKind::identity);
    record.scale.assign(z.length(), Vec{});
    if (cfg.mode == AelifMode::none) return z;

    if (rng.uniform() >= cfg.apply_prob) return z;
    const double p = rng.uniform() * cfg.p_max;
    const auto sel = select_positions(z.length(), p, rng);

    EmbeddingSequence out = z;
    for (std::size_t pos : sel.positions) {
        if (cfg.mode == AelifMode::mask) {
            out.vectors[pos].assign(z.dim(), 0.0);
            record.kind[pos] = AugKind::zeroed;
        } else {
            Vec noise(z.dim());
            for (double& n : noise) n = rng.normal(cfg.mu, cfg.sigma);
            for (std::size_t k = 0; k < z.dim(); ++k) out.vectors[pos][k] *= noise[k];
            record.kind[pos] = AugKind::scaled;
            record.scale[pos] = std::move(noise);
        }
    }
    return out;
}

// One noise-prediction term: mean over the batch of |eps - eps_hat|^2 with
// t ~ U[0, T) and eps ~ N(0, I), scaled by `weight`. Gradients (including the
// path through the augmentation into the encoder tables) accumulate into
// `grads`. Per-example streams are derived by index from `parent`, so two
// terms sharing a parent share their t and eps draws.
inline double ldm_term(const DenoiserParams& params, const std::vector<Example>& batch,
                       const NoiseSchedule& sched, const AelifConfig& aelif, const Rng& parent,
                       double weight, DenoiserParams& grads) {
    if (batch.empty()) throw ConfigError("EmptyBatch: loss requires a non-empty batch");
    const double inv_batch = 1.0 / static_cast<double>(batch.size());
    const std::size_t latent_dim = params.mlp.out_dim();

    double loss = 0.0;
    for (std::size_t i = 0; i < batch.size(); ++i) {
        const Example& ex = batch[i];
        if (ex.z0.size() != latent_dim) throw ConfigError("loss: latent dimension mismatch");
        Rng ex_rng = parent.child(i);
        Rng t_rng = ex_rng.child("t");
        Rng eps_rng = ex_rng.child("eps");
        Rng aug_rng = ex_rng.child("aelif");

        const auto t = static_cast<std::size_t>(t_rng.uniform_below(sched.timesteps));
        const Vec eps = eps_rng.normal_vector(latent_dim);

        const EmbeddingSequence seq = encode(ex.tokens, params.encoder);
        AugRecord record;
        const EmbeddingSequence aug = apply_training_aelif(seq, aelif, aug_rng, record);
        const Vec cond = condition_vector(aug);
        const Vec z_t = forward_noise(ex.z0, t, eps, sched);

        MlpCache cache;
        const Vec pred = denoise_predict(params, z_t, t, cond, &cache);

        Vec d_pred(latent_dim);
        double ex_loss = 0.0;
        for (std::size_t o = 0; o < latent_dim; ++o) {
            const double r = pred[o] - eps[o];
            ex_loss += r * r;
            d_pred[o] = 2.0 * r * weight * inv_batch;
        }
        loss += ex_loss;

        const Vec d_input = mlp_backward(params.mlp, cache, d_pred, grads.mlp);

        // Conditioning gradient flows back through the mean, the augmentation
        // multipliers, and into the encoder tables.
        const std::size_t cond_offset = latent_dim + kTimeFeatureDim;
        const double inv_len = 1.0 / static_cast<double>(aug.length());
        const std::size_t dim = aug.dim();
        for (std::size_t posn = 0; posn < aug.length(); ++posn) {
            if (record.kind[posn] == AugKind::zeroed) continue;
            const int token = ex.tokens.tokens[posn];
            Vec& d_embed = grads.encoder.embedding_table[static_cast<std::size_t>(token)];
            Vec& d_pos = grads.encoder.positional_table[posn];
            for (std::size_t k = 0; k < dim; ++k) {
                double g = d_input[cond_offset + k] * inv_len;
                if (record.kind[posn] == AugKind::scaled) g *= record.scale[posn][k];
                d_embed[k] += g;
                d_pos[k] += g;
            }
        }
    }
    return weight * loss * inv_batch;
}

}  // namespace detail

// Conditional denoising loss with analytic gradients.
inline LossResult ldm_loss(const DenoiserParams& params, const std::vector<Example>& batch,
                           const NoiseSchedule& sched, const AelifConfig& aelif, const Rng& rng) {
    LossResult result;
    result.grads = make_zero_grads(params);
    result.loss = detail::ldm_term(params, batch, sched, aelif, rng, 1.0, result.grads);
    return result;
}

// Instance term plus lambda-weighted prior-preservation term. Both terms
// derive per-example draws from the same parent stream, so with lambda=0 the
// result is bitwise equal to ldm_loss on the instance batch.
inline LossResult dreambooth_loss(const DenoiserParams& params,
                                  const std::vector<Example>& instance_batch,
                                  const std::vector<Example>& prior_batch, double lambda,
                                  const NoiseSchedule& sched, const AelifConfig& aelif,
                                  const Rng& rng) {
    if (lambda < 0.0) throw ConfigError("dreambooth_loss: lambda must be >= 0");
    if (instance_batch.empty() || prior_batch.empty())
        throw ConfigError("EmptyBatch: dreambooth_loss requires non-empty batches");
    LossResult result;
    result.grads = make_zero_grads(params);
    result.loss = detail::ldm_term(params, instance_batch, sched, aelif, rng, 1.0, result.grads);
    if (lambda != 0.0)
        result.loss += detail::ldm_term(params, prior_batch, sched, aelif, rng, lambda, result.grads);
    return result;
}

}  // namespace aelif
