#pragma once

#include <cmath>
#include <cstddef>

#include "aelif_lab/aelif.hpp"
#include "aelif_lab/denoiser.hpp"
#include "aelif_lab/errors.hpp"
#include "aelif_lab/rng.hpp"
#include "aelif_lab/schedule.hpp"
#include "aelif_lab/text_encoder.hpp"
#include "aelif_lab/vocabulary.hpp"

namespace aelif {

// Ancestral reverse-diffusion sampling from z_T ~ N(0, I), conditioned on the
// encoded prompt with the augmentation applied at inference_aelif.p. All
// randomness is drawn from labeled child streams, so a fixed seed yields a
// fixed output and mode=none vs p=0 agree bitwise.
inline Vec sample(const DenoiserParams& params, const TokenSequence& tokens,
                  const NoiseSchedule& sched, const Rng& rng, const AelifConfig& inference_aelif) {
    if (sched.timesteps < 1 || sched.beta.size() != sched.timesteps ||
        sched.alpha_bar.size() != sched.timesteps)
        throw ConfigError("sample: invalid schedule");
    inference_aelif.validate();

    const EmbeddingSequence seq = encode(tokens, params.encoder);
    Rng aug_rng = rng.child("aelif");
    const EmbeddingSequence aug = apply_aelif(seq, inference_aelif, inference_aelif.p, aug_rng);
    const Vec cond = condition_vector(aug);

    const std::size_t latent_dim = params.mlp.out_dim();
    Vec z = rng.child("init").normal_vector(latent_dim);

    for (std::size_t step = sched.timesteps; step-- > 0;) {
        const Vec pred = denoise_predict(params, z, step, cond);
        const double beta = sched.beta[step];
        const double coef_noise = beta / std::sqrt(1.0 - sched.alpha_bar[step]);
        const double coef_mean = 1.0 / std::sqrt(1.0 - beta);
        for (std::size_t i = 0; i < latent_dim; ++i) z[i] = (z[i] - coef_noise * pred[i]) * coef_mean;
        if (step > 0) {
            const double var = (1.0 - sched.alpha_bar[step - 1]) / (1.0 - sched.alpha_bar[step]) * beta;
            const double stddev = std::sqrt(var);
            Rng noise_rng = rng.child("step").child(step);
            for (std::size_t i = 0; i < latent_dim; ++i) z[i] += stddev * noise_rng.normal();
        }
    }
    if (!all_finite(z)) throw NumericError("sample: non-finite latent produced");
    return z;
}

}  // namespace aelif
