#pragma once

#include <cmath>
#include <cstddef>
#include <vector>

#include "aelif_lab/errors.hpp"
#include "aelif_lab/rng.hpp"
#include "aelif_lab/schedule.hpp"
#include "aelif_lab/text_encoder.hpp"
#include "aelif_lab/vec.hpp"

namespace aelif {

inline constexpr std::size_t kTimeFeatureDim = 8;
inline constexpr std::size_t kHiddenWidth = 64;

// 4 frequency pairs [sin(t*f_k), cos(t*f_k)], f_k = 10000^(-k/4).
inline Vec time_features(std::size_t t) {
    Vec feat(kTimeFeatureDim);
    for (std::size_t k = 0; k < kTimeFeatureDim / 2; ++k) {
        const double freq = std::pow(10000.0, -static_cast<double>(k) / 4.0);
        feat[2 * k] = std::sin(static_cast<double>(t) * freq);
        feat[2 * k + 1] = std::cos(static_cast<double>(t) * freq);
    }
    return feat;
}

// Two-hidden-layer tanh MLP, row-major weights.
struct Mlp {
    std::vector<Vec> w1;  // hidden x in
    Vec b1;
    std::vector<Vec> w2;  // hidden x hidden
    Vec b2;
    std::vector<Vec> w3;  // out x hidden
    Vec b3;

    std::size_t in_dim() const { return w1.empty() ? 0 : w1.front().size(); }
    std::size_t hidden_dim() const { return w1.size(); }
    std::size_t out_dim() const { return w3.size(); }
};

// Noise predictor parameters: the MLP plus the trainable text encoder.
struct DenoiserParams {
    Mlp mlp;
    TextEncoderParams encoder;
};

namespace detail {

inline std::vector<Vec> init_matrix(std::size_t rows, std::size_t cols, Rng& rng) {
    std::vector<Vec> m;
    m.reserve(rows);
    const double scale = 1.0 / std::sqrt(static_cast<double>(cols));
    for (std::size_t r = 0; r < rows; ++r) m.push_back(rng.normal_vector(cols, 0.0, scale));
    return m;
}

}  // namespace detail

inline DenoiserParams init_denoiser(std::size_t vocab_size, Rng rng,
                                    std::size_t latent_dim = kLatentDim,
                                    std::size_t embed_dim = kEmbeddingDim,
                                    std::size_t hidden = kHiddenWidth) {
    const std::size_t in = latent_dim + kTimeFeatureDim + embed_dim;
    DenoiserParams params;
    Rng mlp_rng = rng.child("mlp");
    params.mlp.w1 = detail::init_matrix(hidden, in, mlp_rng);
    params.mlp.b1.assign(hidden, 0.0);
    params.mlp.w2 = detail::init_matrix(hidden, hidden, mlp_rng);
    params.mlp.b2.assign(hidden, 0.0);
    params.mlp.w3 = detail::init_matrix(latent_dim, hidden, mlp_rng);
    params.mlp.b3.assign(latent_dim, 0.0);
    params.encoder = init_text_encoder(vocab_size, rng.child("encoder"), embed_dim);
    return params;
}

inline DenoiserParams make_zero_grads(const DenoiserParams& like) {
    DenoiserParams g;
    auto zero_matrix = [](const std::vector<Vec>& m) {
        std::vector<Vec> z(m.size());
        for (std::size_t r = 0; r < m.size(); ++r) z[r].assign(m[r].size(), 0.0);
        return z;
    };
    g.mlp.w1 = zero_matrix(like.mlp.w1);
    g.mlp.b1.assign(like.mlp.b1.size(), 0.0);
    g.mlp.w2 = zero_matrix(like.mlp.w2);
    g.mlp.b2.assign(like.mlp.b2.size(), 0.0);
    g.mlp.w3 = zero_matrix(like.mlp.w3);
    g.mlp.b3.assign(like.mlp.b3.size(), 0.0);
    g.encoder.embedding_table = zero_matrix(like.encoder.embedding_table);
    g.encoder.positional_table = zero_matrix(like.encoder.positional_table);
    return g;
}

// Applies fn to every parameter scalar in a fixed order (encoder tables first,
// then MLP layers). The same order drives SGD updates and gradient checks.
template <typename Fn>
void visit_params(DenoiserParams& params, Fn&& fn) {
    for (auto& row : params.encoder.embedding_table)
        for (auto& x : row) fn(x);
    for (auto& row : params.encoder.positional_table)
        for (auto& x : row) fn(x);
    auto visit_mlp_part = [&](std::vector<Vec>& w, Vec& b) {
        for (auto& row : w)
            for (auto& x : row) fn(x);
        for (auto& x : b) fn(x);
    };
    visit_mlp_part(params.mlp.w1, params.mlp.b1);
    visit_mlp_part(params.mlp.w2, params.mlp.b2);
    visit_mlp_part(params.mlp.w3, params.mlp.b3);
}

template <typename Fn>
void visit_params_pair(DenoiserParams& a, DenoiserParams& b, Fn&& fn) {
    std::vector<double*> pa, pb;
    visit_params(a, [&](double& x) { pa.push_back(&x); });
    visit_params(b, [&](double& x) { pb.push_back(&x); });
    if (pa.size() != pb.size()) throw NumericError("visit_params_pair: shape mismatch");
    for (std::size_t i = 0; i < pa.size(); ++i) fn(*pa[i], *pb[i]);
}

inline std::size_t param_count(const DenoiserParams& params) {
    std::size_t n = 0;
    visit_params(const_cast<DenoiserParams&>(params), [&](double&) { ++n; });
    return n;
}

// Forward activations retained for backprop.
struct MlpCache {
    Vec input;
    Vec h1;
    Vec h2;
};

inline Vec mlp_forward(const Mlp& mlp, const Vec& input, MlpCache* cache = nullptr) {
    if (input.size() != mlp.in_dim()) throw ConfigError("mlp_forward: input dimension mismatch");
    const std::size_t hidden = mlp.hidden_dim();
    Vec h1(hidden), h2(hidden);
    for (std::size_t h = 0; h < hidden; ++h) h1[h] = std::tanh(dot(mlp.w1[h], input) + mlp.b1[h]);
    for (std::size_t h = 0; h < hidden; ++h) h2[h] = std::tanh(dot(mlp.w2[h], h1) + mlp.b2[h]);
    Vec out(mlp.out_dim());
    for (std::size_t o = 0; o < out.size(); ++o) out[o] = dot(mlp.w3[o], h2) + mlp.b3[o];
    if (cache) {
        cache->input = input;
        cache->h1 = std::move(h1);
        cache->h2 = std::move(h2);
    }
    return out;
}

// Backpropagates d_out through the cached forward pass, accumulating parameter
// gradients into `grads` and returning the gradient w.r.t. the input vector.
inline Vec mlp_backward(const Mlp& mlp, const MlpCache& cache, const Vec& d_out, Mlp& grads) {
    const std::size_t hidden = mlp.hidden_dim();
    Vec d_h2(hidden, 0.0);
    for (std::size_t o = 0; o < d_out.size(); ++o) {
        grads.b3[o] += d_out[o];
        for (std::size_t h = 0; h < hidden; ++h) {
            grads.w3[o][h] += d_out[o] * cache.h2[h];
            d_h2[h] += mlp.w3[o][h] * d_out[o];
        }
    }
    Vec d_h1(hidden, 0.0);
    for (std::size_t h = 0; h < hidden; ++h) {
        const double d_pre = d_h2[h] * (1.0 - cache.h2[h] * cache.h2[h]);
        grads.b2[h] += d_pre;
        for (std::size_t k = 0; k < hidden; ++k) {
            grads.w2[h][k] += d_pre * cache.h1[k];
            d_h1[k] += mlp.w2[h][k] * d_pre;
        }
    }
    Vec d_in(cache.input.size(), 0.0);
    for (std::size_t h = 0; h < hidden; ++h) {
        const double d_pre = d_h1[h] * (1.0 - cache.h1[h] * cache.h1[h]);
        grads.b1[h] += d_pre;
        for (std::size_t k = 0; k < d_in.size(); ++k) {
            grads.w1[h][k] += d_pre * cache.input[k];
            d_in[k] += mlp.w1[h][k] * d_pre;
        }
    }
    return d_in;
}

inline Vec concat_input(const Vec& z_t, std::size_t t, const Vec& cond) {
    Vec input;
    input.reserve(z_t.size() + kTimeFeatureDim + cond.size());
    input.insert(input.end(), z_t.begin(), z_t.end());
    const Vec feat = time_features(t);
    input.insert(input.end(), feat.begin(), feat.end());
    input.insert(input.end(), cond.begin(), cond.end());
    return input;
}

// Mean over the sequence's token vectors; the conditioning input.
inline Vec condition_vector(const EmbeddingSequence& seq) {
    if (seq.length() == 0) throw ConfigError("condition_vector: empty sequence");
    Vec cond(seq.dim(), 0.0);
    for (const Vec& v : seq.vectors)
        for (std::size_t k = 0; k < cond.size(); ++k) cond[k] += v[k];
    const double inv = 1.0 / static_cast<double>(seq.length());
    for (double& x : cond) x *= inv;
    return cond;
}

inline Vec denoise_predict(const DenoiserParams& params, const Vec& z_t, std::size_t t,
                           const Vec& cond, MlpCache* cache = nullptr) {
    return mlp_forward(params.mlp, concat_input(z_t, t, cond), cache);
}

}  // namespace aelif
