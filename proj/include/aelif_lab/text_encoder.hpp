#pragma once

#include <cstddef>
#include <vector>

#include "aelif_lab/errors.hpp"
#include "aelif_lab/rng.hpp"
#include "aelif_lab/vec.hpp"
#include "aelif_lab/vocabulary.hpp"

namespace aelif {

inline constexpr std::size_t kEmbeddingDim = 16;

// Per-token embedding vectors, the object the augmentation operators act on.
struct EmbeddingSequence {
    std::vector<Vec> vectors;
    std::size_t length() const { return vectors.size(); }
    std::size_t dim() const { return vectors.empty() ? 0 : vectors.front().size(); }
};

// Token embedding table plus additive positional table.
struct TextEncoderParams {
    std::vector<Vec> embedding_table;   // vocab_size x d
    std::vector<Vec> positional_table;  // L_max x d

    std::size_t vocab_size() const { return embedding_table.size(); }
    std::size_t dim() const { return embedding_table.empty() ? 0 : embedding_table.front().size(); }
};

inline TextEncoderParams init_text_encoder(std::size_t vocab_size, Rng rng,
                                           std::size_t dim = kEmbeddingDim,
                                           std::size_t max_len = kMaxSequenceLength,
                                           double scale = 0.1) {
    TextEncoderParams params;
    params.embedding_table.reserve(vocab_size);
    for (std::size_t i = 0; i < vocab_size; ++i)
        params.embedding_table.push_back(rng.normal_vector(dim, 0.0, scale));
    params.positional_table.reserve(max_len);
    for (std::size_t i = 0; i < max_len; ++i)
        params.positional_table.push_back(rng.normal_vector(dim, 0.0, scale));
    return params;
}

inline EmbeddingSequence encode(const TokenSequence& tokens, const TextEncoderParams& params) {
    EmbeddingSequence seq;
    seq.vectors.reserve(tokens.length());
    for (std::size_t i = 0; i < tokens.length(); ++i) {
        const int id = tokens.tokens[i];
        if (id < 0 || static_cast<std::size_t>(id) >= params.vocab_size())
            throw ConfigError("encode: token id out of range");
        if (i >= params.positional_table.size())
            throw ConfigError("encode: sequence longer than positional table");
        Vec v = params.embedding_table[id];
        const Vec& pos = params.positional_table[i];
        for (std::size_t k = 0; k < v.size(); ++k) v[k] += pos[k];
        seq.vectors.push_back(std::move(v));
    }
    return seq;
}

}  // namespace aelif
