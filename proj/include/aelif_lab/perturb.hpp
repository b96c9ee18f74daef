#pragma once

#include <algorithm>
#include <cstddef>
#include <cstdint>
#include <set>
#include <string>
#include <vector>

#include "aelif_lab/errors.hpp"
#include "aelif_lab/rng.hpp"
#include "aelif_lab/vocabulary.hpp"

namespace aelif {

enum class EditKind { char_delete, char_transpose, char_duplicate, char_substitute, word_drop };

inline std::string to_string(EditKind kind) {
    switch (kind) {
        case EditKind::char_delete: return "char_delete";
        case EditKind::char_transpose: return "char_transpose";
        case EditKind::char_duplicate: return "char_duplicate";
        case EditKind::char_substitute: return "char_substitute";
        case EditKind::word_drop: return "word_drop";
    }
    throw ConfigError("unknown edit kind");
}

// One atomic typo. `replacement` is consumed only by char_substitute.
struct EditOp {
    EditKind kind = EditKind::char_delete;
    std::size_t word_index = 0;
    std::size_t char_index = 0;
    char replacement = '\0';
};

struct PerturbConfig {
    std::size_t min_edits = 1;
    std::size_t max_edits = 3;
    std::size_t count = 40;
    std::uint64_t seed = 0;

    void validate() const {
        if (min_edits < 1 || min_edits > max_edits || max_edits > 4)
            throw ConfigError("perturb: need 1 <= min_edits <= max_edits <= 4");
        if (count < 1) throw ConfigError("perturb: count must be >= 1");
    }
};

namespace detail {

inline std::string join_words(const std::vector<std::string>& words) {
    std::string out;
    for (const auto& w : words) {
        if (w.empty()) continue;
        if (!out.empty()) out.push_back(' ');
        out += w;
    }
    return out;
}

// Upper bound on the Levenshtein cost of one edit. Deleting the only char of
// a word also removes a joining space, hence cost 2.
inline std::size_t edit_cost(const EditOp& op, const std::vector<std::string>& words) {
    switch (op.kind) {
        case EditKind::char_transpose: return 2;
        case EditKind::word_drop: return words[op.word_index].size() + 1;
        case EditKind::char_delete: return words[op.word_index].size() == 1 ? 2 : 1;
        default: return 1;
    }
}

}  // namespace detail

// Applies exactly one edit. The resulting prompt is rebuilt from the word
// list with single spaces; a word emptied by a delete simply disappears.
inline std::string apply_edit(const std::string& prompt, const EditOp& op) {
    auto words = split_words(prompt);
    if (words.empty()) throw ConfigError("apply_edit: empty prompt");
    if (op.word_index >= words.size()) throw ConfigError("apply_edit: word index out of range");
    std::string& word = words[op.word_index];
    const bool is_final_word = op.word_index + 1 == words.size();

    switch (op.kind) {
        case EditKind::char_delete:
            if (op.char_index >= word.size()) throw ConfigError("apply_edit: char index out of range");
            if (is_final_word && word.size() == 1)
                throw ConfigError("apply_edit: cannot delete the final item word entirely");
            word.erase(op.char_index, 1);
            break;
        case EditKind::char_transpose:
            if (op.char_index + 1 >= word.size())
                throw ConfigError("apply_edit: transpose needs two adjacent chars");
            if (word[op.char_index] == word[op.char_index + 1])
                throw ConfigError("apply_edit: transposing equal chars is a no-op");
            std::swap(word[op.char_index], word[op.char_index + 1]);
            break;
        case EditKind::char_duplicate:
            if (op.char_index >= word.size()) throw ConfigError("apply_edit: char index out of range");
            word.insert(op.char_index, 1, word[op.char_index]);
            break;
        case EditKind::char_substitute:
            if (op.char_index >= word.size()) throw ConfigError("apply_edit: char index out of range");
            if (op.replacement < 'a' || op.replacement > 'z')
                throw ConfigError("apply_edit: replacement must be a lowercase letter");
            if (op.replacement == word[op.char_index])
                throw ConfigError("apply_edit: substitution must change the char");
            word[op.char_index] = op.replacement;
            break;
        case EditKind::word_drop:
            if (is_final_word) throw ConfigError("apply_edit: cannot drop the final item word");
            word.clear();
            break;
    }

    const std::string result = detail::join_words(words);
    if (result.empty() || result == prompt) throw ConfigError("apply_edit: edit produced no change");
    return result;
}

namespace detail {

// Proposes a random edit for the current word list, or returns false when the
// drawn slot is invalid (caller treats that as a failed attempt).
inline bool propose_edit(const std::vector<std::string>& words, std::size_t budget, Rng& rng,
                         EditOp& op) {
    // Empirical mix from the observed typo families: deletions dominate.
    static constexpr double kWeights[] = {0.35, 0.25, 0.15, 0.15, 0.10};
    const double roll = rng.uniform();
    double acc = 0.0;
    std::size_t pick = 0;
    for (std::size_t k = 0; k < 5; ++k) {
        acc += kWeights[k];
        if (roll < acc) {
            pick = k;
            break;
        }
    }
    op.kind = static_cast<EditKind>(pick);

    if (op.kind == EditKind::word_drop) {
        if (words.size() < 2) return false;
        op.word_index = rng.uniform_below(words.size() - 1);  // never the final item word
        op.char_index = 0;
        if (words[op.word_index].size() + 1 > budget) return false;
        return true;
    }

    op.word_index = rng.uniform_below(words.size());
    const std::string& word = words[op.word_index];
    if (word.empty()) return false;
    if (edit_cost(op, words) > budget) return false;

    switch (op.kind) {
        case EditKind::char_delete:
            if (op.word_index + 1 == words.size() && word.size() == 1) return false;
            op.char_index = rng.uniform_below(word.size());
            return true;
        case EditKind::char_transpose: {
            if (word.size() < 2) return false;
            op.char_index = rng.uniform_below(word.size() - 1);
            return word[op.char_index] != word[op.char_index + 1];
        }
        case EditKind::char_duplicate:
            op.char_index = rng.uniform_below(word.size());
            return true;
        case EditKind::char_substitute: {
            op.char_index = rng.uniform_below(word.size());
            const char original = word[op.char_index];
            char c = static_cast<char>('a' + rng.uniform_below(26));
            if (c == original) c = (c == 'z') ? 'a' : static_cast<char>(c + 1);
            op.replacement = c;
            return true;
        }
        default: return false;
    }
}

}  // namespace detail

// Deterministic replacement for an external adversarial-prompt generator:
// emits `count` distinct typo'd variants of the template, each produced by
// min_edits..max_edits random edits under a Levenshtein budget of 2*max_edits.
inline std::vector<std::string> gen_adversarial_set(const std::string& template_prompt,
                                                    const PerturbConfig& config, const Rng& rng) {
    config.validate();
    if (template_prompt.rfind("a photo of sks ", 0) != 0 ||
        template_prompt.size() <= std::string("a photo of sks ").size())
        throw ConfigError("gen_adversarial_set: template must match 'a photo of sks <item>'");

    std::vector<std::string> out;
    std::set<std::string> seen;
    const std::size_t max_attempts = 100 * config.count;

    for (std::size_t attempt = 0; attempt < max_attempts && out.size() < config.count; ++attempt) {
        Rng attempt_rng = rng.child("attempt").child(attempt);
        const std::size_t n_edits =
            config.min_edits + attempt_rng.uniform_below(config.max_edits - config.min_edits + 1);
        std::size_t budget = 2 * config.max_edits;

        std::string prompt = template_prompt;
        bool ok = true;
        for (std::size_t e = 0; e < n_edits && ok; ++e) {
            const auto words = split_words(prompt);
            EditOp op;
            if (!detail::propose_edit(words, budget, attempt_rng, op)) {
                ok = false;
                break;
            }
            budget -= detail::edit_cost(op, words);
            try {
                prompt = apply_edit(prompt, op);
            } catch (const ConfigError&) {
                ok = false;
            }
        }
        if (!ok || prompt == template_prompt || !seen.insert(prompt).second) continue;
        out.push_back(prompt);
    }

    if (out.size() < config.count)
        throw NumericError("gen_adversarial_set: could not reach " + std::to_string(config.count) +
                           " distinct prompts in " + std::to_string(max_attempts) + " attempts");
    return out;
}

}  // namespace aelif
