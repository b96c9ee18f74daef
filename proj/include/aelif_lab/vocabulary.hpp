#pragma once

#include <algorithm>
#include <cctype>
#include <map>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "aelif_lab/errors.hpp"

namespace aelif {

inline constexpr std::size_t kMaxSequenceLength = 32;
inline constexpr char kFallbackChar = '?';

inline std::string to_lower_ascii(std::string_view s) {
    std::string out(s);
    for (char& c : out)
        if (c >= 'A' && c <= 'Z') c = static_cast<char>(c - 'A' + 'a');
    return out;
}

inline std::vector<std::string> split_words(std::string_view s) {
    std::vector<std::string> words;
    std::string cur;
    for (char c : s) {
        if (c == ' ' || c == '\t' || c == '\n' || c == '\r') {
            if (!cur.empty()) words.push_back(std::move(cur)), cur.clear();
        } else {
            cur.push_back(c);
        }
    }
    if (!cur.empty()) words.push_back(std::move(cur));
    return words;
}

// Word-level vocabulary with a character-level fallback alphabet.
//
// Word ids occupy [0, word_count) in lexicographic order; char ids follow in
// [word_count, size). Lowercase letters, digits and a fallback token are
// always present, so any ASCII prompt tokenizes without failure.
struct Vocabulary {
    std::map<std::string, int> word_ids;
    std::map<char, int> char_ids;
    int size = 0;

    int char_id(char c) const {
        auto it = char_ids.find(c);
        if (it != char_ids.end()) return it->second;
        return char_ids.at(kFallbackChar);
    }
};

struct TokenSequence {
    std::vector<int> tokens;
    std::size_t length() const { return tokens.size(); }
};

inline Vocabulary build_vocab(const std::vector<std::string>& corpus) {
    if (corpus.empty()) throw ConfigError("EmptyCorpus: build_vocab requires a non-empty corpus");

    std::set<std::string> words;
    for (const auto& prompt : corpus)
        for (auto& w : split_words(to_lower_ascii(prompt))) words.insert(w);

    std::set<char> chars;
    for (char c = 'a'; c <= 'z'; ++c) chars.insert(c);
    for (char c = '0'; c <= '9'; ++c) chars.insert(c);
    chars.insert(kFallbackChar);

    Vocabulary vocab;
    int next = 0;
    for (const auto& w : words) vocab.word_ids[w] = next++;
    for (char c : chars) vocab.char_ids[c] = next++;
    vocab.size = next;
    return vocab;
}

inline TokenSequence tokenize(std::string_view prompt, const Vocabulary& vocab) {
    const std::string lowered = to_lower_ascii(prompt);
    const auto words = split_words(lowered);
    if (words.empty()) throw ConfigError("EmptyPrompt: tokenize requires a non-empty prompt");

    TokenSequence seq;
    for (const auto& w : words) {
        if (seq.tokens.size() >= kMaxSequenceLength) break;
        auto it = vocab.word_ids.find(w);
        if (it != vocab.word_ids.end()) {
            seq.tokens.push_back(it->second);
        } else {
            // Out-of-vocabulary words decompose into characters, so a one
            // character typo produces a genuinely different sequence.
            for (char c : w) {
                if (seq.tokens.size() >= kMaxSequenceLength) break;
                seq.tokens.push_back(vocab.char_id(c));
            }
        }
    }
    return seq;
}

inline nlohmann::json vocab_to_json(const Vocabulary& vocab) {
    nlohmann::json words = nlohmann::json::object();
    for (const auto& [w, id] : vocab.word_ids) words[w] = id;
    nlohmann::json chars = nlohmann::json::object();
    for (const auto& [c, id] : vocab.char_ids) chars[std::string(1, c)] = id;
    return nlohmann::json{{"chars", chars}, {"size", vocab.size}, {"words", words}};
}

inline Vocabulary vocab_from_json(const nlohmann::json& j) {
    Vocabulary vocab;
    for (auto it = j.at("words").begin(); it != j.at("words").end(); ++it)
        vocab.word_ids[it.key()] = it.value().get<int>();
    for (auto it = j.at("chars").begin(); it != j.at("chars").end(); ++it) {
        const std::string key = it.key();
        if (key.size() != 1) throw ConfigError("vocabulary: char key must be a single character");
        vocab.char_ids[key[0]] = it.value().get<int>();
    }
    vocab.size = j.at("size").get<int>();

    std::set<int> seen;
    for (const auto& [w, id] : vocab.word_ids) seen.insert(id);
    for (const auto& [c, id] : vocab.char_ids) {
        if (!seen.insert(id).second) throw ConfigError("vocabulary: word and char ids overlap");
    }
    if (static_cast<int>(seen.size()) != vocab.size || (vocab.size > 0 && (*seen.begin() != 0 || *seen.rbegin() != vocab.size - 1)))
        throw ConfigError("vocabulary: ids must be dense in [0, size)");
    return vocab;
}

}  // namespace aelif
