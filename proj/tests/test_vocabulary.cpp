#include <catch2/catch_amalgamated.hpp>

#include "aelif_lab/vocabulary.hpp"

using namespace aelif;

TEST_CASE("build_vocab collects words and the char alphabet") {
    const Vocabulary vocab = build_vocab({"a photo of sks dog"});
    for (const char* w : {"a", "photo", "of", "sks", "dog"})
        REQUIRE(vocab.word_ids.count(w) == 1);
    for (char c = 'a'; c <= 'z'; ++c) REQUIRE(vocab.char_ids.count(c) == 1);
    for (char c = '0'; c <= '9'; ++c) REQUIRE(vocab.char_ids.count(c) == 1);
    REQUIRE(vocab.char_ids.count(kFallbackChar) == 1);
    REQUIRE(vocab.size == 5 + 26 + 10 + 1);
}

TEST_CASE("build_vocab rejects an empty corpus") {
    REQUIRE_THROWS_AS(build_vocab({}), ConfigError);
}

TEST_CASE("two prompts give distinct word ids") {
    const Vocabulary vocab = build_vocab({"a photo of sks dog", "a photo of sks cat"});
    REQUIRE(vocab.word_ids.size() == 6);
    REQUIRE(vocab.word_ids.at("cat") != vocab.word_ids.at("dog"));
    // ids dense and disjoint
    std::set<int> ids;
    for (const auto& [w, id] : vocab.word_ids) ids.insert(id);
    for (const auto& [c, id] : vocab.char_ids) REQUIRE(ids.insert(id).second);
    REQUIRE(static_cast<int>(ids.size()) == vocab.size);
    REQUIRE(*ids.begin() == 0);
    REQUIRE(*ids.rbegin() == vocab.size - 1);
}

TEST_CASE("tokenize maps in-vocab words to word ids") {
    const Vocabulary vocab = build_vocab({"a photo of sks dog"});
    const TokenSequence seq = tokenize("a photo of sks dog", vocab);
    REQUIRE(seq.length() == 5);
    REQUIRE(seq.tokens == std::vector<int>{vocab.word_ids.at("a"), vocab.word_ids.at("photo"),
                                           vocab.word_ids.at("of"), vocab.word_ids.at("sks"),
                                           vocab.word_ids.at("dog")});
}

TEST_CASE("out-of-vocabulary words decompose into characters") {
    const Vocabulary vocab = build_vocab({"a photo of sks dog"});
    const TokenSequence seq = tokenize("a poto of sks dog", vocab);
    REQUIRE(seq.length() == 8);
    REQUIRE(seq.tokens == std::vector<int>{vocab.word_ids.at("a"), vocab.char_ids.at('p'),
                                           vocab.char_ids.at('o'), vocab.char_ids.at('t'),
                                           vocab.char_ids.at('o'), vocab.word_ids.at("of"),
                                           vocab.word_ids.at("sks"), vocab.word_ids.at("dog")});
}

TEST_CASE("tokenize rejects empty prompts") {
    const Vocabulary vocab = build_vocab({"a photo of sks dog"});
    REQUIRE_THROWS_AS(tokenize("", vocab), ConfigError);
    REQUIRE_THROWS_AS(tokenize("   ", vocab), ConfigError);
}

TEST_CASE("tokenize is case-insensitive") {
    const Vocabulary vocab = build_vocab({"a photo of sks dog"});
    REQUIRE(tokenize("A Photo OF skS DOG", vocab).tokens == tokenize("a photo of sks dog", vocab).tokens);
}

TEST_CASE("a one-character typo always changes the token sequence") {
    const Vocabulary vocab = build_vocab({"a photo of sks dog"});
    const std::string prompt = "a photo of sks dog";
    const auto base = tokenize(prompt, vocab).tokens;
    for (std::size_t i = 0; i < prompt.size(); ++i) {
        if (prompt[i] == ' ') continue;
        std::string typo = prompt;
        typo[i] = prompt[i] == 'x' ? 'y' : 'x';
        REQUIRE(tokenize(typo, vocab).tokens != base);
    }
}

TEST_CASE("tokenize truncates at the maximum length") {
    const Vocabulary vocab = build_vocab({"a"});
    std::string longword(100, 'q');  // decomposes into 100 char tokens
    const TokenSequence seq = tokenize(longword, vocab);
    REQUIRE(seq.length() == kMaxSequenceLength);
}

TEST_CASE("unknown characters map to the fallback token") {
    const Vocabulary vocab = build_vocab({"a photo"});
    const TokenSequence seq = tokenize("ph-to", vocab);
    REQUIRE(seq.tokens[2] == vocab.char_ids.at(kFallbackChar));
}

TEST_CASE("vocabulary JSON round trip preserves ids") {
    const Vocabulary vocab = build_vocab({"a photo of sks dog", "a photo of dog"});
    const Vocabulary back = vocab_from_json(vocab_to_json(vocab));
    REQUIRE(back.word_ids == vocab.word_ids);
    REQUIRE(back.char_ids == vocab.char_ids);
    REQUIRE(back.size == vocab.size);
}
