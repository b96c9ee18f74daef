#include <set>

#include <catch2/catch_amalgamated.hpp>

#include "aelif_lab/perturb.hpp"
#include "helpers.hpp"

using namespace aelif;

TEST_CASE("char delete reproduces the observed typo") {
    EditOp op{EditKind::char_delete, 1, 1};
    REQUIRE(apply_edit("a photo of sks backpack", op) == "a poto of sks backpack");
}

TEST_CASE("word drop removes the leading article") {
    EditOp op{EditKind::word_drop, 0, 0};
    REQUIRE(apply_edit("a photo of sks dog", op) == "photo of sks dog");
}

TEST_CASE("transpose swaps adjacent characters") {
    EditOp op{EditKind::char_transpose, 4, 1};
    REQUIRE(apply_edit("a photo of sks cat", op) == "a photo of sks cta");
}

TEST_CASE("duplicate doubles a character") {
    EditOp op{EditKind::char_duplicate, 1, 3};
    REQUIRE(apply_edit("a photo of sks backpack", op) == "a photto of sks backpack");
}

TEST_CASE("substitute replaces a character") {
    EditOp op{EditKind::char_substitute, 3, 2, 'z'};
    REQUIRE(apply_edit("a photo of sks dog", op) == "a photo of skz dog");
}

TEST_CASE("apply_edit validates indices and degenerate edits") {
    REQUIRE_THROWS_AS(apply_edit("a photo of sks dog", EditOp{EditKind::char_delete, 9, 0}),
                      ConfigError);
    REQUIRE_THROWS_AS(apply_edit("a photo of sks dog", EditOp{EditKind::char_delete, 0, 5}),
                      ConfigError);
    // transposing equal chars would be a no-op
    REQUIRE_THROWS_AS(apply_edit("aa photo of sks dog", EditOp{EditKind::char_transpose, 0, 0}),
                      ConfigError);
    // the final item word may not be dropped or fully deleted
    REQUIRE_THROWS_AS(apply_edit("a photo of sks dog", EditOp{EditKind::word_drop, 4, 0}),
                      ConfigError);
    REQUIRE_THROWS_AS(apply_edit("a photo of sks d", EditOp{EditKind::char_delete, 4, 0}),
                      ConfigError);
    // substituting the same char would be a no-op
    REQUIRE_THROWS_AS(apply_edit("a photo of sks dog", EditOp{EditKind::char_substitute, 4, 0, 'd'}),
                      ConfigError);
}

TEST_CASE("deleting the only char of a non-final word drops the word") {
    EditOp op{EditKind::char_delete, 0, 0};
    REQUIRE(apply_edit("a photo of sks dog", op) == "photo of sks dog");
}

TEST_CASE("a minimal adversarial set is a single one-edit typo") {
    PerturbConfig config{1, 1, 1, 5};
    const auto prompts = gen_adversarial_set("a photo of sks dog", config, Rng(5));
    REQUIRE(prompts.size() == 1);
    REQUIRE(prompts[0] != "a photo of sks dog");
    const auto d = testutil::levenshtein(prompts[0], "a photo of sks dog");
    REQUIRE(d >= 1);
    REQUIRE(d <= 2);
}

TEST_CASE("forty distinct prompts stay within the edit-distance budget") {
    PerturbConfig config{1, 2, 40, 9};
    const std::string tmpl = "a photo of sks backpack";
    const auto prompts = gen_adversarial_set(tmpl, config, Rng(9));
    REQUIRE(prompts.size() == 40);
    std::set<std::string> unique(prompts.begin(), prompts.end());
    REQUIRE(unique.size() == 40);
    for (const auto& p : prompts) {
        REQUIRE(p != tmpl);
        const auto d = testutil::levenshtein(p, tmpl);
        REQUIRE(d >= 1);
        REQUIRE(d <= 4);
    }
}

TEST_CASE("default config respects the general distance bound") {
    PerturbConfig config;  // 1..3 edits, 40 prompts
    const std::string tmpl = "a photo of sks teapot";
    const auto prompts = gen_adversarial_set(tmpl, config, Rng(31));
    REQUIRE(prompts.size() == 40);
    for (const auto& p : prompts) {
        const auto d = testutil::levenshtein(p, tmpl);
        REQUIRE(d >= 1);
        REQUIRE(d <= 2 * config.max_edits);
    }
}

TEST_CASE("generation is reproducible per seed") {
    PerturbConfig config{1, 3, 25, 0};
    const auto a = gen_adversarial_set("a photo of sks vase", config, Rng(77));
    const auto b = gen_adversarial_set("a photo of sks vase", config, Rng(77));
    REQUIRE(a == b);
    const auto c = gen_adversarial_set("a photo of sks vase", config, Rng(78));
    REQUIRE(a != c);
}

TEST_CASE("the template must match the expected shape") {
    PerturbConfig config;
    REQUIRE_THROWS_AS(gen_adversarial_set("photo of sks dog", config, Rng(1)), ConfigError);
    REQUIRE_THROWS_AS(gen_adversarial_set("a photo of sks ", config, Rng(1)), ConfigError);
}

TEST_CASE("perturb config validation") {
    REQUIRE_THROWS_AS((PerturbConfig{0, 3, 10, 0}).validate(), ConfigError);
    REQUIRE_THROWS_AS((PerturbConfig{2, 1, 10, 0}).validate(), ConfigError);
    REQUIRE_THROWS_AS((PerturbConfig{1, 5, 10, 0}).validate(), ConfigError);
    REQUIRE_THROWS_AS((PerturbConfig{1, 3, 0, 0}).validate(), ConfigError);
}

TEST_CASE("the identifier token degrades only through ordinary edits") {
    // Over many generated prompts, any degraded identifier must still be
    // within one edit of "sks" per applied edit; spot-check a large set.
    PerturbConfig config{1, 1, 60, 3};
    const auto prompts = gen_adversarial_set("a photo of sks clock", config, Rng(3));
    for (const auto& p : prompts) {
        const auto words = split_words(p);
        // With a single edit, at most one word differs from the template.
        std::size_t changed = 0;
        const std::vector<std::string> tmpl_words{"a", "photo", "of", "sks", "clock"};
        if (words.size() == tmpl_words.size()) {
            for (std::size_t i = 0; i < words.size(); ++i)
                if (words[i] != tmpl_words[i]) {
                    ++changed;
                    REQUIRE(testutil::levenshtein(words[i], tmpl_words[i]) <= 2);
                }
            REQUIRE(changed <= 1);
        } else {
            REQUIRE(words.size() + 1 == tmpl_words.size());  // one word dropped
        }
    }
}
