#include <cmath>

#include <catch2/catch_amalgamated.hpp>

#include "aelif_lab/rng.hpp"
#include "aelif_lab/winrate.hpp"

using namespace aelif;

TEST_CASE("total win scores 100") {
    REQUIRE(win_rate({3.0, 2.0, 5.0}, {1.0, 1.0, 1.0}) == 100.0);
}

TEST_CASE("ties count as losses") {
    REQUIRE(win_rate({1.0, 2.0, 3.0}, {1.0, 2.0, 3.0}) == 0.0);
}

TEST_CASE("one win out of three") {
    REQUIRE(win_rate({3.0, 1.0, 2.0}, {2.0, 2.0, 2.0}) == Catch::Approx(100.0 / 3.0));
}

TEST_CASE("win rate rejects mismatched or empty lists") {
    REQUIRE_THROWS_AS(win_rate({1.0}, {1.0, 2.0}), ConfigError);
    REQUIRE_THROWS_AS(win_rate({}, {}), ConfigError);
}

TEST_CASE("win rate is invariant under strictly increasing transforms") {
    Rng rng(9);
    Vec orig, aug;
    for (int i = 0; i < 50; ++i) {
        orig.push_back(rng.uniform() * 10.0);
        aug.push_back(rng.uniform() * 10.0);
    }
    const double base = win_rate(orig, aug);
    Vec orig_exp = orig, aug_exp = aug;
    for (double& x : orig_exp) x = std::exp(x);
    for (double& x : aug_exp) x = std::exp(x);
    REQUIRE(win_rate(orig_exp, aug_exp) == base);
    Vec orig_aff = orig, aug_aff = aug;
    for (double& x : orig_aff) x = 3.0 * x + 1.0;
    for (double& x : aug_aff) x = 3.0 * x + 1.0;
    REQUIRE(win_rate(orig_aff, aug_aff) == base);
}

TEST_CASE("best_of_aug picks the smaller distance") {
    REQUIRE(best_of_aug(0.0201, 0.0318) == 0.0201);
    REQUIRE(best_of_aug(0.5, 0.5) == 0.5);
    REQUIRE(best_of_aug(1.0, 2.0) == best_of_aug(2.0, 1.0));
}

TEST_CASE("win rate row carries the category") {
    const WinRateRow row = win_rate_row("backpack", {3.0, 1.0}, {1.0, 3.0});
    REQUIRE(row.category == "backpack");
    REQUIRE(row.proportion == 50.0);
}
