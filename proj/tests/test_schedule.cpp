#include <cmath>

#include <catch2/catch_amalgamated.hpp>

#include "aelif_lab/rng.hpp"
#include "aelif_lab/schedule.hpp"

using namespace aelif;

TEST_CASE("single-step schedule") {
    const NoiseSchedule s = make_schedule(1, 0.5, 0.5);
    REQUIRE(s.alpha_bar == Vec{0.5});
}

TEST_CASE("two-step schedule accumulates the product") {
    const NoiseSchedule s = make_schedule(2, 0.1, 0.2);
    REQUIRE(s.beta[0] == Catch::Approx(0.1));
    REQUIRE(s.beta[1] == Catch::Approx(0.2));
    REQUIRE(s.alpha_bar[0] == Catch::Approx(0.9));
    REQUIRE(s.alpha_bar[1] == Catch::Approx(0.72));
}

TEST_CASE("default schedule decays below 0.05 and is strictly decreasing") {
    const NoiseSchedule s = make_schedule();
    REQUIRE(s.timesteps == 100);
    REQUIRE(s.alpha_bar[99] < 0.05);
    for (std::size_t t = 1; t < s.timesteps; ++t) {
        REQUIRE(s.alpha_bar[t] < s.alpha_bar[t - 1]);
        REQUIRE(s.beta[t] >= s.beta[t - 1]);
        REQUIRE(s.beta[t] > 0.0);
        REQUIRE(s.alpha_bar[t] > 0.0);
    }
    // alpha_bar[t] = alpha_bar[t-1] * (1 - beta[t])
    for (std::size_t t = 1; t < s.timesteps; ++t)
        REQUIRE(s.alpha_bar[t] == Catch::Approx(s.alpha_bar[t - 1] * (1.0 - s.beta[t])));
}

TEST_CASE("make_schedule rejects invalid ranges") {
    REQUIRE_THROWS_AS(make_schedule(0, 0.1, 0.2), ConfigError);
    REQUIRE_THROWS_AS(make_schedule(10, 0.0, 0.2), ConfigError);
    REQUIRE_THROWS_AS(make_schedule(10, 0.3, 0.2), ConfigError);
    REQUIRE_THROWS_AS(make_schedule(10, 0.1, 1.0), ConfigError);
}

TEST_CASE("forward_noise with full signal retention returns z0") {
    NoiseSchedule s;
    s.timesteps = 1;
    s.beta = {0.0};
    s.alpha_bar = {1.0};
    const Vec z0{1.0, -2.0, 3.0};
    const Vec eps{9.0, 9.0, 9.0};
    REQUIRE(forward_noise(z0, 0, eps, s) == z0);
}

TEST_CASE("forward_noise with zero signal scales the noise") {
    const NoiseSchedule s = make_schedule(10, 0.1, 0.3);
    const Vec z0(4, 0.0);
    const Vec eps{1.0, 2.0, -1.0, 0.5};
    const std::size_t t = 7;
    const Vec z = forward_noise(z0, t, eps, s);
    const double scale = std::sqrt(1.0 - s.alpha_bar[t]);
    for (std::size_t i = 0; i < z.size(); ++i) REQUIRE(z[i] == Catch::Approx(scale * eps[i]));
}

TEST_CASE("forward_noise rejects out-of-range timesteps") {
    const NoiseSchedule s = make_schedule(10, 0.1, 0.3);
    REQUIRE_THROWS_AS(forward_noise(Vec(4, 0.0), 10, Vec(4, 0.0), s), ConfigError);
}

TEST_CASE("forward_noise preserves the variance-preserving second moment") {
    // E|z_t|^2 = alpha_bar |z0|^2 + (1 - alpha_bar) * D
    const NoiseSchedule s = make_schedule();
    const std::size_t t = 40;
    Rng z0_rng(123);
    const Vec z0 = z0_rng.normal_vector(kLatentDim);
    const double z0_sq = dot(z0, z0);

    Rng eps_rng(456);
    double total = 0.0;
    const int draws = 10000;
    for (int i = 0; i < draws; ++i) {
        const Vec eps = eps_rng.normal_vector(kLatentDim);
        const Vec z = forward_noise(z0, t, eps, s);
        total += dot(z, z);
    }
    const double expected =
        s.alpha_bar[t] * z0_sq + (1.0 - s.alpha_bar[t]) * static_cast<double>(kLatentDim);
    REQUIRE(std::abs(total / draws - expected) / expected < 0.03);
}
