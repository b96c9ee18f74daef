#pragma once

#include <cmath>
#include <cstdint>
#include <string_view>
#include <vector>

#include "aelif_lab/errors.hpp"

namespace aelif {

namespace detail {

inline std::uint64_t splitmix64(std::uint64_t& state) {
    std::uint64_t z = (state += 0x9E3779B97F4A7C15ULL);
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
    return z ^ (z >> 31);
}

inline std::uint64_t rotl(std::uint64_t x, int k) {
    return (x << k) | (x >> (64 - k));
}

// FNV-1a over a label string, for deriving child stream seeds.
inline std::uint64_t hash_label(std::string_view label) {
    std::uint64_t h = 0xCBF29CE484222325ULL;
    for (unsigned char c : label) {
        h ^= c;
        h *= 0x100000001B3ULL;
    }
    return h;
}

}  // namespace detail

// Seeded xoshiro256++ stream with hierarchical splitting.
//
// All derived quantities (uniforms, gaussians, shuffles) are computed from the
// raw 64-bit output with fixed arithmetic, so streams are bit-reproducible
// across platforms and standard library implementations. Child streams are
// derived from the parent's *seed* (not its evolving state), so the stream
// tree is stable regardless of how much of the parent has been consumed.
class Rng {
public:
    explicit Rng(std::uint64_t seed) : seed_(seed) {
        std::uint64_t sm = seed;
        for (auto& word : state_) word = detail::splitmix64(sm);
    }

    std::uint64_t seed() const { return seed_; }

    std::uint64_t next_u64() {
        const std::uint64_t result = detail::rotl(state_[0] + state_[3], 23) + state_[0];
        const std::uint64_t t = state_[1] << 17;
        state_[2] ^= state_[0];
        state_[3] ^= state_[1];
        state_[1] ^= state_[2];
        state_[0] ^= state_[3];
        state_[2] ^= t;
        state_[3] = detail::rotl(state_[3], 45);
        return result;
    }

    // Uniform double in [0, 1).
    double uniform() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

    // Uniform double in (0, 1); never returns an exact endpoint.
    double uniform_open() {
        return (static_cast<double>(next_u64() >> 11) + 0.5) * 0x1.0p-53;
    }

    // Uniform integer in [0, n). Rejection sampling keeps the draw unbiased.
    std::uint64_t uniform_below(std::uint64_t n) {
        if (n == 0) throw NumericError("uniform_below: n must be positive");
        const std::uint64_t threshold = (0 - n) % n;
        for (;;) {
            const std::uint64_t r = next_u64();
            if (r >= threshold) return r % n;
        }
    }

    // Standard normal via Box-Muller; one value per call, no caching, so a
    // stream's draw count is a simple function of what was requested.
    double normal() {
        const double u1 = uniform_open();
        const double u2 = uniform();
        return std::sqrt(-2.0 * std::log(u1)) * std::cos(6.283185307179586476925286766559 * u2);
    }

    double normal(double mean, double stddev) { return mean + stddev * normal(); }

    std::vector<double> normal_vector(std::size_t n, double mean = 0.0, double stddev = 1.0) {
        std::vector<double> out(n);
        for (auto& x : out) x = normal(mean, stddev);
        return out;
    }

    // Child stream derived from this stream's seed and a label.
    Rng child(std::string_view label) const {
        std::uint64_t mix = seed_ ^ detail::rotl(detail::hash_label(label), 17);
        return Rng(detail::splitmix64(mix));
    }

    Rng child(std::uint64_t index) const {
        std::uint64_t mix = seed_ ^ (0x9E3779B97F4A7C15ULL * (index + 0x51ED270B89A4FC75ULL));
        return Rng(detail::splitmix64(mix));
    }

    Rng child(std::string_view label, std::uint64_t index) const {
        return child(label).child(index);
    }

private:
    std::uint64_t seed_;
    std::uint64_t state_[4];
};

}  // namespace aelif
