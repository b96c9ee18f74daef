#pragma once

#include <array>
#include <cstddef>
#include <cstdint>
#include <string>
#include <vector>

#include "aelif_lab/errors.hpp"
#include "aelif_lab/rng.hpp"
#include "aelif_lab/schedule.hpp"
#include "aelif_lab/vec.hpp"

namespace aelif {

// Built-in category list; `item` is the cleaned noun used in prompts.
struct CategoryInfo {
    const char* name;
    const char* item;
};

inline constexpr std::array<CategoryInfo, 11> kDefaultCategories{{
    {"backpack", "backpack"},
    {"backpack_dog", "backpack"},
    {"candle", "candle"},
    {"cat", "cat"},
    {"clock", "clock"},
    {"colorful_sneaker", "sneaker"},
    {"dog2", "dog"},
    {"dog3", "dog"},
    {"dog_data", "dog"},
    {"teapot", "teapot"},
    {"vase", "vase"},
}};

inline std::string category_item(const std::string& name) {
    for (const auto& info : kDefaultCategories)
        if (name == info.name) return info.item;
    // User-supplied category: strip trailing digits and a "_data" suffix,
    // then keep the last underscore-separated word.
    std::string s = name;
    while (!s.empty() && s.back() >= '0' && s.back() <= '9') s.pop_back();
    const std::string suffix = "_data";
    if (s.size() > suffix.size() && s.compare(s.size() - suffix.size(), suffix.size(), suffix) == 0)
        s.erase(s.size() - suffix.size());
    const auto us = s.rfind('_');
    if (us != std::string::npos) s = s.substr(us + 1);
    if (s.empty()) throw ConfigError("category name has no usable item word: " + name);
    return s;
}

struct CategorySpec {
    std::string name;
    std::uint64_t cluster_seed = 0;
    std::size_t instance_count = 4;
    std::size_t prior_count = 200;

    void validate() const {
        if (name.empty()) throw ConfigError("category: name must be non-empty");
        if (instance_count < 1 || prior_count < 1)
            throw ConfigError("category: counts must be >= 1");
    }
};

inline constexpr double kPriorStddev = 0.5;
inline constexpr double kInstanceStddev = 0.05;
inline constexpr double kCategoryCenterStddev = 2.0;

struct SynthDataset {
    Vec category_center;
    Vec instance_center;  // category center + unit-norm offset
    std::vector<Vec> instance_points;
    std::vector<Vec> prior_points;
};

// Gaussian cluster per category: prior points spread around the class center,
// instance points tight around a sub-center offset by a unit vector.
inline SynthDataset synth_dataset(const CategorySpec& spec, std::uint64_t master_seed,
                                  std::size_t latent_dim = kLatentDim) {
    spec.validate();
    Rng rng = Rng(master_seed).child("data").child(spec.name).child(spec.cluster_seed);

    SynthDataset ds;
    ds.category_center = rng.child("center").normal_vector(latent_dim, 0.0, kCategoryCenterStddev);

    Vec offset = rng.child("offset").normal_vector(latent_dim);
    const double n = norm2(offset);
    for (double& x : offset) x /= n;
    ds.instance_center = ds.category_center;
    for (std::size_t k = 0; k < latent_dim; ++k) ds.instance_center[k] += offset[k];

    Rng inst_rng = rng.child("instance");
    ds.instance_points.reserve(spec.instance_count);
    for (std::size_t i = 0; i < spec.instance_count; ++i) {
        Vec p = ds.instance_center;
        for (double& x : p) x += inst_rng.normal(0.0, kInstanceStddev);
        ds.instance_points.push_back(std::move(p));
    }

    Rng prior_rng = rng.child("prior");
    ds.prior_points.reserve(spec.prior_count);
    for (std::size_t i = 0; i < spec.prior_count; ++i) {
        Vec p = ds.category_center;
        for (double& x : p) x += prior_rng.normal(0.0, kPriorStddev);
        ds.prior_points.push_back(std::move(p));
    }
    return ds;
}

}  // namespace aelif
