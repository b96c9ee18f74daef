#pragma once

#include <algorithm>
#include <atomic>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <map>
#include <optional>
#include <string>
#include <thread>
#include <vector>

#include <json.hpp>

#include "aelif_lab/dataset.hpp"
#include "aelif_lab/denoiser.hpp"
#include "aelif_lab/errors.hpp"
#include "aelif_lab/features.hpp"
#include "aelif_lab/perturb.hpp"
#include "aelif_lab/report.hpp"
#include "aelif_lab/rng.hpp"
#include "aelif_lab/sampler.hpp"
#include "aelif_lab/schedule.hpp"
#include "aelif_lab/train.hpp"
#include "aelif_lab/wasserstein.hpp"
#include "aelif_lab/winrate.hpp"

namespace aelif {

struct RunConfig {
    std::uint64_t master_seed = 42;
    std::vector<CategorySpec> categories;
    TrainConfig train;
    std::vector<AelifMode> variants = {AelifMode::none, AelifMode::mask, AelifMode::noise_conv};
    PerturbConfig perturb;
    std::string fixture_dir;  // when set, robustness prompts are read from files
    std::size_t ref_index = 0;
    bool gaussian_w2 = false;
    std::size_t timesteps = kDefaultTimesteps;
    double beta_min = kDefaultBetaMin;
    double beta_max = kDefaultBetaMax;

    void validate() const {
        if (categories.empty()) throw ConfigError("run config: needs at least one category");
        for (const auto& c : categories) c.validate();
        train.validate();
        perturb.validate();
        const bool has_none = std::find(variants.begin(), variants.end(), AelifMode::none) != variants.end();
        const bool has_aug = std::any_of(variants.begin(), variants.end(),
                                         [](AelifMode m) { return m != AelifMode::none; });
        if (!has_none || !has_aug)
            throw ConfigError("run config: variants need 'none' plus at least one augmented");
    }
};

inline RunConfig default_run_config() {
    RunConfig config;
    for (const auto& info : kDefaultCategories) config.categories.push_back({info.name, 0, 4, 200});
    return config;
}

inline nlohmann::json run_config_to_json(const RunConfig& c) {
    nlohmann::json cats = nlohmann::json::array();
    for (const auto& cat : c.categories)
        cats.push_back({{"name", cat.name},
                        {"cluster_seed", cat.cluster_seed},
                        {"instance_count", cat.instance_count},
                        {"prior_count", cat.prior_count}});
    nlohmann::json variants = nlohmann::json::array();
    for (AelifMode m : c.variants) variants.push_back(to_string(m));
    return nlohmann::json{{"master_seed", c.master_seed},
                          {"categories", cats},
                          {"train", train_config_to_json(c.train)},
                          {"variants", variants},
                          {"perturb",
                           {{"min_edits", c.perturb.min_edits},
                            {"max_edits", c.perturb.max_edits},
                            {"count", c.perturb.count},
                            {"seed", c.perturb.seed}}},
                          {"fixture_dir", c.fixture_dir},
                          {"ref_index", c.ref_index},
                          {"gaussian_w2", c.gaussian_w2},
                          {"schedule",
                           {{"timesteps", c.timesteps},
                            {"beta_min", c.beta_min},
                            {"beta_max", c.beta_max}}}};
}

inline RunConfig run_config_from_json(const nlohmann::json& j) {
    RunConfig c = default_run_config();
    if (j.contains("master_seed")) c.master_seed = j.at("master_seed").get<std::uint64_t>();
    if (j.contains("categories")) {
        c.categories.clear();
        for (const auto& cat : j.at("categories")) {
            CategorySpec spec;
            if (cat.is_string()) {
                spec.name = cat.get<std::string>();
            } else {
                spec.name = cat.at("name").get<std::string>();
                if (cat.contains("cluster_seed")) spec.cluster_seed = cat.at("cluster_seed").get<std::uint64_t>();
                if (cat.contains("instance_count")) spec.instance_count = cat.at("instance_count").get<std::size_t>();
                if (cat.contains("prior_count")) spec.prior_count = cat.at("prior_count").get<std::size_t>();
            }
            c.categories.push_back(std::move(spec));
        }
    }
    if (j.contains("train")) c.train = train_config_from_json(j.at("train"));
    if (j.contains("variants")) {
        c.variants.clear();
        for (const auto& v : j.at("variants"))
            c.variants.push_back(aelif_mode_from_string(v.get<std::string>()));
    }
    if (j.contains("perturb")) {
        const auto& p = j.at("perturb");
        if (p.contains("min_edits")) c.perturb.min_edits = p.at("min_edits").get<std::size_t>();
        if (p.contains("max_edits")) c.perturb.max_edits = p.at("max_edits").get<std::size_t>();
        if (p.contains("count")) c.perturb.count = p.at("count").get<std::size_t>();
        if (p.contains("seed")) c.perturb.seed = p.at("seed").get<std::uint64_t>();
    }
    if (j.contains("fixture_dir")) c.fixture_dir = j.at("fixture_dir").get<std::string>();
    if (j.contains("ref_index")) c.ref_index = j.at("ref_index").get<std::size_t>();
    if (j.contains("gaussian_w2")) c.gaussian_w2 = j.at("gaussian_w2").get<bool>();
    if (j.contains("schedule")) {
        const auto& s = j.at("schedule");
        if (s.contains("timesteps")) c.timesteps = s.at("timesteps").get<std::size_t>();
        if (s.contains("beta_min")) c.beta_min = s.at("beta_min").get<double>();
        if (s.contains("beta_max")) c.beta_max = s.at("beta_max").get<double>();
    }
    c.validate();
    return c;
}

inline RunConfig load_run_config(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open config: " + path);
    nlohmann::json j;
    try {
        in >> j;
    } catch (const nlohmann::json::exception& e) {
        throw ConfigError("invalid config JSON in " + path + ": " + e.what());
    }
    return run_config_from_json(j);
}

inline std::vector<std::string> load_fixture_prompts(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open fixture prompt file: " + path);
    std::vector<std::string> prompts;
    std::string line;
    while (std::getline(in, line)) {
        while (!line.empty() && (line.back() == '\r' || line.back() == '\n')) line.pop_back();
        if (!line.empty()) prompts.push_back(line);
    }
    if (prompts.empty()) throw ConfigError("fixture prompt file is empty: " + path);
    return prompts;
}

// Everything trained for one category: one model per variant, sharing init,
// batch order and noise draws so they differ only in the augmentation.
struct CategoryModels {
    CategorySpec spec;
    PromptTemplates prompts;
    Vocabulary vocab;
    TokenSequence instance_tokens;
    TokenSequence prior_tokens;
    SynthDataset data;
    std::map<AelifMode, DenoiserParams> models;
};

inline CategoryModels train_category(const RunConfig& config, const CategorySpec& spec,
                                     const NoiseSchedule& sched) {
    CategoryModels cm;
    cm.spec = spec;
    const std::string item = category_item(spec.name);
    cm.prompts.instance_prompt = "a photo of sks " + item;
    cm.prompts.prior_prompt = "a photo of " + item;
    cm.prompts.validate();

    cm.vocab = build_vocab({cm.prompts.instance_prompt, cm.prompts.prior_prompt});
    cm.instance_tokens = tokenize(cm.prompts.instance_prompt, cm.vocab);
    cm.prior_tokens = tokenize(cm.prompts.prior_prompt, cm.vocab);
    cm.data = synth_dataset(spec, config.master_seed);

    const std::uint64_t train_seed = Rng(config.master_seed).child("train").child(spec.name).seed();
    const DenoiserParams init =
        init_denoiser(static_cast<std::size_t>(cm.vocab.size), Rng(train_seed).child("init"));

    TrainDataset tds{cm.data.instance_points, cm.data.prior_points, cm.instance_tokens,
                     cm.prior_tokens};
    for (AelifMode mode : config.variants) {
        TrainConfig tc = config.train;
        tc.seed = train_seed;
        tc.aelif.mode = mode;
        cm.models[mode] = train(init, tds, sched, tc).params;
    }
    return cm;
}

namespace detail {

inline std::size_t thread_budget(std::size_t jobs) {
    std::size_t threads = std::max<unsigned>(1, std::thread::hardware_concurrency());
    if (const char* env = std::getenv("AELIF_LAB_THREADS")) {
        char* end = nullptr;
        const unsigned long v = std::strtoul(env, &end, 10);
        if (end == env || v == 0) throw ConfigError("AELIF_LAB_THREADS must be a positive integer");
        threads = std::min<std::size_t>(threads, v);
    }
    return std::min(threads, std::max<std::size_t>(1, jobs));
}

// Runs fn(i) for i in [0, jobs), possibly in parallel; results land in index
// order and the first failure (by index) is rethrown with category context.
template <typename Fn>
void for_each_index(std::size_t jobs, Fn&& fn) {
    const std::size_t threads = thread_budget(jobs);
    std::vector<std::exception_ptr> errors(jobs);
    if (threads <= 1) {
        for (std::size_t i = 0; i < jobs; ++i) {
            try {
                fn(i);
            } catch (...) {
                errors[i] = std::current_exception();
            }
        }
    } else {
        std::atomic<std::size_t> next{0};
        auto worker = [&] {
            for (;;) {
                const std::size_t i = next.fetch_add(1);
                if (i >= jobs) return;
                try {
                    fn(i);
                } catch (...) {
                    errors[i] = std::current_exception();
                }
            }
        };
        std::vector<std::thread> pool;
        for (std::size_t k = 0; k < threads; ++k) pool.emplace_back(worker);
        for (auto& t : pool) t.join();
    }
    for (auto& err : errors)
        if (err) std::rethrow_exception(err);
}

inline void require_variants(const RunConfig& config) {
    for (AelifMode m : {AelifMode::none, AelifMode::mask, AelifMode::noise_conv})
        if (std::find(config.variants.begin(), config.variants.end(), m) == config.variants.end())
            throw ConfigError("evaluation requires the none, mask and noise_conv variants");
}

template <typename E>
[[noreturn]] void rethrow_with_category(const std::string& category, const E& e) {
    throw E("category '" + category + "': " + e.what());
}

}  // namespace detail

// Quality pipeline: train every variant, regenerate the instance set with
// shared seeds, and measure the set-level W2 of each variant's outputs
// against the training instance features.
inline EvalReport run_augmentation_eval(const RunConfig& config) {
    config.validate();
    detail::require_variants(config);
    const NoiseSchedule sched = make_schedule(config.timesteps, config.beta_min, config.beta_max);
    const FeatureExtractor fe(kLatentDim);
    const Rng master(config.master_seed);

    std::vector<CategorySpec> cats = config.categories;
    std::sort(cats.begin(), cats.end(),
              [](const CategorySpec& a, const CategorySpec& b) { return a.name < b.name; });

    std::vector<AugEvalRow> rows(cats.size());
    detail::for_each_index(cats.size(), [&](std::size_t ci) {
        const CategorySpec& spec = cats[ci];
        try {
            const CategoryModels cm = train_category(config, spec, sched);

            EmbeddingSet train_set{{}, SetLabel::train};
            for (const Vec& p : cm.data.instance_points) train_set.vectors.push_back(fe.extract(p));

            const AelifConfig no_inference_aug;
            std::map<AelifMode, double> dist;
            for (AelifMode mode : config.variants) {
                EmbeddingSet generated{{}, mode == AelifMode::none ? SetLabel::original
                                                                   : SetLabel::augmented};
                for (std::size_t i = 0; i < spec.instance_count; ++i) {
                    const Rng srng = master.child("sample").child(spec.name).child(i);
                    const Vec z = sample(cm.models.at(mode), cm.instance_tokens, sched, srng,
                                         no_inference_aug);
                    generated.vectors.push_back(fe.extract(z));
                }
                dist[mode] = config.gaussian_w2 ? w2_set_gaussian_diag(generated, train_set)
                                                : w2_set(generated, train_set);
            }
            rows[ci] = AugEvalRow{spec.name, dist.at(AelifMode::noise_conv),
                                  dist.at(AelifMode::mask), dist.at(AelifMode::none)};
        } catch (const NumericError& e) {
            detail::rethrow_with_category(spec.name, e);
        } catch (const ConfigError& e) {
            detail::rethrow_with_category(spec.name, e);
        }
    });

    EvalReport report;
    report.config = run_config_to_json(config);
    report.aug_rows = std::move(rows);
    return report;
}

// Robustness pipeline: one shared adversarial prompt set per category, one
// sample per prompt per variant under a shared per-prompt seed, point-level
// W2 to the fixed reference instance feature, then per-category win rates.
inline EvalReport run_robustness_eval(const RunConfig& config) {
    config.validate();
    detail::require_variants(config);
    const NoiseSchedule sched = make_schedule(config.timesteps, config.beta_min, config.beta_max);
    const FeatureExtractor fe(kLatentDim);
    const Rng master(config.master_seed);

    std::vector<CategorySpec> cats = config.categories;
    std::sort(cats.begin(), cats.end(),
              [](const CategorySpec& a, const CategorySpec& b) { return a.name < b.name; });

    std::vector<RobustCategoryResult> results(cats.size());
    detail::for_each_index(cats.size(), [&](std::size_t ci) {
        const CategorySpec& spec = cats[ci];
        try {
            const CategoryModels cm = train_category(config, spec, sched);

            std::vector<std::string> prompts;
            if (!config.fixture_dir.empty()) {
                const auto path = std::filesystem::path(config.fixture_dir) / (spec.name + ".txt");
                prompts = load_fixture_prompts(path.string());
            } else {
                prompts = gen_adversarial_set(cm.prompts.instance_prompt, config.perturb,
                                              master.child("perturb").child(spec.name));
            }

            if (config.ref_index >= cm.data.instance_points.size())
                throw ConfigError("ref_index out of range for instance set");
            const Vec ref_feature = fe.extract(cm.data.instance_points[config.ref_index]);

            const AelifConfig no_inference_aug;
            RobustCategoryResult result;
            result.category = spec.name;
            Vec d_orig, d_mask, d_noise, d_best;
            for (std::size_t j = 0; j < prompts.size(); ++j) {
                const TokenSequence tokens = tokenize(prompts[j], cm.vocab);
                const Rng prompt_rng = master.child("sample").child(spec.name).child("prompt").child(j);
                std::map<AelifMode, double> dist;
                for (AelifMode mode : config.variants) {
                    const Vec z = sample(cm.models.at(mode), tokens, sched, prompt_rng,
                                         no_inference_aug);
                    dist[mode] = w2_point(fe.extract(z), ref_feature);
                }
                result.rows.push_back(RobustPromptRow{prompts[j], dist.at(AelifMode::none),
                                                      dist.at(AelifMode::mask),
                                                      dist.at(AelifMode::noise_conv)});
                d_orig.push_back(dist.at(AelifMode::none));
                d_mask.push_back(dist.at(AelifMode::mask));
                d_noise.push_back(dist.at(AelifMode::noise_conv));
                d_best.push_back(best_of_aug(dist.at(AelifMode::mask), dist.at(AelifMode::noise_conv)));
            }
            result.win_rate_best = win_rate(d_orig, d_best);
            result.win_rate_mask = win_rate(d_orig, d_mask);
            result.win_rate_noise = win_rate(d_orig, d_noise);
            results[ci] = std::move(result);
        } catch (const NumericError& e) {
            detail::rethrow_with_category(spec.name, e);
        } catch (const ConfigError& e) {
            detail::rethrow_with_category(spec.name, e);
        }
    });

    EvalReport report;
    report.config = run_config_to_json(config);
    report.robust = std::move(results);
    recompute_means(report);
    return report;
}

}  // namespace aelif
