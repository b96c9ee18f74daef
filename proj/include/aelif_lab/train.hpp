#pragma once

#include <cmath>
#include <cstddef>
#include <cstdint>
#include <string>
#include <vector>

#include <json.hpp>

#include "aelif_lab/aelif.hpp"
#include "aelif_lab/denoiser.hpp"
#include "aelif_lab/errors.hpp"
#include "aelif_lab/losses.hpp"
#include "aelif_lab/rng.hpp"
#include "aelif_lab/schedule.hpp"

namespace aelif {

struct PromptTemplates {
    std::string instance_prompt;
    std::string prior_prompt;

    void validate() const {
        if (instance_prompt.find("sks") == std::string::npos)
            throw ConfigError("instance prompt must contain the identifier token 'sks'");
        if (prior_prompt.empty()) throw ConfigError("prior prompt must be non-empty");
    }
};

struct TrainConfig {
    std::size_t steps = 5000;
    std::size_t batch_size = 32;
    double learning_rate = 1e-2;
    std::uint64_t seed = 0;
    double lambda = 1.0;
    AelifConfig aelif;

    void validate() const {
        if (steps < 1) throw ConfigError("train: steps must be >= 1");
        if (batch_size < 2) throw ConfigError("train: batch_size must be >= 2");
        if (!(learning_rate > 0.0)) throw ConfigError("train: learning_rate must be > 0");
        if (lambda < 0.0) throw ConfigError("train: lambda must be >= 0");
        aelif.validate();
    }
};

inline nlohmann::json train_config_to_json(const TrainConfig& c) {
    return nlohmann::json{{"steps", c.steps},
                          {"batch_size", c.batch_size},
                          {"learning_rate", c.learning_rate},
                          {"seed", c.seed},
                          {"lambda", c.lambda},
                          {"aelif", aelif_to_json(c.aelif)}};
}

inline TrainConfig train_config_from_json(const nlohmann::json& j) {
    TrainConfig c;
    if (j.contains("steps")) c.steps = j.at("steps").get<std::size_t>();
    if (j.contains("batch_size")) c.batch_size = j.at("batch_size").get<std::size_t>();
    if (j.contains("learning_rate")) c.learning_rate = j.at("learning_rate").get<double>();
    if (j.contains("seed")) c.seed = j.at("seed").get<std::uint64_t>();
    if (j.contains("lambda")) c.lambda = j.at("lambda").get<double>();
    if (j.contains("aelif")) c.aelif = aelif_from_json(j.at("aelif"));
    c.validate();
    return c;
}

struct TrainDataset {
    std::vector<Vec> instance_points;
    std::vector<Vec> prior_points;
    TokenSequence instance_tokens;
    TokenSequence prior_tokens;
};

struct TrainResult {
    DenoiserParams params;
    Vec loss_trace;  // one entry per step
};

// Plain SGD over the prior-preserving loss with half-instance, half-prior
// batches. Deterministic given config.seed; steps=0 is a no-op.
inline TrainResult train(DenoiserParams params, const TrainDataset& dataset,
                         const NoiseSchedule& sched, const TrainConfig& config) {
    if (dataset.instance_points.empty() || dataset.prior_points.empty())
        throw ConfigError("train: dataset needs instance and prior subsets");
    if (config.batch_size < 2 && config.steps > 0)
        throw ConfigError("train: batch_size must be >= 2");
    config.aelif.validate();

    const std::size_t inst_per_batch = config.batch_size / 2;
    const std::size_t prior_per_batch = config.batch_size - inst_per_batch;

    TrainResult result;
    result.loss_trace.reserve(config.steps);
    const Rng base = Rng(config.seed).child("train");

    for (std::size_t step = 0; step < config.steps; ++step) {
        Rng step_rng = base.child("step").child(step);
        Rng inst_pick = step_rng.child("inst");
        Rng prior_pick = step_rng.child("prior");

        std::vector<Example> inst_batch;
        inst_batch.reserve(inst_per_batch);
        for (std::size_t i = 0; i < inst_per_batch; ++i) {
            const auto idx = inst_pick.uniform_below(dataset.instance_points.size());
            inst_batch.push_back({dataset.instance_points[idx], dataset.instance_tokens});
        }
        std::vector<Example> prior_batch;
        prior_batch.reserve(prior_per_batch);
        for (std::size_t i = 0; i < prior_per_batch; ++i) {
            const auto idx = prior_pick.uniform_below(dataset.prior_points.size());
            prior_batch.push_back({dataset.prior_points[idx], dataset.prior_tokens});
        }

        LossResult lr = dreambooth_loss(params, inst_batch, prior_batch, config.lambda, sched,
                                        config.aelif, step_rng.child("loss"));
        if (!std::isfinite(lr.loss))
            throw NumericError("training diverged (non-finite loss) at step " + std::to_string(step));

        visit_params_pair(params, lr.grads,
                          [&](double& x, double& g) { x -= config.learning_rate * g; });
        result.loss_trace.push_back(lr.loss);
    }
    result.params = std::move(params);
    return result;
}

}  // namespace aelif
