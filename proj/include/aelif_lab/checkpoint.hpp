#pragma once

#include <fstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "aelif_lab/denoiser.hpp"
#include "aelif_lab/errors.hpp"
#include "aelif_lab/schedule.hpp"
#include "aelif_lab/train.hpp"
#include "aelif_lab/vocabulary.hpp"

namespace aelif {

struct Checkpoint {
    TrainConfig config;
    PromptTemplates prompts;
    Vocabulary vocabulary;
    DenoiserParams params;
    NoiseSchedule schedule;
    std::uint64_t seed = 0;
};

namespace detail {

inline nlohmann::json matrix_to_json(const std::vector<Vec>& m) {
    nlohmann::json rows = nlohmann::json::array();
    for (const Vec& row : m) rows.push_back(row);
    return rows;
}

inline std::vector<Vec> matrix_from_json(const nlohmann::json& j) {
    std::vector<Vec> m;
    m.reserve(j.size());
    for (const auto& row : j) m.push_back(row.get<Vec>());
    return m;
}

}  // namespace detail

inline nlohmann::json checkpoint_to_json(const Checkpoint& ckpt) {
    nlohmann::json j;
    j["config"] = train_config_to_json(ckpt.config);
    j["prompts"] = {{"instance", ckpt.prompts.instance_prompt}, {"prior", ckpt.prompts.prior_prompt}};
    j["vocabulary"] = vocab_to_json(ckpt.vocabulary);
    j["encoder"] = {{"embedding_table", detail::matrix_to_json(ckpt.params.encoder.embedding_table)},
                    {"positional_table", detail::matrix_to_json(ckpt.params.encoder.positional_table)}};
    j["denoiser"] = {{"w1", detail::matrix_to_json(ckpt.params.mlp.w1)}, {"b1", ckpt.params.mlp.b1},
                     {"w2", detail::matrix_to_json(ckpt.params.mlp.w2)}, {"b2", ckpt.params.mlp.b2},
                     {"w3", detail::matrix_to_json(ckpt.params.mlp.w3)}, {"b3", ckpt.params.mlp.b3}};
    j["schedule"] = {{"timesteps", ckpt.schedule.timesteps},
                     {"beta_min", ckpt.schedule.beta_min},
                     {"beta_max", ckpt.schedule.beta_max}};
    j["seed"] = ckpt.seed;
    return j;
}

inline Checkpoint checkpoint_from_json(const nlohmann::json& j) {
    Checkpoint ckpt;
    ckpt.config = train_config_from_json(j.at("config"));
    ckpt.prompts.instance_prompt = j.at("prompts").at("instance").get<std::string>();
    ckpt.prompts.prior_prompt = j.at("prompts").at("prior").get<std::string>();
    ckpt.prompts.validate();
    ckpt.vocabulary = vocab_from_json(j.at("vocabulary"));
    ckpt.params.encoder.embedding_table = detail::matrix_from_json(j.at("encoder").at("embedding_table"));
    ckpt.params.encoder.positional_table = detail::matrix_from_json(j.at("encoder").at("positional_table"));
    const auto& d = j.at("denoiser");
    ckpt.params.mlp.w1 = detail::matrix_from_json(d.at("w1"));
    ckpt.params.mlp.b1 = d.at("b1").get<Vec>();
    ckpt.params.mlp.w2 = detail::matrix_from_json(d.at("w2"));
    ckpt.params.mlp.b2 = d.at("b2").get<Vec>();
    ckpt.params.mlp.w3 = detail::matrix_from_json(d.at("w3"));
    ckpt.params.mlp.b3 = d.at("b3").get<Vec>();
    const auto& s = j.at("schedule");
    ckpt.schedule = make_schedule(s.at("timesteps").get<std::size_t>(),
                                  s.at("beta_min").get<double>(), s.at("beta_max").get<double>());
    ckpt.seed = j.at("seed").get<std::uint64_t>();
    return ckpt;
}

inline void save_checkpoint(const Checkpoint& ckpt, const std::string& path) {
    std::ofstream out(path);
    if (!out) throw ConfigError("cannot open checkpoint file for writing: " + path);
    out << checkpoint_to_json(ckpt).dump(2) << '\n';
    if (!out) throw ConfigError("failed writing checkpoint: " + path);
}

inline Checkpoint load_checkpoint(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open checkpoint file: " + path);
    nlohmann::json j;
    try {
        in >> j;
    } catch (const nlohmann::json::exception& e) {
        throw ConfigError("invalid checkpoint JSON in " + path + ": " + e.what());
    }
    return checkpoint_from_json(j);
}

inline void save_loss_trace(const Vec& trace, const std::string& path) {
    std::ofstream out(path);
    if (!out) throw ConfigError("cannot open loss trace file for writing: " + path);
    out << "step,loss\n";
    for (std::size_t i = 0; i < trace.size(); ++i)
        out << i << ',' << nlohmann::json(trace[i]).dump() << '\n';
    if (!out) throw ConfigError("failed writing loss trace: " + path);
}

}  // namespace aelif
