#pragma once

#include <filesystem>
#include <fstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "aelif_lab/errors.hpp"

namespace aelif {

// One row of the augmentation-quality table (column order mirrors the CSV).
struct AugEvalRow {
    std::string category;
    double noise_conv_vs_train = 0.0;
    double mask_vs_train = 0.0;
    double orig_vs_train = 0.0;

    friend bool operator==(const AugEvalRow&, const AugEvalRow&) = default;
};

struct RobustPromptRow {
    std::string prompt;
    double orig = 0.0;
    double mask = 0.0;
    double noise = 0.0;

    friend bool operator==(const RobustPromptRow&, const RobustPromptRow&) = default;
};

struct RobustCategoryResult {
    std::string category;
    std::vector<RobustPromptRow> rows;
    double win_rate_best = 0.0;
    double win_rate_mask = 0.0;
    double win_rate_noise = 0.0;

    friend bool operator==(const RobustCategoryResult&, const RobustCategoryResult&) = default;
};

struct EvalReport {
    nlohmann::json config = nlohmann::json::object();
    std::vector<AugEvalRow> aug_rows;
    std::vector<RobustCategoryResult> robust;
    double mean_win_rate_best = 0.0;
    double mean_win_rate_mask = 0.0;
    double mean_win_rate_noise = 0.0;

    bool empty() const { return aug_rows.empty() && robust.empty(); }

    friend bool operator==(const EvalReport&, const EvalReport&) = default;
};

namespace detail {

// Shortest round-trip decimal representation, identical to the JSON encoding.
inline std::string fmt(double x) { return nlohmann::json(x).dump(); }

inline std::ofstream open_out(const std::filesystem::path& path) {
    std::ofstream out(path);
    if (!out) throw ConfigError("cannot open for writing: " + path.string());
    return out;
}

}  // namespace detail

inline void recompute_means(EvalReport& report) {
    if (report.robust.empty()) {
        report.mean_win_rate_best = report.mean_win_rate_mask = report.mean_win_rate_noise = 0.0;
        return;
    }
    double best = 0.0, mask = 0.0, noise = 0.0;
    for (const auto& cat : report.robust) {
        best += cat.win_rate_best;
        mask += cat.win_rate_mask;
        noise += cat.win_rate_noise;
    }
    const double n = static_cast<double>(report.robust.size());
    report.mean_win_rate_best = best / n;
    report.mean_win_rate_mask = mask / n;
    report.mean_win_rate_noise = noise / n;
}

inline nlohmann::json report_to_json(const EvalReport& report) {
    nlohmann::json j;
    j["config"] = report.config;
    nlohmann::json aug = nlohmann::json::array();
    for (const auto& row : report.aug_rows)
        aug.push_back({{"item", row.category},
                       {"noise_conv_vs_train", row.noise_conv_vs_train},
                       {"mask_vs_train", row.mask_vs_train},
                       {"orig_vs_train", row.orig_vs_train}});
    j["aug"] = aug;
    nlohmann::json robust = nlohmann::json::array();
    for (const auto& cat : report.robust) {
        nlohmann::json rows = nlohmann::json::array();
        for (const auto& row : cat.rows)
            rows.push_back({{"prompt", row.prompt},
                            {"orig", row.orig},
                            {"mask", row.mask},
                            {"noise", row.noise}});
        robust.push_back({{"category", cat.category},
                          {"rows", rows},
                          {"win_rate", {{"best", cat.win_rate_best},
                                        {"mask", cat.win_rate_mask},
                                        {"noise", cat.win_rate_noise}}}});
    }
    j["robust"] = robust;
    j["summary"] = {{"mean_win_rate_best", report.mean_win_rate_best},
                    {"mean_win_rate_mask", report.mean_win_rate_mask},
                    {"mean_win_rate_noise", report.mean_win_rate_noise}};
    return j;
}

inline EvalReport report_from_json(const nlohmann::json& j) {
    EvalReport report;
    report.config = j.at("config");
    for (const auto& row : j.at("aug"))
        report.aug_rows.push_back({row.at("item").get<std::string>(),
                                   row.at("noise_conv_vs_train").get<double>(),
                                   row.at("mask_vs_train").get<double>(),
                                   row.at("orig_vs_train").get<double>()});
    for (const auto& cat : j.at("robust")) {
        RobustCategoryResult r;
        r.category = cat.at("category").get<std::string>();
        for (const auto& row : cat.at("rows"))
            r.rows.push_back({row.at("prompt").get<std::string>(), row.at("orig").get<double>(),
                              row.at("mask").get<double>(), row.at("noise").get<double>()});
        r.win_rate_best = cat.at("win_rate").at("best").get<double>();
        r.win_rate_mask = cat.at("win_rate").at("mask").get<double>();
        r.win_rate_noise = cat.at("win_rate").at("noise").get<double>();
        report.robust.push_back(std::move(r));
    }
    report.mean_win_rate_best = j.at("summary").at("mean_win_rate_best").get<double>();
    report.mean_win_rate_mask = j.at("summary").at("mean_win_rate_mask").get<double>();
    report.mean_win_rate_noise = j.at("summary").at("mean_win_rate_noise").get<double>();
    return report;
}

// Writes report.json plus the CSV tables into out_dir.
inline std::vector<std::string> emit_report(const EvalReport& report, const std::string& out_dir) {
    if (report.empty()) throw ConfigError("EmptyReport: nothing to emit");
    namespace fs = std::filesystem;
    fs::create_directories(out_dir);
    std::vector<std::string> written;

    {
        auto out = detail::open_out(fs::path(out_dir) / "report.json");
        out << report_to_json(report).dump(2) << '\n';
        written.push_back((fs::path(out_dir) / "report.json").string());
    }

    if (!report.aug_rows.empty()) {
        auto out = detail::open_out(fs::path(out_dir) / "aug_distances.csv");
        out << "item,noise_conv_vs_train,mask_vs_train,orig_vs_train\n";
        for (const auto& row : report.aug_rows)
            out << row.category << ',' << detail::fmt(row.noise_conv_vs_train) << ','
                << detail::fmt(row.mask_vs_train) << ',' << detail::fmt(row.orig_vs_train) << '\n';
        written.push_back((fs::path(out_dir) / "aug_distances.csv").string());
    }

    if (!report.robust.empty()) {
        {
            auto out = detail::open_out(fs::path(out_dir) / "robust_summary.csv");
            out << "category,proportion,proportion_mask,proportion_noise\n";
            for (const auto& cat : report.robust)
                out << cat.category << ',' << detail::fmt(cat.win_rate_best) << ','
                    << detail::fmt(cat.win_rate_mask) << ',' << detail::fmt(cat.win_rate_noise)
                    << '\n';
            out << "Mean," << detail::fmt(report.mean_win_rate_best) << ','
                << detail::fmt(report.mean_win_rate_mask) << ','
                << detail::fmt(report.mean_win_rate_noise) << '\n';
            written.push_back((fs::path(out_dir) / "robust_summary.csv").string());
        }
        for (const auto& cat : report.robust) {
            auto path = fs::path(out_dir) / ("robust_" + cat.category + ".csv");
            auto out = detail::open_out(path);
            out << "prompt,orig,mask,noise\n";
            for (const auto& row : cat.rows)
                out << row.prompt << ',' << detail::fmt(row.orig) << ',' << detail::fmt(row.mask)
                    << ',' << detail::fmt(row.noise) << '\n';
            written.push_back(path.string());
        }
    }
    return written;
}

inline EvalReport load_report(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open report: " + path);
    nlohmann::json j;
    try {
        in >> j;
    } catch (const nlohmann::json::exception& e) {
        throw ConfigError("invalid report JSON in " + path + ": " + e.what());
    }
    return report_from_json(j);
}

}  // namespace aelif
