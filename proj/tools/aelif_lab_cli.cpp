// Command-line workbench: train the toy conditional diffusion pipeline with
// embedding-level augmentations, sample from checkpoints, generate typo'd
// prompt sets, and run the two evaluation pipelines.
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>

#include <CLI11.hpp>
#include <json.hpp>

#include "aelif_lab/aelif_lab.hpp"

namespace fs = std::filesystem;

namespace {

struct CommonOpts {
    std::string config_path;
    std::optional<std::uint64_t> seed;
    std::string out_dir = "out";
};

aelif::RunConfig resolve_run_config(const CommonOpts& opts) {
    aelif::RunConfig config =
        opts.config_path.empty() ? aelif::default_run_config() : aelif::load_run_config(opts.config_path);
    if (opts.seed) config.master_seed = *opts.seed;
    config.validate();
    return config;
}

void write_json(const nlohmann::json& j, const std::string& path) {
    std::ofstream out(path);
    if (!out) throw aelif::ConfigError("cannot open for writing: " + path);
    out << j.dump(2) << '\n';
}

int run_train(const CommonOpts& opts, const std::string& variant) {
    aelif::RunConfig config = resolve_run_config(opts);
    if (!variant.empty()) config.variants = {aelif::AelifMode::none, aelif::aelif_mode_from_string(variant)};
    const aelif::NoiseSchedule sched =
        aelif::make_schedule(config.timesteps, config.beta_min, config.beta_max);
    fs::create_directories(opts.out_dir);

    for (const auto& spec : config.categories) {
        const std::string item = aelif::category_item(spec.name);
        aelif::PromptTemplates prompts{"a photo of sks " + item, "a photo of " + item};
        prompts.validate();
        const aelif::Vocabulary vocab = aelif::build_vocab({prompts.instance_prompt, prompts.prior_prompt});
        const aelif::SynthDataset data = aelif::synth_dataset(spec, config.master_seed);
        const std::uint64_t train_seed =
            aelif::Rng(config.master_seed).child("train").child(spec.name).seed();
        const aelif::DenoiserParams init = aelif::init_denoiser(
            static_cast<std::size_t>(vocab.size), aelif::Rng(train_seed).child("init"));
        aelif::TrainDataset tds{data.instance_points, data.prior_points,
                                aelif::tokenize(prompts.instance_prompt, vocab),
                                aelif::tokenize(prompts.prior_prompt, vocab)};

        for (aelif::AelifMode mode : config.variants) {
            aelif::TrainConfig tc = config.train;
            tc.seed = train_seed;
            tc.aelif.mode = mode;
            const aelif::TrainResult result = aelif::train(init, tds, sched, tc);

            aelif::Checkpoint ckpt{tc, prompts, vocab, result.params, sched, config.master_seed};
            const std::string stem = spec.name + "_" + aelif::to_string(mode);
            aelif::save_checkpoint(ckpt, (fs::path(opts.out_dir) / (stem + ".ckpt.json")).string());
            aelif::save_loss_trace(result.loss_trace,
                                   (fs::path(opts.out_dir) / (stem + "_loss.csv")).string());
            std::cout << "trained " << stem << "  final loss "
                      << (result.loss_trace.empty() ? 0.0 : result.loss_trace.back()) << '\n';
        }
    }
    return 0;
}

int run_sample(const std::string& checkpoint_path, const std::string& prompt,
               std::uint64_t seed, const std::string& variant, double p, double mu, double sigma,
               const std::string& out_path) {
    const aelif::Checkpoint ckpt = aelif::load_checkpoint(checkpoint_path);
    const std::string effective_prompt = prompt.empty() ? ckpt.prompts.instance_prompt : prompt;
    const aelif::TokenSequence tokens = aelif::tokenize(effective_prompt, ckpt.vocabulary);

    aelif::AelifConfig inference;
    inference.mode = aelif::aelif_mode_from_string(variant);
    inference.p = p;
    inference.mu = mu;
    inference.sigma = sigma;
    inference.validate();

    const aelif::Vec z = aelif::sample(ckpt.params, tokens, ckpt.schedule,
                                       aelif::Rng(seed).child("sample"), inference);
    nlohmann::json j{{"prompt", effective_prompt}, {"seed", seed},
                     {"aelif", aelif::aelif_to_json(inference)}, {"latent", z}};
    if (out_path.empty())
        std::cout << j.dump(2) << '\n';
    else
        write_json(j, out_path);
    return 0;
}

int run_perturb(const std::string& prompt, std::size_t count, std::size_t min_edits,
                std::size_t max_edits, std::uint64_t seed, const std::string& out_path) {
    aelif::PerturbConfig config{min_edits, max_edits, count, seed};
    config.validate();
    const auto prompts =
        aelif::gen_adversarial_set(prompt, config, aelif::Rng(seed).child("perturb"));
    nlohmann::json j = prompts;
    if (out_path.empty())
        std::cout << j.dump(2) << '\n';
    else
        write_json(j, out_path);
    return 0;
}

int run_eval(const CommonOpts& opts, std::size_t ref_index, bool robustness) {
    aelif::RunConfig config = resolve_run_config(opts);
    config.ref_index = ref_index;
    const aelif::EvalReport report =
        robustness ? aelif::run_robustness_eval(config) : aelif::run_augmentation_eval(config);
    for (const auto& path : aelif::emit_report(report, opts.out_dir))
        std::cout << "wrote " << path << '\n';
    if (robustness)
        std::cout << "mean win rate (best-of): " << report.mean_win_rate_best << "%\n";
    return 0;
}

int run_report(const std::string& report_path, const std::string& out_dir) {
    const aelif::EvalReport report = aelif::load_report(report_path);
    for (const auto& path : aelif::emit_report(report, out_dir))
        std::cout << "wrote " << path << '\n';
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"aelif-lab: embedding-augmentation diffusion workbench"};
    app.require_subcommand(1);

    CommonOpts opts;
    std::string variant = "none";
    std::string prompt;
    std::string checkpoint_path;
    std::string report_path;
    std::uint64_t seed = 0;
    double p = 0.0, mu = 0.0, sigma = 1.0;
    std::size_t ref_index = 0;
    std::size_t count = 40, min_edits = 1, max_edits = 3;

    auto add_common = [&](CLI::App* cmd) {
        cmd->add_option("--config", opts.config_path, "run config JSON path");
        cmd->add_option("--seed", opts.seed, "master seed override");
        cmd->add_option("--out", opts.out_dir, "output directory");
    };

    CLI::App* train_cmd = app.add_subcommand("train", "train checkpoints per category and variant");
    add_common(train_cmd);
    train_cmd->add_option("--variant", variant, "restrict to one augmented variant")
        ->check(CLI::IsMember({"none", "mask", "noise_conv"}));

    CLI::App* sample_cmd = app.add_subcommand("sample", "sample a latent from a checkpoint");
    sample_cmd->add_option("--checkpoint", checkpoint_path, "checkpoint JSON path")->required();
    sample_cmd->add_option("--prompt", prompt, "prompt text (default: checkpoint instance prompt)");
    sample_cmd->add_option("--seed", seed, "sampling seed");
    sample_cmd->add_option("--variant", variant, "inference-time augmentation mode")
        ->check(CLI::IsMember({"none", "mask", "noise_conv"}));
    sample_cmd->add_option("--p", p, "augmentation magnitude in [0,1]");
    sample_cmd->add_option("--mu", mu, "noise mean");
    sample_cmd->add_option("--sigma", sigma, "noise standard deviation");
    sample_cmd->add_option("--out", opts.out_dir, "output JSON path (stdout if omitted)");

    CLI::App* perturb_cmd = app.add_subcommand("perturb", "generate a typo'd prompt set");
    perturb_cmd->add_option("--prompt", prompt, "template prompt ('a photo of sks <item>')")
        ->required();
    perturb_cmd->add_option("--count", count, "number of prompts");
    perturb_cmd->add_option("--min-edits", min_edits, "minimum edits per prompt");
    perturb_cmd->add_option("--max-edits", max_edits, "maximum edits per prompt");
    perturb_cmd->add_option("--seed", seed, "generation seed");
    perturb_cmd->add_option("--out", opts.out_dir, "output JSON path (stdout if omitted)");

    CLI::App* eval_aug_cmd = app.add_subcommand("eval-aug", "augmentation-quality pipeline");
    add_common(eval_aug_cmd);

    CLI::App* eval_robust_cmd = app.add_subcommand("eval-robust", "prompt-robustness pipeline");
    add_common(eval_robust_cmd);
    eval_robust_cmd->add_option("--ref-index", ref_index, "reference instance point index");

    CLI::App* report_cmd = app.add_subcommand("report", "re-emit CSV tables from a report JSON");
    report_cmd->add_option("--config", report_path, "report JSON path")->required();
    report_cmd->add_option("--out", opts.out_dir, "output directory");

    std::string sample_out, perturb_out;
    try {
        app.parse(argc, argv);
        if (sample_cmd->parsed())
            return run_sample(checkpoint_path, prompt, seed, variant, p, mu, sigma,
                              sample_cmd->count("--out") ? opts.out_dir : "");
        if (perturb_cmd->parsed())
            return run_perturb(prompt, count, min_edits, max_edits, seed,
                               perturb_cmd->count("--out") ? opts.out_dir : "");
        if (train_cmd->parsed()) return run_train(opts, train_cmd->count("--variant") ? variant : "");
        if (eval_aug_cmd->parsed()) return run_eval(opts, ref_index, false);
        if (eval_robust_cmd->parsed()) return run_eval(opts, ref_index, true);
        if (report_cmd->parsed()) return run_report(report_path, opts.out_dir);
        return 2;
    } catch (const CLI::ParseError& e) {
        return app.exit(e) == 0 ? 0 : 2;
    } catch (const aelif::ConfigError& e) {
        std::cerr << "config error: " << e.what() << '\n';
        return 2;
    } catch (const aelif::NumericError& e) {
        std::cerr << "numeric failure: " << e.what() << '\n';
        return 3;
    } catch (const std::exception& e) {
        std::cerr << "failure: " << e.what() << '\n';
        return 3;
    }
}
