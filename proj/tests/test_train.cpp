#include <cmath>
#include <numeric>

#include <catch2/catch_amalgamated.hpp>

#include "aelif_lab/dataset.hpp"
#include "aelif_lab/train.hpp"

using namespace aelif;

namespace {

struct TrainFixture {
    Vocabulary vocab = build_vocab({"a photo of sks cat", "a photo of cat"});
    NoiseSchedule sched = make_schedule();
    SynthDataset data = synth_dataset(CategorySpec{"cat", 0, 4, 200}, 99);
    TrainDataset dataset{data.instance_points, data.prior_points,
                         tokenize("a photo of sks cat", vocab), tokenize("a photo of cat", vocab)};
    DenoiserParams init = init_denoiser(static_cast<std::size_t>(vocab.size), Rng(100));
};

double mean_range(const Vec& v, std::size_t begin, std::size_t end) {
    return std::accumulate(v.begin() + static_cast<std::ptrdiff_t>(begin),
                           v.begin() + static_cast<std::ptrdiff_t>(end), 0.0) /
           static_cast<double>(end - begin);
}

}  // namespace

TEST_CASE("zero steps is a no-op") {
    TrainFixture f;
    TrainConfig config;
    config.steps = 0;
    const TrainResult result = train(f.init, f.dataset, f.sched, config);
    REQUIRE(result.loss_trace.empty());
    bool equal = true;
    visit_params_pair(const_cast<DenoiserParams&>(result.params), f.init,
                      [&](double& x, double& y) { equal = equal && x == y; });
    REQUIRE(equal);
}

TEST_CASE("training is seed-deterministic") {
    TrainFixture f;
    TrainConfig config;
    config.steps = 50;
    config.seed = 7;
    const TrainResult a = train(f.init, f.dataset, f.sched, config);
    const TrainResult b = train(f.init, f.dataset, f.sched, config);
    REQUIRE(a.loss_trace == b.loss_trace);
    bool equal = true;
    visit_params_pair(const_cast<DenoiserParams&>(a.params), const_cast<DenoiserParams&>(b.params),
                      [&](double& x, double& y) { equal = equal && x == y; });
    REQUIRE(equal);
}

TEST_CASE("loss decays on single-cluster data", "[slow]") {
    TrainFixture f;
    TrainConfig config;
    config.steps = 5000;
    config.seed = 11;
    const TrainResult result = train(f.init, f.dataset, f.sched, config);
    REQUIRE(result.loss_trace.size() == 5000);
    const double leading = mean_range(result.loss_trace, 0, 100);
    const double trailing = mean_range(result.loss_trace, 4900, 5000);
    INFO("leading " << leading << " trailing " << trailing);
    REQUIRE(trailing < 0.5 * leading);
}

TEST_CASE("an absurd learning rate raises a numeric error naming the step") {
    TrainFixture f;
    TrainConfig config;
    config.steps = 50;
    config.learning_rate = 1e12;
    REQUIRE_THROWS_MATCHES(train(f.init, f.dataset, f.sched, config), NumericError,
                           Catch::Matchers::MessageMatches(
                               Catch::Matchers::ContainsSubstring("step")));
}

TEST_CASE("training requires both dataset subsets") {
    TrainFixture f;
    TrainDataset missing = f.dataset;
    missing.prior_points.clear();
    REQUIRE_THROWS_AS(train(f.init, missing, f.sched, TrainConfig{}), ConfigError);
}

TEST_CASE("train config JSON round trip and validation") {
    TrainConfig c;
    c.steps = 123;
    c.batch_size = 8;
    c.learning_rate = 0.5;
    c.lambda = 2.0;
    c.aelif.mode = AelifMode::mask;
    const TrainConfig back = train_config_from_json(train_config_to_json(c));
    REQUIRE(back.steps == c.steps);
    REQUIRE(back.batch_size == c.batch_size);
    REQUIRE(back.learning_rate == c.learning_rate);
    REQUIRE(back.lambda == c.lambda);
    REQUIRE(back.aelif.mode == AelifMode::mask);
    REQUIRE_THROWS_AS(train_config_from_json({{"steps", 0}}), ConfigError);
    REQUIRE_THROWS_AS(train_config_from_json({{"learning_rate", -1.0}}), ConfigError);
}

TEST_CASE("prompt templates enforce the identifier token") {
    PromptTemplates good{"a photo of sks dog", "a photo of dog"};
    REQUIRE_NOTHROW(good.validate());
    PromptTemplates bad{"a photo of dog", "a photo of dog"};
    REQUIRE_THROWS_AS(bad.validate(), ConfigError);
}
