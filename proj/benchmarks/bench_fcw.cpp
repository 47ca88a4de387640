#include <benchmark/benchmark.h>

#include "fcw/counterfactual.hpp"
#include "fcw/evaluation.hpp"
#include "fcw/forecasting.hpp"
#include "fcw/synthgen.hpp"
#include "fcw/warning.hpp"

namespace {

using namespace fcw;

const FcwParams kParams{};

Episode brake_episode() {
  ScenarioSpec spec = spec_for_kind(ScenarioKind::kBrakeDuringInattention,
                                    ScenarioSpec{});
  spec.seed = 7;
  return generate(spec);
}

void BM_GenerateEpisode(benchmark::State& state) {
  ScenarioSpec spec = spec_for_kind(ScenarioKind::kBrakeDuringInattention,
                                    ScenarioSpec{});
  for (auto _ : state) {
    spec.seed++;
    benchmark::DoNotOptimize(generate(spec));
  }
}
BENCHMARK(BM_GenerateEpisode);

void BM_PerceivedLeadTrajectory(benchmark::State& state) {
  const Episode e = brake_episode();
  for (auto _ : state) {
    benchmark::DoNotOptimize(perceived_lead_trajectory(e.lead, e.attention));
  }
}
BENCHMARK(BM_PerceivedLeadTrajectory);

void BM_EvaluateSda(benchmark::State& state) {
  const Episode e = brake_episode();
  for (auto _ : state) {
    benchmark::DoNotOptimize(evaluate_sda(e, kParams));
  }
}
BENCHMARK(BM_EvaluateSda);

void BM_EvaluateAttentionAware(benchmark::State& state) {
  const Episode e = brake_episode();
  for (auto _ : state) {
    benchmark::DoNotOptimize(evaluate_attention_aware(e, kParams));
  }
}
BENCHMARK(BM_EvaluateAttentionAware);

void BM_EvaluateForecastConstantVelocity(benchmark::State& state) {
  const Episode e = brake_episode();
  const Forecaster cv = constant_velocity_forecaster();
  for (auto _ : state) {
    benchmark::DoNotOptimize(evaluate_forecast_fcw(e, cv, kParams, true));
  }
}
BENCHMARK(BM_EvaluateForecastConstantVelocity);

void BM_EvaluateMethodOverSuite(benchmark::State& state) {
  std::vector<Episode> episodes;
  for (auto& item : generate_suite(5, ScenarioSpec{}, 7)) {
    episodes.push_back(std::move(item.episode));
  }
  for (auto _ : state) {
    benchmark::DoNotOptimize(evaluate_method(
        episodes, "attention_aware",
        [](const Episode& e) { return evaluate_attention_aware(e, kParams); }));
  }
}
BENCHMARK(BM_EvaluateMethodOverSuite);

}  // namespace

BENCHMARK_MAIN();
