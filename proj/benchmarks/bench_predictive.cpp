// Out-of-sample scoring path: density, cdf and quantile queries against a
// 1000-member ensemble predictive, which is what every rolling-origin step
// evaluates. Interval scores pay for two quantile bisections; censored scores
// pay one extra cdf.

#include <benchmark/benchmark.h>

#include <random>
#include <vector>

#include "gvp/evaluate.hpp"
#include "gvp/predictive.hpp"
#include "gvp/scoring.hpp"

namespace {

gvp::ConditionalPredictive ensemble_1000() {
  std::mt19937_64 rng(99);
  std::normal_distribution<double> mu(0.0, 0.5);
  std::uniform_real_distribution<double> sigma(0.6, 1.8);
  gvp::Ensemble e;
  e.members.reserve(1000);
  for (int i = 0; i < 1000; ++i) {
    e.members.push_back(gvp::Gaussian{mu(rng), sigma(rng) * sigma(rng)});
  }
  return e;
}

std::vector<double> draws_1000() {
  std::mt19937_64 rng(17);
  std::normal_distribution<double> z(0.0, 1.3);
  std::vector<double> out(1000);
  for (double& v : out) v = z(rng);
  return out;
}

void ensemble_log_pdf(benchmark::State& state) {
  const auto p = ensemble_1000();
  for (auto _ : state) benchmark::DoNotOptimize(gvp::log_pdf(p, 0.7));
}

void ensemble_cdf(benchmark::State& state) {
  const auto p = ensemble_1000();
  for (auto _ : state) benchmark::DoNotOptimize(gvp::cdf(p, -1.1));
}

void ensemble_quantile(benchmark::State& state) {
  const auto p = ensemble_1000();
  for (auto _ : state) benchmark::DoNotOptimize(gvp::quantile(p, 0.975));
}

void ensemble_score(benchmark::State& state, const char* label) {
  const auto p = ensemble_1000();
  gvp::ScoringRule rule = gvp::parse_rule(label);
  if (rule.needs_threshold()) rule = rule.bind_threshold(1.2);
  for (auto _ : state) benchmark::DoNotOptimize(gvp::evaluate_score(rule, p, 0.4));
}

void kde_build_and_quantile(benchmark::State& state) {
  const auto samples = draws_1000();
  for (auto _ : state) {
    gvp::ConditionalPredictive kde = gvp::kde_predictive(samples);
    benchmark::DoNotOptimize(gvp::quantile(kde, 0.025));
  }
}

}  // namespace

BENCHMARK(ensemble_log_pdf);
BENCHMARK(ensemble_cdf);
BENCHMARK(ensemble_quantile);
BENCHMARK_CAPTURE(ensemble_score, ls, "LS");
BENCHMARK_CAPTURE(ensemble_score, cls90, "CLS90");
BENCHMARK_CAPTURE(ensemble_score, msis, "MSIS");
BENCHMARK(kde_build_and_quantile);
