// Calibration hot path: one criterion sweep (value + gradient) over an
// estimation window, per model family and update rule. VB runs tens of
// thousands of these per fit, so ns/sweep here bounds end-to-end fit time.

#include <benchmark/benchmark.h>

#include <string>

#include "gvp/data.hpp"
#include "gvp/dgp.hpp"
#include "gvp/evaluate.hpp"
#include "gvp/scoring.hpp"

namespace {

const gvp::DataSet& series_for(const gvp::ModelSpec& spec) {
  static const gvp::DataSet garch = [] {
    gvp::DgpSpec s;
    s.variant = gvp::GarchGaussianDgp{};
    s.length = 1000;
    s.seed = 7;
    return gvp::simulate(s);
  }();
  static const gvp::DataSet regression = [] {
    gvp::DgpSpec s;
    s.variant = gvp::DynRegressionDgp{};
    s.length = 1000;
    s.seed = 7;
    return gvp::simulate(s);
  }();
  return std::holds_alternative<gvp::BnnModelSpec>(spec) ? regression : garch;
}

void criterion_sweep(benchmark::State& state, gvp::ModelSpec spec, const std::string& label) {
  const gvp::DataSet& data = series_for(spec);
  const int n = data.length();
  const auto model = gvp::make_model(spec, data, n);
  gvp::ScoringRule rule = gvp::parse_rule(label);
  if (rule.needs_threshold()) {
    rule = rule.bind_threshold(gvp::window_quantile(data, n, rule.level));
  }
  const gvp::Vec theta = model->initial_guess(data, n);
  for (auto _ : state) {
    benchmark::DoNotOptimize(model->criterion_eval(rule, theta, data, n));
  }
  state.SetItemsProcessed(state.iterations() * n);
}

}  // namespace

BENCHMARK_CAPTURE(criterion_sweep, garch_ls, gvp::GarchModelSpec{}, "LS");
BENCHMARK_CAPTURE(criterion_sweep, garch_crps, gvp::GarchModelSpec{}, "CRPS");
BENCHMARK_CAPTURE(criterion_sweep, garch_cls90, gvp::GarchModelSpec{}, "CLS90");
BENCHMARK_CAPTURE(criterion_sweep, garch_msis, gvp::GarchModelSpec{}, "MSIS");
BENCHMARK_CAPTURE(criterion_sweep, mixture5_ls, gvp::MixtureModelSpec{5}, "LS");
BENCHMARK_CAPTURE(criterion_sweep, mixture5_msis, gvp::MixtureModelSpec{5}, "MSIS");
BENCHMARK_CAPTURE(criterion_sweep, bnn_ls,
                  (gvp::BnnModelSpec{3, gvp::Activation::Tanh, {0, 1}}), "LS");
BENCHMARK_CAPTURE(criterion_sweep, bnn_msis,
                  (gvp::BnnModelSpec{3, gvp::Activation::Tanh, {0, 1}}), "MSIS");
