#pragma once

#include <cstdint>
#include <memory>
#include <string>
#include <variant>
#include <vector>

#include "gvp/bnn.hpp"
#include "gvp/data.hpp"
#include "gvp/mcmc.hpp"
#include "gvp/model.hpp"
#include "gvp/predictive.hpp"
#include "gvp/scoring.hpp"
#include "gvp/vb.hpp"

namespace gvp {

enum class Engine { Vb, Mcmc };

std::string engine_label(Engine e);

// Predictive-model selection for an experiment. BNN covariate columns index
// into DataSet.x; standardization constants are frozen from the initial
// estimation window when the model is built.
struct GarchModelSpec {};
struct MixtureModelSpec {
  int components = 3;
};
struct BnnModelSpec {
  int width = 3;
  Activation activation = Activation::Tanh;
  std::vector<int> covariate_cols;
};
using ModelSpec = std::variant<GarchModelSpec, MixtureModelSpec, BnnModelSpec>;

std::string model_label(const ModelSpec& spec);

std::unique_ptr<PredictiveModel> make_model(const ModelSpec& spec, const DataSet& data, int n0);

struct RollingConfig {
  ModelSpec model;
  std::vector<ScoringRule> update_rules;
  std::vector<ScoringRule> eval_rules;
  int n0 = 0;             // initial estimation window length
  int refit_every = 1;    // calibration cadence over the expanding window
  bool warm_start = true; // carry calibration state across refits
  int refit_iterations = 1000;  // reduced budget for warm-started refits
  int draws = 1000;             // predictive draws M
  double weight = 1.0;          // criterion weight w
  VbConfig vb;                  // budget template; seeds are derived per cell
  McmcConfig mcmc;              // likewise
  std::uint64_t seed = 0;       // master seed
  int workers = 1;
};

// Average out-of-sample scores, one row per update rule, one column per
// evaluation rule. Degenerate observations (non-finite scores) are excluded
// from the averages and counted per cell. A row is failed when its initial
// calibration failed; its entries are NaN.
struct ScoreMatrix {
  std::vector<std::string> update_labels;
  std::vector<std::string> eval_labels;
  std::vector<std::vector<double>> scores;
  std::vector<std::vector<int>> degenerate;
  std::vector<char> row_failed;
  std::vector<int> refit_failures;  // mid-run refits that fell back to the previous state
  int evaluation_count = 0;
  std::string engine;
  std::uint64_t seed = 0;
  int refit_every = 1;

  int rows() const { return static_cast<int>(update_labels.size()); }
  int cols() const { return static_cast<int>(eval_labels.size()); }
  bool any_failed() const;
};

// One scored observation; the per-run log reproduces matrix entries exactly.
struct PointScore {
  int update_rule;
  int eval_rule;
  int n;  // window length used to form the predictive; the target is y[n]
  double value;
  bool degenerate;
};

struct RollingResult {
  ScoreMatrix matrix;
  std::vector<PointScore> log;  // row-major: update rule, then n, then eval rule
};

// Expanding-window protocol: for each update rule, calibrate on y[0..n0),
// re-calibrate per cadence, and score the draw-averaged predictive of y[n]
// for n = n0..T-1 under every evaluation rule.
RollingResult rolling_evaluate(const DataSet& data, const RollingConfig& cfg, Engine engine);

// Equal-weight predictive over the model's conditionals at the given draws.
Ensemble make_ensemble(const PredictiveModel& model, const std::vector<Vec>& thetas,
                       const DataSet& data, int n);

// Draws M parameters from the calibrated variational and averages the
// model's conditional predictives.
Ensemble estimate_gvp_predictive(const VariationalParams& lambda, const PredictiveModel& model,
                                 const DataSet& data, int n, int draws, std::uint64_t seed);

struct ColumnCoherence {
  std::string rule;
  bool diagonal_best = false;  // strict column maximum on the matching row
  double margin = 0.0;         // diagonal minus best competitor (ties give 0)
};

// Per-column check over the rules present in both the row and column sets.
std::vector<ColumnCoherence> coherence_report(const ScoreMatrix& matrix);

struct MergingReport {
  std::vector<std::string> update_labels;
  std::vector<std::string> eval_labels;
  std::vector<std::vector<double>> abs_diff;
  double max_discrepancy = 0.0;
  double mean_discrepancy = 0.0;
};

// Elementwise |S_Q - S_Pi| between two engines' matrices; throws on label or
// shape mismatch.
MergingReport merging_report(const ScoreMatrix& a, const ScoreMatrix& b);

// Gaussian-kernel density over the samples with Silverman bandwidth
// 0.9 * min(sd, IQR/1.34) * M^(-1/5). Throws when the spread is zero.
GaussianMixture kde_predictive(const std::vector<double>& samples);

// d-fold adjacent differencing and its inverse for predictive draws: a draw
// of the next differenced value maps back to the next level using the last
// observed value of each difference order.
std::vector<double> difference(const std::vector<double>& series, int d);
std::vector<double> undifference(const std::vector<double>& series, int d,
                                 const std::vector<double>& draws);

}  // namespace gvp
