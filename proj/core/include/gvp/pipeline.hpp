#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "gvp/vb.hpp"

namespace gvp {

// Interval-forecast pipeline: difference the series, fit the mixture model
// under the interval-score update, push predictive draws back to levels and
// read the central interval off a kernel density estimate of the draws.
struct PipelineConfig {
  int d = 1;               // differencing order
  double alpha = 0.05;     // interval miss rate
  int components = 3;      // mixture components
  int draws = 5000;        // predictive draws before the KDE
  double weight = 1.0;     // criterion weight
  VbConfig vb;
  std::uint64_t seed = 0;
  bool holdout = false;    // fit without the last level and score it
};

struct PipelineResult {
  double lower = 0.0;
  double upper = 0.0;
  double median = 0.0;
  int fit_length = 0;  // differenced observations used for calibration
  double bandwidth = 0.0;
  // Present in holdout mode: the held-out level and its interval score.
  std::optional<double> holdout_y;
  std::optional<double> holdout_score;
};

// Throws std::invalid_argument when fewer than 100 differenced observations
// remain for calibration.
PipelineResult run_pipeline(const std::vector<double>& series, const PipelineConfig& cfg);

}  // namespace gvp
