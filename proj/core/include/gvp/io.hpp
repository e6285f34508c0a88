#pragma once

#include <optional>
#include <string>
#include <vector>

#include "gvp/config.hpp"
#include "gvp/data.hpp"
#include "gvp/evaluate.hpp"
#include "gvp/vb.hpp"

namespace gvp {

// CSV with a header row; the named column becomes y and every other column a
// covariate. Strict: ragged rows, non-numeric or empty cells and a missing
// target column are errors naming the offending line.
DataSet load_series(const std::string& path, const std::string& y_column = "y");

// Round-trips bitwise through load_series (17 significant digits).
void write_series(const std::string& path, const DataSet& data);

void write_matrix_csv(const std::string& path, const ScoreMatrix& matrix);
void write_score_log_csv(const std::string& path, const ScoreMatrix& matrix,
                         const std::vector<PointScore>& log);
void write_coherence_csv(const std::string& path, const std::vector<ColumnCoherence>& report);
void write_merging_csv(const std::string& path, const MergingReport& report);

// Full-precision decimal form that parses back to the same double.
std::string format_double(double v);

// A finished calibration, enough to rebuild the predictive elsewhere: the
// model selection, the bound update rule, and either the variational pair or
// the retained parameter draws.
struct FitArtifact {
  std::string engine;  // "vb" or "mcmc"
  ModelChoice model;
  std::string rule_label;
  std::optional<double> threshold;  // bound censoring threshold
  int window = 0;                   // observations used
  double weight = 1.0;
  VariationalParams lambda;         // vb engines
  std::vector<Vec> draws;           // mcmc engines
};

void write_fit(const std::string& path, const FitArtifact& fit);
FitArtifact read_fit(const std::string& path);

}  // namespace gvp
