#pragma once

#include <string>
#include <vector>

namespace gvp {

// A univariate target series plus optional covariate columns aligned with it
// (x[j][t] is observed together with y[t]). Column-major so models can hand
// whole columns to their input builders.
struct DataSet {
  std::vector<double> y;
  std::vector<std::string> x_names;
  std::vector<std::vector<double>> x;

  int length() const { return static_cast<int>(y.size()); }
  int covariates() const { return static_cast<int>(x.size()); }

  void validate() const;  // throws std::invalid_argument on ragged columns
};

// Population variance of y[0..n). Used for recursion seeds; throws
// std::invalid_argument when it is not strictly positive.
double window_variance(const DataSet& data, int n);

double window_mean(const DataSet& data, int n);

// Empirical quantile of y[0..n) by sorted linear interpolation.
double window_quantile(const DataSet& data, int n, double level);

}  // namespace gvp
