#include "gvp/data.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace gvp {

void DataSet::validate() const {
  if (x_names.size() != x.size()) {
    throw std::invalid_argument("DataSet: covariate names and columns mismatched");
  }
  for (const auto& col : x) {
    if (col.size() != y.size()) {
      throw std::invalid_argument("DataSet: covariate column length differs from series length");
    }
  }
}

double window_mean(const DataSet& data, int n) {
  if (n < 1 || n > data.length()) {
    throw std::invalid_argument("window_mean: window outside the series");
  }
  double s = 0.0;
  for (int t = 0; t < n; ++t) s += data.y[t];
  return s / n;
}

double window_variance(const DataSet& data, int n) {
  if (n < 2 || n > data.length()) {
    throw std::invalid_argument("window_variance: need at least two observations");
  }
  const double m = window_mean(data, n);
  double s = 0.0;
  for (int t = 0; t < n; ++t) {
    const double d = data.y[t] - m;
    s += d * d;
  }
  const double v = s / n;
  if (!(v > 0.0) || !std::isfinite(v)) {
    throw std::invalid_argument("window_variance: window variance is not strictly positive");
  }
  return v;
}

double window_quantile(const DataSet& data, int n, double level) {
  if (n < 1 || n > data.length()) {
    throw std::invalid_argument("window_quantile: window outside the series");
  }
  if (!(level > 0.0 && level < 1.0)) {
    throw std::invalid_argument("window_quantile: level must lie in (0, 1)");
  }
  std::vector<double> sorted(data.y.begin(), data.y.begin() + n);
  std::sort(sorted.begin(), sorted.end());
  const double pos = level * (n - 1);
  const int lo = static_cast<int>(pos);
  if (lo + 1 >= n) return sorted[n - 1];
  const double frac = pos - lo;
  return sorted[lo] * (1.0 - frac) + sorted[lo + 1] * frac;
}

}  // namespace gvp
