#pragma once

#include <variant>
#include <vector>

namespace gvp {

// One-step-ahead predictive distributions. Three shapes cover the library:
// a single Gaussian (location-scale families), a finite Gaussian mixture
// (mixture predictives, kernel density estimates) and an equal-weight
// ensemble of either, which is how posterior-draw-averaged predictives are
// represented. pdf/cdf of an ensemble are the plain averages of the member
// pdf/cdf; quantiles come from bisection on the averaged cdf.

struct Gaussian {
  double mean = 0.0;
  double var = 1.0;
};

class GaussianMixture {
 public:
  // Weights must be positive and are normalized on construction; variances
  // must be strictly positive. Throws std::invalid_argument otherwise.
  GaussianMixture(std::vector<double> weights, std::vector<double> means,
                  std::vector<double> vars);

  int components() const { return static_cast<int>(means_.size()); }
  const std::vector<double>& weights() const { return weights_; }
  const std::vector<double>& log_weights() const { return log_weights_; }
  const std::vector<double>& means() const { return means_; }
  const std::vector<double>& vars() const { return vars_; }
  const std::vector<double>& sds() const { return sds_; }

 private:
  std::vector<double> weights_;
  std::vector<double> log_weights_;
  std::vector<double> means_;
  std::vector<double> vars_;
  std::vector<double> sds_;
};

using EnsembleMember = std::variant<Gaussian, GaussianMixture>;

struct Ensemble {
  std::vector<EnsembleMember> members;
};

using ConditionalPredictive = std::variant<Gaussian, GaussianMixture, Ensemble>;

double pdf(const ConditionalPredictive& p, double x);
double log_pdf(const ConditionalPredictive& p, double x);
double cdf(const ConditionalPredictive& p, double x);
double log_cdf(const ConditionalPredictive& p, double x);

// log(1 - cdf); evaluated in log space for upper-tail censoring.
double log_ccdf(const ConditionalPredictive& p, double x);

// Bisection on the cdf, bracketed by moment bounds and expanded as needed.
// Throws std::runtime_error if no bracket is found after 200 doublings.
double quantile(const ConditionalPredictive& p, double prob);

double mean(const ConditionalPredictive& p);
double variance(const ConditionalPredictive& p);

// [lo, hi] containing all but ~1e-30 of the mass; integration and bracketing
// box.
void support_bounds(const ConditionalPredictive& p, double* lo, double* hi);

}  // namespace gvp
