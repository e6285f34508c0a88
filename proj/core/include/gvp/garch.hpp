#pragma once

#include <vector>

#include "gvp/model.hpp"

namespace gvp {

// GARCH(1,1) with Gaussian innovations around a constant location:
//   y_t = mean + sqrt(h_t) e_t,  h_t = omega + alpha (y_{t-1} - mean)^2 + beta h_{t-1}.
// sigma0_sq seeds the recursion (the variance assigned to the first
// observation) and is treated as a data-derived constant, never a free
// parameter.
struct GarchParams {
  double mean = 0.0;
  double omega = 0.1;
  double alpha = 0.1;
  double beta = 0.8;
  double sigma0_sq = 1.0;
};

// Transformed coordinates: (mean, log omega, probit alpha, probit beta).
Vec garch_to_transformed(const GarchParams& p);
GarchParams garch_from_transformed(const Vec& theta, double sigma0_sq);

double garch_variance_step(const GarchParams& p, double y_prev, double h_prev);

// Conditional variance path h[0..n]: h[0] = sigma0_sq, h[t] the variance of
// y[t] given the past, h[n] the one-step-ahead predictive variance.
std::vector<double> garch_filter(const GarchParams& p, const std::vector<double>& y, int n);

class GarchModel : public PredictiveModel {
 public:
  std::string name() const override { return "garch"; }
  int dim() const override { return 4; }
  std::vector<std::string> parameter_names() const override;
  bool valid_theta(const Vec& theta) const override;
  double log_prior(const Vec& theta) const override;
  Vec prior_gradient(const Vec& theta) const override;
  ConditionalPredictive predictive(const Vec& theta, const DataSet& data, int n) const override;
  CriterionValue sample_criterion(const ScoringRule& rule, const Vec& theta, const DataSet& data,
                                  int n) const override;
  CriterionEval criterion_eval(const ScoringRule& rule, const Vec& theta, const DataSet& data,
                               int n) const override;
  Vec initial_guess(const DataSet& data, int n) const override;
};

}  // namespace gvp
