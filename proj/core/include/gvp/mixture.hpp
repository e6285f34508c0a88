#pragma once

#include <vector>

#include "gvp/model.hpp"

namespace gvp {

// Mixture-of-Gaussian-AR(1) one-step predictive around a global location mu:
// component k contributes a Gaussian with mean mu + b0_k + b1_k (y_{t-1} - mu)
// and sd sig_k, carrying the time-varying weight
//   w_{k,t} ∝ tau_k phi(y_{t-1} - mu; m_k, s_k^2),
// where tau is the stick-breaking vector built from v, m_k = b0_k/(1 - b1_k)
// and s_k^2 = sig_k^2/(1 - b1_k^2) are the component stationary moments.
struct MixtureParams {
  std::vector<double> intercepts;  // b0, size K
  std::vector<double> slopes;      // b1, size K, each strictly inside (-1, 1)
  std::vector<double> sticks;      // v, size K-1, each strictly inside (0, 1)
  std::vector<double> sds;         // sig, size K, strictly positive
  double location = 0.0;           // mu

  int components() const { return static_cast<int>(intercepts.size()); }
};

// tau_k = v_k prod_{j<k} (1 - v_j); the last stick is pinned at 1 so the
// weights close to one.
std::vector<double> stick_breaking_weights(const std::vector<double>& sticks);

// Transformed coordinates, packed [b0 | eta | psi | kappa | mu] with
// b1 = 2 Phi(eta) - 1, v = Phi(psi), sig = exp(kappa). Dimension 4K.
Vec mixture_to_transformed(const MixtureParams& p);
MixtureParams mixture_from_transformed(const Vec& theta, int components);

class MixtureModel : public PredictiveModel {
 public:
  explicit MixtureModel(int components);

  std::string name() const override { return "mixture"; }
  int dim() const override { return 4 * components_; }
  int components() const { return components_; }
  std::vector<std::string> parameter_names() const override;
  int first_scored_index() const override { return 1; }
  bool valid_theta(const Vec& theta) const override;
  double log_prior(const Vec& theta) const override;
  Vec prior_gradient(const Vec& theta) const override;
  bool supports(const ScoringRule& rule) const override;
  ConditionalPredictive predictive(const Vec& theta, const DataSet& data, int n) const override;
  CriterionValue sample_criterion(const ScoringRule& rule, const Vec& theta, const DataSet& data,
                                  int n) const override;
  CriterionEval criterion_eval(const ScoringRule& rule, const Vec& theta, const DataSet& data,
                               int n) const override;
  Vec initial_guess(const DataSet& data, int n) const override;

 private:
  CriterionEval criterion_eval_impl(const ScoringRule& rule, const Vec& theta,
                                    const DataSet& data, int n, bool with_gradient) const;

  int components_;
};

}  // namespace gvp
