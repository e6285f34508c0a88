#pragma once

#include <Eigen/Core>
#include <string>
#include <vector>

#include "gvp/data.hpp"
#include "gvp/scoring.hpp"

namespace gvp {

using Vec = Eigen::VectorXd;

// Accumulated score criterion over an estimation window. Terms whose score is
// degenerate are dropped from the sum and counted; callers decide whether a
// nonzero count is tolerable.
struct CriterionValue {
  double value = 0.0;
  int degenerate_terms = 0;
};

// Criterion value and gradient from one sweep. The gradient is with respect
// to the transformed (unconstrained) parameters.
struct CriterionEval {
  double value = 0.0;
  Vec gradient;
  int degenerate_terms = 0;
};

// A parametric one-step-ahead predictive family, exposed to the calibration
// engines entirely through transformed coordinates. predictive(theta, data, n)
// is the distribution of y[n] given y[0..n); sample_criterion accumulates the
// chosen rule's score of predictive(theta, data, t) at y[t] over
// t = first_scored_index()..n-1.
class PredictiveModel {
 public:
  virtual ~PredictiveModel() = default;

  virtual std::string name() const = 0;
  virtual int dim() const = 0;
  virtual std::vector<std::string> parameter_names() const = 0;

  // Lag-dependent models cannot form a predictive for their first
  // observation(s).
  virtual int first_scored_index() const { return 0; }

  // Whether theta back-transforms to a usable parameter point (finite, inside
  // open constraint regions). Draws failing this are resampled or skipped.
  virtual bool valid_theta(const Vec& theta) const;

  virtual double log_prior(const Vec& theta) const = 0;
  virtual Vec prior_gradient(const Vec& theta) const = 0;

  virtual ConditionalPredictive predictive(const Vec& theta, const DataSet& data, int n) const = 0;

  virtual CriterionValue sample_criterion(const ScoringRule& rule, const Vec& theta,
                                          const DataSet& data, int n) const;

  virtual CriterionEval criterion_eval(const ScoringRule& rule, const Vec& theta,
                                       const DataSet& data, int n) const = 0;

  virtual bool supports(const ScoringRule& rule) const;

  // Moment-based starting point for calibration.
  virtual Vec initial_guess(const DataSet& data, int n) const = 0;
};

}  // namespace gvp
