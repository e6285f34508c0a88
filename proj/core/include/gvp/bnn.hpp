#pragma once

#include <cstdint>
#include <vector>

#include "gvp/model.hpp"

namespace gvp {

enum class Activation { Tanh, Sigmoid };

// Feed-forward network regression predictive: y_t ~ N(g(z_t; weights), sig_y^2)
// with two hidden layers of the given width. The input z_t is the lagged
// series value followed by the selected covariate columns, all observed at
// time t.
struct BnnSpec {
  int width = 3;
  Activation activation = Activation::Tanh;
  std::vector<int> covariate_cols;  // indices into DataSet::x

  int inputs() const { return 1 + static_cast<int>(covariate_cols.size()); }
};

// Input standardization constants, frozen when the model is built so a
// rolling run keeps one input scale throughout (warm starts stay meaningful).
struct Standardization {
  std::vector<double> mean;
  std::vector<double> sd;
};

class BnnModel : public PredictiveModel {
 public:
  BnnModel(BnnSpec spec, Standardization standardization);

  // Constants from the inputs appearing in y[0..n): per-dimension mean and
  // sd; a zero-variance dimension keeps scale 1.
  static Standardization standardization_from(const BnnSpec& spec, const DataSet& data, int n);

  std::string name() const override { return "bnn"; }
  // Weight packing [W1 | b1 | W2 | b2 | w_out | b_out] followed by
  // c = log sig_y.
  int dim() const override;
  std::vector<std::string> parameter_names() const override;
  int first_scored_index() const override { return 1; }
  bool valid_theta(const Vec& theta) const override;
  double log_prior(const Vec& theta) const override { (void)theta; return 0.0; }  // flat
  Vec prior_gradient(const Vec& theta) const override { return Vec::Zero(theta.size()); }
  ConditionalPredictive predictive(const Vec& theta, const DataSet& data, int n) const override;
  CriterionValue sample_criterion(const ScoringRule& rule, const Vec& theta, const DataSet& data,
                                  int n) const override;
  CriterionEval criterion_eval(const ScoringRule& rule, const Vec& theta, const DataSet& data,
                               int n) const override;
  Vec initial_guess(const DataSet& data, int n) const override;

  const BnnSpec& spec() const { return spec_; }
  const Standardization& standardization() const { return standardization_; }

 private:
  CriterionEval criterion_eval_impl(const ScoringRule& rule, const Vec& theta,
                                    const DataSet& data, int n, bool with_gradient) const;
  void input_at(const DataSet& data, int t, std::vector<double>* z) const;

  BnnSpec spec_;
  Standardization standardization_;
};

}  // namespace gvp
