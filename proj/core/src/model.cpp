#include "gvp/model.hpp"

#include <cmath>
#include <stdexcept>

namespace gvp {

bool PredictiveModel::valid_theta(const Vec& theta) const {
  if (theta.size() != dim()) return false;
  for (int i = 0; i < theta.size(); ++i) {
    if (!std::isfinite(theta[i])) return false;
  }
  return true;
}

bool PredictiveModel::supports(const ScoringRule&) const { return true; }

CriterionValue PredictiveModel::sample_criterion(const ScoringRule& rule, const Vec& theta,
                                                const DataSet& data, int n) const {
  if (n > data.length()) {
    throw std::invalid_argument("sample_criterion: window exceeds the series");
  }
  CriterionValue out;
  for (int t = first_scored_index(); t < n; ++t) {
    const ScoreValue s = evaluate_score(rule, predictive(theta, data, t), data.y[t]);
    if (s.degenerate) {
      ++out.degenerate_terms;
    } else {
      out.value += s.value;
    }
  }
  return out;
}

}  // namespace gvp
