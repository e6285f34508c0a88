#pragma once

#include <optional>
#include <string>

#include "gvp/predictive.hpp"

namespace gvp {

enum class ScoreKind { LS, CRPS, CLS, MSIS };
enum class Tail { Lower, Upper };

// A scoring rule in positive orientation (larger is better). Censored rules
// carry the tail side and the quantile level that defines the threshold; the
// concrete threshold value is resolved once per run from an estimation
// window and pinned with bind_threshold(). Interval rules carry the nominal
// miss rate alpha of the central (1 - alpha) interval.
struct ScoringRule {
  ScoreKind kind = ScoreKind::LS;
  Tail tail = Tail::Lower;
  double level = 0.0;                // CLS threshold quantile level, in (0, 1)
  double alpha = 0.05;               // MSIS miss rate, in (0, 1)
  std::optional<double> threshold;   // CLS resolved threshold value

  static ScoringRule log_score();
  static ScoringRule crps();
  static ScoringRule censored(Tail tail, double level);
  static ScoringRule interval(double alpha = 0.05);

  ScoringRule bind_threshold(double value) const;
  bool needs_threshold() const { return kind == ScoreKind::CLS; }

  // "LS", "CRPS", "MSIS", or "CLS" + percent level ("CLS10", "CLS80", ...).
  std::string label() const;
};

// Inverse of ScoringRule::label(); CLS levels below 50 bind the lower tail,
// levels of 50 and above the upper tail. Throws std::invalid_argument on
// anything unrecognized.
ScoringRule parse_rule(const std::string& label);

// Scores come back flagged instead of silently -inf: degenerate means the
// predictive places no usable mass where the rule looks (zero density at the
// realization, or zero mass on the censored side).
struct ScoreValue {
  double value = 0.0;
  bool degenerate = false;
};

ScoreValue log_score(const ConditionalPredictive& p, double y);

// Closed form for a Gaussian; quadrature otherwise (ensembles have no closed
// form).
ScoreValue crps_score(const ConditionalPredictive& p, double y);

ScoreValue censored_log_score(const ConditionalPredictive& p, double y, double threshold,
                              Tail tail);

// Negated interval score of the central (1 - alpha) interval, so that like
// the other rules, larger is better.
ScoreValue interval_score(const ConditionalPredictive& p, double y, double alpha);

// Dispatch on rule.kind. Censored rules must have a bound threshold
// (std::logic_error otherwise).
ScoreValue evaluate_score(const ScoringRule& rule, const ConditionalPredictive& p, double y);

// Adaptive-quadrature CRPS: integrates -(F(x) - 1{x >= y})^2 with the
// integral split at y. Independent route used to check the closed form, and
// the evaluation path for predictives without one.
double crps_numeric(const ConditionalPredictive& p, double y, double abs_tol = 1e-8);

}  // namespace gvp
