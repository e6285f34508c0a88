#include "gvp/scoring.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>

#include "gvp/normal.hpp"

namespace gvp {

namespace {

constexpr double kSqrtPi = 1.7724538509055160272981675;

// Simpson panel over [a, b] given endpoint and midpoint values.
double simpson(double fa, double fm, double fb, double a, double b) {
  return (b - a) / 6.0 * (fa + 4.0 * fm + fb);
}

template <typename F>
double adaptive_simpson(const F& f, double a, double m, double b, double fa, double fm, double fb,
                        double whole, double tol, int depth) {
  const double lm = 0.5 * (a + m);
  const double rm = 0.5 * (m + b);
  const double flm = f(lm);
  const double frm = f(rm);
  const double left = simpson(fa, flm, fm, a, m);
  const double right = simpson(fm, frm, fb, m, b);
  const double delta = left + right - whole;
  if (depth <= 0 || std::fabs(delta) <= 15.0 * tol) {
    return left + right + delta / 15.0;
  }
  return adaptive_simpson(f, a, lm, m, fa, flm, fm, left, 0.5 * tol, depth - 1) +
         adaptive_simpson(f, m, rm, b, fm, frm, fb, right, 0.5 * tol, depth - 1);
}

template <typename F>
double integrate(const F& f, double a, double b, double tol) {
  if (!(b > a)) return 0.0;
  const double m = 0.5 * (a + b);
  const double fa = f(a);
  const double fm = f(m);
  const double fb = f(b);
  return adaptive_simpson(f, a, m, b, fa, fm, fb, simpson(fa, fm, fb, a, b), tol, 40);
}

ScoreValue flagged(double v) {
  ScoreValue s;
  s.value = v;
  s.degenerate = !std::isfinite(v);
  if (s.degenerate) s.value = -std::numeric_limits<double>::infinity();
  return s;
}

}  // namespace

ScoringRule ScoringRule::log_score() {
  ScoringRule r;
  r.kind = ScoreKind::LS;
  return r;
}

ScoringRule ScoringRule::crps() {
  ScoringRule r;
  r.kind = ScoreKind::CRPS;
  return r;
}

ScoringRule ScoringRule::censored(Tail tail, double level) {
  if (!(level > 0.0 && level < 1.0)) {
    throw std::invalid_argument("ScoringRule::censored: level must lie in (0, 1)");
  }
  ScoringRule r;
  r.kind = ScoreKind::CLS;
  r.tail = tail;
  r.level = level;
  return r;
}

ScoringRule ScoringRule::interval(double alpha) {
  if (!(alpha > 0.0 && alpha < 1.0)) {
    throw std::invalid_argument("ScoringRule::interval: alpha must lie in (0, 1)");
  }
  ScoringRule r;
  r.kind = ScoreKind::MSIS;
  r.alpha = alpha;
  return r;
}

ScoringRule ScoringRule::bind_threshold(double value) const {
  if (kind != ScoreKind::CLS) {
    throw std::logic_error("bind_threshold: only censored rules carry a threshold");
  }
  ScoringRule r = *this;
  r.threshold = value;
  return r;
}

std::string ScoringRule::label() const {
  switch (kind) {
    case ScoreKind::LS:
      return "LS";
    case ScoreKind::CRPS:
      return "CRPS";
    case ScoreKind::MSIS:
      return "MSIS";
    case ScoreKind::CLS: {
      const int pct = static_cast<int>(std::lround(level * 100.0));
      return "CLS" + std::to_string(pct);
    }
  }
  return "?";
}

ScoringRule parse_rule(const std::string& label) {
  if (label == "LS") return ScoringRule::log_score();
  if (label == "CRPS") return ScoringRule::crps();
  if (label == "MSIS") return ScoringRule::interval();
  if (label.rfind("CLS", 0) == 0 && label.size() > 3) {
    int pct = 0;
    try {
      pct = std::stoi(label.substr(3));
    } catch (const std::exception&) {
      throw std::invalid_argument("parse_rule: bad censored-rule level in '" + label + "'");
    }
    if (pct <= 0 || pct >= 100) {
      throw std::invalid_argument("parse_rule: censored-rule level out of range in '" + label +
                                  "'");
    }
    const Tail tail = pct < 50 ? Tail::Lower : Tail::Upper;
    return ScoringRule::censored(tail, pct / 100.0);
  }
  throw std::invalid_argument("parse_rule: unrecognized rule '" + label + "'");
}

ScoreValue log_score(const ConditionalPredictive& p, double y) { return flagged(log_pdf(p, y)); }

ScoreValue crps_score(const ConditionalPredictive& p, double y) {
  if (const auto* g = std::get_if<Gaussian>(&p)) {
    const double sd = std::sqrt(g->var);
    const double z = (y - g->mean) / sd;
    const double b = z * (2.0 * norm_cdf(z) - 1.0) + 2.0 * norm_pdf(z) - 1.0 / kSqrtPi;
    return flagged(-sd * b);
  }
  return flagged(crps_numeric(p, y, 1e-7));
}

ScoreValue censored_log_score(const ConditionalPredictive& p, double y, double threshold,
                              Tail tail) {
  const bool in_region = tail == Tail::Lower ? y < threshold : y > threshold;
  if (in_region) return flagged(log_pdf(p, y));
  // Outside the region of interest only the censoring mass enters: the
  // probability the predictive assigns to the complement of the tail.
  return flagged(tail == Tail::Lower ? log_ccdf(p, threshold) : log_cdf(p, threshold));
}

ScoreValue interval_score(const ConditionalPredictive& p, double y, double alpha) {
  if (!(alpha > 0.0 && alpha < 1.0)) {
    throw std::invalid_argument("interval_score: alpha must lie in (0, 1)");
  }
  const double lo = quantile(p, 0.5 * alpha);
  const double hi = quantile(p, 1.0 - 0.5 * alpha);
  double s = hi - lo;
  if (y < lo) s += (2.0 / alpha) * (lo - y);
  if (y > hi) s += (2.0 / alpha) * (y - hi);
  return flagged(-s);
}

ScoreValue evaluate_score(const ScoringRule& rule, const ConditionalPredictive& p, double y) {
  switch (rule.kind) {
    case ScoreKind::LS:
      return log_score(p, y);
    case ScoreKind::CRPS:
      return crps_score(p, y);
    case ScoreKind::CLS:
      if (!rule.threshold) {
        throw std::logic_error("evaluate_score: censored rule used before bind_threshold()");
      }
      return censored_log_score(p, y, *rule.threshold, rule.tail);
    case ScoreKind::MSIS:
      return interval_score(p, y, rule.alpha);
  }
  throw std::logic_error("evaluate_score: unknown rule kind");
}

double crps_numeric(const ConditionalPredictive& p, double y, double abs_tol) {
  double lo, hi;
  support_bounds(p, &lo, &hi);
  lo = std::min(lo, y - 1.0);
  hi = std::max(hi, y + 1.0);
  const auto below = [&](double x) {
    const double f = cdf(p, x);
    return f * f;
  };
  const auto above = [&](double x) {
    const double f = 1.0 - cdf(p, x);
    return f * f;
  };
  // The indicator kinks the integrand at y; integrating each side separately
  // keeps the quadrature clean.
  const double mass = integrate(below, lo, y, 0.5 * abs_tol) + integrate(above, y, hi, 0.5 * abs_tol);
  return -mass;
}

}  // namespace gvp
