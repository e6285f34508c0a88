#include "gvp/garch.hpp"

#include <cmath>
#include <stdexcept>

#include "gvp/normal.hpp"

namespace gvp {

namespace {

constexpr double kSqrtPi = 1.7724538509055160272981675;

// Per-observation score of the Gaussian predictive N(m, h) and its partials
// with respect to m and h. All four rules reduce to closed forms here.
struct TermEval {
  double value = 0.0;
  double d_mean = 0.0;
  double d_var = 0.0;
  bool degenerate = false;
};

TermEval term_eval(const ScoringRule& rule, double m, double h, double y, bool with_gradient) {
  TermEval out;
  if (!(h > 0.0) || !std::isfinite(h) || !std::isfinite(m)) {
    out.degenerate = true;
    return out;
  }
  const double sd = std::sqrt(h);
  const double z = (y - m) / sd;
  switch (rule.kind) {
    case ScoreKind::LS: {
      out.value = norm_log_pdf(z) - std::log(sd);
      if (with_gradient) {
        out.d_mean = (y - m) / h;
        out.d_var = -0.5 / h + (y - m) * (y - m) / (2.0 * h * h);
      }
      break;
    }
    case ScoreKind::CRPS: {
      const double b = z * (2.0 * norm_cdf(z) - 1.0) + 2.0 * norm_pdf(z) - 1.0 / kSqrtPi;
      out.value = -sd * b;
      if (with_gradient) {
        // dB/dz = 2 Phi(z) - 1, so the z-dependent pieces collapse:
        // ds/dm = 2 Phi(z) - 1 and ds/dh = (1/sqrt(pi) - 2 phi(z)) / (2 sd).
        out.d_mean = 2.0 * norm_cdf(z) - 1.0;
        out.d_var = (1.0 / kSqrtPi - 2.0 * norm_pdf(z)) / (2.0 * sd);
      }
      break;
    }
    case ScoreKind::CLS: {
      const double q = *rule.threshold;
      const bool in_region = rule.tail == Tail::Lower ? y < q : y > q;
      if (in_region) {
        out.value = norm_log_pdf(z) - std::log(sd);
        if (with_gradient) {
          out.d_mean = (y - m) / h;
          out.d_var = -0.5 / h + (y - m) * (y - m) / (2.0 * h * h);
        }
      } else {
        const double zq = (q - m) / sd;
        if (rule.tail == Tail::Upper) {
          out.value = norm_log_cdf(zq);
          if (with_gradient) {
            const double ratio = norm_hazard_lower(zq);  // phi(zq) / Phi(zq)
            out.d_mean = -ratio / sd;
            out.d_var = -ratio * zq / (2.0 * h);
          }
        } else {
          out.value = norm_log_cdf(-zq);
          if (with_gradient) {
            const double ratio = norm_hazard_lower(-zq);  // phi(zq) / Phi(-zq)
            out.d_mean = ratio / sd;
            out.d_var = ratio * zq / (2.0 * h);
          }
        }
      }
      break;
    }
    case ScoreKind::MSIS: {
      const double zu = norm_quantile(1.0 - 0.5 * rule.alpha);
      const double lo = m - sd * zu;
      const double hi = m + sd * zu;
      double s = hi - lo;
      const double penalty = 2.0 / rule.alpha;
      if (y < lo) s += penalty * (lo - y);
      if (y > hi) s += penalty * (y - hi);
      out.value = -s;
      if (with_gradient) {
        // s = -[(hi - lo) + penalty terms]; ds/dlo = 1 - penalty 1{y < lo},
        // ds/dhi = -1 + penalty 1{y > hi}; quantiles are m -+ sd zu.
        const double ds_dlo = 1.0 - (y < lo ? penalty : 0.0);
        const double ds_dhi = -1.0 + (y > hi ? penalty : 0.0);
        out.d_mean = ds_dlo + ds_dhi;
        out.d_var = (ds_dhi - ds_dlo) * zu / (2.0 * sd);
      }
      break;
    }
  }
  if (!std::isfinite(out.value)) out.degenerate = true;
  return out;
}

}  // namespace

Vec garch_to_transformed(const GarchParams& p) {
  if (!(p.omega > 0.0) || !(p.alpha > 0.0 && p.alpha < 1.0) || !(p.beta > 0.0 && p.beta < 1.0)) {
    throw std::invalid_argument(
        "garch_to_transformed: need omega > 0 and alpha, beta strictly inside (0, 1)");
  }
  Vec theta(4);
  theta[0] = p.mean;
  theta[1] = std::log(p.omega);
  theta[2] = norm_quantile(p.alpha);
  theta[3] = norm_quantile(p.beta);
  return theta;
}

GarchParams garch_from_transformed(const Vec& theta, double sigma0_sq) {
  if (theta.size() != 4) {
    throw std::invalid_argument("garch_from_transformed: expected 4 coordinates");
  }
  GarchParams p;
  p.mean = theta[0];
  p.omega = std::exp(theta[1]);
  p.alpha = norm_cdf(theta[2]);
  p.beta = norm_cdf(theta[3]);
  p.sigma0_sq = sigma0_sq;
  return p;
}

double garch_variance_step(const GarchParams& p, double y_prev, double h_prev) {
  const double dev = y_prev - p.mean;
  return p.omega + p.alpha * dev * dev + p.beta * h_prev;
}

std::vector<double> garch_filter(const GarchParams& p, const std::vector<double>& y, int n) {
  if (n < 0 || n > static_cast<int>(y.size())) {
    throw std::invalid_argument("garch_filter: window outside the series");
  }
  if (!(p.sigma0_sq > 0.0)) {
    throw std::invalid_argument("garch_filter: sigma0_sq must be strictly positive");
  }
  std::vector<double> h(n + 1);
  h[0] = p.sigma0_sq;
  for (int t = 1; t <= n; ++t) h[t] = garch_variance_step(p, y[t - 1], h[t - 1]);
  return h;
}

std::vector<std::string> GarchModel::parameter_names() const {
  return {"mean", "log_omega", "probit_alpha", "probit_beta"};
}

bool GarchModel::valid_theta(const Vec& theta) const {
  if (!PredictiveModel::valid_theta(theta)) return false;
  const double omega = std::exp(theta[1]);
  const double alpha = norm_cdf(theta[2]);
  const double beta = norm_cdf(theta[3]);
  return std::isfinite(omega) && omega > 0.0 && alpha > 0.0 && alpha < 1.0 && beta > 0.0 &&
         beta < 1.0;
}

double GarchModel::log_prior(const Vec& theta) const {
  // Flat on mean and log omega; uniform on raw alpha, beta, which in probit
  // coordinates is the standard normal density.
  return norm_log_pdf(theta[2]) + norm_log_pdf(theta[3]);
}

Vec GarchModel::prior_gradient(const Vec& theta) const {
  Vec g = Vec::Zero(4);
  g[2] = -theta[2];
  g[3] = -theta[3];
  return g;
}

ConditionalPredictive GarchModel::predictive(const Vec& theta, const DataSet& data, int n) const {
  const GarchParams p = garch_from_transformed(theta, window_variance(data, n));
  const std::vector<double> h = garch_filter(p, data.y, n);
  return Gaussian{p.mean, h[n]};
}

CriterionValue GarchModel::sample_criterion(const ScoringRule& rule, const Vec& theta,
                                            const DataSet& data, int n) const {
  if (n > data.length()) {
    throw std::invalid_argument("sample_criterion: window exceeds the series");
  }
  const GarchParams p = garch_from_transformed(theta, window_variance(data, n));
  CriterionValue out;
  double h = p.sigma0_sq;
  for (int t = 0; t < n; ++t) {
    if (t > 0) h = garch_variance_step(p, data.y[t - 1], h);
    const TermEval e = term_eval(rule, p.mean, h, data.y[t], false);
    if (e.degenerate) {
      ++out.degenerate_terms;
    } else {
      out.value += e.value;
    }
  }
  return out;
}

CriterionEval GarchModel::criterion_eval(const ScoringRule& rule, const Vec& theta,
                                         const DataSet& data, int n) const {
  if (n > data.length()) {
    throw std::invalid_argument("criterion_eval: window exceeds the series");
  }
  const GarchParams p = garch_from_transformed(theta, window_variance(data, n));
  CriterionEval out;
  out.gradient = Vec::Zero(4);
  double g_mean = 0.0, g_omega = 0.0, g_alpha = 0.0, g_beta = 0.0;
  // Variance path and its raw-coordinate sensitivities, all seeded at the
  // constant h[0] (derivatives 0 there).
  double h = p.sigma0_sq;
  double dh_m = 0.0, dh_w = 0.0, dh_a = 0.0, dh_b = 0.0;
  for (int t = 0; t < n; ++t) {
    if (t > 0) {
      const double dev = data.y[t - 1] - p.mean;
      const double h_prev = h;
      h = p.omega + p.alpha * dev * dev + p.beta * h_prev;
      dh_m = -2.0 * p.alpha * dev + p.beta * dh_m;
      dh_w = 1.0 + p.beta * dh_w;
      dh_a = dev * dev + p.beta * dh_a;
      dh_b = h_prev + p.beta * dh_b;
    }
    const TermEval e = term_eval(rule, p.mean, h, data.y[t], true);
    if (e.degenerate || !std::isfinite(e.d_mean) || !std::isfinite(e.d_var)) {
      ++out.degenerate_terms;
      continue;
    }
    out.value += e.value;
    g_mean += e.d_mean + e.d_var * dh_m;
    g_omega += e.d_var * dh_w;
    g_alpha += e.d_var * dh_a;
    g_beta += e.d_var * dh_b;
  }
  out.gradient[0] = g_mean;
  out.gradient[1] = g_omega * p.omega;
  out.gradient[2] = g_alpha * norm_pdf(theta[2]);
  out.gradient[3] = g_beta * norm_pdf(theta[3]);
  return out;
}

Vec GarchModel::initial_guess(const DataSet& data, int n) const {
  const double v = window_variance(data, n);
  GarchParams p;
  p.mean = window_mean(data, n);
  p.omega = 0.1 * v;
  p.alpha = 0.1;
  p.beta = 0.8;
  p.sigma0_sq = v;
  return garch_to_transformed(p);
}

}  // namespace gvp
