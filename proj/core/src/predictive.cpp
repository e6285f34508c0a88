#include "gvp/predictive.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

#include "gvp/normal.hpp"

namespace gvp {

namespace {

constexpr double kTailZ = 12.0;  // support box half-width in member sd units

double log_sum_exp(const std::vector<double>& v) {
  double m = -std::numeric_limits<double>::infinity();
  for (double x : v) m = std::max(m, x);
  if (!std::isfinite(m)) return m;
  double s = 0.0;
  for (double x : v) s += std::exp(x - m);
  return m + std::log(s);
}

double log_pdf_of(const Gaussian& g, double x) {
  const double sd = std::sqrt(g.var);
  return norm_log_pdf((x - g.mean) / sd) - std::log(sd);
}

double log_pdf_of(const GaussianMixture& m, double x) {
  std::vector<double> terms(m.components());
  for (int k = 0; k < m.components(); ++k) {
    terms[k] =
        m.log_weights()[k] + norm_log_pdf((x - m.means()[k]) / m.sds()[k]) - std::log(m.sds()[k]);
  }
  return log_sum_exp(terms);
}

double cdf_of(const Gaussian& g, double x) { return norm_cdf((x - g.mean) / std::sqrt(g.var)); }

double cdf_of(const GaussianMixture& m, double x) {
  double s = 0.0;
  for (int k = 0; k < m.components(); ++k) {
    s += m.weights()[k] * norm_cdf((x - m.means()[k]) / m.sds()[k]);
  }
  return s;
}

double log_cdf_of(const Gaussian& g, double x) {
  return norm_log_cdf((x - g.mean) / std::sqrt(g.var));
}

double log_cdf_of(const GaussianMixture& m, double x) {
  std::vector<double> terms(m.components());
  for (int k = 0; k < m.components(); ++k) {
    terms[k] = m.log_weights()[k] + norm_log_cdf((x - m.means()[k]) / m.sds()[k]);
  }
  return log_sum_exp(terms);
}

double log_ccdf_of(const Gaussian& g, double x) {
  return norm_log_cdf(-(x - g.mean) / std::sqrt(g.var));
}

double log_ccdf_of(const GaussianMixture& m, double x) {
  std::vector<double> terms(m.components());
  for (int k = 0; k < m.components(); ++k) {
    terms[k] = m.log_weights()[k] + norm_log_cdf(-(x - m.means()[k]) / m.sds()[k]);
  }
  return log_sum_exp(terms);
}

double mean_of(const Gaussian& g) { return g.mean; }

double mean_of(const GaussianMixture& m) {
  double s = 0.0;
  for (int k = 0; k < m.components(); ++k) s += m.weights()[k] * m.means()[k];
  return s;
}

double variance_of(const Gaussian& g) { return g.var; }

double variance_of(const GaussianMixture& m) {
  const double mu = mean_of(m);
  double s = 0.0;
  for (int k = 0; k < m.components(); ++k) {
    const double dm = m.means()[k] - mu;
    s += m.weights()[k] * (m.vars()[k] + dm * dm);
  }
  return s;
}

template <typename F>
double over_members(const Ensemble& e, F&& f) {
  // Averages f over members without materializing variant copies.
  double s = 0.0;
  for (const auto& member : e.members) {
    s += std::visit([&](const auto& g) { return f(g); }, member);
  }
  return s / static_cast<double>(e.members.size());
}

template <typename F>
double lse_over_members(const Ensemble& e, F&& f) {
  std::vector<double> terms;
  terms.reserve(e.members.size());
  for (const auto& member : e.members) {
    terms.push_back(std::visit([&](const auto& g) { return f(g); }, member));
  }
  return log_sum_exp(terms) - std::log(static_cast<double>(e.members.size()));
}

}  // namespace

GaussianMixture::GaussianMixture(std::vector<double> weights, std::vector<double> means,
                                 std::vector<double> vars)
    : weights_(std::move(weights)), means_(std::move(means)), vars_(std::move(vars)) {
  const auto k = means_.size();
  if (k == 0 || weights_.size() != k || vars_.size() != k) {
    throw std::invalid_argument("GaussianMixture: component vectors empty or mismatched");
  }
  double total = 0.0;
  for (double w : weights_) {
    if (!(w > 0.0) || !std::isfinite(w)) {
      throw std::invalid_argument("GaussianMixture: weights must be positive and finite");
    }
    total += w;
  }
  sds_.resize(k);
  log_weights_.resize(k);
  for (std::size_t i = 0; i < k; ++i) {
    if (!(vars_[i] > 0.0) || !std::isfinite(vars_[i]) || !std::isfinite(means_[i])) {
      throw std::invalid_argument("GaussianMixture: means must be finite, variances positive");
    }
    weights_[i] /= total;
    log_weights_[i] = std::log(weights_[i]);
    sds_[i] = std::sqrt(vars_[i]);
  }
}

double log_pdf(const ConditionalPredictive& p, double x) {
  return std::visit(
      [x](const auto& d) -> double {
        using T = std::decay_t<decltype(d)>;
        if constexpr (std::is_same_v<T, Ensemble>) {
          return lse_over_members(d, [x](const auto& g) { return log_pdf_of(g, x); });
        } else {
          return log_pdf_of(d, x);
        }
      },
      p);
}

double pdf(const ConditionalPredictive& p, double x) { return std::exp(log_pdf(p, x)); }

double cdf(const ConditionalPredictive& p, double x) {
  return std::visit(
      [x](const auto& d) -> double {
        using T = std::decay_t<decltype(d)>;
        if constexpr (std::is_same_v<T, Ensemble>) {
          return over_members(d, [x](const auto& g) { return cdf_of(g, x); });
        } else {
          return cdf_of(d, x);
        }
      },
      p);
}

double log_cdf(const ConditionalPredictive& p, double x) {
  return std::visit(
      [x](const auto& d) -> double {
        using T = std::decay_t<decltype(d)>;
        if constexpr (std::is_same_v<T, Ensemble>) {
          return lse_over_members(d, [x](const auto& g) { return log_cdf_of(g, x); });
        } else {
          return log_cdf_of(d, x);
        }
      },
      p);
}

double log_ccdf(const ConditionalPredictive& p, double x) {
  return std::visit(
      [x](const auto& d) -> double {
        using T = std::decay_t<decltype(d)>;
        if constexpr (std::is_same_v<T, Ensemble>) {
          return lse_over_members(d, [x](const auto& g) { return log_ccdf_of(g, x); });
        } else {
          return log_ccdf_of(d, x);
        }
      },
      p);
}

double mean(const ConditionalPredictive& p) {
  return std::visit(
      [](const auto& d) -> double {
        using T = std::decay_t<decltype(d)>;
        if constexpr (std::is_same_v<T, Ensemble>) {
          return over_members(d, [](const auto& g) { return mean_of(g); });
        } else {
          return mean_of(d);
        }
      },
      p);
}

double variance(const ConditionalPredictive& p) {
  return std::visit(
      [](const auto& d) -> double {
        using T = std::decay_t<decltype(d)>;
        if constexpr (std::is_same_v<T, Ensemble>) {
          const double mu = over_members(d, [](const auto& g) { return mean_of(g); });
          return over_members(d, [mu](const auto& g) {
            const double dm = mean_of(g) - mu;
            return variance_of(g) + dm * dm;
          });
        } else {
          return variance_of(d);
        }
      },
      p);
}

void support_bounds(const ConditionalPredictive& p, double* lo, double* hi) {
  double lo_acc = std::numeric_limits<double>::infinity();
  double hi_acc = -std::numeric_limits<double>::infinity();
  auto take = [&](double m, double sd) {
    lo_acc = std::min(lo_acc, m - kTailZ * sd);
    hi_acc = std::max(hi_acc, m + kTailZ * sd);
  };
  auto handle = [&](const auto& d) {
    using T = std::decay_t<decltype(d)>;
    if constexpr (std::is_same_v<T, Gaussian>) {
      take(d.mean, std::sqrt(d.var));
    } else {
      for (int k = 0; k < d.components(); ++k) take(d.means()[k], d.sds()[k]);
    }
  };
  if (const auto* e = std::get_if<Ensemble>(&p)) {
    for (const auto& member : e->members) std::visit(handle, member);
  } else if (const auto* g = std::get_if<Gaussian>(&p)) {
    handle(*g);
  } else {
    handle(std::get<GaussianMixture>(p));
  }
  *lo = lo_acc;
  *hi = hi_acc;
}

double quantile(const ConditionalPredictive& p, double prob) {
  if (!(prob > 0.0 && prob < 1.0)) {
    throw std::invalid_argument("quantile: probability must lie strictly inside (0, 1)");
  }
  if (const auto* g = std::get_if<Gaussian>(&p)) {
    return g->mean + std::sqrt(g->var) * norm_quantile(prob);
  }
  double lo, hi;
  support_bounds(p, &lo, &hi);
  int doublings = 0;
  while (cdf(p, lo) > prob) {
    const double width = hi - lo;
    lo -= width;
    if (++doublings > 200) throw std::runtime_error("quantile: no lower bracket found");
  }
  while (cdf(p, hi) < prob) {
    const double width = hi - lo;
    hi += width;
    if (++doublings > 200) throw std::runtime_error("quantile: no upper bracket found");
  }
  // Bisection to localize, one bracketed Newton pass on the cdf, then pure
  // bisection to floating-point resolution if Newton stalled (vanishing
  // density, plateau edges).
  for (int it = 0; it < 20; ++it) {
    const double mid = 0.5 * (lo + hi);
    if (mid <= lo || mid >= hi) return mid;
    if (cdf(p, mid) < prob) {
      lo = mid;
    } else {
      hi = mid;
    }
  }
  double x = 0.5 * (lo + hi);
  for (int step = 0; step < 12; ++step) {
    const double f = cdf(p, x) - prob;
    if (f < 0.0) {
      lo = std::max(lo, x);
    } else {
      hi = std::min(hi, x);
    }
    const double dens = pdf(p, x);
    if (!(dens > 0.0)) break;
    const double next = x - f / dens;
    if (!(next > lo) || !(next < hi)) break;
    if (std::abs(next - x) <=
        4.0 * std::numeric_limits<double>::epsilon() * (1.0 + std::abs(x))) {
      return next;
    }
    x = next;
  }
  for (int it = 0; it < 200; ++it) {
    const double mid = 0.5 * (lo + hi);
    if (mid <= lo || mid >= hi) break;
    if (cdf(p, mid) < prob) {
      lo = mid;
    } else {
      hi = mid;
    }
  }
  return 0.5 * (lo + hi);
}

}  // namespace gvp
