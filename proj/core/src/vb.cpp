#include "gvp/vb.hpp"

#include <cmath>
#include <stdexcept>

namespace gvp {

namespace {

constexpr double kLog2Pi = 1.8378770664093454835606594;

bool all_finite(const Vec& v) {
  for (int i = 0; i < v.size(); ++i) {
    if (!std::isfinite(v[i])) return false;
  }
  return true;
}

}  // namespace

double VariationalParams::log_density(const Vec& theta) const {
  double lp = 0.0;
  for (int i = 0; i < mu.size(); ++i) {
    const double d2 = d[i] * d[i];
    if (!(d2 > 0.0)) {
      throw std::domain_error("VariationalParams: zero scale has no density");
    }
    const double dev = theta[i] - mu[i];
    lp += -0.5 * (kLog2Pi + std::log(d2)) - dev * dev / (2.0 * d2);
  }
  return lp;
}

Vec VariationalParams::grad_log_density(const Vec& theta) const {
  Vec g(mu.size());
  for (int i = 0; i < mu.size(); ++i) {
    const double d2 = d[i] * d[i];
    if (!(d2 > 0.0)) {
      throw std::domain_error("VariationalParams: zero scale has no density");
    }
    g[i] = -(theta[i] - mu[i]) / d2;
  }
  return g;
}

Vec AdadeltaState::step(const Vec& grad, const AdadeltaConfig& cfg) {
  Vec out(grad.size());
  for (int i = 0; i < grad.size(); ++i) {
    grad_sq[i] = cfg.decay * grad_sq[i] + (1.0 - cfg.decay) * grad[i] * grad[i];
    const double rate =
        std::sqrt(step_sq[i] + cfg.epsilon) / std::sqrt(grad_sq[i] + cfg.epsilon);
    out[i] = rate * grad[i];  // ascent
    step_sq[i] = cfg.decay * step_sq[i] + (1.0 - cfg.decay) * out[i] * out[i];
  }
  return out;
}

Vec elbo_gradient_estimate(const PredictiveModel& model, const ScoringRule& rule,
                           const DataSet& data, int n, const VariationalParams& lambda,
                           const Vec& eps, double weight, int* degenerate_terms) {
  const int r = lambda.dim();
  const Vec theta = lambda.draw(eps);
  const CriterionEval crit = model.criterion_eval(rule, theta, data, n);
  if (degenerate_terms) *degenerate_terms = crit.degenerate_terms;
  const Vec g_theta =
      weight * crit.gradient + model.prior_gradient(theta) - lambda.grad_log_density(theta);
  Vec g(2 * r);
  // d theta / d lambda = [I | diag(eps)], so the d-block is eps o g_theta.
  for (int i = 0; i < r; ++i) {
    g[i] = g_theta[i];
    g[r + i] = eps[i] * g_theta[i];
  }
  return g;
}

VbResult calibrate(const PredictiveModel& model, const ScoringRule& rule, const DataSet& data,
                   int n, const VariationalParams& init, const VbConfig& cfg) {
  if (!model.supports(rule)) {
    throw std::invalid_argument("calibrate: model cannot be fit under rule " + rule.label());
  }
  if (rule.needs_threshold() && !rule.threshold) {
    throw std::logic_error("calibrate: censored rule used before bind_threshold()");
  }
  const int r = model.dim();
  if (init.dim() != r) throw std::invalid_argument("calibrate: init dimension mismatch");

  VbResult res;
  res.lambda = init;
  res.elbo_trace.reserve(cfg.iterations);
  AdadeltaState ada(2 * r);
  Rng rng(cfg.seed);
  Vec eps(r);

  for (int it = 0; it < cfg.iterations; ++it) {
    Vec grad = Vec::Zero(2 * r);
    double bound = 0.0;
    int usable = 0;
    for (int rep = 0; rep < cfg.draws_per_gradient; ++rep) {
      for (int i = 0; i < r; ++i) eps[i] = draw_normal(rng);
      const Vec theta = res.lambda.draw(eps);
      if (!model.valid_theta(theta)) continue;
      int degenerate = 0;
      Vec g;
      double b;
      try {
        g = elbo_gradient_estimate(model, rule, data, n, res.lambda, eps, cfg.criterion_weight,
                                   &degenerate);
        const CriterionValue crit = model.sample_criterion(rule, theta, data, n);
        b = cfg.criterion_weight * crit.value + model.log_prior(theta) -
            res.lambda.log_density(theta);
      } catch (const std::exception&) {
        continue;
      }
      if (!all_finite(g) || !std::isfinite(b)) continue;
      res.degenerate_terms += degenerate;
      grad += g;
      bound += b;
      ++usable;
    }
    if (usable == 0) {
      ++res.skipped;
      continue;
    }
    grad /= usable;
    bound /= usable;
    const Vec delta = ada.step(grad, cfg.adadelta);
    res.lambda.mu += delta.head(r);
    res.lambda.d += delta.tail(r);  // sign-free; scale enters the density as d^2
    res.elbo_trace.push_back(bound);
  }

  if (res.skipped > cfg.max_skip_fraction * cfg.iterations) {
    throw std::runtime_error("calibrate: more than half of the gradient steps were unusable");
  }
  return res;
}

VariationalParams default_init(const PredictiveModel& model, const DataSet& data, int n,
                               double initial_scale) {
  VariationalParams lambda;
  lambda.mu = model.initial_guess(data, n);
  lambda.d = Vec::Constant(model.dim(), initial_scale);
  return lambda;
}

std::vector<Vec> sample_variational(const VariationalParams& lambda, const PredictiveModel& model,
                                    int count, std::uint64_t seed) {
  if (count < 1) throw std::invalid_argument("sample_variational: count must be positive");
  Rng rng(seed);
  std::vector<Vec> draws;
  draws.reserve(count);
  Vec eps(lambda.dim());
  int needed_redraw = 0;
  const int redraw_budget = 64;
  for (int m = 0; m < count; ++m) {
    bool redrew = false;
    for (int attempt = 0;; ++attempt) {
      if (attempt >= redraw_budget) {
        throw std::runtime_error("sample_variational: a draw never reached the valid region");
      }
      for (int i = 0; i < lambda.dim(); ++i) eps[i] = draw_normal(rng);
      Vec theta = lambda.draw(eps);
      if (model.valid_theta(theta)) {
        draws.push_back(std::move(theta));
        break;
      }
      redrew = true;
    }
    if (redrew) ++needed_redraw;
  }
  if (needed_redraw * 100 > count) {
    throw std::runtime_error(
        "sample_variational: more than 1% of draws left the valid parameter region");
  }
  return draws;
}

double smoothed_tail_mean(const std::vector<double>& trace, int window) {
  if (trace.empty() || window < 1) return 0.0;
  const int w = std::min<int>(window, static_cast<int>(trace.size()));
  double s = 0.0;
  for (int i = static_cast<int>(trace.size()) - w; i < static_cast<int>(trace.size()); ++i) {
    s += trace[i];
  }
  return s / w;
}

}  // namespace gvp
