#include "gvp/mixture.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

#include "gvp/normal.hpp"

namespace gvp {

namespace {

constexpr double kNegInf = -std::numeric_limits<double>::infinity();

double log_sum_exp(const std::vector<double>& v) {
  double m = kNegInf;
  for (double x : v) m = std::max(m, x);
  if (!std::isfinite(m)) return m;
  double s = 0.0;
  for (double x : v) s += std::exp(x - m);
  return m + std::log(s);
}

// Everything about theta that does not depend on t: raw parameters,
// stick-breaking weights and their v-sensitivities, component stationary
// moments and the chain factors back to transformed coordinates.
struct ThetaWork {
  MixtureParams p;
  int K = 0;
  std::vector<double> log_tau;
  std::vector<double> m_k;                   // stationary means b0/(1-b1)
  std::vector<double> s_k;                   // stationary sds
  std::vector<std::vector<double>> dlt_dv;   // dlt_dv[k][j] = d log tau_k / d v_j
  std::vector<double> dm_db0, dm_db1;        // stationary-mean partials
  std::vector<double> ds_db1, ds_dsig;       // stationary-sd partials
  std::vector<double> db1_deta, dv_dpsi;     // chain factors; dsig/dkappa = sig
  bool valid = false;
};

ThetaWork make_work(const Vec& theta, int K) {
  ThetaWork w;
  w.K = K;
  w.p = mixture_from_transformed(theta, K);
  const auto& p = w.p;
  for (int k = 0; k < K; ++k) {
    if (!std::isfinite(p.intercepts[k]) || !(std::fabs(p.slopes[k]) < 1.0) ||
        !(p.sds[k] > 0.0) || !std::isfinite(p.sds[k])) {
      return w;
    }
  }
  for (double v : p.sticks) {
    if (!(v > 0.0 && v < 1.0)) return w;
  }
  if (!std::isfinite(p.location)) return w;

  std::vector<double> log_v(K - 1), log_1mv(K - 1);
  for (int j = 0; j + 1 < K; ++j) {
    // Phi(psi) in log space keeps sticks usable when psi is far out.
    log_v[j] = norm_log_cdf(theta[2 * K + j]);
    log_1mv[j] = norm_log_cdf(-theta[2 * K + j]);
  }
  w.log_tau.assign(K, 0.0);
  double acc = 0.0;
  for (int k = 0; k < K; ++k) {
    w.log_tau[k] = (k + 1 < K ? log_v[k] : 0.0) + acc;
    if (k + 1 < K) acc += log_1mv[k];
  }

  w.m_k.resize(K);
  w.s_k.resize(K);
  w.dm_db0.resize(K);
  w.dm_db1.resize(K);
  w.ds_db1.resize(K);
  w.ds_dsig.resize(K);
  w.db1_deta.resize(K);
  w.dv_dpsi.resize(K - 1);
  for (int k = 0; k < K; ++k) {
    const double b0 = p.intercepts[k];
    const double b1 = p.slopes[k];
    const double sig = p.sds[k];
    const double one_m = 1.0 - b1;
    const double one_m2 = 1.0 - b1 * b1;
    w.m_k[k] = b0 / one_m;
    w.s_k[k] = sig / std::sqrt(one_m2);
    if (!std::isfinite(w.m_k[k]) || !std::isfinite(w.s_k[k]) || !(w.s_k[k] > 0.0)) return w;
    w.dm_db0[k] = 1.0 / one_m;
    w.dm_db1[k] = b0 / (one_m * one_m);
    w.ds_db1[k] = b1 * sig / (one_m2 * std::sqrt(one_m2));
    w.ds_dsig[k] = 1.0 / std::sqrt(one_m2);
    w.db1_deta[k] = 2.0 * norm_pdf(theta[K + k]);
  }
  for (int j = 0; j + 1 < K; ++j) w.dv_dpsi[j] = norm_pdf(theta[2 * K + j]);

  w.dlt_dv.assign(K, std::vector<double>(std::max(K - 1, 0), 0.0));
  for (int k = 0; k < K; ++k) {
    for (int j = 0; j + 1 < K; ++j) {
      if (j == k && k + 1 < K) {
        w.dlt_dv[k][j] = 1.0 / p.sticks[j];
      } else if (j < k) {
        w.dlt_dv[k][j] = -1.0 / (1.0 - p.sticks[j]);
      }
    }
  }
  w.valid = true;
  return w;
}

// Raw-coordinate gradient accumulators; chained to transformed coordinates
// once per sweep.
struct RawGrad {
  std::vector<double> b0, b1, v, sig;
  double mu = 0.0;
  explicit RawGrad(int K) : b0(K, 0.0), b1(K, 0.0), v(std::max(K - 1, 0), 0.0), sig(K, 0.0) {}
};

// Per-t scratch shared across rules.
struct StepWork {
  std::vector<double> log_c1, w1, u;
  std::vector<double> d1_b0, d1_b1, d1_sig, d1_mu;  // d log c1k / d own raw coords
  std::vector<double> a_k;                          // conditional component means
  std::vector<double> scratch, scratch2;
  explicit StepWork(int K)
      : log_c1(K),
        w1(K),
        u(K),
        d1_b0(K),
        d1_b1(K),
        d1_sig(K),
        d1_mu(K),
        a_k(K),
        scratch(K),
        scratch2(K) {}
};

// Fills the weight layer at time t. Returns false when the weights carry no
// probability mass at all (degenerate step).
bool weight_layer(const ThetaWork& w, double eps_prev, bool with_gradient, StepWork& sw) {
  const int K = w.K;
  for (int k = 0; k < K; ++k) {
    const double u = (eps_prev - w.m_k[k]) / w.s_k[k];
    sw.u[k] = u;
    sw.log_c1[k] = w.log_tau[k] + norm_log_pdf(u) - std::log(w.s_k[k]);
  }
  const double lse = log_sum_exp(sw.log_c1);
  if (!std::isfinite(lse)) return false;
  for (int k = 0; k < K; ++k) sw.w1[k] = std::exp(sw.log_c1[k] - lse);
  if (with_gradient) {
    for (int k = 0; k < K; ++k) {
      const double u = sw.u[k];
      const double inv_s = 1.0 / w.s_k[k];
      const double d_m = u * inv_s;                  // d log c1k / d m_k
      const double d_s = (u * u - 1.0) * inv_s;      // d log c1k / d s_k
      sw.d1_b0[k] = d_m * w.dm_db0[k];
      sw.d1_b1[k] = d_m * w.dm_db1[k] + d_s * w.ds_db1[k];
      sw.d1_sig[k] = d_s * w.ds_dsig[k];
      sw.d1_mu[k] = u * inv_s;  // global location enters u exactly like m_k
    }
  }
  return true;
}

// Adds the gradient of sum_k softmax-style scores of the shape
// log(sum_k exp(log_c1k + log_gk)) - log(sum_k exp(log_c1k)), where d_g* are
// the partials of log_gk wrt the component's own raw coordinates and d_g_mu
// its global-location partial. Used by both the density score and the
// censored-mass score.
void add_ratio_gradient(const ThetaWork& w, const StepWork& sw, const std::vector<double>& w_top,
                        const std::vector<double>& dg_b0, const std::vector<double>& dg_b1,
                        const std::vector<double>& dg_sig, const std::vector<double>& dg_mu,
                        RawGrad& g) {
  const int K = w.K;
  for (int k = 0; k < K; ++k) {
    const double diff = w_top[k] - sw.w1[k];
    g.b0[k] += diff * sw.d1_b0[k] + w_top[k] * dg_b0[k];
    g.b1[k] += diff * sw.d1_b1[k] + w_top[k] * dg_b1[k];
    g.sig[k] += diff * sw.d1_sig[k] + w_top[k] * dg_sig[k];
    g.mu += diff * sw.d1_mu[k] + w_top[k] * dg_mu[k];
  }
  for (int j = 0; j + 1 < K; ++j) {
    double acc = 0.0;
    for (int k = 0; k < K; ++k) acc += (w_top[k] - sw.w1[k]) * w.dlt_dv[k][j];
    g.v[j] += acc;
  }
}

double mixture_weighted_cdf(const StepWork& sw, const ThetaWork& w, double x) {
  double f = 0.0;
  for (int k = 0; k < w.K; ++k) {
    f += sw.w1[k] * norm_cdf((x - sw.a_k[k]) / w.p.sds[k]);
  }
  return f;
}

double mixture_weighted_pdf(const StepWork& sw, const ThetaWork& w, double x) {
  double f = 0.0;
  for (int k = 0; k < w.K; ++k) {
    const double sig = w.p.sds[k];
    f += sw.w1[k] * norm_pdf((x - sw.a_k[k]) / sig) / sig;
  }
  return f;
}

// Quantile of the time-t mixture: bisection to a tight bracket, then a few
// Newton polish steps so downstream gradients see near-exact quantiles.
double step_quantile(const StepWork& sw, const ThetaWork& w, double prob) {
  double lo = std::numeric_limits<double>::infinity();
  double hi = -lo;
  for (int k = 0; k < w.K; ++k) {
    lo = std::min(lo, sw.a_k[k] - 12.0 * w.p.sds[k]);
    hi = std::max(hi, sw.a_k[k] + 12.0 * w.p.sds[k]);
  }
  int doublings = 0;
  while (mixture_weighted_cdf(sw, w, lo) > prob) {
    lo -= (hi - lo);
    if (++doublings > 200) throw std::runtime_error("mixture quantile: no lower bracket");
  }
  while (mixture_weighted_cdf(sw, w, hi) < prob) {
    hi += (hi - lo);
    if (++doublings > 200) throw std::runtime_error("mixture quantile: no upper bracket");
  }
  // Localize by bisection, then bracketed Newton; the tail bisection loop
  // only runs when Newton stalls (vanishing density between modes).
  for (int it = 0; it < 18; ++it) {
    const double mid = 0.5 * (lo + hi);
    if (mid <= lo || mid >= hi) return mid;
    if (mixture_weighted_cdf(sw, w, mid) < prob) {
      lo = mid;
    } else {
      hi = mid;
    }
  }
  double x = 0.5 * (lo + hi);
  for (int it = 0; it < 12; ++it) {
    const double f = mixture_weighted_cdf(sw, w, x) - prob;
    if (f < 0.0) {
      lo = std::max(lo, x);
    } else {
      hi = std::min(hi, x);
    }
    const double d = mixture_weighted_pdf(sw, w, x);
    if (!(d > 0.0)) break;
    const double next = x - f / d;
    if (!(next > lo) || !(next < hi)) break;
    if (std::abs(next - x) <=
        4.0 * std::numeric_limits<double>::epsilon() * (1.0 + std::abs(x))) {
      return next;
    }
    x = next;
  }
  for (int it = 0; it < 60; ++it) {
    const double mid = 0.5 * (lo + hi);
    if (mid <= lo || mid >= hi) break;
    if (mixture_weighted_cdf(sw, w, mid) < prob) {
      lo = mid;
    } else {
      hi = mid;
    }
  }
  return 0.5 * (lo + hi);
}

}  // namespace

std::vector<double> stick_breaking_weights(const std::vector<double>& sticks) {
  for (double v : sticks) {
    if (!(v > 0.0 && v < 1.0)) {
      throw std::invalid_argument("stick_breaking_weights: sticks must lie strictly in (0, 1)");
    }
  }
  const int K = static_cast<int>(sticks.size()) + 1;
  std::vector<double> tau(K);
  double remaining = 1.0;
  for (int k = 0; k + 1 < K; ++k) {
    tau[k] = sticks[k] * remaining;
    remaining *= 1.0 - sticks[k];
  }
  tau[K - 1] = remaining;
  return tau;
}

Vec mixture_to_transformed(const MixtureParams& p) {
  const int K = p.components();
  if (K < 1 || static_cast<int>(p.slopes.size()) != K || static_cast<int>(p.sds.size()) != K ||
      static_cast<int>(p.sticks.size()) != K - 1) {
    throw std::invalid_argument("mixture_to_transformed: component vectors mismatched");
  }
  Vec theta(4 * K);
  for (int k = 0; k < K; ++k) {
    if (!(std::fabs(p.slopes[k]) < 1.0)) {
      throw std::invalid_argument("mixture_to_transformed: slopes must lie strictly in (-1, 1)");
    }
    if (!(p.sds[k] > 0.0)) {
      throw std::invalid_argument("mixture_to_transformed: sds must be strictly positive");
    }
    theta[k] = p.intercepts[k];
    theta[K + k] = norm_quantile(0.5 * (p.slopes[k] + 1.0));
    theta[3 * K - 1 + k] = std::log(p.sds[k]);
  }
  for (int j = 0; j + 1 < K; ++j) {
    if (!(p.sticks[j] > 0.0 && p.sticks[j] < 1.0)) {
      throw std::invalid_argument("mixture_to_transformed: sticks must lie strictly in (0, 1)");
    }
    theta[2 * K + j] = norm_quantile(p.sticks[j]);
  }
  theta[4 * K - 1] = p.location;
  return theta;
}

MixtureParams mixture_from_transformed(const Vec& theta, int K) {
  if (theta.size() != 4 * K) {
    throw std::invalid_argument("mixture_from_transformed: wrong dimension");
  }
  MixtureParams p;
  p.intercepts.resize(K);
  p.slopes.resize(K);
  p.sticks.resize(K - 1);
  p.sds.resize(K);
  for (int k = 0; k < K; ++k) {
    p.intercepts[k] = theta[k];
    p.slopes[k] = 2.0 * norm_cdf(theta[K + k]) - 1.0;
    p.sds[k] = std::exp(theta[3 * K - 1 + k]);
  }
  for (int j = 0; j + 1 < K; ++j) p.sticks[j] = norm_cdf(theta[2 * K + j]);
  p.location = theta[4 * K - 1];
  return p;
}

MixtureModel::MixtureModel(int components) : components_(components) {
  if (components < 1) {
    throw std::invalid_argument("MixtureModel: need at least one component");
  }
}

std::vector<std::string> MixtureModel::parameter_names() const {
  std::vector<std::string> names;
  for (int k = 0; k < components_; ++k) names.push_back("intercept_" + std::to_string(k + 1));
  for (int k = 0; k < components_; ++k) names.push_back("probit_slope_" + std::to_string(k + 1));
  for (int j = 0; j + 1 < components_; ++j) names.push_back("probit_stick_" + std::to_string(j + 1));
  for (int k = 0; k < components_; ++k) names.push_back("log_sd_" + std::to_string(k + 1));
  names.push_back("location");
  return names;
}

bool MixtureModel::valid_theta(const Vec& theta) const {
  if (!PredictiveModel::valid_theta(theta)) return false;
  return make_work(theta, components_).valid;
}

double MixtureModel::log_prior(const Vec& theta) const {
  const int K = components_;
  double lp = 0.0;
  for (int k = 0; k < K; ++k) {
    lp += -theta[k] * theta[k] / 2.0e8;              // intercepts ~ N(0, 10000^2)
    lp += norm_log_pdf(theta[K + k]);                // slopes uniform on (-1, 1)
    const double kap = theta[3 * K - 1 + k];
    lp += -std::exp(-2.0 * kap) - 2.0 * kap;         // precision ~ Gamma(1, 1)
  }
  for (int j = 0; j + 1 < K; ++j) {
    const double psi = theta[2 * K + j];
    lp += norm_log_cdf(-psi) + norm_log_pdf(psi);    // sticks ~ Beta(1, 2)
  }
  const double mu = theta[4 * K - 1];
  lp += -mu * mu / 2.0e4;                            // location ~ N(0, 100^2)
  return lp;
}

Vec MixtureModel::prior_gradient(const Vec& theta) const {
  const int K = components_;
  Vec g = Vec::Zero(4 * K);
  for (int k = 0; k < K; ++k) {
    g[k] = -theta[k] / 1.0e8;
    g[K + k] = -theta[K + k];
    const double kap = theta[3 * K - 1 + k];
    g[3 * K - 1 + k] = 2.0 * std::exp(-2.0 * kap) - 2.0;
  }
  for (int j = 0; j + 1 < K; ++j) {
    const double psi = theta[2 * K + j];
    g[2 * K + j] = -norm_hazard_lower(-psi) - psi;
  }
  g[4 * K - 1] = -theta[4 * K - 1] / 1.0e4;
  return g;
}

bool MixtureModel::supports(const ScoringRule& rule) const {
  return rule.kind != ScoreKind::CRPS;  // no closed-form criterion gradient
}

ConditionalPredictive MixtureModel::predictive(const Vec& theta, const DataSet& data,
                                               int n) const {
  if (n < 1 || n > data.length()) {
    throw std::invalid_argument("mixture predictive: needs one lagged observation");
  }
  ThetaWork w = make_work(theta, components_);
  if (!w.valid) throw std::invalid_argument("mixture predictive: invalid parameter point");
  StepWork sw(components_);
  const double eps_prev = data.y[n - 1] - w.p.location;
  if (!weight_layer(w, eps_prev, false, sw)) {
    throw std::runtime_error("mixture predictive: weights carry no mass at this lag");
  }
  // Components whose weight underflowed to zero are dropped; they carry less
  // than ~1e-300 of the mass.
  std::vector<double> ws, ms, vs;
  for (int k = 0; k < components_; ++k) {
    if (sw.w1[k] > 0.0) {
      ws.push_back(sw.w1[k]);
      ms.push_back(w.p.location + w.p.intercepts[k] + w.p.slopes[k] * eps_prev);
      vs.push_back(w.p.sds[k] * w.p.sds[k]);
    }
  }
  return GaussianMixture(std::move(ws), std::move(ms), std::move(vs));
}

CriterionValue MixtureModel::sample_criterion(const ScoringRule& rule, const Vec& theta,
                                              const DataSet& data, int n) const {
  CriterionEval full = criterion_eval_impl(rule, theta, data, n, false);
  CriterionValue out;
  out.value = full.value;
  out.degenerate_terms = full.degenerate_terms;
  return out;
}

CriterionEval MixtureModel::criterion_eval(const ScoringRule& rule, const Vec& theta,
                                           const DataSet& data, int n) const {
  return criterion_eval_impl(rule, theta, data, n, true);
}

CriterionEval MixtureModel::criterion_eval_impl(const ScoringRule& rule, const Vec& theta,
                                                const DataSet& data, int n,
                                                bool with_gradient) const {
  if (n > data.length()) {
    throw std::invalid_argument("criterion_eval: window exceeds the series");
  }
  if (!supports(rule)) {
    throw std::invalid_argument("mixture model: unsupported scoring rule " + rule.label());
  }
  const int K = components_;
  CriterionEval out;
  out.gradient = Vec::Zero(4 * K);
  ThetaWork w = make_work(theta, K);
  if (!w.valid) {
    out.degenerate_terms = std::max(n - 1, 0);
    return out;
  }
  StepWork sw(K);
  RawGrad g(K);
  std::vector<double>& top = sw.scratch;
  std::vector<double>& dg_b0 = sw.scratch2;
  std::vector<double> dg_b1(K), dg_sig(K), dg_mu(K), log_top(K);
  const double penalty = 2.0 / rule.alpha;
  const double mu = w.p.location;

  for (int t = 1; t < n; ++t) {
    const double eps_prev = data.y[t - 1] - mu;
    const double y = data.y[t];
    if (!weight_layer(w, eps_prev, with_gradient, sw)) {
      ++out.degenerate_terms;
      continue;
    }
    for (int k = 0; k < K; ++k) {
      sw.a_k[k] = mu + w.p.intercepts[k] + w.p.slopes[k] * eps_prev;
    }

    const bool density_branch =
        rule.kind == ScoreKind::LS ||
        (rule.kind == ScoreKind::CLS &&
         (rule.tail == Tail::Lower ? y < *rule.threshold : y > *rule.threshold));

    if (density_branch) {
      // log of the weighted predictive density at y.
      for (int k = 0; k < K; ++k) {
        const double sig = w.p.sds[k];
        const double v2 = (y - sw.a_k[k]) / sig;
        log_top[k] = sw.log_c1[k] + norm_log_pdf(v2) - std::log(sig);
        if (with_gradient) {
          dg_b0[k] = v2 / sig;
          dg_b1[k] = v2 * eps_prev / sig;
          dg_sig[k] = (v2 * v2 - 1.0) / sig;
          dg_mu[k] = v2 * (1.0 - w.p.slopes[k]) / sig;
        }
      }
      const double lse_top = log_sum_exp(log_top);
      const double lse_bot = log_sum_exp(sw.log_c1);
      if (!std::isfinite(lse_top)) {
        ++out.degenerate_terms;
        continue;
      }
      out.value += lse_top - lse_bot;
      if (with_gradient) {
        for (int k = 0; k < K; ++k) top[k] = std::exp(log_top[k] - lse_top);
        add_ratio_gradient(w, sw, top, dg_b0, dg_b1, dg_sig, dg_mu, g);
      }
    } else if (rule.kind == ScoreKind::CLS) {
      // Censored branch: only the mass the predictive puts on the kept side
      // of the threshold enters.
      const double q = *rule.threshold;
      const bool upper = rule.tail == Tail::Upper;
      for (int k = 0; k < K; ++k) {
        const double sig = w.p.sds[k];
        const double v3 = (q - sw.a_k[k]) / sig;
        log_top[k] = sw.log_c1[k] + (upper ? norm_log_cdf(v3) : norm_log_cdf(-v3));
        if (with_gradient) {
          const double fac = upper ? norm_hazard_lower(v3) : -norm_hazard_lower(-v3);
          dg_b0[k] = fac * (-1.0 / sig);
          dg_b1[k] = fac * (-eps_prev / sig);
          dg_sig[k] = fac * (-v3 / sig);
          dg_mu[k] = fac * ((w.p.slopes[k] - 1.0) / sig);
        }
      }
      const double lse_top = log_sum_exp(log_top);
      const double lse_bot = log_sum_exp(sw.log_c1);
      if (!std::isfinite(lse_top)) {
        ++out.degenerate_terms;
        continue;
      }
      out.value += lse_top - lse_bot;
      if (with_gradient) {
        for (int k = 0; k < K; ++k) top[k] = std::exp(log_top[k] - lse_top);
        add_ratio_gradient(w, sw, top, dg_b0, dg_b1, dg_sig, dg_mu, g);
      }
    } else {  // MSIS
      const double lo = step_quantile(sw, w, 0.5 * rule.alpha);
      const double hi = step_quantile(sw, w, 1.0 - 0.5 * rule.alpha);
      double s = hi - lo;
      if (y < lo) s += penalty * (lo - y);
      if (y > hi) s += penalty * (y - hi);
      out.value += -s;
      if (with_gradient) {
        const double ds_dlo = 1.0 - (y < lo ? penalty : 0.0);
        const double ds_dhi = -1.0 + (y > hi ? penalty : 0.0);
        // For each quantile x: dx/dparam = -(dF(x)/dparam) / p(x), with F the
        // time-t mixture cdf at fixed x.
        for (int pass = 0; pass < 2; ++pass) {
          const double x = pass == 0 ? lo : hi;
          const double coef = pass == 0 ? ds_dlo : ds_dhi;
          const double dens = mixture_weighted_pdf(sw, w, x);
          if (!(dens > 0.0)) continue;
          const double F = mixture_weighted_cdf(sw, w, x);
          const double scale = -coef / dens;
          double dF_mu = 0.0;
          for (int k = 0; k < K; ++k) {
            const double sig = w.p.sds[k];
            const double z = (x - sw.a_k[k]) / sig;
            const double Nk = norm_pdf(z) / sig;
            const double Ck = norm_cdf(z);
            const double wk = sw.w1[k];
            const double reweight = Ck - F;
            g.b0[k] += scale * wk * (-Nk + sw.d1_b0[k] * reweight);
            g.b1[k] += scale * wk * (-eps_prev * Nk + sw.d1_b1[k] * reweight);
            g.sig[k] += scale * wk * (-z * Nk + sw.d1_sig[k] * reweight);
            dF_mu += wk * (-(1.0 - w.p.slopes[k]) * Nk + sw.d1_mu[k] * reweight);
            top[k] = Ck;  // reused below for the stick block
          }
          g.mu += scale * dF_mu;
          for (int j = 0; j + 1 < K; ++j) {
            double dbar = 0.0, dF_v = 0.0;
            for (int k = 0; k < K; ++k) dbar += sw.w1[k] * w.dlt_dv[k][j];
            for (int k = 0; k < K; ++k) dF_v += sw.w1[k] * top[k] * (w.dlt_dv[k][j] - dbar);
            g.v[j] += scale * dF_v;
          }
        }
      }
    }
  }

  if (with_gradient) {
    for (int k = 0; k < K; ++k) {
      out.gradient[k] = g.b0[k];
      out.gradient[K + k] = g.b1[k] * w.db1_deta[k];
      out.gradient[3 * K - 1 + k] = g.sig[k] * w.p.sds[k];
    }
    for (int j = 0; j + 1 < K; ++j) out.gradient[2 * K + j] = g.v[j] * w.dv_dpsi[j];
    out.gradient[4 * K - 1] = g.mu;
  }
  return out;
}

Vec MixtureModel::initial_guess(const DataSet& data, int n) const {
  const int K = components_;
  const double med = window_quantile(data, n, 0.5);
  const double sd = std::sqrt(window_variance(data, n));
  MixtureParams p;
  p.location = med;
  p.intercepts.resize(K);
  p.slopes.assign(K, 0.3);
  p.sds.assign(K, 0.5 * sd);
  p.sticks.resize(K - 1);
  // Spread intercepts over the window's quantiles so components start in
  // distinct parts of the data range; equal starting weights.
  for (int k = 0; k < K; ++k) {
    const double level = (k + 1.0) / (K + 1.0);
    p.intercepts[k] = (window_quantile(data, n, level) - med) * (1.0 - p.slopes[k]);
  }
  for (int j = 0; j + 1 < K; ++j) p.sticks[j] = 1.0 / (K - j);
  return mixture_to_transformed(p);
}

}  // namespace gvp
