#include "gvp/bnn.hpp"

#include <cmath>
#include <stdexcept>

#include "gvp/normal.hpp"
#include "gvp/rng.hpp"

namespace gvp {

namespace {

constexpr double kSqrtPi = 1.7724538509055160272981675;

double act(Activation a, double x) {
  return a == Activation::Tanh ? std::tanh(x) : 1.0 / (1.0 + std::exp(-x));
}

double act_grad_from_value(Activation a, double v) {
  return a == Activation::Tanh ? 1.0 - v * v : v * (1.0 - v);
}

// Forward pass caches; layer activations are kept for the backward sweep.
struct NetWork {
  std::vector<double> a1, a2;
  std::vector<double> delta1, delta2;
};

}  // namespace

BnnModel::BnnModel(BnnSpec spec, Standardization standardization)
    : spec_(std::move(spec)), standardization_(std::move(standardization)) {
  if (spec_.width < 1) throw std::invalid_argument("BnnModel: width must be at least 1");
  const int p = spec_.inputs();
  if (static_cast<int>(standardization_.mean.size()) != p ||
      static_cast<int>(standardization_.sd.size()) != p) {
    throw std::invalid_argument("BnnModel: standardization constants mismatch the input layout");
  }
  for (double s : standardization_.sd) {
    if (!(s > 0.0)) throw std::invalid_argument("BnnModel: standardization scales must be > 0");
  }
}

Standardization BnnModel::standardization_from(const BnnSpec& spec, const DataSet& data, int n) {
  const int p = spec.inputs();
  if (n < 3 || n > data.length()) {
    throw std::invalid_argument("BnnModel: estimation window too short to standardize inputs");
  }
  for (int c : spec.covariate_cols) {
    if (c < 0 || c >= data.covariates()) {
      throw std::invalid_argument("BnnModel: covariate column index out of range");
    }
  }
  Standardization s;
  s.mean.assign(p, 0.0);
  s.sd.assign(p, 0.0);
  const int rows = n - 1;  // inputs exist for t = 1..n-1
  for (int t = 1; t < n; ++t) {
    s.mean[0] += data.y[t - 1];
    for (std::size_t j = 0; j < spec.covariate_cols.size(); ++j) {
      s.mean[j + 1] += data.x[spec.covariate_cols[j]][t];
    }
  }
  for (int j = 0; j < p; ++j) s.mean[j] /= rows;
  for (int t = 1; t < n; ++t) {
    const double d0 = data.y[t - 1] - s.mean[0];
    s.sd[0] += d0 * d0;
    for (std::size_t j = 0; j < spec.covariate_cols.size(); ++j) {
      const double d = data.x[spec.covariate_cols[j]][t] - s.mean[j + 1];
      s.sd[j + 1] += d * d;
    }
  }
  for (int j = 0; j < p; ++j) {
    s.sd[j] = std::sqrt(s.sd[j] / rows);
    if (!(s.sd[j] > 0.0)) s.sd[j] = 1.0;  // constant input: leave it unscaled
  }
  return s;
}

int BnnModel::dim() const {
  const int r = spec_.width;
  const int p = spec_.inputs();
  return r * p + r + r * r + r + r + 1 + 1;
}

std::vector<std::string> BnnModel::parameter_names() const {
  const int r = spec_.width;
  const int p = spec_.inputs();
  std::vector<std::string> names;
  for (int i = 0; i < r; ++i)
    for (int j = 0; j < p; ++j)
      names.push_back("w1_" + std::to_string(i + 1) + "_" + std::to_string(j + 1));
  for (int i = 0; i < r; ++i) names.push_back("b1_" + std::to_string(i + 1));
  for (int i = 0; i < r; ++i)
    for (int j = 0; j < r; ++j)
      names.push_back("w2_" + std::to_string(i + 1) + "_" + std::to_string(j + 1));
  for (int i = 0; i < r; ++i) names.push_back("b2_" + std::to_string(i + 1));
  for (int i = 0; i < r; ++i) names.push_back("w_out_" + std::to_string(i + 1));
  names.push_back("b_out");
  names.push_back("log_sd");
  return names;
}

bool BnnModel::valid_theta(const Vec& theta) const {
  if (!PredictiveModel::valid_theta(theta)) return false;
  const double sig = std::exp(theta[dim() - 1]);
  return std::isfinite(sig) && sig > 0.0;
}

void BnnModel::input_at(const DataSet& data, int t, std::vector<double>* z) const {
  z->resize(spec_.inputs());
  (*z)[0] = (data.y[t - 1] - standardization_.mean[0]) / standardization_.sd[0];
  for (std::size_t j = 0; j < spec_.covariate_cols.size(); ++j) {
    (*z)[j + 1] = (data.x[spec_.covariate_cols[j]][t] - standardization_.mean[j + 1]) /
                  standardization_.sd[j + 1];
  }
}

namespace {

// Offsets into the packed weight vector.
struct Layout {
  int r, p;
  int w1() const { return 0; }
  int b1() const { return r * p; }
  int w2() const { return r * p + r; }
  int b2() const { return r * p + r + r * r; }
  int w_out() const { return r * p + 2 * r + r * r; }
  int b_out() const { return r * p + 3 * r + r * r; }
};

double forward(const Vec& theta, const Layout& L, Activation a, const std::vector<double>& z,
               NetWork* net) {
  net->a1.resize(L.r);
  net->a2.resize(L.r);
  for (int i = 0; i < L.r; ++i) {
    double pre = theta[L.b1() + i];
    for (int j = 0; j < L.p; ++j) pre += theta[L.w1() + i * L.p + j] * z[j];
    net->a1[i] = act(a, pre);
  }
  for (int i = 0; i < L.r; ++i) {
    double pre = theta[L.b2() + i];
    for (int j = 0; j < L.r; ++j) pre += theta[L.w2() + i * L.r + j] * net->a1[j];
    net->a2[i] = act(a, pre);
  }
  double g = theta[L.b_out()];
  for (int i = 0; i < L.r; ++i) g += theta[L.w_out() + i] * net->a2[i];
  return g;
}

// Accumulates coef * dg/dweights into grad via one reverse sweep.
void backward(const Vec& theta, const Layout& L, Activation a, const std::vector<double>& z,
              NetWork* net, double coef, Vec& grad) {
  net->delta2.resize(L.r);
  net->delta1.resize(L.r);
  for (int i = 0; i < L.r; ++i) {
    net->delta2[i] = theta[L.w_out() + i] * act_grad_from_value(a, net->a2[i]);
  }
  for (int j = 0; j < L.r; ++j) {
    double back = 0.0;
    for (int i = 0; i < L.r; ++i) back += theta[L.w2() + i * L.r + j] * net->delta2[i];
    net->delta1[j] = back * act_grad_from_value(a, net->a1[j]);
  }
  for (int i = 0; i < L.r; ++i) {
    grad[L.w_out() + i] += coef * net->a2[i];
    for (int j = 0; j < L.r; ++j) grad[L.w2() + i * L.r + j] += coef * net->delta2[i] * net->a1[j];
    grad[L.b2() + i] += coef * net->delta2[i];
    for (int j = 0; j < L.p; ++j) grad[L.w1() + i * L.p + j] += coef * net->delta1[i] * z[j];
    grad[L.b1() + i] += coef * net->delta1[i];
  }
  grad[L.b_out()] += coef;
}

}  // namespace

ConditionalPredictive BnnModel::predictive(const Vec& theta, const DataSet& data, int n) const {
  if (n < 1 || n > data.length()) {
    throw std::invalid_argument("bnn predictive: needs one lagged observation");
  }
  if (!spec_.covariate_cols.empty() && n == data.length()) {
    throw std::invalid_argument(
        "bnn predictive: no covariate row observed yet for this prediction step");
  }
  std::vector<double> z;
  input_at(data, n, &z);
  const Layout L{spec_.width, spec_.inputs()};
  NetWork net;
  const double g = forward(theta, L, spec_.activation, z, &net);
  const double sig = std::exp(theta[dim() - 1]);
  return Gaussian{g, sig * sig};
}

CriterionValue BnnModel::sample_criterion(const ScoringRule& rule, const Vec& theta,
                                          const DataSet& data, int n) const {
  CriterionEval full = criterion_eval_impl(rule, theta, data, n, false);
  return CriterionValue{full.value, full.degenerate_terms};
}

CriterionEval BnnModel::criterion_eval(const ScoringRule& rule, const Vec& theta,
                                       const DataSet& data, int n) const {
  return criterion_eval_impl(rule, theta, data, n, true);
}

CriterionEval BnnModel::criterion_eval_impl(const ScoringRule& rule, const Vec& theta,
                                            const DataSet& data, int n,
                                            bool with_gradient) const {
  if (n > data.length()) {
    throw std::invalid_argument("criterion_eval: window exceeds the series");
  }
  const int d = dim();
  CriterionEval out;
  out.gradient = Vec::Zero(d);
  const Layout L{spec_.width, spec_.inputs()};
  const double c = theta[d - 1];
  const double sig = std::exp(c);
  if (!(sig > 0.0) || !std::isfinite(sig)) {
    out.degenerate_terms = std::max(n - 1, 0);
    return out;
  }
  const double var = sig * sig;
  const double zu = rule.kind == ScoreKind::MSIS ? norm_quantile(1.0 - 0.5 * rule.alpha) : 0.0;
  const double penalty = 2.0 / rule.alpha;
  std::vector<double> z;
  NetWork net;
  for (int t = 1; t < n; ++t) {
    input_at(data, t, &z);
    const double g = forward(theta, L, spec_.activation, z, &net);
    const double y = data.y[t];
    double value = 0.0;
    double d_g = 0.0;  // partial wrt the network output
    double d_c = 0.0;  // partial wrt log sig
    const double zt = (y - g) / sig;
    switch (rule.kind) {
      case ScoreKind::LS: {
        value = norm_log_pdf(zt) - c;
        d_g = (y - g) / var;
        d_c = -1.0 + zt * zt;
        break;
      }
      case ScoreKind::CRPS: {
        const double b = zt * (2.0 * norm_cdf(zt) - 1.0) + 2.0 * norm_pdf(zt) - 1.0 / kSqrtPi;
        value = -sig * b;
        d_g = 2.0 * norm_cdf(zt) - 1.0;
        d_c = -sig * (2.0 * norm_pdf(zt) - 1.0 / kSqrtPi);
        break;
      }
      case ScoreKind::CLS: {
        const double q = *rule.threshold;
        const bool in_region = rule.tail == Tail::Lower ? y < q : y > q;
        if (in_region) {
          value = norm_log_pdf(zt) - c;
          d_g = (y - g) / var;
          d_c = -1.0 + zt * zt;
        } else {
          const double zq = (q - g) / sig;
          if (rule.tail == Tail::Upper) {
            value = norm_log_cdf(zq);
            const double ratio = norm_hazard_lower(zq);
            d_g = -ratio / sig;
            d_c = -ratio * zq;
          } else {
            value = norm_log_cdf(-zq);
            const double ratio = norm_hazard_lower(-zq);
            d_g = ratio / sig;
            d_c = ratio * zq;
          }
        }
        break;
      }
      case ScoreKind::MSIS: {
        const double lo = g - sig * zu;
        const double hi = g + sig * zu;
        double s = hi - lo;
        if (y < lo) s += penalty * (lo - y);
        if (y > hi) s += penalty * (y - hi);
        value = -s;
        const double ds_dlo = 1.0 - (y < lo ? penalty : 0.0);
        const double ds_dhi = -1.0 + (y > hi ? penalty : 0.0);
        d_g = ds_dlo + ds_dhi;
        d_c = (ds_dhi - ds_dlo) * sig * zu;
        break;
      }
    }
    if (!std::isfinite(value) || (with_gradient && (!std::isfinite(d_g) || !std::isfinite(d_c)))) {
      ++out.degenerate_terms;
      continue;
    }
    out.value += value;
    if (with_gradient) {
      backward(theta, L, spec_.activation, z, &net, d_g, out.gradient);
      out.gradient[d - 1] += d_c;
    }
  }
  return out;
}

Vec BnnModel::initial_guess(const DataSet& data, int n) const {
  const int d = dim();
  Vec theta(d);
  // Small seeded random weights break the hidden-unit symmetry; the noise
  // scale follows the calibration default for the variational spread.
  Rng rng(derive_seed(0x626e6eULL, static_cast<std::uint64_t>(d)));
  for (int i = 0; i + 1 < d; ++i) theta[i] = 0.1 * draw_normal(rng);
  theta[d - 1] = 0.5 * std::log(window_variance(data, n));
  return theta;
}

}  // namespace gvp
