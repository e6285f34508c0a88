#include "gvp/dgp.hpp"

#include <Eigen/Cholesky>
#include <Eigen/Eigenvalues>
#include <cmath>
#include <complex>
#include <random>
#include <stdexcept>

#include "gvp/normal.hpp"
#include "gvp/rng.hpp"

namespace gvp {

namespace {

double draw_student_t(Rng& rng, double nu) {
  std::student_t_distribution<double> dist(nu);
  return dist(rng);
}

Eigen::Matrix2d chol_or_throw(const Eigen::Matrix2d& cov, const char* what) {
  Eigen::LLT<Eigen::Matrix2d> llt(cov);
  if (llt.info() != Eigen::Success) {
    throw std::invalid_argument(std::string(what) + ": covariance is not positive definite");
  }
  return llt.matrixL();
}

DataSet simulate_garch(const GarchGaussianDgp& g, int length, int burn_in, Rng& rng,
                       SimulationTrace* trace) {
  if (!(g.omega > 0.0) || g.alpha < 0.0 || g.beta < 0.0 || g.alpha + g.beta >= 1.0) {
    throw std::invalid_argument("simulate: GARCH parameters must be positive and stationary");
  }
  GarchParams p{g.mean, g.omega, g.alpha, g.beta, 0.0};
  double h = g.omega / (1.0 - g.alpha - g.beta);  // stationary variance start
  double y_prev = g.mean;
  DataSet out;
  out.y.reserve(length);
  if (trace) trace->variance.reserve(length);
  for (int t = -burn_in; t < length; ++t) {
    if (t > -burn_in) h = garch_variance_step(p, y_prev, h);
    const double y = g.mean + std::sqrt(h) * draw_normal(rng);
    if (t >= 0) {
      out.y.push_back(y);
      if (trace) trace->variance.push_back(h);
    }
    y_prev = y;
  }
  return out;
}

DataSet simulate_sv_leverage(const SvLeverageDgp& s, int length, int burn_in, Rng& rng,
                             SimulationTrace* trace) {
  const Eigen::Matrix2d L = chol_or_throw(s.shock_cov, "simulate (sv_leverage)");
  double h = s.mean;  // stationary mean start
  DataSet out;
  out.y.reserve(length);
  if (trace) trace->variance.reserve(length);
  for (int t = -burn_in; t < length; ++t) {
    const Eigen::Vector2d z(draw_normal(rng), draw_normal(rng));
    const Eigen::Vector2d shock = L * z;  // (epsilon_t, eta_t)
    h = s.mean + s.persistence * (h - s.mean) + shock[1];
    if (t >= 0) {
      out.y.push_back(std::exp(0.5 * h) * shock[0]);
      if (trace) trace->variance.push_back(std::exp(h));
    }
  }
  return out;
}

DataSet simulate_sv_smooth(const SvSmoothTransitionDgp& s, int length, int burn_in, Rng& rng,
                           SimulationTrace* trace) {
  if (!(s.eta_var > 0.0)) {
    throw std::invalid_argument("simulate (sv_smooth): eta variance must be positive");
  }
  const double eta_sd = std::sqrt(s.eta_var);
  double h = 0.0;
  DataSet out;
  out.y.reserve(length);
  if (trace) trace->variance.reserve(length);
  for (int t = -burn_in; t < length; ++t) {
    const double g = 1.0 / (1.0 + std::exp(-s.logistic_rate * h));
    h = s.coef * g * h + eta_sd * draw_normal(rng);
    if (t >= 0) {
      out.y.push_back(std::exp(0.5 * h) * draw_normal(rng));
      if (trace) trace->variance.push_back(std::exp(h));
    }
  }
  return out;
}

DataSet simulate_lstar(const LstarTDgp& l, int length, int burn_in, Rng& rng) {
  if (!(l.nu > 2.0)) {
    throw std::invalid_argument("simulate (lstar): need nu > 2 for unit-variance scaling");
  }
  const double scale = std::sqrt((l.nu - 2.0) / l.nu);
  double y_prev = 0.0;
  DataSet out;
  out.y.reserve(length);
  for (int t = -burn_in; t < length; ++t) {
    const double weight = 1.0 / (1.0 + std::exp(-l.gamma * (y_prev - l.c)));
    const double eps = scale * draw_student_t(rng, l.nu);
    const double y = l.rho1 * y_prev + l.rho2 * weight * y_prev + l.sigma_eps * eps;
    if (t >= 0) out.y.push_back(y);
    y_prev = y;
  }
  return out;
}

DataSet simulate_dyn_regression(const DynRegressionDgp& d, int length, int burn_in, Rng& rng) {
  if (!ar4_stationary(d.alpha)) {
    throw std::invalid_argument("simulate (dyn_regression): AR(4) coefficients not stationary");
  }
  const Eigen::Matrix2d L = chol_or_throw(d.sigma, "simulate (dyn_regression)");
  const double gamma0 = ar4_stationary_variance(d.alpha, d.innovation_var);
  const double x3_sd = std::sqrt(gamma0);
  const double eps_sd = std::sqrt(d.innovation_var);

  std::array<double, 4> lags{0.0, 0.0, 0.0, 0.0};  // newest first
  DataSet out;
  out.y.reserve(length);
  out.x_names = {"x1", "x2", "x3"};
  out.x.assign(3, {});
  for (auto& col : out.x) col.reserve(length);

  for (int t = -burn_in; t < length; ++t) {
    const double x3 = d.alpha[0] * lags[0] + d.alpha[1] * lags[1] + d.alpha[2] * lags[2] +
                      d.alpha[3] * lags[3] + eps_sd * draw_normal(rng);
    lags = {x3, lags[0], lags[1], lags[2]};
    const Eigen::Vector2d z(draw_normal(rng), draw_normal(rng));
    const Eigen::Vector2d x12 = L * z;
    if (t >= 0) {
      const double f = norm_cdf(x3 / x3_sd);
      const double y = (d.b[0] + d.a[0] * f) * x12[0] + (d.b[1] + d.a[1] * f) * x12[1] +
                       (d.b[2] + d.a[2] * f) * x3;
      out.y.push_back(y);
      out.x[0].push_back(x12[0]);
      out.x[1].push_back(x12[1]);
      out.x[2].push_back(x3);
    }
  }
  return out;
}

}  // namespace

DataSet simulate(const DgpSpec& spec, SimulationTrace* trace) {
  if (spec.length < 1) throw std::invalid_argument("simulate: length must be positive");
  if (spec.burn_in < 0) throw std::invalid_argument("simulate: burn_in must be non-negative");
  if (trace) trace->variance.clear();
  Rng rng(spec.seed);
  DataSet out = std::visit(
      [&](const auto& v) -> DataSet {
        using T = std::decay_t<decltype(v)>;
        if constexpr (std::is_same_v<T, GarchGaussianDgp>) {
          return simulate_garch(v, spec.length, spec.burn_in, rng, trace);
        } else if constexpr (std::is_same_v<T, SvLeverageDgp>) {
          return simulate_sv_leverage(v, spec.length, spec.burn_in, rng, trace);
        } else if constexpr (std::is_same_v<T, SvSmoothTransitionDgp>) {
          return simulate_sv_smooth(v, spec.length, spec.burn_in, rng, trace);
        } else if constexpr (std::is_same_v<T, LstarTDgp>) {
          return simulate_lstar(v, spec.length, spec.burn_in, rng);
        } else {
          return simulate_dyn_regression(v, spec.length, spec.burn_in, rng);
        }
      },
      spec.variant);
  out.validate();
  return out;
}

double ar4_stationary_variance(const std::array<double, 4>& alpha, double innovation_var) {
  if (!(innovation_var > 0.0)) {
    throw std::invalid_argument("ar4_stationary_variance: innovation variance must be positive");
  }
  if (!ar4_stationary(alpha)) {
    throw std::invalid_argument("ar4_stationary_variance: coefficients not stationary");
  }
  // Yule-Walker in (gamma_0 .. gamma_4): gamma_k = sum_i alpha_i gamma_|k-i|
  // for k=1..4 plus the variance identity gamma_0 = sum alpha_i gamma_i + s2.
  Eigen::Matrix<double, 5, 5> A = Eigen::Matrix<double, 5, 5>::Identity();
  for (int i = 1; i <= 4; ++i) A(0, i) -= alpha[i - 1];
  for (int k = 1; k <= 4; ++k) {
    for (int i = 1; i <= 4; ++i) A(k, std::abs(k - i)) -= alpha[i - 1];
  }
  Eigen::Matrix<double, 5, 1> rhs = Eigen::Matrix<double, 5, 1>::Zero();
  rhs[0] = innovation_var;
  Eigen::FullPivLU<Eigen::Matrix<double, 5, 5>> lu(A);
  if (!lu.isInvertible()) {
    throw std::runtime_error("ar4_stationary_variance: singular Yule-Walker system");
  }
  const double gamma0 = (lu.solve(rhs))[0];
  if (!(gamma0 > 0.0) || !std::isfinite(gamma0)) {
    throw std::runtime_error("ar4_stationary_variance: non-positive solution");
  }
  return gamma0;
}

bool ar4_stationary(const std::array<double, 4>& alpha) {
  Eigen::Matrix4d companion = Eigen::Matrix4d::Zero();
  for (int i = 0; i < 4; ++i) companion(0, i) = alpha[i];
  companion(1, 0) = companion(2, 1) = companion(3, 2) = 1.0;
  const auto eigenvalues = companion.eigenvalues();
  for (int i = 0; i < 4; ++i) {
    if (std::abs(eigenvalues[i]) >= 1.0 - 1e-12) return false;
  }
  return true;
}

}  // namespace gvp
