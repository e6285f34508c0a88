#pragma once

#include <Eigen/Dense>
#include <array>
#include <cstdint>
#include <variant>
#include <vector>

#include "gvp/data.hpp"
#include "gvp/garch.hpp"

namespace gvp {

// The five simulators. Defaults are the parameter sets used throughout the
// experiments; any field can be overridden before simulate().

struct GarchGaussianDgp {
  double mean = 0.0;
  double omega = 0.1;
  double alpha = 0.1;
  double beta = 0.8;
};

struct SvLeverageDgp {
  double mean = -2.0;
  double persistence = 0.7;
  // (epsilon_t, eta_t) shock covariance; off-diagonal gives the leverage.
  Eigen::Matrix2d shock_cov = (Eigen::Matrix2d() << 1.0, -0.35, -0.35, 0.25).finished();
};

// h_t = coef * g(h_{t-1}) * h_{t-1} + eta_t with logistic g; no intercept,
// so the volatility path wanders between the 0 and coef fixed-point regimes.
struct SvSmoothTransitionDgp {
  double coef = 0.9;
  double logistic_rate = 2.0;
  double eta_var = 0.25;
};

struct LstarTDgp {
  double rho1 = 0.0;
  double rho2 = 0.9;
  double gamma = 5.0;
  double c = 0.0;
  double sigma_eps = 1.0;
  double nu = 3.0;  // innovations are unit-variance scaled Student-t
};

struct DynRegressionDgp {
  // (X1, X2) are iid bivariate normal; X3 follows an AR(4); the response is
  // y_t = sum_i beta_i x_i with beta_i = b_i + a_i * F(x3), F the stationary
  // Gaussian cdf of the AR(4).
  Eigen::Matrix2d sigma = (Eigen::Matrix2d() << 1.0, 0.5, 0.5, 1.25).finished();
  double innovation_var = 0.2;
  std::array<double, 4> alpha{0.5, 0.2, 0.15, 0.1};
  std::array<double, 3> a{1.3, -2.6, -1.5};
  std::array<double, 3> b{0.0, 1.3, 1.5};
};

using DgpVariant = std::variant<GarchGaussianDgp, SvLeverageDgp, SvSmoothTransitionDgp, LstarTDgp,
                                DynRegressionDgp>;

struct DgpSpec {
  DgpVariant variant;
  int length = 0;
  int burn_in = 1000;
  std::uint64_t seed = 0;
};

// Conditional variance of y_t per retained period, where defined (GARCH:
// sigma_t^2; SV variants: exp(h_t)). Empty for the other DGPs.
struct SimulationTrace {
  std::vector<double> variance;
};

// Deterministic under (variant, length, burn_in, seed). Throws
// std::invalid_argument on invalid specs (non-PD covariance, nu <= 2,
// non-stationary AR(4), non-positive length).
DataSet simulate(const DgpSpec& spec, SimulationTrace* trace = nullptr);

// gamma_0 of a stationary AR(4) via the Yule-Walker system.
double ar4_stationary_variance(const std::array<double, 4>& alpha, double innovation_var);

bool ar4_stationary(const std::array<double, 4>& alpha);

}  // namespace gvp
