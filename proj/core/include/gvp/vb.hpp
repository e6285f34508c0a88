#pragma once

#include <cstdint>
#include <vector>

#include "gvp/model.hpp"
#include "gvp/rng.hpp"

namespace gvp {

// Mean-field Gaussian variational family: independent N(mu_i, d_i^2)
// factors. The scales d are sign-free; only d^2 enters the density.
struct VariationalParams {
  Vec mu;
  Vec d;

  int dim() const { return static_cast<int>(mu.size()); }
  double log_density(const Vec& theta) const;
  Vec grad_log_density(const Vec& theta) const;
  Vec draw(const Vec& eps) const { return mu + d.cwiseProduct(eps); }
};

struct AdadeltaConfig {
  double decay = 0.95;
  double epsilon = 1e-6;
};

// Accumulator state for ADADELTA steps; step() returns the ascent step for
// the supplied gradient and updates the running averages.
struct AdadeltaState {
  Vec grad_sq;
  Vec step_sq;

  explicit AdadeltaState(int dim) : grad_sq(Vec::Zero(dim)), step_sq(Vec::Zero(dim)) {}
  Vec step(const Vec& grad, const AdadeltaConfig& cfg);
};

struct VbConfig {
  int iterations = 10000;
  double criterion_weight = 1.0;  // w in the tilted update
  int draws_per_gradient = 1;
  AdadeltaConfig adadelta;
  double initial_scale = 0.1;  // starting |d|
  std::uint64_t seed = 0;
  double max_skip_fraction = 0.5;
  int monitor_window = 500;  // smoothing window for reported bound values
};

struct VbResult {
  VariationalParams lambda;
  // One noisy bound estimate per completed iteration, so
  // elbo_trace.size() + skipped == iterations run.
  std::vector<double> elbo_trace;
  int skipped = 0;
  int degenerate_terms = 0;
};

// Single-draw unbiased gradient of the tilted evidence bound with respect to
// (mu, d), via the reparameterization theta = mu + d o eps.
Vec elbo_gradient_estimate(const PredictiveModel& model, const ScoringRule& rule,
                           const DataSet& data, int n, const VariationalParams& lambda,
                           const Vec& eps, double weight, int* degenerate_terms = nullptr);

// Stochastic-ascent calibration of the variational approximation to the
// tilted (Gibbs) posterior. Throws std::runtime_error if more than
// max_skip_fraction of iterations had to be skipped.
VbResult calibrate(const PredictiveModel& model, const ScoringRule& rule, const DataSet& data,
                   int n, const VariationalParams& init, const VbConfig& cfg);

VariationalParams default_init(const PredictiveModel& model, const DataSet& data, int n,
                               double initial_scale);

// M draws from the variational approximation; draws that back-transform to
// invalid parameter points are redrawn. Throws std::runtime_error when more
// than 1% of the draws needed redrawing.
std::vector<Vec> sample_variational(const VariationalParams& lambda, const PredictiveModel& model,
                                    int count, std::uint64_t seed);

// Mean of the trace over a trailing window; NaN-free monitoring helper.
double smoothed_tail_mean(const std::vector<double>& trace, int window);

}  // namespace gvp
