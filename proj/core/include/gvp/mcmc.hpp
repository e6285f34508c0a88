#pragma once

#include <cstdint>
#include <functional>
#include <vector>

#include "gvp/model.hpp"
#include "gvp/rng.hpp"
#include "gvp/scoring.hpp"

namespace gvp {

// Log density known up to a constant; -inf marks points outside the support.
using LogTarget = std::function<double(const Vec&)>;

struct McmcConfig {
  int burn_in = 20000;
  int retain = 20000;
  double target_acceptance = 0.234;
  double min_acceptance = 0.01;   // floor checked over the last quarter of burn-in
  bool adapt_covariance = false;  // proposal shape from burn-in draws, frozen afterwards
  int covariance_start = 5000;    // burn-in draws required before shape estimation
  double initial_step = 0.1;
  std::uint64_t seed = 0;
};

struct McmcResult {
  std::vector<Vec> draws;  // retained draws, post burn-in
  double acceptance_rate = 0.0;       // over the retained phase
  double burn_in_acceptance = 0.0;    // over the last quarter of burn-in
  double final_step = 0.0;
  bool acceptance_floor_hit = false;  // burn-in acceptance fell below the floor
};

// Adaptive Gaussian random-walk Metropolis. The step size follows a
// Robbins-Monro recursion toward target_acceptance during burn-in and is
// frozen afterwards, as is the proposal covariance when adaptation is on.
McmcResult rwm_sample(const LogTarget& target, const Vec& init, const McmcConfig& cfg);

// exp[w * S_n(theta)] * prior as a log target; invalid or non-finite
// evaluations map to -inf so the chain simply rejects them.
LogTarget gibbs_log_target(const PredictiveModel& model, const ScoringRule& rule,
                           const DataSet& data, int n, double weight);

// Evenly spaced subset of size count (all draws when count >= draws.size()).
std::vector<Vec> thin_evenly(const std::vector<Vec>& draws, int count);

}  // namespace gvp
