#include "gvp/mcmc.hpp"

#include <Eigen/Cholesky>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace gvp {

namespace {

constexpr double kNegInf = -std::numeric_limits<double>::infinity();

// Lower Cholesky factor of the sample covariance with a small ridge so that
// degenerate chains still yield a usable proposal shape.
Eigen::MatrixXd proposal_shape(const std::vector<Vec>& history, int dim) {
  Eigen::MatrixXd cov = Eigen::MatrixXd::Zero(dim, dim);
  Vec mean = Vec::Zero(dim);
  for (const Vec& v : history) mean += v;
  mean /= static_cast<double>(history.size());
  for (const Vec& v : history) {
    const Vec dev = v - mean;
    cov += dev * dev.transpose();
  }
  cov /= static_cast<double>(history.size() - 1);
  cov += 1e-8 * Eigen::MatrixXd::Identity(dim, dim);
  Eigen::LLT<Eigen::MatrixXd> llt(cov);
  if (llt.info() != Eigen::Success) return Eigen::MatrixXd::Identity(dim, dim);
  return llt.matrixL();
}

}  // namespace

McmcResult rwm_sample(const LogTarget& target, const Vec& init, const McmcConfig& cfg) {
  const int dim = static_cast<int>(init.size());
  if (dim < 1) throw std::invalid_argument("rwm_sample: empty initial state");
  if (cfg.burn_in < 0 || cfg.retain < 1) {
    throw std::invalid_argument("rwm_sample: need burn_in >= 0 and retain >= 1");
  }

  double lp = target(init);
  if (!std::isfinite(lp)) {
    throw std::invalid_argument("rwm_sample: initial state has zero target density");
  }

  Rng rng(cfg.seed);
  Vec current = init;
  double log_step = std::log(cfg.initial_step);
  Eigen::MatrixXd shape = Eigen::MatrixXd::Identity(dim, dim);
  bool shaped = false;

  McmcResult res;
  res.draws.reserve(cfg.retain);
  std::vector<Vec> burn_history;
  if (cfg.adapt_covariance) burn_history.reserve(cfg.burn_in);

  const int quarter_start = cfg.burn_in - cfg.burn_in / 4;
  int quarter_accepts = 0;
  int retained_accepts = 0;
  Vec noise(dim);

  const int total = cfg.burn_in + cfg.retain;
  for (int it = 0; it < total; ++it) {
    const bool burning = it < cfg.burn_in;
    const double step = std::exp(log_step);

    for (int i = 0; i < dim; ++i) noise[i] = draw_normal(rng);
    const Vec proposal = shaped ? Vec(current + step * (shape * noise))
                                : Vec(current + step * noise);
    const double lp_prop = target(proposal);
    bool accept = false;
    if (lp_prop > kNegInf) {
      const double log_ratio = lp_prop - lp;
      accept = log_ratio >= 0.0 || std::log(draw_uniform(rng)) < log_ratio;
    }
    if (accept) {
      current = proposal;
      lp = lp_prop;
    }

    if (burning) {
      // Robbins-Monro on the log step toward the target acceptance rate.
      const double gain = std::pow(1.0 + it, -0.6);
      log_step += gain * ((accept ? 1.0 : 0.0) - cfg.target_acceptance);
      if (it >= quarter_start && accept) ++quarter_accepts;
      if (cfg.adapt_covariance) {
        burn_history.push_back(current);
        if (!shaped && static_cast<int>(burn_history.size()) >= cfg.covariance_start) {
          shape = proposal_shape(burn_history, dim);
          shaped = true;
        }
      }
    } else {
      if (accept) ++retained_accepts;
      res.draws.push_back(current);
    }
  }

  const int quarter = cfg.burn_in - quarter_start;
  res.acceptance_rate = static_cast<double>(retained_accepts) / cfg.retain;
  res.burn_in_acceptance =
      quarter > 0 ? static_cast<double>(quarter_accepts) / quarter : res.acceptance_rate;
  if (quarter > 0 && res.burn_in_acceptance < cfg.min_acceptance) {
    res.acceptance_floor_hit = true;
  }
  res.final_step = std::exp(log_step);
  return res;
}

LogTarget gibbs_log_target(const PredictiveModel& model, const ScoringRule& rule,
                           const DataSet& data, int n, double weight) {
  if (rule.needs_threshold() && !rule.threshold) {
    throw std::logic_error("gibbs_log_target: censored rule used before bind_threshold()");
  }
  return [&model, rule, &data, n, weight](const Vec& theta) -> double {
    if (!model.valid_theta(theta)) return kNegInf;
    try {
      const CriterionValue crit = model.sample_criterion(rule, theta, data, n);
      const double lp = weight * crit.value + model.log_prior(theta);
      return std::isfinite(lp) ? lp : kNegInf;
    } catch (const std::exception&) {
      return kNegInf;
    }
  };
}

std::vector<Vec> thin_evenly(const std::vector<Vec>& draws, int count) {
  const int n = static_cast<int>(draws.size());
  if (count < 1) throw std::invalid_argument("thin_evenly: count must be positive");
  if (count >= n) return draws;
  std::vector<Vec> out;
  out.reserve(count);
  for (int i = 0; i < count; ++i) {
    // Last element of each of count equal blocks; hits the final draw exactly.
    const int idx = ((i + 1) * n) / count - 1;
    out.push_back(draws[idx]);
  }
  return out;
}

}  // namespace gvp
