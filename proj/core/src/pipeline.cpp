#include "gvp/pipeline.hpp"

#include <cmath>
#include <stdexcept>

#include "gvp/evaluate.hpp"
#include "gvp/mixture.hpp"
#include "gvp/rng.hpp"
#include "gvp/scoring.hpp"

namespace gvp {

namespace {

constexpr std::uint64_t kFitStream = 0x706669;    // pipeline fit
constexpr std::uint64_t kThetaStream = 0x707468;  // parameter draws
constexpr std::uint64_t kZStream = 0x707a64;      // per-parameter z draws

double sample_member(const EnsembleMember& member, Rng& rng) {
  if (const auto* g = std::get_if<Gaussian>(&member)) {
    return g->mean + std::sqrt(g->var) * draw_normal(rng);
  }
  const auto& mix = std::get<GaussianMixture>(member);
  double u = draw_uniform(rng);
  int k = 0;
  for (; k + 1 < mix.components(); ++k) {
    u -= mix.weights()[k];
    if (u <= 0.0) break;
  }
  return mix.means()[k] + mix.sds()[k] * draw_normal(rng);
}

}  // namespace

PipelineResult run_pipeline(const std::vector<double>& series, const PipelineConfig& cfg) {
  if (cfg.d < 0) throw std::invalid_argument("run_pipeline: differencing order must be >= 0");
  if (!(cfg.alpha > 0.0 && cfg.alpha < 1.0)) {
    throw std::invalid_argument("run_pipeline: alpha must lie in (0, 1)");
  }
  if (cfg.draws < 30) throw std::invalid_argument("run_pipeline: need at least 30 draws");

  std::vector<double> levels = series;
  PipelineResult res;
  if (cfg.holdout) {
    if (levels.size() < 2) throw std::invalid_argument("run_pipeline: series too short");
    res.holdout_y = levels.back();
    levels.pop_back();
  }

  const std::vector<double> z = difference(levels, cfg.d);
  if (static_cast<int>(z.size()) < 100) {
    throw std::invalid_argument("run_pipeline: need at least 100 observations after differencing");
  }

  DataSet data;
  data.y = z;
  const int n = data.length();
  res.fit_length = n;

  MixtureModel model(cfg.components);
  const ScoringRule rule = ScoringRule::interval(cfg.alpha);
  VbConfig vcfg = cfg.vb;
  vcfg.criterion_weight = cfg.weight;
  vcfg.seed = derive_seed(cfg.seed, kFitStream);
  const VbResult fit =
      calibrate(model, rule, data, n, default_init(model, data, n, cfg.vb.initial_scale), vcfg);

  const std::vector<Vec> thetas =
      sample_variational(fit.lambda, model, cfg.draws, derive_seed(cfg.seed, kThetaStream));

  // One z draw per parameter draw, so the draws integrate over both the
  // calibrated posterior and the conditional predictive.
  Rng zrng(derive_seed(cfg.seed, kZStream));
  std::vector<double> z_draws;
  z_draws.reserve(thetas.size());
  for (const Vec& theta : thetas) {
    const ConditionalPredictive pred = model.predictive(theta, data, n);
    if (const auto* mix = std::get_if<GaussianMixture>(&pred)) {
      z_draws.push_back(sample_member(EnsembleMember(*mix), zrng));
    } else {
      z_draws.push_back(sample_member(EnsembleMember(std::get<Gaussian>(pred)), zrng));
    }
  }

  const std::vector<double> level_draws = undifference(levels, cfg.d, z_draws);
  const GaussianMixture kde = kde_predictive(level_draws);
  res.bandwidth = std::sqrt(kde.vars()[0]);
  const ConditionalPredictive kde_pred{kde};
  res.lower = quantile(kde_pred, cfg.alpha / 2.0);
  res.upper = quantile(kde_pred, 1.0 - cfg.alpha / 2.0);
  res.median = quantile(kde_pred, 0.5);

  if (res.holdout_y) {
    const double y = *res.holdout_y;
    double s = -(res.upper - res.lower);
    if (y < res.lower) s -= (2.0 / cfg.alpha) * (res.lower - y);
    if (y > res.upper) s -= (2.0 / cfg.alpha) * (y - res.upper);
    res.holdout_score = s;
  }
  return res;
}

}  // namespace gvp
