// Acceptance gate: eleven end-to-end checks of the calibration/evaluation
// stack, from gradient correctness up to desk-scale coherence, merging and
// coverage runs. Each criterion prints exactly one verdict line
//
//   [criterion N] PASS — detail (runtime)
//
// and the binary exits nonzero if any selected criterion fails. Run all with
// no arguments or a single one with --only N. Every tolerance is pinned in
// the constants below.

#include <chrono>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "gvp/config.hpp"
#include "gvp/data.hpp"
#include "gvp/dgp.hpp"
#include "gvp/evaluate.hpp"
#include "gvp/io.hpp"
#include "gvp/mcmc.hpp"
#include "gvp/pipeline.hpp"
#include "gvp/predictive.hpp"
#include "gvp/rng.hpp"
#include "gvp/scoring.hpp"
#include "gvp/vb.hpp"
#include "support/finite_diff.hpp"
#include "support/fixtures.hpp"
#include "support/location_model.hpp"
#include "support/quadrature.hpp"

namespace {

// ---- pinned tolerances ------------------------------------------------------
constexpr double kGradTol = 1e-4;        // 1: worst relative gradient gap
constexpr double kFdStep = 1e-5;         // 1: central-difference step
constexpr double kCrpsTol = 1e-6;        // 2: closed form vs quadrature, absolute
constexpr double kVbSdBand = 2.0;        // 3: VB mean, posterior-sd units
constexpr double kMcmcRelTol = 0.03;     // 3: chain mean/variance, relative
constexpr int kToyDiagonalMin = 5;       // 4: diagonal-best columns out of 7
constexpr double kMergingMax = 0.05;     // 5: max per-cell |S_Q - S_Pi|
constexpr double kColumnSpreadMax = 0.05;  // 6: best-worst gap per column
constexpr double kLsColumnGap = 0.01;      // 6: LS row vs LS-column best
constexpr int kLstarDiagonalMin = 4;     // 7: diagonal-best columns out of 6
constexpr double kDensityIntTol = 1e-6;  // 9: |integral of pdf - 1|
constexpr double kRoundTripTol = 1e-8;   // 9: |cdf(quantile(a)) - a|
constexpr double kCoverageLo = 0.90;     // 11: empirical coverage band
constexpr double kCoverageHi = 0.99;

// ---- pinned master seeds ----------------------------------------------------
constexpr std::uint64_t kSeedGrad = 8101;     // criterion 1
constexpr std::uint64_t kSeedConj = 515;      // criterion 3
constexpr std::uint64_t kSeedToy = 2026;      // criteria 4, 5, 10
constexpr std::uint64_t kSeedCorrect = 606;   // criterion 6
constexpr std::uint64_t kSeedLstar = 707;     // criterion 7
constexpr std::uint64_t kSeedBnn = 808;       // criterion 8
constexpr std::uint64_t kSeedPipe = 909;      // criterion 11

std::string fmt(double v, const char* spec = "%.4g") {
  char buf[64];
  std::snprintf(buf, sizeof(buf), spec, v);
  return buf;
}

std::vector<gvp::ScoringRule> seven_rules() {
  return gvp::parse_rule_list({"LS", "CLS10", "CLS20", "CLS80", "CLS90", "CRPS", "MSIS"});
}

std::vector<gvp::ScoringRule> six_rules() {
  return gvp::parse_rule_list({"LS", "CLS10", "CLS20", "CLS80", "CLS90", "MSIS"});
}

gvp::DataSet simulate_variant(gvp::DgpVariant variant, int length, std::uint64_t master) {
  gvp::DgpSpec spec;
  spec.variant = std::move(variant);
  spec.length = length;
  spec.seed = gvp::derive_seed(master, 0x646770);
  return gvp::simulate(spec);
}

int count_diagonal_best(const std::vector<gvp::ColumnCoherence>& report) {
  int n = 0;
  for (const auto& col : report) n += col.diagonal_best ? 1 : 0;
  return n;
}

std::string losing_columns(const std::vector<gvp::ColumnCoherence>& report) {
  std::string out;
  for (const auto& col : report) {
    if (col.diagonal_best) continue;
    if (!out.empty()) out += ",";
    out += col.rule + " by " + fmt(-col.margin);
  }
  return out.empty() ? "none" : out;
}

// ---- criterion 1: analytic criterion gradients vs central differences ------

struct GradCase {
  std::string model_name;
  gvp::ModelSpec spec;
  gvp::DataSet data;
  std::vector<std::string> rule_labels;
};

bool criterion_gradients(std::string* detail) {
  const int n = 150;
  const int points = 20;

  std::vector<GradCase> cases;
  cases.push_back({"garch",
                   gvp::GarchModelSpec{},
                   simulate_variant(gvp::GarchGaussianDgp{}, n, kSeedGrad),
                   {"LS", "CRPS", "CLS80", "CLS20", "MSIS"}});
  cases.push_back({"mixture3",
                   gvp::MixtureModelSpec{3},
                   simulate_variant(gvp::LstarTDgp{}, n, kSeedGrad + 1),
                   {"LS", "CLS80", "CLS20", "MSIS"}});
  cases.push_back({"bnn_p1",
                   gvp::BnnModelSpec{3, gvp::Activation::Tanh, {}},
                   simulate_variant(gvp::DynRegressionDgp{}, n, kSeedGrad + 2),
                   {"LS", "CRPS", "CLS80", "CLS20", "MSIS"}});

  double worst = 0.0;
  std::string worst_at = "-";
  std::uint64_t pair_index = 0;
  for (const GradCase& c : cases) {
    const auto model = gvp::make_model(c.spec, c.data, n);
    const gvp::Vec base = model->initial_guess(c.data, n);
    for (const std::string& label : c.rule_labels) {
      gvp::ScoringRule rule = gvp::parse_rule(label);
      if (rule.needs_threshold()) {
        rule = rule.bind_threshold(gvp::window_quantile(c.data, n, rule.level));
      }
      gvp::Rng rng(gvp::derive_seed(kSeedGrad, 0x677261, pair_index++));
      for (int p = 0; p < points; ++p) {
        gvp::Vec theta(model->dim());
        int attempts = 0;
        do {
          for (int i = 0; i < theta.size(); ++i) {
            theta[i] = base[i] + 0.3 * gvp::draw_normal(rng);
          }
          if (++attempts > 500) {
            *detail = c.model_name + "/" + label + ": no valid random point";
            return false;
          }
        } while (!model->valid_theta(theta));

        const gvp::CriterionEval eval = model->criterion_eval(rule, theta, c.data, n);
        // The value must agree with the gradient-free accumulation path.
        const double check = model->sample_criterion(rule, theta, c.data, n).value;
        if (std::abs(eval.value - check) > 1e-8 * std::max(1.0, std::abs(check))) {
          *detail = c.model_name + "/" + label + ": value mismatch " + fmt(eval.value) +
                    " vs " + fmt(check);
          return false;
        }
        const gvp::Vec fd = testutil::criterion_fd(*model, rule, theta, c.data, n, kFdStep);
        const double gap = testutil::gradient_gap(eval.gradient, fd);
        if (gap > worst) {
          worst = gap;
          worst_at = c.model_name + "/" + label;
        }
      }
    }
  }
  *detail = "worst relative gap " + fmt(worst) + " (" + worst_at + "), tolerance " + fmt(kGradTol);
  return worst <= kGradTol;
}

// ---- criterion 2: Gaussian CRPS closed form vs adaptive quadrature ---------

bool criterion_crps(std::string* detail) {
  const double means[] = {-2.0, -0.5, 0.0, 1.0, 3.0};
  const double sds[] = {0.3, 1.0, 2.5, 10.0};
  const double offsets[] = {-3.0, -1.0, 0.0, 0.5, 2.0};
  double worst = 0.0;
  int grid = 0;
  for (double m : means) {
    for (double s : sds) {
      for (double k : offsets) {
        const double y = m + k * s;
        const gvp::ConditionalPredictive pred{gvp::Gaussian{m, s * s}};
        const double closed = gvp::crps_score(pred, y).value;
        const double numeric = gvp::crps_numeric(pred, y, 1e-9);
        worst = std::max(worst, std::abs(closed - numeric));
        ++grid;
      }
    }
  }
  *detail = "max |closed - quadrature| " + fmt(worst) + " over " + std::to_string(grid) +
            " grid points, tolerance " + fmt(kCrpsTol);
  return grid == 100 && worst <= kCrpsTol;
}

// ---- criterion 3: conjugate location family, both engines ------------------

bool criterion_conjugate(std::string* detail) {
  const int n = 200;
  const gvp::DataSet data = testutil::gaussian_series(n, 515u, 1.0, 1.0);
  const double obs_var = 1.0;
  const double prior_mean = 0.0;
  const double prior_var = 25.0;
  const testutil::LocationModel model(obs_var, prior_mean, prior_var);

  double sum_y = 0.0;
  for (double y : data.y) sum_y += y;
  const double precision = 1.0 / prior_var + n / obs_var;
  const double post_var = 1.0 / precision;
  const double post_mean = (sum_y / obs_var + prior_mean / prior_var) * post_var;
  const double post_sd = std::sqrt(post_var);

  gvp::VbConfig vcfg;
  vcfg.seed = gvp::derive_seed(kSeedConj, 0x7662);
  const gvp::VbResult vb = gvp::calibrate(model, gvp::ScoringRule::log_score(), data, n,
                                          gvp::default_init(model, data, n, 0.1), vcfg);
  const double vb_gap_sds = std::abs(vb.lambda.mu[0] - post_mean) / post_sd;

  gvp::McmcConfig mcfg;
  mcfg.seed = gvp::derive_seed(kSeedConj, 0x6d63);
  const gvp::McmcResult chain =
      gvp::rwm_sample(gvp::gibbs_log_target(model, gvp::ScoringRule::log_score(), data, n, 1.0),
                      model.initial_guess(data, n), mcfg);
  double mean = 0.0;
  for (const gvp::Vec& d : chain.draws) mean += d[0];
  mean /= static_cast<double>(chain.draws.size());
  double var = 0.0;
  for (const gvp::Vec& d : chain.draws) var += (d[0] - mean) * (d[0] - mean);
  var /= static_cast<double>(chain.draws.size() - 1);

  const double mean_rel = std::abs(mean - post_mean) / std::abs(post_mean);
  const double var_rel = std::abs(var - post_var) / post_var;

  *detail = "vb mean off by " + fmt(vb_gap_sds) + " sd; chain mean off " +
            fmt(100.0 * mean_rel) + "%, variance off " + fmt(100.0 * var_rel) +
            "% (draws " + std::to_string(chain.draws.size()) + ")";
  return vb_gap_sds <= kVbSdBand && mean_rel <= kMcmcRelTol && var_rel <= kMcmcRelTol;
}

// ---- criteria 4/5/10: desk-scale toy run (SV-leverage data, GARCH model) ---

gvp::DataSet toy_data() { return simulate_variant(gvp::SvLeverageDgp{}, 3000, kSeedToy); }

gvp::RollingConfig toy_rolling() {
  gvp::RollingConfig cfg;
  cfg.model = gvp::GarchModelSpec{};
  cfg.update_rules = seven_rules();
  cfg.eval_rules = seven_rules();
  cfg.n0 = 1000;
  cfg.refit_every = 250;
  cfg.warm_start = true;
  cfg.refit_iterations = 10000;
  cfg.draws = 1000;
  cfg.seed = kSeedToy;
  // Tail-censored criteria are nearly flat away from their tail, so the
  // variational scales converge slowly there; give the optimizer room.
  cfg.vb.iterations = 50000;
  cfg.vb.draws_per_gradient = 2;
  cfg.mcmc.adapt_covariance = true;
  return cfg;
}

bool criterion_toy_coherence(std::string* detail) {
  const gvp::RollingResult res = gvp::rolling_evaluate(toy_data(), toy_rolling(), gvp::Engine::Vb);
  if (res.matrix.any_failed()) {
    *detail = "calibration failed for at least one update rule";
    return false;
  }
  const auto report = gvp::coherence_report(res.matrix);
  const int best = count_diagonal_best(report);
  *detail = "diagonal best in " + std::to_string(best) + "/7 columns (lost: " +
            losing_columns(report) + ")";
  return best >= kToyDiagonalMin;
}

bool criterion_merging(std::string* detail) {
  const gvp::DataSet data = toy_data();
  const gvp::RollingConfig cfg = toy_rolling();
  const gvp::RollingResult vb = gvp::rolling_evaluate(data, cfg, gvp::Engine::Vb);
  const gvp::RollingResult mc = gvp::rolling_evaluate(data, cfg, gvp::Engine::Mcmc);
  if (vb.matrix.any_failed() || mc.matrix.any_failed()) {
    *detail = "calibration failed for at least one update rule";
    return false;
  }
  const gvp::MergingReport merge = gvp::merging_report(vb.matrix, mc.matrix);
  for (std::size_t i = 0; i < merge.abs_diff.size(); ++i) {
    std::cerr << merge.update_labels[i];
    for (double d : merge.abs_diff[i]) std::cerr << " " << fmt(d, "%.4f");
    std::cerr << "\n";
  }
  *detail = "max |S_Q - S_Pi| " + fmt(merge.max_discrepancy) + ", mean " +
            fmt(merge.mean_discrepancy) + ", tolerance " + fmt(kMergingMax);
  return merge.max_discrepancy <= kMergingMax;
}

// ---- criterion 6: correctly specified GARCH, near-flat columns -------------

bool criterion_correct_specification(std::string* detail) {
  std::uint64_t seed = kSeedCorrect;
  if (const char* env = std::getenv("GVP_ACCEPT_SEED6")) seed = std::strtoull(env, nullptr, 10);
  const gvp::DataSet data = simulate_variant(gvp::GarchGaussianDgp{}, 3000, seed);
  gvp::RollingConfig cfg = toy_rolling();
  cfg.seed = seed;
  const gvp::RollingResult res = gvp::rolling_evaluate(data, cfg, gvp::Engine::Vb);
  for (int i = 0; i < res.matrix.rows(); ++i) {
    std::cerr << res.matrix.update_labels[i];
    for (int j = 0; j < res.matrix.cols(); ++j) {
      std::cerr << " " << fmt(res.matrix.scores[i][j], "%.4f");
    }
    std::cerr << "\n";
  }
  if (res.matrix.any_failed()) {
    *detail = "calibration failed for at least one update rule";
    return false;
  }

  const gvp::ScoreMatrix& m = res.matrix;
  double worst_spread = 0.0;
  std::string worst_col = "-";
  for (int j = 0; j < m.cols(); ++j) {
    double best = m.scores[0][j];
    double worst = m.scores[0][j];
    for (int i = 1; i < m.rows(); ++i) {
      best = std::max(best, m.scores[i][j]);
      worst = std::min(worst, m.scores[i][j]);
    }
    if (best - worst > worst_spread) {
      worst_spread = best - worst;
      worst_col = m.eval_labels[j];
    }
  }

  int ls_row = -1;
  int ls_col = -1;
  for (int i = 0; i < m.rows(); ++i) {
    if (m.update_labels[i] == "LS") ls_row = i;
  }
  for (int j = 0; j < m.cols(); ++j) {
    if (m.eval_labels[j] == "LS") ls_col = j;
  }
  double ls_best = m.scores[0][ls_col];
  for (int i = 1; i < m.rows(); ++i) ls_best = std::max(ls_best, m.scores[i][ls_col]);
  const double ls_gap = ls_best - m.scores[ls_row][ls_col];

  *detail = "worst column spread " + fmt(worst_spread) + " (" + worst_col +
            "), LS-column gap " + fmt(ls_gap);
  return worst_spread <= kColumnSpreadMax && ls_gap <= kLsColumnGap;
}

// ---- criterion 7: LSTAR data, mixture predictive ---------------------------

bool criterion_lstar_mixture(std::string* detail) {
  const gvp::DataSet data = simulate_variant(gvp::LstarTDgp{}, 1200, kSeedLstar);
  gvp::RollingConfig cfg;
  cfg.model = gvp::MixtureModelSpec{5};
  cfg.update_rules = six_rules();
  cfg.eval_rules = six_rules();
  cfg.n0 = 400;
  cfg.refit_every = 200;
  cfg.warm_start = true;
  cfg.draws = 1000;
  cfg.seed = kSeedLstar;
  const gvp::RollingResult res = gvp::rolling_evaluate(data, cfg, gvp::Engine::Vb);
  if (res.matrix.any_failed()) {
    *detail = "calibration failed for at least one update rule";
    return false;
  }
  const auto report = gvp::coherence_report(res.matrix);
  const int best = count_diagonal_best(report);
  *detail = "diagonal best in " + std::to_string(best) + "/6 columns (lost: " +
            losing_columns(report) + ")";
  return best >= kLstarDiagonalMin;
}

// ---- criterion 8: larger BNN information set wins under LS -----------------

bool criterion_bnn_monotonicity(std::string* detail) {
  const gvp::DataSet data = simulate_variant(gvp::DynRegressionDgp{}, 1500, kSeedBnn);

  const auto run = [&](std::vector<int> cols) {
    gvp::RollingConfig cfg;
    cfg.model = gvp::BnnModelSpec{3, gvp::Activation::Tanh, std::move(cols)};
    cfg.update_rules = gvp::parse_rule_list({"LS"});
    cfg.eval_rules = gvp::parse_rule_list({"LS"});
    cfg.n0 = 750;
    cfg.refit_every = 250;
    cfg.warm_start = true;
    cfg.draws = 1000;
    cfg.seed = kSeedBnn;  // shared streams: the runs differ only in the model
    return gvp::rolling_evaluate(data, cfg, gvp::Engine::Vb);
  };

  const gvp::RollingResult lag_only = run({});
  const gvp::RollingResult full_set = run({0, 1});
  if (lag_only.matrix.any_failed() || full_set.matrix.any_failed()) {
    *detail = "calibration failed";
    return false;
  }
  const double s1 = lag_only.matrix.scores[0][0];
  const double s4 = full_set.matrix.scores[0][0];
  *detail = "out-of-sample LS " + fmt(s4) + " (lag + x1 + x2) vs " + fmt(s1) + " (lag only)";
  return s4 > s1;
}

// ---- criterion 9: predictive-object invariants -----------------------------

bool criterion_predictive_invariants(std::string* detail) {
  std::vector<std::pair<std::string, gvp::ConditionalPredictive>> objects;
  objects.emplace_back("mixture3", gvp::GaussianMixture({0.2, 0.5, 0.3}, {-1.0, 0.0, 2.0},
                                                        {0.5, 1.0, 4.0}));
  objects.emplace_back("mixture5",
                       gvp::GaussianMixture({1.0, 2.0, 3.0, 2.0, 1.0}, {-6.0, -2.0, 0.0, 2.0, 6.0},
                                            {0.25, 1.0, 0.04, 1.0, 9.0}));
  {
    gvp::Ensemble ens;
    ens.members.emplace_back(gvp::Gaussian{-0.5, 0.8});
    ens.members.emplace_back(gvp::Gaussian{0.7, 1.6});
    ens.members.emplace_back(gvp::Gaussian{2.0, 0.2});
    objects.emplace_back("ensemble_gaussians", std::move(ens));
  }
  {
    gvp::Ensemble ens;
    ens.members.emplace_back(gvp::GaussianMixture({0.5, 0.5}, {-2.0, 1.0}, {1.0, 0.3}));
    ens.members.emplace_back(gvp::GaussianMixture({0.25, 0.75}, {0.0, 3.0}, {4.0, 0.5}));
    ens.members.emplace_back(gvp::Gaussian{0.0, 1.0});
    objects.emplace_back("ensemble_mixed", std::move(ens));
  }

  const double alphas[] = {0.025, 0.1, 0.5, 0.9, 0.975};
  double worst_mass = 0.0;
  double worst_round_trip = 0.0;
  for (const auto& [name, pred] : objects) {
    double lo = 0.0;
    double hi = 0.0;
    gvp::support_bounds(pred, &lo, &hi);
    const double mass =
        testutil::integrate([&](double x) { return gvp::pdf(pred, x); }, lo, hi, 1e-10);
    worst_mass = std::max(worst_mass, std::abs(mass - 1.0));

    double prev = gvp::cdf(pred, lo);
    for (int i = 1; i <= 400; ++i) {
      const double x = lo + (hi - lo) * i / 400.0;
      const double cur = gvp::cdf(pred, x);
      if (cur < prev) {
        *detail = name + ": cdf decreases near x=" + fmt(x);
        return false;
      }
      prev = cur;
    }

    for (double a : alphas) {
      const double q = gvp::quantile(pred, a);
      worst_round_trip = std::max(worst_round_trip, std::abs(gvp::cdf(pred, q) - a));
    }
  }
  *detail = "max |mass - 1| " + fmt(worst_mass) + ", max round-trip gap " + fmt(worst_round_trip);
  return worst_mass <= kDensityIntTol && worst_round_trip <= kRoundTripTol;
}

// ---- criterion 10: bitwise determinism of the toy run ----------------------

bool criterion_determinism(std::string* detail) {
  const gvp::DataSet data = toy_data();
  const gvp::RollingConfig cfg = toy_rolling();
  const gvp::RollingResult a = gvp::rolling_evaluate(data, cfg, gvp::Engine::Vb);
  const gvp::RollingResult b = gvp::rolling_evaluate(data, cfg, gvp::Engine::Vb);

  for (int i = 0; i < a.matrix.rows(); ++i) {
    for (int j = 0; j < a.matrix.cols(); ++j) {
      const double x = a.matrix.scores[i][j];
      const double y = b.matrix.scores[i][j];
      const bool same = (x == y) || (std::isnan(x) && std::isnan(y));
      if (!same || a.matrix.degenerate[i][j] != b.matrix.degenerate[i][j]) {
        *detail = "cell (" + a.matrix.update_labels[i] + "," + a.matrix.eval_labels[j] +
                  ") differs: " + fmt(x, "%.17g") + " vs " + fmt(y, "%.17g");
        return false;
      }
    }
  }
  if (a.log.size() != b.log.size()) {
    *detail = "score logs differ in length";
    return false;
  }
  for (std::size_t k = 0; k < a.log.size(); ++k) {
    if (a.log[k].value != b.log[k].value || a.log[k].n != b.log[k].n ||
        a.log[k].degenerate != b.log[k].degenerate) {
      *detail = "score log entry " + std::to_string(k) + " differs";
      return false;
    }
  }
  *detail = "two runs bitwise identical (" + std::to_string(a.log.size()) + " logged scores)";
  return true;
}

// ---- criterion 11: interval pipeline coverage ------------------------------

std::vector<double> local_level_series(int length, std::uint64_t seed) {
  gvp::Rng rng(seed);
  std::vector<double> y(length);
  double level = 0.0;
  for (int t = 0; t < length; ++t) {
    level += gvp::draw_normal(rng);                 // random-walk level
    y[t] = level + 0.3 * gvp::draw_normal(rng);     // observation noise
  }
  return y;
}

gvp::PipelineConfig pipeline_config(std::uint64_t seed) {
  gvp::PipelineConfig cfg;
  cfg.d = 1;
  cfg.alpha = 0.05;
  cfg.components = 3;
  cfg.draws = 1000;
  cfg.vb.iterations = 2000;
  cfg.seed = seed;
  cfg.holdout = true;
  return cfg;
}

// The first replication is also pushed through the command-line pipeline to
// pin the library call and the CLI artifact to the same numbers.
bool pipeline_cli_matches(const std::vector<double>& series, const gvp::PipelineConfig& cfg,
                          const gvp::PipelineResult& expect, std::string* detail) {
#ifdef GVP_CLI_PATH
  namespace fs = std::filesystem;
  const fs::path dir = fs::temp_directory_path() / "gvp_acceptance_pipe";
  fs::remove_all(dir);
  fs::create_directories(dir);
  gvp::DataSet data;
  data.y = series;
  gvp::write_series((dir / "series.csv").string(), data);
  {
    std::ofstream ini(dir / "pipe.ini");
    ini << "[experiment]\n"
        << "data = " << (dir / "series.csv").string() << "\n"
        << "seed = " << cfg.seed << "\n"
        << "[pipeline]\n"
        << "d = 1\nalpha = 0.05\ncomponents = 3\ndraws = " << cfg.draws << "\nholdout = yes\n"
        << "[vb]\n"
        << "iterations = " << cfg.vb.iterations << "\n";
  }
  const std::string cmd = std::string(GVP_CLI_PATH) + " pipeline --config " +
                          (dir / "pipe.ini").string() + " --out " + dir.string() +
                          " >/dev/null 2>&1";
  if (std::system(cmd.c_str()) != 0) {
    *detail = "cmd_pipeline run failed";
    return false;
  }
  std::ifstream in(dir / "interval.csv");
  std::string header, row;
  std::getline(in, header);
  std::getline(in, row);
  double lo = 0, mid = 0, hi = 0;
  char c = 0;
  std::istringstream(row) >> lo >> c >> mid >> c >> hi;
  if (lo != expect.lower || mid != expect.median || hi != expect.upper) {
    *detail = "cmd_pipeline interval differs from the library call";
    return false;
  }
#else
  (void)series;
  (void)cfg;
  (void)expect;
  (void)detail;
#endif
  return true;
}

bool criterion_pipeline_coverage(std::string* detail) {
  const int reps = 200;
  const int length = 120;
  int covered = 0;
  for (int r = 0; r < reps; ++r) {
    const std::vector<double> series =
        local_level_series(length, gvp::derive_seed(kSeedPipe, 0x646174, r));
    const gvp::PipelineConfig cfg = pipeline_config(gvp::derive_seed(kSeedPipe, 0x706970, r));
    const gvp::PipelineResult res = gvp::run_pipeline(series, cfg);
    if (!(res.lower < res.upper)) {
      *detail = "replication " + std::to_string(r) + ": degenerate interval";
      return false;
    }
    if (r == 0 && !pipeline_cli_matches(series, cfg, res, detail)) return false;
    if (*res.holdout_y >= res.lower && *res.holdout_y <= res.upper) ++covered;
  }
  const double coverage = static_cast<double>(covered) / reps;
  *detail = "coverage " + fmt(coverage) + " (" + std::to_string(covered) + "/" +
            std::to_string(reps) + "), band [" + fmt(kCoverageLo) + ", " + fmt(kCoverageHi) + "]";
  return coverage >= kCoverageLo && coverage <= kCoverageHi;
}

// ---- harness ----------------------------------------------------------------

struct Criterion {
  int id;
  const char* name;
  bool (*run)(std::string*);
};

const Criterion kCriteria[] = {
    {1, "criterion gradients vs finite differences", criterion_gradients},
    {2, "Gaussian CRPS closed form vs quadrature", criterion_crps},
    {3, "conjugate location family, both engines", criterion_conjugate},
    {4, "desk-scale toy coherence", criterion_toy_coherence},
    {5, "desk-scale engine merging", criterion_merging},
    {6, "correct-specification column flatness", criterion_correct_specification},
    {7, "LSTAR/mixture coherence", criterion_lstar_mixture},
    {8, "BNN information-set monotonicity", criterion_bnn_monotonicity},
    {9, "predictive-object invariants", criterion_predictive_invariants},
    {10, "toy-run determinism", criterion_determinism},
    {11, "pipeline interval coverage", criterion_pipeline_coverage},
};

}  // namespace

int main(int argc, char** argv) {
  int only = 0;
  for (int i = 1; i < argc; ++i) {
    const std::string arg = argv[i];
    if (arg == "--only" && i + 1 < argc) {
      only = std::atoi(argv[++i]);
    } else if (arg == "--help") {
      std::cout << "usage: gvp_acceptance [--only N]\n";
      for (const Criterion& c : kCriteria) {
        std::cout << "  " << c.id << ": " << c.name << "\n";
      }
      return 0;
    } else {
      std::cerr << "unknown argument '" << arg << "'\n";
      return 1;
    }
  }

  bool all_pass = true;
  bool any_run = false;
  for (const Criterion& c : kCriteria) {
    if (only != 0 && c.id != only) continue;
    any_run = true;
    const auto start = std::chrono::steady_clock::now();
    std::string detail;
    bool pass = false;
    try {
      pass = c.run(&detail);
    } catch (const std::exception& e) {
      detail = std::string("exception: ") + e.what();
    }
    const double secs =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    std::cout << "[criterion " << c.id << "] " << (pass ? "PASS" : "FAIL") << " — " << c.name
              << ": " << detail << " (" << fmt(secs, "%.1f") << "s)" << std::endl;
    all_pass = all_pass && pass;
  }
  if (!any_run) {
    std::cerr << "no criterion numbered " << only << "\n";
    return 1;
  }
  return all_pass ? 0 : 1;
}
