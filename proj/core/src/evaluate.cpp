#include "gvp/evaluate.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <thread>

#include "gvp/garch.hpp"
#include "gvp/mixture.hpp"
#include "gvp/rng.hpp"

namespace gvp {

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();
constexpr std::uint64_t kFitStream = 0x666974;   // calibration randomness
constexpr std::uint64_t kDrawStream = 0x647261;  // predictive draw randomness

// Every random stream is keyed by (engine, update rule, window length) so
// that cells are reproducible no matter how rows are scheduled.
std::uint64_t cell_code(Engine e, int rule, int n) {
  return (static_cast<std::uint64_t>(e == Engine::Mcmc) << 56) |
         (static_cast<std::uint64_t>(rule) << 40) | static_cast<std::uint64_t>(n);
}

struct RowOutcome {
  std::vector<double> sums;
  std::vector<int> counts;
  std::vector<int> degenerate;
  std::vector<PointScore> log;
  bool failed = false;
  int refit_failures = 0;
};

ScoringRule bound_rule(const ScoringRule& rule, const DataSet& data, int n0) {
  if (!rule.needs_threshold()) return rule;
  return rule.bind_threshold(window_quantile(data, n0, rule.level));
}

RowOutcome run_row(const DataSet& data, const RollingConfig& cfg, Engine engine,
                   const ScoringRule& update, const std::vector<ScoringRule>& evals, int j) {
  const int T = data.length();
  const int E = static_cast<int>(evals.size());
  RowOutcome out;
  out.sums.assign(E, 0.0);
  out.counts.assign(E, 0);
  out.degenerate.assign(E, 0);
  out.log.reserve(static_cast<std::size_t>(E) * (T - cfg.n0));

  const auto model = make_model(cfg.model, data, cfg.n0);

  VariationalParams lambda;
  std::vector<Vec> chain_thetas;
  Vec chain_mean;
  bool fitted = false;

  for (int n = cfg.n0; n < T; ++n) {
    if ((n - cfg.n0) % cfg.refit_every == 0) {
      const std::uint64_t fit_seed = derive_seed(cfg.seed, cell_code(engine, j, n), kFitStream);
      const bool warm = fitted && cfg.warm_start;
      try {
        if (engine == Engine::Vb) {
          VbConfig vcfg = cfg.vb;
          vcfg.criterion_weight = cfg.weight;
          vcfg.iterations = warm ? cfg.refit_iterations : cfg.vb.iterations;
          vcfg.seed = fit_seed;
          const VariationalParams start =
              warm ? lambda : default_init(*model, data, n, cfg.vb.initial_scale);
          lambda = calibrate(*model, update, data, n, start, vcfg).lambda;
        } else {
          McmcConfig mcfg = cfg.mcmc;
          mcfg.seed = fit_seed;
          const Vec start = warm ? chain_mean : model->initial_guess(data, n);
          const McmcResult r = rwm_sample(gibbs_log_target(*model, update, data, n, cfg.weight),
                                          start, mcfg);
          chain_mean = Vec::Zero(model->dim());
          for (const Vec& th : r.draws) chain_mean += th;
          chain_mean /= static_cast<double>(r.draws.size());
          chain_thetas = thin_evenly(r.draws, cfg.draws);
        }
        fitted = true;
      } catch (const std::exception&) {
        if (!fitted) {
          out.failed = true;
          return out;
        }
        ++out.refit_failures;  // keep the previous calibration
      }
    }

    bool have_predictive = false;
    ConditionalPredictive pred;
    try {
      if (engine == Engine::Vb) {
        pred = estimate_gvp_predictive(lambda, *model, data, n, cfg.draws,
                                       derive_seed(cfg.seed, cell_code(engine, j, n), kDrawStream));
      } else {
        pred = make_ensemble(*model, chain_thetas, data, n);
      }
      have_predictive = true;
    } catch (const std::exception&) {
      have_predictive = false;
    }

    for (int i = 0; i < E; ++i) {
      double v = kNaN;
      bool degen = true;
      if (have_predictive) {
        try {
          const ScoreValue s = evaluate_score(evals[i], pred, data.y[n]);
          v = s.value;
          degen = s.degenerate || !std::isfinite(v);
        } catch (const std::exception&) {
        }
      }
      if (degen) {
        ++out.degenerate[i];
      } else {
        out.sums[i] += v;
        ++out.counts[i];
      }
      out.log.push_back(PointScore{j, i, n, v, degen});
    }
  }
  return out;
}

double sample_quantile(std::vector<double> sorted, double level) {
  std::sort(sorted.begin(), sorted.end());
  const int n = static_cast<int>(sorted.size());
  const double pos = level * (n - 1);
  const int lo = static_cast<int>(std::floor(pos));
  if (lo >= n - 1) return sorted[n - 1];
  const double frac = pos - lo;
  return sorted[lo] * (1.0 - frac) + sorted[lo + 1] * frac;
}

}  // namespace

std::string engine_label(Engine e) { return e == Engine::Vb ? "vb" : "mcmc"; }

std::string model_label(const ModelSpec& spec) {
  return std::visit(
      [](const auto& s) -> std::string {
        using T = std::decay_t<decltype(s)>;
        if constexpr (std::is_same_v<T, GarchModelSpec>) {
          return "garch";
        } else if constexpr (std::is_same_v<T, MixtureModelSpec>) {
          return "mixture" + std::to_string(s.components);
        } else {
          return "bnn" + std::to_string(1 + s.covariate_cols.size());
        }
      },
      spec);
}

std::unique_ptr<PredictiveModel> make_model(const ModelSpec& spec, const DataSet& data, int n0) {
  return std::visit(
      [&](const auto& s) -> std::unique_ptr<PredictiveModel> {
        using T = std::decay_t<decltype(s)>;
        if constexpr (std::is_same_v<T, GarchModelSpec>) {
          return std::make_unique<GarchModel>();
        } else if constexpr (std::is_same_v<T, MixtureModelSpec>) {
          return std::make_unique<MixtureModel>(s.components);
        } else {
          BnnSpec b;
          b.width = s.width;
          b.activation = s.activation;
          b.covariate_cols = s.covariate_cols;
          return std::make_unique<BnnModel>(b, BnnModel::standardization_from(b, data, n0));
        }
      },
      spec);
}

bool ScoreMatrix::any_failed() const {
  for (char f : row_failed) {
    if (f) return true;
  }
  return false;
}

RollingResult rolling_evaluate(const DataSet& data, const RollingConfig& cfg, Engine engine) {
  data.validate();
  const int T = data.length();
  if (cfg.n0 < 2 || cfg.n0 >= T) {
    throw std::invalid_argument("rolling_evaluate: need 2 <= n0 < series length");
  }
  if (cfg.update_rules.empty() || cfg.eval_rules.empty()) {
    throw std::invalid_argument("rolling_evaluate: rule lists must be non-empty");
  }
  if (cfg.refit_every < 1) throw std::invalid_argument("rolling_evaluate: refit_every >= 1");
  if (cfg.draws < 1) throw std::invalid_argument("rolling_evaluate: draws >= 1");

  const auto probe = make_model(cfg.model, data, cfg.n0);
  for (const auto* rules : {&cfg.update_rules, &cfg.eval_rules}) {
    for (const ScoringRule& r : *rules) {
      if (!probe->supports(r)) {
        throw std::invalid_argument("rolling_evaluate: rule " + r.label() +
                                    " is not evaluable for model " + probe->name());
      }
    }
  }

  // Censoring thresholds are frozen at initial-window quantiles for the
  // whole run so that update and evaluation target the same region.
  std::vector<ScoringRule> update_rules, eval_rules;
  update_rules.reserve(cfg.update_rules.size());
  eval_rules.reserve(cfg.eval_rules.size());
  for (const ScoringRule& r : cfg.update_rules) update_rules.push_back(bound_rule(r, data, cfg.n0));
  for (const ScoringRule& r : cfg.eval_rules) eval_rules.push_back(bound_rule(r, data, cfg.n0));

  const int R = static_cast<int>(update_rules.size());
  std::vector<RowOutcome> rows(R);
  const int workers = std::max(1, std::min(cfg.workers, R));
  if (workers == 1) {
    for (int j = 0; j < R; ++j) {
      rows[j] = run_row(data, cfg, engine, update_rules[j], eval_rules, j);
    }
  } else {
    std::atomic<int> next{0};
    auto drain = [&] {
      for (int j = next.fetch_add(1); j < R; j = next.fetch_add(1)) {
        rows[j] = run_row(data, cfg, engine, update_rules[j], eval_rules, j);
      }
    };
    std::vector<std::thread> pool;
    pool.reserve(workers);
    for (int w = 0; w < workers; ++w) pool.emplace_back(drain);
    for (auto& t : pool) t.join();
  }

  RollingResult res;
  ScoreMatrix& m = res.matrix;
  for (const ScoringRule& r : update_rules) m.update_labels.push_back(r.label());
  for (const ScoringRule& r : eval_rules) m.eval_labels.push_back(r.label());
  m.evaluation_count = T - cfg.n0;
  m.engine = engine_label(engine);
  m.seed = cfg.seed;
  m.refit_every = cfg.refit_every;
  const int E = static_cast<int>(eval_rules.size());
  m.scores.assign(R, std::vector<double>(E, kNaN));
  m.degenerate.assign(R, std::vector<int>(E, 0));
  m.row_failed.assign(R, 0);
  m.refit_failures.assign(R, 0);
  for (int j = 0; j < R; ++j) {
    const RowOutcome& row = rows[j];
    m.row_failed[j] = row.failed ? 1 : 0;
    m.refit_failures[j] = row.refit_failures;
    if (row.failed) continue;
    for (int i = 0; i < E; ++i) {
      m.degenerate[j][i] = row.degenerate[i];
      if (row.counts[i] > 0) m.scores[j][i] = row.sums[i] / row.counts[i];
    }
    res.log.insert(res.log.end(), row.log.begin(), row.log.end());
  }
  return res;
}

Ensemble make_ensemble(const PredictiveModel& model, const std::vector<Vec>& thetas,
                       const DataSet& data, int n) {
  if (thetas.empty()) throw std::invalid_argument("make_ensemble: no parameter draws");
  Ensemble e;
  e.members.reserve(thetas.size());
  for (const Vec& theta : thetas) {
    ConditionalPredictive p = model.predictive(theta, data, n);
    std::visit(
        [&e](auto&& member) {
          using T = std::decay_t<decltype(member)>;
          if constexpr (std::is_same_v<T, Ensemble>) {
            throw std::logic_error("make_ensemble: nested ensembles are not supported");
          } else {
            e.members.push_back(std::move(member));
          }
        },
        std::move(p));
  }
  return e;
}

Ensemble estimate_gvp_predictive(const VariationalParams& lambda, const PredictiveModel& model,
                                 const DataSet& data, int n, int draws, std::uint64_t seed) {
  return make_ensemble(model, sample_variational(lambda, model, draws, seed), data, n);
}

std::vector<ColumnCoherence> coherence_report(const ScoreMatrix& matrix) {
  std::vector<ColumnCoherence> report;
  for (int c = 0; c < matrix.cols(); ++c) {
    const auto it = std::find(matrix.update_labels.begin(), matrix.update_labels.end(),
                              matrix.eval_labels[c]);
    if (it == matrix.update_labels.end()) continue;
    const int r = static_cast<int>(it - matrix.update_labels.begin());
    ColumnCoherence col;
    col.rule = matrix.eval_labels[c];
    const double diag = matrix.scores[r][c];
    double best_other = -std::numeric_limits<double>::infinity();
    bool any_other = false;
    for (int k = 0; k < matrix.rows(); ++k) {
      if (k == r || std::isnan(matrix.scores[k][c])) continue;
      best_other = std::max(best_other, matrix.scores[k][c]);
      any_other = true;
    }
    if (std::isnan(diag)) {
      col.diagonal_best = false;
      col.margin = kNaN;
    } else if (!any_other) {
      col.diagonal_best = true;
      col.margin = 0.0;
    } else {
      col.diagonal_best = diag > best_other;
      col.margin = diag - best_other;
    }
    report.push_back(col);
  }
  return report;
}

MergingReport merging_report(const ScoreMatrix& a, const ScoreMatrix& b) {
  if (a.update_labels != b.update_labels || a.eval_labels != b.eval_labels) {
    throw std::invalid_argument("merging_report: matrices cover different rule grids");
  }
  MergingReport rep;
  rep.update_labels = a.update_labels;
  rep.eval_labels = a.eval_labels;
  rep.abs_diff.assign(a.rows(), std::vector<double>(a.cols(), kNaN));
  double sum = 0.0;
  int count = 0;
  for (int j = 0; j < a.rows(); ++j) {
    for (int i = 0; i < a.cols(); ++i) {
      const double d = std::abs(a.scores[j][i] - b.scores[j][i]);
      rep.abs_diff[j][i] = d;
      if (std::isnan(d)) continue;
      rep.max_discrepancy = std::max(rep.max_discrepancy, d);
      sum += d;
      ++count;
    }
  }
  rep.mean_discrepancy = count > 0 ? sum / count : kNaN;
  return rep;
}

GaussianMixture kde_predictive(const std::vector<double>& samples) {
  const int m = static_cast<int>(samples.size());
  if (m < 30) throw std::invalid_argument("kde_predictive: need at least 30 samples");
  double mean = 0.0;
  for (double s : samples) mean += s;
  mean /= m;
  double ss = 0.0;
  for (double s : samples) ss += (s - mean) * (s - mean);
  const double sd = std::sqrt(ss / (m - 1));
  const double iqr = sample_quantile(samples, 0.75) - sample_quantile(samples, 0.25);
  const double spread = std::min(sd, iqr / 1.34);
  if (!(spread > 0.0)) {
    throw std::invalid_argument("kde_predictive: sample spread is zero");
  }
  const double bw = 0.9 * spread * std::pow(static_cast<double>(m), -0.2);
  std::vector<double> weights(m, 1.0 / m);
  std::vector<double> vars(m, bw * bw);
  return GaussianMixture(std::move(weights), std::vector<double>(samples), std::move(vars));
}

std::vector<double> difference(const std::vector<double>& series, int d) {
  if (d < 0) throw std::invalid_argument("difference: order must be non-negative");
  if (static_cast<int>(series.size()) <= d) {
    throw std::invalid_argument("difference: series shorter than the differencing order");
  }
  std::vector<double> cur = series;
  for (int k = 0; k < d; ++k) {
    std::vector<double> next(cur.size() - 1);
    for (std::size_t t = 0; t + 1 < cur.size(); ++t) next[t] = cur[t + 1] - cur[t];
    cur = std::move(next);
  }
  return cur;
}

std::vector<double> undifference(const std::vector<double>& series, int d,
                                 const std::vector<double>& draws) {
  if (d < 0) throw std::invalid_argument("undifference: order must be non-negative");
  if (static_cast<int>(series.size()) <= d) {
    throw std::invalid_argument("undifference: series shorter than the differencing order");
  }
  // A draw of the next d-th difference re-integrates by adding the last
  // value of every lower-order difference (telescoping sums).
  double offset = 0.0;
  std::vector<double> cur = series;
  for (int k = 0; k < d; ++k) {
    offset += cur.back();
    std::vector<double> next(cur.size() - 1);
    for (std::size_t t = 0; t + 1 < cur.size(); ++t) next[t] = cur[t + 1] - cur[t];
    cur = std::move(next);
  }
  std::vector<double> out = draws;
  for (double& z : out) z += offset;
  return out;
}

}  // namespace gvp
