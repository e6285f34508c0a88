// gvp: simulate, calibrate and evaluate loss-based predictive models from the
// command line. Subcommands mirror the library surface; every run writes a
// manifest with the fully materialized configuration so it can be re-run
// bitwise-identically.

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <limits>
#include <optional>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"

#include "gvp/config.hpp"
#include "gvp/dgp.hpp"
#include "gvp/evaluate.hpp"
#include "gvp/io.hpp"
#include "gvp/mcmc.hpp"
#include "gvp/pipeline.hpp"
#include "gvp/replicate.hpp"
#include "gvp/scoring.hpp"
#include "gvp/vb.hpp"

namespace fs = std::filesystem;
using Json = nlohmann::json;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitHardError = 1;
constexpr int kExitPartial = 2;

struct CommonFlags {
  std::string config_path;
  std::string out_dir = ".";
  std::optional<std::uint64_t> seed;
  std::string engine;
  int workers = 1;
};

void add_common(CLI::App* cmd, CommonFlags* flags, bool config_required) {
  auto* opt = cmd->add_option("--config", flags->config_path, "configuration file");
  if (config_required) opt->required();
  cmd->add_option("--out", flags->out_dir, "output directory");
  cmd->add_option("--seed", flags->seed, "master seed (overrides the config)");
  cmd->add_option("--engine", flags->engine, "posterior engine: vb, mcmc or both");
  cmd->add_option("--workers", flags->workers, "parallel cells for evaluation");
}

fs::path ensure_out_dir(const std::string& dir) {
  fs::path p(dir);
  fs::create_directories(p);
  return p;
}

Json config_echo(const gvp::ConfigFile& cfg) {
  Json echo = Json::object();
  for (const auto& [key, value] : cfg.entries()) echo[key] = value;
  return echo;
}

void write_manifest(const fs::path& out_dir, Json manifest) {
  manifest["version"] = "0.1.0";
  std::ofstream out(out_dir / "manifest.json");
  if (!out) throw std::runtime_error("cannot write manifest in '" + out_dir.string() + "'");
  out << manifest.dump(2) << "\n";
}

Json rolling_echo(const gvp::RollingConfig& r) {
  Json j;
  j["n0"] = r.n0;
  j["refit_every"] = r.refit_every;
  j["warm_start"] = r.warm_start;
  j["refit_iterations"] = r.refit_iterations;
  j["draws"] = r.draws;
  j["weight"] = r.weight;
  j["seed"] = r.seed;
  j["workers"] = r.workers;
  j["vb"]["iterations"] = r.vb.iterations;
  j["vb"]["initial_scale"] = r.vb.initial_scale;
  j["vb"]["decay"] = r.vb.adadelta.decay;
  j["vb"]["epsilon"] = r.vb.adadelta.epsilon;
  j["vb"]["draws_per_gradient"] = r.vb.draws_per_gradient;
  j["vb"]["max_skip_fraction"] = r.vb.max_skip_fraction;
  j["vb"]["monitor_window"] = r.vb.monitor_window;
  j["mcmc"]["burn_in"] = r.mcmc.burn_in;
  j["mcmc"]["retain"] = r.mcmc.retain;
  j["mcmc"]["target_acceptance"] = r.mcmc.target_acceptance;
  j["mcmc"]["min_acceptance"] = r.mcmc.min_acceptance;
  j["mcmc"]["adapt_covariance"] = r.mcmc.adapt_covariance;
  j["mcmc"]["covariance_start"] = r.mcmc.covariance_start;
  j["mcmc"]["initial_step"] = r.mcmc.initial_step;
  return j;
}

gvp::DataSet experiment_data(const gvp::ExperimentConfig& ex) {
  if (ex.dgp) return gvp::simulate(*ex.dgp);
  return gvp::load_series(ex.data_path, ex.data_column);
}

// Runs one experiment (possibly under both engines), writes all artifacts
// into out_dir with the given file prefix, appends run info to the manifest
// section. Returns kExitPartial if any row failed.
int run_experiment(const gvp::DataSet& data, gvp::RollingConfig rolling, gvp::EngineMode mode,
                   const fs::path& out_dir, const std::string& prefix, Json* runs) {
  int exit_code = kExitOk;
  std::vector<gvp::Engine> engines;
  if (mode == gvp::EngineMode::Vb || mode == gvp::EngineMode::Both) {
    engines.push_back(gvp::Engine::Vb);
  }
  if (mode == gvp::EngineMode::Mcmc || mode == gvp::EngineMode::Both) {
    engines.push_back(gvp::Engine::Mcmc);
  }

  std::vector<gvp::ScoreMatrix> matrices;
  Json entry;
  entry["prefix"] = prefix;
  entry["series_length"] = data.length();
  for (gvp::Engine engine : engines) {
    const gvp::RollingResult res = gvp::rolling_evaluate(data, rolling, engine);
    const std::string tag = prefix + "_" + gvp::engine_label(engine);
    gvp::write_matrix_csv((out_dir / (tag + "_matrix.csv")).string(), res.matrix);
    gvp::write_score_log_csv((out_dir / (tag + "_scores.csv")).string(), res.matrix, res.log);
    gvp::write_coherence_csv((out_dir / (tag + "_coherence.csv")).string(),
                             gvp::coherence_report(res.matrix));
    if (res.matrix.any_failed()) exit_code = kExitPartial;
    Json m;
    m["engine"] = gvp::engine_label(engine);
    m["evaluation_count"] = res.matrix.evaluation_count;
    int failures = 0;
    for (char f : res.matrix.row_failed) failures += f ? 1 : 0;
    m["failed_rows"] = failures;
    m["refit_failures"] = res.matrix.refit_failures;
    entry["engines"].push_back(m);
    matrices.push_back(res.matrix);
  }
  if (matrices.size() == 2) {
    const gvp::MergingReport merge = gvp::merging_report(matrices[0], matrices[1]);
    gvp::write_merging_csv((out_dir / (prefix + "_merging.csv")).string(), merge);
    entry["merging"]["max_discrepancy"] = merge.max_discrepancy;
    entry["merging"]["mean_discrepancy"] = merge.mean_discrepancy;
  }
  runs->push_back(entry);
  return exit_code;
}

int cmd_simulate(const CommonFlags& flags) {
  gvp::ConfigFile cfg = gvp::ConfigFile::load(flags.config_path);
  const int length = cfg.get_int("experiment", "t", 0);
  std::uint64_t seed = cfg.get_uint64("experiment", "seed", 0);
  if (flags.seed) seed = *flags.seed;
  gvp::DgpSpec spec = gvp::parse_dgp(cfg, length, seed);
  cfg.reject_unknown();
  const fs::path out_dir = ensure_out_dir(flags.out_dir);
  const gvp::DataSet data = gvp::simulate(spec);
  gvp::write_series((out_dir / "series.csv").string(), data);

  Json manifest;
  manifest["command"] = "simulate";
  manifest["config"] = config_echo(cfg);
  manifest["seed"] = seed;
  manifest["length"] = spec.length;
  manifest["burn_in"] = spec.burn_in;
  manifest["outputs"] = {"series.csv"};
  write_manifest(out_dir, manifest);
  return kExitOk;
}

int cmd_fit(const CommonFlags& flags) {
  gvp::ConfigFile cfg = gvp::ConfigFile::load(flags.config_path);
  gvp::ExperimentConfig ex = gvp::parse_experiment(cfg);
  if (flags.seed) ex.rolling.seed = *flags.seed;
  if (!flags.engine.empty()) ex.engine = gvp::parse_engine_mode(flags.engine);
  if (ex.engine == gvp::EngineMode::Both) {
    throw std::invalid_argument("fit calibrates one engine; pass --engine vb or --engine mcmc");
  }
  const std::string rule_label =
      cfg.get_string("experiment", "rule", ex.rolling.update_rules.front().label());
  const int window = cfg.get_int("experiment", "n", 0);
  cfg.reject_unknown();

  const gvp::DataSet data = experiment_data(ex);
  const int n = window > 0 ? window : data.length();
  if (n < 2 || n > data.length()) {
    throw std::invalid_argument("fit window must lie within the series");
  }
  ex.rolling.model = gvp::resolve_model(ex.model, data);
  const auto model = gvp::make_model(ex.rolling.model, data, n);

  gvp::ScoringRule rule = gvp::parse_rule(rule_label);
  gvp::FitArtifact artifact;
  if (rule.needs_threshold()) {
    rule = rule.bind_threshold(gvp::window_quantile(data, n, rule.level));
    artifact.threshold = rule.threshold;
  }

  artifact.engine = gvp::engine_label(
      ex.engine == gvp::EngineMode::Vb ? gvp::Engine::Vb : gvp::Engine::Mcmc);
  artifact.model = ex.model;
  artifact.rule_label = rule.label();
  artifact.window = n;
  artifact.weight = ex.rolling.weight;

  double elbo_smoothed = std::numeric_limits<double>::quiet_NaN();
  int elbo_skipped = -1;
  if (ex.engine == gvp::EngineMode::Vb) {
    gvp::VbConfig vcfg = ex.rolling.vb;
    vcfg.criterion_weight = ex.rolling.weight;
    vcfg.seed = gvp::derive_seed(ex.rolling.seed, 0x666974);
    const gvp::VbResult res = gvp::calibrate(
        *model, rule, data, n, gvp::default_init(*model, data, n, vcfg.initial_scale), vcfg);
    artifact.lambda = res.lambda;
    elbo_smoothed = gvp::smoothed_tail_mean(res.elbo_trace, vcfg.monitor_window);
    elbo_skipped = res.skipped;
  } else {
    gvp::McmcConfig mcfg = ex.rolling.mcmc;
    mcfg.seed = gvp::derive_seed(ex.rolling.seed, 0x666974);
    const gvp::McmcResult res =
        gvp::rwm_sample(gvp::gibbs_log_target(*model, rule, data, n, ex.rolling.weight),
                        model->initial_guess(data, n), mcfg);
    artifact.draws = gvp::thin_evenly(res.draws, ex.rolling.draws);
  }

  const fs::path out_dir = ensure_out_dir(flags.out_dir);
  gvp::write_fit((out_dir / "fit.json").string(), artifact);

  Json manifest;
  manifest["command"] = "fit";
  manifest["config"] = config_echo(cfg);
  manifest["seed"] = ex.rolling.seed;
  manifest["engine"] = artifact.engine;
  manifest["rule"] = artifact.rule_label;
  manifest["window"] = n;
  manifest["rolling"] = rolling_echo(ex.rolling);
  if (ex.engine == gvp::EngineMode::Vb) {
    manifest["elbo_smoothed"] = elbo_smoothed;
    manifest["iterations_skipped"] = elbo_skipped;
  }
  manifest["outputs"] = {"fit.json"};
  write_manifest(out_dir, manifest);
  return kExitOk;
}

int cmd_predict(const CommonFlags& flags, const std::string& fit_path,
                const std::string& data_path, const std::string& data_column, int draws,
                bool next) {
  const gvp::FitArtifact fit = gvp::read_fit(fit_path);
  const gvp::DataSet data = gvp::load_series(data_path, data_column);
  const gvp::ModelSpec spec = gvp::resolve_model(fit.model, data);
  const auto model = gvp::make_model(spec, data, fit.window);

  const int n = next ? data.length() : data.length() - 1;
  if (n < 1) throw std::invalid_argument("series too short to predict from");

  std::uint64_t seed = flags.seed ? *flags.seed : 0;
  gvp::Ensemble ens;
  if (fit.engine == "vb") {
    ens = gvp::estimate_gvp_predictive(fit.lambda, *model, data, n, draws,
                                       gvp::derive_seed(seed, 0x707264));
  } else {
    ens = gvp::make_ensemble(*model, fit.draws, data, n);
  }
  const gvp::ConditionalPredictive pred{std::move(ens)};

  Json out;
  out["mean"] = gvp::mean(pred);
  out["sd"] = std::sqrt(gvp::variance(pred));
  for (double q : {0.025, 0.05, 0.25, 0.5, 0.75, 0.95, 0.975}) {
    char key[16];
    std::snprintf(key, sizeof(key), "%g", q);
    out["quantiles"][key] = gvp::quantile(pred, q);
  }
  if (!next) {
    const double y = data.y[n];
    out["holdout"]["y"] = y;
    out["holdout"]["LS"] = gvp::log_score(pred, y).value;
    out["holdout"]["CRPS"] = gvp::crps_score(pred, y).value;
    out["holdout"]["MSIS"] = gvp::interval_score(pred, y, 0.05).value;
  }

  const fs::path out_dir = ensure_out_dir(flags.out_dir);
  std::ofstream f(out_dir / "predictive.json");
  if (!f) throw std::runtime_error("cannot write predictive.json");
  f << out.dump(2) << "\n";

  Json manifest;
  manifest["command"] = "predict";
  manifest["fit"] = fit_path;
  manifest["data"] = data_path;
  manifest["seed"] = seed;
  manifest["draws"] = draws;
  manifest["next"] = next;
  manifest["outputs"] = {"predictive.json"};
  write_manifest(out_dir, manifest);
  return kExitOk;
}

int cmd_evaluate(const CommonFlags& flags) {
  gvp::ConfigFile cfg = gvp::ConfigFile::load(flags.config_path);
  gvp::ExperimentConfig ex = gvp::parse_experiment(cfg);
  cfg.reject_unknown();
  if (flags.seed) {
    ex.rolling.seed = *flags.seed;
    if (ex.dgp) ex.dgp->seed = gvp::derive_seed(*flags.seed, 0x646770);
  }
  if (!flags.engine.empty()) ex.engine = gvp::parse_engine_mode(flags.engine);
  ex.rolling.workers = flags.workers;

  const gvp::DataSet data = experiment_data(ex);
  ex.rolling.model = gvp::resolve_model(ex.model, data);

  const fs::path out_dir = ensure_out_dir(flags.out_dir);
  Json runs = Json::array();
  const int code = run_experiment(data, ex.rolling, ex.engine, out_dir, "experiment", &runs);

  Json manifest;
  manifest["command"] = "evaluate";
  manifest["config"] = config_echo(cfg);
  manifest["engine"] = gvp::engine_mode_label(ex.engine);
  manifest["seed"] = ex.rolling.seed;
  manifest["model"] = gvp::model_label(ex.rolling.model);
  manifest["rolling"] = rolling_echo(ex.rolling);
  manifest["runs"] = runs;
  write_manifest(out_dir, manifest);
  return code;
}

int cmd_replicate(const CommonFlags& flags, const std::string& target_name,
                  const std::string& scale_name, const std::string& dgp_name) {
  const gvp::ReplicateTarget target = gvp::parse_target(target_name);
  const gvp::Scale scale = gvp::parse_scale(scale_name);
  const std::uint64_t seed = flags.seed ? *flags.seed : 0;

  std::vector<gvp::ReplicateRun> plan = gvp::replicate_runs(target, scale, seed, dgp_name);
  const fs::path out_dir = ensure_out_dir(flags.out_dir);
  Json runs = Json::array();
  int code = kExitOk;
  for (gvp::ReplicateRun& run : plan) {
    if (!flags.engine.empty()) run.engine = gvp::parse_engine_mode(flags.engine);
    run.rolling.workers = flags.workers;
    const gvp::DataSet data = gvp::simulate(run.dgp);
    run.rolling.model = gvp::resolve_model(run.model, data);
    const int run_code =
        run_experiment(data, run.rolling, run.engine, out_dir, run.name, &runs);
    code = std::max(code, run_code);
  }

  Json manifest;
  manifest["command"] = "replicate";
  manifest["target"] = target_name;
  manifest["scale"] = scale_name;
  if (!dgp_name.empty()) manifest["dgp"] = dgp_name;
  manifest["seed"] = seed;
  manifest["runs"] = runs;
  write_manifest(out_dir, manifest);
  return code;
}

int cmd_pipeline(const CommonFlags& flags) {
  gvp::ConfigFile cfg = gvp::ConfigFile::load(flags.config_path);
  gvp::PipelineConfig pcfg = gvp::parse_pipeline(cfg);
  const std::string data_path = cfg.require_string("experiment", "data");
  const std::string data_column = cfg.get_string("experiment", "data_column", "y");
  cfg.reject_unknown();
  if (flags.seed) pcfg.seed = *flags.seed;

  const gvp::DataSet data = gvp::load_series(data_path, data_column);
  const gvp::PipelineResult res = gvp::run_pipeline(data.y, pcfg);

  const fs::path out_dir = ensure_out_dir(flags.out_dir);
  {
    std::ofstream f(out_dir / "interval.csv");
    if (!f) throw std::runtime_error("cannot write interval.csv");
    f << "lower,median,upper\n"
      << gvp::format_double(res.lower) << "," << gvp::format_double(res.median) << ","
      << gvp::format_double(res.upper) << "\n";
  }

  Json manifest;
  manifest["command"] = "pipeline";
  manifest["config"] = config_echo(cfg);
  manifest["seed"] = pcfg.seed;
  manifest["fit_length"] = res.fit_length;
  manifest["bandwidth"] = res.bandwidth;
  manifest["interval"]["lower"] = res.lower;
  manifest["interval"]["median"] = res.median;
  manifest["interval"]["upper"] = res.upper;
  if (res.holdout_y) {
    manifest["holdout"]["y"] = *res.holdout_y;
    manifest["holdout"]["score"] = *res.holdout_score;
  }
  manifest["outputs"] = {"interval.csv"};
  write_manifest(out_dir, manifest);
  return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Loss-based Bayesian forecasting: variational Gibbs predictives"};
  app.require_subcommand(1);

  CommonFlags sim_flags, fit_flags, pred_flags, eval_flags, rep_flags, pipe_flags;

  auto* sim = app.add_subcommand("simulate", "generate a series from a configured DGP");
  add_common(sim, &sim_flags, true);

  auto* fit = app.add_subcommand("fit", "calibrate one model under one update rule");
  add_common(fit, &fit_flags, true);

  auto* pred = app.add_subcommand("predict", "one-step predictive from a saved fit");
  add_common(pred, &pred_flags, false);
  std::string fit_path, data_path, data_column = "y";
  int pred_draws = 1000;
  bool pred_next = false;
  pred->add_option("--fit", fit_path, "fit.json from the fit command")->required();
  pred->add_option("--data", data_path, "series CSV")->required();
  pred->add_option("--data-column", data_column, "target column name");
  pred->add_option("--draws", pred_draws, "predictive draws (vb fits)");
  pred->add_flag("--next", pred_next, "predict past the end instead of the last observation");

  auto* eval = app.add_subcommand("evaluate", "expanding-window score matrix for an experiment");
  add_common(eval, &eval_flags, true);

  auto* rep = app.add_subcommand("replicate", "run a canned experiment grid");
  add_common(rep, &rep_flags, false);
  std::string target_name, scale_name = "desk", dgp_name;
  rep->add_option("target", target_name, "toy-garch, lstar-mixture or bnn-models")->required();
  rep->add_option("--scale", scale_name, "paper or desk");
  rep->add_option("--dgp", dgp_name, "toy-garch generating process");

  auto* pipe = app.add_subcommand("pipeline", "interval forecast via difference/fit/undifference");
  add_common(pipe, &pipe_flags, true);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    // Collapse CLI11's exit-code zoo onto the documented 0/1 contract.
    return app.exit(e) == 0 ? kExitOk : kExitHardError;
  }

  try {
    if (sim->parsed()) return cmd_simulate(sim_flags);
    if (fit->parsed()) return cmd_fit(fit_flags);
    if (pred->parsed()) {
      return cmd_predict(pred_flags, fit_path, data_path, data_column, pred_draws, pred_next);
    }
    if (eval->parsed()) return cmd_evaluate(eval_flags);
    if (rep->parsed()) return cmd_replicate(rep_flags, target_name, scale_name, dgp_name);
    if (pipe->parsed()) return cmd_pipeline(pipe_flags);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitHardError;
  }
  return kExitHardError;
}
