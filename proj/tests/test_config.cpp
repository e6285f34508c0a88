#include "gvp/config.hpp"

#include <filesystem>
#include <fstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "doctest.h"
#include "gvp/rng.hpp"

namespace {

std::string tmp_path(const std::string& name) {
  return (std::filesystem::temp_directory_path() / name).string();
}

bool message_contains(const std::exception& e, const std::string& needle) {
  return std::string(e.what()).find(needle) != std::string::npos;
}

// Expects fn() to throw std::invalid_argument whose message contains needle.
template <typename Fn>
void check_throws_with(Fn fn, const std::string& needle) {
  try {
    fn();
    FAIL_CHECK("expected an exception mentioning '" << needle << "'");
  } catch (const std::invalid_argument& e) {
    CHECK_MESSAGE(message_contains(e, needle), "message was: " << e.what());
  }
}

}  // namespace

TEST_CASE("config parser reads sections, comments and whitespace") {
  const std::string text =
      "# leading comment\n"
      "[experiment]\n"
      "  t   =  3000  \n"
      "engine = both\n"
      "; another comment style\n"
      "\n"
      "[vb]\n"
      "iterations = 500\n"
      "[empty]\n";
  const gvp::ConfigFile cfg = gvp::ConfigFile::parse_text(text, "test.ini");
  CHECK(cfg.origin() == "test.ini");
  CHECK(cfg.has_section("experiment"));
  CHECK(cfg.has_section("empty"));
  CHECK_FALSE(cfg.has_section("mcmc"));
  CHECK(cfg.has("experiment", "t"));
  CHECK_FALSE(cfg.has("experiment", "T"));  // keys are case-sensitive
  CHECK(cfg.get_int("experiment", "t", 0) == 3000);
  CHECK(cfg.get_string("experiment", "engine", "vb") == "both");
  CHECK(cfg.get_int("vb", "iterations", 0) == 500);
  CHECK(cfg.get_int("vb", "absent", 42) == 42);

  const auto entries = cfg.entries();
  bool found = false;
  for (const auto& [key, value] : entries) {
    if (key == "experiment.t" && value == "3000") found = true;
  }
  CHECK(found);
}

TEST_CASE("config parser reports malformed lines with their origin and line") {
  check_throws_with(
      [] { gvp::ConfigFile::parse_text("[a]\nx = 1\nx = 2\n", "dup.ini"); }, "dup.ini:3");
  check_throws_with(
      [] { gvp::ConfigFile::parse_text("[a]\nx = 1\nx = 2\n", "dup.ini"); }, "duplicate");
  check_throws_with([] { gvp::ConfigFile::parse_text("x = 1\n", "o.ini"); }, "outside");
  check_throws_with([] { gvp::ConfigFile::parse_text("[a\nx = 1\n", "o.ini"); }, "o.ini:1");
  check_throws_with([] { gvp::ConfigFile::parse_text("[a]\njust words\n", "o.ini"); },
                    "key = value");
  check_throws_with([] { gvp::ConfigFile::parse_text("[a]\n= 5\n", "o.ini"); }, "empty key");
  check_throws_with([] { gvp::ConfigFile::parse_text("[]\n", "o.ini"); }, "o.ini:1");
}

TEST_CASE("typed getters validate values and cite the offending line") {
  const std::string text =
      "[s]\n"
      "num = 12\n"
      "notnum = 3.5x\n"
      "frac = 0.25\n"
      "flag = yes\n"
      "off = 0\n"
      "badflag = maybe\n"
      "big = 18446744073709551615\n"
      "list = LS, CLS10 ,MSIS\n"
      "blanklist = , ,\n";
  const gvp::ConfigFile cfg = gvp::ConfigFile::parse_text(text, "t.ini");

  CHECK(cfg.get_int("s", "num", 0) == 12);
  check_throws_with([&] { cfg.get_int("s", "notnum", 0); }, "t.ini:3");
  CHECK(cfg.get_double("s", "frac", 0.0) == 0.25);
  check_throws_with([&] { cfg.get_double("s", "notnum", 0.0); }, "expects a number");
  CHECK(cfg.get_bool("s", "flag", false));
  CHECK_FALSE(cfg.get_bool("s", "off", true));
  CHECK(cfg.get_bool("s", "missing", true));
  check_throws_with([&] { cfg.get_bool("s", "badflag", false); }, "true/false");
  CHECK(cfg.get_uint64("s", "big", 0) == 18446744073709551615ull);
  CHECK(cfg.get_list("s", "list", {}) == std::vector<std::string>{"LS", "CLS10", "MSIS"});
  check_throws_with([&] { cfg.get_list("s", "blanklist", {}); }, "comma-separated");
  CHECK(cfg.require_string("s", "flag") == "yes");
  check_throws_with([&] { cfg.require_string("s", "gone"); }, "'gone'");
}

TEST_CASE("unknown keys are rejected once the consumers have run") {
  const gvp::ConfigFile cfg =
      gvp::ConfigFile::parse_text("[s]\nused = 1\ntypo = 2\n", "u.ini");
  CHECK(cfg.get_int("s", "used", 0) == 1);
  check_throws_with([&] { cfg.reject_unknown(); }, "[s] typo (line 3)");

  const gvp::ConfigFile clean = gvp::ConfigFile::parse_text("[s]\nused = 1\n", "u.ini");
  CHECK(clean.get_int("s", "used", 0) == 1);
  CHECK_NOTHROW(clean.reject_unknown());
}

TEST_CASE("config files load from disk with the path as origin") {
  const std::string path = tmp_path("gvp_test_cfg.ini");
  {
    std::ofstream out(path);
    out << "[experiment]\nt = 7\n";
  }
  const gvp::ConfigFile cfg = gvp::ConfigFile::load(path);
  CHECK(cfg.origin() == path);
  CHECK(cfg.get_int("experiment", "t", 0) == 7);
  std::filesystem::remove(path);
  CHECK_THROWS_AS(gvp::ConfigFile::load(path), std::runtime_error);
}

TEST_CASE("engine modes parse and label round-trip") {
  CHECK(gvp::parse_engine_mode("vb") == gvp::EngineMode::Vb);
  CHECK(gvp::parse_engine_mode("mcmc") == gvp::EngineMode::Mcmc);
  CHECK(gvp::parse_engine_mode("both") == gvp::EngineMode::Both);
  CHECK_THROWS_AS(gvp::parse_engine_mode("exact"), std::invalid_argument);
  CHECK(gvp::engine_mode_label(gvp::EngineMode::Both) == "both");
  CHECK(gvp::engine_mode_label(gvp::EngineMode::Mcmc) == "mcmc");
}

TEST_CASE("model choices resolve against the data's covariate columns") {
  gvp::DataSet data;
  data.y = {1.0, 2.0, 3.0};
  data.x_names = {"x1", "x2"};
  data.x = {{0.1, 0.2, 0.3}, {1.1, 1.2, 1.3}};

  gvp::ModelChoice garch;
  CHECK(std::holds_alternative<gvp::GarchModelSpec>(gvp::resolve_model(garch, data)));

  gvp::ModelChoice mixture;
  mixture.kind = "mixture";
  mixture.components = 5;
  const gvp::ModelSpec m = gvp::resolve_model(mixture, data);
  CHECK(std::get<gvp::MixtureModelSpec>(m).components == 5);

  gvp::ModelChoice bnn;
  bnn.kind = "bnn";
  bnn.width = 4;
  bnn.covariates = {"x2", "x1"};
  const gvp::ModelSpec b = gvp::resolve_model(bnn, data);
  CHECK(std::get<gvp::BnnModelSpec>(b).width == 4);
  CHECK(std::get<gvp::BnnModelSpec>(b).covariate_cols == std::vector<int>{1, 0});

  bnn.covariates = {"x9"};
  check_throws_with([&] { gvp::resolve_model(bnn, data); }, "x9");

  gvp::ModelChoice unknown;
  unknown.kind = "tree";
  CHECK_THROWS_AS(gvp::resolve_model(unknown, data), std::invalid_argument);
}

TEST_CASE("dgp sections parse each simulator with overrides") {
  const gvp::ConfigFile garch = gvp::ConfigFile::parse_text(
      "[dgp]\nkind = garch\nomega = 0.2\nbeta = 0.7\nburn_in = 250\n", "d.ini");
  const gvp::DgpSpec g = gvp::parse_dgp(garch, 500, 99u);
  CHECK(g.length == 500);
  CHECK(g.seed == 99u);
  CHECK(g.burn_in == 250);
  const auto& gv = std::get<gvp::GarchGaussianDgp>(g.variant);
  CHECK(gv.omega == 0.2);
  CHECK(gv.beta == 0.7);
  CHECK(gv.alpha == 0.1);  // untouched default

  const gvp::ConfigFile sv = gvp::ConfigFile::parse_text(
      "[dgp]\nkind = sv_leverage\nh_mean = -1.5\nshock_cov = -0.2\n", "d.ini");
  const auto& sl = std::get<gvp::SvLeverageDgp>(gvp::parse_dgp(sv, 100, 1u).variant);
  CHECK(sl.mean == -1.5);
  CHECK(sl.shock_cov(0, 1) == -0.2);
  CHECK(sl.shock_cov(1, 0) == -0.2);
  CHECK(sl.shock_cov(0, 0) == 1.0);

  const gvp::ConfigFile smooth = gvp::ConfigFile::parse_text(
      "[dgp]\nkind = sv_smooth\ncoef = 0.8\n", "d.ini");
  CHECK(std::get<gvp::SvSmoothTransitionDgp>(gvp::parse_dgp(smooth, 100, 1u).variant).coef == 0.8);

  const gvp::ConfigFile lstar = gvp::ConfigFile::parse_text(
      "[dgp]\nkind = lstar\nsigma = 2.0\nnu = 5\n", "d.ini");
  const auto& lv = std::get<gvp::LstarTDgp>(gvp::parse_dgp(lstar, 100, 1u).variant);
  CHECK(lv.sigma_eps == 2.0);
  CHECK(lv.nu == 5.0);

  const gvp::ConfigFile dyn = gvp::ConfigFile::parse_text(
      "[dgp]\nkind = dyn_regression\nalpha2 = 0.25\nb3 = 2.0\ns12 = 0.4\n", "d.ini");
  const auto& dv = std::get<gvp::DynRegressionDgp>(gvp::parse_dgp(dyn, 100, 1u).variant);
  CHECK(dv.alpha[1] == 0.25);
  CHECK(dv.b[2] == 2.0);
  CHECK(dv.sigma(0, 1) == 0.4);

  const gvp::ConfigFile nokind = gvp::ConfigFile::parse_text("[dgp]\nburn_in = 5\n", "d.ini");
  CHECK_THROWS_AS(gvp::parse_dgp(nokind, 100, 1u), std::invalid_argument);
  const gvp::ConfigFile badkind =
      gvp::ConfigFile::parse_text("[dgp]\nkind = weather\n", "d.ini");
  check_throws_with([&] { gvp::parse_dgp(badkind, 100, 1u); }, "weather");
}

TEST_CASE("experiment parsing applies defaults and derives the dgp seed") {
  const std::string text =
      "[experiment]\n"
      "t = 3000\n"
      "seed = 12345\n"
      "[dgp]\n"
      "kind = sv_leverage\n";
  const gvp::ExperimentConfig ex =
      gvp::parse_experiment(gvp::ConfigFile::parse_text(text, "e.ini"));

  REQUIRE(ex.dgp.has_value());
  CHECK(ex.dgp->length == 3000);
  // The simulation stream is derived from the master seed, not equal to it.
  CHECK(ex.dgp->seed == gvp::derive_seed(12345u, 0x646770));
  CHECK(ex.model.kind == "garch");
  CHECK(ex.engine == gvp::EngineMode::Vb);
  CHECK(ex.rolling.seed == 12345u);
  CHECK(ex.rolling.refit_every == 1);
  CHECK(ex.rolling.warm_start);
  CHECK(ex.rolling.draws == 1000);
  CHECK(ex.rolling.weight == 1.0);

  // Full default rule grid for a garch family, evaluation mirroring update.
  REQUIRE(ex.rolling.update_rules.size() == 7);
  CHECK(ex.rolling.update_rules[0].label() == "LS");
  CHECK(ex.rolling.update_rules[5].label() == "CRPS");
  CHECK(ex.rolling.update_rules[6].label() == "MSIS");
  REQUIRE(ex.rolling.eval_rules.size() == 7);
  CHECK(ex.rolling.eval_rules[1].label() == "CLS10");
}

TEST_CASE("experiment parsing honours explicit rule lists and engine") {
  const std::string text =
      "[experiment]\n"
      "t = 1200\n"
      "seed = 9\n"
      "engine = both\n"
      "model = mixture\n"
      "components = 5\n"
      "n0 = 400\n"
      "refit_every = 200\n"
      "update_rules = LS, MSIS\n"
      "[dgp]\n"
      "kind = lstar\n"
      "[vb]\n"
      "iterations = 2500\n"
      "monitor_window = 125\n"
      "refit_iterations = 800\n"
      "[mcmc]\n"
      "burn_in = 6000\n"
      "retain = 7000\n"
      "adapt_covariance = true\n";
  const gvp::ExperimentConfig ex =
      gvp::parse_experiment(gvp::ConfigFile::parse_text(text, "e.ini"));
  CHECK(ex.engine == gvp::EngineMode::Both);
  CHECK(ex.model.kind == "mixture");
  CHECK(ex.model.components == 5);
  CHECK(ex.rolling.n0 == 400);
  CHECK(ex.rolling.refit_every == 200);
  REQUIRE(ex.rolling.update_rules.size() == 2);
  CHECK(ex.rolling.update_rules[1].label() == "MSIS");
  CHECK(ex.rolling.eval_rules.size() == 2);  // mirrors the update list
  CHECK(ex.rolling.vb.iterations == 2500);
  CHECK(ex.rolling.vb.monitor_window == 125);
  CHECK(ex.rolling.refit_iterations == 800);
  CHECK(ex.rolling.mcmc.burn_in == 6000);
  CHECK(ex.rolling.mcmc.retain == 7000);
  CHECK(ex.rolling.mcmc.adapt_covariance);
}

TEST_CASE("experiment parsing enforces its preconditions") {
  // Simulation requested without a length.
  check_throws_with(
      [] {
        gvp::parse_experiment(
            gvp::ConfigFile::parse_text("[experiment]\nseed = 1\n[dgp]\nkind = garch\n", "e.ini"));
      },
      "t must be set");

  // Neither simulation nor a data file.
  check_throws_with(
      [] { gvp::parse_experiment(gvp::ConfigFile::parse_text("[experiment]\nt = 5\n", "e.ini")); },
      "need a [dgp] section or [experiment] data");

  // The mixture family has no CRPS evaluation path.
  check_throws_with(
      [] {
        gvp::parse_experiment(gvp::ConfigFile::parse_text("[experiment]\nt = 100\n"
                                                          "model = mixture\n"
                                                          "update_rules = LS, CRPS\n"
                                                          "[dgp]\nkind = lstar\n",
                                                          "e.ini"));
      },
      "CRPS");

  // A data-backed experiment needs no [dgp] and leaves dgp unset.
  const gvp::ExperimentConfig ex = gvp::parse_experiment(
      gvp::ConfigFile::parse_text("[experiment]\ndata = series.csv\n", "e.ini"));
  CHECK_FALSE(ex.dgp.has_value());
  CHECK(ex.data_path == "series.csv");
  CHECK(ex.data_column == "y");

  // Default rule grid for the mixture already omits CRPS.
  const gvp::ExperimentConfig mx = gvp::parse_experiment(
      gvp::ConfigFile::parse_text("[experiment]\nt = 100\nmodel = mixture\n[dgp]\nkind = lstar\n",
                                  "e.ini"));
  CHECK(mx.rolling.update_rules.size() == 6);
  for (const gvp::ScoringRule& r : mx.rolling.update_rules) {
    CHECK(r.kind != gvp::ScoreKind::CRPS);
  }
}

TEST_CASE("pipeline sections parse with experiment-level seed") {
  const std::string text =
      "[experiment]\n"
      "seed = 777\n"
      "[pipeline]\n"
      "d = 2\n"
      "alpha = 0.1\n"
      "components = 4\n"
      "draws = 2000\n"
      "holdout = true\n"
      "[vb]\n"
      "iterations = 1500\n";
  const gvp::PipelineConfig p = gvp::parse_pipeline(gvp::ConfigFile::parse_text(text, "p.ini"));
  CHECK(p.d == 2);
  CHECK(p.alpha == 0.1);
  CHECK(p.components == 4);
  CHECK(p.draws == 2000);
  CHECK(p.holdout);
  CHECK(p.seed == 777u);
  CHECK(p.vb.iterations == 1500);

  const gvp::PipelineConfig defaults =
      gvp::parse_pipeline(gvp::ConfigFile::parse_text("", "p.ini"));
  CHECK(defaults.d == 1);
  CHECK(defaults.alpha == 0.05);
  CHECK(defaults.components == 3);
  CHECK(defaults.draws == 5000);
  CHECK(defaults.weight == 1.0);
  CHECK_FALSE(defaults.holdout);
}

TEST_CASE("rule lists parse as a whole") {
  const auto rules = gvp::parse_rule_list({"LS", "CLS80", "MSIS"});
  REQUIRE(rules.size() == 3);
  CHECK(rules[0].kind == gvp::ScoreKind::LS);
  CHECK(rules[1].kind == gvp::ScoreKind::CLS);
  CHECK(rules[1].tail == gvp::Tail::Upper);
  CHECK(rules[2].kind == gvp::ScoreKind::MSIS);
  CHECK_THROWS_AS(gvp::parse_rule_list({}), std::invalid_argument);
  CHECK_THROWS_AS(gvp::parse_rule_list({"LS", "SPAM"}), std::invalid_argument);
}
