#include "gvp/config.hpp"

#include <algorithm>
#include <cstdlib>
#include <fstream>
#include <sstream>
#include <stdexcept>

#include "gvp/rng.hpp"

namespace gvp {

namespace {

std::string trim(const std::string& s) {
  const auto begin = s.find_first_not_of(" \t\r");
  if (begin == std::string::npos) return "";
  const auto end = s.find_last_not_of(" \t\r");
  return s.substr(begin, end - begin + 1);
}

std::vector<std::string> split_list(const std::string& value) {
  std::vector<std::string> out;
  std::string item;
  std::istringstream in(value);
  while (std::getline(in, item, ',')) {
    item = trim(item);
    if (!item.empty()) out.push_back(item);
  }
  return out;
}

}  // namespace

ConfigFile ConfigFile::parse_text(const std::string& text, const std::string& origin) {
  ConfigFile cfg;
  cfg.origin_ = origin;
  std::istringstream in(text);
  std::string raw;
  std::string section;
  int line_no = 0;
  while (std::getline(in, raw)) {
    ++line_no;
    const std::string line = trim(raw);
    if (line.empty() || line[0] == '#' || line[0] == ';') continue;
    if (line.front() == '[') {
      if (line.back() != ']' || line.size() < 3) {
        cfg.fail(line_no, "malformed section header '" + line + "'");
      }
      section = trim(line.substr(1, line.size() - 2));
      if (section.empty()) cfg.fail(line_no, "empty section name");
      cfg.sections_[section];  // a section may legitimately stay empty
      continue;
    }
    const auto eq = line.find('=');
    if (eq == std::string::npos) {
      cfg.fail(line_no, "expected 'key = value', got '" + line + "'");
    }
    if (section.empty()) cfg.fail(line_no, "key outside any [section]");
    const std::string key = trim(line.substr(0, eq));
    const std::string value = trim(line.substr(eq + 1));
    if (key.empty()) cfg.fail(line_no, "empty key");
    auto& entries = cfg.sections_[section];
    if (entries.count(key)) {
      cfg.fail(line_no, "duplicate key '" + key + "' in [" + section + "]");
    }
    entries[key] = Entry{value, line_no, false};
  }
  return cfg;
}

ConfigFile ConfigFile::load(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open config file '" + path + "'");
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return parse_text(buffer.str(), path);
}

bool ConfigFile::has_section(const std::string& section) const {
  return sections_.count(section) > 0;
}

bool ConfigFile::has(const std::string& section, const std::string& key) const {
  return find(section, key) != nullptr;
}

const ConfigFile::Entry* ConfigFile::find(const std::string& section,
                                          const std::string& key) const {
  const auto sit = sections_.find(section);
  if (sit == sections_.end()) return nullptr;
  const auto kit = sit->second.find(key);
  if (kit == sit->second.end()) return nullptr;
  kit->second.used = true;
  return &kit->second;
}

void ConfigFile::fail(int line, const std::string& message) const {
  throw std::invalid_argument(origin_ + ":" + std::to_string(line) + ": " + message);
}

std::string ConfigFile::get_string(const std::string& section, const std::string& key,
                                   const std::string& fallback) const {
  const Entry* e = find(section, key);
  return e ? e->value : fallback;
}

std::string ConfigFile::require_string(const std::string& section, const std::string& key) const {
  const Entry* e = find(section, key);
  if (!e) {
    throw std::invalid_argument(origin_ + ": missing required key '" + key + "' in [" + section +
                                "]");
  }
  return e->value;
}

int ConfigFile::get_int(const std::string& section, const std::string& key, int fallback) const {
  const Entry* e = find(section, key);
  if (!e) return fallback;
  try {
    std::size_t pos = 0;
    const int v = std::stoi(e->value, &pos);
    if (pos != e->value.size()) throw std::invalid_argument("trailing characters");
    return v;
  } catch (const std::exception&) {
    fail(e->line, "'" + key + "' expects an integer, got '" + e->value + "'");
  }
}

double ConfigFile::get_double(const std::string& section, const std::string& key,
                              double fallback) const {
  const Entry* e = find(section, key);
  if (!e) return fallback;
  try {
    std::size_t pos = 0;
    const double v = std::stod(e->value, &pos);
    if (pos != e->value.size()) throw std::invalid_argument("trailing characters");
    return v;
  } catch (const std::exception&) {
    fail(e->line, "'" + key + "' expects a number, got '" + e->value + "'");
  }
}

bool ConfigFile::get_bool(const std::string& section, const std::string& key,
                          bool fallback) const {
  const Entry* e = find(section, key);
  if (!e) return fallback;
  if (e->value == "true" || e->value == "1" || e->value == "yes") return true;
  if (e->value == "false" || e->value == "0" || e->value == "no") return false;
  fail(e->line, "'" + key + "' expects true/false, got '" + e->value + "'");
}

std::uint64_t ConfigFile::get_uint64(const std::string& section, const std::string& key,
                                     std::uint64_t fallback) const {
  const Entry* e = find(section, key);
  if (!e) return fallback;
  try {
    std::size_t pos = 0;
    const std::uint64_t v = std::stoull(e->value, &pos);
    if (pos != e->value.size()) throw std::invalid_argument("trailing characters");
    return v;
  } catch (const std::exception&) {
    fail(e->line, "'" + key + "' expects an unsigned integer, got '" + e->value + "'");
  }
}

std::vector<std::string> ConfigFile::get_list(const std::string& section, const std::string& key,
                                              const std::vector<std::string>& fallback) const {
  const Entry* e = find(section, key);
  if (!e) return fallback;
  const auto items = split_list(e->value);
  if (items.empty()) fail(e->line, "'" + key + "' expects a comma-separated list");
  return items;
}

void ConfigFile::reject_unknown() const {
  std::vector<std::string> complaints;
  for (const auto& [section, entries] : sections_) {
    for (const auto& [key, entry] : entries) {
      if (!entry.used) {
        complaints.push_back("[" + section + "] " + key + " (line " +
                             std::to_string(entry.line) + ")");
      }
    }
  }
  if (complaints.empty()) return;
  std::string msg = origin_ + ": unknown keys:";
  for (const auto& c : complaints) msg += " " + c + ";";
  throw std::invalid_argument(msg);
}

std::vector<std::pair<std::string, std::string>> ConfigFile::entries() const {
  std::vector<std::pair<std::string, std::string>> out;
  for (const auto& [section, entries] : sections_) {
    for (const auto& [key, entry] : entries) {
      out.emplace_back(section + "." + key, entry.value);
    }
  }
  return out;
}

EngineMode parse_engine_mode(const std::string& name) {
  if (name == "vb") return EngineMode::Vb;
  if (name == "mcmc") return EngineMode::Mcmc;
  if (name == "both") return EngineMode::Both;
  throw std::invalid_argument("unknown engine '" + name + "' (expected vb, mcmc or both)");
}

std::string engine_mode_label(EngineMode mode) {
  switch (mode) {
    case EngineMode::Vb: return "vb";
    case EngineMode::Mcmc: return "mcmc";
    default: return "both";
  }
}

ModelSpec resolve_model(const ModelChoice& choice, const DataSet& data) {
  if (choice.kind == "garch") return GarchModelSpec{};
  if (choice.kind == "mixture") {
    MixtureModelSpec m;
    m.components = choice.components;
    return m;
  }
  if (choice.kind == "bnn") {
    BnnModelSpec b;
    b.width = choice.width;
    b.activation = choice.activation;
    for (const std::string& name : choice.covariates) {
      const auto it = std::find(data.x_names.begin(), data.x_names.end(), name);
      if (it == data.x_names.end()) {
        throw std::invalid_argument("model input column '" + name + "' not present in the data");
      }
      b.covariate_cols.push_back(static_cast<int>(it - data.x_names.begin()));
    }
    return b;
  }
  throw std::invalid_argument("unknown model '" + choice.kind +
                              "' (expected garch, mixture or bnn)");
}

DgpSpec parse_dgp(const ConfigFile& cfg, int length, std::uint64_t seed) {
  DgpSpec spec;
  spec.length = length;
  spec.seed = seed;
  spec.burn_in = cfg.get_int("dgp", "burn_in", 1000);
  const std::string kind = cfg.require_string("dgp", "kind");
  if (kind == "garch") {
    GarchGaussianDgp g;
    g.mean = cfg.get_double("dgp", "mean", g.mean);
    g.omega = cfg.get_double("dgp", "omega", g.omega);
    g.alpha = cfg.get_double("dgp", "alpha", g.alpha);
    g.beta = cfg.get_double("dgp", "beta", g.beta);
    spec.variant = g;
  } else if (kind == "sv_leverage") {
    SvLeverageDgp s;
    s.mean = cfg.get_double("dgp", "h_mean", s.mean);
    s.persistence = cfg.get_double("dgp", "persistence", s.persistence);
    const double v_eps = cfg.get_double("dgp", "eps_var", s.shock_cov(0, 0));
    const double v_eta = cfg.get_double("dgp", "eta_var", s.shock_cov(1, 1));
    const double cov = cfg.get_double("dgp", "shock_cov", s.shock_cov(0, 1));
    s.shock_cov << v_eps, cov, cov, v_eta;
    spec.variant = s;
  } else if (kind == "sv_smooth") {
    SvSmoothTransitionDgp s;
    s.coef = cfg.get_double("dgp", "coef", s.coef);
    s.logistic_rate = cfg.get_double("dgp", "logistic_rate", s.logistic_rate);
    s.eta_var = cfg.get_double("dgp", "eta_var", s.eta_var);
    spec.variant = s;
  } else if (kind == "lstar") {
    LstarTDgp l;
    l.rho1 = cfg.get_double("dgp", "rho1", l.rho1);
    l.rho2 = cfg.get_double("dgp", "rho2", l.rho2);
    l.gamma = cfg.get_double("dgp", "gamma", l.gamma);
    l.c = cfg.get_double("dgp", "c", l.c);
    l.sigma_eps = cfg.get_double("dgp", "sigma", l.sigma_eps);
    l.nu = cfg.get_double("dgp", "nu", l.nu);
    spec.variant = l;
  } else if (kind == "dyn_regression") {
    DynRegressionDgp d;
    const double s11 = cfg.get_double("dgp", "s11", d.sigma(0, 0));
    const double s22 = cfg.get_double("dgp", "s22", d.sigma(1, 1));
    const double s12 = cfg.get_double("dgp", "s12", d.sigma(0, 1));
    d.sigma << s11, s12, s12, s22;
    d.innovation_var = cfg.get_double("dgp", "innovation_var", d.innovation_var);
    for (int i = 0; i < 4; ++i) {
      d.alpha[i] = cfg.get_double("dgp", "alpha" + std::to_string(i + 1), d.alpha[i]);
    }
    for (int i = 0; i < 3; ++i) {
      d.a[i] = cfg.get_double("dgp", "a" + std::to_string(i + 1), d.a[i]);
      d.b[i] = cfg.get_double("dgp", "b" + std::to_string(i + 1), d.b[i]);
    }
    spec.variant = d;
  } else {
    throw std::invalid_argument("unknown dgp kind '" + kind + "'");
  }
  return spec;
}

std::vector<ScoringRule> parse_rule_list(const std::vector<std::string>& labels) {
  if (labels.empty()) throw std::invalid_argument("empty scoring-rule list");
  std::vector<ScoringRule> rules;
  rules.reserve(labels.size());
  for (const std::string& label : labels) rules.push_back(parse_rule(label));
  return rules;
}

namespace {

void fill_vb(const ConfigFile& cfg, VbConfig* vb) {
  vb->iterations = cfg.get_int("vb", "iterations", vb->iterations);
  vb->initial_scale = cfg.get_double("vb", "initial_scale", vb->initial_scale);
  vb->adadelta.decay = cfg.get_double("vb", "decay", vb->adadelta.decay);
  vb->adadelta.epsilon = cfg.get_double("vb", "epsilon", vb->adadelta.epsilon);
  vb->draws_per_gradient = cfg.get_int("vb", "draws_per_gradient", vb->draws_per_gradient);
  vb->max_skip_fraction = cfg.get_double("vb", "max_skip_fraction", vb->max_skip_fraction);
  vb->monitor_window = cfg.get_int("vb", "monitor_window", vb->monitor_window);
}

}  // namespace

ExperimentConfig parse_experiment(const ConfigFile& cfg) {
  ExperimentConfig ex;
  ex.length = cfg.get_int("experiment", "t", 0);
  const std::uint64_t seed = cfg.get_uint64("experiment", "seed", 0);

  ex.data_path = cfg.get_string("experiment", "data", "");
  ex.data_column = cfg.get_string("experiment", "data_column", "y");
  if (cfg.has_section("dgp")) {
    if (ex.length < 1) {
      throw std::invalid_argument(cfg.origin() + ": [experiment] t must be set when simulating");
    }
    ex.dgp = parse_dgp(cfg, ex.length, derive_seed(seed, 0x646770));
  } else if (ex.data_path.empty()) {
    throw std::invalid_argument(cfg.origin() + ": need a [dgp] section or [experiment] data");
  }

  ex.model.kind = cfg.get_string("experiment", "model", "garch");
  ex.model.components = cfg.get_int("experiment", "components", 3);
  ex.model.width = cfg.get_int("experiment", "width", 3);
  const std::string act = cfg.get_string("experiment", "activation", "tanh");
  if (act == "tanh") {
    ex.model.activation = Activation::Tanh;
  } else if (act == "sigmoid") {
    ex.model.activation = Activation::Sigmoid;
  } else {
    throw std::invalid_argument("unknown activation '" + act + "'");
  }
  ex.model.covariates = cfg.get_list("experiment", "inputs", {});

  const std::vector<std::string> default_rules =
      ex.model.kind == "mixture"
          ? std::vector<std::string>{"LS", "CLS10", "CLS20", "CLS80", "CLS90", "MSIS"}
          : std::vector<std::string>{"LS", "CLS10", "CLS20", "CLS80", "CLS90", "CRPS", "MSIS"};
  const auto update_labels = cfg.get_list("experiment", "update_rules", default_rules);
  const auto eval_labels = cfg.get_list("experiment", "eval_rules", update_labels);
  ex.rolling.update_rules = parse_rule_list(update_labels);
  ex.rolling.eval_rules = parse_rule_list(eval_labels);
  if (ex.model.kind == "mixture") {
    for (const auto* rules : {&ex.rolling.update_rules, &ex.rolling.eval_rules}) {
      for (const ScoringRule& r : *rules) {
        if (r.kind == ScoreKind::CRPS) {
          throw std::invalid_argument(
              "CRPS has no closed form under the mixture model; remove it from the rule lists");
        }
      }
    }
  }

  ex.rolling.n0 = cfg.get_int("experiment", "n0", 0);
  ex.rolling.refit_every = cfg.get_int("experiment", "refit_every", 1);
  ex.rolling.warm_start = cfg.get_bool("experiment", "warm_start", true);
  ex.rolling.draws = cfg.get_int("experiment", "draws", 1000);
  ex.rolling.weight = cfg.get_double("experiment", "weight", 1.0);
  ex.rolling.seed = seed;
  ex.rolling.workers = 1;

  fill_vb(cfg, &ex.rolling.vb);
  ex.rolling.refit_iterations = cfg.get_int("vb", "refit_iterations", ex.rolling.refit_iterations);
  ex.rolling.mcmc.burn_in = cfg.get_int("mcmc", "burn_in", ex.rolling.mcmc.burn_in);
  ex.rolling.mcmc.retain = cfg.get_int("mcmc", "retain", ex.rolling.mcmc.retain);
  ex.rolling.mcmc.target_acceptance =
      cfg.get_double("mcmc", "target_acceptance", ex.rolling.mcmc.target_acceptance);
  ex.rolling.mcmc.min_acceptance =
      cfg.get_double("mcmc", "min_acceptance", ex.rolling.mcmc.min_acceptance);
  ex.rolling.mcmc.adapt_covariance =
      cfg.get_bool("mcmc", "adapt_covariance", ex.rolling.mcmc.adapt_covariance);
  ex.rolling.mcmc.covariance_start =
      cfg.get_int("mcmc", "covariance_start", ex.rolling.mcmc.covariance_start);
  ex.rolling.mcmc.initial_step =
      cfg.get_double("mcmc", "initial_step", ex.rolling.mcmc.initial_step);

  ex.engine = parse_engine_mode(cfg.get_string("experiment", "engine", "vb"));
  return ex;
}

PipelineConfig parse_pipeline(const ConfigFile& cfg) {
  PipelineConfig p;
  p.d = cfg.get_int("pipeline", "d", p.d);
  p.alpha = cfg.get_double("pipeline", "alpha", p.alpha);
  p.components = cfg.get_int("pipeline", "components", p.components);
  p.draws = cfg.get_int("pipeline", "draws", p.draws);
  p.weight = cfg.get_double("pipeline", "weight", p.weight);
  p.holdout = cfg.get_bool("pipeline", "holdout", p.holdout);
  p.seed = cfg.get_uint64("experiment", "seed", 0);
  fill_vb(cfg, &p.vb);
  return p;
}

}  // namespace gvp
