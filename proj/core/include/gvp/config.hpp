#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "gvp/dgp.hpp"
#include "gvp/evaluate.hpp"
#include "gvp/pipeline.hpp"

namespace gvp {

// Line-oriented config format: [section] headers, key = value pairs, # or ;
// comments, blank lines ignored. Keys are case-sensitive and may appear once
// per section. Every diagnostic carries origin:line. Readers mark keys used;
// reject_unknown() turns leftovers into errors so misspelled keys never pass
// silently.
class ConfigFile {
 public:
  struct Entry {
    std::string value;
    int line = 0;
    mutable bool used = false;
  };

  static ConfigFile parse_text(const std::string& text, const std::string& origin);
  static ConfigFile load(const std::string& path);

  bool has_section(const std::string& section) const;
  bool has(const std::string& section, const std::string& key) const;

  std::string get_string(const std::string& section, const std::string& key,
                         const std::string& fallback) const;
  std::string require_string(const std::string& section, const std::string& key) const;
  int get_int(const std::string& section, const std::string& key, int fallback) const;
  double get_double(const std::string& section, const std::string& key, double fallback) const;
  bool get_bool(const std::string& section, const std::string& key, bool fallback) const;
  std::uint64_t get_uint64(const std::string& section, const std::string& key,
                           std::uint64_t fallback) const;
  std::vector<std::string> get_list(const std::string& section, const std::string& key,
                                    const std::vector<std::string>& fallback) const;

  void reject_unknown() const;

  // section.key -> value for all entries, for manifest echoes.
  std::vector<std::pair<std::string, std::string>> entries() const;

  const std::string& origin() const { return origin_; }

 private:
  const Entry* find(const std::string& section, const std::string& key) const;
  [[noreturn]] void fail(int line, const std::string& message) const;

  std::map<std::string, std::map<std::string, Entry>> sections_;
  std::string origin_;
};

enum class EngineMode { Vb, Mcmc, Both };

EngineMode parse_engine_mode(const std::string& name);
std::string engine_mode_label(EngineMode mode);

// Model selection before covariate names are resolved against a data set.
struct ModelChoice {
  std::string kind = "garch";  // garch | mixture | bnn
  int components = 3;          // mixture
  int width = 3;               // bnn
  Activation activation = Activation::Tanh;
  std::vector<std::string> covariates;  // bnn input columns besides the lag
};

ModelSpec resolve_model(const ModelChoice& choice, const DataSet& data);

struct ExperimentConfig {
  std::optional<DgpSpec> dgp;  // simulate when set, otherwise load data_path
  std::string data_path;
  std::string data_column = "y";
  int length = 0;  // series length T when simulating
  ModelChoice model;
  RollingConfig rolling;  // rolling.model is resolved once data is available
  EngineMode engine = EngineMode::Vb;
};

// [dgp] section: kind plus per-kind overrides.
DgpSpec parse_dgp(const ConfigFile& cfg, int length, std::uint64_t seed);

// [experiment] + [vb] + [mcmc] (+ [dgp]) sections.
ExperimentConfig parse_experiment(const ConfigFile& cfg);

// [pipeline] + [vb] sections; the input series comes from [experiment] data.
PipelineConfig parse_pipeline(const ConfigFile& cfg);

std::vector<ScoringRule> parse_rule_list(const std::vector<std::string>& labels);

}  // namespace gvp
