#include "gvp/replicate.hpp"

#include <stdexcept>

#include "gvp/rng.hpp"

namespace gvp {

namespace {

std::vector<ScoringRule> rules_from(const std::vector<std::string>& labels) {
  return parse_rule_list(labels);
}

const std::vector<std::string> kAllRules{"LS",    "CLS10", "CLS20", "CLS80",
                                         "CLS90", "CRPS",  "MSIS"};
const std::vector<std::string> kMixtureRules{"LS", "CLS10", "CLS20", "CLS80", "CLS90", "MSIS"};

DgpVariant toy_dgp(const std::string& name) {
  if (name.empty() || name == "sv_leverage") return SvLeverageDgp{};
  if (name == "garch") return GarchGaussianDgp{};
  if (name == "sv_smooth") return SvSmoothTransitionDgp{};
  throw std::invalid_argument("unknown toy DGP '" + name +
                              "' (expected garch, sv_leverage or sv_smooth)");
}

}  // namespace

Scale parse_scale(const std::string& name) {
  if (name == "paper") return Scale::Paper;
  if (name == "desk") return Scale::Desk;
  throw std::invalid_argument("unknown scale '" + name + "' (expected paper or desk)");
}

ReplicateTarget parse_target(const std::string& name) {
  if (name == "toy-garch") return ReplicateTarget::ToyGarch;
  if (name == "lstar-mixture") return ReplicateTarget::LstarMixture;
  if (name == "bnn-models") return ReplicateTarget::BnnModels;
  throw std::invalid_argument("unknown replicate target '" + name +
                              "' (expected toy-garch, lstar-mixture or bnn-models)");
}

std::vector<ReplicateRun> replicate_runs(ReplicateTarget target, Scale scale, std::uint64_t seed,
                                         const std::string& dgp_name) {
  const bool paper = scale == Scale::Paper;
  std::vector<ReplicateRun> runs;

  switch (target) {
    case ReplicateTarget::ToyGarch: {
      ReplicateRun run;
      run.name = "toy-garch" + (dgp_name.empty() ? std::string("-sv_leverage") : "-" + dgp_name);
      run.dgp.variant = toy_dgp(dgp_name);
      run.dgp.length = paper ? 6000 : 3000;
      run.dgp.seed = derive_seed(seed, 0x646770);
      run.model.kind = "garch";
      run.rolling.update_rules = rules_from(kAllRules);
      run.rolling.eval_rules = rules_from(kAllRules);
      run.rolling.n0 = 1000;
      run.rolling.refit_every = paper ? 1 : 250;
      run.rolling.seed = seed;
      run.engine = EngineMode::Both;
      runs.push_back(run);
      break;
    }
    case ReplicateTarget::LstarMixture: {
      ReplicateRun run;
      run.name = "lstar-mixture";
      run.dgp.variant = LstarTDgp{};
      run.dgp.length = paper ? 2500 : 1200;
      run.dgp.seed = derive_seed(seed, 0x646770);
      run.model.kind = "mixture";
      run.model.components = paper ? 20 : 5;
      run.rolling.update_rules = rules_from(kMixtureRules);
      run.rolling.eval_rules = rules_from(kMixtureRules);
      run.rolling.n0 = paper ? 500 : 400;
      run.rolling.refit_every = paper ? 1 : 200;
      run.rolling.seed = seed;
      run.engine = EngineMode::Vb;
      runs.push_back(run);
      break;
    }
    case ReplicateTarget::BnnModels: {
      const std::vector<std::vector<std::string>> inputs{
          {}, {"x1"}, {"x2"}, {"x1", "x2"}};
      for (std::size_t m = 0; m < inputs.size(); ++m) {
        ReplicateRun run;
        run.name = "bnn-model" + std::to_string(m + 1);
        run.dgp.variant = DynRegressionDgp{};
        run.dgp.length = paper ? 4000 : 1500;
        run.dgp.seed = derive_seed(seed, 0x646770);  // all four share the series
        run.model.kind = "bnn";
        run.model.covariates = inputs[m];
        run.rolling.update_rules = rules_from(kAllRules);
        run.rolling.eval_rules = rules_from(kAllRules);
        run.rolling.n0 = paper ? 2000 : 750;
        run.rolling.refit_every = paper ? 1 : 250;
        run.rolling.seed = derive_seed(seed, 0x6d6f64, m);
        run.engine = EngineMode::Vb;
        runs.push_back(run);
      }
      break;
    }
  }
  return runs;
}

}  // namespace gvp
