#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "gvp/config.hpp"

namespace gvp {

enum class Scale { Paper, Desk };
enum class ReplicateTarget { ToyGarch, LstarMixture, BnnModels };

Scale parse_scale(const std::string& name);
ReplicateTarget parse_target(const std::string& name);

// One canned experiment: simulate the DGP, resolve the model against the
// simulated series, run the expanding-window evaluation.
struct ReplicateRun {
  std::string name;
  DgpSpec dgp;
  ModelChoice model;
  RollingConfig rolling;  // rolling.model resolved by the runner
  EngineMode engine = EngineMode::Vb;
};

// The experiment grid for a target. `paper` uses the full-scale protocol
// constants, `desk` the reduced ones sized for a workstation. For ToyGarch,
// dgp_name selects the generating process (garch, sv_leverage, sv_smooth);
// empty means sv_leverage.
std::vector<ReplicateRun> replicate_runs(ReplicateTarget target, Scale scale, std::uint64_t seed,
                                         const std::string& dgp_name = "");

}  // namespace gvp
