// Copyright 2026 The flexsched Authors
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "flexsched/defaults.hpp"

namespace flexsched::defaults {

ResourceSpec Decanter(const std::string& name) {
  ResourceSpec r;
  r.name = name;
  r.coeff_a = kCoeffA;
  r.coeff_b = kCoeffB;
  r.coeff_c = kCoeffC;
  r.coeff_d = kCoeffD;
  r.coeff_e = kCoeffE;
  r.op_min = 0.0;
  r.op_max = 1.0;
  r.initial_state = "Off";
  r.states = {
      {"Off", StateRole::kIdle, 0.0, 0.0, Minutes(60), std::nullopt, {"Start"}},
      {"Start", StateRole::kStart, 0.0, 0.0, Minutes(6), Minutes(6), {"Run"}},
      {"Run", StateRole::kRun, 0.0, 1.0, Minutes(60), std::nullopt, {"Off"}},
  };
  return r;
}

Topology DecanterPlant() {
  Topology t;
  t.resources = {Decanter("decanter1"), Decanter("decanter2")};

  StorageSpec pocket;
  pocket.name = "sludge_pocket";
  pocket.unit = StorageUnit::kCubicMetre;
  pocket.soc_min = kPocketMin;
  pocket.soc_max = kPocketMax;
  pocket.soc_init = kPocketLevel;
  pocket.terminal_target = TerminalTarget{kPocketLevel, 0.0};
  pocket.inflow_forecast = "inflow";
  t.storages.push_back(pocket);

  for (const char* suffix : {"1", "2"}) {
    StorageSpec c;
    c.name = std::string("containers") + suffix;
    c.unit = StorageUnit::kKilogram;
    c.soc_min = 0.0;
    c.soc_max = kContainerMax;
    c.soc_init = 0.0;
    t.storages.push_back(c);
    t.links.push_back(
        {StreamKind::kThinSludge, "sludge_pocket", std::string("decanter") + suffix});
    t.links.push_back({StreamKind::kDrySludge, std::string("decanter") + suffix,
                       c.name});
  }
  t.mutual_exclusions.push_back({"Start", {"decanter1", "decanter2"}});
  return t;
}

Horizon TrialHorizon(const Timestamp& start, int steps) {
  return Horizon{start, Minutes(3), steps};
}

}  // namespace flexsched::defaults
