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

// Compiles a plant topology, a planning horizon and per-step prices and
// forecasts into a MilpInstance.
//
// Timestep 0 is the snapshot step: every resource is pinned to its initial
// state there and every storage level to its initial value. Storage balance
// rows link step t-1 to step t for t >= 1 using the flows of step t.

#ifndef FLEXSCHED_BUILDER_HPP_
#define FLEXSCHED_BUILDER_HPP_

#include <map>
#include <span>
#include <string>

#include "flexsched/errors.hpp"
#include "flexsched/milp.hpp"
#include "flexsched/model.hpp"

namespace flexsched {

struct BuildOptions {
  // Time a resource has already spent in its initial state before step 0.
  // Absent resources are assumed to have satisfied their minimum hold.
  std::map<std::string, Minutes> elapsed_dwell;
  // Adds entry indicators u[r][s][t] >= x[t] - x[t-1] with
  // sum(u over the last n_min steps) <= x[t] for every state with a minimum
  // hold of two or more steps.
  bool tighten_holds = true;
};

class InvalidTopologyError : public Error {
 public:
  explicit InvalidTopologyError(ValidationReport report);
  const ValidationReport& report() const { return report_; }

 private:
  ValidationReport report_;
};

// Throws InvalidTopologyError for structural violations and ContractError for
// price/forecast vectors of the wrong length or missing forecast keys.
// Infeasible static data only produces warnings on the instance.
MilpInstance BuildInstance(const Topology& topology, const Horizon& horizon,
                           std::span<const double> prices,
                           const ForecastSet& forecasts,
                           const BuildOptions& options = {});

namespace tags {
std::string Op(const std::string& resource, int t);
std::string State(const std::string& resource, const std::string& state, int t);
std::string PowerEl(const std::string& resource, int t);
std::string ThinSludge(const std::string& resource, int t);
std::string DrySludge(const std::string& resource, int t);
std::string Entry(const std::string& resource, const std::string& state,
                  int t);
std::string Soc(const std::string& storage, int t);
std::string PowerSystem(int t);
}  // namespace tags

}  // namespace flexsched

#endif  // FLEXSCHED_BUILDER_HPP_
