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

// The reference decanter plant: one sludge pocket feeding two decanters, each
// discharging into its own container storage. Decanter parameters are the
// measured field values; storage bounds and container capacities are site
// configuration.

#ifndef FLEXSCHED_DEFAULTS_HPP_
#define FLEXSCHED_DEFAULTS_HPP_

#include <string>

#include "flexsched/model.hpp"

namespace flexsched::defaults {

inline constexpr double kCoeffA = 22.356;  // kW
inline constexpr double kCoeffB = 8.464;   // kW
inline constexpr double kCoeffC = 0.0182;  // kW*l/g
inline constexpr double kCoeffD = 21.366;  // kW
inline constexpr double kCoeffE = 12.0;   // m3/h

inline constexpr double kInflow = 10.0;       // m3/h into the sludge pocket
inline constexpr double kDensity = 30.0;      // g/l
inline constexpr double kPocketLevel = 350.0; // m3, start and terminal level

inline constexpr double kPocketMin = 100.0;       // m3
inline constexpr double kPocketMax = 500.0;       // m3
inline constexpr double kContainerMax = 20000.0;  // kg, two containers

// Off -> Start -> Run -> Off, holds Off >= 60, Start == 6, Run >= 60 minutes.
ResourceSpec Decanter(const std::string& name);

// Pocket, two decanters, one container storage per decanter, and the
// no-simultaneous-start exclusion.
Topology DecanterPlant();

// 3-minute grid starting at `start`.
Horizon TrialHorizon(const Timestamp& start, int steps);

}  // namespace flexsched::defaults

#endif  // FLEXSCHED_DEFAULTS_HPP_
