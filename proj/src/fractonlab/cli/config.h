// Copyright 2026 The Fractonlab Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.


#ifndef _FRACTONLAB_CLI_CONFIG_H
#define _FRACTONLAB_CLI_CONFIG_H

#include <string>
#include <vector>

#include "fractonlab/ensemble.h"

namespace fractonlab {

/// A run description: one ensemble per (L, p) pair of the config.
struct RunConfig {
    std::vector<EnsembleConfig> ensembles;
};

/// Parses the INI-style run config. Sections and keys:
///
///   [model]     code, sector, L (list), p (list)
///   [ensemble]  N_d, N_T, tau, seed
///   [ladder]    beta_min, beta_max, scheme, betas (list), tune
///   [tempering] swap_cadence, microcanonical_per_metropolis
///   [analysis]  min_equilibrated_fraction
///
/// Lists are comma separated. Throws std::invalid_argument naming the missing
/// or malformed field.
RunConfig parse_run_config(const std::string &text);

/// Label of one (L, p) point, e.g. "L4_p0.1".
std::string ensemble_tag(const EnsembleConfig &config);

}  // namespace fractonlab

#endif
