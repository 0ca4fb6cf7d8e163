// Copyright 2026 The retrialq Authors
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

#ifndef RETRIALQ_TOOLS_CLI_CONFIG_H_
#define RETRIALQ_TOOLS_CLI_CONFIG_H_

#include <cstddef>
#include <stdexcept>
#include <string>
#include <vector>

#include "retrialq/model.h"
#include "retrialq/pgf.h"
#include "retrialq/simulator.h"

namespace retrialq::cli {

// Malformed, misspelled or missing configuration entries.
class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct AnalysisConfig {
  std::size_t n_inversion = std::size_t{1} << 18;
  std::vector<Target> targets = {Target::kR0, Target::kR11, Target::kR12,
                                 Target::kMc, Target::kH2GivenH1Zero,
                                 Target::kR12GivenR11Zero};
};

struct CompareConfig {
  double slope_j_lo = 200;
  double slope_j_hi = 20000;
  double slope_tol = 0.05;
  // Ratio ccdf(j) / predict(j) is checked at this index.
  double ratio_j = 10000;
  // Targets whose law decays like j^-(a-1).
  double ratio_tol_slow = 0.15;
  // Targets whose law decays like j^-a.
  double ratio_tol_fast = 0.30;
  double tv_tol = 0.01;
  std::size_t tv_max_index = 50;
  // Multiplies every predicted tail constant; anything but 1 deliberately
  // corrupts the predictors.
  double debug_constant_scale = 1.0;
};

struct ExperimentConfig {
  ModelParams model = reference_params();
  AnalysisConfig analysis;
  SimConfig simulation;
  CompareConfig compare;
};

// Sections [model], [analysis], [simulation], [compare]. Unknown sections or
// keys, unparsable numbers and inadmissible values raise ConfigError.
ExperimentConfig parse_config(const std::string& text);
ExperimentConfig load_config(const std::string& path);

// Comma-separated target names; empty input gives an empty list.
std::vector<Target> parse_targets(const std::string& list);

}  // namespace retrialq::cli

#endif  // RETRIALQ_TOOLS_CLI_CONFIG_H_
