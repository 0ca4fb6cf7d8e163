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

#ifndef RETRIALQ_TOOLS_CLI_COMMANDS_H_
#define RETRIALQ_TOOLS_CLI_COMMANDS_H_

#include <stdexcept>
#include <string>
#include <vector>

#include "cli/config.h"
#include "json.hpp"

namespace retrialq::cli {

// A required input file from an earlier analyze or simulate run is absent.
class MissingArtifactError : public std::runtime_error {
 public:
  explicit MissingArtifactError(const std::string& path)
      : std::runtime_error("missing artifact: " + path), path_(path) {}
  const std::string& path() const { return path_; }

 private:
  std::string path_;
};

struct Criterion {
  std::string name;
  bool pass;
  double value;
  double tolerance;
  std::string detail;
};

struct Report {
  std::string command;
  nlohmann::json records = nlohmann::json::object();
  std::vector<Criterion> criteria;
  nlohmann::json metadata = nlohmann::json::object();

  bool passed() const;
  nlohmann::json to_json() const;
};

// Inverts each selected target, writes <target>_pmf.csv, <target>_ccdf.csv
// and <target>_taillaw.json under `out_dir`, and records slope fits and
// predictor ratios where a tail law exists.
Report cmd_analyze(const ExperimentConfig& cfg, const std::string& out_dir);

// Runs the replications and writes sim_joint.csv, sim_<conditional>.csv and
// sim_summary.json.
Report cmd_simulate(const ExperimentConfig& cfg, const std::string& out_dir);

// Reads the artifacts of analyze and simulate from `out_dir` and applies the
// bulk (total variation) and tail (slope, constant) tolerances.
Report cmd_compare(const ExperimentConfig& cfg, const std::string& out_dir);

// Writes <command>_report.json and returns its path.
std::string write_report(const Report& report, const std::string& out_dir);

// Lower-case file stem used for a target's artifacts.
std::string artifact_stem(Target t);

}  // namespace retrialq::cli

#endif  // RETRIALQ_TOOLS_CLI_COMMANDS_H_
