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

#include <cstdint>
#include <iostream>
#include <optional>
#include <string>

#include "CLI11.hpp"
#include "cli/commands.h"
#include "cli/config.h"
#include "retrialq/errors.h"

namespace {

using retrialq::cli::ExperimentConfig;
using retrialq::cli::Report;

constexpr int kExitOk = 0;
constexpr int kExitCriterionFailed = 1;
constexpr int kExitUsage = 2;
constexpr int kExitNumerical = 3;

struct Options {
  std::string config;
  std::string out = ".";
  std::optional<std::uint64_t> seed;
  std::optional<std::string> targets;
};

void print_report(const Report& report, const std::string& path) {
  for (const auto& c : report.criteria) {
    std::cout << (c.pass ? "PASS " : "FAIL ") << c.name << " value=" << c.value
              << " tolerance=" << c.tolerance << '\n';
  }
  std::cout << report.command << ": " << (report.passed() ? "passed" : "failed")
            << " (" << path << ")\n";
}

int run(const std::string& command, const Options& opt) {
  ExperimentConfig cfg;
  if (!opt.config.empty()) cfg = retrialq::cli::load_config(opt.config);
  if (opt.seed) cfg.simulation.seed = opt.seed;
  if (opt.targets) cfg.analysis.targets = retrialq::cli::parse_targets(*opt.targets);
  Report report;
  if (command == "analyze") {
    report = retrialq::cli::cmd_analyze(cfg, opt.out);
  } else if (command == "simulate") {
    report = retrialq::cli::cmd_simulate(cfg, opt.out);
  } else {
    report = retrialq::cli::cmd_compare(cfg, opt.out);
  }
  print_report(report, retrialq::cli::write_report(report, opt.out));
  return report.passed() ? kExitOk : kExitCriterionFailed;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Stationary analysis and simulation of a retrial queue with "
               "Bernoulli schedule"};
  app.require_subcommand(1);
  Options opt;
  for (const char* name : {"analyze", "simulate", "compare"}) {
    CLI::App* sub = app.add_subcommand(name);
    sub->add_option("--config", opt.config, "INI experiment file")
        ->check(CLI::ExistingFile);
    sub->add_option("--out", opt.out, "Artifact directory");
    sub->add_option("--seed", opt.seed, "Simulation seed");
    sub->add_option("--targets", opt.targets,
                    "Comma-separated targets (R0,R11,R12,Mc,H2_given_H1_0,"
                    "R12_given_R11_0,Mb2_given_Mb1_0)");
  }
  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kExitOk : kExitUsage;
  }
  const std::string command = app.get_subcommands().front()->get_name();
  try {
    return run(command, opt);
  } catch (const retrialq::cli::ConfigError& e) {
    std::cerr << "config error: " << e.what() << '\n';
    return kExitUsage;
  } catch (const retrialq::cli::MissingArtifactError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitUsage;
  } catch (const retrialq::InvalidModelError& e) {
    std::cerr << "invalid model: " << e.what() << '\n';
    return kExitUsage;
  } catch (const std::invalid_argument& e) {
    std::cerr << "invalid argument: " << e.what() << '\n';
    return kExitUsage;
  } catch (const retrialq::ConvergenceError& e) {
    std::cerr << "numerical failure: " << e.what() << '\n';
    return kExitNumerical;
  } catch (const retrialq::InversionError& e) {
    std::cerr << "numerical failure: " << e.what() << '\n';
    return kExitNumerical;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitNumerical;
  }
}
