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

#include "cli/commands.h"

#include <algorithm>
#include <cctype>
#include <chrono>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <memory>
#include <optional>
#include <sstream>

#include "retrialq/asymptotics.h"
#include "retrialq/errors.h"
#include "retrialq/inversion.h"
#include "retrialq/pgf.h"
#include "retrialq/simulator.h"

#ifndef RETRIALQ_VERSION
#define RETRIALQ_VERSION "unknown"
#endif

namespace retrialq::cli {
namespace {

namespace fs = std::filesystem;
using nlohmann::json;

constexpr const char* kLightTailNote = "light-tailed: no regular-variation law";

class Stopwatch {
 public:
  double seconds() const {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - start_)
        .count();
  }

 private:
  std::chrono::steady_clock::time_point start_ = std::chrono::steady_clock::now();
};

json model_json(const ModelParams& p) {
  return {{"lambda", p.lambda},
          {"q", p.q},
          {"mu", p.mu},
          {"service", p.service.describe()}};
}

json tail_law_json(const TailLaw& law) { return json::parse(to_json(law)); }

void ensure_dir(const std::string& dir) {
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec) throw ConfigError("cannot create output directory '" + dir + "': " + ec.message());
}

template <class Writer>
void write_file(const fs::path& path, Writer&& writer) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write " + path.string());
  writer(out);
  if (!out) throw std::runtime_error("write failed for " + path.string());
}

std::optional<TailLaw> maybe_law(const TransformContext& ctx, Target t) {
  try {
    return tail_law_for(ctx, t);
  } catch (const LightTailError&) {
    return std::nullopt;
  }
}

// Second column of a CSV with a header row.
std::vector<double> read_column(const fs::path& path) {
  std::ifstream in(path);
  if (!in) throw MissingArtifactError(path.string());
  std::string line;
  std::getline(in, line);
  std::vector<double> out;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    const auto first = line.find(',');
    if (first == std::string::npos) {
      throw std::runtime_error("malformed row in " + path.string());
    }
    const auto second = line.find(',', first + 1);
    out.push_back(std::stod(line.substr(first + 1, second - first - 1)));
  }
  return out;
}

std::optional<Conditional> simulated_counterpart(Target t) {
  switch (t) {
    case Target::kR0: return Conditional::kOrbitGivenIdle;
    case Target::kR11: return Conditional::kQueueGivenBusy;
    case Target::kR12: return Conditional::kOrbitGivenBusy;
    case Target::kR12GivenR11Zero: return Conditional::kOrbitGivenBusyQueueEmpty;
    default: return std::nullopt;
  }
}

// Tolerance band for ccdf / predict: wider for laws decaying like j^-a,
// whose constants need larger j before aliasing and second-order terms fade.
double ratio_tolerance(const TailLaw& law, const TransformContext& ctx,
                       const CompareConfig& cc) {
  const double a = *ctx.service().tail_index();
  return std::abs(law.sigma - a) < 1e-12 ? cc.ratio_tol_fast : cc.ratio_tol_slow;
}

void tail_checks(const std::string& name, const TailLaw& law, const Ccdf& c,
                 const TransformContext& ctx, const CompareConfig& cc,
                 json& record, std::vector<Criterion>& criteria) {
  if (cc.slope_j_hi < static_cast<double>(c.size())) {
    const SlopeFit fit = fit_loglog(c, cc.slope_j_lo, cc.slope_j_hi);
    record["slope_fit"] = json::parse(to_json(fit));
    const double err = std::abs(fit.slope + law.sigma);
    criteria.push_back({name + ".tail_index", err <= cc.slope_tol, fit.slope,
                        cc.slope_tol,
                        "fitted slope vs -" + format_double(law.sigma)});
  } else {
    record["slope_fit"] = "skipped: fit range exceeds lattice size";
  }
  const auto j = static_cast<std::size_t>(cc.ratio_j);
  if (j < c.size()) {
    const double ratio = c[j] / law.predict(cc.ratio_j);
    const double tol = ratio_tolerance(law, ctx, cc);
    record["ratio_at_j"] = {{"j", cc.ratio_j}, {"ratio", ratio}};
    criteria.push_back({name + ".tail_constant", std::abs(ratio - 1.0) <= tol,
                        ratio, tol, "ccdf(j) / predict(j)"});
  } else {
    record["ratio_at_j"] = "skipped: ratio index exceeds lattice size";
  }
}

}  // namespace

bool Report::passed() const {
  return std::all_of(criteria.begin(), criteria.end(),
                     [](const Criterion& c) { return c.pass; });
}

json Report::to_json() const {
  json crit = json::array();
  for (const Criterion& c : criteria) {
    crit.push_back({{"name", c.name},
                    {"pass", c.pass},
                    {"value", c.value},
                    {"tolerance", c.tolerance},
                    {"detail", c.detail}});
  }
  return {{"command", command},
          {"records", records},
          {"criteria", crit},
          {"passed", passed()},
          {"metadata", metadata}};
}

std::string artifact_stem(Target t) {
  std::string s(target_name(t));
  std::transform(s.begin(), s.end(), s.begin(),
                 [](unsigned char ch) { return std::tolower(ch); });
  return s;
}

std::string write_report(const Report& report, const std::string& out_dir) {
  const fs::path path = fs::path(out_dir) / (report.command + "_report.json");
  write_file(path, [&](std::ostream& out) { out << report.to_json().dump(2) << '\n'; });
  return path.string();
}

Report cmd_analyze(const ExperimentConfig& cfg, const std::string& out_dir) {
  if (cfg.analysis.targets.empty()) throw ConfigError("no targets selected");
  Stopwatch clock;
  ensure_dir(out_dir);
  const auto ctx = std::make_shared<const TransformContext>(cfg.model);
  const std::size_t n = cfg.analysis.n_inversion;
  Report report;
  report.command = "analyze";
  for (Target t : cfg.analysis.targets) {
    const std::string name(target_name(t));
    const std::string stem = artifact_stem(t);
    const std::optional<TailLaw> law = maybe_law(*ctx, t);
    const PgfHandle pgf = pgf_for_target(ctx, t);
    const Pmf pmf =
        invert(pgf, n, law ? std::optional<PowerTail>(law->power_tail()) : std::nullopt);
    const Ccdf c = ccdf(pmf);
    const fs::path dir(out_dir);
    write_file(dir / (stem + "_pmf.csv"), [&](std::ostream& o) { write_csv(pmf, o); });
    write_file(dir / (stem + "_ccdf.csv"), [&](std::ostream& o) { write_csv(c, o); });

    json record = {{"pmf_file", stem + "_pmf.csv"},
                   {"ccdf_file", stem + "_ccdf.csv"},
                   {"n_inversion", n},
                   {"alias_bound", pmf.alias_bound},
                   {"min_raw_mass", pmf.min_raw_mass},
                   {"total_mass", pmf.total()},
                   {"parseval_gap", pmf.parseval_gap}};
    report.criteria.push_back({name + ".nonnegative_mass",
                               pmf.min_raw_mass >= -kNegativeMassTolerance,
                               pmf.min_raw_mass, kNegativeMassTolerance,
                               "smallest inverted mass"});
    const std::optional<double> index =
        law ? std::optional<double>(law->sigma) : std::nullopt;
    const std::optional<double> mean = mean_from_pgf(pgf, 1e-2, index);
    if (mean) {
      record["mean"] = *mean;
    } else {
      record["mean"] = "not finite under the tail index";
    }
    if (law) {
      const std::string law_file = stem + "_taillaw.json";
      write_file(dir / law_file, [&](std::ostream& o) { o << to_json(*law) << '\n'; });
      record["taillaw_file"] = law_file;
      record["tail_law"] = tail_law_json(*law);
      tail_checks(name, *law, c, *ctx, cfg.compare, record, report.criteria);
    } else {
      record["tail_law"] = kLightTailNote;
    }
    report.records[name] = record;
  }
  report.metadata = {{"version", RETRIALQ_VERSION},
                     {"wall_time_s", clock.seconds()},
                     {"model", model_json(cfg.model)}};
  return report;
}

Report cmd_simulate(const ExperimentConfig& cfg, const std::string& out_dir) {
  if (!cfg.simulation.seed) {
    throw ConfigError("simulation.seed is required (set it or pass --seed)");
  }
  Stopwatch clock;
  ensure_dir(out_dir);
  const DerivedQuantities d = derive(cfg.model);
  const StatAccumulator acc = run_replications(cfg.model, cfg.simulation);
  const fs::path dir(out_dir);
  write_file(dir / "sim_joint.csv", [&](std::ostream& o) { acc.write_csv(o); });
  json files = json::array({"sim_joint.csv", "sim_summary.json"});
  for (Conditional c :
       {Conditional::kOrbitGivenIdle, Conditional::kQueueGivenBusy,
        Conditional::kOrbitGivenBusy, Conditional::kOrbitGivenBusyQueueEmpty}) {
    const std::string file = "sim_" + conditional_name(c) + ".csv";
    write_file(dir / file, [&](std::ostream& o) { acc.write_conditional_csv(c, o); });
    files.push_back(file);
  }
  write_file(dir / "sim_summary.json",
             [&](std::ostream& o) { o << acc.to_json() << '\n'; });

  Report report;
  report.command = "simulate";
  const double idle = acc.idle_fraction();
  const double se = acc.idle_fraction_se();
  report.records["simulation"] = {{"files", files},
                                  {"elapsed", acc.elapsed()},
                                  {"batches", acc.batch_count()},
                                  {"idle_probability", idle},
                                  {"idle_probability_se", se},
                                  {"utilization", acc.utilization()}};
  report.criteria.push_back({"idle_probability", std::abs(idle - (1.0 - d.rho)) <= 3.0 * se,
                             idle, 3.0 * se, "within 3 batch-means SE of 1 - rho"});
  report.metadata = {{"version", RETRIALQ_VERSION},
                     {"wall_time_s", clock.seconds()},
                     {"seed", *cfg.simulation.seed},
                     {"replications", cfg.simulation.replications},
                     {"horizon", cfg.simulation.horizon},
                     {"model", model_json(cfg.model)}};
  return report;
}

Report cmd_compare(const ExperimentConfig& cfg, const std::string& out_dir) {
  if (cfg.analysis.targets.empty()) throw ConfigError("no targets selected");
  Stopwatch clock;
  const auto ctx = std::make_shared<const TransformContext>(cfg.model);
  const CompareConfig& cc = cfg.compare;
  const fs::path dir(out_dir);

  // Every artifact is located before any criterion is computed.
  for (Target t : cfg.analysis.targets) {
    for (const std::string& file : {artifact_stem(t) + "_pmf.csv",
                                    artifact_stem(t) + "_ccdf.csv"}) {
      if (!fs::exists(dir / file)) throw MissingArtifactError((dir / file).string());
    }
    if (const auto c = simulated_counterpart(t)) {
      const fs::path file = dir / ("sim_" + conditional_name(*c) + ".csv");
      if (!fs::exists(file)) throw MissingArtifactError(file.string());
    }
  }

  Report report;
  report.command = "compare";
  for (Target t : cfg.analysis.targets) {
    const std::string name(target_name(t));
    const std::string stem = artifact_stem(t);
    json record;
    if (const auto c = simulated_counterpart(t)) {
      const auto inverted = read_column(dir / (stem + "_pmf.csv"));
      const auto simulated =
          read_column(dir / ("sim_" + conditional_name(*c) + ".csv"));
      const double tv = total_variation(inverted, simulated, cc.tv_max_index + 1);
      record["total_variation"] = {{"max_index", cc.tv_max_index}, {"value", tv},
                                   {"simulated", conditional_name(*c)}};
      report.criteria.push_back({name + ".bulk_tv", tv < cc.tv_tol, tv, cc.tv_tol,
                                 "inversion vs simulation on 0.." +
                                     std::to_string(cc.tv_max_index)});
    }
    if (std::optional<TailLaw> law = maybe_law(*ctx, t)) {
      law->C *= cc.debug_constant_scale;
      Ccdf c;
      c.values = read_column(dir / (stem + "_ccdf.csv"));
      c.source_label = name;
      record["tail_law"] = tail_law_json(*law);
      tail_checks(name, *law, c, *ctx, cc, record, report.criteria);
    } else {
      record["tail_law"] = kLightTailNote;
    }
    report.records[name] = record;
  }
  report.metadata = {{"version", RETRIALQ_VERSION},
                     {"wall_time_s", clock.seconds()},
                     {"debug_constant_scale", cc.debug_constant_scale},
                     {"model", model_json(cfg.model)}};
  return report;
}

}  // namespace retrialq::cli
