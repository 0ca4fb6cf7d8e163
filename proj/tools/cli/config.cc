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

#include "cli/config.h"

#include <cerrno>
#include <cstdlib>
#include <fstream>
#include <map>
#include <set>
#include <sstream>

#include <boost/property_tree/ini_parser.hpp>
#include <boost/property_tree/ptree.hpp>

namespace retrialq::cli {
namespace {

namespace pt = boost::property_tree;

const std::map<std::string, std::set<std::string>>& known_keys() {
  static const std::map<std::string, std::set<std::string>> keys = {
      {"model", {"lambda", "q", "mu", "service", "a", "x_m", "rate", "value"}},
      {"analysis", {"n_inversion", "targets"}},
      {"simulation",
       {"horizon", "warmup", "seed", "queue_cap", "orbit_cap", "replications",
        "batches"}},
      {"compare",
       {"slope_j_lo", "slope_j_hi", "slope_tol", "ratio_j", "ratio_tol_slow",
        "ratio_tol_fast", "tv_tol", "tv_max_index", "debug_constant_scale"}},
  };
  return keys;
}

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r\n");
  if (b == std::string::npos) return "";
  const auto e = s.find_last_not_of(" \t\r\n");
  return s.substr(b, e - b + 1);
}

double to_double(const std::string& where, const std::string& raw) {
  const std::string s = trim(raw);
  char* end = nullptr;
  errno = 0;
  const double v = std::strtod(s.c_str(), &end);
  if (s.empty() || end != s.c_str() + s.size() || errno == ERANGE) {
    throw ConfigError(where + ": not a decimal number: '" + raw + "'");
  }
  return v;
}

unsigned long long to_unsigned(const std::string& where, const std::string& raw) {
  const std::string s = trim(raw);
  char* end = nullptr;
  errno = 0;
  const unsigned long long v = std::strtoull(s.c_str(), &end, 10);
  if (s.empty() || s[0] == '-' || end != s.c_str() + s.size() || errno == ERANGE) {
    throw ConfigError(where + ": not a nonnegative integer: '" + raw + "'");
  }
  return v;
}

class Section {
 public:
  Section(std::string name, const pt::ptree* tree)
      : name_(std::move(name)), tree_(tree) {}

  std::optional<std::string> raw(const std::string& key) const {
    if (tree_ == nullptr) return std::nullopt;
    const auto child = tree_->get_optional<std::string>(key);
    if (!child) return std::nullopt;
    return *child;
  }
  void number(const std::string& key, double& out) const {
    if (auto r = raw(key)) out = to_double(where(key), *r);
  }
  template <class T>
  void integer(const std::string& key, T& out) const {
    if (auto r = raw(key)) out = static_cast<T>(to_unsigned(where(key), *r));
  }
  std::string where(const std::string& key) const { return name_ + "." + key; }

 private:
  std::string name_;
  const pt::ptree* tree_;
};

ServiceDistribution parse_service(const Section& m) {
  const std::string kind = trim(m.raw("service").value_or("pareto"));
  auto require = [&](const char* key) {
    const auto r = m.raw(key);
    if (!r) throw ConfigError(m.where(key) + " is required for " + kind + " service");
    return to_double(m.where(key), *r);
  };
  auto forbid = [&](std::initializer_list<const char*> keys) {
    for (const char* key : keys) {
      if (m.raw(key)) {
        throw ConfigError(m.where(key) + " does not apply to " + kind + " service");
      }
    }
  };
  if (kind == "pareto") {
    forbid({"rate", "value"});
    return ServiceDistribution::pareto(require("a"), require("x_m"));
  }
  if (kind == "exponential") {
    forbid({"a", "x_m", "value"});
    return ServiceDistribution::exponential(require("rate"));
  }
  if (kind == "deterministic") {
    forbid({"a", "x_m", "rate"});
    return ServiceDistribution::deterministic(require("value"));
  }
  throw ConfigError("model.service: unknown kind '" + kind +
                    "' (expected pareto, exponential or deterministic)");
}

}  // namespace

std::vector<Target> parse_targets(const std::string& list) {
  std::vector<Target> out;
  std::stringstream in(list);
  std::string item;
  while (std::getline(in, item, ',')) {
    item = trim(item);
    if (item.empty()) continue;
    try {
      out.push_back(parse_target(item));
    } catch (const std::invalid_argument& e) {
      throw ConfigError(e.what());
    }
  }
  return out;
}

ExperimentConfig parse_config(const std::string& text) {
  pt::ptree tree;
  try {
    std::istringstream in(text);
    pt::read_ini(in, tree);
  } catch (const pt::ini_parser_error& e) {
    throw ConfigError(std::string("config syntax: ") + e.what());
  }
  for (const auto& [section, body] : tree) {
    const auto it = known_keys().find(section);
    if (it == known_keys().end()) {
      if (body.empty()) {
        throw ConfigError("top-level key '" + section + "' outside any section");
      }
      throw ConfigError("unknown section [" + section + "]");
    }
    for (const auto& [key, value] : body) {
      if (!value.empty()) throw ConfigError("nested key under [" + section + "]");
      if (it->second.count(key) == 0) {
        throw ConfigError("unknown key '" + key + "' in [" + section + "]");
      }
    }
  }
  auto section = [&](const std::string& name) {
    const auto child = tree.get_child_optional(name);
    return Section(name, child ? &*child : nullptr);
  };

  ExperimentConfig cfg;
  const Section m = section("model");
  m.number("lambda", cfg.model.lambda);
  m.number("q", cfg.model.q);
  m.number("mu", cfg.model.mu);
  if (m.raw("service") || m.raw("a") || m.raw("x_m") || m.raw("rate") ||
      m.raw("value")) {
    cfg.model.service = parse_service(m);
  }
  const auto problems = validate(cfg.model);
  if (!problems.empty()) {
    std::string msg = "model:";
    for (const auto& p : problems) msg += " " + p + ";";
    throw ConfigError(msg);
  }

  const Section a = section("analysis");
  a.integer("n_inversion", cfg.analysis.n_inversion);
  const std::size_t n = cfg.analysis.n_inversion;
  if (n < 1024 || (n & (n - 1)) != 0 || n > (std::size_t{1} << 24)) {
    throw ConfigError("analysis.n_inversion must be a power of two in [1024, 2^24]");
  }
  if (auto r = a.raw("targets")) cfg.analysis.targets = parse_targets(*r);

  const Section s = section("simulation");
  s.number("horizon", cfg.simulation.horizon);
  s.number("warmup", cfg.simulation.warmup);
  if (auto r = s.raw("seed")) cfg.simulation.seed = to_unsigned(s.where("seed"), *r);
  s.integer("queue_cap", cfg.simulation.queue_cap);
  s.integer("orbit_cap", cfg.simulation.orbit_cap);
  s.integer("replications", cfg.simulation.replications);
  s.integer("batches", cfg.simulation.batches);
  try {
    validate(cfg.simulation);
  } catch (const std::invalid_argument& e) {
    throw ConfigError(std::string("simulation: ") + e.what());
  }

  const Section c = section("compare");
  CompareConfig& cc = cfg.compare;
  c.number("slope_j_lo", cc.slope_j_lo);
  c.number("slope_j_hi", cc.slope_j_hi);
  c.number("slope_tol", cc.slope_tol);
  c.number("ratio_j", cc.ratio_j);
  c.number("ratio_tol_slow", cc.ratio_tol_slow);
  c.number("ratio_tol_fast", cc.ratio_tol_fast);
  c.number("tv_tol", cc.tv_tol);
  c.integer("tv_max_index", cc.tv_max_index);
  c.number("debug_constant_scale", cc.debug_constant_scale);
  if (!(cc.slope_j_lo >= 1.0) || cc.slope_j_hi < 10.0 * cc.slope_j_lo) {
    throw ConfigError("compare: need slope_j_lo >= 1 and slope_j_hi >= 10 slope_j_lo");
  }
  if (!(cc.ratio_j >= 1.0)) throw ConfigError("compare.ratio_j must be >= 1");
  if (!(cc.debug_constant_scale > 0.0)) {
    throw ConfigError("compare.debug_constant_scale must be positive");
  }
  return cfg;
}

ExperimentConfig load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot read config file '" + path + "'");
  std::stringstream buf;
  buf << in.rdbuf();
  return parse_config(buf.str());
}

}  // namespace retrialq::cli
