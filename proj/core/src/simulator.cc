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

#include "retrialq/simulator.h"

#include <algorithm>
#include <cmath>
#include <limits>
#include <random>
#include <stdexcept>

#include <boost/math/quadrature/gauss_kronrod.hpp>

#include "json.hpp"
#include "retrialq/errors.h"
#include "retrialq/parallel.h"

namespace retrialq {
namespace {

constexpr std::uint64_t kBusyBit = std::uint64_t{1} << 63;

std::uint64_t joint_key(bool busy, std::size_t q, std::size_t o) {
  return (busy ? kBusyBit : 0) | (static_cast<std::uint64_t>(q) << 32) |
         static_cast<std::uint64_t>(o);
}

std::size_t capped(long n, std::size_t cap) {
  return std::min(static_cast<std::size_t>(n), cap);
}

double poisson_mass(std::size_t n, double mean) {
  if (mean <= 0.0) return n == 0 ? 1.0 : 0.0;
  const double k = static_cast<double>(n);
  return std::exp(k * std::log(mean) - mean - std::lgamma(k + 1.0));
}

Rng replication_rng(std::uint64_t seed, int replication) {
  std::seed_seq seq{static_cast<std::uint32_t>(seed),
                    static_cast<std::uint32_t>(seed >> 32),
                    static_cast<std::uint32_t>(replication)};
  return Rng(seq);
}

}  // namespace

void validate(const SimConfig& cfg) {
  if (!(cfg.horizon > 0.0)) throw std::invalid_argument("horizon must be positive");
  if (cfg.effective_warmup() >= cfg.horizon) {
    throw std::invalid_argument("warmup must be smaller than horizon");
  }
  if (cfg.replications < 1) throw std::invalid_argument("replications must be >= 1");
  if (cfg.batches < 2) throw std::invalid_argument("batches must be >= 2");
  if (cfg.queue_cap < 1 || cfg.orbit_cap < 1) {
    throw std::invalid_argument("histogram caps must be >= 1");
  }
  if (cfg.queue_cap >= (std::size_t{1} << 30) ||
      cfg.orbit_cap >= (std::size_t{1} << 30)) {
    throw std::invalid_argument("histogram caps too large");
  }
}

std::string conditional_name(Conditional c) {
  switch (c) {
    case Conditional::kOrbitGivenIdle: return "orbit_given_idle";
    case Conditional::kQueueGivenBusy: return "queue_given_busy";
    case Conditional::kOrbitGivenBusy: return "orbit_given_busy";
    case Conditional::kOrbitGivenBusyQueueEmpty:
      return "orbit_given_busy_queue_empty";
  }
  return "?";
}

StatAccumulator::StatAccumulator(double warmup, double horizon, int batches,
                                 std::size_t queue_cap, std::size_t orbit_cap)
    : warmup_(warmup),
      horizon_(horizon),
      batch_length_((horizon - warmup) / batches),
      queue_cap_(queue_cap),
      orbit_cap_(orbit_cap),
      batches_(static_cast<std::size_t>(batches)) {
  for (Batch& b : batches_) {
    b.idle_orbit.assign(orbit_cap + 1, 0.0);
    b.busy_queue.assign(queue_cap + 1, 0.0);
    b.busy_orbit.assign(orbit_cap + 1, 0.0);
    b.busy_queue_empty_orbit.assign(orbit_cap + 1, 0.0);
  }
}

void StatAccumulator::add(const SystemState& s, std::size_t batch, double dt) {
  Batch& b = batches_[batch];
  const std::size_t o = capped(s.n_orbit, orbit_cap_);
  const std::size_t q = capped(s.n_queue, queue_cap_);
  if (s.server_busy) {
    b.busy += dt;
    b.busy_queue[q] += dt;
    b.busy_orbit[o] += dt;
    if (s.n_queue == 0) {
      b.busy_queue_empty += dt;
      b.busy_queue_empty_orbit[o] += dt;
    }
  } else {
    b.idle += dt;
    b.idle_orbit[o] += dt;
  }
  joint_[joint_key(s.server_busy, q, o)] += dt;
}

void StatAccumulator::record(const SystemState& s, double t0, double t1) {
  t0 = std::max(t0, warmup_);
  t1 = std::min(t1, horizon_);
  while (t0 < t1) {
    auto batch = static_cast<std::size_t>((t0 - warmup_) / batch_length_);
    batch = std::min(batch, batches_.size() - 1);
    const double end =
        batch + 1 == batches_.size()
            ? t1
            : std::min(t1, warmup_ + batch_length_ * static_cast<double>(batch + 1));
    if (end <= t0) break;
    add(s, batch, end - t0);
    t0 = end;
  }
}

void StatAccumulator::merge(const StatAccumulator& other) {
  if (other.queue_cap_ != queue_cap_ || other.orbit_cap_ != orbit_cap_) {
    throw std::invalid_argument("merge: histogram caps differ");
  }
  batches_.insert(batches_.end(), other.batches_.begin(), other.batches_.end());
  for (const auto& [key, t] : other.joint_) joint_[key] += t;
}

double StatAccumulator::elapsed() const {
  double total = 0.0;
  for (const Batch& b : batches_) total += b.idle + b.busy;
  return total;
}

double StatAccumulator::idle_fraction() const {
  double idle = 0.0;
  for (const Batch& b : batches_) idle += b.idle;
  return idle / elapsed();
}

double StatAccumulator::idle_fraction_se() const {
  const double n = static_cast<double>(batches_.size());
  double mean = 0.0;
  for (const Batch& b : batches_) mean += b.idle / (b.idle + b.busy);
  mean /= n;
  double ss = 0.0;
  for (const Batch& b : batches_) {
    const double d = b.idle / (b.idle + b.busy) - mean;
    ss += d * d;
  }
  return std::sqrt(ss / (n - 1.0) / n);
}

const std::vector<double>& StatAccumulator::cells(const Batch& b,
                                                  Conditional which) const {
  switch (which) {
    case Conditional::kOrbitGivenIdle: return b.idle_orbit;
    case Conditional::kQueueGivenBusy: return b.busy_queue;
    case Conditional::kOrbitGivenBusy: return b.busy_orbit;
    case Conditional::kOrbitGivenBusyQueueEmpty:
      return b.busy_queue_empty_orbit;
  }
  throw std::invalid_argument("unknown conditional");
}

double StatAccumulator::condition_time(const Batch& b, Conditional which) const {
  switch (which) {
    case Conditional::kOrbitGivenIdle: return b.idle;
    case Conditional::kQueueGivenBusy:
    case Conditional::kOrbitGivenBusy: return b.busy;
    case Conditional::kOrbitGivenBusyQueueEmpty: return b.busy_queue_empty;
  }
  throw std::invalid_argument("unknown conditional");
}

std::vector<double> StatAccumulator::conditional_pmf(Conditional which) const {
  std::vector<double> out(cells(batches_.front(), which).size(), 0.0);
  double total = 0.0;
  for (const Batch& b : batches_) {
    const std::vector<double>& c = cells(b, which);
    for (std::size_t j = 0; j < out.size(); ++j) out[j] += c[j];
    total += condition_time(b, which);
  }
  if (total > 0.0) {
    for (double& p : out) p /= total;
  }
  return out;
}

std::vector<double> StatAccumulator::conditional_pmf_se(Conditional which) const {
  const std::size_t size = cells(batches_.front(), which).size();
  std::vector<double> mean(size, 0.0);
  std::vector<double> ss(size, 0.0);
  std::size_t used = 0;
  for (const Batch& b : batches_) {
    const double t = condition_time(b, which);
    if (t <= 0.0) continue;
    ++used;
    const std::vector<double>& c = cells(b, which);
    for (std::size_t j = 0; j < size; ++j) mean[j] += c[j] / t;
  }
  std::vector<double> se(size, 0.0);
  if (used < 2) return se;
  const double n = static_cast<double>(used);
  for (double& m : mean) m /= n;
  for (const Batch& b : batches_) {
    const double t = condition_time(b, which);
    if (t <= 0.0) continue;
    const std::vector<double>& c = cells(b, which);
    for (std::size_t j = 0; j < size; ++j) {
      const double d = c[j] / t - mean[j];
      ss[j] += d * d;
    }
  }
  for (std::size_t j = 0; j < size; ++j) se[j] = std::sqrt(ss[j] / (n - 1.0) / n);
  return se;
}

std::map<std::tuple<int, long, long>, double> StatAccumulator::joint() const {
  std::map<std::tuple<int, long, long>, double> out;
  for (const auto& [key, t] : joint_) {
    const int busy = (key & kBusyBit) ? 1 : 0;
    const auto q = static_cast<long>((key & ~kBusyBit) >> 32);
    const auto o = static_cast<long>(key & 0xffffffffULL);
    out[{busy, q, o}] = t;
  }
  return out;
}

void StatAccumulator::write_csv(std::ostream& out) const {
  const double total = elapsed();
  out << "busy,n_queue,n_orbit,fraction\n";
  for (const auto& [cell, t] : joint()) {
    out << std::get<0>(cell) << ',' << std::get<1>(cell) << ','
        << std::get<2>(cell) << ',' << format_double(t / total) << '\n';
  }
}

void StatAccumulator::write_conditional_csv(Conditional which,
                                            std::ostream& out) const {
  const std::vector<double> p = conditional_pmf(which);
  const std::vector<double> se = conditional_pmf_se(which);
  out << "j,p_j,se_j\n";
  for (std::size_t j = 0; j < p.size(); ++j) {
    out << j << ',' << format_double(p[j]) << ',' << format_double(se[j])
        << '\n';
  }
}

std::string StatAccumulator::to_json(std::size_t head) const {
  nlohmann::json j;
  j["elapsed"] = elapsed();
  j["batches"] = batch_count();
  j["utilization"] = utilization();
  j["idle_probability"] = idle_fraction();
  j["idle_probability_se"] = idle_fraction_se();
  for (Conditional c :
       {Conditional::kOrbitGivenIdle, Conditional::kQueueGivenBusy,
        Conditional::kOrbitGivenBusy, Conditional::kOrbitGivenBusyQueueEmpty}) {
    std::vector<double> p = conditional_pmf(c);
    std::vector<double> se = conditional_pmf_se(c);
    const std::size_t n = std::min(head, p.size());
    p.resize(n);
    se.resize(n);
    j["conditional"][conditional_name(c)] = {{"pmf", p}, {"se", se}};
  }
  return j.dump(2);
}

StatAccumulator run_des(const ModelParams& params, const SimConfig& cfg,
                        int replication) {
  derive(params);
  validate(cfg);
  if (!cfg.seed) throw std::invalid_argument("simulation seed is required");
  Rng rng = replication_rng(*cfg.seed, replication);
  std::exponential_distribution<double> unit_exp(1.0);
  std::uniform_real_distribution<double> unif(0.0, 1.0);
  const ServiceDistribution& service = params.service;
  const double lambda = params.lambda;

  StatAccumulator acc(cfg.effective_warmup(), cfg.horizon, cfg.batches,
                      cfg.queue_cap, cfg.orbit_cap);
  SystemState s;
  double next_arrival = unit_exp(rng) / lambda;
  double service_end = 0.0;
  while (s.clock < cfg.horizon) {
    if (s.server_busy) {
      if (next_arrival < service_end) {
        acc.record(s, s.clock, next_arrival);
        s.clock = next_arrival;
        if (unif(rng) < params.q) {
          ++s.n_queue;
        } else {
          ++s.n_orbit;
        }
        next_arrival = s.clock + unit_exp(rng) / lambda;
      } else {
        acc.record(s, s.clock, service_end);
        s.clock = service_end;
        if (s.n_queue > 0) {
          --s.n_queue;
          service_end = s.clock + service.sample(rng);
        } else {
          s.server_busy = false;
        }
      }
      continue;
    }
    // Idle: the orbit as a whole retries at rate n_orbit * mu.
    double retrial = std::numeric_limits<double>::infinity();
    if (s.n_orbit > 0) {
      retrial = s.clock + unit_exp(rng) / (static_cast<double>(s.n_orbit) * params.mu);
    }
    if (retrial < next_arrival) {
      acc.record(s, s.clock, retrial);
      s.clock = retrial;
      --s.n_orbit;
    } else {
      acc.record(s, s.clock, next_arrival);
      s.clock = next_arrival;
      next_arrival = s.clock + unit_exp(rng) / lambda;
    }
    s.server_busy = true;
    service_end = s.clock + service.sample(rng);
  }
  return acc;
}

StatAccumulator run_replications(const ModelParams& params,
                                 const SimConfig& cfg) {
  validate(cfg);
  std::vector<std::optional<StatAccumulator>> runs(
      static_cast<std::size_t>(cfg.replications));
  parallel_for(runs.size(), [&](std::size_t r) {
    runs[r].emplace(run_des(params, cfg, static_cast<int>(r)));
  });
  StatAccumulator merged = std::move(*runs[0]);
  for (std::size_t r = 1; r < runs.size(); ++r) merged.merge(*runs[r]);
  return merged;
}

double sample_busy_period(const ModelParams& params, Rng& rng) {
  const double lambda1 = params.lambda * params.q;
  double total = 0.0;
  long backlog = 1;
  while (backlog > 0) {
    const double x = params.service.sample(rng);
    total += x;
    --backlog;
    if (lambda1 > 0.0) {
      std::poisson_distribution<long> arrivals(lambda1 * x);
      backlog += arrivals(rng);
    }
  }
  return total;
}

long sample_R11(const ModelParams& params, Rng& rng) {
  const double lambda1 = params.lambda * params.q;
  std::geometric_distribution<long> extra(1.0 - lambda1 * params.service.mean());
  const long terms = 1 + extra(rng);
  double t = 0.0;
  for (long i = 0; i < terms; ++i) t += params.service.sample_equilibrium(rng);
  if (lambda1 * t <= 0.0) return 0;
  std::poisson_distribution<long> count(lambda1 * t);
  return count(rng);
}

std::vector<double> poisson_equilibrium_mixture(const ServiceDistribution& s,
                                                double rate,
                                                std::size_t n_max) {
  using boost::math::quadrature::gauss_kronrod;
  const double beta1 = s.mean();
  std::optional<double> kink;
  bool bounded = false;
  if (const auto* p = std::get_if<Pareto>(&s.family())) kink = p->x_m;
  if (const auto* p = std::get_if<Deterministic>(&s.family())) {
    kink = p->value;
    bounded = true;
  }
  std::vector<double> out(n_max + 1, 0.0);
  parallel_for(n_max + 1, [&](std::size_t n) {
    auto f = [&](double t) { return poisson_mass(n, rate * t) * s.tail(t) / beta1; };
    // Beyond rate * t = n + 12 sqrt(n + 1) + 40 the Poisson weight is below
    // e^-40 of its peak and the tail factor is at most 1.
    const double nn = static_cast<double>(n);
    const double peak = nn / rate;
    const double width = 6.0 * std::sqrt(nn + 1.0) / rate;
    double upper = (nn + 12.0 * std::sqrt(nn + 1.0) + 40.0) / rate;
    if (bounded) upper = std::min(upper, *kink);
    std::vector<double> cuts{0.0, upper};
    if (kink && *kink < upper) cuts.push_back(*kink);
    for (double c : {peak - width, peak, peak + width}) {
      if (c > 0.0 && c < upper) cuts.push_back(c);
    }
    std::sort(cuts.begin(), cuts.end());
    cuts.erase(std::unique(cuts.begin(), cuts.end()), cuts.end());
    double total = 0.0;
    for (std::size_t i = 0; i + 1 < cuts.size(); ++i) {
      total += gauss_kronrod<double, 61>::integrate(f, cuts[i], cuts[i + 1], 15,
                                                    1e-13);
    }
    out[n] = total;
  });
  return out;
}

Pmf oracle_pmf_R11(const ModelParams& params, std::size_t j_max) {
  const DerivedQuantities d = derive(params);
  const std::vector<double> single =
      poisson_equilibrium_mixture(params.service, d.lambda1, j_max);
  std::vector<double> power = single;  // n-fold convolution, n = 1
  std::vector<double> result(j_max + 1, 0.0);
  double weight = 1.0 - d.rho1;  // (1 - rho1) rho1^(n-1)
  for (int n = 1;; ++n) {
    for (std::size_t j = 0; j <= j_max; ++j) result[j] += weight * power[j];
    if (std::pow(d.rho1, n) < 1e-14) break;
    std::vector<double> next(j_max + 1, 0.0);
    for (std::size_t j = 0; j <= j_max; ++j) {
      double acc = 0.0;
      for (std::size_t i = 0; i <= j; ++i) acc += power[i] * single[j - i];
      next[j] = acc;
    }
    power = std::move(next);
    weight *= d.rho1;
  }
  Pmf pmf;
  pmf.masses = std::move(result);
  pmf.source_label = "R11_oracle";
  return pmf;
}

Pmf2D oracle_joint_Ma(const ModelParams& params, std::size_t k_max,
                      std::size_t m_max) {
  derive(params);
  const std::vector<double> g =
      poisson_equilibrium_mixture(params.service, params.lambda, k_max + m_max);
  const double q = params.q;
  Pmf2D out;
  out.n1 = k_max + 1;
  out.n2 = m_max + 1;
  out.source_label = "Ma_oracle";
  out.masses.assign(out.n1 * out.n2, 0.0);
  for (std::size_t k = 0; k <= k_max; ++k) {
    for (std::size_t m = 0; m <= m_max; ++m) {
      const double n = static_cast<double>(k + m);
      const double log_binom = std::lgamma(n + 1.0) -
                               std::lgamma(static_cast<double>(k) + 1.0) -
                               std::lgamma(static_cast<double>(m) + 1.0) +
                               static_cast<double>(k) * std::log(q) +
                               static_cast<double>(m) * std::log1p(-q);
      out.masses[k * out.n2 + m] = g[k + m] * std::exp(log_binom);
    }
  }
  return out;
}

}  // namespace retrialq
