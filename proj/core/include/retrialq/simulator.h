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

#ifndef RETRIALQ_SIMULATOR_H_
#define RETRIALQ_SIMULATOR_H_

#include <cstddef>
#include <cstdint>
#include <map>
#include <optional>
#include <ostream>
#include <string>
#include <tuple>
#include <unordered_map>
#include <vector>

#include "retrialq/inversion.h"
#include "retrialq/model.h"

namespace retrialq {

struct SystemState {
  // Priority customers waiting, excluding the one in service.
  long n_queue = 0;
  long n_orbit = 0;
  bool server_busy = false;
  double clock = 0.0;
};

struct SimConfig {
  double horizon = 1e6;
  // Negative means 1% of the horizon.
  double warmup = -1.0;
  std::optional<std::uint64_t> seed;
  std::size_t queue_cap = 512;
  std::size_t orbit_cap = 4096;
  int replications = 1;
  int batches = 32;

  double effective_warmup() const {
    return warmup < 0.0 ? 0.01 * horizon : warmup;
  }
};

// Throws std::invalid_argument describing the first bad field.
void validate(const SimConfig& cfg);

enum class Conditional {
  kOrbitGivenIdle,
  kQueueGivenBusy,
  kOrbitGivenBusy,
  kOrbitGivenBusyQueueEmpty,
};

std::string conditional_name(Conditional c);

// Time-weighted occupation statistics after warmup, kept per batch so that
// batch-means standard errors are available. Counts above the caps land in
// a final overflow cell; the dynamics themselves are never truncated.
class StatAccumulator {
 public:
  StatAccumulator(double warmup, double horizon, int batches,
                  std::size_t queue_cap, std::size_t orbit_cap);

  // Adds the sojourn of `state` over [t0, t1), clipped to the observation
  // window and split across batch boundaries.
  void record(const SystemState& state, double t0, double t1);

  // Appends the batches of `other`; associative, so replications can be
  // combined in any grouping.
  void merge(const StatAccumulator& other);

  double elapsed() const;
  int batch_count() const { return static_cast<int>(batches_.size()); }
  std::size_t queue_cap() const { return queue_cap_; }
  std::size_t orbit_cap() const { return orbit_cap_; }

  double idle_fraction() const;
  double idle_fraction_se() const;
  double utilization() const { return 1.0 - idle_fraction(); }

  // Normalized pmf of length cap + 1 (last entry is the overflow cell).
  std::vector<double> conditional_pmf(Conditional which) const;
  std::vector<double> conditional_pmf_se(Conditional which) const;

  // Time in each (busy, n_queue, n_orbit) cell, indices capped.
  std::map<std::tuple<int, long, long>, double> joint() const;

  // Columns: busy,n_queue,n_orbit,fraction.
  void write_csv(std::ostream& out) const;
  // Columns: j,p_j,se_j for one conditional pmf.
  void write_conditional_csv(Conditional which, std::ostream& out) const;
  // Utilization, idle probability and conditional pmfs (first `head` cells)
  // with their standard errors.
  std::string to_json(std::size_t head = 51) const;

 private:
  struct Batch {
    double idle = 0.0;
    double busy = 0.0;
    double busy_queue_empty = 0.0;
    std::vector<double> idle_orbit;
    std::vector<double> busy_queue;
    std::vector<double> busy_orbit;
    std::vector<double> busy_queue_empty_orbit;
  };

  const std::vector<double>& cells(const Batch& b, Conditional which) const;
  double condition_time(const Batch& b, Conditional which) const;
  void add(const SystemState& state, std::size_t batch, double dt);

  double warmup_;
  double horizon_;
  double batch_length_;
  std::size_t queue_cap_;
  std::size_t orbit_cap_;
  std::vector<Batch> batches_;
  std::unordered_map<std::uint64_t, double> joint_;
};

// One replication of the retrial queue. `replication` selects an
// independent stream derived from cfg.seed.
StatAccumulator run_des(const ModelParams& params, const SimConfig& cfg,
                        int replication = 0);
// cfg.replications independent runs merged in replication order.
StatAccumulator run_replications(const ModelParams& params,
                                 const SimConfig& cfg);

// Samplers do not revalidate `params` on every draw.
// One busy period of the M/G/1 queue with arrival rate lambda1.
double sample_busy_period(const ModelParams& params, Rng& rng);
// Poisson(lambda1) count over a geometric sum of equilibrium service times.
long sample_R11(const ModelParams& params, Rng& rng);

// Brute-force pmf of the queue length given a busy server on 0..j_max:
// quadrature of the Poisson-mixed equilibrium density, compounded
// geometrically by convolution.
Pmf oracle_pmf_R11(const ModelParams& params, std::size_t j_max);
// Poisson(n; lambda t) Binomial(k; n, q) against the equilibrium density;
// cell (k, m) holds k priority and m orbit arrivals, k <= k_max, m <= m_max.
Pmf2D oracle_joint_Ma(const ModelParams& params, std::size_t k_max,
                      std::size_t m_max);
// g_n = int Poisson(n; rate t) dF_e(t), n = 0..n_max.
std::vector<double> poisson_equilibrium_mixture(const ServiceDistribution& s,
                                                double rate, std::size_t n_max);

}  // namespace retrialq

#endif  // RETRIALQ_SIMULATOR_H_
