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

#include <gtest/gtest.h>

#include <cmath>
#include <sstream>

#include "json.hpp"
#include "retrialq/asymptotics.h"
#include "retrialq/errors.h"
#include "test_support.h"

namespace retrialq {
namespace {

using testing::make_context;
using testing::pareto_params;
using testing::ref_context;

SimConfig config(double horizon, std::uint64_t seed) {
  SimConfig cfg;
  cfg.horizon = horizon;
  cfg.seed = seed;
  return cfg;
}

TEST(DesTest, IdleProbability) {
  SimConfig cfg = config(1e6, 17);
  cfg.warmup = 1e4;
  const StatAccumulator acc = run_des(reference_params(), cfg);
  EXPECT_LT(std::abs(acc.idle_fraction() - 0.5), 3.0 * acc.idle_fraction_se());
  EXPECT_LT(std::abs(acc.utilization() - 0.5), 3.0 * acc.idle_fraction_se());
  EXPECT_EQ(acc.batch_count(), 32);
}

TEST(DesTest, WeightsSumToObservedTime) {
  SimConfig cfg = config(2e5, 4);
  const StatAccumulator acc = run_des(reference_params(), cfg);
  EXPECT_NEAR(acc.elapsed(), 2e5 - 2e3, 1e-6);
  double joint = 0.0;
  for (const auto& [cell, t] : acc.joint()) joint += t;
  EXPECT_NEAR(joint, acc.elapsed(), 1e-6);
}

TEST(DesTest, IdleServerHasEmptyQueue) {
  const StatAccumulator acc = run_des(reference_params(), config(2e5, 5));
  for (const auto& [cell, t] : acc.joint()) {
    if (std::get<0>(cell) == 0) EXPECT_EQ(std::get<1>(cell), 0);
  }
}

TEST(DesTest, EmptySystemUnderVanishingLoad) {
  SimConfig cfg = config(100.0, 6);
  const StatAccumulator acc = run_des(pareto_params(1e-9, 0.4, 1.0, 2.5, 0.3), cfg);
  const auto joint = acc.joint();
  ASSERT_EQ(joint.size(), 1u);
  EXPECT_EQ(joint.begin()->first, std::make_tuple(0, 0L, 0L));
  EXPECT_EQ(acc.idle_fraction(), 1.0);
}

TEST(DesTest, RequiresSeedAndStableModel) {
  SimConfig cfg;
  cfg.horizon = 10.0;
  EXPECT_THROW(run_des(reference_params(), cfg), std::invalid_argument);
  EXPECT_THROW(run_des(pareto_params(1.0, 0.4, 1.0, 2.5, 0.7), config(10.0, 1)),
               InvalidModelError);
  SimConfig bad = config(10.0, 1);
  bad.warmup = 20.0;
  EXPECT_THROW(run_des(reference_params(), bad), std::invalid_argument);
}

TEST(DesTest, SameSeedSameOutput) {
  SimConfig cfg = config(5e4, 77);
  std::ostringstream a;
  std::ostringstream b;
  run_des(reference_params(), cfg).write_csv(a);
  run_des(reference_params(), cfg).write_csv(b);
  EXPECT_EQ(a.str(), b.str());
}

TEST(DesTest, MergeIsAssociative) {
  const ModelParams p = reference_params();
  const SimConfig cfg = config(2e4, 3);
  const StatAccumulator a = run_des(p, cfg, 0);
  const StatAccumulator b = run_des(p, cfg, 1);
  const StatAccumulator c = run_des(p, cfg, 2);
  StatAccumulator left = a;
  left.merge(b);
  left.merge(c);
  StatAccumulator bc = b;
  bc.merge(c);
  StatAccumulator right = a;
  right.merge(bc);
  EXPECT_DOUBLE_EQ(left.elapsed(), right.elapsed());
  EXPECT_EQ(left.batch_count(), 96);
  const auto pl = left.conditional_pmf(Conditional::kOrbitGivenBusy);
  const auto pr = right.conditional_pmf(Conditional::kOrbitGivenBusy);
  for (std::size_t j = 0; j < 20; ++j) EXPECT_NEAR(pl[j], pr[j], 1e-15);
}

TEST(DesTest, ReplicationsMergeInOrder) {
  SimConfig cfg = config(2e4, 8);
  cfg.replications = 3;
  const StatAccumulator merged = run_replications(reference_params(), cfg);
  StatAccumulator manual = run_des(reference_params(), cfg, 0);
  manual.merge(run_des(reference_params(), cfg, 1));
  manual.merge(run_des(reference_params(), cfg, 2));
  std::ostringstream a;
  std::ostringstream b;
  merged.write_csv(a);
  manual.write_csv(b);
  EXPECT_EQ(a.str(), b.str());
}

TEST(DesTest, IndependentSeedsAgree) {
  const SimConfig cfg_a = config(2e6, 1001);
  const SimConfig cfg_b = config(2e6, 2002);
  const StatAccumulator a = run_des(reference_params(), cfg_a);
  const StatAccumulator b = run_des(reference_params(), cfg_b);
  for (Conditional c : {Conditional::kOrbitGivenIdle, Conditional::kQueueGivenBusy,
                        Conditional::kOrbitGivenBusy}) {
    const auto pa = a.conditional_pmf(c);
    const auto pb = b.conditional_pmf(c);
    const auto sa = a.conditional_pmf_se(c);
    const auto sb = b.conditional_pmf_se(c);
    for (std::size_t j = 0; j <= 10; ++j) {
      EXPECT_LE(std::abs(pa[j] - pb[j]), 1.96 * (sa[j] + sb[j]))
          << conditional_name(c) << " " << j;
    }
  }
}

TEST(DesTest, OrbitGivenIdleMatchesInversion) {
  const auto ctx = ref_context();
  const StatAccumulator acc = run_des(ctx->params(), config(1e7, 23));
  const Pmf inv = invert(r0_pgf(ctx), 1 << 12);
  EXPECT_LT(total_variation(acc.conditional_pmf(Conditional::kOrbitGivenIdle),
                            inv.masses, 31),
            0.01);
}

TEST(DesTest, SummaryJson) {
  const StatAccumulator acc = run_des(reference_params(), config(1e4, 2));
  const auto j = nlohmann::json::parse(acc.to_json(11));
  EXPECT_EQ(j.at("conditional").at("queue_given_busy").at("pmf").size(), 11u);
  EXPECT_NEAR(j.at("utilization").get<double>() +
                  j.at("idle_probability").get<double>(),
              1.0, 1e-12);
  std::ostringstream out;
  acc.write_conditional_csv(Conditional::kOrbitGivenIdle, out);
  EXPECT_EQ(out.str().substr(0, 11), "j,p_j,se_j\n");
}

TEST(DesTest, OverflowCellKeepsNormalization) {
  SimConfig cfg = config(1e5, 12);
  cfg.queue_cap = 1;
  cfg.orbit_cap = 2;
  const StatAccumulator acc = run_des(reference_params(), cfg);
  const auto p = acc.conditional_pmf(Conditional::kOrbitGivenBusy);
  ASSERT_EQ(p.size(), 3u);
  EXPECT_NEAR(p[0] + p[1] + p[2], 1.0, 1e-12);
  EXPECT_GT(p[2], 0.0);
}

TEST(BusyPeriodTest, MeanMatches) {
  Rng rng(314);
  const ModelParams p = reference_params();
  const int n = 1000000;
  double sum = 0.0;
  double sum2 = 0.0;
  for (int i = 0; i < n; ++i) {
    const double x = sample_busy_period(p, rng);
    sum += x;
    sum2 += x * x;
  }
  const double mean = sum / n;
  const double se = std::sqrt((sum2 / n - mean * mean) / n);
  EXPECT_LT(std::abs(mean - 0.625), 3.0 * se) << mean;
}

TEST(BusyPeriodTest, DeterministicWithoutPriorityArrivals) {
  Rng rng(1);
  const ModelParams p{1.0, 1e-15, 1.0, ServiceDistribution::deterministic(0.7)};
  for (int i = 0; i < 1000; ++i) EXPECT_EQ(sample_busy_period(p, rng), 0.7);
}

TEST(BusyPeriodTest, TailNearPredictor) {
  const auto ctx = ref_context();
  const TailLaw law = tail_T_alpha(*ctx);
  Rng rng(2718);
  const long n = 10000000;
  long above20 = 0;
  for (long i = 0; i < n; ++i) {
    if (sample_busy_period(ctx->params(), rng) > 20.0) ++above20;
  }
  const double ratio = double(above20) / double(n) / law.predict(20.0);
  EXPECT_GT(ratio, 0.7);
  EXPECT_LT(ratio, 1.3);
}

TEST(SampleR11Test, ZeroProbabilityMatchesTransform) {
  const ModelParams p = pareto_params(1.0, 0.05, 1.0, 2.5, 0.3);
  const auto ctx = make_context(p);
  Rng rng(55);
  const int n = 1000000;
  int zeros = 0;
  for (int i = 0; i < n; ++i) zeros += sample_R11(p, rng) == 0;
  const double want = ctx->xi(ctx->derived().lambda1).real();
  const double se = std::sqrt(want * (1.0 - want) / n);
  EXPECT_LT(std::abs(double(zeros) / n - want), 3.0 * se);
}

TEST(SampleR11Test, PmfMatchesInversion) {
  const auto ctx = ref_context();
  const Pmf inv = invert(marginal_r11_pgf(ctx), 1 << 12);
  Rng rng(56);
  const int n = 10000000;
  std::vector<double> counts(51, 0.0);
  for (int i = 0; i < n; ++i) {
    const long k = sample_R11(ctx->params(), rng);
    if (k <= 50) counts[static_cast<std::size_t>(k)] += 1.0 / n;
  }
  EXPECT_LT(total_variation(counts, inv.masses, 51), 0.005);
}

TEST(SampleR11Test, NoPriorityArrivals) {
  const ModelParams p = pareto_params(1.0, 1e-15, 1.0, 2.5, 0.3);
  Rng rng(57);
  for (int i = 0; i < 100000; ++i) ASSERT_EQ(sample_R11(p, rng), 0);
}

TEST(OracleR11Test, ZeroCellMatchesXi) {
  const auto ctx = ref_context();
  const Pmf oracle = oracle_pmf_R11(ctx->params(), 10);
  EXPECT_NEAR(oracle[0], ctx->xi(0.4).real(), 1e-9);
}

TEST(OracleR11Test, SingleLayerWhenPriorityLoadVanishes) {
  const ModelParams p = pareto_params(1.0, 1e-3, 1.0, 2.5, 0.3);
  const Pmf oracle = oracle_pmf_R11(p, 10);
  const auto single = poisson_equilibrium_mixture(p.service, 1e-3, 10);
  for (std::size_t j = 0; j <= 10; ++j) {
    EXPECT_NEAR(oracle[j], single[j], 2e-3 * single[j] + 1e-12) << j;
  }
}

TEST(OracleR11Test, MixtureMatchesEquilibriumTransform) {
  // P{N = 0} for a Poisson count over an equilibrium time is beta_e(rate).
  for (const auto& svc : {ServiceDistribution::pareto(2.5, 0.3),
                          ServiceDistribution::exponential(2.0),
                          ServiceDistribution::deterministic(0.5)}) {
    const auto g = poisson_equilibrium_mixture(svc, 0.7, 3);
    EXPECT_NEAR(g[0], svc.equilibrium_lst(0.7).real(), 1e-12) << svc.describe();
  }
}

TEST(OracleMaTest, AntiDiagonalsReproduceTotalCount) {
  const ModelParams p = reference_params();
  const Pmf2D joint = oracle_joint_Ma(p, 30, 30);
  const auto total = poisson_equilibrium_mixture(p.service, p.lambda, 30);
  for (std::size_t n = 0; n <= 30; ++n) {
    double sum = 0.0;
    for (std::size_t k = 0; k <= n; ++k) sum += joint.at(k, n - k);
    EXPECT_NEAR(sum, total[n], 1e-9) << n;
  }
}

TEST(OracleMaTest, PriorityMarginalIsThinnedMixture) {
  const ModelParams p = reference_params();
  const Pmf2D joint = oracle_joint_Ma(p, 3, 2000);
  const auto thinned = poisson_equilibrium_mixture(p.service, p.lambda * p.q, 3);
  for (std::size_t k = 0; k <= 3; ++k) {
    double row = 0.0;
    for (std::size_t m = 0; m <= 2000; ++m) row += joint.at(k, m);
    // The truncated mass beyond m = 2000 is of order 1e-6.
    EXPECT_NEAR(row, thinned[k], 1e-5) << k;
    EXPECT_LE(row, thinned[k] + 1e-12);
  }
}

TEST(OracleMaTest, SymmetricSplit) {
  const Pmf2D joint = oracle_joint_Ma(pareto_params(1.0, 0.5, 1.0, 2.5, 0.3), 15, 15);
  for (std::size_t k = 0; k <= 15; ++k) {
    for (std::size_t m = 0; m <= 15; ++m) {
      EXPECT_NEAR(joint.at(k, m), joint.at(m, k), 1e-15);
    }
  }
}

}  // namespace
}  // namespace retrialq
