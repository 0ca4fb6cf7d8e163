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

#include "retrialq/inversion.h"

#include <gtest/gtest.h>

#include <cmath>
#include <sstream>

#include <boost/math/special_functions/zeta.hpp>

#include "retrialq/asymptotics.h"
#include "retrialq/errors.h"
#include "retrialq/simulator.h"
#include "test_support.h"

namespace retrialq {
namespace {

using testing::make_context;
using testing::pareto_params;
using testing::ref_context;

PgfHandle polynomial(std::vector<double> coeffs) {
  return PgfHandle::unary("poly", [coeffs](Complex z) {
    Complex acc(0.0, 0.0);
    for (std::size_t i = coeffs.size(); i-- > 0;) acc = acc * z + coeffs[i];
    return acc;
  });
}

TEST(InvertTest, ConstantIsPointMassAtZero) {
  const Pmf p = invert(polynomial({1.0}), 1024);
  EXPECT_NEAR(p[0], 1.0, 1e-15);
  for (std::size_t j = 1; j < p.size(); ++j) ASSERT_NEAR(p[j], 0.0, 1e-15);
}

TEST(InvertTest, MonomialIsShiftedPointMass) {
  const Pmf p = invert(PgfHandle::unary("z5", [](Complex z) { return std::pow(z, 5); }),
                       1024);
  for (std::size_t j = 0; j < p.size(); ++j) {
    ASSERT_NEAR(p[j], j == 5 ? 1.0 : 0.0, 1e-14) << j;
  }
}

TEST(InvertTest, RejectsBadSizes) {
  EXPECT_THROW(invert(polynomial({1.0}), 512), std::invalid_argument);
  EXPECT_THROW(invert(polynomial({1.0}), 1500), std::invalid_argument);
  EXPECT_THROW(invert(ma_pgf(ref_context()), 1024), std::invalid_argument);
}

TEST(InvertTest, NegativeMassIsAnError) {
  EXPECT_THROW(invert(polynomial({1.5, -0.5}), 1024), InversionError);
}

TEST(InvertTest, ReferenceQueueLengthMatchesOracle) {
  const auto ctx = ref_context();
  const Pmf inv = invert(marginal_r11_pgf(ctx), 1 << 16);
  const Pmf oracle = oracle_pmf_R11(ctx->params(), 200);
  EXPECT_LT(total_variation(inv.masses, oracle.masses, 201), 1e-6);
}

TEST(InvertTest, TotalMassAndAliasBound) {
  const auto ctx = ref_context();
  const TailLaw law = tail_R11(*ctx);
  const std::size_t n = 1 << 12;
  const Pmf p = invert(marginal_r11_pgf(ctx), n, law.power_tail());
  const double want = law.C * law.L * std::pow(double(n), -1.5) *
                      boost::math::zeta(1.5);
  EXPECT_NEAR(p.alias_bound, want, 1e-15);
  EXPECT_GE(p.total(), 1.0 - p.alias_bound - 1e-9);
  EXPECT_LE(p.total(), 1.0 + 1e-9);
  EXPECT_GE(p.min_raw_mass, -kNegativeMassTolerance);
  EXPECT_LT(p.parseval_gap, kParsevalWarnLevel);
  EXPECT_EQ(p.source_label, "R11");
}

TEST(InvertTest, DoublingIsStableWithinAliasBound) {
  const auto ctx = ref_context();
  const TailLaw law = tail_R12(*ctx);
  const std::size_t n = 1 << 12;
  const Pmf small = invert(marginal_r12_pgf(ctx), n, law.power_tail());
  const Pmf large = invert(marginal_r12_pgf(ctx), 2 * n, law.power_tail());
  for (std::size_t j = 0; j <= n / 2; ++j) {
    ASSERT_LE(std::abs(small[j] - large[j]), small.alias_bound) << j;
  }
}

TEST(InvertJointTest, ProductFactorsIntoOuterProduct) {
  auto f = [](Complex z) { return 0.5 / (1.0 - 0.5 * z); };
  auto g = [](Complex z) { return std::exp(2.0 * (z - 1.0)); };
  const PgfHandle joint = PgfHandle::binary(
      "fg", [&](Complex z1, Complex z2) { return f(z1) * g(z2); });
  const Pmf2D p = invert_joint(joint, 64, 32);
  for (std::size_t i = 0; i < 20; ++i) {
    for (std::size_t k = 0; k < 15; ++k) {
      const double pf = 0.5 * std::pow(0.5, double(i));
      const double pg = std::exp(-2.0) * std::pow(2.0, double(k)) /
                        std::tgamma(double(k) + 1.0);
      ASSERT_NEAR(p.at(i, k), pf * pg, 1e-15);
    }
  }
}

TEST(InvertJointTest, RejectsLargeGrids) {
  EXPECT_THROW(invert_joint(ma_pgf(ref_context()), 512, 256),
               std::invalid_argument);
  EXPECT_THROW(invert_joint(r0_pgf(ref_context()), 16, 16),
               std::invalid_argument);
}

TEST(InvertJointTest, SplitArrivalsMatchQuadratureOracle) {
  const auto ctx = ref_context();
  const Pmf2D inv = invert_joint(ma_pgf(ctx), 256, 256);
  const Pmf2D oracle = oracle_joint_Ma(ctx->params(), 20, 20);
  for (std::size_t k = 0; k <= 20; ++k) {
    for (std::size_t m = 0; m <= 20; ++m) {
      ASSERT_LT(std::abs(inv.at(k, m) - oracle.at(k, m)), 1e-7) << k << "," << m;
    }
  }
}

TEST(InvertJointTest, JointMarginalMatchesOneDimensionalInversion) {
  const auto ctx = ref_context();
  const Pmf2D joint = invert_joint(r1_pgf(ctx), 1024, 64);
  const Pmf marginal = invert(marginal_r11_pgf(ctx), 1024);
  EXPECT_LT(total_variation(joint.marginal_first(), marginal.masses, 1024), 1e-8);
}

TEST(CcdfTest, PartialSumComplement) {
  const auto ctx = ref_context();
  const Pmf p = invert(r0_pgf(ctx), 1 << 12);
  const Ccdf c = ccdf(p);
  ASSERT_EQ(c.size(), p.size());
  EXPECT_NEAR(c[0], 1.0 - p[0], 1e-15);
  for (std::size_t j = 1; j < c.size(); ++j) {
    ASSERT_LE(c[j], c[j - 1]);
    ASSERT_GE(c[j], 0.0);
  }
  EXPECT_EQ(c[c.size() - 1], 0.0);
}

TEST(MeanTest, PointMass) {
  const auto m = mean_from_pgf(
      PgfHandle::unary("z5", [](Complex z) { return std::pow(z, 5); }));
  ASSERT_TRUE(m.has_value());
  EXPECT_NEAR(*m, 5.0, 1e-9);
}

TEST(MeanTest, QueueLengthMatchesInvertedPmf) {
  // sum j p_j over an aliased lattice loses N sum_m P{X >= mN}; the power law
  // puts that at C L N^(1-sigma) zeta(sigma).
  const auto ctx = ref_context();
  const TailLaw law = tail_R11(*ctx);
  const std::size_t n = 1 << 18;
  const Pmf p = invert(marginal_r11_pgf(ctx), n);
  const double folded =
      law.C * law.L * std::pow(double(n), 1.0 - law.sigma) * boost::math::zeta(law.sigma);
  const auto m = mean_from_pgf(marginal_r11_pgf(ctx), 1e-2, law.sigma);
  ASSERT_TRUE(m.has_value());
  EXPECT_NEAR(*m, p.mean() + folded, 1e-5);
}

TEST(MeanTest, GuardedByTailIndex) {
  const auto ctx = make_context(pareto_params(1.0, 0.4, 1.0, 1.5, 0.1));
  EXPECT_FALSE(mean_from_pgf(marginal_r11_pgf(ctx), 1e-2, 0.5).has_value());
  const auto r0 = mean_from_pgf(r0_pgf(ctx), 1e-2, 1.5);
  ASSERT_TRUE(r0.has_value());
  EXPECT_GT(*r0, 0.0);
  const auto ref = mean_from_pgf(r0_pgf(ref_context()), 1e-2, 2.5);
  ASSERT_TRUE(ref.has_value());
  EXPECT_GT(*ref, 0.0);
}

TEST(MeanTest, LightTailedGeometric) {
  const auto m = mean_from_pgf(
      PgfHandle::unary("geo", [](Complex z) { return 0.25 / (1.0 - 0.75 * z); }));
  ASSERT_TRUE(m.has_value());
  EXPECT_NEAR(*m, 3.0, 1e-8);
}

TEST(CsvTest, HeaderAndFullPrecision) {
  Pmf p;
  p.masses = {0.1, 1.0 / 3.0};
  std::ostringstream out;
  write_csv(p, out);
  EXPECT_EQ(out.str(), "j,p_j\n0,0.10000000000000001\n1,0.33333333333333331\n");
  std::ostringstream cout;
  write_csv(ccdf(p), cout);
  EXPECT_EQ(cout.str().substr(0, 6), "j,c_j\n");
}

TEST(TotalVariationTest, HalfL1) {
  EXPECT_DOUBLE_EQ(total_variation({0.5, 0.5}, {1.0}, 2), 0.5);
  EXPECT_DOUBLE_EQ(total_variation({0.5, 0.5}, {0.5, 0.5, 0.3}, 2), 0.0);
}

}  // namespace
}  // namespace retrialq
