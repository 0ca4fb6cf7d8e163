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

#ifndef RETRIALQ_PGF_H_
#define RETRIALQ_PGF_H_

#include <cstddef>
#include <functional>
#include <memory>
#include <string>
#include <string_view>
#include <vector>

#include "retrialq/transforms.h"

namespace retrialq {

using ContextPtr = std::shared_ptr<const TransformContext>;

// A probability generating function of one or two nonnegative integer
// variables, evaluable on the closed unit (poly)disk. Coefficients are real,
// so circle evaluations only compute the upper half and mirror it.
class PgfHandle {
 public:
  using Eval1 = std::function<Complex(Complex)>;
  using Eval2 = std::function<Complex(Complex, Complex)>;
  // Values at e^{2 pi i k / n}, k = 0..n-1.
  using CircleEval = std::function<std::vector<Complex>(std::size_t)>;

  static PgfHandle unary(std::string label, Eval1 eval,
                         CircleEval circle = nullptr);
  static PgfHandle binary(std::string label, Eval2 eval);

  const std::string& label() const { return label_; }
  int arity() const { return arity_; }

  Complex operator()(Complex z) const;
  Complex operator()(Complex z1, Complex z2) const;

  std::vector<Complex> on_circle(std::size_t n) const;
  // Row-major n1 x n2 grid: entry [k1 * n2 + k2] = P(w1^k1, w2^k2).
  std::vector<Complex> on_torus(std::size_t n1, std::size_t n2) const;

 private:
  std::string label_;
  int arity_ = 1;
  Eval1 eval1_;
  Eval2 eval2_;
  CircleEval circle_;
};

// Conditional orbit size given an idle server; tau(lambda2 - lambda2 z).
PgfHandle r0_pgf(ContextPtr ctx);
// Same quantity through exp{-(lambda/mu) int_z^1 (1-h(u))/(h(u)-u) du}.
Complex r0_integral_form(const TransformContext& ctx, Complex z);

// beta_e(lambda - lambda1 z1 - lambda2 z2).
PgfHandle ma_pgf(ContextPtr ctx);
// (1/rho) (1 - beta(y)) / (1 - p z2 - q z1).
Complex ma_rational_form(const TransformContext& ctx, Complex z1, Complex z2);

// (1/rho1) (beta(y) - h(z2)) / (z1 - h(z2)), patched at z1 = h(z2).
PgfHandle h_kernel_pgf(ContextPtr ctx);
Complex h_kernel(const TransformContext& ctx, Complex z1, Complex z2);

// (1 - rho1) / (1 - rho1 H(z1, z2)).
PgfHandle mb_pgf(ContextPtr ctx);
// (1 - rho1) (h(z2) - z1) / (beta(y) - z1).
Complex mb_rational_form(const TransformContext& ctx, Complex z1, Complex z2);

// eta(lambda2 - lambda2 z).
PgfHandle mc_pgf(ContextPtr ctx);
// ((1 - rho)/(1 - rho1)) (1 - z) / (h(z) - z).
Complex mc_rational_form(const TransformContext& ctx, Complex z);

// Ma Mb Mc R0: joint (queue, orbit) given a busy server.
PgfHandle r1_pgf(ContextPtr ctx);
// xi(lambda1 - lambda1 z): queue length given a busy server.
PgfHandle marginal_r11_pgf(ContextPtr ctx);
// kappa tau at lambda2 - lambda2 z: orbit size given a busy server.
PgfHandle marginal_r12_pgf(ContextPtr ctx);
// Orbit size given a busy server and an empty queue.
PgfHandle cond_r12_given_r11_0_pgf(ContextPtr ctx);
// gamma(lambda2 - lambda2 z).
PgfHandle cond_h2_given_h1_0_pgf(ContextPtr ctx);
// H(0, z) / H(0, 1).
Complex cond_h2_given_h1_0_kernel_form(const TransformContext& ctx, Complex z);
// Mb(0, z) / Mb(0, 1).
PgfHandle cond_mb2_given_mb1_0_pgf(ContextPtr ctx);

enum class Target { kR0, kR11, kR12, kMc, kH2GivenH1Zero, kR12GivenR11Zero,
                    kMb2GivenMb1Zero };

// Canonical names: R0, R11, R12, Mc, H2_given_H1_0, R12_given_R11_0,
// Mb2_given_Mb1_0.
std::string_view target_name(Target t);
// Throws std::invalid_argument on unknown names.
Target parse_target(std::string_view name);
std::vector<Target> all_targets();
PgfHandle pgf_for_target(ContextPtr ctx, Target t);

}  // namespace retrialq

#endif  // RETRIALQ_PGF_H_
