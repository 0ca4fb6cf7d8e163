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

#ifndef RETRIALQ_TRANSFORMS_H_
#define RETRIALQ_TRANSFORMS_H_

#include <cstddef>
#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <vector>

#include "retrialq/model.h"

namespace retrialq {

struct Tolerances {
  double fixed_point_tol = 1e-14;
  double quadrature_tol = 1e-12;
  long max_iter = 1000000;
};

struct FixedPointResult {
  Complex value;       // alpha(s)
  Complex complement;  // 1 - alpha(s)
  long iterations;
  // Largest observed ratio of successive step sizes while steps are still
  // well above rounding level; bounded by rho1 for a contraction.
  double max_ratio;
  // |alpha - beta(s + lambda1 - lambda1 alpha)|.
  double residual;
};

// Scalar transform kernels of the retrial queue on Re(s) >= 0:
//
//   alpha   busy-period LST of the M/G/1 queue with arrival rate lambda1
//   h(z)    alpha(lambda2 - lambda2 z)
//   kappa   geometric compound of busy-period equilibrium transforms
//   omega   1 - integral_0^s kappa
//   tau     exp(psi (omega - 1))
//   eta     1 - vartheta + vartheta kappa
//   xi      geometric compound of service equilibrium transforms
//   gamma   conditional transform behind H_2 | H_1 = 0
//
// Immutable after construction. The only mutable state is a write-once
// cache of circle-grid integrals guarded by a mutex.
class TransformContext {
 public:
  explicit TransformContext(ModelParams params, Tolerances tol = {});

  const ModelParams& params() const { return params_; }
  const DerivedQuantities& derived() const { return derived_; }
  const Tolerances& tolerances() const { return tol_; }
  const ServiceDistribution& service() const { return params_.service; }

  // Picard iteration x <- beta(s + lambda1 - lambda1 x), carried out on the
  // complement 1 - x. Without `start`, the first iterate is beta(s + lambda1).
  FixedPointResult solve_alpha(Complex s,
                               std::optional<Complex> start = std::nullopt) const;
  LstPair alpha_pair(Complex s) const;
  Complex alpha(Complex s) const { return alpha_pair(s).value; }
  // (1 - alpha(s)) / (alpha1 s).
  Complex alpha_equilibrium(Complex s) const;

  LstPair h_pair(Complex z) const;
  Complex h(Complex z) const { return h_pair(z).value; }

  Complex kappa(Complex s) const;
  // (1 - vartheta) alpha_e / (1 - vartheta alpha_e).
  Complex kappa_geometric_form(Complex s) const;
  // integral of kappa along the segment 0 -> s.
  Complex kappa_integral(Complex s) const;
  Complex omega(Complex s) const { return 1.0 - kappa_integral(s); }
  Complex tau(Complex s) const;
  // sum_k psi^k e^-psi omega^k / k!, truncated once terms drop below 1e-17.
  Complex tau_poisson_series(Complex s) const;
  Complex eta(Complex s) const;
  Complex xi(Complex s) const;
  Complex xi_series(Complex s, int terms) const;
  // [beta(s + lambda1 - lambda1 alpha) - beta(s + lambda1)] /
  // [alpha (1 - beta(lambda1))].
  Complex gamma_lst(Complex s) const;
  // [1 - beta(s + lambda1) / alpha] / (1 - beta(lambda1)).
  Complex gamma_lst_ratio_form(Complex s) const;

  // kappa integral at s_k = lambda2 (1 - exp(2 pi i k / n)), k = 0..n-1,
  // accumulated along the image of the unit circle. Cached per n.
  std::shared_ptr<const std::vector<Complex>> kappa_integral_on_circle(
      std::size_t n) const;

 private:
  ModelParams params_;
  DerivedQuantities derived_;
  Tolerances tol_;
  double one_minus_beta_lambda1_;

  mutable std::mutex cache_mutex_;
  mutable std::map<std::size_t, std::shared_ptr<const std::vector<Complex>>>
      circle_cache_;
};

// Maps z in the closed unit disk to s = rate (1 - z), clearing rounding
// residue that would push Re(s) below zero.
Complex disk_to_half_plane(double rate, Complex z);

// e^{2 pi i k / n}, k = 0..n-1.
std::vector<Complex> unit_circle_grid(std::size_t n);

}  // namespace retrialq

#endif  // RETRIALQ_TRANSFORMS_H_
