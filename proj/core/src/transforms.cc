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

#include "retrialq/transforms.h"

#include <cmath>
#include <numbers>
#include <sstream>

#include "retrialq/errors.h"
#include "retrialq/parallel.h"
#include "retrialq/quadrature.h"

namespace retrialq {
namespace {

constexpr double kSmallS = 1e-10;
// Segments of the circle grid nearest s = 0 see the non-analytic s^(a-1)
// behaviour of kappa and get adaptive refinement; the rest use a fixed rule.
constexpr std::size_t kRefinedSegments = 64;
constexpr double kSegmentTol = 1e-18;

// Neumaier-compensated complex accumulator.
class CompensatedSum {
 public:
  void add(Complex x) {
    add_part(x.real(), re_, re_c_);
    add_part(x.imag(), im_, im_c_);
  }
  Complex value() const { return {re_ + re_c_, im_ + im_c_}; }

 private:
  static void add_part(double x, double& sum, double& comp) {
    const double t = sum + x;
    if (std::abs(sum) >= std::abs(x)) {
      comp += (sum - t) + x;
    } else {
      comp += (x - t) + sum;
    }
    sum = t;
  }
  double re_ = 0.0, re_c_ = 0.0, im_ = 0.0, im_c_ = 0.0;
};

}  // namespace

Complex disk_to_half_plane(double rate, Complex z) {
  Complex s = rate * (1.0 - z);
  if (s.real() < 0.0 && s.real() > -1e-12) s.real(0.0);
  return s;
}

std::vector<Complex> unit_circle_grid(std::size_t n) {
  std::vector<Complex> z(n);
  if (n == 0) return z;
  z[0] = {1.0, 0.0};
  for (std::size_t k = 1; k <= n / 2; ++k) {
    const double theta = 2.0 * std::numbers::pi * static_cast<double>(k) /
                         static_cast<double>(n);
    z[k] = {std::cos(theta), std::sin(theta)};
    z[n - k] = std::conj(z[k]);
  }
  if (n % 2 == 0) z[n / 2] = {-1.0, 0.0};
  return z;
}

TransformContext::TransformContext(ModelParams params, Tolerances tol)
    : params_(std::move(params)), derived_(derive(params_)), tol_(tol) {
  one_minus_beta_lambda1_ =
      params_.service.lst_pair(derived_.lambda1).complement.real();
}

FixedPointResult TransformContext::solve_alpha(
    Complex s, std::optional<Complex> start) const {
  if (!(s.real() >= 0.0)) {
    throw InvalidModelError("alpha requires Re(s) >= 0");
  }
  if (s == Complex(0.0, 0.0)) return {1.0, 0.0, 0, 0.0, 0.0};
  const ServiceDistribution& service = params_.service;
  const double lambda1 = derived_.lambda1;
  // u = 1 - x; the map is u <- 1 - beta(s + lambda1 u).
  Complex u = start ? 1.0 - *start : Complex(1.0, 0.0);
  double previous_step = -1.0;
  double max_ratio = 0.0;
  for (long it = 1; it <= tol_.max_iter; ++it) {
    const Complex next = service.lst_pair(s + lambda1 * u).complement;
    const double step = std::abs(next - u);
    const double scale = std::abs(next);
    if (previous_step > 1e-10 * scale && step > 1e-10 * scale) {
      max_ratio = std::max(max_ratio, step / previous_step);
    }
    previous_step = step;
    u = next;
    if (step <= tol_.fixed_point_tol * std::min(1.0, scale)) {
      const Complex check = service.lst_pair(s + lambda1 * u).complement;
      return {1.0 - u, u, it, max_ratio, std::abs(check - u)};
    }
  }
  std::ostringstream msg;
  msg << "busy-period fixed point did not converge at s=" << s;
  throw ConvergenceError(msg.str());
}

LstPair TransformContext::alpha_pair(Complex s) const {
  if (s == Complex(0.0, 0.0)) return {{1.0, 0.0}, {0.0, 0.0}};
  const FixedPointResult r = solve_alpha(s);
  return {r.value, r.complement};
}

Complex TransformContext::alpha_equilibrium(Complex s) const {
  if (std::abs(s) < kSmallS) return {1.0, 0.0};
  return alpha_pair(s).complement / (derived_.alpha1 * s);
}

LstPair TransformContext::h_pair(Complex z) const {
  return alpha_pair(disk_to_half_plane(derived_.lambda2, z));
}

Complex TransformContext::kappa(Complex s) const {
  if (s == Complex(0.0, 0.0)) return {1.0, 0.0};
  if (std::abs(s) < kSmallS) return kappa_geometric_form(s);
  const Complex u = alpha_pair(s).complement;
  return (1.0 - derived_.rho) / derived_.beta1 * u /
         (s - derived_.lambda2 * u);
}

Complex TransformContext::kappa_geometric_form(Complex s) const {
  const double v = derived_.vartheta;
  const Complex ae = alpha_equilibrium(s);
  return (1.0 - v) * ae / (1.0 - v * ae);
}

Complex TransformContext::kappa_integral(Complex s) const {
  if (s == Complex(0.0, 0.0)) return {0.0, 0.0};
  // x = s t^2 smooths the |x|^(a-1) behaviour of kappa at the origin.
  auto f = [this, s](Complex t) { return 2.0 * s * t * kappa(s * t * t); };
  return integrate_segment<32>(f, Complex(0.0, 0.0), Complex(1.0, 0.0),
                               tol_.quadrature_tol);
}

Complex TransformContext::tau(Complex s) const {
  return std::exp(-derived_.psi * kappa_integral(s));
}

Complex TransformContext::tau_poisson_series(Complex s) const {
  const double psi = derived_.psi;
  const Complex w = omega(s);
  Complex term = std::exp(-psi);
  Complex sum = term;
  for (int k = 1; k < 10000; ++k) {
    term *= psi * w / static_cast<double>(k);
    sum += term;
    if (k > psi && std::abs(term) < 1e-17) break;
  }
  return sum;
}

Complex TransformContext::eta(Complex s) const {
  const double v = derived_.vartheta;
  return 1.0 - v + v * kappa(s);
}

Complex TransformContext::xi(Complex s) const {
  const double r1 = derived_.rho1;
  const Complex be = params_.service.equilibrium_lst(s);
  return (1.0 - r1) * be / (1.0 - r1 * be);
}

Complex TransformContext::xi_series(Complex s, int terms) const {
  const double r1 = derived_.rho1;
  const Complex be = params_.service.equilibrium_lst(s);
  Complex power = be;
  Complex sum(0.0, 0.0);
  double weight = 1.0 - r1;
  for (int n = 1; n <= terms; ++n) {
    sum += weight * power;
    weight *= r1;
    power *= be;
  }
  return sum;
}

Complex TransformContext::gamma_lst(Complex s) const {
  if (s == Complex(0.0, 0.0)) return {1.0, 0.0};
  const double lambda1 = derived_.lambda1;
  const LstPair a = alpha_pair(s);
  const ServiceDistribution& service = params_.service;
  // beta(y) - beta(s + lambda1) with y = s + lambda1 - lambda1 alpha, written
  // through complements.
  const Complex numerator = service.lst_pair(s + lambda1).complement -
                            service.lst_pair(s + lambda1 * a.complement).complement;
  return numerator / (a.value * one_minus_beta_lambda1_);
}

Complex TransformContext::gamma_lst_ratio_form(Complex s) const {
  if (s == Complex(0.0, 0.0)) return {1.0, 0.0};
  const Complex a = alpha(s);
  const Complex b = params_.service.lst(s + derived_.lambda1);
  return (1.0 - b / a) / one_minus_beta_lambda1_;
}

std::shared_ptr<const std::vector<Complex>>
TransformContext::kappa_integral_on_circle(std::size_t n) const {
  {
    std::lock_guard<std::mutex> lock(cache_mutex_);
    auto it = circle_cache_.find(n);
    if (it != circle_cache_.end()) return it->second;
  }
  // s(theta) = lambda2 (1 - e^{i theta}); the upper half is integrated
  // segment by segment and the lower half follows by conjugation.
  const double lambda2 = derived_.lambda2;
  const double step = 2.0 * std::numbers::pi / static_cast<double>(n);
  auto integrand = [this, lambda2](Complex theta) {
    const Complex e = std::polar(1.0, theta.real());
    const Complex s = disk_to_half_plane(lambda2, e);
    return kappa(s) * Complex(0.0, -lambda2) * e;
  };
  const std::size_t half = n / 2;
  std::vector<Complex> pieces(half + 1, Complex(0.0, 0.0));
  parallel_for(half, [&](std::size_t i) {
    const std::size_t k = i + 1;
    const Complex lo(static_cast<double>(k - 1) * step, 0.0);
    const Complex hi(static_cast<double>(k) * step, 0.0);
    if (k <= kRefinedSegments) {
      pieces[k] = integrate_segment<16>(integrand, lo, hi, kSegmentTol);
    } else {
      pieces[k] = gauss_segment<10>(integrand, lo, hi);
    }
  });
  auto out = std::make_shared<std::vector<Complex>>(n, Complex(0.0, 0.0));
  CompensatedSum acc;
  for (std::size_t k = 1; k <= half; ++k) {
    acc.add(pieces[k]);
    (*out)[k] = acc.value();
  }
  for (std::size_t k = 1; k < n - half; ++k) {
    (*out)[n - k] = std::conj((*out)[k]);
  }
  if (n % 2 == 0 && n > 0) (*out)[half] = {(*out)[half].real(), 0.0};
  std::lock_guard<std::mutex> lock(cache_mutex_);
  auto [it, inserted] = circle_cache_.emplace(n, out);
  return it->second;
}

}  // namespace retrialq
