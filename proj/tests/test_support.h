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

#ifndef RETRIALQ_TESTS_TEST_SUPPORT_H_
#define RETRIALQ_TESTS_TEST_SUPPORT_H_

#include <cmath>
#include <complex>
#include <limits>
#include <memory>
#include <random>
#include <vector>

#include <boost/math/quadrature/exp_sinh.hpp>
#include <boost/math/quadrature/tanh_sinh.hpp>

#include "retrialq/model.h"
#include "retrialq/pgf.h"
#include "retrialq/transforms.h"

namespace retrialq::testing {

inline ModelParams pareto_params(double lambda, double q, double mu, double a,
                                 double x_m) {
  return {lambda, q, mu, ServiceDistribution::pareto(a, x_m)};
}

inline ContextPtr make_context(const ModelParams& p) {
  return std::make_shared<const TransformContext>(p);
}

inline ContextPtr ref_context() {
  static const ContextPtr ctx = make_context(reference_params());
  return ctx;
}

inline double rel_err(Complex got, Complex want) {
  return std::abs(got - want) / std::max(std::abs(want), 1e-300);
}

// Real-s Pareto LST by double-exponential quadrature of the density.
inline double pareto_lst_oracle(double a, double x_m, double s) {
  boost::math::quadrature::exp_sinh<double> integrator;
  auto f = [&](double u) {
    const double t = x_m + u;
    return std::exp(-s * t) * a * std::pow(x_m, a) * std::pow(t, -a - 1.0);
  };
  return integrator.integrate(f, 1e-15);
}

// Points with Re(s) >= 0 spread over several scales.
inline std::vector<Complex> random_half_plane(std::size_t n, unsigned seed) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  std::vector<Complex> out(n);
  for (auto& s : out) {
    const double r = std::pow(10.0, -6.0 + 9.0 * unit(rng));
    const double theta = (unit(rng) - 0.5) * M_PI;
    s = std::polar(r, theta);
  }
  return out;
}

inline std::vector<Complex> random_disk(std::size_t n, unsigned seed) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  std::vector<Complex> out(n);
  for (auto& z : out) {
    const double r = unit(rng) < 0.2 ? 1.0 : std::sqrt(unit(rng));
    z = std::polar(r, 2.0 * M_PI * unit(rng));
  }
  return out;
}

}  // namespace retrialq::testing

#endif  // RETRIALQ_TESTS_TEST_SUPPORT_H_
