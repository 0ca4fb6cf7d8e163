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

#ifndef RETRIALQ_MODEL_H_
#define RETRIALQ_MODEL_H_

#include <complex>
#include <optional>
#include <random>
#include <string>
#include <variant>
#include <vector>

namespace retrialq {

using Complex = std::complex<double>;
using Rng = std::mt19937_64;

// Pareto type I: P{T > t} = (x_m / t)^a for t >= x_m.
struct Pareto {
  double a;
  double x_m;
};

struct Exponential {
  double rate;
};

struct Deterministic {
  double value;
};

enum class ServiceKind { kPareto, kExponential, kDeterministic };

// A transform value together with its complement 1 - value, each computed
// without cancellation near s = 0.
struct LstPair {
  Complex value;
  Complex complement;
};

// Service-time distribution F_beta. All transform methods require
// Re(s) >= 0 and throw InvalidModelError otherwise.
class ServiceDistribution {
 public:
  using Family = std::variant<Pareto, Exponential, Deterministic>;

  explicit ServiceDistribution(Family family);

  static ServiceDistribution pareto(double a, double x_m) {
    return ServiceDistribution(Pareto{a, x_m});
  }
  static ServiceDistribution exponential(double rate) {
    return ServiceDistribution(Exponential{rate});
  }
  static ServiceDistribution deterministic(double value) {
    return ServiceDistribution(Deterministic{value});
  }

  ServiceKind kind() const;
  const Family& family() const { return family_; }
  std::string describe() const;

  // Parameter problems of the family itself (empty when admissible).
  std::vector<std::string> violations() const;

  double mean() const;
  // E[T^2]; infinite for Pareto with a <= 2.
  double second_moment() const;
  // P{T > t}.
  double tail(double t) const;
  bool heavy_tailed() const { return kind() == ServiceKind::kPareto; }
  // Regular-variation index a and constant slowly varying factor L = x_m^a.
  std::optional<double> tail_index() const;
  std::optional<double> tail_constant() const;

  // beta(s) = E[exp(-s T)].
  Complex lst(Complex s) const { return lst_pair(s).value; }
  LstPair lst_pair(Complex s) const;
  // beta'(s) = -E[T exp(-s T)].
  Complex lst_derivative(Complex s) const;
  // Pareto only: beta(s) by contour-deformed quadrature on (x_m, inf).
  Complex lst_by_quadrature(Complex s) const;

  // Equilibrium (stationary-excess) transform (1 - beta(s)) / (beta_1 s).
  Complex equilibrium_lst(Complex s) const;

  double sample(Rng& rng) const;
  double sample_equilibrium(Rng& rng) const;
  // Inverse CDFs used by the samplers, exposed for exact quantile checks.
  double quantile(double u) const;
  double equilibrium_quantile(double u) const;

 private:
  Family family_;
};

struct ModelParams {
  double lambda;
  double q;
  double mu;
  ServiceDistribution service;
};

struct DerivedQuantities {
  double lambda1;
  double lambda2;
  double beta1;
  double rho1;
  double rho2;
  double rho;
  double vartheta;
  double psi;
  double alpha1;
  // beta^(e)(lambda1) = P{H_1 = 0}.
  double h0;
  bool stable;
};

// Every violated constraint, including instability; empty iff admissible.
std::vector<std::string> validate(const ModelParams& params);

// Throws InvalidModelError when validate() is non-empty.
DerivedQuantities derive(const ModelParams& params);

Complex service_lst(const ServiceDistribution& service, Complex s);
Complex service_equilibrium_lst(const ServiceDistribution& service, Complex s);
double sample_service(const ServiceDistribution& service, Rng& rng);
double sample_service_equilibrium(const ServiceDistribution& service,
                                  Rng& rng);

// Reference configuration used throughout tests and the sample config.
ModelParams reference_params();

}  // namespace retrialq

#endif  // RETRIALQ_MODEL_H_
