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

#include "retrialq/model.h"

#include <cmath>
#include <limits>
#include <sstream>
#include <type_traits>

#include "retrialq/errors.h"
#include "retrialq/quadrature.h"

namespace retrialq {
namespace {

constexpr double kEulerGamma = 0.57721566490153286061;
constexpr double kSeriesRadius = 1.5;
constexpr double kSeriesEps = 1e-17;

template <class... Ts>
struct Overloaded : Ts... {
  using Ts::operator()...;
};
template <class... Ts>
Overloaded(Ts...) -> Overloaded<Ts...>;

void require_right_half_plane(Complex s) {
  if (!(s.real() >= 0.0)) {
    std::ostringstream msg;
    msg << "transform argument must satisfy Re(s) >= 0, got " << s;
    throw InvalidModelError(msg.str());
  }
}

// exp(x) - 1 for complex x without cancellation at small |x|.
Complex complex_expm1(Complex x) {
  const double re = x.real();
  const double im = x.imag();
  const double half_sin = std::sin(0.5 * im);
  return {std::expm1(re) * std::cos(im) - 2.0 * half_sin * half_sin,
          std::exp(re) * std::sin(im)};
}

bool near_integer(double nu) {
  const double gap = std::abs(nu - std::round(nu));
  return gap > 0.0 && gap < 1e-4;
}

// Pieces of the power series of E_{nu+1}(w) = singular + 1/nu - regular,
// where regular = sum_{k>=1, k != nu} (-w)^k / (k! (k - nu)).
struct ExpintSeries {
  Complex singular;
  Complex regular;
};

ExpintSeries expint_series(double nu, Complex w) {
  const bool integer = nu == std::round(nu);
  const int n = static_cast<int>(std::round(nu));
  ExpintSeries out{{0.0, 0.0}, {0.0, 0.0}};
  Complex power(1.0, 0.0);  // (-w)^k / k!
  for (int k = 1; k < 500; ++k) {
    power *= -w / static_cast<double>(k);
    if (integer && k == n) continue;
    const Complex term = power / (static_cast<double>(k) - nu);
    out.regular += term;
    if (k > nu + 2 && std::abs(term) <= kSeriesEps * std::abs(out.regular)) {
      break;
    }
  }
  if (w == Complex(0.0, 0.0)) return out;
  if (integer) {
    double digamma = -kEulerGamma;
    double factorial = 1.0;
    for (int m = 1; m <= n; ++m) {
      digamma += 1.0 / m;
      factorial *= m;
    }
    out.singular = std::pow(-w, n) / factorial * (digamma - std::log(w));
  } else {
    out.singular = std::tgamma(-nu) * std::exp(nu * std::log(w));
  }
  return out;
}

// E_p(w) exp(w) by modified Lentz continued fraction, valid for |w| > 1,
// Re(w) >= 0.
Complex expint_scaled_cf(double p, Complex w) {
  constexpr double kTiny = 1e-300;
  Complex b = w + p;
  Complex c = 1.0 / kTiny;
  Complex d = 1.0 / b;
  Complex h = d;
  for (int i = 1; i < 100000; ++i) {
    const double an = -static_cast<double>(i) * (p - 1.0 + i);
    b += 2.0;
    d = 1.0 / (an * d + b);
    c = b + an / c;
    const Complex del = c * d;
    h *= del;
    if (std::abs(del - 1.0) < 1e-16) return h;
  }
  throw ConvergenceError("continued fraction for E_p did not converge");
}

// E_p(w) for p > 1, Re(w) >= 0.
Complex expint(double p, Complex w) {
  if (std::abs(w) > kSeriesRadius) return std::exp(-w) * expint_scaled_cf(p, w);
  const double nu = p - 1.0;
  const ExpintSeries series = expint_series(nu, w);
  return series.singular + 1.0 / nu - series.regular;
}

LstPair pareto_lst_pair(const Pareto& d, Complex s) {
  if (s == Complex(0.0, 0.0)) return {{1.0, 0.0}, {0.0, 0.0}};
  const Complex w = s * d.x_m;
  if (std::abs(w) > kSeriesRadius) {
    const Complex value = d.a * std::exp(-w) * expint_scaled_cf(d.a + 1.0, w);
    return {value, 1.0 - value};
  }
  const ExpintSeries series = expint_series(d.a, w);
  const Complex complement = d.a * (series.regular - series.singular);
  return {1.0 - complement, complement};
}

Complex pareto_lst_quadrature(const Pareto& d, Complex s) {
  const Complex w = s * d.x_m;
  const double r = std::abs(w);
  if (r == 0.0) return {1.0, 0.0};
  // Rotate the ray u in (1, inf) onto 1 + t conj(w)/|w| so the exponential
  // factor decays monotonically instead of oscillating.
  const Complex dir = std::conj(w) / r;
  auto f = [&](Complex t) {
    return std::exp(-r * t) * std::pow(1.0 + t * dir, -d.a - 1.0);
  };
  const Complex integral =
      integrate_half_line(f, 0.0, std::min(1.0, 1.0 / r), 1e-17);
  return d.a * dir * std::exp(-w) * integral;
}

}  // namespace

ServiceDistribution::ServiceDistribution(Family family)
    : family_(std::move(family)) {}

ServiceKind ServiceDistribution::kind() const {
  return std::visit(
      Overloaded{[](const Pareto&) { return ServiceKind::kPareto; },
                 [](const Exponential&) { return ServiceKind::kExponential; },
                 [](const Deterministic&) {
                   return ServiceKind::kDeterministic;
                 }},
      family_);
}

std::string ServiceDistribution::describe() const {
  std::ostringstream out;
  out.precision(17);
  std::visit(Overloaded{[&](const Pareto& d) {
                          out << "Pareto(a=" << d.a << ", x_m=" << d.x_m << ")";
                        },
                        [&](const Exponential& d) {
                          out << "Exponential(rate=" << d.rate << ")";
                        },
                        [&](const Deterministic& d) {
                          out << "Deterministic(value=" << d.value << ")";
                        }},
             family_);
  return out.str();
}

std::vector<std::string> ServiceDistribution::violations() const {
  std::vector<std::string> out;
  std::visit(
      Overloaded{[&](const Pareto& d) {
                   if (!(d.a > 1.0) || !std::isfinite(d.a)) {
                     out.emplace_back("pareto tail index a must exceed 1");
                   }
                   if (!(d.x_m > 0.0) || !std::isfinite(d.x_m)) {
                     out.emplace_back("pareto scale x_m must be positive");
                   }
                 },
                 [&](const Exponential& d) {
                   if (!(d.rate > 0.0) || !std::isfinite(d.rate)) {
                     out.emplace_back("exponential rate must be positive");
                   }
                 },
                 [&](const Deterministic& d) {
                   if (!(d.value > 0.0) || !std::isfinite(d.value)) {
                     out.emplace_back("deterministic value must be positive");
                   }
                 }},
      family_);
  return out;
}

double ServiceDistribution::mean() const {
  return std::visit(
      Overloaded{[](const Pareto& d) { return d.a * d.x_m / (d.a - 1.0); },
                 [](const Exponential& d) { return 1.0 / d.rate; },
                 [](const Deterministic& d) { return d.value; }},
      family_);
}

double ServiceDistribution::second_moment() const {
  return std::visit(
      Overloaded{[](const Pareto& d) {
                   return d.a > 2.0 ? d.a * d.x_m * d.x_m / (d.a - 2.0)
                                    : std::numeric_limits<double>::infinity();
                 },
                 [](const Exponential& d) { return 2.0 / (d.rate * d.rate); },
                 [](const Deterministic& d) { return d.value * d.value; }},
      family_);
}

double ServiceDistribution::tail(double t) const {
  return std::visit(
      Overloaded{[t](const Pareto& d) {
                   return t < d.x_m ? 1.0 : std::pow(d.x_m / t, d.a);
                 },
                 [t](const Exponential& d) {
                   return t < 0.0 ? 1.0 : std::exp(-d.rate * t);
                 },
                 [t](const Deterministic& d) {
                   return t < d.value ? 1.0 : 0.0;
                 }},
      family_);
}

std::optional<double> ServiceDistribution::tail_index() const {
  if (const auto* d = std::get_if<Pareto>(&family_)) return d->a;
  return std::nullopt;
}

std::optional<double> ServiceDistribution::tail_constant() const {
  if (const auto* d = std::get_if<Pareto>(&family_)) {
    return std::pow(d->x_m, d->a);
  }
  return std::nullopt;
}

LstPair ServiceDistribution::lst_pair(Complex s) const {
  require_right_half_plane(s);
  return std::visit(
      Overloaded{[s](const Pareto& d) -> LstPair {
                   if (near_integer(d.a)) {
                     const Complex v = pareto_lst_quadrature(d, s);
                     return {v, 1.0 - v};
                   }
                   return pareto_lst_pair(d, s);
                 },
                 [s](const Exponential& d) -> LstPair {
                   return {d.rate / (d.rate + s), s / (d.rate + s)};
                 },
                 [s](const Deterministic& d) -> LstPair {
                   const Complex m1 = complex_expm1(-s * d.value);
                   return {1.0 + m1, -m1};
                 }},
      family_);
}

Complex ServiceDistribution::lst_derivative(Complex s) const {
  require_right_half_plane(s);
  return std::visit(
      Overloaded{[s](const Pareto& d) -> Complex {
                   return -d.a * d.x_m * expint(d.a, s * d.x_m);
                 },
                 [s](const Exponential& d) -> Complex {
                   return -d.rate / ((d.rate + s) * (d.rate + s));
                 },
                 [s](const Deterministic& d) -> Complex {
                   return -d.value * std::exp(-s * d.value);
                 }},
      family_);
}

Complex ServiceDistribution::lst_by_quadrature(Complex s) const {
  require_right_half_plane(s);
  const auto* d = std::get_if<Pareto>(&family_);
  if (d == nullptr) {
    throw InvalidModelError("lst_by_quadrature is defined for Pareto only");
  }
  return pareto_lst_quadrature(*d, s);
}

Complex ServiceDistribution::equilibrium_lst(Complex s) const {
  require_right_half_plane(s);
  if (std::abs(s) < 1e-10) return {1.0, 0.0};
  return lst_pair(s).complement / (mean() * s);
}

double ServiceDistribution::quantile(double u) const {
  return std::visit(
      Overloaded{[u](const Pareto& d) {
                   return d.x_m * std::pow(1.0 - u, -1.0 / d.a);
                 },
                 [u](const Exponential& d) { return -std::log1p(-u) / d.rate; },
                 [](const Deterministic& d) { return d.value; }},
      family_);
}

double ServiceDistribution::equilibrium_quantile(double u) const {
  return std::visit(
      Overloaded{[u](const Pareto& d) {
                   // F_e is linear with slope 1/beta_1 below x_m, where it
                   // reaches (a-1)/a, and 1 - (x_m/x)^(a-1)/a above.
                   const double knee = (d.a - 1.0) / d.a;
                   if (u < knee) return u * d.a * d.x_m / (d.a - 1.0);
                   return d.x_m * std::pow(d.a * (1.0 - u), -1.0 / (d.a - 1.0));
                 },
                 [u](const Exponential& d) { return -std::log1p(-u) / d.rate; },
                 [u](const Deterministic& d) { return u * d.value; }},
      family_);
}

double ServiceDistribution::sample(Rng& rng) const {
  std::uniform_real_distribution<double> unif(0.0, 1.0);
  return quantile(unif(rng));
}

double ServiceDistribution::sample_equilibrium(Rng& rng) const {
  std::uniform_real_distribution<double> unif(0.0, 1.0);
  return equilibrium_quantile(unif(rng));
}

std::vector<std::string> validate(const ModelParams& params) {
  std::vector<std::string> out;
  if (!(params.lambda > 0.0) || !std::isfinite(params.lambda)) {
    out.emplace_back("lambda must be positive");
  }
  if (!(params.mu > 0.0) || !std::isfinite(params.mu)) {
    out.emplace_back("mu must be positive");
  }
  if (!(params.q > 0.0 && params.q < 1.0)) {
    out.emplace_back("q must lie in open interval (0,1)");
  }
  auto service = params.service.violations();
  out.insert(out.end(), service.begin(), service.end());
  if (out.empty()) {
    const double rho = params.lambda * params.service.mean();
    if (!(rho < 1.0)) {
      std::ostringstream msg;
      msg.precision(17);
      msg << "unstable: rho=" << rho << " >= 1";
      out.push_back(msg.str());
    }
  }
  return out;
}

DerivedQuantities derive(const ModelParams& params) {
  const auto problems = validate(params);
  if (!problems.empty()) {
    std::string msg = "invalid model:";
    for (const auto& p : problems) msg += " " + p + ";";
    throw InvalidModelError(msg);
  }
  DerivedQuantities d{};
  d.beta1 = params.service.mean();
  d.lambda1 = params.lambda * params.q;
  d.lambda2 = params.lambda * (1.0 - params.q);
  d.rho1 = d.lambda1 * d.beta1;
  d.rho2 = d.lambda2 * d.beta1;
  d.rho = d.rho1 + d.rho2;
  d.vartheta = d.rho2 / (1.0 - d.rho1);
  d.psi = d.rho / (params.mu * (1.0 - d.rho));
  d.alpha1 = d.beta1 / (1.0 - d.rho1);
  d.h0 = params.service.equilibrium_lst(d.lambda1).real();
  d.stable = d.rho < 1.0;
  return d;
}

Complex service_lst(const ServiceDistribution& service, Complex s) {
  return service.lst(s);
}

Complex service_equilibrium_lst(const ServiceDistribution& service,
                                Complex s) {
  return service.equilibrium_lst(s);
}

double sample_service(const ServiceDistribution& service, Rng& rng) {
  return service.sample(rng);
}

double sample_service_equilibrium(const ServiceDistribution& service,
                                  Rng& rng) {
  return service.sample_equilibrium(rng);
}

ModelParams reference_params() {
  return ModelParams{1.0, 0.4, 1.0, ServiceDistribution::pareto(2.5, 0.3)};
}

}  // namespace retrialq
