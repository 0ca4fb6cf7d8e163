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

#include "retrialq/asymptotics.h"

#include <cmath>
#include <stdexcept>
#include <vector>

#include "json.hpp"

#include "retrialq/errors.h"

namespace retrialq {
namespace {

struct ParetoData {
  double a;
  double L;
};

ParetoData pareto_data(const TransformContext& ctx, const char* target) {
  const ServiceDistribution& service = ctx.service();
  if (!service.heavy_tailed()) {
    throw LightTailError(std::string(target) + ": light-tailed service (" +
                         service.describe() +
                         "): no regular-variation law");
  }
  return {*service.tail_index(), *service.tail_constant()};
}

TailLaw make_law(const char* target, double sigma, double C, double L) {
  return {target, sigma, C, L};
}

}  // namespace

double TailLaw::predict(double j) const { return C * L * std::pow(j, -sigma); }

TailLaw tail_T_alpha(const TransformContext& ctx) {
  const auto [a, L] = pareto_data(ctx, "T_alpha");
  const double rho1 = ctx.derived().rho1;
  return make_law("T_alpha", a, std::pow(1.0 - rho1, -a - 1.0), L);
}

double c_kappa(const TransformContext& ctx) {
  const auto [a, L] = pareto_data(ctx, "T_kappa");
  const DerivedQuantities& d = ctx.derived();
  return 1.0 / (d.beta1 * (1.0 - d.rho) * (a - 1.0) *
                std::pow(1.0 - d.rho1, a - 1.0));
}

double c_kappa_busy_form(const TransformContext& ctx) {
  const auto [a, L] = pareto_data(ctx, "T_kappa");
  const DerivedQuantities& d = ctx.derived();
  return 1.0 / (d.alpha1 * (1.0 - d.vartheta) * (a - 1.0) *
                std::pow(1.0 - d.rho1, a + 1.0));
}

TailLaw tail_T_kappa(const TransformContext& ctx) {
  const auto [a, L] = pareto_data(ctx, "T_kappa");
  return make_law("T_kappa", a - 1.0, c_kappa(ctx), L);
}

TailLaw tail_T_omega(const TransformContext& ctx) {
  const auto [a, L] = pareto_data(ctx, "T_omega");
  return make_law("T_omega", a, (1.0 - 1.0 / a) * c_kappa(ctx), L);
}

TailLaw tail_T_tau(const TransformContext& ctx) {
  const auto [a, L] = pareto_data(ctx, "T_tau");
  return make_law("T_tau", a, (1.0 - 1.0 / a) * c_kappa(ctx) * ctx.derived().psi,
                  L);
}

TailLaw tail_T_xi(const TransformContext& ctx) {
  const auto [a, L] = pareto_data(ctx, "T_xi");
  const DerivedQuantities& d = ctx.derived();
  return make_law("T_xi", a - 1.0, 1.0 / ((1.0 - d.rho1) * (a - 1.0) * d.beta1),
                  L);
}

TailLaw tail_T_gamma(const TransformContext& ctx) {
  const auto [a, L] = pareto_data(ctx, "T_gamma");
  const double b = ctx.service().lst(ctx.derived().lambda1).real();
  return make_law("T_gamma", a,
                  b / (1.0 - b) * std::pow(1.0 - ctx.derived().rho1, -a - 1.0),
                  L);
}

TailLaw tail_R0(const TransformContext& ctx) {
  const auto [a, L] = pareto_data(ctx, "R0");
  const DerivedQuantities& d = ctx.derived();
  const ModelParams& p = ctx.params();
  const double C = p.lambda * std::pow(d.lambda2, a) /
                   (a * p.mu * (1.0 - d.rho) * (1.0 - d.rho) *
                    std::pow(1.0 - d.rho1, a - 1.0));
  return make_law("R0", a, C, L);
}

TailLaw tail_R11(const TransformContext& ctx) {
  const auto [a, L] = pareto_data(ctx, "R11");
  const DerivedQuantities& d = ctx.derived();
  const double C = std::pow(d.lambda1, a - 1.0) /
                   ((1.0 - d.rho1) * (a - 1.0) * d.beta1);
  return make_law("R11", a - 1.0, C, L);
}

TailLaw tail_R12(const TransformContext& ctx) {
  const auto [a, L] = pareto_data(ctx, "R12");
  const DerivedQuantities& d = ctx.derived();
  const double C = std::pow(d.lambda2, a - 1.0) /
                   (d.beta1 * (1.0 - d.rho) * (a - 1.0) *
                    std::pow(1.0 - d.rho1, a - 1.0));
  return make_law("R12", a - 1.0, C, L);
}

TailLaw tail_Mc(const TransformContext& ctx) {
  const auto [a, L] = pareto_data(ctx, "Mc");
  const DerivedQuantities& d = ctx.derived();
  const double C = std::pow(d.lambda2, a) /
                   ((1.0 - d.rho) * (a - 1.0) * std::pow(1.0 - d.rho1, a));
  return make_law("Mc", a - 1.0, C, L);
}

TailLaw tail_R12_given_R11_0(const TransformContext& ctx) {
  TailLaw law = tail_Mc(ctx);
  law.target = "R12_given_R11_0";
  return law;
}

TailLaw tail_H2_given_H1_0(const TransformContext& ctx) {
  const auto [a, L] = pareto_data(ctx, "H2_given_H1_0");
  const DerivedQuantities& d = ctx.derived();
  const double b = ctx.service().lst(d.lambda1).real();
  const double C = b / (1.0 - b) * std::pow(d.lambda2, a) /
                   std::pow(1.0 - d.rho1, a + 1.0);
  return make_law("H2_given_H1_0", a, C, L);
}

// P{Mb2 > j, Mb1 = 0} = sum_n (1 - rho1) rho1^n h0^n P{H2^(n) > j | H1 = 0}
// and the n-fold sum has tail ~ n times one summand, so the series sums to
// (1 - rho1) rho1 h0 / (1 - rho1 h0)^2 times the single-summand constant.
// Dividing by P{Mb1 = 0} = (1 - rho1) / (1 - rho1 h0) leaves the factor below.
TailLaw tail_Mb2_given_Mb1_0(const TransformContext& ctx) {
  const auto [a, L] = pareto_data(ctx, "Mb2_given_Mb1_0");
  const DerivedQuantities& d = ctx.derived();
  const double g = d.rho1 * d.h0;
  const double C = g / (1.0 - g) * tail_H2_given_H1_0(ctx).C;
  return make_law("Mb2_given_Mb1_0", a, C, L);
}

TailLaw tail_law_for(const TransformContext& ctx, Target target) {
  switch (target) {
    case Target::kR0: return tail_R0(ctx);
    case Target::kR11: return tail_R11(ctx);
    case Target::kR12: return tail_R12(ctx);
    case Target::kMc: return tail_Mc(ctx);
    case Target::kH2GivenH1Zero: return tail_H2_given_H1_0(ctx);
    case Target::kR12GivenR11Zero: return tail_R12_given_R11_0(ctx);
    case Target::kMb2GivenMb1Zero: return tail_Mb2_given_Mb1_0(ctx);
  }
  throw std::invalid_argument("unknown target");
}

SlopeFit fit_loglog(const Ccdf& ccdf, double j_lo, double j_hi, int points) {
  if (!(j_lo >= 1.0) || j_hi < 10.0 * j_lo) {
    throw std::invalid_argument("fit_loglog: need 1 <= j_lo and j_hi >= 10 j_lo");
  }
  if (j_hi >= static_cast<double>(ccdf.size())) {
    throw std::invalid_argument("fit_loglog: range exceeds ccdf length");
  }
  std::vector<double> xs;
  std::vector<double> ys;
  long last = -1;
  const double step = std::log(j_hi / j_lo) / (points - 1);
  for (int i = 0; i < points; ++i) {
    const long j = std::lround(j_lo * std::exp(step * i));
    if (j == last) continue;
    last = j;
    const double c = ccdf[static_cast<std::size_t>(j)];
    if (!(c > 0.0)) {
      throw std::invalid_argument("fit_loglog: ccdf not positive at j=" +
                                  std::to_string(j));
    }
    xs.push_back(std::log(static_cast<double>(j)));
    ys.push_back(std::log(c));
  }
  const auto n = static_cast<double>(xs.size());
  if (xs.size() < 10) {
    throw std::invalid_argument("fit_loglog: fewer than 10 distinct points");
  }
  double mx = 0.0;
  double my = 0.0;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    mx += xs[i];
    my += ys[i];
  }
  mx /= n;
  my /= n;
  double sxx = 0.0;
  double sxy = 0.0;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    sxx += (xs[i] - mx) * (xs[i] - mx);
    sxy += (xs[i] - mx) * (ys[i] - my);
  }
  SlopeFit fit;
  fit.slope = sxy / sxx;
  fit.intercept = my - fit.slope * mx;
  double ss = 0.0;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    const double r = ys[i] - fit.intercept - fit.slope * xs[i];
    ss += r * r;
  }
  fit.residual = std::sqrt(ss / n);
  fit.j_lo = j_lo;
  fit.j_hi = j_hi;
  fit.points = static_cast<int>(xs.size());
  return fit;
}

std::string to_json(const TailLaw& law) {
  nlohmann::json j = {{"target", law.target},
                      {"sigma", law.sigma},
                      {"C", law.C},
                      {"L", law.L}};
  return j.dump(2);
}

std::string to_json(const SlopeFit& fit) {
  nlohmann::json j = {{"slope", fit.slope},       {"intercept", fit.intercept},
                      {"j_lo", fit.j_lo},         {"j_hi", fit.j_hi},
                      {"residual", fit.residual}, {"points", fit.points}};
  return j.dump(2);
}

}  // namespace retrialq
