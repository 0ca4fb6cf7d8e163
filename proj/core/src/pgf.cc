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

#include "retrialq/pgf.h"

#include <cmath>
#include <stdexcept>

#include "retrialq/errors.h"
#include "retrialq/parallel.h"
#include "retrialq/quadrature.h"

namespace retrialq {
namespace {

constexpr double kPatchRadius = 1e-8;

// y = lambda - lambda1 z1 - lambda2 z2, kept in Re(y) >= 0.
Complex split_argument(const DerivedQuantities& d, Complex z1, Complex z2) {
  Complex y = d.lambda1 * (1.0 - z1) + d.lambda2 * (1.0 - z2);
  if (y.real() < 0.0 && y.real() > -1e-12) y.real(0.0);
  return y;
}

std::vector<Complex> mirror_upper_half(std::size_t n,
                                       const std::function<Complex(std::size_t)>& f) {
  std::vector<Complex> out(n);
  const std::size_t half = n / 2;
  parallel_for(half + 1, [&](std::size_t k) {
    if (k < n) out[k] = f(k);
  });
  for (std::size_t k = 1; k < n - half; ++k) out[n - k] = std::conj(out[k]);
  return out;
}

}  // namespace

PgfHandle PgfHandle::unary(std::string label, Eval1 eval, CircleEval circle) {
  PgfHandle h;
  h.label_ = std::move(label);
  h.arity_ = 1;
  h.eval1_ = std::move(eval);
  h.circle_ = std::move(circle);
  return h;
}

PgfHandle PgfHandle::binary(std::string label, Eval2 eval) {
  PgfHandle h;
  h.label_ = std::move(label);
  h.arity_ = 2;
  h.eval2_ = std::move(eval);
  return h;
}

Complex PgfHandle::operator()(Complex z) const {
  if (arity_ != 1) throw std::logic_error(label_ + ": arity-2 handle");
  return eval1_(z);
}

Complex PgfHandle::operator()(Complex z1, Complex z2) const {
  if (arity_ != 2) throw std::logic_error(label_ + ": arity-1 handle");
  return eval2_(z1, z2);
}

std::vector<Complex> PgfHandle::on_circle(std::size_t n) const {
  if (arity_ != 1) throw std::logic_error(label_ + ": arity-2 handle");
  if (circle_) return circle_(n);
  const std::vector<Complex> z = unit_circle_grid(n);
  return mirror_upper_half(n, [&](std::size_t k) { return eval1_(z[k]); });
}

std::vector<Complex> PgfHandle::on_torus(std::size_t n1, std::size_t n2) const {
  if (arity_ != 2) throw std::logic_error(label_ + ": arity-1 handle");
  const std::vector<Complex> w1 = unit_circle_grid(n1);
  const std::vector<Complex> w2 = unit_circle_grid(n2);
  std::vector<Complex> out(n1 * n2);
  parallel_for(n1 * n2, [&](std::size_t i) {
    out[i] = eval2_(w1[i / n2], w2[i % n2]);
  });
  return out;
}

PgfHandle r0_pgf(ContextPtr ctx) {
  auto eval = [ctx](Complex z) {
    return ctx->tau(disk_to_half_plane(ctx->derived().lambda2, z));
  };
  auto circle = [ctx](std::size_t n) {
    const auto integral = ctx->kappa_integral_on_circle(n);
    const double psi = ctx->derived().psi;
    std::vector<Complex> out(n);
    for (std::size_t k = 0; k < n; ++k) out[k] = std::exp(-psi * (*integral)[k]);
    return out;
  };
  return PgfHandle::unary("R0", eval, circle);
}

Complex r0_integral_form(const TransformContext& ctx, Complex z) {
  const DerivedQuantities& d = ctx.derived();
  const double limit = d.vartheta / (1.0 - d.vartheta);
  auto integrand = [&ctx, limit](Complex u) -> Complex {
    const Complex gap = 1.0 - u;
    if (std::abs(gap) < kPatchRadius) return limit;
    const Complex one_minus_h = ctx.h_pair(u).complement;
    return one_minus_h / (gap - one_minus_h);
  };
  const Complex integral = integrate_segment<32>(
      integrand, z, Complex(1.0, 0.0), ctx.tolerances().quadrature_tol);
  return std::exp(-ctx.params().lambda / ctx.params().mu * integral);
}

PgfHandle ma_pgf(ContextPtr ctx) {
  return PgfHandle::binary("Ma", [ctx](Complex z1, Complex z2) {
    return ctx->service().equilibrium_lst(
        split_argument(ctx->derived(), z1, z2));
  });
}

Complex ma_rational_form(const TransformContext& ctx, Complex z1, Complex z2) {
  const DerivedQuantities& d = ctx.derived();
  const double q = ctx.params().q;
  const Complex denom = 1.0 - (1.0 - q) * z2 - q * z1;
  if (std::abs(denom) < kPatchRadius) return {1.0, 0.0};
  const Complex y = split_argument(d, z1, z2);
  return ctx.service().lst_pair(y).complement / (d.rho * denom);
}

Complex h_kernel(const TransformContext& ctx, Complex z1, Complex z2) {
  const DerivedQuantities& d = ctx.derived();
  const Complex y = split_argument(d, z1, z2);
  const LstPair h = ctx.h_pair(z2);
  const Complex gap = z1 - h.value;
  if (std::abs(gap) < kPatchRadius) {
    return -d.lambda1 / d.rho1 * ctx.service().lst_derivative(y);
  }
  // beta(y) - h = (1 - h) - (1 - beta(y)).
  const Complex numerator = h.complement - ctx.service().lst_pair(y).complement;
  return numerator / (d.rho1 * gap);
}

PgfHandle h_kernel_pgf(ContextPtr ctx) {
  return PgfHandle::binary("H", [ctx](Complex z1, Complex z2) {
    return h_kernel(*ctx, z1, z2);
  });
}

PgfHandle mb_pgf(ContextPtr ctx) {
  return PgfHandle::binary("Mb", [ctx](Complex z1, Complex z2) {
    const double r1 = ctx->derived().rho1;
    return (1.0 - r1) / (1.0 - r1 * h_kernel(*ctx, z1, z2));
  });
}

Complex mb_rational_form(const TransformContext& ctx, Complex z1, Complex z2) {
  const DerivedQuantities& d = ctx.derived();
  const Complex y = split_argument(d, z1, z2);
  const Complex numerator = (1.0 - z1) - ctx.h_pair(z2).complement;
  const Complex denominator = (1.0 - z1) - ctx.service().lst_pair(y).complement;
  if (std::abs(denominator) < kPatchRadius) {
    return (1.0 - d.rho1) / (1.0 - d.rho1 * h_kernel(ctx, z1, z2));
  }
  return (1.0 - d.rho1) * numerator / denominator;
}

PgfHandle mc_pgf(ContextPtr ctx) {
  return PgfHandle::unary("Mc", [ctx](Complex z) {
    return ctx->eta(disk_to_half_plane(ctx->derived().lambda2, z));
  });
}

Complex mc_rational_form(const TransformContext& ctx, Complex z) {
  const DerivedQuantities& d = ctx.derived();
  const Complex gap = 1.0 - z;
  if (std::abs(gap) < kPatchRadius) return {1.0, 0.0};
  // h(z) - z = (1 - z) - (1 - h(z)).
  const Complex denom = gap - ctx.h_pair(z).complement;
  return (1.0 - d.rho) / (1.0 - d.rho1) * gap / denom;
}

PgfHandle r1_pgf(ContextPtr ctx) {
  PgfHandle ma = ma_pgf(ctx);
  PgfHandle mb = mb_pgf(ctx);
  PgfHandle mc = mc_pgf(ctx);
  PgfHandle r0 = r0_pgf(ctx);
  return PgfHandle::binary("R1", [=](Complex z1, Complex z2) {
    return ma(z1, z2) * mb(z1, z2) * mc(z2) * r0(z2);
  });
}

PgfHandle marginal_r11_pgf(ContextPtr ctx) {
  return PgfHandle::unary("R11", [ctx](Complex z) {
    return ctx->xi(disk_to_half_plane(ctx->derived().lambda1, z));
  });
}

PgfHandle marginal_r12_pgf(ContextPtr ctx) {
  auto eval = [ctx](Complex z) {
    const Complex s = disk_to_half_plane(ctx->derived().lambda2, z);
    return ctx->kappa(s) * ctx->tau(s);
  };
  auto circle = [ctx](std::size_t n) {
    const auto integral = ctx->kappa_integral_on_circle(n);
    const std::vector<Complex> z = unit_circle_grid(n);
    const double psi = ctx->derived().psi;
    const double lambda2 = ctx->derived().lambda2;
    return mirror_upper_half(n, [&](std::size_t k) {
      return ctx->kappa(disk_to_half_plane(lambda2, z[k])) *
             std::exp(-psi * (*integral)[k]);
    });
  };
  return PgfHandle::unary("R12", eval, circle);
}

PgfHandle cond_r12_given_r11_0_pgf(ContextPtr ctx) {
  PgfHandle ma = ma_pgf(ctx);
  PgfHandle mb = mb_pgf(ctx);
  PgfHandle mc = mc_pgf(ctx);
  PgfHandle r0 = r0_pgf(ctx);
  const Complex zero(0.0, 0.0);
  const Complex one(1.0, 0.0);
  const Complex ma0 = ma(zero, one);
  const Complex mb0 = mb(zero, one);
  auto split_part = [=](Complex z) {
    return ma(zero, z) / ma0 * (mb(zero, z) / mb0) * mc(z);
  };
  auto eval = [=](Complex z) { return split_part(z) * r0(z); };
  auto circle = [=](std::size_t n) {
    const std::vector<Complex> r0_values = r0.on_circle(n);
    const std::vector<Complex> z = unit_circle_grid(n);
    return mirror_upper_half(
        n, [&](std::size_t k) { return split_part(z[k]) * r0_values[k]; });
  };
  return PgfHandle::unary("R12_given_R11_0", eval, circle);
}

PgfHandle cond_h2_given_h1_0_pgf(ContextPtr ctx) {
  return PgfHandle::unary("H2_given_H1_0", [ctx](Complex z) {
    return ctx->gamma_lst(disk_to_half_plane(ctx->derived().lambda2, z));
  });
}

Complex cond_h2_given_h1_0_kernel_form(const TransformContext& ctx, Complex z) {
  const Complex zero(0.0, 0.0);
  return h_kernel(ctx, zero, z) / h_kernel(ctx, zero, Complex(1.0, 0.0));
}

PgfHandle cond_mb2_given_mb1_0_pgf(ContextPtr ctx) {
  PgfHandle mb = mb_pgf(ctx);
  const Complex zero(0.0, 0.0);
  const Complex mb0 = mb(zero, Complex(1.0, 0.0));
  return PgfHandle::unary("Mb2_given_Mb1_0",
                          [=](Complex z) { return mb(zero, z) / mb0; });
}

std::string_view target_name(Target t) {
  switch (t) {
    case Target::kR0: return "R0";
    case Target::kR11: return "R11";
    case Target::kR12: return "R12";
    case Target::kMc: return "Mc";
    case Target::kH2GivenH1Zero: return "H2_given_H1_0";
    case Target::kR12GivenR11Zero: return "R12_given_R11_0";
    case Target::kMb2GivenMb1Zero: return "Mb2_given_Mb1_0";
  }
  return "?";
}

std::vector<Target> all_targets() {
  return {Target::kR0, Target::kR11, Target::kR12, Target::kMc,
          Target::kH2GivenH1Zero, Target::kR12GivenR11Zero,
          Target::kMb2GivenMb1Zero};
}

Target parse_target(std::string_view name) {
  for (Target t : all_targets()) {
    if (target_name(t) == name) return t;
  }
  throw std::invalid_argument("unknown target: " + std::string(name));
}

PgfHandle pgf_for_target(ContextPtr ctx, Target t) {
  switch (t) {
    case Target::kR0: return r0_pgf(ctx);
    case Target::kR11: return marginal_r11_pgf(ctx);
    case Target::kR12: return marginal_r12_pgf(ctx);
    case Target::kMc: return mc_pgf(ctx);
    case Target::kH2GivenH1Zero: return cond_h2_given_h1_0_pgf(ctx);
    case Target::kR12GivenR11Zero: return cond_r12_given_r11_0_pgf(ctx);
    case Target::kMb2GivenMb1Zero: return cond_mb2_given_mb1_0_pgf(ctx);
  }
  throw std::invalid_argument("unknown target");
}

}  // namespace retrialq
