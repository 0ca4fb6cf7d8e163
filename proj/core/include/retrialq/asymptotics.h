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

#ifndef RETRIALQ_ASYMPTOTICS_H_
#define RETRIALQ_ASYMPTOTICS_H_

#include <string>

#include "retrialq/inversion.h"
#include "retrialq/pgf.h"
#include "retrialq/transforms.h"

namespace retrialq {

// Regularly varying tail law P{X > j} ~ C L j^(-sigma).
struct TailLaw {
  std::string target;
  double sigma;
  double C;
  double L;

  double predict(double j) const;
  PowerTail power_tail() const { return {sigma, C * L}; }
};

struct SlopeFit {
  double slope;
  double intercept;
  double j_lo;
  double j_hi;
  // Root-mean-square residual of log c_j about the fitted line.
  double residual;
  int points;
};

// All laws below require Pareto service and throw LightTailError otherwise.
TailLaw tail_T_alpha(const TransformContext& ctx);
double c_kappa(const TransformContext& ctx);
// The same constant written through alpha1 and vartheta.
double c_kappa_busy_form(const TransformContext& ctx);
TailLaw tail_T_kappa(const TransformContext& ctx);
TailLaw tail_T_omega(const TransformContext& ctx);
TailLaw tail_T_tau(const TransformContext& ctx);
TailLaw tail_T_xi(const TransformContext& ctx);
TailLaw tail_T_gamma(const TransformContext& ctx);

TailLaw tail_R0(const TransformContext& ctx);
TailLaw tail_R11(const TransformContext& ctx);
TailLaw tail_R12(const TransformContext& ctx);
TailLaw tail_Mc(const TransformContext& ctx);
TailLaw tail_R12_given_R11_0(const TransformContext& ctx);
TailLaw tail_H2_given_H1_0(const TransformContext& ctx);
TailLaw tail_Mb2_given_Mb1_0(const TransformContext& ctx);

TailLaw tail_law_for(const TransformContext& ctx, Target target);

// Least squares of log c_j on log j at `points` log-spaced integer indices
// in [j_lo, j_hi]. Requires j_hi >= 10 j_lo, at least 10 distinct indices
// and c_j > 0 on the range.
SlopeFit fit_loglog(const Ccdf& ccdf, double j_lo, double j_hi,
                    int points = 40);

std::string to_json(const TailLaw& law);
std::string to_json(const SlopeFit& fit);

}  // namespace retrialq

#endif  // RETRIALQ_ASYMPTOTICS_H_
