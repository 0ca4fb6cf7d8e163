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

#ifndef RETRIALQ_QUADRATURE_H_
#define RETRIALQ_QUADRATURE_H_

#include <cmath>
#include <complex>
#include <cstddef>
#include <limits>
#include <algorithm>

#include <boost/math/quadrature/gauss.hpp>

#include "retrialq/errors.h"

namespace retrialq {

using Complex = std::complex<double>;

// Gauss-Legendre rule on the straight segment [from, to] of the complex
// plane. `f` maps Complex -> Complex.
template <unsigned Nodes, class F>
Complex gauss_segment(F&& f, Complex from, Complex to,
                      double* abs_integral = nullptr) {
  const Complex half = 0.5 * (to - from);
  const Complex mid = 0.5 * (to + from);
  auto g = [&](double t) { return f(mid + half * t); };
  double l1 = 0.0;
  const Complex out =
      half * boost::math::quadrature::gauss<double, Nodes>::integrate(g, &l1);
  if (abs_integral != nullptr) *abs_integral = std::abs(half) * l1;
  return out;
}

namespace detail {

template <unsigned Nodes, class F>
Complex adaptive_segment(F& f, Complex from, Complex to, Complex whole,
                         double tol, int depth, int max_depth) {
  const Complex mid = 0.5 * (from + to);
  double l1_left = 0.0;
  double l1_right = 0.0;
  const Complex left = gauss_segment<Nodes>(f, from, mid, &l1_left);
  const Complex right = gauss_segment<Nodes>(f, mid, to, &l1_right);
  const Complex refined = left + right;
  // Below a few ulps of the absolute integral the estimates are rounding
  // noise and further bisection cannot help.
  const double floor = 8.0 * std::numeric_limits<double>::epsilon() *
                       (l1_left + l1_right);
  if (std::abs(refined - whole) <= std::max(tol, floor)) return refined;
  if (depth >= max_depth) {
    throw ConvergenceError("adaptive quadrature: depth limit reached");
  }
  return adaptive_segment<Nodes>(f, from, mid, left, 0.5 * tol, depth + 1,
                                 max_depth) +
         adaptive_segment<Nodes>(f, mid, to, right, 0.5 * tol, depth + 1,
                                 max_depth);
}

}  // namespace detail

// Adaptive bisection along a straight complex segment. A panel is accepted
// when its single-panel and two-panel estimates differ by at most the panel's
// share of `tol`. Handles integrable endpoint singularities (e.g. |s|^0.5
// behaviour of heavy-tailed transforms at the origin) by local refinement.
template <unsigned Nodes = 32, class F>
Complex integrate_segment(F&& f, Complex from, Complex to, double tol,
                          int max_depth = 48) {
  if (from == to) return Complex(0.0, 0.0);
  const Complex whole = gauss_segment<Nodes>(f, from, to);
  return detail::adaptive_segment<Nodes>(f, from, to, whole, tol, 0,
                                         max_depth);
}

// Real half-line integral over [lo, inf) by geometrically growing panels,
// each integrated adaptively. Stops once a whole panel contributes below
// `tol`, after at least `min_panels` panels.
template <class F>
Complex integrate_half_line(F&& f, double lo, double first_width, double tol,
                            int min_panels = 4, int max_panels = 200) {
  Complex total(0.0, 0.0);
  double a = lo;
  double width = first_width;
  for (int i = 0; i < max_panels; ++i) {
    const Complex piece = integrate_segment<20>(f, Complex(a), Complex(a + width),
                                                tol);
    total += piece;
    a += width;
    width *= 2.0;
    if (i + 1 >= min_panels && std::abs(piece) < tol) return total;
  }
  throw ConvergenceError("half-line quadrature: panel limit reached");
}

}  // namespace retrialq

#endif  // RETRIALQ_QUADRATURE_H_
