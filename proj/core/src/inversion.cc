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

#include "retrialq/inversion.h"

#include <fftw3.h>

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <iostream>
#include <mutex>
#include <stdexcept>

#include <boost/math/special_functions/zeta.hpp>

#include "retrialq/errors.h"

namespace retrialq {
namespace {

// The FFTW planner is not reentrant.
std::mutex& planner_mutex() {
  static std::mutex m;
  return m;
}

bool is_power_of_two(std::size_t n) { return n != 0 && (n & (n - 1)) == 0; }

// In-place forward transform (sign -1) of a rank-1 or rank-2 array.
void forward_dft(std::vector<Complex>& data, std::size_t n1, std::size_t n2) {
  static_assert(sizeof(Complex) == sizeof(fftw_complex));
  auto* buf = reinterpret_cast<fftw_complex*>(data.data());
  fftw_plan plan;
  {
    std::lock_guard<std::mutex> lock(planner_mutex());
    plan = n2 == 0 ? fftw_plan_dft_1d(static_cast<int>(n1), buf, buf,
                                      FFTW_FORWARD, FFTW_ESTIMATE)
                   : fftw_plan_dft_2d(static_cast<int>(n1),
                                      static_cast<int>(n2), buf, buf,
                                      FFTW_FORWARD, FFTW_ESTIMATE);
  }
  if (plan == nullptr) throw InversionError("fftw planning failed");
  fftw_execute(plan);
  std::lock_guard<std::mutex> lock(planner_mutex());
  fftw_destroy_plan(plan);
}

// Takes real parts, records the smallest, clips tiny negatives.
double real_masses(const std::vector<Complex>& spectrum, double scale,
                   std::vector<double>& out, const std::string& label) {
  out.resize(spectrum.size());
  double min_raw = spectrum.empty() ? 0.0 : spectrum[0].real() * scale;
  for (std::size_t j = 0; j < spectrum.size(); ++j) {
    const double p = spectrum[j].real() * scale;
    min_raw = std::min(min_raw, p);
    if (std::isnan(p)) throw InversionError(label + ": NaN mass at " +
                                            std::to_string(j));
    out[j] = std::max(p, 0.0);
  }
  if (min_raw < -kNegativeMassTolerance) {
    throw InversionError(label + ": negative mass " + format_double(min_raw));
  }
  return min_raw;
}

double neumaier_sum(const std::vector<double>& v) {
  double sum = 0.0;
  double comp = 0.0;
  for (double x : v) {
    const double t = sum + x;
    comp += std::abs(sum) >= std::abs(x) ? (sum - t) + x : (x - t) + sum;
    sum = t;
  }
  return sum + comp;
}

}  // namespace

double Pmf::total() const { return neumaier_sum(masses); }

double Pmf::mean() const {
  double m = 0.0;
  for (std::size_t j = masses.size(); j-- > 1;) m += static_cast<double>(j) * masses[j];
  return m;
}

std::vector<double> Pmf2D::marginal_first() const {
  std::vector<double> out(n1, 0.0);
  for (std::size_t i = 0; i < n1; ++i) {
    for (std::size_t j = 0; j < n2; ++j) out[i] += at(i, j);
  }
  return out;
}

std::vector<double> Pmf2D::marginal_second() const {
  std::vector<double> out(n2, 0.0);
  for (std::size_t i = 0; i < n1; ++i) {
    for (std::size_t j = 0; j < n2; ++j) out[j] += at(i, j);
  }
  return out;
}

Pmf invert_values(const std::vector<Complex>& values, std::string label,
                  std::optional<PowerTail> tail) {
  const std::size_t n = values.size();
  if (!is_power_of_two(n) || n < (std::size_t{1} << 10)) {
    throw std::invalid_argument("inversion size must be a power of two >= 1024");
  }
  double energy = 0.0;
  for (const Complex& v : values) {
    if (!std::isfinite(v.real()) || !std::isfinite(v.imag())) {
      throw InversionError(label + ": non-finite generating function value");
    }
    energy += std::norm(v);
  }
  energy /= static_cast<double>(n);

  std::vector<Complex> spectrum = values;
  forward_dft(spectrum, n, 0);

  Pmf pmf;
  pmf.source_label = std::move(label);
  pmf.min_raw_mass = real_masses(spectrum, 1.0 / static_cast<double>(n),
                                 pmf.masses, pmf.source_label);
  double squares = 0.0;
  for (const Complex& c : spectrum) squares += std::norm(c);
  squares /= static_cast<double>(n) * static_cast<double>(n);
  pmf.parseval_gap = std::abs(energy - squares);
  if (pmf.parseval_gap > kParsevalWarnLevel) {
    std::cerr << "warning: " << pmf.source_label << ": Parseval gap "
              << pmf.parseval_gap << "\n";
  }

  const double total = pmf.total();
  if (tail) {
    pmf.alias_bound = tail->scale *
                      std::pow(static_cast<double>(n), -tail->sigma) *
                      boost::math::zeta(tail->sigma);
  } else {
    pmf.alias_bound = std::abs(1.0 - total);
  }
  if (total > 1.0 + 1e-9 || total < 1.0 - pmf.alias_bound - 1e-9) {
    throw InversionError(pmf.source_label + ": total mass " +
                         format_double(total) + " outside admissible band");
  }
  return pmf;
}

Pmf invert(const PgfHandle& pgf, std::size_t n, std::optional<PowerTail> tail) {
  if (pgf.arity() != 1) throw std::invalid_argument("invert needs arity 1");
  if (!is_power_of_two(n) || n < (std::size_t{1} << 10)) {
    throw std::invalid_argument("inversion size must be a power of two >= 1024");
  }
  return invert_values(pgf.on_circle(n), pgf.label(), tail);
}

Pmf2D invert_joint(const PgfHandle& pgf, std::size_t n1, std::size_t n2) {
  if (pgf.arity() != 2) throw std::invalid_argument("invert_joint needs arity 2");
  if (!is_power_of_two(n1) || !is_power_of_two(n2) ||
      n1 * n2 > (std::size_t{1} << 16)) {
    throw std::invalid_argument(
        "joint inversion sizes must be powers of two with n1*n2 <= 65536");
  }
  std::vector<Complex> spectrum = pgf.on_torus(n1, n2);
  for (const Complex& v : spectrum) {
    if (!std::isfinite(v.real()) || !std::isfinite(v.imag())) {
      throw InversionError(pgf.label() + ": non-finite generating function value");
    }
  }
  forward_dft(spectrum, n1, n2);
  Pmf2D out;
  out.n1 = n1;
  out.n2 = n2;
  out.source_label = pgf.label();
  out.min_raw_mass = real_masses(spectrum, 1.0 / static_cast<double>(n1 * n2),
                                 out.masses, out.source_label);
  return out;
}

Ccdf ccdf(const Pmf& pmf) {
  Ccdf out;
  out.source_label = pmf.source_label;
  const std::size_t n = pmf.masses.size();
  out.values.assign(n, 0.0);
  double sum = 0.0;
  double comp = 0.0;
  for (std::size_t j = n; j-- > 1;) {
    const double x = pmf.masses[j];
    const double t = sum + x;
    comp += sum >= x ? (sum - t) + x : (x - t) + sum;
    sum = t;
    out.values[j - 1] = sum + comp;
  }
  return out;
}

std::optional<double> mean_from_pgf(const PgfHandle& pgf, double step,
                                    std::optional<double> tail_index) {
  if (pgf.arity() != 1) throw std::invalid_argument("mean needs arity 1");
  if (tail_index && *tail_index <= 1.0) return std::nullopt;

  constexpr int kLevels = 10;
  std::vector<double> exponents;
  for (int k = 1; k <= kLevels; ++k) {
    if (tail_index) {
      const double e = *tail_index - 2.0 + k;
      if (e > 0.0) exponents.push_back(e);
    }
    exponents.push_back(k);
  }
  std::sort(exponents.begin(), exponents.end());
  exponents.erase(std::unique(exponents.begin(), exponents.end(),
                              [](double x, double y) {
                                return std::abs(x - y) < 1e-9;
                              }),
                  exponents.end());

  // Richardson table over h_i = step / 2^i.
  std::vector<double> row(kLevels);
  for (int i = 0; i < kLevels; ++i) {
    const double h = step / std::ldexp(1.0, i);
    row[i] = (1.0 - pgf(Complex(1.0 - h, 0.0)).real()) / h;
  }
  for (int k = 0; k + 1 < kLevels; ++k) {
    const double factor = std::pow(2.0, exponents[k]) - 1.0;
    for (int i = kLevels - 1; i > k; --i) {
      row[i] = row[i] + (row[i] - row[i - 1]) / factor;
    }
  }
  return row[kLevels - 1];
}

double total_variation(const std::vector<double>& p,
                       const std::vector<double>& q, std::size_t count) {
  double tv = 0.0;
  for (std::size_t j = 0; j < count; ++j) {
    const double a = j < p.size() ? p[j] : 0.0;
    const double b = j < q.size() ? q[j] : 0.0;
    tv += std::abs(a - b);
  }
  return 0.5 * tv;
}

std::string format_double(double x) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", x);
  return buf;
}

void write_csv(const Pmf& pmf, std::ostream& out) {
  out << "j,p_j\n";
  for (std::size_t j = 0; j < pmf.masses.size(); ++j) {
    out << j << ',' << format_double(pmf.masses[j]) << '\n';
  }
}

void write_csv(const Ccdf& c, std::ostream& out) {
  out << "j,c_j\n";
  for (std::size_t j = 0; j < c.values.size(); ++j) {
    out << j << ',' << format_double(c.values[j]) << '\n';
  }
}

}  // namespace retrialq
