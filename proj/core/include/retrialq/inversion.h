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

#ifndef RETRIALQ_INVERSION_H_
#define RETRIALQ_INVERSION_H_

#include <cstddef>
#include <optional>
#include <ostream>
#include <string>
#include <vector>

#include "retrialq/pgf.h"

namespace retrialq {

// Power-law description of P{X > j} used to bound aliasing:
// P{X > j} ~ scale * j^(-sigma).
struct PowerTail {
  double sigma;
  double scale;
};

struct Pmf {
  std::vector<double> masses;
  // Upper bound on the mass at indices >= N folded back onto 0..N-1.
  double alias_bound = 0.0;
  std::string source_label;
  // Smallest mass before clipping of rounding noise.
  double min_raw_mass = 0.0;
  // |(1/N) sum |P(w^k)|^2 - sum p_j^2|; zero up to rounding.
  double parseval_gap = 0.0;

  std::size_t size() const { return masses.size(); }
  double operator[](std::size_t j) const { return masses[j]; }
  double total() const;
  double mean() const;
};

struct Ccdf {
  // values[j] = P{X > j}.
  std::vector<double> values;
  std::string source_label;

  std::size_t size() const { return values.size(); }
  double operator[](std::size_t j) const { return values[j]; }
};

// Joint pmf on an n1 x n2 lattice, row-major in the first index.
struct Pmf2D {
  std::size_t n1 = 0;
  std::size_t n2 = 0;
  std::vector<double> masses;
  std::string source_label;
  double min_raw_mass = 0.0;

  double at(std::size_t i, std::size_t j) const { return masses[i * n2 + j]; }
  std::vector<double> marginal_first() const;
  std::vector<double> marginal_second() const;
};

inline constexpr double kNegativeMassTolerance = 1e-12;
inline constexpr double kParsevalWarnLevel = 1e-6;

// Lattice inversion on the unit circle: p_j = (1/N) sum_k P(w^k) w^{-jk}.
// N must be a power of two with N >= 2^10. The alias bound comes from `tail`
// when given, otherwise from 1 - sum p_j. Throws InversionError when a mass
// is below -1e-12 or the total leaves its admissible band.
Pmf invert(const PgfHandle& pgf, std::size_t n,
           std::optional<PowerTail> tail = std::nullopt);

// Same as invert, starting from precomputed circle values.
Pmf invert_values(const std::vector<Complex>& values, std::string label,
                  std::optional<PowerTail> tail = std::nullopt);

// Two-dimensional lattice inversion; n1 * n2 <= 2^16.
Pmf2D invert_joint(const PgfHandle& pgf, std::size_t n1, std::size_t n2);

// values[j] = sum_{i > j} p_i, accumulated from the far end.
Ccdf ccdf(const Pmf& pmf);

// E[X] from the one-sided secant (1 - P(1 - h)) / h, extrapolated over
// h = step / 2^i. Non-integer powers h^(sigma - 1), h^sigma, ... from a
// regularly varying tail of index `tail_index` are eliminated alongside the
// integer ones. Returns nullopt when tail_index <= 1 (mean not finite).
std::optional<double> mean_from_pgf(const PgfHandle& pgf, double step = 1e-2,
                                    std::optional<double> tail_index =
                                        std::nullopt);

double total_variation(const std::vector<double>& p,
                       const std::vector<double>& q, std::size_t count);

void write_csv(const Pmf& pmf, std::ostream& out);
void write_csv(const Ccdf& ccdf, std::ostream& out);
// Fixed-width decimal with 17 significant digits.
std::string format_double(double x);

}  // namespace retrialq

#endif  // RETRIALQ_INVERSION_H_
