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

#ifndef RETRIALQ_ERRORS_H_
#define RETRIALQ_ERRORS_H_

#include <stdexcept>
#include <string>

namespace retrialq {

// Model parameters violate an admissibility or stability constraint.
class InvalidModelError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

// An iterative or quadrature routine failed to reach its tolerance.
class ConvergenceError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// A regular-variation tail law was requested for a light-tailed service.
class LightTailError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

// Transform inversion produced an inadmissible lattice distribution.
class InversionError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace retrialq

#endif  // RETRIALQ_ERRORS_H_
