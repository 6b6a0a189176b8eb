// Copyright 2026 The sslab Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

#include <algorithm>
#include <array>
#include <cstdint>
#include <string>

#include "sslab/entropy.hpp"

namespace sslab {

/// Normalized symbol profile: alpha "-1"s, gamma "2"s and signed weight beta.
template <typename Scalar>
struct Shape {
  Scalar alpha = 0;
  Scalar beta = 0;
  Scalar gamma = 0;

  Scalar ones() const { return alpha + beta - Scalar(2) * gamma; }
  Scalar zeros() const { return Scalar(1) - Scalar(2) * alpha - beta + gamma; }

  bool valid(Scalar tol = Scalar(1e-12)) const {
    return alpha >= -tol && gamma >= -tol && ones() >= -tol && zeros() >= -tol;
  }

  /// Sum of two vectors of this shape, before any cancellation.
  Shape doubled() const { return {2 * alpha, 2 * beta, 2 * gamma}; }
};

using DistributionShape = Shape<double>;

/// Exact per-symbol counts of a length-n vector.
struct SymbolCounts {
  int minus = 0;
  int zero = 0;
  int one = 0;
  int two = 0;

  int n() const { return minus + zero + one + two; }
  int weight() const { return one - minus + 2 * two; }
  bool operator==(const SymbolCounts&) const = default;
  auto operator<=>(const SymbolCounts&) const = default;

  /// Count of symbol s in {-1,0,1,2}.
  int of(int s) const;
  int& of(int s);
  std::string to_string() const;
};

/// Rounds a shape to counts at length n. "-1"s, "2"s and the signed weight
/// are rounded to nearest (halves away from zero); the "1" count follows from
/// the weight and the "0" count absorbs the remainder.
SymbolCounts round_counts(int n, const DistributionShape& shape);

/// Inverse of round_counts up to rounding: the shape with exactly these counts.
DistributionShape shape_of(const SymbolCounts& counts);

/// log2 |D^n[shape]| / n, asymptotically.
template <typename Scalar>
Scalar dist_size_exponent(const Shape<Scalar>& s) {
  if (!s.valid()) throw DomainError("dist_size_exponent: invalid shape");
  return entropy_f(std::max(s.alpha, Scalar(0)), std::max(s.ones(), Scalar(0)), std::max(s.gamma, Scalar(0)));
}

}  // namespace sslab
