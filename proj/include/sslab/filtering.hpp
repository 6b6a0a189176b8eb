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
#include <cmath>

#include "sslab/entropy.hpp"

namespace sslab {

/// Inputs D[0,a] and D[0,b], target D[0,a+b].
template <typename Scalar>
LogProb<Scalar> pf1(Scalar a, Scalar b) {
  if (a < Scalar(0) || b < Scalar(0)) throw DomainError("pf1: negative weight");
  if (a + b > Scalar(1) + kBoundaryClamp<Scalar>) return std::nullopt;
  return bin(std::max(Scalar(1) - a, Scalar(0)), std::min(b, Scalar(1) - a)) - entropy_h(b);
}

/// Inputs D[a,b] twice, target D[g, 2b].
template <typename Scalar>
LogProb<Scalar> pf2(Scalar a, Scalar b, Scalar g) {
  if (a < Scalar(0) || b < Scalar(0) || g < Scalar(0)) throw DomainError("pf2: negative parameter");
  if (g > Scalar(2) * a + kBoundaryClamp<Scalar>) return std::nullopt;
  try {
    Scalar k = a - g / Scalar(2);
    return bin(b + a, k) + bin(a, k) + trin(Scalar(1) - b - Scalar(2) * a, g / Scalar(2), b + g / Scalar(2)) -
           trin(Scalar(1), b + a, a);
  } catch (const DomainError&) {
    return std::nullopt;
  }
}

template <typename Scalar>
struct Pf2PlusRange {
  Scalar lo;
  Scalar hi;
};

/// Admissible interval for the number of (-1)+2 cancellations.
template <typename Scalar>
Pf2PlusRange<Scalar> pf2plus_range(Scalar a0, Scalar b, Scalar g0, Scalar a1, Scalar g1) {
  Scalar lo = std::max({Scalar(0), a1 + b - (Scalar(1) - a0 + g0) / Scalar(2), g1 - g0 / Scalar(2)});
  Scalar hi = std::min({a1 - a0 / Scalar(2), a0 / Scalar(2) + b - g0, g1});
  return {lo, hi};
}

/// The maximized expression at a fixed cancellation count x.
template <typename Scalar>
Scalar pf2plus_at(Scalar a0, Scalar b, Scalar g0, Scalar a1, Scalar g1, Scalar x) {
  const Scalar half = a0 / Scalar(2);
  const Scalar ones = a1 + b - Scalar(2) * g1;
  const Scalar rest = b - g0 - x + half;
  return trin(a1, x, half) + trin(ones, g0 - Scalar(2) * g1 + Scalar(2) * x, rest) + bin(g1, x) +
         quadrin(Scalar(1) - b - Scalar(2) * a1 + g1, g1 - x, half, rest) - quadrin(Scalar(1), a1, ones, g1);
}

namespace detail {

template <typename Scalar, typename F>
Scalar golden_max(F&& fn, Scalar lo, Scalar hi, Scalar tol, Scalar* argmax) {
  const Scalar r = (std::sqrt(Scalar(5)) - Scalar(1)) / Scalar(2);
  Scalar m1 = hi - r * (hi - lo), m2 = lo + r * (hi - lo);
  Scalar f1 = fn(m1), f2 = fn(m2);
  while (hi - lo > tol) {
    if (f1 < f2) {
      lo = m1;
      m1 = m2;
      f1 = f2;
      m2 = lo + r * (hi - lo);
      f2 = fn(m2);
    } else {
      hi = m2;
      m2 = m1;
      f2 = f1;
      m1 = hi - r * (hi - lo);
      f1 = fn(m1);
    }
  }
  Scalar x = (lo + hi) / Scalar(2);
  Scalar best = fn(x);
  for (Scalar e : {lo, hi}) {
    Scalar v = fn(e);
    if (v > best) {
      best = v;
      x = e;
    }
  }
  if (argmax) *argmax = x;
  return best;
}

}  // namespace detail

/// Inputs D[a1,b,g1] twice, target D[a0,2b,g0].
template <typename Scalar>
LogProb<Scalar> pf2plus(Scalar a0, Scalar b, Scalar g0, Scalar a1, Scalar g1, Scalar* argmax = nullptr) {
  if (a0 < Scalar(0) || b < Scalar(0) || g0 < Scalar(0) || a1 < Scalar(0) || g1 < Scalar(0))
    throw DomainError("pf2plus: negative parameter");
  auto [lo, hi] = pf2plus_range(a0, b, g0, a1, g1);
  if (lo > hi + kBoundaryClamp<Scalar>) return std::nullopt;
  hi = std::max(lo, hi);
  try {
    auto fn = [&](Scalar x) { return pf2plus_at(a0, b, g0, a1, g1, x); };
    return detail::golden_max(fn, lo, hi, Scalar(1e-10), argmax);
  } catch (const DomainError&) {
    return std::nullopt;
  }
}

/// Continuous extensions over all real inputs, for use inside the optimizer.
/// Feasibility of the underlying combinatorics must be enforced separately.
namespace relaxed {

template <typename Scalar>
Scalar pf1(Scalar a, Scalar b) {
  return bin(Scalar(1) - a, b) - h(b);
}

template <typename Scalar>
Scalar pf2plus_at(Scalar a0, Scalar b, Scalar g0, Scalar a1, Scalar g1, Scalar x) {
  const Scalar half = a0 / Scalar(2);
  const Scalar ones = a1 + b - Scalar(2) * g1;
  const Scalar rest = b - g0 - x + half;
  return trin(a1, x, half) + trin(ones, g0 - Scalar(2) * g1 + Scalar(2) * x, rest) + bin(g1, x) +
         quadrin(Scalar(1) - b - Scalar(2) * a1 + g1, g1 - x, half, rest) - quadrin(Scalar(1), a1, ones, g1);
}

template <typename Scalar>
Scalar pf2plus(Scalar a0, Scalar b, Scalar g0, Scalar a1, Scalar g1) {
  auto [lo, hi] = sslab::pf2plus_range(a0, b, g0, a1, g1);
  hi = std::max(lo, hi);
  auto fn = [&](Scalar x) { return pf2plus_at(a0, b, g0, a1, g1, x); };
  return sslab::detail::golden_max(fn, lo, hi, Scalar(1e-10), static_cast<Scalar*>(nullptr));
}

}  // namespace relaxed

}  // namespace sslab
