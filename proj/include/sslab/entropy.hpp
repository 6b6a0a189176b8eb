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
#include <optional>
#include <stdexcept>
#include <string>

#include "sslab/errors.hpp"

namespace sslab {

// log2 of a probability; std::nullopt is the "impossible" outcome.
template <typename Scalar>
using LogProb = std::optional<Scalar>;

template <typename Scalar>
inline constexpr Scalar kBoundaryClamp = Scalar(1e-15);

namespace detail {

template <typename Scalar>
Scalar xlog(Scalar x) {
  if (x <= kBoundaryClamp<Scalar>) return Scalar(0);
  return -x * std::log2(x);
}

template <typename Scalar>
Scalar checked_part(Scalar x, const char* fn) {
  if (!(x >= -kBoundaryClamp<Scalar>) || !(x <= Scalar(1) + kBoundaryClamp<Scalar>))
    throw DomainError(std::string(fn) + ": argument outside [0,1]");
  return std::clamp(x, Scalar(0), Scalar(1));
}

template <typename Scalar>
Scalar checked_rest(Scalar rest, const char* fn) {
  if (!(rest >= -kBoundaryClamp<Scalar>)) throw DomainError(std::string(fn) + ": parts sum above 1");
  return std::max(rest, Scalar(0));
}

}  // namespace detail

template <typename Scalar>
Scalar entropy_h(Scalar x) {
  x = detail::checked_part(x, "entropy_h");
  return detail::xlog(x) + detail::xlog(Scalar(1) - x);
}

template <typename Scalar>
Scalar entropy_g(Scalar x, Scalar y) {
  x = detail::checked_part(x, "entropy_g");
  y = detail::checked_part(y, "entropy_g");
  Scalar rest = detail::checked_rest(Scalar(1) - x - y, "entropy_g");
  return detail::xlog(x) + detail::xlog(y) + detail::xlog(rest);
}

template <typename Scalar>
Scalar entropy_f(Scalar x, Scalar y, Scalar z) {
  x = detail::checked_part(x, "entropy_f");
  y = detail::checked_part(y, "entropy_f");
  z = detail::checked_part(z, "entropy_f");
  Scalar rest = detail::checked_rest(Scalar(1) - x - y - z, "entropy_f");
  return detail::xlog(x) + detail::xlog(y) + detail::xlog(z) + detail::xlog(rest);
}

/// omega * h(a / omega): log2 of C(omega n, a n) per unit n.
template <typename Scalar>
Scalar bin(Scalar omega, Scalar a) {
  if (omega < -kBoundaryClamp<Scalar> || a < -kBoundaryClamp<Scalar> || a > omega + kBoundaryClamp<Scalar>)
    throw DomainError("bin: part does not fit");
  if (omega <= kBoundaryClamp<Scalar>) return Scalar(0);
  return omega * entropy_h(std::clamp(a / omega, Scalar(0), Scalar(1)));
}

template <typename Scalar>
Scalar trin(Scalar omega, Scalar a, Scalar b) {
  if (omega < -kBoundaryClamp<Scalar> || a < -kBoundaryClamp<Scalar> || b < -kBoundaryClamp<Scalar> ||
      a + b > omega + kBoundaryClamp<Scalar>)
    throw DomainError("trin: parts do not fit");
  if (omega <= kBoundaryClamp<Scalar>) return Scalar(0);
  a = std::max(a, Scalar(0));
  b = std::max(b, Scalar(0));
  Scalar s = std::max(a + b, omega);
  return omega * entropy_g(a / s, b / s);
}

template <typename Scalar>
Scalar quadrin(Scalar omega, Scalar a, Scalar b, Scalar c) {
  if (omega < -kBoundaryClamp<Scalar> || a < -kBoundaryClamp<Scalar> || b < -kBoundaryClamp<Scalar> ||
      c < -kBoundaryClamp<Scalar> || a + b + c > omega + kBoundaryClamp<Scalar>)
    throw DomainError("quadrin: parts do not fit");
  if (omega <= kBoundaryClamp<Scalar>) return Scalar(0);
  a = std::max(a, Scalar(0));
  b = std::max(b, Scalar(0));
  c = std::max(c, Scalar(0));
  Scalar s = std::max(a + b + c, omega);
  return omega * entropy_f(a / s, b / s, c / s);
}

/// Relaxed variants used inside the optimizer: arguments are clipped instead
/// of rejected, so the functions are defined (and continuous) on all of R.
namespace relaxed {

template <typename Scalar>
Scalar xlog(Scalar x) {
  return detail::xlog(std::max(x, Scalar(0)));
}

template <typename Scalar>
Scalar h(Scalar x) {
  return xlog(x) + xlog(Scalar(1) - x);
}

template <typename Scalar>
Scalar g(Scalar x, Scalar y) {
  return xlog(x) + xlog(y) + xlog(Scalar(1) - x - y);
}

template <typename Scalar>
Scalar f(Scalar x, Scalar y, Scalar z) {
  return xlog(x) + xlog(y) + xlog(z) + xlog(Scalar(1) - x - y - z);
}

// omega * h(a/omega) = xlog(a) + xlog(omega - a) - xlog(omega), written
// without the division so it stays smooth near omega = 0.
template <typename Scalar>
Scalar bin(Scalar omega, Scalar a) {
  return xlog(a) + xlog(omega - a) - xlog(omega);
}

template <typename Scalar>
Scalar trin(Scalar omega, Scalar a, Scalar b) {
  return xlog(a) + xlog(b) + xlog(omega - a - b) - xlog(omega);
}

template <typename Scalar>
Scalar quadrin(Scalar omega, Scalar a, Scalar b, Scalar c) {
  return xlog(a) + xlog(b) + xlog(c) + xlog(omega - a - b - c) - xlog(omega);
}

}  // namespace relaxed

}  // namespace sslab
