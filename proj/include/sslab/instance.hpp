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

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "sslab/combinatorics.hpp"
#include "sslab/rng.hpp"

namespace sslab {

/// Knapsack values live in Z/2^n with n <= 127.
using Word = unsigned __int128;

inline constexpr int kMaxInstanceBits = 127;

inline Word low_mask(int bits) {
  if (bits <= 0) return 0;
  if (bits >= 128) return ~Word(0);
  return (Word(1) << bits) - 1;
}

std::string to_decimal(Word x);
/// Throws DomainError on anything but a plain nonnegative decimal that fits.
Word parse_decimal(const std::string& text);

struct SubsetSumInstance {
  int n = 0;
  std::vector<Word> a;
  Word t = 0;
  std::optional<SymbolVector> planted;

  Word mask() const { return low_mask(n); }
  /// e . a mod 2^n for any symbol vector, including non-binary sums.
  Word dot(const SymbolVector& e) const;

  bool operator==(const SubsetSumInstance&) const = default;
};

/// Planted instance of density one. Throws DomainError unless 8 <= n <= 127.
SubsetSumInstance random_instance(int n, std::uint64_t seed = kDefaultSeed);

/// True iff e is binary and e . a == t mod 2^n. Throws DomainError on a
/// length mismatch.
bool verify_solution(const SubsetSumInstance& inst, const SymbolVector& e);

/// Every binary solution, by Gray-code enumeration. Refuses n > 28 with a
/// ResourceError.
std::vector<SymbolVector> enumerate_solutions(const SubsetSumInstance& inst);
inline constexpr int kMaxEnumerationBits = 28;

std::string instance_to_json(const SubsetSumInstance& inst);
/// Strict parser: canonical fields only, values reduced and in range, planted
/// consistent with the target. Throws DomainError on any violation.
SubsetSumInstance instance_from_json(const std::string& text);

}  // namespace sslab
