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

#include <gmpxx.h>

#include <compare>
#include <cstdint>
#include <initializer_list>
#include <span>
#include <string>
#include <vector>

#include "sslab/filtering.hpp"
#include "sslab/shape.hpp"

namespace sslab {

using BigInt = mpz_class;
using BigRational = mpq_class;

/// A vector over small signed symbols. Stored vectors use {-1,0,1,2};
/// intermediate sums may hold anything in {-2,...,4}.
class SymbolVector {
 public:
  SymbolVector() = default;
  explicit SymbolVector(int n) : s_(static_cast<size_t>(n), 0) {}
  SymbolVector(std::initializer_list<int> values);
  explicit SymbolVector(std::vector<std::int8_t> values) : s_(std::move(values)) {}

  int size() const { return static_cast<int>(s_.size()); }
  int operator[](int i) const { return s_[static_cast<size_t>(i)]; }
  void set(int i, int value) { s_[static_cast<size_t>(i)] = static_cast<std::int8_t>(value); }
  const std::vector<std::int8_t>& data() const { return s_; }

  /// Symbol-wise integer sum.
  friend SymbolVector operator+(const SymbolVector& a, const SymbolVector& b);

  /// True when every symbol lies in {-1,0,1,2}.
  bool well_formed() const;
  /// Symbol counts; requires well_formed().
  SymbolCounts counts() const;
  bool binary() const;

  bool operator==(const SymbolVector&) const = default;
  std::string to_string() const;

 private:
  std::vector<std::int8_t> s_;
};

/// Order in which symbols are peeled off by rank/unrank.
inline constexpr int kRankSymbolOrder[3] = {1, -1, 2};

BigInt binomial(int n, int k);
BigInt multinomial(const SymbolCounts& counts);
BigInt dist_count_exact(int n, const DistributionShape& shape);

/// log2 of a positive big integer in extended precision.
long double log2_big(const BigInt& x);
long double log2_big(const BigRational& x);
/// log2 of a multinomial coefficient via lgamma.
long double log2_multinomial(const SymbolCounts& counts);

BigInt rank(const SymbolVector& v);
SymbolVector unrank(int n, const SymbolCounts& counts, const BigInt& index);
/// Word-sized variants for profiles whose multinomial is below 2^62.
std::uint64_t rank_u64(const SymbolVector& v);
SymbolVector unrank_u64(int n, const SymbolCounts& counts, std::uint64_t index);

/// The documented total order on well-formed vectors: length, then counts
/// (ones, minus-ones, twos), then rank.
std::strong_ordering rank_order(const SymbolVector& a, const SymbolVector& b);

/// Exact probability that a uniform pair from s1 x s2 sums into target, all
/// shapes rounded at length n. Throws ResourceError when the type
/// enumeration would exceed max_types.
BigRational filter_prob_exact(int n, const SymbolCounts& s1, const SymbolCounts& s2, const SymbolCounts& target,
                              std::uint64_t max_types = 50'000'000);
BigRational filter_prob_exact(int n, const DistributionShape& s1, const DistributionShape& s2,
                              const DistributionShape& target);

}  // namespace sslab
