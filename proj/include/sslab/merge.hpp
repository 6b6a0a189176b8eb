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

#include <compare>
#include <cstdint>
#include <map>
#include <optional>
#include <set>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "sslab/combinatorics.hpp"
#include "sslab/errors.hpp"
#include "sslab/instance.hpp"
#include "sslab/rng.hpp"

namespace sslab {

/// A subknapsack with its cached value e . a mod 2^n.
struct SubknapsackEntry {
  SymbolVector e;
  Word v = 0;

  bool operator==(const SubknapsackEntry&) const = default;
};

SubknapsackEntry make_entry(const SubsetSumInstance& inst, SymbolVector e);

/// Canonical total order: value, then rank_order of the vector.
std::strong_ordering entry_order(const SubknapsackEntry& x, const SubknapsackEntry& y);

/// Sorted contiguous list keyed by (v mod 2^bits, v, rank(e)), no duplicates.
class SortedValueList {
 public:
  explicit SortedValueList(int modulus_bits = 0) : bits_(modulus_bits) {}

  /// Sorts and deduplicates.
  static SortedValueList from_entries(std::vector<SubknapsackEntry> entries, int modulus_bits);

  int modulus_bits() const { return bits_; }
  Word residue(Word v) const { return v & low_mask(bits_); }

  std::size_t size() const { return entries_.size(); }
  bool empty() const { return entries_.empty(); }
  const SubknapsackEntry& operator[](std::size_t i) const { return entries_[i]; }
  auto begin() const { return entries_.begin(); }
  auto end() const { return entries_.end(); }
  std::span<const SubknapsackEntry> entries() const { return entries_; }

  /// Returns false when the vector is already present.
  bool insert(SubknapsackEntry x);
  /// Returns false when absent.
  bool erase(const SubknapsackEntry& x);
  bool contains(const SubknapsackEntry& x) const;

  /// All entries with v == r mod 2^bits, in order.
  std::span<const SubknapsackEntry> residue_range(Word r) const;

  const SubknapsackEntry& sample(Rng& rng) const;

  /// Same content keyed by a different modulus.
  SortedValueList rekeyed(int modulus_bits) const;

  bool operator==(const SortedValueList&) const = default;

 private:
  std::strong_ordering key_order(const SubknapsackEntry& x, const SubknapsackEntry& y) const;
  std::vector<SubknapsackEntry>::const_iterator lower(const SubknapsackEntry& x) const;

  int bits_ = 0;
  std::vector<SubknapsackEntry> entries_;
};

struct MergeStats {
  std::uint64_t merged_count = 0;
  std::uint64_t filtered_count = 0;
  std::uint64_t distinct_count = 0;
  std::uint64_t touches = 0;
};

/// Symbol-wise sum of two vectors if it has exactly the target counts.
std::optional<SymbolVector> filtered_sum(const SymbolVector& x, const SymbolVector& y, const SymbolCounts& target);

namespace detail {

/// Entries of a list ordered by v mod 2^bits, as pointers into the list.
class ResidueIndex {
 public:
  ResidueIndex(const SortedValueList& list, int bits);
  std::size_t size() const { return order_.size(); }
  const SubknapsackEntry& operator[](std::size_t i) const { return *order_[i]; }
  Word residue(std::size_t i) const { return order_[i]->v & mask_; }
  /// Half-open index range of entries with residue r.
  std::pair<std::size_t, std::size_t> range(Word r) const;

 private:
  std::vector<const SubknapsackEntry*> order_;
  Word mask_;
};

}  // namespace detail

/// Calls sink(x1, x2) for every pair in L1 x L2 with v1 + v2 == s mod 2^c_bits.
/// The outer loop runs over the shorter list in its sorted order and probes
/// the other by binary search, so the work is min(|L1|,|L2|) plus the output.
/// Each outer element, each probe and each streamed pair counts as one touch.
template <typename Sink>
void merge_join(const SortedValueList& L1, const SortedValueList& L2, int c_bits, Word s, Sink&& sink,
                MergeStats* stats = nullptr) {
  if (c_bits < 0 || c_bits > 128) throw DomainError("merge_join: c_bits out of range");
  if (L1.empty() || L2.empty()) return;
  const Word mask = low_mask(c_bits);
  const bool swap = L2.size() < L1.size();
  const SortedValueList& outer = swap ? L2 : L1;
  const detail::ResidueIndex inner(swap ? L1 : L2, c_bits);
  std::uint64_t merged = 0, touches = 0;
  for (const auto& x : outer) {
    touches += 2;
    const auto [lo, hi] = inner.range((s - x.v) & mask);
    for (std::size_t k = lo; k < hi; ++k) {
      ++merged;
      ++touches;
      if (swap)
        sink(inner[k], x);
      else
        sink(x, inner[k]);
    }
  }
  if (stats) {
    stats->merged_count += merged;
    stats->touches += touches;
  }
}

/// Materialized merge_join output as sum entries (tests and small lists).
std::vector<SubknapsackEntry> merge_join_collect(const SortedValueList& L1, const SortedValueList& L2, int c_bits,
                                                 Word s, int n);

/// Keeps the entries whose vectors have exactly the target counts.
std::vector<SubknapsackEntry> filter_to_distribution(std::span<const SubknapsackEntry> stream,
                                                     const SymbolCounts& target);
std::vector<SubknapsackEntry> filter_to_distribution(std::span<const SubknapsackEntry> stream,
                                                     const DistributionShape& target, int n);

struct MergeFilterResult {
  SortedValueList list;
  MergeStats stats;
};

/// Merge, filter toward target and deduplicate into a list keyed by out_bits.
/// Throws ResourceError when more than max_output pairs survive the filter.
MergeFilterResult merge_and_filter(const SortedValueList& L1, const SortedValueList& L2, int c_bits, Word s,
                                   const SymbolCounts& target, int n, int out_bits,
                                   std::uint64_t max_output = UINT64_MAX);

/// At most one entry per residue mod 2^bits; later inserts on an occupied
/// residue are dropped.
class UniqueModulusList {
 public:
  explicit UniqueModulusList(int modulus_bits);

  int modulus_bits() const { return bits_; }
  std::size_t size() const { return slots_.size(); }

  /// False when the residue was already occupied.
  bool insert(const SubknapsackEntry& x);
  bool erase(const SubknapsackEntry& x);
  /// Entries with v == t mod 2^sub_bits, sub_bits <= modulus_bits, in entry order.
  std::vector<SubknapsackEntry> query(int sub_bits, Word t) const;

 private:
  Word key(Word v) const;

  int bits_;
  // Keyed by the bit-reversed residue so that any low-bits condition is a
  // contiguous key range.
  std::map<Word, SubknapsackEntry> slots_;
};

/// Visible change to a bucket-modulus list.
struct BucketChange {
  SubknapsackEntry entry;
  bool added = false;

  bool operator==(const BucketChange&) const = default;
};

struct BucketOp {
  enum class Kind { Insert, Erase };
  Kind kind = Kind::Insert;
  SubknapsackEntry entry;
};

/// Backing list plus per-residue buckets holding up to B entries. A residue
/// whose backing count exceeds B has an empty bucket.
class BucketModulusList {
 public:
  struct Bucket {
    std::size_t shadow = 0;
    std::vector<SubknapsackEntry> entries;

    bool overflowed(std::size_t bound) const { return shadow > bound; }
    bool operator==(const Bucket&) const = default;
  };

  BucketModulusList(std::size_t bound, int modulus_bits);
  static BucketModulusList rebuild(std::size_t bound, int modulus_bits, std::span<const SubknapsackEntry> backing);

  std::size_t bound() const { return bound_; }
  int modulus_bits() const { return backing_.modulus_bits(); }
  const SortedValueList& backing() const { return backing_; }
  const std::map<Word, Bucket>& buckets() const { return buckets_; }
  std::size_t shadow_count(Word residue) const;
  bool overflowed(Word residue) const { return shadow_count(residue) > bound_; }
  std::span<const SubknapsackEntry> bucket(Word residue) const;
  std::size_t visible_size() const;

  /// Inserting a present vector is a no-op. Returns the visible changes.
  std::vector<BucketChange> insert(const SubknapsackEntry& x);
  /// Throws ContractError when x is not in the backing list.
  std::vector<BucketChange> erase(const SubknapsackEntry& x);

  bool operator==(const BucketModulusList&) const = default;

 private:
  std::size_t bound_;
  SortedValueList backing_;
  std::map<Word, Bucket> buckets_;
};

std::vector<BucketChange> bml_apply(BucketModulusList& bml, const BucketOp& op);

struct FilteredLevelConfig {
  int n = 0;
  std::size_t bound = 0;
  int bucket_bits = 0;
  int c_bits = 0;
  int sublist_bits = 0;
  Word s = 0;
  SymbolCounts target;

  void validate() const;
};

/// Config for lists of size 2^(list_log2 n) merged on c_bits with filtering
/// log-probability pf. The bucket modulus matches the list size, B defaults
/// to n, and the sublist cut is active only when 2l - 2c + pf > 0. Throws
/// ContractError outside the regime 2l - c + pf <= l, where a single update
/// yields at most one filtered pair on average.
FilteredLevelConfig derive_level_config(int n, double list_log2, int c_bits, double pf, const SymbolCounts& target,
                                        Word s = 0, std::size_t bound = 0);

/// A pair from the two lists whose sum passes the filter.
struct FilteredPair {
  SubknapsackEntry left;
  SubknapsackEntry right;
  SubknapsackEntry sum;

  bool operator==(const FilteredPair&) const = default;
};

struct FilteredPairOrder {
  bool operator()(const FilteredPair& x, const FilteredPair& y) const;
};

struct LevelUpdateStats {
  std::uint64_t cells_examined = 0;
  std::uint64_t touched = 0;
};

/// Two bucket-modulus lists and the filtered pairs drawn from their visible
/// content. A cell is a pair of sublists, one per side, whose residues sum to
/// s mod 2^c_bits; a cell with more than B filtered pairs contributes none.
class FilteredLevel {
 public:
  enum class Side { Left, Right };

  explicit FilteredLevel(FilteredLevelConfig cfg);
  /// From-scratch state for the given backing contents.
  static FilteredLevel rebuild(FilteredLevelConfig cfg, std::span<const SubknapsackEntry> left,
                               std::span<const SubknapsackEntry> right);

  const FilteredLevelConfig& config() const { return cfg_; }
  const BucketModulusList& list(Side side) const { return side == Side::Left ? left_ : right_; }
  const std::set<FilteredPair, FilteredPairOrder>& filtered() const { return filtered_; }

  LevelUpdateStats apply(Side side, const BucketOp& op);

  bool operator==(const FilteredLevel& other) const;

 private:
  using SublistKey = std::pair<Word, Word>;
  using Sublists = std::map<SublistKey, std::vector<SubknapsackEntry>>;

  SublistKey sublist_key(Word v) const;
  void apply_change(Side side, const BucketChange& change, LevelUpdateStats& stats);

  FilteredLevelConfig cfg_;
  BucketModulusList left_;
  BucketModulusList right_;
  Sublists left_subs_;
  Sublists right_subs_;
  std::set<FilteredPair, FilteredPairOrder> filtered_;
};

/// filtered_level_update on the left list.
LevelUpdateStats filtered_level_update(FilteredLevel& state, const BucketOp& op);

std::string dump_json(const SortedValueList& list);
std::string dump_json(const BucketModulusList& bml);

}  // namespace sslab
