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

#include "sslab/merge.hpp"

#include <algorithm>
#include <cmath>
#include <json.hpp>

namespace sslab {

SubknapsackEntry make_entry(const SubsetSumInstance& inst, SymbolVector e) {
  const Word v = inst.dot(e);
  return {std::move(e), v};
}

std::strong_ordering entry_order(const SubknapsackEntry& x, const SubknapsackEntry& y) {
  if (auto c = x.v <=> y.v; c != 0) return c;
  return rank_order(x.e, y.e);
}

// ---------------------------------------------------------------------------
// SortedValueList

std::strong_ordering SortedValueList::key_order(const SubknapsackEntry& x, const SubknapsackEntry& y) const {
  if (auto c = residue(x.v) <=> residue(y.v); c != 0) return c;
  return entry_order(x, y);
}

SortedValueList SortedValueList::from_entries(std::vector<SubknapsackEntry> entries, int modulus_bits) {
  SortedValueList out(modulus_bits);
  std::sort(entries.begin(), entries.end(),
            [&](const SubknapsackEntry& x, const SubknapsackEntry& y) { return out.key_order(x, y) < 0; });
  entries.erase(std::unique(entries.begin(), entries.end(),
                            [](const SubknapsackEntry& x, const SubknapsackEntry& y) { return x.e == y.e; }),
                entries.end());
  out.entries_ = std::move(entries);
  return out;
}

std::vector<SubknapsackEntry>::const_iterator SortedValueList::lower(const SubknapsackEntry& x) const {
  return std::lower_bound(entries_.begin(), entries_.end(), x,
                          [&](const SubknapsackEntry& a, const SubknapsackEntry& b) { return key_order(a, b) < 0; });
}

bool SortedValueList::insert(SubknapsackEntry x) {
  auto it = lower(x);
  if (it != entries_.end() && it->e == x.e) return false;
  entries_.insert(it, std::move(x));
  return true;
}

bool SortedValueList::erase(const SubknapsackEntry& x) {
  auto it = lower(x);
  if (it == entries_.end() || it->e != x.e) return false;
  entries_.erase(it);
  return true;
}

bool SortedValueList::contains(const SubknapsackEntry& x) const {
  auto it = lower(x);
  return it != entries_.end() && it->e == x.e;
}

std::span<const SubknapsackEntry> SortedValueList::residue_range(Word r) const {
  const auto lo = std::partition_point(entries_.begin(), entries_.end(),
                                       [&](const SubknapsackEntry& a) { return residue(a.v) < r; });
  const auto hi = std::partition_point(lo, entries_.end(), [&](const SubknapsackEntry& a) { return residue(a.v) == r; });
  return {lo, hi};
}

const SubknapsackEntry& SortedValueList::sample(Rng& rng) const {
  if (entries_.empty()) throw ContractError("SortedValueList::sample: empty list");
  return entries_[rng.below(entries_.size())];
}

SortedValueList SortedValueList::rekeyed(int modulus_bits) const {
  if (modulus_bits == bits_) return *this;
  return from_entries(entries_, modulus_bits);
}

// ---------------------------------------------------------------------------
// Merge and filter

std::optional<SymbolVector> filtered_sum(const SymbolVector& x, const SymbolVector& y, const SymbolCounts& target) {
  const int n = x.size();
  if (y.size() != n || target.n() != n) return std::nullopt;
  const auto* a = x.data().data();
  const auto* b = y.data().data();
  int count[4] = {0, 0, 0, 0};
  for (int i = 0; i < n; ++i) {
    const int s = a[i] + b[i];
    if (s < -1 || s > 2) return std::nullopt;
    ++count[s + 1];
  }
  if (count[0] != target.minus || count[2] != target.one || count[3] != target.two) return std::nullopt;
  std::vector<std::int8_t> sum(static_cast<size_t>(n));
  for (int i = 0; i < n; ++i) sum[static_cast<size_t>(i)] = static_cast<std::int8_t>(a[i] + b[i]);
  return SymbolVector(std::move(sum));
}

namespace detail {

ResidueIndex::ResidueIndex(const SortedValueList& list, int bits) : mask_(low_mask(bits)) {
  order_.reserve(list.size());
  for (const auto& x : list) order_.push_back(&x);
  if (list.modulus_bits() != bits)
    std::stable_sort(order_.begin(), order_.end(),
                     [&](const SubknapsackEntry* a, const SubknapsackEntry* b) { return (a->v & mask_) < (b->v & mask_); });
}

std::pair<std::size_t, std::size_t> ResidueIndex::range(Word r) const {
  const auto lo = std::partition_point(order_.begin(), order_.end(),
                                       [&](const SubknapsackEntry* a) { return (a->v & mask_) < r; });
  const auto hi = std::partition_point(lo, order_.end(), [&](const SubknapsackEntry* a) { return (a->v & mask_) == r; });
  return {static_cast<std::size_t>(lo - order_.begin()), static_cast<std::size_t>(hi - order_.begin())};
}

}  // namespace detail

std::vector<SubknapsackEntry> merge_join_collect(const SortedValueList& L1, const SortedValueList& L2, int c_bits,
                                                 Word s, int n) {
  std::vector<SubknapsackEntry> out;
  merge_join(L1, L2, c_bits, s, [&](const SubknapsackEntry& x, const SubknapsackEntry& y) {
    out.push_back({x.e + y.e, (x.v + y.v) & low_mask(n)});
  });
  return out;
}

std::vector<SubknapsackEntry> filter_to_distribution(std::span<const SubknapsackEntry> stream,
                                                     const SymbolCounts& target) {
  std::vector<SubknapsackEntry> out;
  for (const auto& x : stream)
    if (x.e.size() == target.n() && x.e.well_formed() && x.e.counts() == target) out.push_back(x);
  return out;
}

std::vector<SubknapsackEntry> filter_to_distribution(std::span<const SubknapsackEntry> stream,
                                                     const DistributionShape& target, int n) {
  return filter_to_distribution(stream, round_counts(n, target));
}

MergeFilterResult merge_and_filter(const SortedValueList& L1, const SortedValueList& L2, int c_bits, Word s,
                                   const SymbolCounts& target, int n, int out_bits, std::uint64_t max_output) {
  MergeFilterResult result;
  std::vector<SubknapsackEntry> kept;
  const Word mask = low_mask(n);
  merge_join(
      L1, L2, c_bits, s,
      [&](const SubknapsackEntry& x, const SubknapsackEntry& y) {
        auto sum = filtered_sum(x.e, y.e, target);
        if (!sum) return;
        if (++result.stats.filtered_count > max_output)
          throw ResourceError("merge_and_filter: filtered list exceeds its cap");
        kept.push_back({std::move(*sum), (x.v + y.v) & mask});
      },
      &result.stats);
  result.list = SortedValueList::from_entries(std::move(kept), out_bits);
  result.stats.distinct_count = result.list.size();
  return result;
}

// ---------------------------------------------------------------------------
// UniqueModulusList

UniqueModulusList::UniqueModulusList(int modulus_bits) : bits_(modulus_bits) {
  if (modulus_bits < 0 || modulus_bits > 127) throw DomainError("UniqueModulusList: modulus bits out of range");
}

Word UniqueModulusList::key(Word v) const {
  Word r = 0;
  for (int i = 0; i < bits_; ++i) r |= ((v >> i) & 1) << (bits_ - 1 - i);
  return r;
}

bool UniqueModulusList::insert(const SubknapsackEntry& x) { return slots_.try_emplace(key(x.v), x).second; }

bool UniqueModulusList::erase(const SubknapsackEntry& x) {
  auto it = slots_.find(key(x.v));
  if (it == slots_.end() || it->second.e != x.e) return false;
  slots_.erase(it);
  return true;
}

std::vector<SubknapsackEntry> UniqueModulusList::query(int sub_bits, Word t) const {
  if (sub_bits < 0 || sub_bits > bits_) throw DomainError("UniqueModulusList::query: sub-modulus must divide the modulus");
  const Word lo = key(t & low_mask(sub_bits));
  const Word hi = lo + (Word(1) << (bits_ - sub_bits));
  std::vector<SubknapsackEntry> out;
  for (auto it = slots_.lower_bound(lo); it != slots_.end() && it->first < hi; ++it) out.push_back(it->second);
  std::sort(out.begin(), out.end(), [](const auto& a, const auto& b) { return entry_order(a, b) < 0; });
  return out;
}

// ---------------------------------------------------------------------------
// BucketModulusList

BucketModulusList::BucketModulusList(std::size_t bound, int modulus_bits) : bound_(bound), backing_(modulus_bits) {
  if (bound == 0) throw DomainError("BucketModulusList: bound must be positive");
  if (modulus_bits < 0 || modulus_bits > 127) throw DomainError("BucketModulusList: modulus bits out of range");
}

BucketModulusList BucketModulusList::rebuild(std::size_t bound, int modulus_bits,
                                             std::span<const SubknapsackEntry> backing) {
  BucketModulusList out(bound, modulus_bits);
  out.backing_ = SortedValueList::from_entries({backing.begin(), backing.end()}, modulus_bits);
  const auto& list = out.backing_;
  for (std::size_t i = 0; i < list.size();) {
    const Word r = list.residue(list[i].v);
    std::size_t j = i;
    while (j < list.size() && list.residue(list[j].v) == r) ++j;
    Bucket& b = out.buckets_[r];
    b.shadow = j - i;
    if (b.shadow <= bound) b.entries.assign(list.begin() + static_cast<std::ptrdiff_t>(i), list.begin() + static_cast<std::ptrdiff_t>(j));
    i = j;
  }
  return out;
}

std::size_t BucketModulusList::shadow_count(Word residue) const {
  auto it = buckets_.find(residue);
  return it == buckets_.end() ? 0 : it->second.shadow;
}

std::span<const SubknapsackEntry> BucketModulusList::bucket(Word residue) const {
  auto it = buckets_.find(residue);
  if (it == buckets_.end()) return {};
  return it->second.entries;
}

std::size_t BucketModulusList::visible_size() const {
  std::size_t total = 0;
  for (const auto& [_, b] : buckets_) total += b.entries.size();
  return total;
}

std::vector<BucketChange> BucketModulusList::insert(const SubknapsackEntry& x) {
  if (!backing_.insert(x)) return {};
  const Word r = backing_.residue(x.v);
  Bucket& b = buckets_[r];
  const std::size_t before = b.shadow++;
  std::vector<BucketChange> changes;
  if (before < bound_) {
    auto it = std::lower_bound(b.entries.begin(), b.entries.end(), x,
                               [](const auto& a, const auto& c) { return entry_order(a, c) < 0; });
    b.entries.insert(it, x);
    changes.push_back({x, true});
  } else if (before == bound_) {
    for (auto& old : b.entries) changes.push_back({std::move(old), false});
    b.entries.clear();
  }
  return changes;
}

std::vector<BucketChange> BucketModulusList::erase(const SubknapsackEntry& x) {
  if (!backing_.erase(x)) throw ContractError("BucketModulusList::erase: entry not present");
  const Word r = backing_.residue(x.v);
  auto it = buckets_.find(r);
  Bucket& b = it->second;
  const std::size_t before = b.shadow--;
  std::vector<BucketChange> changes;
  if (before == bound_ + 1) {
    for (const auto& y : backing_.residue_range(r)) {
      b.entries.push_back(y);
      changes.push_back({y, true});
    }
  } else if (before <= bound_) {
    auto pos = std::find(b.entries.begin(), b.entries.end(), x);
    b.entries.erase(pos);
    changes.push_back({x, false});
  }
  if (b.shadow == 0) buckets_.erase(it);
  return changes;
}

std::vector<BucketChange> bml_apply(BucketModulusList& bml, const BucketOp& op) {
  return op.kind == BucketOp::Kind::Insert ? bml.insert(op.entry) : bml.erase(op.entry);
}

// ---------------------------------------------------------------------------
// Filtered level

void FilteredLevelConfig::validate() const {
  if (n <= 0 || n > kMaxInstanceBits) throw ContractError("FilteredLevelConfig: n out of range");
  if (bound == 0) throw ContractError("FilteredLevelConfig: bound must be positive");
  if (bucket_bits < 0 || bucket_bits > n) throw ContractError("FilteredLevelConfig: bucket bits out of range");
  if (c_bits < 0 || sublist_bits < 0 || c_bits + sublist_bits > n)
    throw ContractError("FilteredLevelConfig: constraint and sublist bits exceed n");
  if (target.n() != n) throw ContractError("FilteredLevelConfig: target length differs from n");
}

FilteredLevelConfig derive_level_config(int n, double list_log2, int c_bits, double pf, const SymbolCounts& target,
                                        Word s, std::size_t bound) {
  const double c = static_cast<double>(c_bits) / n;
  if (2 * list_log2 - c + pf > list_log2 + 1e-9)
    throw ContractError("derive_level_config: an update would produce more than one filtered pair on average");
  FilteredLevelConfig cfg;
  cfg.n = n;
  cfg.bound = bound == 0 ? static_cast<std::size_t>(n) : bound;
  cfg.bucket_bits = std::clamp(static_cast<int>(std::lround(list_log2 * n)), 0, n);
  cfg.c_bits = c_bits;
  const double cut = list_log2 - c + pf / 2;
  cfg.sublist_bits = 2 * list_log2 - 2 * c + pf > 0 ? std::max(0, static_cast<int>(std::ceil(cut * n - 1e-9))) : 0;
  cfg.sublist_bits = std::min(cfg.sublist_bits, n - c_bits);
  cfg.s = s;
  cfg.target = target;
  cfg.validate();
  return cfg;
}

bool FilteredPairOrder::operator()(const FilteredPair& x, const FilteredPair& y) const {
  if (auto c = entry_order(x.left, y.left); c != 0) return c < 0;
  return entry_order(x.right, y.right) < 0;
}

FilteredLevel::FilteredLevel(FilteredLevelConfig cfg)
    : cfg_((cfg.validate(), cfg)), left_(cfg.bound, cfg.bucket_bits), right_(cfg.bound, cfg.bucket_bits) {}

FilteredLevel::SublistKey FilteredLevel::sublist_key(Word v) const {
  return {v & low_mask(cfg_.c_bits), (v >> cfg_.c_bits) & low_mask(cfg_.sublist_bits)};
}

namespace {

using EntryVec = std::vector<SubknapsackEntry>;

void insert_sorted(EntryVec& vec, const SubknapsackEntry& x) {
  auto it = std::lower_bound(vec.begin(), vec.end(), x, [](const auto& a, const auto& b) { return entry_order(a, b) < 0; });
  vec.insert(it, x);
}

}  // namespace

FilteredLevel FilteredLevel::rebuild(FilteredLevelConfig cfg, std::span<const SubknapsackEntry> left,
                                     std::span<const SubknapsackEntry> right) {
  FilteredLevel out(cfg);
  out.left_ = BucketModulusList::rebuild(cfg.bound, cfg.bucket_bits, left);
  out.right_ = BucketModulusList::rebuild(cfg.bound, cfg.bucket_bits, right);
  for (const auto& [_, b] : out.left_.buckets())
    for (const auto& x : b.entries) insert_sorted(out.left_subs_[out.sublist_key(x.v)], x);
  for (const auto& [_, b] : out.right_.buckets())
    for (const auto& x : b.entries) insert_sorted(out.right_subs_[out.sublist_key(x.v)], x);

  const Word cmask = low_mask(cfg.c_bits);
  for (const auto& [lkey, lsub] : out.left_subs_) {
    const Word partner = (cfg.s - lkey.first) & cmask;
    for (auto it = out.right_subs_.lower_bound({partner, 0}); it != out.right_subs_.end() && it->first.first == partner;
         ++it) {
      std::vector<FilteredPair> cell;
      for (const auto& x : lsub)
        for (const auto& y : it->second)
          if (auto sum = filtered_sum(x.e, y.e, cfg.target))
            cell.push_back({x, y, {std::move(*sum), (x.v + y.v) & low_mask(cfg.n)}});
      if (cell.size() <= cfg.bound) out.filtered_.insert(cell.begin(), cell.end());
    }
  }
  return out;
}

void FilteredLevel::apply_change(Side side, const BucketChange& change, LevelUpdateStats& stats) {
  Sublists& mine = side == Side::Left ? left_subs_ : right_subs_;
  Sublists& other = side == Side::Left ? right_subs_ : left_subs_;
  const SublistKey key = sublist_key(change.entry.v);
  EntryVec& cur = mine[key];
  const Word partner = (cfg_.s - key.first) & low_mask(cfg_.c_bits);
  const Word nmask = low_mask(cfg_.n);

  auto make_pair = [&](const SubknapsackEntry& x, const SubknapsackEntry& y) -> std::optional<FilteredPair> {
    auto sum = filtered_sum(x.e, y.e, cfg_.target);
    if (!sum) return std::nullopt;
    SubknapsackEntry s{std::move(*sum), (x.v + y.v) & nmask};
    if (side == Side::Left) return FilteredPair{x, y, std::move(s)};
    return FilteredPair{y, x, std::move(s)};
  };
  auto cell_pairs = [&](const EntryVec& ours, const EntryVec& theirs, const SubknapsackEntry* skip) {
    std::vector<FilteredPair> out;
    for (const auto& x : ours) {
      if (skip && x == *skip) continue;
      for (const auto& y : theirs)
        if (auto p = make_pair(x, y)) out.push_back(std::move(*p));
    }
    return out;
  };

  for (auto it = other.lower_bound({partner, 0}); it != other.end() && it->first.first == partner; ++it) {
    ++stats.cells_examined;
    const EntryVec& theirs = it->second;
    std::vector<FilteredPair> with_entry;
    for (const auto& y : theirs)
      if (auto p = make_pair(change.entry, y)) with_entry.push_back(std::move(*p));
    const std::size_t rest = cell_pairs(cur, theirs, change.added ? nullptr : &change.entry).size();
    const std::size_t before = change.added ? rest : rest + with_entry.size();
    const std::size_t after = change.added ? rest + with_entry.size() : rest;
    const std::size_t B = cfg_.bound;
    if (before > B && after <= B) {
      for (auto& p : cell_pairs(cur, theirs, &change.entry)) filtered_.insert(std::move(p));
      stats.touched += after;
    } else if (before <= B && after > B) {
      for (const auto& p : cell_pairs(cur, theirs, nullptr)) filtered_.erase(p);
      stats.touched += before;
    } else if (before <= B && after <= B) {
      for (auto& p : with_entry) {
        if (change.added)
          filtered_.insert(std::move(p));
        else
          filtered_.erase(p);
      }
      stats.touched += with_entry.size();
    }
  }

  if (change.added) {
    insert_sorted(cur, change.entry);
  } else {
    cur.erase(std::find(cur.begin(), cur.end(), change.entry));
    if (cur.empty()) mine.erase(key);
  }
}

LevelUpdateStats FilteredLevel::apply(Side side, const BucketOp& op) {
  LevelUpdateStats stats;
  BucketModulusList& bml = side == Side::Left ? left_ : right_;
  for (const auto& change : bml_apply(bml, op)) apply_change(side, change, stats);
  return stats;
}

bool FilteredLevel::operator==(const FilteredLevel& other) const {
  return left_ == other.left_ && right_ == other.right_ && left_subs_ == other.left_subs_ &&
         right_subs_ == other.right_subs_ && filtered_ == other.filtered_;
}

LevelUpdateStats filtered_level_update(FilteredLevel& state, const BucketOp& op) {
  return state.apply(FilteredLevel::Side::Left, op);
}

// ---------------------------------------------------------------------------
// Debug dumps

namespace {

nlohmann::ordered_json entry_json(const SubknapsackEntry& x) {
  nlohmann::ordered_json j;
  j["e"] = x.e.to_string();
  j["v"] = to_decimal(x.v);
  return j;
}

}  // namespace

std::string dump_json(const SortedValueList& list) {
  nlohmann::ordered_json j;
  j["modulus_bits"] = list.modulus_bits();
  auto& arr = j["entries"] = nlohmann::ordered_json::array();
  for (const auto& x : list) arr.push_back(entry_json(x));
  return j.dump();
}

std::string dump_json(const BucketModulusList& bml) {
  nlohmann::ordered_json j;
  j["bound"] = bml.bound();
  j["modulus_bits"] = bml.modulus_bits();
  auto& buckets = j["buckets"] = nlohmann::ordered_json::array();
  for (const auto& [r, b] : bml.buckets()) {
    nlohmann::ordered_json jb;
    jb["residue"] = to_decimal(r);
    jb["shadow"] = b.shadow;
    auto& arr = jb["entries"] = nlohmann::ordered_json::array();
    for (const auto& x : b.entries) arr.push_back(entry_json(x));
    buckets.push_back(std::move(jb));
  }
  return j.dump();
}

}  // namespace sslab
