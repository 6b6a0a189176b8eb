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

#include "sslab/solvers.hpp"

#include <algorithm>
#include <bit>
#include <chrono>
#include <cmath>
#include <functional>
#include <json.hpp>
#include <map>
#include <numeric>
#include <set>
#include <tuple>

#include "sslab/errors.hpp"
#include "sslab/merge.hpp"

namespace sslab {

namespace {

using Clock = std::chrono::steady_clock;

std::int64_t elapsed_ms(Clock::time_point start) {
  return std::chrono::duration_cast<std::chrono::milliseconds>(Clock::now() - start).count();
}

double log2d(double x) { return std::log2(x); }

struct PackedSum {
  std::uint64_t v;
  std::uint64_t mask;
};

// All subset sums of a[lo, lo+len) modulo 2^n, indexed by subset mask.
std::vector<PackedSum> subset_sums(const SubsetSumInstance& inst, int lo, int len) {
  const std::uint64_t m = static_cast<std::uint64_t>(inst.mask());
  std::vector<PackedSum> out(std::size_t{1} << len);
  out[0] = {0, 0};
  for (std::uint64_t s = 1; s < out.size(); ++s) {
    const int bit = std::countr_zero(s);
    const auto prev = out[s & (s - 1)].v;
    out[s] = {(prev + static_cast<std::uint64_t>(inst.a[static_cast<size_t>(lo + bit)])) & m, s << lo};
  }
  return out;
}

SymbolVector from_mask(int n, std::uint64_t mask) {
  SymbolVector e(n);
  for (int i = 0; i < n; ++i)
    if (mask >> i & 1) e.set(i, 1);
  return e;
}

}  // namespace

std::string report_to_json(const SolveReport& report) {
  nlohmann::ordered_json j;
  j["algo"] = report.algo;
  j["n"] = report.n;
  j["seed"] = report.seed;
  j["success"] = report.success;
  j["retries"] = report.retries;
  auto& levels = j["levels"] = nlohmann::ordered_json::array();
  for (const auto& l : report.levels) {
    nlohmann::ordered_json jl;
    if (l.size_log2)
      jl["size_log2"] = *l.size_log2;
    else
      jl["size_log2"] = nullptr;
    jl["predicted_log2"] = l.predicted_log2;
    levels.push_back(std::move(jl));
  }
  if (report.solution) {
    auto& sol = j["solution"] = nlohmann::ordered_json::array();
    for (int i = 0; i < report.solution->size(); ++i) sol.push_back((*report.solution)[i]);
  } else {
    j["solution"] = nullptr;
  }
  j["millis"] = report.millis;
  return j.dump();
}

SolveReport solve_exhaustive(const SubsetSumInstance& inst) {
  if (inst.n > kMaxEnumerationBits) throw ResourceError("solve_exhaustive: n above 28");
  const auto start = Clock::now();
  SolveReport r;
  r.algo = "exhaustive";
  r.n = inst.n;
  const auto sols = enumerate_solutions(inst);
  if (!sols.empty()) {
    r.success = true;
    r.solution = sols.front();
  }
  r.millis = elapsed_ms(start);
  return r;
}

SolveReport solve_hs(const SubsetSumInstance& inst) {
  if (inst.n > kMaxHsBits) throw ResourceError("solve_hs: n above 48");
  const auto start = Clock::now();
  const int n = inst.n;
  const int half = n / 2;
  const std::uint64_t m = static_cast<std::uint64_t>(inst.mask());
  const auto t = static_cast<std::uint64_t>(inst.t);
  const auto left = subset_sums(inst, 0, half);
  auto right = subset_sums(inst, half, n - half);
  std::sort(right.begin(), right.end(), [](const PackedSum& x, const PackedSum& y) {
    return x.v != y.v ? x.v < y.v : x.mask < y.mask;
  });

  SolveReport r;
  r.algo = "hs";
  r.n = n;
  r.peak_entries = left.size() + right.size();
  r.levels = {{log2d(static_cast<double>(left.size())), static_cast<double>(half)},
              {log2d(static_cast<double>(right.size())), static_cast<double>(n - half)}};
  for (const auto& x : left) {
    const std::uint64_t want = (t - x.v) & m;
    auto it = std::lower_bound(right.begin(), right.end(), want, [](const PackedSum& y, std::uint64_t w) { return y.v < w; });
    if (it != right.end() && it->v == want) {
      r.success = true;
      r.solution = from_mask(n, x.mask | it->mask);
      break;
    }
  }
  r.millis = elapsed_ms(start);
  return r;
}

SolveReport solve_ss(const SubsetSumInstance& inst) {
  if (inst.n > kMaxSsBits) throw ResourceError("solve_ss: n above 56");
  const auto start = Clock::now();
  const int n = inst.n;
  const int q = n / 4;
  const int len[4] = {q, q, q, n - 3 * q};
  const int off[4] = {0, q, 2 * q, 3 * q};
  std::vector<PackedSum> Q[4];
  for (int k = 0; k < 4; ++k) Q[k] = subset_sums(inst, off[k], len[k]);
  const std::uint64_t m = static_cast<std::uint64_t>(inst.mask());
  const auto t = static_cast<std::uint64_t>(inst.t);
  const int c = q;
  const std::uint64_t cm = (std::uint64_t{1} << c) - 1;
  auto by_residue = [cm](const PackedSum& x, const PackedSum& y) {
    return (x.v & cm) != (y.v & cm) ? (x.v & cm) < (y.v & cm) : x.mask < y.mask;
  };
  std::sort(Q[1].begin(), Q[1].end(), by_residue);
  std::sort(Q[3].begin(), Q[3].end(), by_residue);

  SolveReport r;
  r.algo = "ss";
  r.n = n;
  std::uint64_t base = 0;
  for (const auto& list : Q) base += list.size();
  r.peak_entries = base;
  for (int k = 0; k < 4; ++k)
    r.levels.push_back({log2d(static_cast<double>(Q[k].size())), static_cast<double>(len[k])});

  // Pairs from (A, B) with sum == sigma mod 2^c, B sorted by residue.
  auto pairs = [&](const std::vector<PackedSum>& A, const std::vector<PackedSum>& B, std::uint64_t sigma,
                   std::vector<PackedSum>& out) {
    out.clear();
    for (const auto& x : A) {
      const std::uint64_t want = (sigma - x.v) & cm;
      auto lo = std::partition_point(B.begin(), B.end(), [&](const PackedSum& y) { return (y.v & cm) < want; });
      for (auto it = lo; it != B.end() && (it->v & cm) == want; ++it) out.push_back({(x.v + it->v) & m, x.mask | it->mask});
    }
  };
  std::vector<PackedSum> L12, L34;
  for (std::uint64_t sigma = 0; sigma <= cm; ++sigma) {
    ++r.residue_iterations;
    pairs(Q[0], Q[1], sigma, L12);
    pairs(Q[2], Q[3], (t - sigma) & cm, L34);
    r.peak_entries = std::max<std::uint64_t>(r.peak_entries, base + L12.size() + L34.size());
    if (r.success) continue;
    std::sort(L34.begin(), L34.end(), [](const PackedSum& x, const PackedSum& y) {
      return x.v != y.v ? x.v < y.v : x.mask < y.mask;
    });
    for (const auto& x : L12) {
      const std::uint64_t want = (t - x.v) & m;
      auto it = std::lower_bound(L34.begin(), L34.end(), want, [](const PackedSum& y, std::uint64_t w) { return y.v < w; });
      if (it != L34.end() && it->v == want) {
        r.success = true;
        r.solution = from_mask(n, x.mask | it->mask);
        break;
      }
    }
  }
  r.millis = elapsed_ms(start);
  return r;
}

// ---------------------------------------------------------------------------
// Merging trees

namespace {

SymbolCounts binary_target(int n) {
  const int w = (n + 1) / 2;
  return {0, n - w, w, 0};
}

// Counts of the half of level-(depth-2) list `index` on `len` coordinates.
SymbolCounts half_counts(const SymbolCounts& full, int index, bool left, int len) {
  SymbolCounts h;
  for (int s : {-1, 1, 2}) {
    const int lo = (full.of(s) + (index & 1)) / 2;
    h.of(s) = left ? lo : full.of(s) - lo;
  }
  h.zero = len - h.minus - h.one - h.two;
  if (h.zero < 0) throw DomainError("tree: level shape does not fit in a half");
  return h;
}

long double log2_count(const SymbolCounts& c) { return log2_big(multinomial(c)); }

double log2_prob(const SymbolCounts& a, const SymbolCounts& b, const SymbolCounts& target) {
  const BigRational p = filter_prob_exact(a.n(), a, b, target);
  if (p == 0) return -std::numeric_limits<double>::infinity();
  return static_cast<double>(log2_big(p));
}

}  // namespace

void TreeParams::validate() const {
  if (n < 8 || n > kMaxInstanceBits) throw DomainError("TreeParams: n out of range");
  if (depth < 3) throw DomainError("TreeParams: depth must be at least 3");
  const auto levels = static_cast<std::size_t>(depth - 1);
  if (shapes.size() != levels || counts.size() != levels || c_bits.size() != levels ||
      caps.size() != static_cast<std::size_t>(depth))
    throw DomainError("TreeParams: per-level arrays have the wrong length");
  if (counts[0] != binary_target(n)) throw DomainError("TreeParams: level 0 must be the weight round(n/2) binary shape");
  if (c_bits[0] != n) throw DomainError("TreeParams: level 0 constrains all n bits");
  for (std::size_t j = 0; j < levels; ++j) {
    if (counts[j].n() != n || counts[j].minus < 0 || counts[j].zero < 0 || counts[j].one < 0 || counts[j].two < 0)
      throw DomainError("TreeParams: counts at level " + std::to_string(j) + " do not describe length n");
    if (c_bits[j] < 0 || c_bits[j] > n) throw DomainError("TreeParams: constraint bits out of range");
    if (j > 0 && c_bits[j] > c_bits[j - 1]) throw DomainError("TreeParams: constraints must nest");
    if (j > 0 && caps[j] > 1 &&
        std::log2(static_cast<long double>(caps[j])) > log2_count(counts[j]) - c_bits[j] + 1e-9)
      throw DomainError("TreeParams: cap above the saturation bound at level " + std::to_string(j));
  }
  for (std::size_t j = 1; j < levels; ++j)
    if (!std::isfinite(log2_prob(counts[j], counts[j], counts[j - 1])))
      throw DomainError("TreeParams: level " + std::to_string(j) + " cannot sum into level " + std::to_string(j - 1));
  const int left = n / 2;
  for (int i = 0; i < 2; ++i) {
    half_counts(counts[levels - 1], i, true, left);
    half_counts(counts[levels - 1], i, false, n - left);
  }
}

TreeParams derive_tree_params(int n, const std::vector<DistributionShape>& shapes, const TreeOptions& opt) {
  if (n < kMinTreeBits || n > kMaxInstanceBits) throw DomainError("tree solvers need 32 <= n <= 127");
  TreeParams p;
  p.n = n;
  p.depth = static_cast<int>(shapes.size()) + 2;
  p.shapes.push_back({0, 0.5, 0});
  p.counts.push_back(binary_target(n));
  for (const auto& s : shapes) {
    p.shapes.push_back(s);
    p.counts.push_back(round_counts(n, s));
  }
  const auto levels = static_cast<std::size_t>(p.depth - 1);
  p.c_bits.assign(levels, n);
  for (std::size_t j = 1; j < levels; ++j) {
    const double lp = log2_prob(p.counts[j], p.counts[j], p.counts[j - 1]);
    if (!std::isfinite(lp))
      throw DomainError("derive_tree_params: level " + std::to_string(j) + " cannot sum into its parent");
    const double reps = 2 * static_cast<double>(log2_count(p.counts[j])) + lp - static_cast<double>(log2_count(p.counts[j - 1]));
    p.c_bits[j] = std::clamp(static_cast<int>(std::floor(reps - opt.margin_bits)), 0, p.c_bits[j - 1]);
  }
  p.max_entries = opt.max_entries;
  auto set_caps = [&] {
    p.caps.assign(levels + 1, 1);
    for (std::size_t j = 1; j < levels; ++j) {
      p.caps[j] = opt.max_entries;
      const long double sat = log2_count(p.counts[j]) - p.c_bits[j];
      if (sat < 62)
        p.caps[j] = std::min<std::uint64_t>(
            opt.max_entries, static_cast<std::uint64_t>(std::max<long double>(1, std::floor(std::exp2(sat)))));
    }
    p.caps[levels] = opt.half_cap;
  };
  set_caps();
  p.validate();

  // Loosen constraints until one attempt finds the solution often enough.
  const double full_log2 = static_cast<double>(log2_count(p.counts[0])) - n;
  auto evaluate = [&] {
    const auto pred = predicted_level_sizes(p);
    const double cost = *std::max_element(pred.begin(), pred.end() - 1);
    return std::make_pair(pred.back() - full_log2, cost);
  };
  auto [success, cost] = evaluate();
  const double cost_limit = std::log2(static_cast<double>(opt.max_entries));
  while (success < opt.min_success_log2) {
    std::optional<std::size_t> best;
    double best_score = 0, best_success = 0, best_cost = 0;
    for (std::size_t j = 1; j < levels; ++j) {
      if (p.c_bits[j] == 0 || (j + 1 < levels && p.c_bits[j] <= p.c_bits[j + 1])) continue;
      --p.c_bits[j];
      set_caps();
      const auto [s2, c2] = evaluate();
      ++p.c_bits[j];
      if (s2 <= success || c2 > cost_limit) continue;
      const double score = (s2 - success) / (std::max(c2 - cost, 0.0) + 0.1);
      if (!best || score > best_score) {
        best = j;
        best_score = score;
        best_success = s2;
        best_cost = c2;
      }
    }
    if (!best) break;
    --p.c_bits[*best];
    success = best_success;
    cost = best_cost;
  }
  set_caps();
  p.validate();
  return p;
}

TreeParams hgj_params(int n, const TreeOptions& opt) { return derive_tree_params(n, {{0, 0.25, 0}, {0, 0.125, 0}}, opt); }

TreeParams bcj_ext_params(int n, const TreeOptions& opt) {
  // Optimum of the classical {-1,0,1,2} tree.
  return derive_tree_params(n, {{0.0338, 0.25, 0.0042}, {0.0306, 0.125, 0.0005}, {0.0197, 0.0625, 0.0}}, opt);
}

std::vector<double> predicted_level_sizes(const TreeParams& p) {
  p.validate();
  const int D = p.depth;
  const auto deepest = static_cast<std::size_t>(D - 2);
  const int nl = p.n / 2, nr = p.n - nl;
  const std::uint64_t half_cap = p.caps.back();

  // Every list is a mixture of left-half count types; the right half follows
  // from the level totals. Halves are independent and uniform given the type.
  using TypeMix = std::map<SymbolCounts, long double>;
  std::map<std::tuple<SymbolCounts, SymbolCounts, SymbolCounts>, long double> cache;
  auto prob = [&](const SymbolCounts& a, const SymbolCounts& b, const SymbolCounts& t) {
    auto key = std::make_tuple(a, b, t);
    auto it = cache.find(key);
    if (it != cache.end()) return it->second;
    const long double v = filter_prob_exact(a.n(), a, b, t).get_d();
    cache.emplace(key, v);
    return v;
  };
  auto complement = [](const SymbolCounts& total, const SymbolCounts& part, int len) {
    SymbolCounts c{total.minus - part.minus, 0, total.one - part.one, total.two - part.two};
    c.zero = len - c.minus - c.one - c.two;
    return c;
  };
  auto size_of = [](const SymbolCounts& c) { return std::exp2(log2_count(c)); };

  std::vector<long double> size(static_cast<std::size_t>(D), 0);
  TypeMix variant[2];
  long double half_total = 0;
  for (int i = 0; i < 2; ++i) {
    const auto L = half_counts(p.counts[deepest], i, true, nl);
    const auto R = half_counts(p.counts[deepest], i, false, nr);
    long double hl = size_of(L), hr = size_of(R);
    if (half_cap != 0) {
      hl = std::min<long double>(hl, static_cast<long double>(half_cap));
      hr = std::min<long double>(hr, static_cast<long double>(half_cap));
    }
    half_total += hl + hr;
    variant[i][L] = hl * hr / std::exp2(static_cast<long double>(p.c_bits[deepest]));
  }
  size[static_cast<std::size_t>(D - 1)] = half_total / 4;
  size[deepest] = (variant[0].begin()->second + variant[1].begin()->second) / 2;

  TypeMix X = variant[0], Y = variant[1];
  for (std::size_t j = deepest; j-- > 0;) {
    const SymbolCounts& child = p.counts[j + 1];
    const SymbolCounts& T = p.counts[j];
    const long double scale = std::exp2(static_cast<long double>(p.c_bits[j + 1] - p.c_bits[j]));
    std::vector<SymbolCounts> targets;
    for (int m = 0; m <= T.minus; ++m)
      for (int w = 0; w <= T.two; ++w)
        for (int o = 0; o <= T.one; ++o) {
          SymbolCounts tl{m, nl - m - o - w, o, w};
          if (tl.zero < 0 || complement(T, tl, nr).zero < 0) continue;
          targets.push_back(tl);
        }
    TypeMix raw;
    for (const auto& [a, na] : X)
      for (const auto& [b, nb] : Y) {
        const auto ar = complement(child, a, nr), br = complement(child, b, nr);
        for (const auto& tl : targets) {
          const long double pl = prob(a, b, tl);
          if (pl == 0) continue;
          const long double pr = prob(ar, br, complement(T, tl, nr));
          if (pr == 0) continue;
          raw[tl] += na * nb * scale * pl * pr;
        }
      }
    TypeMix out;
    long double total = 0;
    for (const auto& [tl, r] : raw) {
      const long double cap = size_of(tl) * size_of(complement(T, tl, nr)) / std::exp2(static_cast<long double>(p.c_bits[j]));
      const long double v = cap * -std::expm1(-r / cap);
      out[tl] = v;
      total += v;
    }
    size[j] = total;
    X = out;
    Y = std::move(out);
  }
  std::vector<double> result;
  for (std::size_t j = static_cast<std::size_t>(D); j-- > 0;) result.push_back(static_cast<double>(std::log2(size[j])));
  return result;
}

namespace {

class TreeRun {
 public:
  TreeRun(const SubsetSumInstance& inst, const TreeParams& p, Rng& rng) : inst_(inst), p_(p), rng_(rng) {
    const int n = p.n;
    std::vector<int> perm(static_cast<std::size_t>(n));
    std::iota(perm.begin(), perm.end(), 0);
    for (int i = n - 1; i > 0; --i)
      std::swap(perm[static_cast<std::size_t>(i)], perm[rng_.below(static_cast<std::uint64_t>(i + 1))]);
    const int left = n / 2;
    left_.assign(perm.begin(), perm.begin() + left);
    right_.assign(perm.begin() + left, perm.end());
    std::sort(left_.begin(), left_.end());
    std::sort(right_.begin(), right_.end());

    const int D = p.depth;
    residues_.resize(static_cast<std::size_t>(D - 1));
    residues_[0] = {inst.t};
    for (std::size_t j = 1; j < residues_.size(); ++j) {
      const Word mask = low_mask(p.c_bits[j]);
      residues_[j].resize(std::size_t{1} << j);
      for (std::size_t i = 0; i < residues_[j - 1].size(); ++i) {
        const Word r = rng_.bits128(p.c_bits[j]);
        residues_[j][2 * i] = r;
        residues_[j][2 * i + 1] = (residues_[j - 1][i] - r) & mask;
      }
    }
    sums_.assign(static_cast<std::size_t>(D), 0);
    lists_.assign(static_cast<std::size_t>(D), 0);
  }

  SortedValueList run() { return build(0, 0); }

  std::vector<LevelSize> level_sizes(const std::vector<double>& predicted) const {
    std::vector<LevelSize> out;
    for (std::size_t j = sums_.size(); j-- > 0;) {
      LevelSize l;
      const double mean = lists_[j] ? sums_[j] / static_cast<double>(lists_[j]) : 0;
      if (mean > 0) l.size_log2 = std::log2(mean);
      l.predicted_log2 = predicted[sums_.size() - 1 - j];
      out.push_back(l);
    }
    return out;
  }

  std::uint64_t peak() const { return peak_; }

 private:
  void record(std::size_t level, std::size_t size) {
    sums_[level] += static_cast<double>(size);
    ++lists_[level];
  }

  void hold(std::size_t count) {
    live_ += count;
    peak_ = std::max(peak_, live_);
  }

  SortedValueList half_list(const SymbolCounts& counts, const std::vector<int>& coords, int key_bits) {
    const int len = static_cast<int>(coords.size());
    const BigInt total = multinomial(counts);
    const std::uint64_t cap = p_.caps.back();
    std::vector<SubknapsackEntry> entries;
    auto add = [&](const SymbolVector& h) {
      SymbolVector e(p_.n);
      for (int i = 0; i < len; ++i) e.set(coords[static_cast<std::size_t>(i)], h[i]);
      entries.push_back(make_entry(inst_, std::move(e)));
    };
    if (!total.fits_ulong_p() || (cap != 0 && total > cap)) {
      if (cap == 0) throw ResourceError("tree: half list too large to enumerate");
      // Floyd's sampling of cap distinct ranks.
      std::set<std::uint64_t> picked;
      const std::uint64_t N = total.fits_ulong_p() ? total.get_ui() : UINT64_MAX;
      for (std::uint64_t j = N - cap; j < N; ++j) {
        const std::uint64_t x = rng_.below(j + 1);
        if (!picked.insert(x).second) picked.insert(j);
      }
      for (auto x : picked) add(unrank_u64(len, counts, x));
    } else {
      const std::uint64_t N = total.get_ui();
      if (N > p_.max_entries) throw ResourceError("tree: half list too large");
      for (std::uint64_t x = 0; x < N; ++x) add(unrank_u64(len, counts, x));
    }
    return SortedValueList::from_entries(std::move(entries), key_bits);
  }

  SortedValueList build(std::size_t j, std::size_t i) {
    const std::size_t deepest = static_cast<std::size_t>(p_.depth - 2);
    const int out_bits = j == 0 ? 0 : p_.c_bits[j - 1];
    const Word s = residues_[j][i];
    if (j == deepest) {
      const auto& counts = p_.counts[j];
      auto L = half_list(half_counts(counts, static_cast<int>(i), true, static_cast<int>(left_.size())), left_,
                         p_.c_bits[j]);
      hold(L.size());
      auto R = half_list(half_counts(counts, static_cast<int>(i), false, static_cast<int>(right_.size())), right_,
                         p_.c_bits[j]);
      hold(R.size());
      record(j + 1, L.size());
      record(j + 1, R.size());
      auto merged = merge_and_filter(L, R, p_.c_bits[j], s, counts, p_.n, out_bits, guard(j));
      hold(merged.list.size());
      live_ -= L.size() + R.size();
      record(j, merged.list.size());
      return std::move(merged.list);
    }
    auto A = build(j + 1, 2 * i);
    auto B = build(j + 1, 2 * i + 1);
    auto merged = merge_and_filter(A, B, p_.c_bits[j], s, p_.counts[j], p_.n, out_bits, guard(j));
    hold(merged.list.size());
    live_ -= A.size() + B.size();
    record(j, merged.list.size());
    return std::move(merged.list);
  }

  std::uint64_t guard(std::size_t) const { return p_.max_entries; }

  const SubsetSumInstance& inst_;
  const TreeParams& p_;
  Rng& rng_;
  std::vector<int> left_, right_;
  std::vector<std::vector<Word>> residues_;
  std::vector<double> sums_;
  std::vector<std::uint64_t> lists_;
  std::uint64_t live_ = 0;
  std::uint64_t peak_ = 0;
};

}  // namespace

SolveReport solve_tree(const SubsetSumInstance& inst, const TreeParams& params, int max_retries, std::uint64_t seed,
                       const std::string& algo) {
  params.validate();
  if (params.n != inst.n) throw DomainError("solve_tree: parameters were derived for a different n");
  if (max_retries < 0) throw DomainError("solve_tree: negative retry budget");
  const auto predicted = predicted_level_sizes(params);
  for (double pl : predicted)
    if (pl > std::log2(static_cast<double>(params.max_entries)))
      throw ResourceError("solve_tree: predicted list size exceeds the memory budget");

  const auto start = Clock::now();
  SolveReport r;
  r.algo = algo;
  r.n = inst.n;
  r.seed = seed;
  const Rng master(seed);
  for (int attempt = 0; attempt <= max_retries; ++attempt) {
    Rng rng = master.split(static_cast<std::uint64_t>(attempt));
    TreeRun run(inst, params, rng);
    const auto final_list = run.run();
    r.levels = run.level_sizes(predicted);
    r.peak_entries = std::max(r.peak_entries, run.peak());
    r.retries = attempt;
    for (const auto& x : final_list) {
      if (verify_solution(inst, x.e)) {
        r.success = true;
        r.solution = x.e;
        break;
      }
    }
    if (r.success) break;
  }
  r.millis = elapsed_ms(start);
  return r;
}

SolveReport solve_hgj(const SubsetSumInstance& inst, const TreeParams& params, int max_retries, std::uint64_t seed) {
  if (params.depth != 4) throw DomainError("solve_hgj: depth must be 4");
  return solve_tree(inst, params, max_retries, seed, "hgj");
}

SolveReport solve_bcj_ext(const SubsetSumInstance& inst, const TreeParams& params, int max_retries,
                          std::uint64_t seed) {
  if (params.depth != 5 && params.depth != 4) throw DomainError("solve_bcj_ext: depth must be 5 (or 4 for the binary reduction)");
  return solve_tree(inst, params, max_retries, seed, "bcj-ext");
}

// ---------------------------------------------------------------------------
// Parameter files

std::string tree_params_to_json(const TreeParams& p) {
  nlohmann::ordered_json j;
  j["n"] = p.n;
  j["depth"] = p.depth;
  auto& shapes = j["shapes"] = nlohmann::ordered_json::array();
  for (const auto& s : p.shapes) shapes.push_back({{"alpha", s.alpha}, {"beta", s.beta}, {"gamma", s.gamma}});
  auto& counts = j["counts"] = nlohmann::ordered_json::array();
  for (const auto& c : p.counts) counts.push_back({{"minus", c.minus}, {"zero", c.zero}, {"one", c.one}, {"two", c.two}});
  j["c_bits"] = p.c_bits;
  j["caps"] = p.caps;
  j["max_entries"] = p.max_entries;
  if (p.split)
    j["split"] = *p.split;
  else
    j["split"] = nullptr;
  return j.dump();
}

TreeParams tree_params_from_json(const std::string& text) {
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(text);
  } catch (const nlohmann::json::parse_error& e) {
    throw DomainError(std::string("tree params: malformed JSON: ") + e.what());
  }
  if (!j.is_object()) throw DomainError("tree params: top level must be an object");
  static const std::set<std::string> known = {"n", "depth", "shapes", "counts", "c_bits", "caps", "max_entries", "split"};
  for (const auto& [key, _] : j.items())
    if (!known.count(key)) throw DomainError("tree params: unknown field '" + key + "'");
  TreeParams p;
  try {
    p.n = j.at("n").get<int>();
    p.depth = j.at("depth").get<int>();
    for (const auto& s : j.at("shapes"))
      p.shapes.push_back({s.at("alpha").get<double>(), s.at("beta").get<double>(), s.at("gamma").get<double>()});
    for (const auto& c : j.at("counts"))
      p.counts.push_back({c.at("minus").get<int>(), c.at("zero").get<int>(), c.at("one").get<int>(), c.at("two").get<int>()});
    p.c_bits = j.at("c_bits").get<std::vector<int>>();
    p.caps = j.at("caps").get<std::vector<std::uint64_t>>();
    if (j.contains("max_entries")) p.max_entries = j["max_entries"].get<std::uint64_t>();
    if (j.contains("split") && !j["split"].is_null()) p.split = j["split"].get<double>();
  } catch (const nlohmann::json::exception& e) {
    throw DomainError(std::string("tree params: ") + e.what());
  }
  p.validate();
  return p;
}

}  // namespace sslab
