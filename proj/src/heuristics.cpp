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

#include "sslab/heuristics.hpp"

#include <algorithm>
#include <atomic>
#include <boost/math/distributions/chi_squared.hpp>
#include <cmath>
#include <functional>
#include <json.hpp>
#include <thread>

#include "sslab/errors.hpp"
#include "sslab/filtering.hpp"
#include "sslab/merge.hpp"

namespace sslab {

extern const char* const kLabConfigJson;

namespace {

using ojson = nlohmann::ordered_json;

void parallel_for(int count, int threads, const std::function<void(int)>& fn) {
  threads = std::clamp(threads, 1, std::max(1, count));
  if (threads == 1) {
    for (int i = 0; i < count; ++i) fn(i);
    return;
  }
  std::atomic<int> next{0};
  std::vector<std::thread> pool;
  for (int t = 0; t < threads; ++t)
    pool.emplace_back([&] {
      for (int i = next++; i < count; i = next++) fn(i);
    });
  for (auto& th : pool) th.join();
}

std::vector<Word> random_knapsack(int n, Rng& rng) {
  std::vector<Word> a(static_cast<std::size_t>(n));
  for (auto& x : a) x = rng.bits128(n);
  return a;
}

void check_trials(int trials, const char* what) {
  if (trials < 30) throw DomainError(std::string(what) + ": need at least 30 trials");
}

void check_bits(int n, const char* what) {
  if (n < 2 || n > kMaxInstanceBits) throw DomainError(std::string(what) + ": n out of range");
}

double log2_of(const BigRational& x) { return static_cast<double>(log2_big(x)); }

// Exact share of [0, total) falling into each of k equal rank intervals.
std::vector<BigInt> bucket_sizes(const BigInt& total, int k) {
  std::vector<BigInt> out;
  BigInt prev = 0;
  for (int i = 1; i <= k; ++i) {
    BigInt hi = (total * i + k - 1) / k;
    out.push_back(hi - prev);
    prev = hi;
  }
  return out;
}

int bucket_of(const BigInt& r, const BigInt& total, int k) {
  const BigInt b = (r * k) / total;
  return static_cast<int>(b.get_si());
}

SymbolVector slice(const SymbolVector& v, int from, int to) {
  SymbolVector out(to - from);
  for (int i = from; i < to; ++i) out.set(i - from, v[i]);
  return out;
}

SymbolVector embed(const SymbolVector& half, int n, int offset) {
  SymbolVector out(n);
  for (int i = 0; i < half.size(); ++i) out.set(offset + i, half[i]);
  return out;
}

SymbolCounts add_counts(const SymbolCounts& x, const SymbolCounts& y) {
  return {x.minus + y.minus, x.zero + y.zero, x.one + y.one, x.two + y.two};
}

double mean(const std::vector<double>& xs) {
  double s = 0;
  for (double x : xs) s += x;
  return xs.empty() ? 0 : s / static_cast<double>(xs.size());
}

double stddev(const std::vector<double>& xs) {
  if (xs.size() < 2) return 0;
  const double m = mean(xs);
  double s = 0;
  for (double x : xs) s += (x - m) * (x - m);
  return std::sqrt(s / static_cast<double>(xs.size() - 1));
}

}  // namespace

SymbolVector random_vector(int n, const SymbolCounts& counts, Rng& rng) {
  if (counts.n() != n) throw DomainError("random_vector: counts do not sum to n");
  std::vector<std::int8_t> s;
  s.reserve(static_cast<std::size_t>(n));
  for (int sym : {-1, 0, 1, 2}) s.insert(s.end(), static_cast<std::size_t>(counts.of(sym)), static_cast<std::int8_t>(sym));
  for (int i = n - 1; i > 0; --i)
    std::swap(s[static_cast<std::size_t>(i)], s[rng.below(static_cast<std::uint64_t>(i) + 1)]);
  return SymbolVector(std::move(s));
}

// ---------------------------------------------------------------------------
// List-size heuristic

Heuristic1Report check_heuristic1(const Heuristic1Config& cfg, const LabThresholds& th, int threads) {
  const char* what = "check_heuristic1";
  check_bits(cfg.n, what);
  check_trials(cfg.trials, what);
  if (cfg.c_bits < 0 || cfg.c_bits > cfg.n) throw DomainError("check_heuristic1: c_bits out of range");
  if (cfg.list_size == 0) throw DomainError("check_heuristic1: empty lists");
  if (th.chi2_buckets < 2) throw DomainError("check_heuristic1: need at least two buckets");
  const int n = cfg.n, half = n / 2;
  const bool disjoint = cfg.left.support != Support::Full || cfg.right.support != Support::Full;
  if (disjoint && (cfg.left.support == Support::Full || cfg.right.support == Support::Full ||
                   cfg.left.support == cfg.right.support))
    throw DomainError("check_heuristic1: supports must be both full or opposite halves");

  auto counts_of = [&](const ListSpec& spec) {
    if (spec.support == Support::Full) return round_counts(n, spec.shape);
    return round_counts(spec.support == Support::Left ? half : n - half, spec.shape);
  };
  const SymbolCounts c_left = counts_of(cfg.left), c_right = counts_of(cfg.right);
  const SymbolCounts target = round_counts(n, cfg.target);

  // Coordinates [0, half) and [half, n) for disjoint supports.
  SymbolCounts first{}, second{};
  BigRational p;
  if (disjoint) {
    first = cfg.left.support == Support::Left ? c_left : c_right;
    second = cfg.left.support == Support::Left ? c_right : c_left;
    p = add_counts(first, second) == target ? 1 : 0;
  } else {
    p = filter_prob_exact(n, c_left, c_right, target);
  }
  if (p == 0) throw DomainError("check_heuristic1: no pair of the input shapes sums into the target");
  const double p_d = p.get_d();

  Heuristic1Report rep;
  rep.name = cfg.name;
  rep.n = n;
  rep.seed = cfg.seed;
  rep.trials = cfg.trials;
  rep.filter_log2 = log2_of(p);

  const int K = th.chi2_buckets;
  const BigInt total = disjoint ? BigInt(multinomial(first) * multinomial(second)) : multinomial(target);
  const BigInt second_total = disjoint ? multinomial(second) : BigInt(1);

  struct Trial {
    double expected = 0;
    std::uint64_t pairs = 0;
    std::vector<std::uint64_t> buckets;
  };
  std::vector<Trial> trials(static_cast<std::size_t>(cfg.trials));
  const Rng root(cfg.seed);
  parallel_for(cfg.trials, threads, [&](int t) {
    Rng rng = root.split(static_cast<std::uint64_t>(t));
    SubsetSumInstance inst;
    inst.n = n;
    inst.a = random_knapsack(n, rng);
    const Word s = rng.bits128(cfg.c_bits);
    auto sample = [&](const ListSpec& spec, const SymbolCounts& counts) {
      std::vector<SubknapsackEntry> out;
      out.reserve(cfg.list_size);
      for (std::size_t i = 0; i < cfg.list_size; ++i) {
        SymbolVector e;
        if (spec.support == Support::Full)
          e = random_vector(n, counts, rng);
        else if (spec.support == Support::Left)
          e = embed(random_vector(half, counts, rng), n, 0);
        else
          e = embed(random_vector(n - half, counts, rng), n, half);
        out.push_back(make_entry(inst, std::move(e)));
      }
      return SortedValueList::from_entries(std::move(out), cfg.c_bits);
    };
    const auto L1 = sample(cfg.left, c_left);
    const auto L2 = sample(cfg.right, c_right);
    Trial& tr = trials[static_cast<std::size_t>(t)];
    tr.buckets.assign(static_cast<std::size_t>(K), 0);
    tr.expected = static_cast<double>(L1.size()) * static_cast<double>(L2.size()) * std::ldexp(1.0, -cfg.c_bits) * p_d;
    merge_join(L1, L2, cfg.c_bits, s, [&](const SubknapsackEntry& x, const SubknapsackEntry& y) {
      const auto sum = filtered_sum(x.e, y.e, target);
      if (!sum) return;
      ++tr.pairs;
      BigInt r;
      if (disjoint)
        r = rank(slice(*sum, 0, half)) * second_total + rank(slice(*sum, half, n));
      else
        r = rank(*sum);
      ++tr.buckets[static_cast<std::size_t>(bucket_of(r, total, K))];
    });
  });

  std::vector<double> expected, observed;
  std::vector<std::uint64_t> buckets(static_cast<std::size_t>(K), 0);
  for (int t = 0; t < cfg.trials; ++t) {
    const auto& tr = trials[static_cast<std::size_t>(t)];
    expected.push_back(tr.expected);
    observed.push_back(static_cast<double>(tr.pairs));
    rep.outputs += tr.pairs;
    for (int k = 0; k < K; ++k) buckets[static_cast<std::size_t>(k)] += tr.buckets[static_cast<std::size_t>(k)];
    rep.rows.push_back({t, root.split(static_cast<std::uint64_t>(t)).seed(), tr.expected, static_cast<double>(tr.pairs)});
  }
  const double mean_obs = mean(observed);
  rep.predicted_log2 = std::log2(mean(expected));
  rep.observed_log2 = mean_obs > 0 ? std::log2(mean_obs) : -INFINITY;
  rep.sigma = mean_obs > 0 ? stddev(observed) / std::sqrt(static_cast<double>(cfg.trials)) / (mean_obs * std::log(2.0))
                           : INFINITY;
  rep.size_pass = mean_obs > 0 && std::abs(rep.observed_log2 - rep.predicted_log2) <=
                                      th.sigma_slack + th.sigma_multiplier * rep.sigma;

  if (!disjoint && cfg.left.shape.alpha == cfg.right.shape.alpha && cfg.left.shape.beta == cfg.right.shape.beta &&
      cfg.left.shape.gamma == cfg.right.shape.gamma) {
    const auto& in = cfg.left.shape;
    if (auto pf = pf2plus(cfg.target.alpha, in.beta, cfg.target.gamma, in.alpha, in.gamma))
      rep.asymptotic_log2 = rep.predicted_log2 - rep.filter_log2 + n * *pf;
  } else if (disjoint) {
    rep.asymptotic_log2 = rep.predicted_log2;
  }

  const auto sizes = bucket_sizes(total, K);
  for (int k = 0; k < K; ++k) {
    const double e = static_cast<double>(rep.outputs) * BigRational(sizes[static_cast<std::size_t>(k)], total).get_d();
    const double d = static_cast<double>(buckets[static_cast<std::size_t>(k)]) - e;
    rep.chi2 += e > 0 ? d * d / e : (d != 0 ? INFINITY : 0);
  }
  rep.chi2_critical = boost::math::quantile(
      boost::math::complement(boost::math::chi_squared_distribution<double>(K - 1), th.chi2_alpha));
  rep.uniform_pass = rep.outputs >= static_cast<std::uint64_t>(5 * K) && rep.chi2 <= rep.chi2_critical;
  rep.pass = rep.size_pass && rep.uniform_pass;
  return rep;
}

// ---------------------------------------------------------------------------
// Modulus concentration

ModulusReport check_modulus_concentration(const ModulusConfig& cfg, const LabThresholds& th, int threads) {
  const char* what = "check_modulus_concentration";
  check_bits(cfg.n, what);
  check_trials(cfg.trials, what);
  if (cfg.m_log2 < 0 || cfg.m_log2 > cfg.n) throw DomainError("check_modulus_concentration: M must be a power of two <= 2^n");
  if (cfg.m_log2 > 22) throw ResourceError("check_modulus_concentration: M above 2^22 is not tabulated");
  if (cfg.bound == 0) throw DomainError("check_modulus_concentration: B must be positive");
  const int n = cfg.n;
  const SymbolCounts counts = round_counts(n, cfg.ambient);
  const BigInt ambient = multinomial(counts);
  const std::uint64_t M = std::uint64_t{1} << cfg.m_log2;
  if (ambient < BigInt(th.ambient_factor * static_cast<double>(M)))
    throw DomainError("check_modulus_concentration: the ambient set has " + ambient.get_str() +
                      " vectors, too few against M = " + std::to_string(M));
  if (ambient > BigInt(std::uint64_t{1} << 62))
    throw ResourceError("check_modulus_concentration: ambient set too large to tabulate");

  ModulusReport rep;
  rep.name = cfg.name;
  rep.n = n;
  rep.modulus = M;
  rep.bound = cfg.bound;
  rep.trials = cfg.trials;
  rep.seed = cfg.seed;
  rep.ambient_log2 = static_cast<double>(log2_big(ambient));
  rep.expected_ties_ambient = 1 + (ambient.get_d() - 1) / static_cast<double>(M);
  rep.degenerate = M == 1;

  // Residue table per partial count profile (minus, one, two); zeros are
  // whatever is left.
  const int cm = counts.minus, co = counts.one, ct = counts.two;
  const std::size_t states = static_cast<std::size_t>((cm + 1) * (co + 1) * (ct + 1));
  auto flat = [&](int m, int o, int w) { return static_cast<std::size_t>((m * (co + 1) + o) * (ct + 1) + w); };
  const std::uint64_t mask = M - 1;

  struct Trial {
    std::uint64_t ambient_ties = 0;
    std::uint64_t list_ties = 0;
  };
  std::vector<Trial> trials(static_cast<std::size_t>(cfg.trials));
  const Rng root(cfg.seed);
  parallel_for(cfg.trials, threads, [&](int t) {
    Rng rng = root.split(static_cast<std::uint64_t>(t));
    std::vector<std::uint64_t> a(static_cast<std::size_t>(n));
    for (auto& x : a) x = static_cast<std::uint64_t>(rng.bits128(n)) & mask;
    auto residue = [&](const SymbolVector& e) {
      std::uint64_t r = 0;
      for (int i = 0; i < n; ++i) r += static_cast<std::uint64_t>(static_cast<std::int64_t>(e[i])) * a[static_cast<std::size_t>(i)];
      return r & mask;
    };
    const SymbolVector e0 = random_vector(n, counts, rng);
    const std::uint64_t r0 = residue(e0);

    std::vector<std::uint64_t> table(states * M, 0);
    table[flat(0, 0, 0) * M] = 1;
    for (int i = 0; i < n; ++i) {
      const std::uint64_t ai = a[static_cast<std::size_t>(i)];
      for (int m = cm; m >= 0; --m)
        for (int o = co; o >= 0; --o)
          for (int w = ct; w >= 0; --w) {
            std::uint64_t* dst = &table[flat(m, o, w) * M];
            auto pull = [&](std::size_t from, std::uint64_t shift) {
              const std::uint64_t* src = &table[from * M];
              for (std::uint64_t r = 0; r < M; ++r) dst[(r + shift) & mask] += src[r];
            };
            if (m > 0) pull(flat(m - 1, o, w), (0 - ai) & mask);
            if (o > 0) pull(flat(m, o - 1, w), ai);
            if (w > 0) pull(flat(m, o, w - 1), (2 * ai) & mask);
          }
    }
    Trial& tr = trials[static_cast<std::size_t>(t)];
    tr.ambient_ties = table[flat(cm, co, ct) * M + r0];
    for (std::uint64_t k = 0; k < M; ++k) tr.list_ties += residue(random_vector(n, counts, rng)) == r0;
  });

  double sum_y = 0, sum_l = 0;
  int ambient_tail = 0, tail = 0, tail2 = 0;
  for (int t = 0; t < cfg.trials; ++t) {
    const auto& tr = trials[static_cast<std::size_t>(t)];
    sum_y += static_cast<double>(tr.ambient_ties);
    sum_l += static_cast<double>(tr.list_ties);
    ambient_tail += static_cast<double>(tr.ambient_ties) > 2 * rep.expected_ties_ambient;
    tail += tr.list_ties + 1 >= cfg.bound;
    tail2 += tr.list_ties + 1 >= 2 * cfg.bound;
    rep.rows.push_back({t, root.split(static_cast<std::uint64_t>(t)).seed(), static_cast<double>(tr.ambient_ties),
                        static_cast<double>(tr.list_ties)});
  }
  const double T = cfg.trials;
  rep.mean_ties_ambient = sum_y / T;
  rep.mean_ties_list = sum_l / T;
  rep.ambient_tail = ambient_tail / T;
  rep.tie_tail = tail / T;
  rep.tie_tail_double_bound = tail2 / T;
  rep.pass = !rep.degenerate && rep.ambient_tail <= th.modulus_tail && rep.tie_tail <= th.tie_tail;
  return rep;
}

// ---------------------------------------------------------------------------
// Bucket loss

BucketLossReport check_bucket_loss(const BucketLossConfig& cfg, const LabThresholds& th, int threads) {
  const char* what = "check_bucket_loss";
  check_bits(cfg.n, what);
  check_trials(cfg.repetitions, what);
  if (cfg.list_bits < 0 || cfg.list_bits > 24) throw DomainError("check_bucket_loss: list_bits out of range");
  const int n = cfg.n;
  const SymbolCounts in = round_counts(n, cfg.input), target = round_counts(n, cfg.target);
  const BigRational p = filter_prob_exact(n, in, in, target);
  if (p == 0) throw DomainError("check_bucket_loss: no pair of the input shape sums into the target");
  const double list_log2 = static_cast<double>(cfg.list_bits) / n;
  const FilteredLevelConfig base = derive_level_config(n, list_log2, cfg.c_bits, log2_of(p) / n, target, 0, cfg.bound);

  BucketLossReport rep;
  rep.name = cfg.name;
  rep.n = n;
  rep.bound = base.bound;
  rep.repetitions = cfg.repetitions;
  rep.seed = cfg.seed;

  struct Trial {
    std::uint64_t all = 0;
    std::uint64_t kept = 0;
  };
  std::vector<Trial> trials(static_cast<std::size_t>(cfg.repetitions));
  const Rng root(cfg.seed);
  parallel_for(cfg.repetitions, threads, [&](int t) {
    Rng rng = root.split(static_cast<std::uint64_t>(t));
    SubsetSumInstance inst;
    inst.n = n;
    inst.a = random_knapsack(n, rng);
    FilteredLevelConfig level = base;
    level.s = rng.bits128(cfg.c_bits);
    auto sample = [&] {
      std::vector<SubknapsackEntry> out;
      for (std::size_t i = 0; i < (std::size_t{1} << cfg.list_bits); ++i)
        out.push_back(make_entry(inst, random_vector(n, in, rng)));
      const auto list = SortedValueList::from_entries(std::move(out), 0);
      return std::vector<SubknapsackEntry>(list.begin(), list.end());
    };
    const auto left = sample(), right = sample();
    FilteredLevelConfig open = level;
    open.bound = left.size() * right.size() + 1;
    trials[static_cast<std::size_t>(t)] = {FilteredLevel::rebuild(open, left, right).filtered().size(),
                                           FilteredLevel::rebuild(level, left, right).filtered().size()};
  });
  for (int t = 0; t < cfg.repetitions; ++t) {
    const auto& tr = trials[static_cast<std::size_t>(t)];
    rep.unbounded_pairs += tr.all;
    rep.kept_pairs += tr.kept;
    rep.rows.push_back({t, root.split(static_cast<std::uint64_t>(t)).seed(), static_cast<double>(tr.all),
                        static_cast<double>(tr.kept)});
  }
  rep.loss = rep.unbounded_pairs ? 1 - static_cast<double>(rep.kept_pairs) / static_cast<double>(rep.unbounded_pairs) : 0;
  rep.max_loss = th.bucket_loss_per_n / n;
  rep.pass = rep.loss <= rep.max_loss;
  return rep;
}

// ---------------------------------------------------------------------------
// Configuration and reports

namespace {

template <typename T>
void read(const ojson& j, const char* key, T& out) {
  if (j.contains(key)) out = j.at(key).get<T>();
}

void reject_unknown(const ojson& j, std::initializer_list<const char*> keys, const std::string& where) {
  if (!j.is_object()) throw DomainError("lab config: " + where + " must be an object");
  for (const auto& [k, v] : j.items())
    if (std::find_if(keys.begin(), keys.end(), [&](const char* x) { return k == x; }) == keys.end())
      throw DomainError("lab config: unknown field " + where + "." + k);
}

DistributionShape read_shape(const ojson& j, const std::string& where) {
  reject_unknown(j, {"alpha", "beta", "gamma"}, where);
  DistributionShape s;
  read(j, "alpha", s.alpha);
  s.beta = j.at("beta").get<double>();
  read(j, "gamma", s.gamma);
  if (!s.valid()) throw DomainError("lab config: invalid shape in " + where);
  return s;
}

ListSpec read_list(const ojson& j, const std::string& where) {
  reject_unknown(j, {"alpha", "beta", "gamma", "support"}, where);
  ListSpec spec;
  ojson shape = j;
  shape.erase("support");
  spec.shape = read_shape(shape, where);
  const std::string support = j.value("support", "full");
  if (support == "full")
    spec.support = Support::Full;
  else if (support == "left")
    spec.support = Support::Left;
  else if (support == "right")
    spec.support = Support::Right;
  else
    throw DomainError("lab config: unknown support " + support);
  return spec;
}

}  // namespace

LabConfig parse_lab_config(const std::string& json_text) {
  ojson j;
  try {
    j = ojson::parse(json_text);
  } catch (const ojson::exception& e) {
    throw DomainError(std::string("lab config: ") + e.what());
  }
  reject_unknown(j, {"version", "thresholds", "heuristic1", "modulus", "bucket_loss"}, "root");
  LabConfig c;
  try {
    c.version = j.at("version").get<int>();
    if (j.contains("thresholds")) {
      const auto& t = j.at("thresholds");
      reject_unknown(t, {"sigma_slack", "sigma_multiplier", "chi2_alpha", "chi2_buckets", "suite_pass_rate",
                         "modulus_tail", "tie_tail", "bucket_loss_per_n", "ambient_factor"},
                     "thresholds");
      auto& th = c.thresholds;
      read(t, "sigma_slack", th.sigma_slack);
      read(t, "sigma_multiplier", th.sigma_multiplier);
      read(t, "chi2_alpha", th.chi2_alpha);
      read(t, "chi2_buckets", th.chi2_buckets);
      read(t, "suite_pass_rate", th.suite_pass_rate);
      read(t, "modulus_tail", th.modulus_tail);
      read(t, "tie_tail", th.tie_tail);
      read(t, "bucket_loss_per_n", th.bucket_loss_per_n);
      read(t, "ambient_factor", th.ambient_factor);
    }
    for (const auto& e : j.value("heuristic1", ojson::array())) {
      reject_unknown(e, {"name", "n", "left", "right", "target", "list_size", "c_bits", "trials", "seeds"}, "heuristic1");
      Heuristic1Config h;
      h.name = e.at("name").get<std::string>();
      h.n = e.at("n").get<int>();
      h.left = read_list(e.at("left"), h.name + ".left");
      h.right = read_list(e.at("right"), h.name + ".right");
      h.target = read_shape(e.at("target"), h.name + ".target");
      h.list_size = e.at("list_size").get<std::size_t>();
      h.c_bits = e.at("c_bits").get<int>();
      read(e, "trials", h.trials);
      const auto seeds = e.value("seeds", std::vector<std::uint64_t>{kDefaultSeed});
      for (auto s : seeds) {
        h.seed = s;
        c.heuristic1.push_back(h);
      }
    }
    for (const auto& e : j.value("modulus", ojson::array())) {
      reject_unknown(e, {"name", "n", "m_log2", "bound", "trials", "seed", "ambient"}, "modulus");
      ModulusConfig m;
      m.name = e.at("name").get<std::string>();
      m.n = e.at("n").get<int>();
      m.m_log2 = e.at("m_log2").get<int>();
      m.bound = e.at("bound").get<std::size_t>();
      read(e, "trials", m.trials);
      read(e, "seed", m.seed);
      if (e.contains("ambient")) m.ambient = read_shape(e.at("ambient"), m.name + ".ambient");
      c.modulus.push_back(m);
    }
    for (const auto& e : j.value("bucket_loss", ojson::array())) {
      reject_unknown(e, {"name", "n", "input", "target", "list_bits", "c_bits", "bound", "repetitions", "seed"},
                     "bucket_loss");
      BucketLossConfig b;
      b.name = e.at("name").get<std::string>();
      b.n = e.at("n").get<int>();
      b.input = read_shape(e.at("input"), b.name + ".input");
      b.target = read_shape(e.at("target"), b.name + ".target");
      b.list_bits = e.at("list_bits").get<int>();
      b.c_bits = e.at("c_bits").get<int>();
      read(e, "bound", b.bound);
      read(e, "repetitions", b.repetitions);
      read(e, "seed", b.seed);
      c.bucket_loss.push_back(b);
    }
  } catch (const ojson::exception& e) {
    throw DomainError(std::string("lab config: ") + e.what());
  }
  return c;
}

const LabConfig& default_lab_config() {
  static const LabConfig config = parse_lab_config(kLabConfigJson);
  return config;
}

SuiteReport run_lab_suite(const LabConfig& config, int threads) {
  SuiteReport s;
  int passed = 0;
  for (const auto& h : config.heuristic1) {
    s.heuristic1.push_back(check_heuristic1(h, config.thresholds, threads));
    passed += s.heuristic1.back().pass;
  }
  for (const auto& m : config.modulus) s.modulus.push_back(check_modulus_concentration(m, config.thresholds, threads));
  for (const auto& b : config.bucket_loss) s.bucket_loss.push_back(check_bucket_loss(b, config.thresholds, threads));
  s.heuristic1_pass_rate = s.heuristic1.empty() ? 1.0 : static_cast<double>(passed) / static_cast<double>(s.heuristic1.size());
  s.pass = s.heuristic1_pass_rate >= config.thresholds.suite_pass_rate &&
           std::all_of(s.modulus.begin(), s.modulus.end(), [](const auto& r) { return r.pass; }) &&
           std::all_of(s.bucket_loss.begin(), s.bucket_loss.end(), [](const auto& r) { return r.pass; });
  return s;
}

namespace {

ojson to_ojson(const Heuristic1Report& r) {
  ojson j;
  j["name"] = r.name;
  j["n"] = r.n;
  j["seed"] = r.seed;
  j["trials"] = r.trials;
  j["predicted_log2"] = r.predicted_log2;
  j["observed_log2"] = std::isfinite(r.observed_log2) ? ojson(r.observed_log2) : ojson(nullptr);
  j["sigma"] = std::isfinite(r.sigma) ? ojson(r.sigma) : ojson(nullptr);
  j["asymptotic_log2"] = r.asymptotic_log2 ? ojson(*r.asymptotic_log2) : ojson(nullptr);
  j["filter_log2"] = r.filter_log2;
  j["outputs"] = r.outputs;
  j["chi2"] = std::isfinite(r.chi2) ? ojson(r.chi2) : ojson(nullptr);
  j["chi2_critical"] = r.chi2_critical;
  j["size_pass"] = r.size_pass;
  j["uniform_pass"] = r.uniform_pass;
  j["pass"] = r.pass;
  return j;
}

ojson to_ojson(const ModulusReport& r) {
  return {{"name", r.name},
          {"n", r.n},
          {"modulus", r.modulus},
          {"bound", r.bound},
          {"trials", r.trials},
          {"seed", r.seed},
          {"ambient_log2", r.ambient_log2},
          {"mean_ties_ambient", r.mean_ties_ambient},
          {"expected_ties_ambient", r.expected_ties_ambient},
          {"ambient_tail", r.ambient_tail},
          {"mean_ties_list", r.mean_ties_list},
          {"tie_tail", r.tie_tail},
          {"tie_tail_double_bound", r.tie_tail_double_bound},
          {"degenerate", r.degenerate},
          {"pass", r.pass}};
}

ojson to_ojson(const BucketLossReport& r) {
  return {{"name", r.name},
          {"n", r.n},
          {"bound", r.bound},
          {"repetitions", r.repetitions},
          {"seed", r.seed},
          {"unbounded_pairs", r.unbounded_pairs},
          {"kept_pairs", r.kept_pairs},
          {"loss", r.loss},
          {"max_loss", r.max_loss},
          {"pass", r.pass}};
}

}  // namespace

std::string report_to_json(const Heuristic1Report& r) { return to_ojson(r).dump(); }
std::string report_to_json(const ModulusReport& r) { return to_ojson(r).dump(); }
std::string report_to_json(const BucketLossReport& r) { return to_ojson(r).dump(); }

std::string suite_to_json(const SuiteReport& s) {
  ojson j;
  j["heuristic1"] = ojson::array();
  for (const auto& r : s.heuristic1) j["heuristic1"].push_back(to_ojson(r));
  j["modulus"] = ojson::array();
  for (const auto& r : s.modulus) j["modulus"].push_back(to_ojson(r));
  j["bucket_loss"] = ojson::array();
  for (const auto& r : s.bucket_loss) j["bucket_loss"].push_back(to_ojson(r));
  j["heuristic1_pass_rate"] = s.heuristic1_pass_rate;
  j["pass"] = s.pass;
  return j.dump();
}

std::string trials_csv(const SuiteReport& s) {
  std::string out = "kind,name,trial,seed,expected,observed\n";
  char buf[160];
  auto emit = [&](const char* kind, const std::string& name, const std::vector<TrialRow>& rows) {
    for (const auto& r : rows) {
      std::snprintf(buf, sizeof buf, ",%d,%llu,%.6f,%.6f\n", r.trial, static_cast<unsigned long long>(r.seed),
                    r.expected, r.observed);
      out += kind;
      out += ',';
      out += name;
      out += buf;
    }
  };
  for (const auto& r : s.heuristic1) emit("heuristic1", r.name, r.rows);
  for (const auto& r : s.modulus) emit("modulus", r.name, r.rows);
  for (const auto& r : s.bucket_loss) emit("bucket_loss", r.name, r.rows);
  return out;
}

}  // namespace sslab
