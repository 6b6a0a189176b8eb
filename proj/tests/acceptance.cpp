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

// One PASS/FAIL line per acceptance criterion.

#include <CLI11.hpp>

#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <map>
#include <set>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include "sslab/combinatorics.hpp"
#include "sslab/errors.hpp"
#include "sslab/filtering.hpp"
#include "sslab/heuristics.hpp"
#include "sslab/merge.hpp"
#include "sslab/optimizer.hpp"
#include "sslab/qcost.hpp"
#include "sslab/solvers.hpp"

using namespace sslab;

namespace {

using Clock = std::chrono::steady_clock;
using Assignment = std::map<std::string, double>;

double seconds_since(Clock::time_point t0) { return std::chrono::duration<double>(Clock::now() - t0).count(); }

struct Outcome {
  bool pass = true;
  std::ostringstream detail;

  void require(bool ok, const std::string& what) {
    if (!ok) {
      pass = false;
      detail << " [failed: " << what << "]";
    }
  }
};

std::string f4(double x) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.4f", x);
  return buf;
}

std::string f6(double x) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.6f", x);
  return buf;
}

int g_threads = 1;

Assignment bcj_ext_reference() {
  return {{"neg_1", 0.0340}, {"neg_2", 0.0311}, {"neg_3", 0.0202}, {"two_1", 0.0041}, {"two_2", 0.0006},
          {"two_3", 0.0001}, {"bits_1", 0.8067}, {"bits_2", 0.5509}, {"bits_3", 0.2680}, {"list_1", 0.2382},
          {"list_2", 0.2694}, {"list_3", 0.2829}};
}

Assignment walk_reference() {
  return {{"marked", -0.1916}, {"list_1", 0.1996}, {"list_2", 0.2030}, {"list_3", 0.2110}, {"list_4", 0.2110},
          {"bits_1", 0.6190},  {"bits_2", 0.4445}, {"bits_3", 0.2506}, {"bits_4", 0.0487}, {"neg_1", 0.0176},
          {"neg_2", 0.0153},   {"neg_3", 0.0131},  {"neg_4", 0.0087},  {"two_1", 0.0019},  {"two_2", 0.0},
          {"two_3", 0.0},      {"two_4", 0.0},     {"enum_share", 0.8448}};
}

Assignment walk_hf_reference() {
  return {{"marked", -0.2021}, {"list_1", 0.1883}, {"list_2", 0.2102}, {"list_3", 0.2182}, {"list_4", 0.2182},
          {"bits_3", 0.2182},  {"bits_2", 0.4283}, {"bits_1", 0.6305}, {"neg_1", 0.0172},  {"neg_2", 0.0145},
          {"neg_3", 0.0107},   {"two_1", 0.0020},  {"two_2", 0.0},     {"two_3", 0.0}};
}

// 1. Exponents of every variant.
Outcome criterion1() {
  Outcome o;
  struct Target {
    const char* variant;
    double time;
  };
  const Target targets[] = {{"classical-hgj", 0.3370}, {"classical-bcj", 0.2909}, {"classical-bcj-ext", 0.2830},
                            {"q-asym-hgj", 0.2374},    {"q-asym-hgj-qf", 0.2356}, {"q-walk", 0.2156},
                            {"q-walk-hf", 0.2182}};
  for (const auto& t : targets) {
    OptimOptions opt;
    opt.threads = g_threads;
    const auto t0 = Clock::now();
    const auto r = optimize(build_model(t.variant), opt);
    const double secs = seconds_since(t0);
    o.detail << " " << t.variant << "=" << f4(r.time_exponent) << "(" << static_cast<int>(secs) << "s)";
    o.require(r.success, std::string(t.variant) + " found no certified point");
    o.require(std::abs(r.time_exponent - t.time) <= 5e-4, std::string(t.variant) + " off target " + f4(t.time));
    o.require(secs <= 600, std::string(t.variant) + " over 10 minutes");
    if (std::string(t.variant) == "q-walk") {
      o.detail << " mem=" << f4(r.memory_exponent);
      o.require(r.memory_exponent <= 0.2110 + 5e-4, "q-walk memory above 0.2110");
    }
  }
  return o;
}

// 2. Reference parameter blocks.
Outcome criterion2() {
  Outcome o;
  struct Case {
    const char* variant;
    Assignment point;
    double time;
    std::optional<double> memory;
  };
  const Case cases[] = {{"classical-bcj-ext", bcj_ext_reference(), 0.2830, std::nullopt},
                        {"q-walk", walk_reference(), 0.2156, 0.2110},
                        {"q-walk-hf", walk_hf_reference(), 0.2182, std::nullopt}};
  for (const auto& c : cases) {
    const auto rep = verify_point(build_model(c.variant), c.point);
    o.detail << " " << c.variant << ": residual=" << f4(rep.max_residual) << " t=" << f4(rep.time_exponent);
    o.require(rep.in_domain, std::string(c.variant) + " outside the domain: " + rep.domain_error);
    o.require(rep.max_residual <= 2e-3, std::string(c.variant) + " residual at " + rep.worst);
    o.require(std::abs(rep.time_exponent - c.time) <= 2e-3, std::string(c.variant) + " time");
    if (c.memory) o.require(std::abs(rep.memory_exponent - *c.memory) <= 2e-3, std::string(c.variant) + " memory");
  }
  return o;
}

// 3. Tradeoff tables and the dominance property on a 20-point grid.
Outcome criterion3() {
  Outcome o;
  OptimOptions opt;
  opt.threads = g_threads;
  const std::vector<double> ms{0.05, 0.10, 0.15, 0.30};
  const double plain[] = {0.4433, 0.3896, 0.3348, 0.2356};
  const auto rows = tradeoff_curve("q-asym-hgj-tradeoff", ms, opt);
  const auto ram = tradeoff_curve("q-asym-hgj-tradeoff-ram", {0.05, 0.10, 0.15}, opt);
  const double more_ram[] = {0.4412, 0.3860, 0.3301};
  o.detail << " plain:";
  for (std::size_t i = 0; i < rows.size(); ++i) {
    o.detail << " " << f4(rows[i].time_exponent);
    o.require(std::abs(rows[i].time_exponent - plain[i]) <= 1e-3, "plain row m=" + f4(ms[i]));
  }
  o.detail << "; more RAM:";
  for (std::size_t i = 0; i < ram.size(); ++i) {
    o.detail << " " << f4(ram[i].time_exponent);
    o.require(std::abs(ram[i].time_exponent - more_ram[i]) <= 1e-3, "RAM row m=" + f4(ms[i]));
    o.require(ram[i].time_exponent <= rows[i].time_exponent + 1e-9, "RAM row above plain row at m=" + f4(ms[i]));
  }

  // Dominance holds up to the unconstrained optimum's memory.
  OptimOptions grid_opt = opt;
  grid_opt.restarts = 100;
  std::vector<double> grid;
  for (int i = 0; i < 20; ++i) grid.push_back(0.01 + (0.2356 - 0.01) * i / 19);
  const auto curve = tradeoff_curve("q-asym-hgj-tradeoff", grid, grid_opt);
  double worst = -1;
  for (const auto& r : curve) worst = std::max(worst, r.time_exponent + r.m);
  o.detail << "; grid max t+m=" << f4(worst);
  o.require(worst <= 0.5 + 1e-3, "t(m)+m above 0.5");
  for (std::size_t i = 1; i < curve.size(); ++i)
    o.require(curve[i].time_exponent <= curve[i - 1].time_exponent, "time column not monotone");
  return o;
}

// 4. Meet-in-the-middle solvers against exhaustive search.
Outcome criterion4() {
  Outcome o;
  int instances = 0, solvable = 0;
  for (int n : {8, 12, 16, 20, 24}) {
    for (std::uint64_t seed = 0; seed < 50; ++seed) {
      auto inst = random_instance(n, seed);
      if (seed % 2) {
        Rng rng(seed * 7919 + static_cast<std::uint64_t>(n));
        inst.t = rng.bits128(n);
        inst.planted.reset();
      }
      const auto ex = solve_exhaustive(inst);
      const auto hs = solve_hs(inst);
      const auto ss = solve_ss(inst);
      ++instances;
      const std::string tag = "n=" + std::to_string(n) + " seed=" + std::to_string(seed);
      o.require(hs.success == ex.success && ss.success == ex.success, "disagreement at " + tag);
      for (const auto* r : {&ex, &hs, &ss})
        if (r->success) o.require(r->solution && verify_solution(inst, *r->solution), "bad solution at " + tag);
      solvable += ex.success;
    }
  }
  const auto inst = random_instance(32, 11);
  const auto hs = solve_hs(inst), ss = solve_ss(inst);
  o.detail << " " << instances << " instances (" << solvable << " solvable); n=32 peak entries hs=" << hs.peak_entries
           << " ss=" << ss.peak_entries;
  o.require(ss.peak_entries < hs.peak_entries, "ss peak not below hs");
  return o;
}

// 5. Representation solvers end to end.
Outcome criterion5() {
  Outcome o;
  const auto t0 = Clock::now();
  struct Suite {
    const char* algo;
    int n;
  };
  for (const auto& s : {Suite{"hgj", 32}, Suite{"hgj", 40}, Suite{"bcj-ext", 48}}) {
    const std::string algo = s.algo;
    const auto params = algo == "hgj" ? hgj_params(s.n) : bcj_ext_params(s.n);
    int ok = 0;
    std::vector<std::vector<double>> sizes(params.depth - 1);
    std::vector<double> predicted(params.depth - 1);
    for (std::uint64_t seed = 0; seed < 20; ++seed) {
      const auto inst = random_instance(s.n, 1000 + seed);
      const auto r = algo == "hgj" ? solve_hgj(inst, params, 64, seed) : solve_bcj_ext(inst, params, 64, seed);
      if (r.success) {
        ++ok;
        o.require(verify_solution(inst, *r.solution), algo + " returned a wrong solution");
      }
      // Every level but the root, which holds at most the solution.
      for (std::size_t j = 0; j + 1 < r.levels.size() && j < sizes.size(); ++j) {
        if (r.levels[j].size_log2) sizes[j].push_back(*r.levels[j].size_log2);
        predicted[j] = r.levels[j].predicted_log2;
      }
    }
    o.detail << " " << algo << "@" << s.n << ": " << ok << "/20";
    o.require(ok >= 10, algo + " at n=" + std::to_string(s.n) + " below 50% success");
    for (std::size_t j = 0; j < sizes.size(); ++j) {
      const auto& xs = sizes[j];
      if (xs.size() < 2) {
        o.require(false, algo + " level " + std::to_string(j) + " has too few observations");
        continue;
      }
      double mean = 0, var = 0;
      for (double x : xs) mean += x;
      mean /= static_cast<double>(xs.size());
      for (double x : xs) var += (x - mean) * (x - mean);
      const double sigma = std::sqrt(var / static_cast<double>(xs.size() - 1));
      o.require(std::abs(mean - predicted[j]) <= 0.5 + 3 * sigma,
                algo + " level " + std::to_string(j) + " size " + f4(mean) + " vs model " + f4(predicted[j]));
    }
  }
  const double secs = seconds_since(t0);
  o.detail << "; " << static_cast<int>(secs) << "s";
  o.require(secs <= 1800, "suite over 30 minutes");
  return o;
}

// 6. Asymptotic filtering exponents against the exact finite-n probability.
Outcome criterion6() {
  Outcome o;
  Rng rng(6);
  auto u = [&](double lo, double hi) { return lo + (hi - lo) * rng.uniform(); };
  const int ns[] = {64, 128, 256};
  double fitted = 0;
  int samples = 0;
  auto record = [&](int n, const SymbolCounts& a, const SymbolCounts& b, const SymbolCounts& t, double asym) {
    const auto exact = filter_prob_exact(n, a, b, t);
    if (exact == 0) return false;
    const double e = static_cast<double>(log2_big(exact)) / n;
    fitted = std::max(fitted, std::abs(e - asym) * n / std::log2(static_cast<double>(n)));
    ++samples;
    return true;
  };

  int pf1_tuples = 0;
  while (pf1_tuples < 20) {
    const double a = u(0.03, 0.3), b = u(0.03, 0.3);
    if (a + b > 0.6) continue;
    for (int n : ns) {
      SymbolCounts x{0, 0, static_cast<int>(std::lround(a * n)), 0}, y{0, 0, static_cast<int>(std::lround(b * n)), 0};
      x.zero = n - x.one;
      y.zero = n - y.one;
      SymbolCounts t{0, n - x.one - y.one, x.one + y.one, 0};
      const auto p = pf1(static_cast<double>(x.one) / n, static_cast<double>(y.one) / n);
      if (!p) continue;
      record(n, x, y, t, *p);
    }
    ++pf1_tuples;
  }

  int pf2_tuples = 0;
  while (pf2_tuples < 20) {
    const double a = u(0.01, 0.06), b = u(0.05, 0.15), g = u(0, 2 * a);
    for (int n : ns) {
      SymbolCounts in;
      in.minus = static_cast<int>(std::lround(a * n));
      in.one = static_cast<int>(std::lround(b * n)) + in.minus;
      in.zero = n - in.minus - in.one;
      SymbolCounts t;
      t.minus = static_cast<int>(std::lround(g * n));
      t.one = 2 * (in.one - in.minus) + t.minus;
      t.zero = n - t.minus - t.one;
      if (t.zero < 0) continue;
      const double dn = n;
      const auto p = pf2(in.minus / dn, (in.one - in.minus) / dn, t.minus / dn);
      if (!p) continue;
      record(n, in, in, t, *p);
    }
    ++pf2_tuples;
  }

  int pf2plus_tuples = 0, attempts = 0;
  while (pf2plus_tuples < 20 && attempts < 2000) {
    ++attempts;
    const double a1 = u(0.01, 0.05), g1 = u(0, 0.01), b = u(0.06, 0.15);
    const double a0 = u(0, 2 * a1), g0 = u(0, 2 * g1 + 0.004);
    bool any = false;
    for (int n : ns) {
      SymbolCounts in;
      in.minus = static_cast<int>(std::lround(a1 * n));
      in.two = static_cast<int>(std::lround(g1 * n));
      const int w = static_cast<int>(std::lround(b * n));
      in.one = w + in.minus - 2 * in.two;
      in.zero = n - in.minus - in.one - in.two;
      SymbolCounts t;
      t.minus = static_cast<int>(std::lround(a0 * n));
      t.two = static_cast<int>(std::lround(g0 * n));
      t.one = 2 * w + t.minus - 2 * t.two;
      t.zero = n - t.minus - t.one - t.two;
      if (in.one < 0 || in.zero < 0 || t.one < 0 || t.zero < 0) continue;
      const double dn = n;
      const auto p = pf2plus(t.minus / dn, w / dn, t.two / dn, in.minus / dn, in.two / dn);
      if (!p) continue;
      any |= record(n, in, in, t, *p);
    }
    pf2plus_tuples += any;
  }
  o.require(pf2plus_tuples == 20, "only " + std::to_string(pf2plus_tuples) + " valid pf2plus tuples");

  double sym = 0;
  for (int i = 0; i < 1000; ++i) {
    const double a = u(0, 1), b = u(0, 1 - a);
    sym = std::max(sym, std::abs(*pf1(a, b) - *pf1(b, a)));
  }
  o.detail << " " << samples << " comparisons, fitted C=" << f4(fitted) << ", pf1 asymmetry " << sym;
  o.require(fitted <= 4, "fitted C above 4");
  o.require(sym <= 1e-12, "pf1 not symmetric");
  return o;
}

// 7. Ranking bijection.
Outcome criterion7() {
  Outcome o;
  std::uint64_t vectors = 0;
  for (int n = 1; n <= 12; ++n) {
    BigInt total = 0;
    for (int minus = 0; minus <= n; ++minus)
      for (int two = 0; minus + two <= n; ++two)
        for (int one = 0; minus + two + one <= n; ++one) {
          const SymbolCounts c{minus, n - minus - two - one, one, two};
          const BigInt m = multinomial(c);
          o.require(m == dist_count_exact(n, shape_of(c)), "multinomial differs from dist_count_exact at " + c.to_string());
          total += m;
          const auto count = m.get_ui();
          for (unsigned long i = 0; i < count; ++i) {
            const auto v = unrank(n, c, BigInt(i));
            if (v.counts() != c || rank(v) != i) {
              o.require(false, "round trip at n=" + std::to_string(n) + " " + c.to_string());
              return o;
            }
          }
          vectors += count;
        }
    // Profiles partition {-1,0,1,2}^n, so injectivity per profile plus the
    // total count gives surjectivity.
    o.require(total == BigInt(1) << (2 * n), "profile sizes do not add up to 4^n at n=" + std::to_string(n));
  }
  o.detail << " " << vectors << " vectors round-tripped";
  return o;
}

std::vector<SubknapsackEntry> weight_entries(const SubsetSumInstance& inst, int count, int ones, Rng& rng) {
  std::vector<SubknapsackEntry> out;
  for (int i = 0; i < count; ++i) out.push_back(make_entry(inst, random_vector(inst.n, {0, inst.n - ones, ones, 0}, rng)));
  return out;
}

// 8. Bucket-modulus lists, filtered levels and bucket loss.
Outcome criterion8() {
  Outcome o;
  const int n = 24;
  const auto inst = random_instance(n, 42);
  int mismatches = 0;
  std::uint64_t touch_violations = 0, updates = 0;
  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    Rng rng(seed);
    const auto pool = weight_entries(inst, 400, 3, rng);
    const std::size_t B = 1 + rng.below(4);
    const int bits = 5 + static_cast<int>(rng.below(3));
    BucketModulusList bml(B, bits);
    std::set<std::string> present;
    for (int step = 0; step < 10000; ++step) {
      const auto& x = pool[rng.below(pool.size())];
      const auto key = x.e.to_string();
      const bool erase = present.count(key) > 0;
      bml_apply(bml, {erase ? BucketOp::Kind::Erase : BucketOp::Kind::Insert, x});
      if (erase)
        present.erase(key);
      else
        present.insert(key);
      if (step % 1000 == 999 && !(bml == BucketModulusList::rebuild(B, bits, bml.backing().entries()))) ++mismatches;
    }

    FilteredLevelConfig cfg;
    cfg.n = n;
    cfg.bound = 2 + seed % 3;
    cfg.bucket_bits = 8;
    cfg.c_bits = 5;
    cfg.sublist_bits = static_cast<int>(seed % 3);
    cfg.s = rng.bits128(5);
    cfg.target = SymbolCounts{0, 18, 6, 0};
    const auto left = weight_entries(inst, 300, 3, rng), right = weight_entries(inst, 300, 3, rng);
    FilteredLevel level(cfg);
    std::set<std::string> in_left, in_right;
    for (int step = 0; step < 10000; ++step) {
      const bool left_side = rng.below(2) == 0;
      const auto& x = (left_side ? left : right)[rng.below(300)];
      auto& present_side = left_side ? in_left : in_right;
      const auto key = x.e.to_string();
      const bool erase = present_side.count(key) > 0;
      const BucketOp op{erase ? BucketOp::Kind::Erase : BucketOp::Kind::Insert, x};
      const auto stats =
          left_side ? filtered_level_update(level, op) : level.apply(FilteredLevel::Side::Right, op);
      ++updates;
      if (stats.touched > cfg.bound * stats.cells_examined) ++touch_violations;
      if (erase)
        present_side.erase(key);
      else
        present_side.insert(key);
      if (step % 1000 == 999 &&
          !(level == FilteredLevel::rebuild(cfg, level.list(FilteredLevel::Side::Left).backing().entries(),
                                            level.list(FilteredLevel::Side::Right).backing().entries())))
        ++mismatches;
    }
  }
  o.require(mismatches == 0, std::to_string(mismatches) + " states differ from reconstruction");
  o.require(touch_violations == 0, std::to_string(touch_violations) + " updates over the touch bound");

  const auto& cfg = default_lab_config();
  o.detail << " 20 seeds x 10^4 ops, " << updates << " level updates;";
  for (const auto& b : cfg.bucket_loss) {
    const auto r = check_bucket_loss(b, cfg.thresholds, g_threads);
    o.detail << " " << b.name << " loss=" << f6(r.loss) << " (B=" << r.bound << ")";
    o.require(r.bound == static_cast<std::size_t>(r.n), b.name + " not at B = n");
    o.require(r.pass, b.name + " loss above 1/n");
  }
  return o;
}

// 9. Heuristic suite.
Outcome criterion9() {
  Outcome o;
  const auto& cfg = default_lab_config();
  const auto s = run_lab_suite(cfg, g_threads);
  int uniform = 0;
  for (const auto& r : s.heuristic1) uniform += r.uniform_pass;
  o.detail << " pass rate " << f4(s.heuristic1_pass_rate) << " over " << s.heuristic1.size() << " runs, chi2 at alpha "
           << cfg.thresholds.chi2_alpha << " passed " << uniform << "/" << s.heuristic1.size();
  o.require(cfg.thresholds.chi2_alpha == 1e-3, "chi2 significance is not 1e-3");
  o.require(s.heuristic1_pass_rate >= 0.95, "pass rate below 95%");
  o.require(s.pass, "suite failed");
  return o;
}

// The walk total recomputed from a reference point with the cost calculators.
double walk_from_point(const Assignment& p, bool history_free) {
  const int depth = history_free ? 3 : 4;
  auto A = [&](int j) { return j == 0 || j > depth ? 0.0 : p.at("neg_" + std::to_string(j)); };
  auto G = [&](int j) { return j == 0 || j > depth ? 0.0 : p.at("two_" + std::to_string(j)); };
  auto L = [&](int j) { return p.at("list_" + std::to_string(j)); };
  auto C = [&](int j) { return j == 0 ? 1.0 : p.at("bits_" + std::to_string(j)); };
  auto weight = [](int j) { return 1.0 / (1 << (j + 1)); };
  auto pf = [&](int j) { return pf2plus(A(j), weight(j + 1), G(j), A(j + 1), G(j + 1)).value(); };

  const double root = (L(1) + std::max(L(1) - (1 - C(1)), 0.0)) / 2;
  const double merge2 = qfilter_pair_cost(L(3), C(2) - C(3), pf(2));
  const double merge1 = qfilter_pair_cost(L(2), C(1) - C(2), pf(1));
  WalkCostInputs in;
  in.marked = p.at("marked");
  in.gap = johnson_gap(1.0, L(4), 1 << 4);
  if (!history_free) {
    const double merge3 = qfilter_pair_cost(L(4), C(3) - C(4), pf(3));
    in.setup = std::max({C(4), L(4), merge3, merge2, merge1, root});
    // A level with at least one partner per residue costs nothing to search.
    auto search = [](double space, double solutions) {
      return solutions >= space ? 0.0 : grover_cost(space, solutions);
    };
    in.update = std::max({0.0, search(L(4), C(3) - C(4)), search(L(3), C(2) - C(3)), search(L(2), C(1) - C(2)),
                          search(L(1), 1 - C(1))});
  } else {
    in.setup = std::max({L(4), L(3), merge2, merge1, root});
    const double partners2 = L(3) - (C(2) - C(3));
    const double filtered2 = std::max(partners2 + pf(2) / 2, 0.0);
    const double partners1 = std::max(L(2) - (C(1) - C(2)), 0.0);
    const double filtered1 = std::max(L(2) - (C(1) - C(2)) + pf(1) / 2, 0.0);
    const double excess0 = std::max(L(1) - (1 - C(1)), 0.0);
    in.update = std::max({0.0, partners2, filtered2 + partners1, 0.5 * (filtered2 + filtered1 + excess0)});
  }
  return walk_total(in);
}

// 10. Cost calculators.
Outcome criterion10() {
  Outcome o;
  auto same = [](double a, double b) { return std::abs(a - b) <= 1e-15; };
  o.require(same(grover_cost(0.4, 0.1), 0.15), "grover (0.4, 0.1)");
  o.require(grover_cost(0.33, 0.33) == 0.0, "grover (s, s)");
  o.require(grover_cost(1, 0) == 0.5, "grover (1, 0)");
  o.require(qmatch_cost(0.21, 0.3, 0.35, 0) == 0.21, "qmatch l2 >= c");
  o.require(same(qmatch_cost(0.21, 0.3, 0.2, 0), 0.26), "qmatch l2 = c - 0.1");
  o.require(same(qfilter_pair_cost(0.27, 0.2, 0), 0.34), "qfilter p = 0");
  o.require(same(qfilter_pair_cost(0.27, 0.2, -0.04) - (2 * 0.27 - 0.2 - 0.04), 0.02), "qfilter halves the penalty");
  bool rejected = false;
  try {
    qfilter_pair_cost(0.27, 0.44, 0);
  } catch (const DomainError&) {
    rejected = true;
  }
  o.require(rejected, "qfilter c > l accepted");
  o.require(johnson_gap(0.3, 0.2, 1) == -0.2 && johnson_gap(0.3, 0.2, 16) == -0.2, "johnson gap");
  o.require(johnson_gap(0.3, 0.0, 1) == 0.0, "johnson gap R = 0");
  o.require(same(walk_total({0, 0, 0, -0.2, -0.2}), 0.2), "walk_total zero costs");

  const double walk = walk_from_point(walk_reference(), false);
  const double hf = walk_from_point(walk_hf_reference(), true);
  o.detail << " tables exact; walk recomputed " << f4(walk) << ", history-free " << f4(hf);
  o.require(std::abs(walk - 0.2156) <= 2e-3, "walk total off 0.2156");
  o.require(std::abs(hf - 0.2182) <= 2e-3, "history-free walk total off 0.2182");
  return o;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Acceptance checks, one line per criterion"};
  std::vector<int> only;
  int threads = 0;
  app.add_option("--only", only, "Criteria to run (default: all)")->delimiter(',')->check(CLI::Range(1, 10));
  app.add_option("--threads", threads, "Worker threads (default: SSLAB_THREADS, else all cores)")
      ->check(CLI::Range(1, 4096));
  CLI11_PARSE(app, argc, argv);
  if (threads > 0) {
    g_threads = threads;
  } else if (const char* env = std::getenv("SSLAB_THREADS"); env && std::atoi(env) > 0) {
    g_threads = std::atoi(env);
  } else {
    g_threads = static_cast<int>(std::max(1u, std::thread::hardware_concurrency()));
  }

  const std::vector<std::function<Outcome()>> criteria{criterion1, criterion2, criterion3, criterion4, criterion5,
                                                       criterion6, criterion7, criterion8, criterion9, criterion10};
  const std::set<int> selected(only.begin(), only.end());
  bool all = true;
  for (int i = 1; i <= 10; ++i) {
    if (!selected.empty() && !selected.count(i)) continue;
    const auto t0 = Clock::now();
    Outcome o;
    try {
      o = criteria[static_cast<std::size_t>(i - 1)]();
    } catch (const std::exception& e) {
      o.require(false, std::string("exception: ") + e.what());
    }
    std::printf("criterion %d: %s (%.0fs)%s\n", i, o.pass ? "PASS" : "FAIL", seconds_since(t0), o.detail.str().c_str());
    std::fflush(stdout);
    all &= o.pass;
  }
  return all ? 0 : 1;
}
