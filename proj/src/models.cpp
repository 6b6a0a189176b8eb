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

#include <algorithm>
#include <array>
#include <cmath>
#include <functional>
#include <string>

#include "sslab/errors.hpp"
#include "sslab/optimizer.hpp"
#include "sslab/qcost.hpp"

namespace sslab {

namespace {

using Ops = ExponentOps;

std::string idx(const std::string& base, int j) { return base + "_" + std::to_string(j); }

// Arguments (a0, b, g0, a1, g1) of a pf2plus merge.
using MergeArgs = std::function<std::array<double, 5>(const Point&)>;

// Linear conditions for the cancellation range of pf2plus to be nonempty.
void add_merge_domain(ConstraintSystem& s, const std::string& tag, const MergeArgs& args) {
  using Bound = std::function<double(const std::array<double, 5>&)>;
  const std::vector<std::pair<std::string, Bound>> lower = {
      {"0", [](const auto&) { return 0.0; }},
      {"a1 + b - (1 - a0 + g0)/2", [](const auto& v) { return v[3] + v[1] - (1 - v[0] + v[2]) / 2; }},
      {"g1 - g0/2", [](const auto& v) { return v[4] - v[2] / 2; }},
  };
  const std::vector<std::pair<std::string, Bound>> upper = {
      {"a1 - a0/2", [](const auto& v) { return v[3] - v[0] / 2; }},
      {"a0/2 + b - g0", [](const auto& v) { return v[0] / 2 + v[1] - v[2]; }},
      {"g1", [](const auto& v) { return v[4]; }},
  };
  int k = 0;
  for (const auto& [lt, lf] : lower)
    for (const auto& [ut, uf] : upper) {
      ++k;
      if (lt == "0" && ut == "g1") continue;
      s.at_most(tag + "_range" + std::to_string(k), lt + " <= " + ut, "cancellation count range of " + tag + " is nonempty",
                [args, lf, uf](const Point& p, const Ops&) {
                  const auto v = args(p);
                  return lf(v) - uf(v);
                });
    }
}

// ---------------------------------------------------------------------------
// Classical trees

ConstraintSystem classical_hgj() {
  ConstraintSystem s;
  s.variant = "classical-hgj";
  s.description = "binary representation tree, four levels, weights 1/2, 1/4, 1/8";
  const Var b1 = s.var("bits_1", 0, 1, "constraint bits of the level-1 lists");
  const Var b2 = s.var("bits_2", 0, 1, "constraint bits of the level-2 lists");
  const Var l1 = s.var("list_1", 0, 1, "level-1 list size");
  const Var l2 = s.var("list_2", 0, 1, "level-2 list size");
  auto base = [](const Ops& o) { return o.h(1.0 / 8) / 2; };

  s.equal("list_2_size", "list_2 = 2 base - bits_2", "level-2 lists join two half lists on bits_2 bits",
          [=](const Point& x, const Ops& o) { return x[l2] - (2 * base(o) - x[b2]); });
  s.equal("list_1_size", "list_1 = 2 list_2 - (bits_1 - bits_2) + pf1(1/8, 1/8)",
          "level-1 lists: merge on the extra bits, filter to weight 1/4",
          [=](const Point& x, const Ops& o) { return x[l1] - (2 * x[l2] - (x[b1] - x[b2]) + o.pf1(1.0 / 8, 1.0 / 8)); });
  s.equal("one_solution", "2 list_1 - (1 - bits_1) + pf1(1/4, 1/4) = 0", "the root list holds one solution",
          [=](const Point& x, const Ops& o) { return 2 * x[l1] - (1 - x[b1]) + o.pf1(0.25, 0.25); });
  s.at_most("bits_nest", "bits_2 <= bits_1", "constraints nest down the tree",
            [=](const Point& x, const Ops&) { return x[b2] - x[b1]; });
  s.at_most("list_1_saturation", "list_1 <= h(1/4) - bits_1", "level-1 list cannot exceed its residue class",
            [=](const Point& x, const Ops& o) { return x[l1] - (o.h(0.25) - x[b1]); });

  s.term("build_base", "base = h(1/8)/2", "enumerate the half lists", [=](const Point&, const Ops& o) { return base(o); });
  s.term("merge_2", "2 base - bits_2", "level-2 merge output", [=](const Point& x, const Ops& o) { return 2 * base(o) - x[b2]; });
  s.term("merge_1", "2 list_2 - (bits_1 - bits_2)", "level-1 merge before filtering",
         [=](const Point& x, const Ops&) { return 2 * x[l2] - (x[b1] - x[b2]); });
  s.term("merge_0", "2 list_1 - (1 - bits_1)", "root merge before filtering",
         [=](const Point& x, const Ops&) { return 2 * x[l1] - (1 - x[b1]); });
  s.direct_time([=](const Point& x, const Ops& o) {
    const double half = o.h(1.0 / 8) / 2;
    return std::max({half, 2 * half - x[b2], 2 * x[l2] - (x[b1] - x[b2]), 2 * x[l1] - (1 - x[b1])});
  });
  s.memory("mem_base", "base", [=](const Point&, const Ops& o) { return base(o); });
  s.memory("mem_2", "list_2", [=](const Point& x, const Ops&) { return x[l2]; });
  s.memory("mem_1", "list_1", [=](const Point& x, const Ops&) { return x[l1]; });
  return s;
}

// Five-level tree over {-1,0,1} (twos = false) or {-1,0,1,2}. Level j has
// signed weight 1/2^(j+1), a fraction neg_j of -1 and two_j of 2.
ConstraintSystem classical_tree(const std::string& variant, bool twos, bool saturated) {
  ConstraintSystem s;
  s.variant = variant;
  s.description = twos ? "five-level representation tree over {-1,0,1,2}"
                       : std::string("five-level representation tree over {-1,0,1}") +
                             (saturated ? ", saturated lists" : ", lists bounded by saturation");
  std::array<Var, 4> neg{}, two{}, bits{}, list{};
  for (int j = 1; j <= 3; ++j) neg[j] = s.var(idx("neg", j), 0, 0.1, "fraction of -1 at level " + std::to_string(j));
  if (twos)
    for (int j = 1; j <= 3; ++j) two[j] = s.var(idx("two", j), 0, 0.02, "fraction of 2 at level " + std::to_string(j));
  for (int j = 1; j <= 3; ++j) bits[j] = s.var(idx("bits", j), 0, 1, "constraint bits at level " + std::to_string(j));
  for (int j = 1; j <= 3; ++j) list[j] = s.var(idx("list", j), 0, 1, "list size at level " + std::to_string(j));

  auto A = [=](const Point& x, int j) { return j == 0 ? 0.0 : x[neg[j]]; };
  auto G = [=](const Point& x, int j) { return (j == 0 || !twos) ? 0.0 : x[two[j]]; };
  auto B = [](int j) { return 1.0 / static_cast<double>(1 << (j + 1)); };
  auto size = [=](const Point& x, const Ops& o, int j) { return o.dist_size(A(x, j), B(j), G(x, j)); };
  auto args = [=](int j) -> MergeArgs {
    return [=](const Point& x) { return std::array<double, 5>{A(x, j), B(j + 1), G(x, j), A(x, j + 1), G(x, j + 1)}; };
  };
  auto p = [=](const Point& x, const Ops& o, int j) {
    const auto v = args(j)(x);
    return o.pf2plus(v[0], v[1], v[2], v[3], v[4]);
  };
  auto base = [=](const Point& x, const Ops& o) { return size(x, o, 3) / 2; };

  s.equal("list_3_size", "list_3 = |D3| - bits_3", "level-3 lists join two half lists on bits_3 bits",
          [=](const Point& x, const Ops& o) { return x[list[3]] - (size(x, o, 3) - x[bits[3]]); });
  s.equal("list_2_size", "list_2 = 2 list_3 - (bits_2 - bits_3) + p2", "level-2 merge and filter",
          [=](const Point& x, const Ops& o) { return x[list[2]] - (2 * x[list[3]] - (x[bits[2]] - x[bits[3]]) + p(x, o, 2)); });
  s.equal("list_1_size", "list_1 = 2 list_2 - (bits_1 - bits_2) + p1", "level-1 merge and filter",
          [=](const Point& x, const Ops& o) { return x[list[1]] - (2 * x[list[2]] - (x[bits[1]] - x[bits[2]]) + p(x, o, 1)); });
  s.equal("one_solution", "2 list_1 - (1 - bits_1) + p0 = 0", "the root list holds one solution",
          [=](const Point& x, const Ops& o) { return 2 * x[list[1]] - (1 - x[bits[1]]) + p(x, o, 0); });
  for (int j : {2, 1}) {
    auto fn = [=](const Point& x, const Ops& o) { return x[list[j]] - (size(x, o, j) - x[bits[j]]); };
    const std::string text = idx("list", j) + (saturated ? " = " : " <= ") + "|D" + std::to_string(j) + "| - " + idx("bits", j);
    if (saturated)
      s.equal(idx("list", j) + "_saturation", text, "level list fills its residue class", fn);
    else
      s.at_most(idx("list", j) + "_saturation", text, "level list cannot exceed its residue class", fn);
  }
  s.at_most("bits_nest_3", "bits_3 <= bits_2", "constraints nest down the tree",
            [=](const Point& x, const Ops&) { return x[bits[3]] - x[bits[2]]; });
  s.at_most("bits_nest_2", "bits_2 <= bits_1", "constraints nest down the tree",
            [=](const Point& x, const Ops&) { return x[bits[2]] - x[bits[1]]; });
  for (int j = 0; j <= 2; ++j) add_merge_domain(s, "p" + std::to_string(j), args(j));

  s.term("build_base", "|D3|/2", "enumerate the half lists", [=](const Point& x, const Ops& o) { return base(x, o); });
  s.term("merge_3", "list_3", "level-3 join output", [=](const Point& x, const Ops&) { return x[list[3]]; });
  s.term("merge_2", "2 list_3 - (bits_2 - bits_3)", "level-2 merge before filtering",
         [=](const Point& x, const Ops&) { return 2 * x[list[3]] - (x[bits[2]] - x[bits[3]]); });
  s.term("merge_1", "2 list_2 - (bits_1 - bits_2)", "level-1 merge before filtering",
         [=](const Point& x, const Ops&) { return 2 * x[list[2]] - (x[bits[1]] - x[bits[2]]); });
  s.term("merge_0", "2 list_1 - (1 - bits_1)", "root merge before filtering",
         [=](const Point& x, const Ops&) { return 2 * x[list[1]] - (1 - x[bits[1]]); });
  s.direct_time([=](const Point& x, const Ops& o) {
    const double d3 = o.dist_size(x[neg[3]], 1.0 / 16, twos ? x[two[3]] : 0.0);
    return std::max({d3 / 2, x[list[3]], 2 * x[list[3]] - (x[bits[2]] - x[bits[3]]),
                     2 * x[list[2]] - (x[bits[1]] - x[bits[2]]), 2 * x[list[1]] - (1 - x[bits[1]])});
  });
  s.memory("mem_base", "|D3|/2", [=](const Point& x, const Ops& o) { return base(x, o); });
  for (int j = 3; j >= 1; --j)
    s.memory(idx("mem", j), idx("list", j), [=](const Point& x, const Ops&) { return x[list[j]]; });
  return s;
}

// ---------------------------------------------------------------------------
// Asymmetric quantum tree

struct QAsymOptions {
  bool quantum_filter = false;
  bool more_ram = false;
  std::optional<double> memory;
};

ConstraintSystem q_asym_hgj(const std::string& variant, const QAsymOptions& q) {
  ConstraintSystem s;
  s.variant = variant;
  s.description = "asymmetric binary tree: the root splits into weights c + b + 2a = 1/2, final merge by quantum search";
  const Var a = s.var("weight_a", 0, 0.5, "weight of each of the two symmetric parts");
  const Var b = s.var("weight_b", 0, 0.5, "weight of the middle part");
  const Var c = s.var("weight_c", 0, 0.5, "weight of the searched part");
  const Var r = s.var("split_c", 0, 1, "share of the searched part enumerated classically");
  const Var c20 = s.var("bits_2_0", 0, 1, "constraint bits of the searched level-2 list");
  const Var c21 = s.var("bits_2_1", 0, 1, "constraint bits of the symmetric level-2 lists");
  const Var c1 = s.var("bits_1", 0, 1, "constraint bits at level 1");
  const Var l30 = s.var("list_3_0", 0, 1, "searched level-3 list");
  const Var l31 = s.var("list_3_1", 0, 1, "stored level-3 partner of the searched list");
  const Var l32 = s.var("list_3_2", 0, 1, "level-3 lists of the middle part");
  const Var l34 = s.var("list_3_4", 0, 1, "level-3 lists of the symmetric parts");
  const Var l20 = s.var("list_2_0", 0, 1, "searched level-2 list");
  const Var l21 = s.var("list_2_1", 0, 1, "level-2 list of the middle part");
  const Var l22 = s.var("list_2_2", 0, 1, "level-2 lists of the symmetric parts");
  const Var l10 = s.var("list_1_0", 0, 1, "searched level-1 list");
  const Var l11 = s.var("list_1_1", 0, 1, "stored level-1 list");

  s.equal("weights", "weight_c + weight_b + 2 weight_a = 1/2", "the parts add up to the solution weight",
          [=](const Point& x, const Ops&) { return x[c] + x[b] + 2 * x[a] - 0.5; });
  s.equal("list_2_0_size", "list_2_0 = list_3_0 + list_3_1 - bits_2_0", "searched level-2 join",
          [=](const Point& x, const Ops&) { return x[l20] - (x[l30] + x[l31] - x[c20]); });
  s.equal("list_2_1_size", "list_2_1 = 2 list_3_2 - bits_2_0", "middle level-2 join",
          [=](const Point& x, const Ops&) { return x[l21] - (2 * x[l32] - x[c20]); });
  s.equal("list_2_2_size", "list_2_2 = 2 list_3_4 - bits_2_1", "symmetric level-2 joins",
          [=](const Point& x, const Ops&) { return x[l22] - (2 * x[l34] - x[c21]); });
  s.equal("list_1_0_size", "list_1_0 = list_2_0 + list_2_1 - (bits_1 - bits_2_0) + pf1(weight_b, weight_c)",
          "searched level-1 merge and filter", [=](const Point& x, const Ops& o) {
            return x[l10] - (x[l20] + x[l21] - x[c1] + x[c20] + o.pf1(x[b], x[c]));
          });
  s.equal("list_1_1_size", "list_1_1 = 2 list_2_2 - (bits_1 - bits_2_1) + pf1(weight_a, weight_a)",
          "stored level-1 merge and filter", [=](const Point& x, const Ops& o) {
            return x[l11] - (2 * x[l22] - x[c1] + x[c21] + o.pf1(x[a], x[a]));
          });
  s.equal("one_solution", "list_1_0 + list_1_1 - (1 - bits_1) + pf1(weight_b + weight_c, 2 weight_a) = 0",
          "the root holds one solution", [=](const Point& x, const Ops& o) {
            return x[l10] + x[l11] - (1 - x[c1]) + o.pf1(x[b] + x[c], 2 * x[a]);
          });
  auto cap = [&](const std::string& name, const std::string& text, const std::string& role, Expr fn) {
    s.at_most(name, text, role, std::move(fn));
  };
  cap("list_3_0_cap", "list_3_0 <= h(weight_c)(1 - split_c)", "searched half of the c part",
      [=](const Point& x, const Ops& o) { return x[l30] - o.h(x[c]) * (1 - x[r]); });
  cap("list_3_1_cap", "list_3_1 <= h(weight_c) split_c", "stored half of the c part",
      [=](const Point& x, const Ops& o) { return x[l31] - o.h(x[c]) * x[r]; });
  cap("list_3_2_cap", "list_3_2 <= h(weight_b)/2", "half lists of the b part",
      [=](const Point& x, const Ops& o) { return x[l32] - o.h(x[b]) / 2; });
  cap("list_3_4_cap", "list_3_4 <= h(weight_a)/2", "half lists of the a parts",
      [=](const Point& x, const Ops& o) { return x[l34] - o.h(x[a]) / 2; });
  cap("list_2_0_saturation", "list_2_0 <= h(weight_c) - bits_2_0", "level-2 residue class size",
      [=](const Point& x, const Ops& o) { return x[l20] - (o.h(x[c]) - x[c20]); });
  cap("list_2_1_saturation", "list_2_1 <= h(weight_b) - bits_2_0", "level-2 residue class size",
      [=](const Point& x, const Ops& o) { return x[l21] - (o.h(x[b]) - x[c20]); });
  cap("list_2_2_saturation", "list_2_2 <= h(weight_a) - bits_2_1", "level-2 residue class size",
      [=](const Point& x, const Ops& o) { return x[l22] - (o.h(x[a]) - x[c21]); });
  cap("list_1_0_saturation", "list_1_0 <= h(weight_c + weight_b) - bits_1", "level-1 residue class size",
      [=](const Point& x, const Ops& o) { return x[l10] - (o.h(x[c] + x[b]) - x[c1]); });
  cap("list_1_1_saturation", "list_1_1 <= h(2 weight_a) - bits_1", "level-1 residue class size",
      [=](const Point& x, const Ops& o) { return x[l11] - (o.h(2 * x[a]) - x[c1]); });
  cap("bits_nest_0", "bits_2_0 <= bits_1", "constraints nest", [=](const Point& x, const Ops&) { return x[c20] - x[c1]; });
  cap("bits_nest_1", "bits_2_1 <= bits_1", "constraints nest", [=](const Point& x, const Ops&) { return x[c21] - x[c1]; });

  const Var m1 = s.aux("search_pad_2", {[=](const Point& x, const Ops&) { return x[c20] - x[l31]; }},
                       "bits_2_0 - list_3_1", "unmatched bits when searching the level-2 join");
  const Var m2 = s.aux("search_pad_1", {[=](const Point& x, const Ops&) { return x[c1] - x[c20] - x[l21]; }},
                       "bits_1 - bits_2_0 - list_2_1", "unmatched bits when searching the level-1 merge");

  const bool qf = q.quantum_filter && !q.more_ram;
  s.term("build_3_4", "list_3_4", "enumerate the a half lists", [=](const Point& x, const Ops&) { return x[l34]; });
  s.term("build_3_2", "list_3_2", "enumerate the b half lists", [=](const Point& x, const Ops&) { return x[l32]; });
  s.term("build_3_1", "list_3_1", "enumerate the stored c half list", [=](const Point& x, const Ops&) { return x[l31]; });
  s.term("merge_2_1", "2 list_3_2 - bits_2_0", "middle level-2 join", [=](const Point& x, const Ops&) { return 2 * x[l32] - x[c20]; });
  s.term("merge_2_2", "2 list_3_4 - bits_2_1", "symmetric level-2 joins", [=](const Point& x, const Ops&) { return 2 * x[l34] - x[c21]; });
  if (qf)
    s.term("merge_1_1", "2 list_2_2 - (bits_1 - bits_2_1) + pf1(weight_a, weight_a)/2",
           "stored level-1 merge with quantum filtering", [=](const Point& x, const Ops& o) {
             return 2 * x[l22] - x[c1] + x[c21] + 0.5 * o.pf1(x[a], x[a]);
           });
  else
    s.term("merge_1_1", "2 list_2_2 - (bits_1 - bits_2_1)", "stored level-1 merge",
           [=](const Point& x, const Ops&) { return 2 * x[l22] - x[c1] + x[c21]; });
  auto search = [=](const Point& x, const Ops& o, double pad2, double pad1) {
    return 0.5 * (x[l10] + pad2 - o.pf1(x[b], x[c]) + pad1);
  };
  s.term("search", "(list_1_0 + search_pad_2 - pf1(weight_b, weight_c) + search_pad_1)/2",
         "quantum search over the searched branch", [=](const Point& x, const Ops& o) { return search(x, o, x[m1], x[m2]); });
  s.direct_time([=](const Point& x, const Ops& o) {
    const double l1 = 2 * x[l22] - x[c1] + x[c21] + (qf ? 0.5 * o.pf1(x[a], x[a]) : 0.0);
    const double srch = search(x, o, std::max(x[c20] - x[l31], 0.0), std::max(x[c1] - x[c20] - x[l21], 0.0));
    return std::max({x[l34], x[l32], x[l31], 2 * x[l32] - x[c20], 2 * x[l34] - x[c21], l1, srch});
  });

  std::vector<std::pair<std::string, Var>> stored = {{"list_3_1", l31}, {"list_2_1", l21}, {"list_1_1", l11},
                                                     {"list_3_2", l32}, {"list_3_4", l34}, {"list_2_2", l22}};
  for (const auto& [name, v] : stored) s.memory("mem_" + name, name, [v](const Point& x, const Ops&) { return x[v]; });
  if (q.memory) {
    std::vector<std::pair<std::string, Var>> bounded(stored.begin(), stored.begin() + 3);
    // With more RAM only the middle half lists stay bounded besides the QRAM lists.
    if (q.more_ram)
      bounded.emplace_back("list_3_2", l32);
    else
      bounded.insert(bounded.end(), stored.begin() + 3, stored.end());
    const double m = *q.memory;
    for (const auto& [name, v] : bounded)
      s.at_most("memory_" + name, name + " <= m", "memory bound",
                [v, m](const Point& x, const Ops&) { return x[v] - m; });
  }
  return s;
}

// ---------------------------------------------------------------------------
// Quantum walks

ConstraintSystem q_walk(const std::string& variant, bool history_free, std::optional<double> memory) {
  ConstraintSystem s;
  s.variant = variant;
  s.description = history_free
                      ? "quantum walk over a four-level {-1,0,1,2} tree with bucket-modulus lists and guaranteed update time"
                      : "quantum walk over a five-level {-1,0,1,2} tree, level-4 lists split into an enumerated and a "
                        "walked share";
  const int depth = history_free ? 3 : 4;
  std::array<Var, 5> neg{}, two{}, bits{}, list{};
  for (int j = 1; j <= depth; ++j) neg[j] = s.var(idx("neg", j), 0, 0.1, "fraction of -1 at level " + std::to_string(j));
  for (int j = 1; j <= depth; ++j) two[j] = s.var(idx("two", j), 0, 0.02, "fraction of 2 at level " + std::to_string(j));
  for (int j = 1; j <= depth; ++j) bits[j] = s.var(idx("bits", j), 0, 1, "constraint bits at level " + std::to_string(j));
  const Var marked = s.var("marked", -1, 0, "log2 fraction of marked vertices");
  for (int j = 1; j <= 4; ++j) list[j] = s.var(idx("list", j), 0, 1, "walked list size at level " + std::to_string(j));
  std::optional<Var> share;
  if (!history_free) share = s.var("enum_share", 0, 1, "share of the level-4 distribution kept in the vertex lists");

  auto A = [=](const Point& x, int j) { return j == 0 ? 0.0 : x[neg[j]]; };
  auto G = [=](const Point& x, int j) { return j == 0 ? 0.0 : x[two[j]]; };
  auto B = [](int j) { return 1.0 / static_cast<double>(1 << (j + 1)); };
  auto size = [=](const Point& x, const Ops& o, int j) { return o.dist_size(A(x, j), B(j), G(x, j)); };
  auto args = [=](int j) -> MergeArgs {
    return [=](const Point& x) { return std::array<double, 5>{A(x, j), B(j + 1), G(x, j), A(x, j + 1), G(x, j + 1)}; };
  };
  auto p = [=](const Point& x, const Ops& o, int j) {
    const auto v = args(j)(x);
    return o.pf2plus(v[0], v[1], v[2], v[3], v[4]);
  };
  auto L = [=](const Point& x, int j) { return x[list[j]]; };
  auto C = [=](const Point& x, int j) { return j == 0 ? 1.0 : x[bits[j]]; };

  if (history_free) {
    s.equal("list_3_size", "list_3 = 2 list_4 - bits_3", "level-3 join of the walked half lists",
            [=](const Point& x, const Ops&) { return L(x, 3) - (2 * L(x, 4) - C(x, 3)); });
    s.at_most("list_4_cap", "list_4 <= marked/16 + |D3|/2", "walked half lists are subsets of the half distribution",
              [=](const Point& x, const Ops& o) { return L(x, 4) - (x[marked] / 16 + size(x, o, 3) / 2); });
  } else {
    s.equal("enum_bits", "bits_4 = |D4| (1 - enum_share)", "level-4 lists are enumerated on a fixed residue",
            [=](const Point& x, const Ops& o) { return C(x, 4) - size(x, o, 4) * (1 - x[*share]); });
    s.equal("list_3_size", "list_3 = 2 list_4 - (bits_3 - bits_4) + p3", "level-3 merge and filter",
            [=](const Point& x, const Ops& o) { return L(x, 3) - (2 * L(x, 4) - (C(x, 3) - C(x, 4)) + p(x, o, 3)); });
    s.at_most("list_4_cap", "list_4 <= marked/16 + |D4| enum_share", "walked level-4 lists are subsets of the residue class",
              [=](const Point& x, const Ops& o) { return L(x, 4) - (x[marked] / 16 + size(x, o, 4) * x[*share]); });
    s.at_most("bits_nest_4", "bits_4 <= bits_3", "constraints nest",
              [=](const Point& x, const Ops&) { return C(x, 4) - C(x, 3); });
  }
  s.equal("list_2_size", "list_2 = 2 list_3 - (bits_2 - bits_3) + p2", "level-2 merge and filter",
          [=](const Point& x, const Ops& o) { return L(x, 2) - (2 * L(x, 3) - (C(x, 2) - C(x, 3)) + p(x, o, 2)); });
  s.equal("list_1_size", "list_1 = 2 list_2 - (bits_1 - bits_2) + p1", "level-1 merge and filter",
          [=](const Point& x, const Ops& o) { return L(x, 1) - (2 * L(x, 2) - (C(x, 1) - C(x, 2)) + p(x, o, 1)); });
  s.equal("marked_size", "marked = 2 list_1 - (1 - bits_1) + p0", "root list size is the marked fraction",
          [=](const Point& x, const Ops& o) { return x[marked] - (2 * L(x, 1) - (1 - C(x, 1)) + p(x, o, 0)); });
  for (int j = 3; j >= 1; --j) {
    const double scale = 1.0 / static_cast<double>(1 << j);
    s.at_most(idx("list", j) + "_saturation",
              idx("list", j) + " <= marked/" + std::to_string(1 << j) + " + |D" + std::to_string(j) + "| - " + idx("bits", j),
              "vertex lists are subsets of their residue class",
              [=](const Point& x, const Ops& o) { return L(x, j) - (x[marked] * scale + size(x, o, j) - C(x, j)); });
  }
  s.at_most("bits_nest_3", "bits_3 <= bits_2", "constraints nest", [=](const Point& x, const Ops&) { return C(x, 3) - C(x, 2); });
  s.at_most("bits_nest_2", "bits_2 <= bits_1", "constraints nest", [=](const Point& x, const Ops&) { return C(x, 2) - C(x, 1); });
  for (int j = 3; j >= 1; --j)
    s.at_most(idx("list_order", j), idx("list", j) + " <= " + idx("list", j + 1), "lists shrink toward the leaves",
              [=](const Point& x, const Ops&) { return L(x, j) - L(x, j + 1); });
  for (int j = 0; j < depth; ++j) add_merge_domain(s, "p" + std::to_string(j), args(j));

  const Var root_pad = s.aux("root_pad", {[=](const Point& x, const Ops&) { return L(x, 1) - (1 - C(x, 1)); }},
                             "list_1 - (1 - bits_1)", "root merge excess over one element per residue");
  // Setup.
  if (!history_free) {
    s.term("setup_enum", "bits_4", "enumerate the level-4 residue classes", [=](const Point& x, const Ops&) { return C(x, 4); });
    s.term("setup_4", "list_4", "sample the walked level-4 lists", [=](const Point& x, const Ops&) { return L(x, 4); });
    s.term("setup_3", "2 list_4 - (bits_3 - bits_4) + p3/2", "level-3 merge with quantum filtering",
           [=](const Point& x, const Ops& o) { return 2 * L(x, 4) - (C(x, 3) - C(x, 4)) + p(x, o, 3) / 2; });
  } else {
    s.term("setup_4", "list_4", "sample the walked half lists", [=](const Point& x, const Ops&) { return L(x, 4); });
    s.term("setup_3", "list_3", "level-3 join", [=](const Point& x, const Ops&) { return L(x, 3); });
  }
  s.term("setup_2", "2 list_3 - (bits_2 - bits_3) + p2/2", "level-2 merge with quantum filtering",
         [=](const Point& x, const Ops& o) { return 2 * L(x, 3) - (C(x, 2) - C(x, 3)) + p(x, o, 2) / 2; });
  s.term("setup_1", "2 list_2 - (bits_1 - bits_2) + p1/2", "level-1 merge with quantum filtering",
         [=](const Point& x, const Ops& o) { return 2 * L(x, 2) - (C(x, 1) - C(x, 2)) + p(x, o, 1) / 2; });
  s.term("setup_0", "(list_1 + root_pad)/2", "root list by quantum search",
         [=](const Point& x, const Ops&) { return (L(x, 1) + x[root_pad]) / 2; });

  // Walk: -marked/2 + (gap/2 + update) with gap exponent -list_4.
  const std::string walk = "-marked/2 + list_4/2 + ";
  auto walk_term = [=](const Point& x) { return -x[marked] / 2 + L(x, 4) / 2; };
  std::function<double(const Point&, const Ops&)> update;
  if (!history_free) {
    s.term("walk_0", walk + "0", "one update touches polynomially many elements",
           [=](const Point& x, const Ops&) { return walk_term(x); });
    s.term("walk_4", walk + "(list_4 - (bits_3 - bits_4))/2", "level-3 update by quantum search",
           [=](const Point& x, const Ops&) { return walk_term(x) + (L(x, 4) - (C(x, 3) - C(x, 4))) / 2; });
    for (int j = 3; j >= 1; --j) {
      const std::string text = "(" + idx("list", j) + " - (" + (j == 1 ? std::string("1") : idx("bits", j - 1)) + " - " +
                               idx("bits", j) + "))/2";
      s.term(idx("walk", j), walk + text, "update propagation one level up",
             [=](const Point& x, const Ops&) { return walk_term(x) + (L(x, j) - (C(x, j - 1) - C(x, j))) / 2; });
    }
    update = [=](const Point& x, const Ops&) {
      double u = 0;
      u = std::max(u, (L(x, 4) - (C(x, 3) - C(x, 4))) / 2);
      for (int j = 3; j >= 1; --j) u = std::max(u, (L(x, j) - (C(x, j - 1) - C(x, j))) / 2);
      return u;
    };
  } else {
    auto x2 = [=](const Point& x) { return L(x, 3) - (C(x, 2) - C(x, 3)); };
    const Var up2 = s.aux("update_2", {[=](const Point& x, const Ops& o) { return x2(x) + p(x, o, 2) / 2; }},
                          "list_3 - (bits_2 - bits_3) + p2/2", "filtered level-2 changes per update");
    const Var up1 = s.aux("update_1", {[=](const Point& x, const Ops&) { return L(x, 2) - (C(x, 1) - C(x, 2)); }},
                          "list_2 - (bits_1 - bits_2)", "level-1 partners per level-2 change");
    const Var up1f = s.aux("update_1f", {[=](const Point& x, const Ops& o) { return L(x, 2) - (C(x, 1) - C(x, 2)) + p(x, o, 1) / 2; }},
                           "list_2 - (bits_1 - bits_2) + p1/2", "filtered level-1 changes per level-2 change");
    s.term("walk_0", walk + "0", "constant update", [=](const Point& x, const Ops&) { return walk_term(x); });
    s.term("walk_3", walk + "list_3 - (bits_2 - bits_3)", "level-2 partners per update",
           [=](const Point& x, const Ops&) { return walk_term(x) + x2(x); });
    s.term("walk_2", walk + "update_2 + update_1", "level-1 work per update",
           [=](const Point& x, const Ops&) { return walk_term(x) + x[up2] + x[up1]; });
    s.term("walk_1", walk + "(update_2 + update_1f + root_pad)/2", "root work per update by quantum search",
           [=](const Point& x, const Ops&) { return walk_term(x) + (x[up2] + x[up1f] + x[root_pad]) / 2; });
    update = [=](const Point& x, const Ops& o) {
      const double a2 = std::max(x2(x) + p(x, o, 2) / 2, 0.0);
      const double b1 = std::max(L(x, 2) - (C(x, 1) - C(x, 2)), 0.0);
      const double c1 = std::max(L(x, 2) - (C(x, 1) - C(x, 2)) + p(x, o, 1) / 2, 0.0);
      const double e0 = std::max(L(x, 1) - (1 - C(x, 1)), 0.0);
      return std::max({0.0, x2(x), a2 + b1, 0.5 * (a2 + c1 + e0)});
    };
  }
  s.direct_time([=](const Point& x, const Ops& o) {
    double setup = std::max({L(x, 4), 2 * L(x, 3) - (C(x, 2) - C(x, 3)) + p(x, o, 2) / 2,
                             2 * L(x, 2) - (C(x, 1) - C(x, 2)) + p(x, o, 1) / 2,
                             (L(x, 1) + std::max(L(x, 1) - (1 - C(x, 1)), 0.0)) / 2});
    if (history_free)
      setup = std::max(setup, L(x, 3));
    else
      setup = std::max({setup, C(x, 4), 2 * L(x, 4) - (C(x, 3) - C(x, 4)) + p(x, o, 3) / 2});
    WalkCostInputs in;
    in.setup = setup;
    in.update = update(x, o);
    in.check = 0;
    in.marked = x[marked];
    in.gap = johnson_gap(1.0, L(x, 4), 16);
    return walk_total(in);
  });
  for (int j = 1; j <= 4; ++j)
    s.memory(idx("mem", j), idx("list", j), [=](const Point& x, const Ops&) { return L(x, j); });
  if (!history_free) s.memory("mem_enum", "bits_4", [=](const Point& x, const Ops&) { return C(x, 4); });
  if (memory) {
    const double m = *memory;
    for (int j = 1; j <= 4; ++j)
      s.at_most(idx("memory_list", j), idx("list", j) + " <= m", "memory bound",
                [=](const Point& x, const Ops&) { return L(x, j) - m; });
    if (!history_free)
      s.at_most("memory_enum", "bits_4 <= m", "memory bound", [=](const Point& x, const Ops&) { return C(x, 4) - m; });
  }
  return s;
}

constexpr double kWalkMemory = 0.2110;

}  // namespace

std::vector<std::string> model_variants() {
  return {"classical-hgj",       "classical-bcj",       "classical-bcj-relaxed",   "classical-bcj-ext",
          "q-asym-hgj",          "q-asym-hgj-qf",       "q-asym-hgj-tradeoff",     "q-asym-hgj-tradeoff-ram",
          "q-walk",              "q-walk-hf"};
}

ConstraintSystem build_model(const std::string& variant, const ModelOptions& options) {
  auto need_bound = [&] {
    if (!options.memory_bound) throw DomainError(variant + " needs a memory bound");
    if (!(*options.memory_bound > 0 && *options.memory_bound <= 0.5))
      throw DomainError(variant + ": memory bound outside (0, 0.5]");
    return *options.memory_bound;
  };
  ConstraintSystem s;
  if (variant == "classical-hgj") {
    s = classical_hgj();
  } else if (variant == "classical-bcj") {
    s = classical_tree(variant, false, true);
  } else if (variant == "classical-bcj-relaxed") {
    s = classical_tree(variant, false, false);
  } else if (variant == "classical-bcj-ext") {
    s = classical_tree(variant, true, false);
  } else if (variant == "q-asym-hgj") {
    s = q_asym_hgj(variant, {});
  } else if (variant == "q-asym-hgj-qf") {
    s = q_asym_hgj(variant, {true, false, std::nullopt});
  } else if (variant == "q-asym-hgj-tradeoff") {
    s = q_asym_hgj(variant, {true, false, need_bound()});
  } else if (variant == "q-asym-hgj-tradeoff-ram") {
    s = q_asym_hgj(variant, {false, true, need_bound()});
  } else if (variant == "q-walk") {
    s = q_walk(variant, false, options.memory_bound.value_or(kWalkMemory));
  } else if (variant == "q-walk-hf") {
    s = q_walk(variant, true, options.memory_bound);
  } else {
    throw DomainError("unknown variant " + variant);
  }
  s.validate();
  return s;
}

}  // namespace sslab
