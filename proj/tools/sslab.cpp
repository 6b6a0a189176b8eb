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

#include <CLI11.hpp>
#include <json.hpp>

#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <sstream>
#include <thread>

#include "sslab/combinatorics.hpp"
#include "sslab/errors.hpp"
#include "sslab/heuristics.hpp"
#include "sslab/instance.hpp"
#include "sslab/optimizer.hpp"
#include "sslab/qcost.hpp"
#include "sslab/solvers.hpp"

using namespace sslab;

namespace {

enum Exit { kOk = 0, kUsage = 1, kFailure = 2, kRefused = 3 };

/// Usage problems found after CLI11 has parsed the flags.
struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct Globals {
  std::uint64_t seed = kDefaultSeed;
  int threads = 0;  // 0: SSLAB_THREADS, then hardware concurrency
  bool verbose = false;
};

int resolve_threads(int flag) {
  if (flag > 0) return flag;
  if (const char* env = std::getenv("SSLAB_THREADS"); env && *env) {
    char* end = nullptr;
    const long v = std::strtol(env, &end, 10);
    if (*end != '\0' || v < 1 || v > 4096) throw UsageError("SSLAB_THREADS must be a positive integer");
    return static_cast<int>(v);
  }
  return std::max(1u, std::thread::hardware_concurrency());
}

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw UsageError("cannot read " + path);
  std::ostringstream os;
  os << in.rdbuf();
  return os.str();
}

std::string fmt6(double x) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.6f", x);
  return buf;
}

/// "1:3,-1:1" -> three ones, one minus-one, zeros for the rest of n.
SymbolCounts parse_counts(int n, const std::string& text) {
  SymbolCounts c;
  std::stringstream ss(text);
  std::string item;
  bool seen[4] = {false, false, false, false};
  while (std::getline(ss, item, ',')) {
    const auto colon = item.find(':');
    if (colon == std::string::npos) throw UsageError("counts: expected symbol:count, got '" + item + "'");
    int sym = 0, cnt = 0;
    try {
      size_t used = 0;
      sym = std::stoi(item.substr(0, colon), &used);
      if (used != colon) throw UsageError("");
      const std::string rest = item.substr(colon + 1);
      cnt = std::stoi(rest, &used);
      if (used != rest.size()) throw UsageError("");
    } catch (const std::exception&) {
      throw UsageError("counts: expected symbol:count, got '" + item + "'");
    }
    if (sym < -1 || sym > 2 || sym == 0) throw UsageError("counts: symbols are -1, 1 and 2");
    if (cnt < 0) throw UsageError("counts: negative count");
    if (seen[sym + 1]) throw UsageError("counts: symbol " + std::to_string(sym) + " given twice");
    seen[sym + 1] = true;
    c.of(sym) = cnt;
  }
  c.zero = n - c.minus - c.one - c.two;
  if (c.zero < 0) throw UsageError("counts: more nonzero symbols than n");
  return c;
}

/// Accepts the printed form, e.g. "10-12" for (1, 0, -1, 2).
SymbolVector parse_vector(const std::string& text) {
  std::vector<std::int8_t> v;
  for (size_t i = 0; i < text.size(); ++i) {
    if (text[i] == '-' && i + 1 < text.size() && text[i + 1] == '1') {
      v.push_back(-1);
      ++i;
    } else if (text[i] >= '0' && text[i] <= '2') {
      v.push_back(static_cast<std::int8_t>(text[i] - '0'));
    } else {
      throw UsageError("vector: unexpected character in '" + text + "'");
    }
  }
  return SymbolVector(std::move(v));
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Subset-sum representation toolkit: solvers, exponent optimizer, cost models and checks."};
  app.require_subcommand(1);
  app.fallthrough();
  Globals g;
  app.add_option("--seed", g.seed, "Random seed")->default_val(kDefaultSeed)->capture_default_str();
  app.add_option("--threads", g.threads, "Worker threads (default: SSLAB_THREADS, else all cores)")
      ->check(CLI::Range(1, 4096));
  app.add_flag("-v,--verbose", g.verbose, "Progress on stderr");

  // solve
  auto* solve = app.add_subcommand("solve", "Solve a random or given instance");
  std::string algo, params_file, instance_file;
  int solve_n = 0, retries = kDefaultRetries;
  bool timing = false;
  solve->add_option("--algo", algo, "Algorithm")
      ->required()
      ->check(CLI::IsMember({"exhaustive", "hs", "ss", "hgj", "bcj-ext"}));
  auto* n_opt = solve->add_option("--n", solve_n, "Instance size for a random planted instance");
  auto* inst_opt = solve->add_option("--instance", instance_file, "Instance JSON file");
  n_opt->excludes(inst_opt);
  solve->add_option("--params", params_file, "Tree parameter JSON (hgj, bcj-ext)");
  solve->add_option("--retries", retries, "Tree solver retries")->check(CLI::Range(1, 1 << 20))->capture_default_str();
  solve->add_flag("--timing", timing, "Report wall-clock millis (otherwise 0, keeping output reproducible)");

  // optimize
  auto* opt = app.add_subcommand("optimize", "Minimize the time exponent of a model variant");
  std::string variant;
  OptimOptions oo;
  std::optional<double> memory_bound;
  bool emit = false;
  opt->add_option("--variant", variant, "Model variant")->required()->check(CLI::IsMember(model_variants()));
  opt->add_option("--restarts", oo.restarts, "Restarts (0: per-model default)")->check(CLI::NonNegativeNumber);
  opt->add_option("--tol", oo.tol_obj, "Objective tolerance for counting restarts at the optimum")
      ->check(CLI::PositiveNumber)
      ->capture_default_str();
  opt->add_option("--tol-feas", oo.tol_feas, "Feasibility tolerance of the certificate")
      ->check(CLI::PositiveNumber)
      ->capture_default_str();
  opt->add_option("--memory-bound", memory_bound, "Memory bound m (tradeoff and walk variants)");
  opt->add_flag("--emit-model", emit, "Print the constraint system instead of optimizing");

  // cost
  auto* cost = app.add_subcommand("cost", "Closed-form quantum cost calculators");
  cost->require_subcommand(1);
  cost->fallthrough();
  double c_space = 0, c_sol = 0, c_t1 = 0, c_c = 0, c_l2 = 0, c_p = 0, c_l = 0, c_N = 0, c_R = 0;
  int c_lists = 1;
  WalkCostInputs walk;
  auto* grover = cost->add_subcommand("grover", "Amplitude amplification");
  grover->add_option("--space", c_space, "log2 search space / n")->required();
  grover->add_option("--solutions", c_sol, "log2 solutions / n")->required();
  auto* qmatch = cost->add_subcommand("qmatch", "Quantum matching of a superposed list against a stored one");
  qmatch->add_option("--t-l1", c_t1, "Cost of preparing the first list")->required();
  qmatch->add_option("--c", c_c, "Constraint bits")->required();
  qmatch->add_option("--l2", c_l2, "Stored list size")->required();
  qmatch->add_option("--p", c_p, "Filter exponent (<= 0)")->default_val(0);
  auto* qfilter = cost->add_subcommand("qfilter", "Quantum filtering of a merged pair of lists");
  qfilter->add_option("--l", c_l, "List size")->required();
  qfilter->add_option("--c", c_c, "Constraint bits")->required();
  qfilter->add_option("--p", c_p, "Filter exponent (<= 0)")->required();
  auto* johnson = cost->add_subcommand("johnson", "Spectral gap of a product of Johnson graphs");
  johnson->add_option("--N", c_N, "log2 ground set / n")->required();
  johnson->add_option("--R", c_R, "log2 vertex subset / n")->required();
  johnson->add_option("--lists", c_lists, "Number of lists")->required()->check(CLI::PositiveNumber);
  auto* walkc = cost->add_subcommand("walk", "Total cost of a quantum walk search");
  walkc->add_option("--setup", walk.setup, "Setup")->required();
  walkc->add_option("--update", walk.update, "Update")->required();
  walkc->add_option("--check", walk.check, "Check")->default_val(0);
  walkc->add_option("--marked", walk.marked, "log2 marked fraction (<= 0)")->required();
  walkc->add_option("--gap", walk.gap, "log2 spectral gap (<= 0)")->required();

  // tradeoff
  auto* trade = app.add_subcommand("tradeoff", "Time exponent against a grid of memory bounds, as CSV");
  std::string trade_variant = "q-asym-hgj-tradeoff";
  std::vector<double> grid;
  int points = 0;
  double from = 0.05, to = 0.30;
  OptimOptions to_opts;
  trade->add_option("--variant", trade_variant, "Tradeoff model")
      ->check(CLI::IsMember({"q-asym-hgj-tradeoff", "q-asym-hgj-tradeoff-ram"}))
      ->capture_default_str();
  auto* m_opt = trade->add_option("--m", grid, "Memory bounds")->delimiter(',');
  auto* pts_opt = trade->add_option("--points", points, "Evenly spaced grid size")->check(CLI::Range(1, 1000));
  m_opt->excludes(pts_opt);
  trade->add_option("--from", from, "First grid point")->capture_default_str();
  trade->add_option("--to", to, "Last grid point")->capture_default_str();
  trade->add_option("--restarts", to_opts.restarts, "Restarts per point (0: per-model default)")
      ->check(CLI::NonNegativeNumber);

  // verify-heuristic
  auto* vh = app.add_subcommand("verify-heuristic", "Monte-Carlo checks of the list-size heuristic and bucket-list bounds");
  std::string config_file, only = "all";
  bool csv = false;
  vh->add_option("--config", config_file, "Lab configuration JSON (default: the shipped one)");
  vh->add_option("--only", only, "Subset of the suite")
      ->check(CLI::IsMember({"all", "heuristic1", "modulus", "bucket-loss"}))
      ->capture_default_str();
  vh->add_flag("--csv", csv, "Per-trial rows as CSV instead of the JSON report");

  // rank / unrank
  auto* rk = app.add_subcommand("rank", "Index of a vector among those with its counts");
  std::string vec_text;
  rk->add_option("vector", vec_text, "Vector, e.g. 10-12")->required();
  auto* urk = app.add_subcommand("unrank", "Vector at an index among those with given counts");
  int un_n = 0;
  std::string counts_text, index_text;
  urk->add_option("--n", un_n, "Length")->required()->check(CLI::Range(1, 4096));
  urk->add_option("--counts", counts_text, "Nonzero symbol counts, e.g. 1:3,-1:1,2:0")->required();
  urk->add_option("index", index_text, "Decimal index")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kUsage;
  }

  try {
    if (*solve) {
      SubsetSumInstance inst;
      if (!instance_file.empty()) {
        inst = instance_from_json(read_file(instance_file));
      } else {
        if (solve_n == 0) throw UsageError("solve: give --n or --instance");
        inst = random_instance(solve_n, g.seed);
      }
      SolveReport r;
      if (algo == "exhaustive") {
        r = solve_exhaustive(inst);
      } else if (algo == "hs") {
        r = solve_hs(inst);
      } else if (algo == "ss") {
        r = solve_ss(inst);
      } else {
        if (inst.n < kMinTreeBits)
          throw DomainError(algo + ": n = " + std::to_string(inst.n) + " is below the minimum " +
                            std::to_string(kMinTreeBits));
        TreeParams p;
        if (!params_file.empty()) {
          p = tree_params_from_json(read_file(params_file));
          if (p.n != inst.n) throw DomainError("solve: parameter file is for n = " + std::to_string(p.n));
        } else {
          p = algo == "hgj" ? hgj_params(inst.n) : bcj_ext_params(inst.n);
        }
        r = algo == "hgj" ? solve_hgj(inst, p, retries, g.seed) : solve_bcj_ext(inst, p, retries, g.seed);
      }
      r.seed = g.seed;
      if (!timing) r.millis = 0;
      std::cout << report_to_json(r) << "\n";
      if (g.verbose) std::cerr << "solve: " << (r.success ? "found" : "no solution") << " after " << r.retries
                               << " retries\n";
      return r.success ? kOk : kFailure;
    }

    if (*opt) {
      ModelOptions mo;
      std::string v = variant;
      if (memory_bound) {
        if (v == "q-asym-hgj" || v == "q-asym-hgj-qf") v = "q-asym-hgj-tradeoff";
        else if (v != "q-asym-hgj-tradeoff" && v != "q-asym-hgj-tradeoff-ram" && v != "q-walk" && v != "q-walk-hf")
          throw UsageError("optimize: --memory-bound does not apply to " + v);
        mo.memory_bound = memory_bound;
      }
      const auto system = build_model(v, mo);
      if (emit) {
        std::cout << emit_model(system);
        return kOk;
      }
      oo.seed = g.seed;
      oo.threads = resolve_threads(g.threads);
      if (g.verbose)
        std::cerr << "optimize: " << v << ", " << (oo.restarts ? oo.restarts : default_restarts(system))
                  << " restarts on " << oo.threads << " threads\n";
      const auto r = optimize(system, oo);
      std::cout << result_to_json(r) << "\n";
      if (!r.success) {
        std::cerr << "optimize: no feasible point (best residual " << r.max_residual << ")\n";
        return kFailure;
      }
      return kOk;
    }

    if (*cost) {
      nlohmann::ordered_json j;
      double value = 0;
      if (*grover) {
        value = grover_cost(c_space, c_sol);
        j["calculator"] = "grover";
        j["inputs"] = {{"space", c_space}, {"solutions", c_sol}};
      } else if (*qmatch) {
        value = qmatch_cost(c_t1, c_c, c_l2, c_p);
        j["calculator"] = "qmatch";
        j["inputs"] = {{"t_l1", c_t1}, {"c", c_c}, {"l2", c_l2}, {"p", c_p}};
      } else if (*qfilter) {
        value = qfilter_pair_cost(c_l, c_c, c_p);
        j["calculator"] = "qfilter";
        j["inputs"] = {{"l", c_l}, {"c", c_c}, {"p", c_p}};
      } else if (*johnson) {
        value = johnson_gap(c_N, c_R, c_lists);
        j["calculator"] = "johnson";
        j["inputs"] = {{"N", c_N}, {"R", c_R}, {"lists", c_lists}};
      } else {
        value = walk_total(walk);
        j["calculator"] = "walk";
        j["inputs"] = {{"setup", walk.setup},
                       {"update", walk.update},
                       {"check", walk.check},
                       {"marked", walk.marked},
                       {"gap", walk.gap}};
      }
      j["value"] = value;
      std::cout << j.dump() << "\n";
      return kOk;
    }

    if (*trade) {
      if (grid.empty()) {
        if (points == 0) throw UsageError("tradeoff: give --m or --points");
        if (!(from <= to)) throw UsageError("tradeoff: --from must not exceed --to");
        for (int i = 0; i < points; ++i) grid.push_back(points == 1 ? from : from + (to - from) * i / (points - 1));
      }
      to_opts.seed = g.seed;
      to_opts.threads = resolve_threads(g.threads);
      int done = 0;
      const auto rows = tradeoff_curve(trade_variant, grid, to_opts, [&](const TradeoffRow& row) {
        ++done;
        if (g.verbose)
          std::cerr << "tradeoff: " << done << "/" << grid.size() << " m=" << fmt6(row.m)
                    << " t=" << fmt6(row.time_exponent) << "\n";
      });
      std::cout << tradeoff_csv(rows);
      return kOk;
    }

    if (*vh) {
      LabConfig cfg = config_file.empty() ? default_lab_config() : parse_lab_config(read_file(config_file));
      if (only != "all") {
        if (only != "heuristic1") cfg.heuristic1.clear();
        if (only != "modulus") cfg.modulus.clear();
        if (only != "bucket-loss") cfg.bucket_loss.clear();
      }
      const int threads = resolve_threads(g.threads);
      if (g.verbose)
        std::cerr << "verify-heuristic: " << cfg.heuristic1.size() << " size checks, " << cfg.modulus.size()
                  << " modulus checks, " << cfg.bucket_loss.size() << " bucket-loss checks\n";
      const auto s = run_lab_suite(cfg, threads);
      std::cout << (csv ? trials_csv(s) : suite_to_json(s) + "\n");
      if (!s.pass) {
        std::cerr << "verify-heuristic: suite failed\n";
        return kFailure;
      }
      return kOk;
    }

    if (*rk) {
      const auto v = parse_vector(vec_text);
      if (v.size() == 0) throw UsageError("rank: empty vector");
      std::cout << rank(v).get_str() << "\n";
      return kOk;
    }

    if (*urk) {
      const auto counts = parse_counts(un_n, counts_text);
      BigInt index;
      if (index_text.empty() || index_text.find_first_not_of("0123456789") != std::string::npos ||
          index.set_str(index_text, 10) != 0)
        throw UsageError("unrank: index must be a nonnegative decimal");
      const BigInt total = multinomial(counts);
      if (index >= total)
        throw UsageError("unrank: index out of range [0, " + total.get_str() + ") for counts " + counts.to_string());
      std::cout << unrank(un_n, counts, index).to_string() << "\n";
      return kOk;
    }
  } catch (const UsageError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kUsage;
  } catch (const DomainError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kUsage;
  } catch (const ResourceError& e) {
    std::cerr << "refused: " << e.what() << "\n";
    return kRefused;
  } catch (const std::exception& e) {
    std::cerr << "failed: " << e.what() << "\n";
    return kFailure;
  }
  return kUsage;
}
