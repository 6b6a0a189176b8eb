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

#include "sslab/instance.hpp"
#include "sslab/shape.hpp"

namespace sslab {

struct LevelSize {
  /// log2 of the mean list size at the level; nullopt for empty lists.
  std::optional<double> size_log2;
  double predicted_log2 = 0;
};

struct SolveReport {
  std::string algo;
  int n = 0;
  std::uint64_t seed = 0;
  bool success = false;
  int retries = 0;
  std::vector<LevelSize> levels;
  std::optional<SymbolVector> solution;
  std::int64_t millis = 0;
  /// Largest number of list entries resident at once.
  std::uint64_t peak_entries = 0;
  /// Outer iterations of the Schroeppel-Shamir residue loop.
  std::uint64_t residue_iterations = 0;
};

/// JSON with fields algo, n, seed, success, retries, levels, solution, millis.
std::string report_to_json(const SolveReport& report);

inline constexpr int kMaxHsBits = 48;
inline constexpr int kMaxSsBits = 56;
inline constexpr int kMinTreeBits = 32;
inline constexpr int kDefaultRetries = 64;

SolveReport solve_exhaustive(const SubsetSumInstance& inst);
SolveReport solve_hs(const SubsetSumInstance& inst);
SolveReport solve_ss(const SubsetSumInstance& inst);

/// Finite-n merging tree. Level j in [0, depth-2] holds 2^j lists of vectors
/// with counts[j] constrained modulo 2^c_bits[j]; level depth-1 holds the
/// 2^(depth-1) half lists that build level depth-2 without filtering.
struct TreeParams {
  int n = 0;
  int depth = 0;
  std::vector<DistributionShape> shapes;
  std::vector<SymbolCounts> counts;
  std::vector<int> c_bits;
  /// Entry caps per level, bounded by the saturation size of the level. The
  /// last one caps the sampled half lists (zero keeps them complete).
  std::vector<std::uint64_t> caps;
  /// Largest list the solver may hold before refusing.
  std::uint64_t max_entries = std::uint64_t{1} << 22;
  /// Level-0 split fraction of the asymmetric quantum tree; classical trees
  /// split evenly.
  std::optional<double> split;

  /// Throws DomainError when an invariant fails.
  void validate() const;
};

struct TreeOptions {
  /// Constraint bits stay this many bits below log2 of the representation count.
  double margin_bits = 1.0;
  /// Largest list the solver may hold.
  std::uint64_t max_entries = std::uint64_t{1} << 22;
  /// Cap on each sampled half list; zero keeps the full distribution.
  std::uint64_t half_cap = 0;
  /// Constraint bits are lowered until the predicted chance that one attempt
  /// finds the solution reaches 2^min_success_log2, or lists hit max_entries.
  double min_success_log2 = -3.0;
};

/// Rounds asymptotic level shapes (levels 1..depth-2, level 0 is the binary
/// solution) to counts at length n and picks the constraint bits from the
/// number of representations at each merge.
TreeParams derive_tree_params(int n, const std::vector<DistributionShape>& shapes, const TreeOptions& opt = {});

/// Level shapes for the binary tree: weights 1/4, 1/8.
TreeParams hgj_params(int n, const TreeOptions& opt = {});
/// Level shapes from the optimum of the {-1,0,1,2} tree.
TreeParams bcj_ext_params(int n, const TreeOptions& opt = {});

/// log2 of the expected mean list size at each level, deepest level first.
std::vector<double> predicted_level_sizes(const TreeParams& params);

/// Generic tree solver shared by solve_hgj and solve_bcj_ext.
SolveReport solve_tree(const SubsetSumInstance& inst, const TreeParams& params, int max_retries, std::uint64_t seed,
                       const std::string& algo);

SolveReport solve_hgj(const SubsetSumInstance& inst, const TreeParams& params, int max_retries = kDefaultRetries,
                      std::uint64_t seed = kDefaultSeed);
SolveReport solve_bcj_ext(const SubsetSumInstance& inst, const TreeParams& params, int max_retries = kDefaultRetries,
                          std::uint64_t seed = kDefaultSeed);

std::string tree_params_to_json(const TreeParams& params);
TreeParams tree_params_from_json(const std::string& text);

}  // namespace sslab
