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

/// Where the vectors of an input list live: all n coordinates, or one half
/// (the other half zero).
enum class Support { Full, Left, Right };

struct ListSpec {
  DistributionShape shape;
  Support support = Support::Full;
};

struct Heuristic1Config {
  std::string name;
  int n = 64;
  ListSpec left;
  ListSpec right;
  DistributionShape target;
  /// Entries sampled per input list and trial (duplicates are merged).
  std::size_t list_size = 1024;
  int c_bits = 10;
  int trials = 30;
  std::uint64_t seed = kDefaultSeed;
};

struct LabThresholds {
  double sigma_slack = 0.5;
  double sigma_multiplier = 3;
  double chi2_alpha = 1e-3;
  int chi2_buckets = 16;
  double suite_pass_rate = 0.95;
  double modulus_tail = 0.01;
  double tie_tail = 0.01;
  /// Largest accepted bucket-loss fraction is this over n.
  double bucket_loss_per_n = 1.0;
  /// Ambient sets smaller than this many times M are refused.
  double ambient_factor = 16;
};

struct TrialRow {
  int trial = 0;
  std::uint64_t seed = 0;
  double expected = 0;
  double observed = 0;
};

struct Heuristic1Report {
  std::string name;
  int n = 0;
  std::uint64_t seed = 0;
  int trials = 0;
  /// log2 of the mean filtered pair count per trial, predicted from the list
  /// sizes, the constraint and the exact filter probability.
  double predicted_log2 = 0;
  double observed_log2 = 0;
  /// Standard error of observed_log2.
  double sigma = 0;
  /// Same prediction with the asymptotic filter exponent, when it applies.
  std::optional<double> asymptotic_log2;
  double filter_log2 = 0;
  std::uint64_t outputs = 0;
  double chi2 = 0;
  double chi2_critical = 0;
  bool size_pass = false;
  bool uniform_pass = false;
  bool pass = false;
  std::vector<TrialRow> rows;
};

/// Samples both lists per trial under a fresh random knapsack and target
/// residue, merges on c_bits and filters to the target counts. Throws
/// DomainError when trials < 30, the supports overlap partially or the
/// filter probability is zero.
Heuristic1Report check_heuristic1(const Heuristic1Config& cfg, const LabThresholds& th = {}, int threads = 1);

struct ModulusConfig {
  std::string name;
  int n = 32;
  int m_log2 = 12;
  std::size_t bound = 32;
  int trials = 1000;
  std::uint64_t seed = kDefaultSeed;
  /// The ambient set: all length-n vectors with these rounded counts.
  DistributionShape ambient{0, 0.25, 0};
};

struct ModulusReport {
  std::string name;
  int n = 0;
  std::uint64_t modulus = 0;
  std::size_t bound = 0;
  int trials = 0;
  std::uint64_t seed = 0;
  double ambient_log2 = 0;
  /// Mean over a of the vectors of the ambient set sharing e0's residue.
  double mean_ties_ambient = 0;
  double expected_ties_ambient = 0;
  /// Fraction of trials with Y(a) > 2 E[Y].
  double ambient_tail = 0;
  /// Ties with e0 in a sampled list of M vectors.
  double mean_ties_list = 0;
  /// Fraction of trials with at least B - 1 ties in the list, and the same
  /// at 2B on the same samples.
  double tie_tail = 0;
  double tie_tail_double_bound = 0;
  /// M = 1 makes every vector tie; such runs never pass.
  bool degenerate = false;
  bool pass = false;
  std::vector<TrialRow> rows;  // expected: Y(a), observed: list ties
};

/// Throws DomainError unless M = 2^m_log2 <= 2^n and the ambient set holds
/// at least ambient_factor * M vectors.
ModulusReport check_modulus_concentration(const ModulusConfig& cfg, const LabThresholds& th = {}, int threads = 1);

struct BucketLossConfig {
  std::string name;
  int n = 24;
  DistributionShape input;
  DistributionShape target;
  /// Entries per list: 2^list_bits.
  int list_bits = 8;
  int c_bits = 8;
  /// Zero means n.
  std::size_t bound = 0;
  int repetitions = 30;
  std::uint64_t seed = kDefaultSeed;
};

struct BucketLossReport {
  std::string name;
  int n = 0;
  std::size_t bound = 0;
  int repetitions = 0;
  std::uint64_t seed = 0;
  std::uint64_t unbounded_pairs = 0;
  std::uint64_t kept_pairs = 0;
  double loss = 0;
  double max_loss = 0;
  bool pass = false;
  std::vector<TrialRow> rows;  // expected: unbounded pairs, observed: kept
};

/// Filtered pairs of a bounded filtered level against the same level with
/// no bound, on identical sampled lists.
BucketLossReport check_bucket_loss(const BucketLossConfig& cfg, const LabThresholds& th = {}, int threads = 1);

/// The versioned lab configuration: thresholds plus the default suites.
struct LabConfig {
  int version = 0;
  LabThresholds thresholds;
  std::vector<Heuristic1Config> heuristic1;
  std::vector<ModulusConfig> modulus;
  std::vector<BucketLossConfig> bucket_loss;
};

LabConfig parse_lab_config(const std::string& json_text);
/// The configuration shipped in config/heuristics.json, compiled in.
const LabConfig& default_lab_config();

struct SuiteReport {
  std::vector<Heuristic1Report> heuristic1;
  std::vector<ModulusReport> modulus;
  std::vector<BucketLossReport> bucket_loss;
  double heuristic1_pass_rate = 0;
  bool pass = false;
};

SuiteReport run_lab_suite(const LabConfig& config, int threads = 1);

std::string report_to_json(const Heuristic1Report& r);
std::string report_to_json(const ModulusReport& r);
std::string report_to_json(const BucketLossReport& r);
std::string suite_to_json(const SuiteReport& s);
/// One line per trial: kind,name,trial,seed,expected,observed.
std::string trials_csv(const SuiteReport& s);

/// Uniform vector of length n with exactly these counts.
SymbolVector random_vector(int n, const SymbolCounts& counts, Rng& rng);

}  // namespace sslab
