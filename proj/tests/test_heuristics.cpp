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

#include <doctest.h>

#include <algorithm>

#include <json.hpp>

#include "sslab/errors.hpp"
#include "sslab/heuristics.hpp"

using namespace sslab;

namespace {

Heuristic1Config halves_config() {
  Heuristic1Config c;
  c.name = "halves";
  c.n = 32;
  c.left = {{0, 0.125, 0}, Support::Left};
  c.right = {{0, 0.125, 0}, Support::Right};
  c.target = {0, 0.125, 0};
  c.list_size = 256;
  c.c_bits = 6;
  c.seed = 9;
  return c;
}

Heuristic1Config full_config() {
  Heuristic1Config c;
  c.name = "full";
  c.n = 32;
  c.left = {{0, 0.125, 0}, Support::Full};
  c.right = c.left;
  c.target = {0, 0.25, 0};
  c.list_size = 256;
  c.c_bits = 6;
  c.seed = 4;
  return c;
}

}  // namespace

TEST_CASE("random_vector has the requested counts") {
  Rng rng(5);
  const SymbolCounts counts{3, 20, 6, 3};
  for (int i = 0; i < 50; ++i) {
    const auto v = random_vector(32, counts, rng);
    REQUIRE(v.size() == 32);
    CHECK(v.counts() == counts);
  }
}

TEST_CASE("disjoint halves: filter probability one, sizes match") {
  const auto r = check_heuristic1(halves_config());
  CHECK(r.filter_log2 == 0.0);
  CHECK(r.observed_log2 == doctest::Approx(r.predicted_log2).epsilon(0.05));
  CHECK(r.size_pass);
  CHECK(r.rows.size() == 30);
}

TEST_CASE("full support: prediction uses the exact filter probability") {
  const auto r = check_heuristic1(full_config());
  CHECK(r.filter_log2 < 0);
  CHECK(r.asymptotic_log2.has_value());
  CHECK(r.size_pass);
  CHECK(r.uniform_pass);
  CHECK(r.pass);
}

TEST_CASE("heuristic1 input validation") {
  auto c = full_config();
  c.trials = 29;
  CHECK_THROWS_AS(check_heuristic1(c), DomainError);
  c = full_config();
  c.target = {0, 0.5, 0};  // 16 ones cannot come from two vectors with 2 each
  c.left.shape = {0, 0.0625, 0};
  c.right.shape = {0, 0.0625, 0};
  CHECK_THROWS_AS(check_heuristic1(c), DomainError);
  c = halves_config();
  c.right.support = Support::Left;
  CHECK_THROWS_AS(check_heuristic1(c), DomainError);
}

TEST_CASE("heuristic1 is deterministic across thread counts") {
  const auto a = check_heuristic1(full_config(), {}, 1);
  const auto b = check_heuristic1(full_config(), {}, 3);
  CHECK(report_to_json(a) == report_to_json(b));
  auto c = full_config();
  c.seed = 5;
  CHECK(report_to_json(check_heuristic1(c)) != report_to_json(a));
}

TEST_CASE("modulus concentration") {
  ModulusConfig m;
  m.name = "m";
  m.n = 24;
  m.m_log2 = 8;
  m.bound = 24;
  m.trials = 100;
  m.seed = 3;
  const auto r = check_modulus_concentration(m);
  CHECK_FALSE(r.degenerate);
  CHECK(r.pass);
  CHECK(r.mean_ties_ambient == doctest::Approx(r.expected_ties_ambient).epsilon(0.02));
  CHECK(r.tie_tail_double_bound <= r.tie_tail);

  SUBCASE("M = 1 is degenerate") {
    m.m_log2 = 0;
    const auto d = check_modulus_concentration(m);
    CHECK(d.degenerate);
    CHECK_FALSE(d.pass);
  }
  SUBCASE("doubling B never raises the tail") {
    m.bound = 2;
    const auto small = check_modulus_concentration(m);
    m.bound = 4;
    const auto big = check_modulus_concentration(m);
    CHECK(big.tie_tail <= small.tie_tail);
    CHECK(small.tie_tail_double_bound == big.tie_tail);
  }
  SUBCASE("ambient too small") {
    m.m_log2 = 20;
    CHECK_THROWS_AS(check_modulus_concentration(m), DomainError);
  }
  SUBCASE("M above 2^n") {
    m.m_log2 = 25;
    CHECK_THROWS_AS(check_modulus_concentration(m), DomainError);
  }
}

TEST_CASE("bucket loss") {
  BucketLossConfig b;
  b.name = "b";
  b.n = 24;
  b.input = {0, 0.125, 0};
  b.target = {0, 0.25, 0};
  b.repetitions = 30;
  b.seed = 2;
  const auto r = check_bucket_loss(b);
  CHECK(r.bound == 24);
  CHECK(r.unbounded_pairs > 0);
  CHECK(r.loss <= 1.0 / 24);
  CHECK(r.pass);

  SUBCASE("a bound above the list size loses nothing") {
    b.bound = 1u << b.list_bits;
    const auto big = check_bucket_loss(b);
    CHECK(big.loss == 0.0);
    CHECK(big.kept_pairs == big.unbounded_pairs);
  }
  SUBCASE("B = 1 loses pairs") {
    b.bound = 1;
    const auto tight = check_bucket_loss(b);
    CHECK(tight.loss > 1.0 / 24);
    CHECK_FALSE(tight.pass);
  }
}

TEST_CASE("lab config parsing") {
  const auto& def = default_lab_config();
  CHECK(def.version == 1);
  CHECK(def.heuristic1.size() >= 30);
  CHECK(def.thresholds.chi2_alpha == 1e-3);
  CHECK_FALSE(def.modulus.empty());
  CHECK_FALSE(def.bucket_loss.empty());

  const auto minimal = R"({"version": 1, "thresholds": {}, "heuristic1": [], "modulus": [], "bucket_loss": []})";
  CHECK(parse_lab_config(minimal).thresholds.suite_pass_rate == 0.95);
  CHECK_THROWS_AS(parse_lab_config(R"({"version": 1, "extra": 0})"), DomainError);
  CHECK_THROWS_AS(parse_lab_config(R"({"version": 1, "heuristic1": [{"name": "x", "n": 32, "colour": 1}]})"),
                  DomainError);
  CHECK_THROWS_AS(parse_lab_config(R"({"version": 1, "bucket_loss": [{"input": {"beta": 0.1, "support": "up"}}]})"),
                  DomainError);
  CHECK_THROWS_AS(parse_lab_config("not json"), DomainError);
}

TEST_CASE("suite output formats") {
  LabConfig cfg;
  cfg.version = 1;
  cfg.heuristic1 = {full_config()};
  const auto s = run_lab_suite(cfg);
  CHECK(s.heuristic1_pass_rate == 1.0);
  const auto j = nlohmann::json::parse(suite_to_json(s));
  CHECK(j.contains("heuristic1"));
  const auto csv = trials_csv(s);
  CHECK(csv.rfind("kind,name,trial,seed,expected,observed\n", 0) == 0);
  CHECK(std::count(csv.begin(), csv.end(), '\n') == 31);
}
