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

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <json.hpp>

#include "sslab/errors.hpp"
#include "sslab/qcost.hpp"
#include "sslab/qp.hpp"

using namespace sslab;

namespace {

using Assignment = std::map<std::string, double>;

// Reference parameter blocks, four digits.
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

Assignment as_assignment(const OptimResult& r) { return {r.params.begin(), r.params.end()}; }

OptimResult run(const std::string& variant, int restarts, int threads = 1) {
  OptimOptions o;
  o.restarts = restarts;
  o.threads = threads;
  return optimize(build_model(variant), o);
}

}  // namespace

TEST_CASE("solve_qp on problems with known solutions") {
  SUBCASE("unconstrained") {
    DenseQp qp;
    qp.H = Eigen::Matrix2d{{4, 1}, {1, 3}};
    qp.q = Eigen::Vector2d{1, 2};
    qp.A.resize(0, 2);
    qp.G.resize(0, 2);
    const auto s = solve_qp(qp);
    REQUIRE(s.converged);
    const Eigen::Vector2d expect = -qp.H.inverse() * qp.q;
    CHECK((s.z - expect).norm() < 1e-9);
  }
  SUBCASE("projection onto a line") {
    // min |z - (1, 1)|^2 / 2 subject to z0 + z1 = 1.
    DenseQp qp;
    qp.H = Eigen::Matrix2d::Identity();
    qp.q = Eigen::Vector2d{-1, -1};
    qp.A = Eigen::RowVector2d{1, 1};
    qp.b = Eigen::VectorXd::Constant(1, 1.0);
    qp.G.resize(0, 2);
    const auto s = solve_qp(qp);
    REQUIRE(s.converged);
    CHECK(s.z[0] == doctest::Approx(0.5).epsilon(1e-9));
    CHECK(s.z[1] == doctest::Approx(0.5).epsilon(1e-9));
    CHECK(s.y[0] == doctest::Approx(0.5).epsilon(1e-9));
  }
  SUBCASE("active and inactive inequalities") {
    // min (z0 - 2)^2 + (z1 + 1)^2 subject to z0 <= 1, z1 >= -3.
    DenseQp qp;
    qp.H = 2 * Eigen::Matrix2d::Identity();
    qp.q = Eigen::Vector2d{-4, 2};
    qp.A.resize(0, 2);
    qp.G = Eigen::Matrix2d{{1, 0}, {0, -1}};
    qp.h = Eigen::Vector2d{1, 3};
    const auto s = solve_qp(qp);
    REQUIRE(s.converged);
    CHECK(s.z[0] == doctest::Approx(1).epsilon(1e-9));
    CHECK(s.z[1] == doctest::Approx(-1).epsilon(1e-9));
    CHECK(s.lambda[0] == doctest::Approx(2).epsilon(1e-7));
    CHECK(std::abs(s.lambda[1]) < 1e-7);
  }
  SUBCASE("linear program") {
    // min -z0 - z1 on the unit box with z0 + 2 z1 <= 2.
    DenseQp qp;
    qp.H = Eigen::Matrix2d::Zero();
    qp.q = Eigen::Vector2d{-1, -1};
    qp.A.resize(0, 2);
    qp.G = Eigen::MatrixXd{{1, 2}, {1, 0}, {0, 1}, {-1, 0}, {0, -1}};
    qp.h = Eigen::VectorXd{{2, 1, 1, 0, 0}};
    const auto s = solve_qp(qp);
    REQUIRE(s.converged);
    CHECK(s.z[0] == doctest::Approx(1).epsilon(1e-8));
    CHECK(s.z[1] == doctest::Approx(0.5).epsilon(1e-8));
  }
  DenseQp bad;
  bad.H = Eigen::Matrix2d::Identity();
  bad.q = Eigen::Vector3d::Zero();
  CHECK_THROWS_AS(solve_qp(bad), DomainError);
}

TEST_CASE("relaxed and checked ops agree inside the domain") {
  const auto& r = relaxed_ops();
  const auto& c = checked_ops();
  CHECK(r.h(0.3) == c.h(0.3));
  CHECK(r.bin(0.5, 0.2) == c.bin(0.5, 0.2));
  CHECK(r.dist_size(0.03, 0.125, 0.004) == c.dist_size(0.03, 0.125, 0.004));
  CHECK(r.pf1(0.1, 0.12) == c.pf1(0.1, 0.12));
  CHECK(r.pf2plus(0.03, 0.0625, 0.004, 0.02, 0.001) == doctest::Approx(c.pf2plus(0.03, 0.0625, 0.004, 0.02, 0.001)));
  CHECK_THROWS_AS(c.h(1.2), DomainError);
  CHECK_THROWS_AS(c.bin(0.2, 0.5), DomainError);
  CHECK(std::isfinite(r.h(1.2)));
  CHECK(std::isfinite(r.bin(0.2, 0.5)));
}

TEST_CASE("every variant builds and validates") {
  const auto names = model_variants();
  CHECK(names.size() >= 10);
  for (const auto& v : names) {
    ModelOptions mo;
    if (v.find("tradeoff") != std::string::npos) mo.memory_bound = 0.1;
    const auto s = build_model(v, mo);
    CHECK(s.variant == v);
    CHECK_NOTHROW(s.validate());
    CHECK(!s.terms().empty());
    CHECK(!s.memory_terms().empty());
    CHECK(static_cast<bool>(s.direct_time()));
  }
  CHECK_THROWS_AS(build_model("q-walk-bjlm"), DomainError);
  CHECK_THROWS_AS(build_model("nope"), DomainError);
  CHECK_THROWS_AS(build_model("q-asym-hgj-tradeoff"), DomainError);
}

TEST_CASE("model structure") {
  const auto hgj = build_model("classical-hgj");
  int merges = 0, builds = 0;
  for (const auto& t : hgj.terms()) {
    merges += t.name.rfind("merge_", 0) == 0;
    builds += t.name.rfind("build_", 0) == 0;
  }
  CHECK(merges == 3);
  CHECK(builds == 1);

  const auto ext = build_model("classical-bcj-ext");
  const auto root = std::find_if(ext.equalities().begin(), ext.equalities().end(),
                                 [](const Constraint& c) { return c.name == "one_solution"; });
  REQUIRE(root != ext.equalities().end());
  CHECK(root->text == "2 list_1 - (1 - bits_1) + p0 = 0");

  const auto walk = build_model("q-walk");
  REQUIRE(walk.find("marked"));
  CHECK(walk.vars()[static_cast<std::size_t>(walk.find("marked")->index)].hi == 0);
  CHECK(walk.find("enum_share"));
  CHECK_FALSE(build_model("q-walk-hf").find("enum_share"));
  CHECK_FALSE(walk.find("nope"));
}

TEST_CASE("emit_model lists every name") {
  for (const std::string v : {"classical-hgj", "q-asym-hgj-qf", "q-walk"}) {
    const auto s = build_model(v);
    const std::string text = emit_model(s);
    CHECK(text.find(v) != std::string::npos);
    for (const auto& x : s.vars()) CHECK(text.find(x.name) != std::string::npos);
    for (const auto* group : {&s.equalities(), &s.inequalities(), &s.terms()})
      for (const auto& c : *group) {
        CHECK(text.find(c.name) != std::string::npos);
        CHECK(text.find(c.text) != std::string::npos);
      }
    CHECK(text.find("minimize") != std::string::npos);
  }
}

TEST_CASE("verify_point rejects incomplete or unknown assignments") {
  const auto s = build_model("classical-bcj-ext");
  auto a = bcj_ext_reference();
  a.erase("bits_2");
  CHECK_THROWS_AS(verify_point(s, a), DomainError);
  a = bcj_ext_reference();
  a["bits_9"] = 0.1;
  CHECK_THROWS_AS(verify_point(s, a), DomainError);
  a = bcj_ext_reference();
  a["root_pad"] = 0.1;
  CHECK_THROWS_AS(verify_point(build_model("q-walk-hf"), a), DomainError);
}

TEST_CASE("verify_point reports box violations and domain errors") {
  const auto s = build_model("classical-bcj-ext");
  auto a = bcj_ext_reference();
  a["two_1"] = 0.05;
  const auto rep = verify_point(s, a);
  CHECK(rep.residuals.at("box:two_1") == doctest::Approx(0.03));
  a = bcj_ext_reference();
  a["neg_3"] = -0.5;
  const auto bad = verify_point(s, a);
  CHECK_FALSE(bad.in_domain);
  CHECK(!bad.domain_error.empty());
  CHECK(std::isinf(bad.max_residual));
}

TEST_CASE("reference points are feasible within rounding") {
  struct Case {
    std::string variant;
    Assignment point;
    double time;
    double memory;
  };
  for (const auto& [variant, point, time, memory] :
       {Case{"classical-bcj-ext", bcj_ext_reference(), 0.2830, 0.2829}, Case{"q-walk", walk_reference(), 0.2156, 0.2110},
        Case{"q-walk-hf", walk_hf_reference(), 0.2182, 0.2182}}) {
    CAPTURE(variant);
    const auto rep = verify_point(build_model(variant), point);
    CAPTURE(rep.worst);
    CHECK(rep.in_domain);
    CHECK(rep.max_residual <= 2e-3);
    CHECK(std::abs(rep.time_exponent - time) <= 2e-3);
    CHECK(std::abs(rep.memory_exponent - memory) <= 2e-3);
  }
}

TEST_CASE("optimize on a hand-built system") {
  ConstraintSystem s;
  s.variant = "toy";
  const Var x = s.var("x", 0, 1, "");
  const Var y = s.var("y", 0, 1, "");
  s.equal("sum", "x + y = 0.8", "", [=](const Point& p, const ExponentOps&) { return p[x] + p[y] - 0.8; });
  const Var gap = s.aux("gap", {[=](const Point& p, const ExponentOps&) { return p[x] - 0.5; }}, "x - 0.5", "");
  s.term("a", "y + gap", "", [=](const Point& p, const ExponentOps&) { return p[y] + p[gap]; });
  s.term("b", "x / 2", "", [=](const Point& p, const ExponentOps&) { return p[x] / 2; });
  s.memory("m", "x", [=](const Point& p, const ExponentOps&) { return p[x]; });
  s.direct_time([=](const Point& p, const ExponentOps&) { return std::max(p[y] + std::max(p[x] - 0.5, 0.0), p[x] / 2); });
  OptimOptions o;
  o.restarts = 10;
  const auto r = optimize(s, o);
  REQUIRE(r.success);
  // y = 0.8 - x, so the first term is 0.8 - x below x = 0.5 and 0.3 above.
  CHECK(r.time_exponent == doctest::Approx(0.3).epsilon(1e-7));
  CHECK(r.params.size() == 2);
  CHECK(r.max_residual <= o.tol_feas);
  CHECK(r.restarts_used == 10);

  ConstraintSystem bad;
  bad.variant = "toy-infeasible";
  const Var z = bad.var("z", 0, 1, "");
  bad.equal("out", "z = 2", "", [=](const Point& p, const ExponentOps&) { return p[z] - 2; });
  bad.term("t", "z", "", [=](const Point& p, const ExponentOps&) { return p[z]; });
  bad.memory("m", "z", [=](const Point& p, const ExponentOps&) { return p[z]; });
  const auto f = optimize(bad, o);
  CHECK_FALSE(f.success);
  CHECK(f.feasible_restarts == 0);
  CHECK(f.max_residual > 0.9);
}

TEST_CASE("classical-hgj optimum and its certificate") {
  const auto r = run("classical-hgj", 0);
  REQUIRE(r.success);
  CHECK(r.restarts_used == 200);
  CHECK(std::abs(r.time_exponent - 0.3370) <= 5e-4);
  const auto rep = verify_point(build_model("classical-hgj"), as_assignment(r));
  CHECK(rep.max_residual <= 1e-8);
  CHECK(rep.time_exponent == doctest::Approx(r.time_exponent).epsilon(1e-9));
}

TEST_CASE("determinism across runs and thread counts") {
  const auto a = run("classical-bcj", 12, 1);
  const auto b = run("classical-bcj", 12, 1);
  const auto c = run("classical-bcj", 12, 3);
  CHECK(result_to_json(a) == result_to_json(b));
  CHECK(result_to_json(a) == result_to_json(c));
  CHECK(a.hits == c.hits);
  OptimOptions o;
  o.restarts = 12;
  o.seed = 99;
  const auto d = optimize(build_model("classical-bcj"), o);
  CHECK(result_to_json(a) != result_to_json(d));
}

TEST_CASE("result JSON layout") {
  const auto r = run("classical-hgj", 5);
  const auto j = nlohmann::ordered_json::parse(result_to_json(r));
  std::vector<std::string> keys;
  for (const auto& [k, v] : j.items()) keys.push_back(k);
  CHECK(keys == std::vector<std::string>{"variant", "time_exponent", "memory_exponent", "params", "max_residual",
                                         "restarts_used"});
  std::vector<std::string> params;
  for (const auto& [k, v] : j["params"].items()) params.push_back(k);
  CHECK(params == std::vector<std::string>{"bits_1", "bits_2", "list_1", "list_2"});
  CHECK(j["restarts_used"] == 5);
}

TEST_CASE("more symbols never hurt") {
  const auto hgj = run("classical-hgj", 50);
  const auto bcj = run("classical-bcj", 40);
  const auto ext = run("classical-bcj-ext", 40);
  REQUIRE(hgj.success);
  REQUIRE(bcj.success);
  REQUIRE(ext.success);
  CHECK(ext.time_exponent <= bcj.time_exponent + 1e-9);
  CHECK(bcj.time_exponent <= hgj.time_exponent + 1e-9);
  // Near the reference constraint bits.
  const auto params = as_assignment(ext);
  CHECK(std::abs(params.at("bits_1") - 0.8067) < 0.02);
  CHECK(std::abs(params.at("bits_2") - 0.5509) < 0.02);
  CHECK(std::abs(params.at("bits_3") - 0.2680) < 0.02);
}

TEST_CASE("quantum matching cost agrees with the search term") {
  const auto r = run("q-asym-hgj-qf", 40);
  REQUIRE(r.success);
  const auto p = as_assignment(r);
  const auto& ops = checked_ops();
  const double filter = ops.pf1(p.at("weight_b"), p.at("weight_c"));
  const double t2 = grover_cost(std::max(p.at("bits_2_0"), p.at("list_3_1")), p.at("list_3_1"));
  const double via_calculator = qmatch_cost(t2, p.at("bits_1") - p.at("bits_2_0"), p.at("list_2_1"), filter);
  const double direct =
      0.5 * std::max(p.at("bits_2_0") - p.at("list_3_1"), 0.0) - filter / 2 +
      0.5 * std::max(p.at("bits_1") - p.at("bits_2_0") - p.at("list_2_1"), 0.0);
  CHECK(via_calculator == doctest::Approx(direct).epsilon(1e-12));
  // The model's search term is this superposition cost plus half the searched list.
  const auto sys = build_model("q-asym-hgj-qf");
  std::vector<double> x(sys.vars().size());
  for (std::size_t i = 0; i < x.size(); ++i) {
    const auto& v = sys.vars()[i];
    x[i] = v.auxiliary ? 0.0 : p.at(v.name);
  }
  x[static_cast<std::size_t>(sys.find("search_pad_2")->index)] = std::max(p.at("bits_2_0") - p.at("list_3_1"), 0.0);
  x[static_cast<std::size_t>(sys.find("search_pad_1")->index)] =
      std::max(p.at("bits_1") - p.at("bits_2_0") - p.at("list_2_1"), 0.0);
  const Point pt{std::span<const double>(x)};
  const auto search = std::find_if(sys.terms().begin(), sys.terms().end(), [](const Constraint& c) { return c.name == "search"; });
  REQUIRE(search != sys.terms().end());
  CHECK(search->fn(pt, ops) == doctest::Approx(p.at("list_1_0") / 2 + via_calculator).epsilon(1e-12));
  // Near the reference weights.
  CHECK(std::abs(p.at("weight_a") - 0.0969) < 0.01);
  CHECK(std::abs(p.at("weight_c") - 0.2110) < 0.01);
}

TEST_CASE("default restart counts") {
  CHECK(default_restarts(build_model("classical-bcj-ext")) == 200);
  CHECK(default_restarts(build_model("q-asym-hgj")) == 1000);
  CHECK(default_restarts(build_model("q-walk")) == 200);
}
