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
#include <functional>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "sslab/rng.hpp"

namespace sslab {

/// Entropy and filtering primitives seen by model expressions. The relaxed
/// implementation extends every function continuously to all real inputs;
/// the checked one throws DomainError outside the combinatorial domain.
class ExponentOps {
 public:
  virtual ~ExponentOps() = default;
  virtual double h(double x) const = 0;
  virtual double bin(double omega, double a) const = 0;
  virtual double trin(double omega, double a, double b) const = 0;
  /// log2 |D[alpha, beta, gamma]| / n.
  virtual double dist_size(double alpha, double beta, double gamma) const = 0;
  virtual double pf1(double a, double b) const = 0;
  virtual double pf2plus(double a0, double b, double g0, double a1, double g1) const = 0;
};

const ExponentOps& relaxed_ops();
const ExponentOps& checked_ops();

struct Var {
  int index = -1;
};

/// Read-only view of an assignment, indexed by Var.
class Point {
 public:
  explicit Point(std::span<const double> x) : x_(x) {}
  double operator[](Var v) const { return x_[static_cast<std::size_t>(v.index)]; }

 private:
  std::span<const double> x_;
};

using Expr = std::function<double(const Point&, const ExponentOps&)>;

struct VarInfo {
  std::string name;
  double lo = 0;
  double hi = 1;
  std::string role;
  /// Auxiliary variables stand for max(0, defs...) and are not reported.
  bool auxiliary = false;
  std::vector<Expr> defs;
};

struct Constraint {
  std::string name;
  /// Human-readable form, e.g. "l2 = 2 l3 - (c1 - c2) + pf1(a, a)".
  std::string text;
  std::string role;
  Expr fn;
};

/// Variables with boxes, equalities fn = 0, inequalities fn <= 0, objective
/// terms (time = max of terms, handled through an epigraph variable) and
/// memory terms (memory = max of terms).
class ConstraintSystem {
 public:
  std::string variant;
  std::string description;

  Var var(std::string name, double lo, double hi, std::string role);
  /// Auxiliary variable bounded below by 0 and each definition; inequalities
  /// def - var <= 0 are added automatically.
  Var aux(std::string name, std::vector<Expr> defs, std::string text, std::string role);
  void equal(std::string name, std::string text, std::string role, Expr fn);
  void at_most(std::string name, std::string text, std::string role, Expr fn);
  void term(std::string name, std::string text, std::string role, Expr fn);
  void memory(std::string name, std::string text, Expr fn);
  /// Independent evaluation of the time exponent from the primary variables
  /// with explicit max(), used by the certificate.
  void direct_time(Expr fn) { direct_time_ = std::move(fn); }

  const std::vector<VarInfo>& vars() const { return vars_; }
  const std::vector<Constraint>& equalities() const { return eqs_; }
  const std::vector<Constraint>& inequalities() const { return ineqs_; }
  const std::vector<Constraint>& terms() const { return terms_; }
  const std::vector<Constraint>& memory_terms() const { return mem_; }
  const Expr& direct_time() const { return direct_time_; }
  std::optional<Var> find(const std::string& name) const;

  /// Throws DomainError when a name repeats, a box is empty or a system has
  /// no objective terms.
  void validate() const;

 private:
  std::vector<VarInfo> vars_;
  std::vector<Constraint> eqs_;
  std::vector<Constraint> ineqs_;
  std::vector<Constraint> terms_;
  std::vector<Constraint> mem_;
  Expr direct_time_;
};

struct ModelOptions {
  /// Memory bound m for the tradeoff variants.
  std::optional<double> memory_bound;
};

/// Names accepted by build_model; "q-asym-hgj-tradeoff" and
/// "q-asym-hgj-tradeoff-ram" need ModelOptions::memory_bound.
std::vector<std::string> model_variants();
ConstraintSystem build_model(const std::string& variant, const ModelOptions& options = {});

/// Listing of variables, constraints and objective terms with their roles.
std::string emit_model(const ConstraintSystem& system);

struct OptimOptions {
  int restarts = 0;  // 0 picks the per-system default
  std::uint64_t seed = kDefaultSeed;
  double tol_feas = 1e-8;
  double tol_obj = 5e-4;
  int threads = 1;
  int max_iterations = 300;
};

struct ResidualReport {
  std::map<std::string, double> residuals;  // by constraint name, >= 0
  double max_residual = 0;
  std::string worst;
  double time_exponent = 0;
  double memory_exponent = 0;
  /// False when a checked function rejected an argument.
  bool in_domain = true;
  std::string domain_error;
};

struct OptimResult {
  std::string variant;
  bool success = false;
  double time_exponent = 0;
  double memory_exponent = 0;
  /// Primary variables in declaration order.
  std::vector<std::pair<std::string, double>> params;
  double max_residual = 0;
  int restarts_used = 0;
  int feasible_restarts = 0;
  /// Feasible restarts within tol_obj of the best.
  int hits = 0;
};

int default_restarts(const ConstraintSystem& system);

/// Multi-start SQP. Every restart is independent and seeded from
/// (seed, index), so the result does not depend on the thread count. The
/// reported point is re-evaluated with checked_ops; success requires the
/// certificate residual to be within tol_feas.
OptimResult optimize(const ConstraintSystem& system, const OptimOptions& options = {});

/// Residuals and objectives at an assignment of the primary variables;
/// auxiliary variables are filled from their definitions. Throws DomainError
/// when a primary variable is missing or unknown.
ResidualReport verify_point(const ConstraintSystem& system, const std::map<std::string, double>& assignment,
                            const ExponentOps& ops = checked_ops());

std::string result_to_json(const OptimResult& result);

}  // namespace sslab
