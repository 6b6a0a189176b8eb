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

#include "sslab/optimizer.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <atomic>
#include <cmath>
#include <json.hpp>
#include <limits>
#include <set>
#include <sstream>
#include <thread>

#include "sslab/entropy.hpp"
#include "sslab/errors.hpp"
#include "sslab/filtering.hpp"
#include "sslab/qp.hpp"
#include "sslab/shape.hpp"

namespace sslab {

// ---------------------------------------------------------------------------
// Primitives

namespace {

class RelaxedOps final : public ExponentOps {
 public:
  double h(double x) const override { return relaxed::h(x); }
  double bin(double omega, double a) const override { return relaxed::bin(omega, a); }
  double trin(double omega, double a, double b) const override { return relaxed::trin(omega, a, b); }
  double dist_size(double alpha, double beta, double gamma) const override {
    return relaxed::f(alpha, alpha + beta - 2 * gamma, gamma);
  }
  double pf1(double a, double b) const override { return relaxed::pf1(a, b); }
  double pf2plus(double a0, double b, double g0, double a1, double g1) const override {
    return relaxed::pf2plus(a0, b, g0, a1, g1);
  }
};

class CheckedOps final : public ExponentOps {
 public:
  double h(double x) const override { return entropy_h(x); }
  double bin(double omega, double a) const override { return sslab::bin(omega, a); }
  double trin(double omega, double a, double b) const override { return sslab::trin(omega, a, b); }
  double dist_size(double alpha, double beta, double gamma) const override {
    return dist_size_exponent(DistributionShape{alpha, beta, gamma});
  }
  double pf1(double a, double b) const override {
    const auto p = sslab::pf1(a, b);
    if (!p) throw DomainError("pf1: inputs cannot sum into the target");
    return *p;
  }
  double pf2plus(double a0, double b, double g0, double a1, double g1) const override {
    const auto p = sslab::pf2plus(a0, b, g0, a1, g1);
    if (!p) throw DomainError("pf2plus: inputs cannot sum into the target");
    return *p;
  }
};

}  // namespace

const ExponentOps& relaxed_ops() {
  static const RelaxedOps ops;
  return ops;
}

const ExponentOps& checked_ops() {
  static const CheckedOps ops;
  return ops;
}

// ---------------------------------------------------------------------------
// ConstraintSystem

Var ConstraintSystem::var(std::string name, double lo, double hi, std::string role) {
  vars_.push_back({std::move(name), lo, hi, std::move(role), false, {}});
  return Var{static_cast<int>(vars_.size()) - 1};
}

Var ConstraintSystem::aux(std::string name, std::vector<Expr> defs, std::string text, std::string role) {
  VarInfo info{name, 0.0, 4.0, role, true, defs};
  vars_.push_back(std::move(info));
  const Var v{static_cast<int>(vars_.size()) - 1};
  for (std::size_t k = 0; k < defs.size(); ++k) {
    Expr def = defs[k];
    ineqs_.push_back({name + "_ge" + std::to_string(k + 1), name + " >= " + text, role,
                      [def, v](const Point& x, const ExponentOps& o) { return def(x, o) - x[v]; }});
  }
  return v;
}

void ConstraintSystem::equal(std::string name, std::string text, std::string role, Expr fn) {
  eqs_.push_back({std::move(name), std::move(text), std::move(role), std::move(fn)});
}

void ConstraintSystem::at_most(std::string name, std::string text, std::string role, Expr fn) {
  ineqs_.push_back({std::move(name), std::move(text), std::move(role), std::move(fn)});
}

void ConstraintSystem::term(std::string name, std::string text, std::string role, Expr fn) {
  terms_.push_back({std::move(name), std::move(text), std::move(role), std::move(fn)});
}

void ConstraintSystem::memory(std::string name, std::string text, Expr fn) {
  mem_.push_back({std::move(name), std::move(text), "", std::move(fn)});
}

std::optional<Var> ConstraintSystem::find(const std::string& name) const {
  for (std::size_t i = 0; i < vars_.size(); ++i)
    if (vars_[i].name == name) return Var{static_cast<int>(i)};
  return std::nullopt;
}

void ConstraintSystem::validate() const {
  std::set<std::string> names;
  for (const auto& v : vars_) {
    if (!names.insert(v.name).second) throw DomainError("ConstraintSystem: duplicate name " + v.name);
    if (!(v.lo <= v.hi)) throw DomainError("ConstraintSystem: empty box for " + v.name);
  }
  for (const auto* group : {&eqs_, &ineqs_, &terms_, &mem_})
    for (const auto& c : *group) {
      if (!names.insert(c.name).second) throw DomainError("ConstraintSystem: duplicate name " + c.name);
      if (!c.fn) throw DomainError("ConstraintSystem: constraint without expression " + c.name);
    }
  if (terms_.empty()) throw DomainError("ConstraintSystem: no objective terms");
}

std::string emit_model(const ConstraintSystem& sys) {
  std::ostringstream out;
  out << "# " << sys.variant << "\n";
  if (!sys.description.empty()) out << "# " << sys.description << "\n";
  out << "\nvariables:\n";
  for (const auto& v : sys.vars()) {
    if (v.auxiliary) continue;
    out << "  " << v.name << " in [" << v.lo << ", " << v.hi << "]  ; " << v.role << "\n";
  }
  bool any_aux = false;
  for (const auto& v : sys.vars())
    if (v.auxiliary) {
      if (!any_aux) out << "\nauxiliary (max with 0):\n";
      any_aux = true;
      out << "  " << v.name << "  ; " << v.role << "\n";
    }
  out << "\nminimize time = max of:\n";
  for (const auto& c : sys.terms()) out << "  " << c.name << ": " << c.text << "  ; " << c.role << "\n";
  out << "\nsubject to:\n";
  for (const auto& c : sys.equalities()) out << "  " << c.name << ": " << c.text << "  ; " << c.role << "\n";
  for (const auto& c : sys.inequalities()) out << "  " << c.name << ": " << c.text << "  ; " << c.role << "\n";
  if (!sys.memory_terms().empty()) {
    out << "\nmemory = max of:\n";
    for (const auto& c : sys.memory_terms()) out << "  " << c.name << ": " << c.text << "\n";
  }
  return out.str();
}

// ---------------------------------------------------------------------------
// Certificate

namespace {

double max_of(const std::vector<Constraint>& cs, const Point& p, const ExponentOps& ops) {
  double m = -std::numeric_limits<double>::infinity();
  for (const auto& c : cs) m = std::max(m, c.fn(p, ops));
  return m;
}

void fill_aux(const ConstraintSystem& sys, std::vector<double>& x, const ExponentOps& ops) {
  // Definitions only reference primary variables.
  const Point p(x);
  for (std::size_t i = 0; i < sys.vars().size(); ++i) {
    const auto& v = sys.vars()[i];
    if (!v.auxiliary) continue;
    double m = 0;
    for (const auto& d : v.defs) m = std::max(m, d(p, ops));
    x[i] = m;
  }
}

}  // namespace

ResidualReport verify_point(const ConstraintSystem& sys, const std::map<std::string, double>& assignment,
                            const ExponentOps& ops) {
  std::vector<double> x(sys.vars().size(), 0.0);
  std::set<std::string> seen;
  for (std::size_t i = 0; i < sys.vars().size(); ++i) {
    const auto& v = sys.vars()[i];
    if (v.auxiliary) continue;
    auto it = assignment.find(v.name);
    if (it == assignment.end()) throw DomainError("verify_point: missing variable " + v.name);
    x[i] = it->second;
    seen.insert(v.name);
  }
  for (const auto& [name, _] : assignment)
    if (!seen.count(name)) throw DomainError("verify_point: unknown variable " + name);

  ResidualReport r;
  auto note = [&](const std::string& name, double res) {
    r.residuals[name] = res;
    if (r.worst.empty() || res > r.max_residual) {
      r.worst = name;
      r.max_residual = res;
    }
  };
  try {
    fill_aux(sys, x, ops);
    const Point p(x);
    for (const auto& v : sys.vars()) {
      if (v.auxiliary) continue;
      const double xi = p[*sys.find(v.name)];
      note("box:" + v.name, std::max({0.0, v.lo - xi, xi - v.hi}));
    }
    for (const auto& c : sys.equalities()) note(c.name, std::abs(c.fn(p, ops)));
    for (const auto& c : sys.inequalities()) note(c.name, std::max(0.0, c.fn(p, ops)));
    r.time_exponent = sys.direct_time() ? sys.direct_time()(p, ops) : max_of(sys.terms(), p, ops);
    r.memory_exponent = sys.memory_terms().empty() ? 0.0 : max_of(sys.memory_terms(), p, ops);
  } catch (const DomainError& e) {
    r.in_domain = false;
    r.domain_error = e.what();
    r.max_residual = std::numeric_limits<double>::infinity();
  }
  return r;
}

// ---------------------------------------------------------------------------
// SQP engine

namespace {

using Eigen::MatrixXd;
using Eigen::VectorXd;

// The system with the epigraph variable t appended: minimize t subject to
// equalities, inequalities and term - t <= 0.
class Problem {
 public:
  explicit Problem(const ConstraintSystem& sys) : sys_(sys), nv_(static_cast<int>(sys.vars().size())) {
    lo_.resize(nv_ + 1);
    hi_.resize(nv_ + 1);
    for (int i = 0; i < nv_; ++i) {
      lo_[i] = sys.vars()[static_cast<std::size_t>(i)].lo;
      hi_[i] = sys.vars()[static_cast<std::size_t>(i)].hi;
    }
    lo_[nv_] = -2;
    hi_[nv_] = 2;
  }

  int size() const { return nv_ + 1; }
  int t_index() const { return nv_; }
  int n_eq() const { return static_cast<int>(sys_.equalities().size()); }
  int n_in() const { return static_cast<int>(sys_.inequalities().size() + sys_.terms().size()); }
  const VectorXd& lo() const { return lo_; }
  const VectorXd& hi() const { return hi_; }

  void eval(const VectorXd& x, VectorXd& ce, VectorXd& ci) const {
    const Point p(std::span<const double>(x.data(), static_cast<std::size_t>(nv_)));
    const auto& ops = relaxed_ops();
    ce.resize(n_eq());
    ci.resize(n_in());
    int k = 0;
    for (const auto& c : sys_.equalities()) ce[k++] = c.fn(p, ops);
    k = 0;
    for (const auto& c : sys_.inequalities()) ci[k++] = c.fn(p, ops);
    for (const auto& c : sys_.terms()) ci[k++] = c.fn(p, ops) - x[nv_];
  }

  void jacobian(const VectorXd& x, MatrixXd& Je, MatrixXd& Ji) const {
    const int n = size();
    Je.resize(n_eq(), n);
    Ji.resize(n_in(), n);
    VectorXd xp = x, ce1, ci1, ce2, ci2;
    for (int j = 0; j < n; ++j) {
      // Central differences inside the box, one-sided at its faces.
      const double step = 1e-7;
      const double up = std::min(x[j] + step, hi_[j]);
      const double down = std::max(x[j] - step, lo_[j]);
      xp[j] = up;
      eval(xp, ce1, ci1);
      xp[j] = down;
      eval(xp, ce2, ci2);
      xp[j] = x[j];
      Je.col(j) = (ce1 - ce2) / (up - down);
      Ji.col(j) = (ci1 - ci2) / (up - down);
    }
  }

  static double violation(const VectorXd& ce, const VectorXd& ci) {
    return ce.cwiseAbs().sum() + ci.cwiseMax(0.0).sum();
  }

  void set_epigraph(VectorXd& x) const {
    std::vector<double> v(x.data(), x.data() + nv_);
    fill_aux(sys_, v, relaxed_ops());
    for (int i = 0; i < nv_; ++i) x[i] = v[static_cast<std::size_t>(i)];
    const Point p(std::span<const double>(x.data(), static_cast<std::size_t>(nv_)));
    x[nv_] = max_of(sys_.terms(), p, relaxed_ops());
  }

 private:
  const ConstraintSystem& sys_;
  int nv_;
  VectorXd lo_, hi_;
};

struct Linearization {
  VectorXd ce, ci;
  MatrixXd Je, Ji;
};

struct StepResult {
  VectorXd d;
  VectorXd y, lam;  // multipliers of the linearized equalities and inequalities
  bool ok = false;
};

// Elastic l1 QP: min g'd + 1/2 d'Bd + rho (sum u + v + w)
// s.t. Je d + ce = u - v, Ji d + ci <= w, box, |d| <= radius.
StepResult qp_step(const Problem& pb, const VectorXd& x, const Linearization& L, const VectorXd& grad,
                   const MatrixXd& B, double rho, double radius) {
  const int n = pb.size(), me = pb.n_eq(), mi = pb.n_in();
  const int nz = n + 2 * me + mi;
  DenseQp qp;
  qp.H = MatrixXd::Zero(nz, nz);
  qp.H.topLeftCorner(n, n) = B;
  qp.q = VectorXd::Constant(nz, rho);
  qp.q.head(n) = grad;
  qp.A = MatrixXd::Zero(me, nz);
  qp.A.leftCols(n) = L.Je;
  qp.A.block(0, n, me, me) = -MatrixXd::Identity(me, me);
  qp.A.block(0, n + me, me, me) = MatrixXd::Identity(me, me);
  qp.b = -L.ce;
  const int rows = mi + 2 * me + mi + 2 * n;
  qp.G = MatrixXd::Zero(rows, nz);
  qp.h = VectorXd::Zero(rows);
  qp.G.topLeftCorner(mi, n) = L.Ji;
  qp.G.block(0, n + 2 * me, mi, mi) = -MatrixXd::Identity(mi, mi);
  qp.h.head(mi) = -L.ci;
  qp.G.block(mi, n, 2 * me + mi, 2 * me + mi) = -MatrixXd::Identity(2 * me + mi, 2 * me + mi);
  const int r0 = mi + 2 * me + mi;
  qp.G.block(r0, 0, n, n) = MatrixXd::Identity(n, n);
  qp.G.block(r0 + n, 0, n, n) = -MatrixXd::Identity(n, n);
  for (int j = 0; j < n; ++j) {
    qp.h[r0 + j] = std::max(0.0, std::min(pb.hi()[j] - x[j], radius));
    qp.h[r0 + n + j] = std::max(0.0, std::min(x[j] - pb.lo()[j], radius));
  }
  const QpSolution sol = solve_qp(qp);
  StepResult r;
  r.ok = sol.z.allFinite();
  if (!r.ok) return r;
  r.d = sol.z.head(n);
  r.y = sol.y;
  r.lam = sol.lambda.head(mi);
  return r;
}

VectorXd clip(const Problem& pb, VectorXd x) { return x.cwiseMax(pb.lo()).cwiseMin(pb.hi()); }

double merit(const Problem& pb, const VectorXd& x, double mu, VectorXd& ce, VectorXd& ci) {
  pb.eval(x, ce, ci);
  return x[pb.t_index()] + mu * Problem::violation(ce, ci);
}

struct LocalResult {
  VectorXd x;
  double violation = std::numeric_limits<double>::infinity();
  double objective = std::numeric_limits<double>::infinity();
  int iterations = 0;
};

// Feasibility projection: minimum-norm Gauss-Newton steps onto the
// equalities and the violated or nearly active inequalities, with variables
// sitting on a box face held fixed.
void polish(const Problem& pb, VectorXd& x, int rounds) {
  const int n = pb.size();
  Linearization L;
  pb.eval(x, L.ce, L.ci);
  double viol = Problem::violation(L.ce, L.ci);
  for (int it = 0; it < rounds && viol > 1e-14; ++it) {
    pb.jacobian(x, L.Je, L.Ji);
    std::vector<int> cols;
    for (int j = 0; j < n; ++j)
      if (x[j] > pb.lo()[j] + 1e-12 && x[j] < pb.hi()[j] - 1e-12) cols.push_back(j);
    std::vector<int> act;
    for (int i = 0; i < pb.n_in(); ++i)
      if (L.ci[i] > -1e-9) act.push_back(i);
    const int me = pb.n_eq();
    const auto m = static_cast<Eigen::Index>(me + static_cast<int>(act.size()));
    MatrixXd J(m, static_cast<Eigen::Index>(cols.size()));
    VectorXd r(m);
    for (std::size_t c = 0; c < cols.size(); ++c) {
      const auto cc = static_cast<Eigen::Index>(c);
      for (int i = 0; i < me; ++i) J(i, cc) = L.Je(i, cols[c]);
      for (std::size_t k = 0; k < act.size(); ++k) J(me + static_cast<Eigen::Index>(k), cc) = L.Ji(act[k], cols[c]);
    }
    for (int i = 0; i < me; ++i) r[i] = -L.ce[i];
    for (std::size_t k = 0; k < act.size(); ++k) r[me + static_cast<Eigen::Index>(k)] = -std::max(L.ci[act[k]], 0.0);
    const VectorXd dz = J.completeOrthogonalDecomposition().solve(r);
    VectorXd d = VectorXd::Zero(n);
    for (std::size_t c = 0; c < cols.size(); ++c) d[cols[c]] = dz[static_cast<Eigen::Index>(c)];
    if (!d.allFinite()) return;
    bool improved = false;
    VectorXd ce, ci;
    for (double alpha = 1.0; alpha > 1e-3; alpha *= 0.5) {
      const VectorXd xn = clip(pb, x + alpha * d);
      pb.eval(xn, ce, ci);
      const double v = Problem::violation(ce, ci);
      if (v < viol) {
        x = xn;
        viol = v;
        L.ce = ce;
        L.ci = ci;
        improved = true;
        break;
      }
    }
    if (!improved) return;
  }
}

LocalResult sqp(const Problem& pb, VectorXd x, int max_iterations) {
  const int n = pb.size();
  const int t = pb.t_index();
  VectorXd grad = VectorXd::Zero(n);
  grad[t] = 1.0;
  MatrixXd B = MatrixXd::Identity(n, n);
  double mu = 10.0;
  double radius = 0.5;
  bool fresh = true;
  Linearization L;
  pb.eval(x, L.ce, L.ci);
  pb.jacobian(x, L.Je, L.Ji);
  LocalResult res;
  int stall = 0;
  for (int it = 0; it < max_iterations; ++it) {
    res.iterations = it + 1;
    StepResult s = qp_step(pb, x, L, grad, B, mu, radius);
    if (!s.ok) break;
    const double lmax = std::max(s.y.size() ? s.y.lpNorm<Eigen::Infinity>() : 0.0,
                                 s.lam.size() ? s.lam.lpNorm<Eigen::Infinity>() : 0.0);
    if (lmax > 0.5 * mu) {
      mu = std::max(2 * lmax, 2 * mu);
      s = qp_step(pb, x, L, grad, B, mu, radius);
      if (!s.ok) break;
    }
    const double viol = Problem::violation(L.ce, L.ci);
    const VectorXd lce = L.ce + L.Je * s.d, lci = L.ci + L.Ji * s.d;
    const double D = grad.dot(s.d) - mu * (viol - Problem::violation(lce, lci));
    const double dnorm = s.d.lpNorm<Eigen::Infinity>();
    if (dnorm < 1e-10 && viol < 1e-12) break;

    VectorXd ce, ci;
    const double phi = x[t] + mu * viol;
    double alpha = 1.0;
    VectorXd xn;
    bool accepted = false;
    while (alpha > 1e-6) {
      xn = clip(pb, x + alpha * s.d);
      if (merit(pb, xn, mu, ce, ci) <= phi + 1e-4 * alpha * std::min(D, 0.0)) {
        accepted = true;
        break;
      }
      if (alpha == 1.0) {
        // Second-order correction against the curvature of the constraints.
        Linearization Lc = L;
        Lc.ce = ce - L.Je * s.d;
        Lc.ci = ci - L.Ji * s.d;
        const StepResult sc = qp_step(pb, x, Lc, grad, B, mu, radius);
        if (sc.ok) {
          VectorXd xc = clip(pb, x + sc.d);
          VectorXd cec, cic;
          if (merit(pb, xc, mu, cec, cic) <= phi + 1e-4 * std::min(D, 0.0)) {
            xn = xc;
            ce = cec;
            ci = cic;
            accepted = true;
            break;
          }
        }
      }
      alpha *= 0.5;
    }
    if (!accepted) {
      if (fresh) break;
      B = MatrixXd::Identity(n, n);
      fresh = true;
      radius = std::max(radius * 0.25, 1e-6);
      continue;
    }
    fresh = false;
    const VectorXd step = xn - x;
    if (alpha == 1.0) radius = std::min(1.0, radius * 2);

    Linearization Ln;
    Ln.ce = ce;
    Ln.ci = ci;
    pb.jacobian(xn, Ln.Je, Ln.Ji);
    VectorXd gl_old = grad, gl_new = grad;
    if (pb.n_eq()) {
      gl_old += L.Je.transpose() * s.y;
      gl_new += Ln.Je.transpose() * s.y;
    }
    gl_old += L.Ji.transpose() * s.lam;
    gl_new += Ln.Ji.transpose() * s.lam;
    VectorXd yv = gl_new - gl_old;
    const VectorXd Bs = B * step;
    const double sBs = step.dot(Bs);
    if (sBs > 1e-20) {
      double sy = step.dot(yv);
      if (sy < 0.2 * sBs) {
        const double theta = 0.8 * sBs / (sBs - sy);
        yv = theta * yv + (1 - theta) * Bs;
        sy = step.dot(yv);
      }
      B += yv * yv.transpose() / sy - Bs * Bs.transpose() / sBs;
    }
    const double gain = std::abs(phi - (xn[t] + mu * Problem::violation(ce, ci)));
    stall = gain < 1e-13 ? stall + 1 : 0;
    x = xn;
    L = std::move(Ln);
    if (stall >= 5) break;
  }
  polish(pb, x, 30);
  VectorXd ce, ci;
  pb.eval(x, ce, ci);
  res.x = x;
  res.violation = Problem::violation(ce, ci);
  res.objective = x[t];
  return res;
}

}  // namespace

int default_restarts(const ConstraintSystem& system) {
  int primary = 0;
  for (const auto& v : system.vars()) primary += v.auxiliary ? 0 : 1;
  if (primary <= 15 || system.variant.rfind("q-walk", 0) == 0) return 200;
  return 1000;
}

OptimResult optimize(const ConstraintSystem& sys, const OptimOptions& opt) {
  sys.validate();
  const Problem pb(sys);
  const int restarts = opt.restarts > 0 ? opt.restarts : default_restarts(sys);
  const int threads = std::max(1, std::min(opt.threads, restarts));

  std::vector<LocalResult> results(static_cast<std::size_t>(restarts));
  std::atomic<int> next{0};
  auto worker = [&] {
    for (int i = next++; i < restarts; i = next++) {
      Rng rng = Rng(opt.seed).split(static_cast<std::uint64_t>(i));
      VectorXd x(pb.size());
      for (int j = 0; j < pb.size(); ++j) x[j] = pb.lo()[j] + rng.uniform() * (pb.hi()[j] - pb.lo()[j]);
      pb.set_epigraph(x);
      results[static_cast<std::size_t>(i)] = sqp(pb, x, opt.max_iterations);
    }
  };
  if (threads == 1) {
    worker();
  } else {
    std::vector<std::thread> pool;
    for (int k = 0; k < threads; ++k) pool.emplace_back(worker);
    for (auto& th : pool) th.join();
  }

  OptimResult out;
  out.variant = sys.variant;
  out.restarts_used = restarts;

  struct Candidate {
    double time;
    std::vector<double> x;
    ResidualReport report;
  };
  std::vector<Candidate> feasible;
  for (const auto& r : results) {
    if (!(r.violation <= opt.tol_feas)) continue;
    std::map<std::string, double> assignment;
    for (std::size_t i = 0; i < sys.vars().size(); ++i)
      if (!sys.vars()[i].auxiliary) assignment[sys.vars()[i].name] = r.x[static_cast<Eigen::Index>(i)];
    ResidualReport rep = verify_point(sys, assignment, checked_ops());
    if (!rep.in_domain || rep.max_residual > opt.tol_feas) continue;
    feasible.push_back({rep.time_exponent, std::vector<double>(r.x.data(), r.x.data() + r.x.size()), rep});
  }
  out.feasible_restarts = static_cast<int>(feasible.size());
  if (feasible.empty()) {
    double best = std::numeric_limits<double>::infinity();
    for (const auto& r : results) best = std::min(best, r.violation);
    out.max_residual = best;
    return out;
  }
  std::sort(feasible.begin(), feasible.end(), [](const Candidate& a, const Candidate& b) {
    return a.time != b.time ? a.time < b.time : a.x < b.x;
  });
  const Candidate& best = feasible.front();
  for (const auto& c : feasible) out.hits += c.time <= best.time + opt.tol_obj ? 1 : 0;
  out.success = true;
  out.time_exponent = best.report.time_exponent;
  out.memory_exponent = best.report.memory_exponent;
  out.max_residual = best.report.max_residual;
  for (std::size_t i = 0; i < sys.vars().size(); ++i)
    if (!sys.vars()[i].auxiliary) out.params.emplace_back(sys.vars()[i].name, best.x[i]);
  return out;
}

std::string result_to_json(const OptimResult& r) {
  nlohmann::ordered_json j;
  j["variant"] = r.variant;
  j["time_exponent"] = r.time_exponent;
  j["memory_exponent"] = r.memory_exponent;
  auto& params = j["params"] = nlohmann::ordered_json::object();
  for (const auto& [k, v] : r.params) params[k] = v;
  j["max_residual"] = r.max_residual;
  j["restarts_used"] = r.restarts_used;
  return j.dump();
}

}  // namespace sslab
