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

#include "sslab/qp.hpp"

#include <algorithm>
#include <cmath>

#include <Eigen/SparseCore>

#include "sslab/errors.hpp"

namespace sslab {

namespace {

// Largest step in (0, 1] keeping v + a*dv >= 0, scaled back from the boundary.
double max_step(const Eigen::VectorXd& v, const Eigen::VectorXd& dv) {
  double a = 1.0;
  for (Eigen::Index i = 0; i < v.size(); ++i)
    if (dv[i] < 0) a = std::min(a, -v[i] / dv[i]);
  return a;
}

}  // namespace

QpSolution solve_qp(const DenseQp& qp, const QpOptions& opt) {
  const Eigen::Index n = qp.q.size();
  const Eigen::Index me = qp.b.size();
  const Eigen::Index mi = qp.h.size();
  if (qp.H.rows() != n || qp.H.cols() != n || qp.A.rows() != me || (me > 0 && qp.A.cols() != n) ||
      qp.G.rows() != mi || (mi > 0 && qp.G.cols() != n))
    throw DomainError("solve_qp: inconsistent dimensions");

  QpSolution sol;
  const Eigen::SparseMatrix<double> G = qp.G.sparseView();
  const Eigen::SparseMatrix<double> Gt = G.transpose();
  Eigen::MatrixXd K(n + me, n + me);
  Eigen::VectorXd rhs(n + me);

  // Mehrotra's starting point: a least-squares fit with unit scaling,
  // then both slacks and multipliers shifted into the interior.
  K.topLeftCorner(n, n) = qp.H;
  K.topLeftCorner(n, n) += Eigen::MatrixXd(Gt * G);
  K.topLeftCorner(n, n).diagonal().array() += 1e-8;
  K.topRightCorner(n, me) = qp.A.transpose();
  K.bottomLeftCorner(me, n) = qp.A;
  K.bottomRightCorner(me, me).setZero();
  K.bottomRightCorner(me, me).diagonal().array() -= 1e-8;
  rhs.head(n) = -qp.q + Gt * qp.h;
  rhs.tail(me) = qp.b;
  const Eigen::VectorXd start = K.partialPivLu().solve(rhs);
  Eigen::VectorXd z = start.head(n);
  Eigen::VectorXd y = Eigen::VectorXd::Zero(me);
  Eigen::VectorXd s = qp.h - G * z;
  Eigen::VectorXd lam = -s;
  if (mi > 0) {
    s.array() += std::max(-1.5 * s.minCoeff(), 0.0) + 1e-8;
    lam.array() += std::max(-1.5 * lam.minCoeff(), 0.0) + 1e-8;
    const double sl = s.dot(lam);
    const double ds = 0.5 * sl / lam.sum(), dl = 0.5 * sl / s.sum();
    s.array() += ds;
    lam.array() += dl;
  }
  if (!z.allFinite()) {
    z.setZero();
    s = (qp.h - G * z).cwiseMax(1.0);
    lam.setOnes();
  }

  const double dual_scale = 1.0 + qp.q.lpNorm<Eigen::Infinity>();
  const double primal_scale =
      1.0 + std::max(qp.b.size() ? qp.b.lpNorm<Eigen::Infinity>() : 0.0, qp.h.size() ? qp.h.lpNorm<Eigen::Infinity>() : 0.0);
  for (int it = 0; it < opt.max_iterations; ++it) {
    sol.iterations = it;
    const Eigen::VectorXd rd = qp.H * z + qp.q + qp.A.transpose() * y + Gt * lam;
    const Eigen::VectorXd re = qp.A * z - qp.b;
    const Eigen::VectorXd ri = G * z + s - qp.h;
    const double mu = mi ? s.dot(lam) / static_cast<double>(mi) : 0.0;
    const double primal = std::max(me ? re.lpNorm<Eigen::Infinity>() : 0.0, mi ? ri.lpNorm<Eigen::Infinity>() : 0.0);
    if (primal <= opt.tolerance * primal_scale && rd.lpNorm<Eigen::Infinity>() <= opt.tolerance * dual_scale &&
        mu <= opt.tolerance * dual_scale) {
      sol.converged = true;
      break;
    }

    const Eigen::VectorXd w = lam.cwiseQuotient(s);
    const Eigen::SparseMatrix<double> GtWG = Gt * w.asDiagonal() * G;
    K.topLeftCorner(n, n) = qp.H;
    K.topLeftCorner(n, n) += Eigen::MatrixXd(GtWG);
    K.topLeftCorner(n, n).diagonal().array() += 1e-12;
    K.topRightCorner(n, me) = qp.A.transpose();
    K.bottomLeftCorner(me, n) = qp.A;
    K.bottomRightCorner(me, me).setZero();
    K.bottomRightCorner(me, me).diagonal().array() -= 1e-12;
    const Eigen::PartialPivLU<Eigen::MatrixXd> lu(K);

    auto direction = [&](const Eigen::VectorXd& rc, Eigen::VectorXd& dz, Eigen::VectorXd& dy, Eigen::VectorXd& dl,
                         Eigen::VectorXd& ds) {
      const Eigen::VectorXd t = w.cwiseProduct(ri) - rc.cwiseQuotient(s);
      rhs.head(n) = -rd - Gt * t;
      rhs.tail(me) = -re;
      const Eigen::VectorXd d = lu.solve(rhs);
      dz = d.head(n);
      dy = d.tail(me);
      dl = w.cwiseProduct(G * dz + ri) - rc.cwiseQuotient(s);
      ds = -(rc + s.cwiseProduct(dl)).cwiseQuotient(lam);
    };

    Eigen::VectorXd dz, dy, dl, ds;
    const Eigen::VectorXd rc_aff = s.cwiseProduct(lam);
    direction(rc_aff, dz, dy, dl, ds);
    const double a_aff = std::min(max_step(s, ds), max_step(lam, dl));
    const double mu_aff = mi ? (s + a_aff * ds).dot(lam + a_aff * dl) / static_cast<double>(mi) : 0.0;
    double sigma = mu > 0 ? std::pow(mu_aff / mu, 3) : 0.0;
    // Keep complementarity from racing ahead of the residuals.
    const double lag = std::max(primal / primal_scale, rd.lpNorm<Eigen::Infinity>() / dual_scale);
    if (mu > 0 && mu / dual_scale < lag) sigma = std::max(sigma, std::min(1.0, lag * dual_scale / mu));
    const Eigen::VectorXd rc = rc_aff + ds.cwiseProduct(dl) - Eigen::VectorXd::Constant(mi, sigma * mu);
    direction(rc, dz, dy, dl, ds);
    const double a = std::min(1.0, 0.99 * std::min(max_step(s, ds), max_step(lam, dl)));
    z += a * dz;
    y += a * dy;
    lam += a * dl;
    s += a * ds;
  }
  sol.z = std::move(z);
  sol.y = std::move(y);
  sol.lambda = std::move(lam);
  return sol;
}

}  // namespace sslab
