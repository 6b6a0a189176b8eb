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

#include <Eigen/Dense>

namespace sslab {

/// min 1/2 z'Hz + q'z  s.t.  Az = b,  Gz <= h.  H must be positive
/// semidefinite; A must have full row rank.
struct DenseQp {
  Eigen::MatrixXd H;
  Eigen::VectorXd q;
  Eigen::MatrixXd A;
  Eigen::VectorXd b;
  Eigen::MatrixXd G;
  Eigen::VectorXd h;
};

struct QpSolution {
  Eigen::VectorXd z;
  /// Multipliers of Az = b and Gz <= h (the latter nonnegative).
  Eigen::VectorXd y;
  Eigen::VectorXd lambda;
  bool converged = false;
  int iterations = 0;
};

struct QpOptions {
  int max_iterations = 80;
  double tolerance = 1e-11;
};

/// Mehrotra predictor-corrector interior point method on the dense normal
/// KKT system.
QpSolution solve_qp(const DenseQp& qp, const QpOptions& opt = {});

}  // namespace sslab
