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

#include "sslab/qcost.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <stdexcept>

#include "sslab/errors.hpp"

namespace sslab {

double grover_cost(double space_exp, double solutions_exp) {
  if (solutions_exp > space_exp) throw DomainError("grover_cost: more solutions than elements");
  return (space_exp - solutions_exp) / 2;
}

double qmatch_cost(double t_L1, double c, double l2, double p) {
  if (p > 0) throw DomainError("qmatch_cost: filtering exponent must be <= 0");
  return t_L1 - p / 2 + std::max((c - l2) / 2, 0.0);
}

double qfilter_pair_cost(double l, double c, double p) {
  if (c > l) throw DomainError("qfilter_pair_cost: constraint wider than the lists");
  if (p > 0) throw DomainError("qfilter_pair_cost: filtering exponent must be <= 0");
  return p / 2 + 2 * l - c;
}

double johnson_gap(double N_exp, double R_exp, int m_lists) {
  if (R_exp > N_exp) throw DomainError("johnson_gap: subset larger than the ground set");
  if (m_lists < 1) throw DomainError("johnson_gap: need at least one list");
  // N / (m R (N - R)) with N - R ~ N; m is polynomial.
  return -R_exp;
}

double walk_total(const WalkCostInputs& in) {
  if (in.marked > 0 || in.gap > 0) throw DomainError("walk_total: marked fraction and gap exponents must be <= 0");
  return std::max({in.setup, -in.marked / 2 + (-in.gap / 2 + in.update), -in.marked / 2 + in.check});
}

std::vector<TradeoffRow> tradeoff_curve(const std::string& variant, std::vector<double> m_grid,
                                        const OptimOptions& options,
                                        const std::function<void(const TradeoffRow&)>& on_row) {
  if (variant != "q-asym-hgj-tradeoff" && variant != "q-asym-hgj-tradeoff-ram")
    throw DomainError("tradeoff_curve: unknown variant " + variant);
  std::sort(m_grid.begin(), m_grid.end());
  std::vector<TradeoffRow> rows;
  for (double m : m_grid) {
    if (!(m > 0 && m <= 0.5)) throw DomainError("tradeoff_curve: memory bound outside (0, 0.5]");
    ModelOptions mo;
    mo.memory_bound = m;
    const auto sys = build_model(variant, mo);
    OptimResult r = optimize(sys, options);
    if (!r.success) {
      char buf[64];
      std::snprintf(buf, sizeof buf, "%.6f", m);
      throw std::runtime_error("tradeoff_curve: no feasible point at m = " + std::string(buf));
    }
    if (!rows.empty() && r.time_exponent > rows.back().time_exponent) {
      r = rows.back().result;
      r.variant = sys.variant;
    }
    rows.push_back({m, r.time_exponent, r.memory_exponent, r});
    if (on_row) on_row(rows.back());
  }
  return rows;
}

std::string tradeoff_csv(const std::vector<TradeoffRow>& rows) {
  std::string out = "m,time_exponent,memory_exponent\n";
  char buf[96];
  for (const auto& r : rows) {
    std::snprintf(buf, sizeof buf, "%.6f,%.6f,%.6f\n", r.m, r.time_exponent, r.memory_exponent);
    out += buf;
  }
  return out;
}

}  // namespace sslab
