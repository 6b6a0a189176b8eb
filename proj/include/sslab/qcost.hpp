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

#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "sslab/optimizer.hpp"

namespace sslab {

// All costs are log2 exponents per unit n; polynomial factors are dropped.

/// Amplitude amplification over 2^space with 2^solutions marked elements.
double grover_cost(double space_exp, double solutions_exp);

/// Matching a superposition of L1 (prepared in time t_L1) against a stored
/// list of size l2 on c bits, with filtering probability 2^p.
double qmatch_cost(double t_L1, double c, double l2, double p);

/// Writing down the filtered merge of two lists of size l on c bits.
double qfilter_pair_cost(double l, double c, double p);

/// Spectral gap exponent of a product of m_lists Johnson graphs J(N, R).
double johnson_gap(double N_exp, double R_exp, int m_lists);

struct WalkCostInputs {
  double setup = 0;
  double update = 0;
  double check = 0;
  double marked = 0;  // <= 0
  double gap = 0;     // <= 0
};

/// Setup, then sqrt(1/marked) rounds of sqrt(1/gap) updates and one check.
double walk_total(const WalkCostInputs& in);

struct TradeoffRow {
  double m = 0;
  double time_exponent = 0;
  double memory_exponent = 0;
  OptimResult result;
};

/// One optimization per memory bound; rows sorted by m. A row whose
/// optimum is worse than the previous row reuses that point, which stays
/// feasible under the looser bound. Throws std::runtime_error when a row
/// finds no feasible point.
std::vector<TradeoffRow> tradeoff_curve(const std::string& variant, std::vector<double> m_grid,
                                        const OptimOptions& options = {},
                                        const std::function<void(const TradeoffRow&)>& on_row = {});

/// CSV with header m,time_exponent,memory_exponent, six decimals, LF endings.
std::string tradeoff_csv(const std::vector<TradeoffRow>& rows);

}  // namespace sslab
