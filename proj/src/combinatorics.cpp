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

#include "sslab/combinatorics.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <sstream>
#include <type_traits>

namespace sslab {

int SymbolCounts::of(int s) const {
  switch (s) {
    case -1: return minus;
    case 0: return zero;
    case 1: return one;
    case 2: return two;
  }
  throw DomainError("SymbolCounts: symbol outside {-1,0,1,2}");
}

int& SymbolCounts::of(int s) {
  switch (s) {
    case -1: return minus;
    case 0: return zero;
    case 1: return one;
    case 2: return two;
  }
  throw DomainError("SymbolCounts: symbol outside {-1,0,1,2}");
}

std::string SymbolCounts::to_string() const {
  std::ostringstream os;
  os << "{-1:" << minus << ", 0:" << zero << ", 1:" << one << ", 2:" << two << "}";
  return os.str();
}

SymbolCounts round_counts(int n, const DistributionShape& shape) {
  if (n <= 0) throw DomainError("round_counts: n must be positive");
  if (!shape.valid()) throw DomainError("round_counts: invalid shape");
  SymbolCounts c;
  c.minus = static_cast<int>(std::lround(shape.alpha * n));
  c.two = static_cast<int>(std::lround(shape.gamma * n));
  const int weight = static_cast<int>(std::lround(shape.beta * n));
  c.one = weight + c.minus - 2 * c.two;
  c.zero = n - c.minus - c.one - c.two;
  if (c.one < 0 || c.zero < 0) throw DomainError("round_counts: shape does not fit at n = " + std::to_string(n));
  return c;
}

DistributionShape shape_of(const SymbolCounts& c) {
  const double n = c.n();
  return {c.minus / n, c.weight() / n, c.two / n};
}

SymbolVector::SymbolVector(std::initializer_list<int> values) {
  s_.reserve(values.size());
  for (int v : values) s_.push_back(static_cast<std::int8_t>(v));
}

SymbolVector operator+(const SymbolVector& a, const SymbolVector& b) {
  if (a.size() != b.size()) throw DomainError("SymbolVector: length mismatch");
  std::vector<std::int8_t> out(a.s_.size());
  for (size_t i = 0; i < out.size(); ++i) out[i] = static_cast<std::int8_t>(a.s_[i] + b.s_[i]);
  return SymbolVector(std::move(out));
}

bool SymbolVector::well_formed() const {
  return std::all_of(s_.begin(), s_.end(), [](std::int8_t x) { return x >= -1 && x <= 2; });
}

bool SymbolVector::binary() const {
  return std::all_of(s_.begin(), s_.end(), [](std::int8_t x) { return x == 0 || x == 1; });
}

SymbolCounts SymbolVector::counts() const {
  SymbolCounts c;
  for (std::int8_t x : s_) ++c.of(x);
  return c;
}

std::string SymbolVector::to_string() const {
  std::string out;
  for (std::int8_t x : s_) {
    if (x < 0) {
      out += '-';
      out += static_cast<char>('0' - x);
    } else {
      out += static_cast<char>('0' + x);
    }
  }
  return out;
}

BigInt binomial(int n, int k) {
  if (k < 0 || n < 0 || k > n) return 0;
  BigInt r;
  mpz_bin_uiui(r.get_mpz_t(), static_cast<unsigned long>(n), static_cast<unsigned long>(k));
  return r;
}

BigInt multinomial(const SymbolCounts& c) {
  if (c.minus < 0 || c.zero < 0 || c.one < 0 || c.two < 0) return 0;
  int left = c.n();
  BigInt r = 1;
  for (int k : {c.minus, c.one, c.two}) {
    r *= binomial(left, k);
    left -= k;
  }
  return r;
}

BigInt dist_count_exact(int n, const DistributionShape& shape) { return multinomial(round_counts(n, shape)); }

long double log2_big(const BigInt& x) {
  if (x <= 0) throw DomainError("log2_big: non-positive argument");
  long exp = 0;
  double mant = mpz_get_d_2exp(&exp, x.get_mpz_t());
  return std::log2(static_cast<long double>(mant)) + static_cast<long double>(exp);
}

long double log2_big(const BigRational& x) { return log2_big(x.get_num()) - log2_big(x.get_den()); }

long double log2_multinomial(const SymbolCounts& c) {
  auto lf = [](int k) { return std::lgamma(static_cast<long double>(k) + 1.0L); };
  return (lf(c.n()) - lf(c.minus) - lf(c.zero) - lf(c.one) - lf(c.two)) / std::log(2.0L);
}

namespace {

constexpr int kSmallBinomialMax = 62;

struct SmallBinomials {
  std::uint64_t c[kSmallBinomialMax + 1][kSmallBinomialMax + 1] = {};
  SmallBinomials() {
    for (int n = 0; n <= kSmallBinomialMax; ++n) {
      c[n][0] = 1;
      for (int k = 1; k <= n; ++k) c[n][k] = c[n - 1][k - 1] + (k <= n - 1 ? c[n - 1][k] : 0);
    }
  }
};

const SmallBinomials& small_binomials() {
  static const SmallBinomials table;
  return table;
}

std::uint64_t binom64(int n, int k) {
  if (k < 0 || k > n) return 0;
  return small_binomials().c[n][k];
}

template <typename Int>
Int binom_as(int n, int k) {
  if constexpr (std::is_same_v<Int, std::uint64_t>)
    return binom64(n, k);
  else
    return binomial(n, k);
}

// Fits when the multinomial is below 2^62, so scale products never overflow.
bool fits_small(const SymbolCounts& c) {
  if (c.n() > kSmallBinomialMax) return false;
  return log2_multinomial(c) < 62.0L;
}

template <typename Int>
Int rank_impl(const SymbolVector& v) {
  std::vector<int> avail(static_cast<size_t>(v.size()));
  for (int i = 0; i < v.size(); ++i) avail[static_cast<size_t>(i)] = i;
  Int result = 0, scale = 1;
  std::vector<int> rest;
  for (int sym : kRankSymbolOrder) {
    const int m = static_cast<int>(avail.size());
    Int x = 0;
    int j = 0;
    rest.clear();
    for (int idx = 0; idx < m; ++idx) {
      if (v[avail[static_cast<size_t>(idx)]] == sym) {
        ++j;
        x += binom_as<Int>(idx, j);
      } else {
        rest.push_back(avail[static_cast<size_t>(idx)]);
      }
    }
    result += scale * x;
    scale *= binom_as<Int>(m, j);
    avail.swap(rest);
  }
  return result;
}

template <typename Int>
SymbolVector unrank_impl(int n, const SymbolCounts& counts, Int rem) {
  SymbolVector v(n);
  std::vector<int> avail(static_cast<size_t>(n));
  for (int i = 0; i < n; ++i) avail[static_cast<size_t>(i)] = i;
  std::vector<int> rest;
  std::vector<char> taken;
  for (int sym : kRankSymbolOrder) {
    const int m = static_cast<int>(avail.size());
    const int k = counts.of(sym);
    Int base = binom_as<Int>(m, k);
    Int x = rem % base;
    rem /= base;
    taken.assign(static_cast<size_t>(m), 0);
    int p = m - 1;
    for (int j = k; j >= 1; --j) {
      while (binom_as<Int>(p, j) > x) --p;
      x -= binom_as<Int>(p, j);
      taken[static_cast<size_t>(p)] = 1;
      --p;
    }
    rest.clear();
    for (int idx = 0; idx < m; ++idx) {
      if (taken[static_cast<size_t>(idx)])
        v.set(avail[static_cast<size_t>(idx)], sym);
      else
        rest.push_back(avail[static_cast<size_t>(idx)]);
    }
    avail.swap(rest);
  }
  return v;
}

}  // namespace

BigInt rank(const SymbolVector& v) {
  if (!v.well_formed()) throw DomainError("rank: symbols outside {-1,0,1,2}");
  if (fits_small(v.counts())) {
    std::uint64_t r = rank_impl<std::uint64_t>(v);
    BigInt out;
    mpz_import(out.get_mpz_t(), 1, 1, sizeof(r), 0, 0, &r);
    return out;
  }
  return rank_impl<BigInt>(v);
}

SymbolVector unrank(int n, const SymbolCounts& counts, const BigInt& index) {
  if (counts.n() != n || counts.minus < 0 || counts.zero < 0 || counts.one < 0 || counts.two < 0)
    throw DomainError("unrank: counts do not sum to n");
  if (index < 0 || index >= multinomial(counts)) throw std::out_of_range("unrank: index out of range");
  if (fits_small(counts)) {
    std::uint64_t j = 0;
    mpz_export(&j, nullptr, 1, sizeof(j), 0, 0, index.get_mpz_t());
    return unrank_impl<std::uint64_t>(n, counts, j);
  }
  return unrank_impl<BigInt>(n, counts, index);
}

std::uint64_t rank_u64(const SymbolVector& v) {
  if (!v.well_formed() || !fits_small(v.counts())) throw std::out_of_range("rank_u64: rank does not fit");
  return rank_impl<std::uint64_t>(v);
}

SymbolVector unrank_u64(int n, const SymbolCounts& counts, std::uint64_t index) {
  if (counts.n() != n || !fits_small(counts)) throw std::out_of_range("unrank_u64: rank does not fit");
  if (index >= multinomial(counts).get_ui())
    throw std::out_of_range("unrank_u64: index out of range");
  return unrank_impl<std::uint64_t>(n, counts, index);
}

std::strong_ordering rank_order(const SymbolVector& a, const SymbolVector& b) {
  if (auto c = a.size() <=> b.size(); c != 0) return c;
  if (a == b) return std::strong_ordering::equal;
  SymbolCounts ca = a.counts(), cb = b.counts();
  for (int sym : kRankSymbolOrder)
    if (auto c = ca.of(sym) <=> cb.of(sym); c != 0) return c;
  int c = cmp(rank(a), rank(b));
  return c < 0 ? std::strong_ordering::less : std::strong_ordering::greater;
}

namespace {

// Per-position (e1 symbol, e2 symbol) type counting. Cells are the symbol
// pairs whose sum stays inside {-1,0,1,2}; the enumeration order lets most
// cells be forced by a row, column or result total.
struct Cell {
  int s;
  int t;
};

constexpr std::array<Cell, 12> kCells = {{{-1, 2},
                                          {-1, 1},
                                          {-1, 0},
                                          {2, -1},
                                          {2, 0},
                                          {0, -1},
                                          {1, -1},
                                          {1, 1},
                                          {1, 0},
                                          {0, 2},
                                          {0, 1},
                                          {0, 0}}};

class TypeCounter {
 public:
  TypeCounter(const SymbolCounts& r, const SymbolCounts& c, const SymbolCounts& d, std::uint64_t max_nodes)
      : max_nodes_(max_nodes) {
    for (int s = -1; s <= 2; ++s) {
      remaining_[group(0, s)] = r.of(s);
      remaining_[group(1, s)] = c.of(s);
      remaining_[group(2, s)] = d.of(s);
      rows_[static_cast<size_t>(s + 1)] = r.of(s);
    }
    const int n = r.n();
    fact_.resize(static_cast<size_t>(n) + 1);
    fact_[0] = 1;
    for (int i = 1; i <= n; ++i) fact_[static_cast<size_t>(i)] = fact_[static_cast<size_t>(i) - 1] * i;
    for (size_t i = 0; i < kCells.size(); ++i) {
      for (int kind = 0; kind < 3; ++kind) {
        size_t g = group(kind, key(kCells[i], kind));
        bool last = true;
        for (size_t j = i + 1; j < kCells.size(); ++j)
          if (group(kind, key(kCells[j], kind)) == g) last = false;
        closes_[i][static_cast<size_t>(kind)] = last;
      }
    }
  }

  BigInt run() {
    total_ = 0;
    visit(0);
    return total_;
  }

 private:
  static int key(const Cell& c, int kind) { return kind == 0 ? c.s : kind == 1 ? c.t : c.s + c.t; }
  static size_t group(int kind, int sym) { return static_cast<size_t>(kind * 4 + sym + 1); }

  void visit(size_t i) {
    if (++nodes_ > max_nodes_) throw ResourceError("filter_prob_exact: type enumeration too large");
    if (i == kCells.size()) {
      for (int g : remaining_)
        if (g != 0) return;
      accumulate();
      return;
    }
    const Cell& cell = kCells[i];
    int forced = -1;
    int cap = 1 << 30;
    for (int kind = 0; kind < 3; ++kind) {
      int rem = remaining_[group(kind, key(cell, kind))];
      cap = std::min(cap, rem);
      if (closes_[i][static_cast<size_t>(kind)]) {
        if (forced >= 0 && forced != rem) return;
        forced = rem;
      }
    }
    if (forced >= 0) {
      if (forced > cap || forced < 0) return;
      assign(i, forced);
      return;
    }
    for (int v = 0; v <= cap; ++v) assign(i, v);
  }

  void assign(size_t i, int v) {
    const Cell& cell = kCells[i];
    for (int kind = 0; kind < 3; ++kind) remaining_[group(kind, key(cell, kind))] -= v;
    value_[i] = v;
    visit(i + 1);
    for (int kind = 0; kind < 3; ++kind) remaining_[group(kind, key(cell, kind))] += v;
  }

  void accumulate() {
    BigInt term = 1;
    for (int s = -1; s <= 2; ++s) {
      BigInt row = fact_[static_cast<size_t>(rows_[static_cast<size_t>(s + 1)])];
      for (size_t i = 0; i < kCells.size(); ++i)
        if (kCells[i].s == s) mpz_divexact(row.get_mpz_t(), row.get_mpz_t(), fact_[static_cast<size_t>(value_[i])].get_mpz_t());
      term *= row;
    }
    total_ += term;
  }

  std::array<int, 12> remaining_{};
  std::array<int, 4> rows_{};
  std::array<int, 12> value_{};
  std::array<std::array<bool, 3>, 12> closes_{};
  std::vector<BigInt> fact_;
  BigInt total_;
  std::uint64_t nodes_ = 0;
  std::uint64_t max_nodes_;
};

}  // namespace

BigRational filter_prob_exact(int n, const SymbolCounts& s1, const SymbolCounts& s2, const SymbolCounts& target,
                              std::uint64_t max_types) {
  if (s1.n() != n || s2.n() != n || target.n() != n) throw DomainError("filter_prob_exact: counts must sum to n");
  BigInt favourable = TypeCounter(s1, s2, target, max_types).run();
  BigRational p(favourable, multinomial(s2));
  p.canonicalize();
  return p;
}

BigRational filter_prob_exact(int n, const DistributionShape& s1, const DistributionShape& s2,
                              const DistributionShape& target) {
  return filter_prob_exact(n, round_counts(n, s1), round_counts(n, s2), round_counts(n, target));
}

}  // namespace sslab
