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

#include "sslab/instance.hpp"

#include <algorithm>
#include <bit>
#include <json.hpp>

#include "sslab/errors.hpp"

namespace sslab {

std::string to_decimal(Word x) {
  if (x == 0) return "0";
  std::string out;
  while (x != 0) {
    out.push_back(static_cast<char>('0' + static_cast<int>(x % 10)));
    x /= 10;
  }
  std::reverse(out.begin(), out.end());
  return out;
}

Word parse_decimal(const std::string& text) {
  if (text.empty()) throw DomainError("decimal: empty string");
  if (text.size() > 1 && text[0] == '0') throw DomainError("decimal: leading zero in '" + text + "'");
  Word x = 0;
  const Word limit = ~Word(0);
  for (char ch : text) {
    if (ch < '0' || ch > '9') throw DomainError("decimal: not a digit in '" + text + "'");
    const auto d = static_cast<unsigned>(ch - '0');
    if (x > (limit - d) / 10) throw DomainError("decimal: overflow in '" + text + "'");
    x = x * 10 + d;
  }
  return x;
}

Word SubsetSumInstance::dot(const SymbolVector& e) const {
  if (e.size() != n) throw DomainError("dot: length mismatch");
  Word acc = 0;
  for (int i = 0; i < n; ++i) {
    const int s = e[i];
    if (s > 0)
      acc += static_cast<Word>(s) * a[static_cast<size_t>(i)];
    else if (s < 0)
      acc -= static_cast<Word>(-s) * a[static_cast<size_t>(i)];
  }
  return acc & mask();
}

SubsetSumInstance random_instance(int n, std::uint64_t seed) {
  if (n < 8 || n > kMaxInstanceBits) throw DomainError("random_instance: n must lie in [8, 127]");
  Rng rng(seed);
  SubsetSumInstance inst;
  inst.n = n;
  inst.a.resize(static_cast<size_t>(n));
  for (auto& x : inst.a) x = rng.bits128(n);

  std::vector<int> idx(static_cast<size_t>(n));
  for (int i = 0; i < n; ++i) idx[static_cast<size_t>(i)] = i;
  const int weight = (n + 1) / 2;
  SymbolVector planted(n);
  for (int k = 0; k < weight; ++k) {
    const auto j = k + static_cast<int>(rng.below(static_cast<std::uint64_t>(n - k)));
    std::swap(idx[static_cast<size_t>(k)], idx[static_cast<size_t>(j)]);
    planted.set(idx[static_cast<size_t>(k)], 1);
  }
  inst.t = inst.dot(planted);
  inst.planted = std::move(planted);
  return inst;
}

bool verify_solution(const SubsetSumInstance& inst, const SymbolVector& e) {
  if (e.size() != inst.n) throw DomainError("verify_solution: length mismatch");
  if (!e.binary()) return false;
  return inst.dot(e) == inst.t;
}

std::vector<SymbolVector> enumerate_solutions(const SubsetSumInstance& inst) {
  const int n = inst.n;
  if (n > kMaxEnumerationBits) throw ResourceError("enumerate_solutions: n above 28");
  const std::uint64_t m = static_cast<std::uint64_t>(inst.mask());
  std::vector<std::uint64_t> a(inst.a.size());
  for (size_t i = 0; i < a.size(); ++i) a[i] = static_cast<std::uint64_t>(inst.a[i]);
  const auto t = static_cast<std::uint64_t>(inst.t);

  std::vector<std::uint32_t> hits;
  std::uint64_t sum = 0;
  std::uint32_t set = 0;
  if (t == 0) hits.push_back(0);
  const std::uint64_t total = std::uint64_t{1} << n;
  for (std::uint64_t k = 1; k < total; ++k) {
    const int bit = std::countr_zero(k);
    set ^= std::uint32_t{1} << bit;
    sum = (set >> bit & 1u) ? sum + a[static_cast<size_t>(bit)] : sum - a[static_cast<size_t>(bit)];
    if ((sum & m) == t) hits.push_back(set);
  }
  std::sort(hits.begin(), hits.end());
  std::vector<SymbolVector> out;
  out.reserve(hits.size());
  for (auto h : hits) {
    SymbolVector e(n);
    for (int i = 0; i < n; ++i)
      if (h >> i & 1u) e.set(i, 1);
    out.push_back(std::move(e));
  }
  return out;
}

std::string instance_to_json(const SubsetSumInstance& inst) {
  nlohmann::ordered_json j;
  j["n"] = inst.n;
  auto& a = j["a"] = nlohmann::ordered_json::array();
  for (auto x : inst.a) a.push_back(to_decimal(x));
  j["t"] = to_decimal(inst.t);
  if (inst.planted) {
    auto& p = j["planted"] = nlohmann::ordered_json::array();
    for (int i = 0; i < inst.n; ++i) p.push_back((*inst.planted)[i]);
  }
  return j.dump();
}

SubsetSumInstance instance_from_json(const std::string& text) {
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(text);
  } catch (const nlohmann::json::parse_error& e) {
    throw DomainError(std::string("instance: malformed JSON: ") + e.what());
  }
  if (!j.is_object()) throw DomainError("instance: top level must be an object");
  for (const auto& [key, _] : j.items())
    if (key != "n" && key != "a" && key != "t" && key != "planted")
      throw DomainError("instance: unknown field '" + key + "'");
  if (!j.contains("n") || !j.contains("a") || !j.contains("t"))
    throw DomainError("instance: fields n, a, t are required");

  const auto& jn = j["n"];
  if (!jn.is_number_integer()) throw DomainError("instance: n must be an integer");
  const auto n64 = jn.get<std::int64_t>();
  if (n64 < 1 || n64 > kMaxInstanceBits) throw DomainError("instance: n must lie in [1, 127]");
  SubsetSumInstance inst;
  inst.n = static_cast<int>(n64);
  const Word m = inst.mask();

  auto value = [&](const nlohmann::json& v, const char* what) {
    if (!v.is_string()) throw DomainError(std::string("instance: ") + what + " must be a decimal string");
    const Word x = parse_decimal(v.get<std::string>());
    if (x > m) throw DomainError(std::string("instance: ") + what + " not reduced mod 2^n");
    return x;
  };

  const auto& ja = j["a"];
  if (!ja.is_array() || ja.size() != static_cast<size_t>(inst.n))
    throw DomainError("instance: a must be an array of n values");
  for (const auto& v : ja) inst.a.push_back(value(v, "a[i]"));
  inst.t = value(j["t"], "t");

  if (j.contains("planted")) {
    const auto& jp = j["planted"];
    if (!jp.is_array() || jp.size() != static_cast<size_t>(inst.n))
      throw DomainError("instance: planted must be an array of n bits");
    SymbolVector p(inst.n);
    int weight = 0;
    for (int i = 0; i < inst.n; ++i) {
      const auto& b = jp[static_cast<size_t>(i)];
      if (!b.is_number_integer() || (b.get<std::int64_t>() != 0 && b.get<std::int64_t>() != 1))
        throw DomainError("instance: planted entries must be 0 or 1");
      p.set(i, b.get<int>());
      weight += p[i];
    }
    if (weight != (inst.n + 1) / 2) throw DomainError("instance: planted weight must be round(n/2)");
    if (inst.dot(p) != inst.t) throw DomainError("instance: planted does not reach t");
    inst.planted = std::move(p);
  }
  return inst;
}

}  // namespace sslab
