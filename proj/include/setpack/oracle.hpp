#pragma once

#include <algorithm>
#include <cstdint>
#include <numeric>
#include <stdexcept>
#include <string>
#include <vector>

#include "setpack/instance.hpp"
#include "setpack/local_search.hpp"

namespace setpack {

class OracleBudgetExceeded : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct OracleResult {
  int optimum_weight = 0;
  Packing witness;
  std::uint64_t nodes_explored = 0;
};

/// Exact maximum-weight packing by include/exclude branch and bound over
/// sets in decreasing weight order. The bound adds the weight of every later
/// set still disjoint from the chosen ones.
inline OracleResult solve_exact(const Instance& inst, std::uint64_t budget = 10'000'000) {
  const std::size_t m = inst.size();
  const std::size_t words = (inst.universe_size() + 63) / 64;
  std::vector<VertexId> order(m);
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(), [&](VertexId a, VertexId b) { return inst.weight(a) > inst.weight(b); });

  std::vector<std::vector<std::uint64_t>> mask(m, std::vector<std::uint64_t>(words, 0));
  for (std::size_t i = 0; i < m; ++i) {
    for (ElementId e : inst.set(order[i]).elements) {
      mask[i][static_cast<std::size_t>(e) / 64] |= std::uint64_t{1} << (static_cast<std::size_t>(e) % 64);
    }
  }
  auto clashes = [&](std::size_t i, const std::vector<std::uint64_t>& used) {
    for (std::size_t w = 0; w < words; ++w) {
      if (mask[i][w] & used[w]) return true;
    }
    return false;
  };

  OracleResult res;
  std::vector<std::uint64_t> used(words, 0);
  std::vector<VertexId> chosen;
  int current = 0;
  auto rec = [&](auto&& self, std::size_t i) -> void {
    if (++res.nodes_explored > budget) {
      throw OracleBudgetExceeded("oracle node budget of " + std::to_string(budget) + " exhausted");
    }
    if (current > res.optimum_weight) {
      res.optimum_weight = current;
      res.witness = make_vertex_set(chosen);
    }
    if (i == m) return;
    int bound = current;
    for (std::size_t j = i; j < m; ++j) {
      if (!clashes(j, used)) bound += inst.weight(order[j]);
    }
    if (bound <= res.optimum_weight) return;
    if (!clashes(i, used)) {
      for (std::size_t w = 0; w < words; ++w) used[w] ^= mask[i][w];
      chosen.push_back(order[i]);
      current += inst.weight(order[i]);
      self(self, i + 1);
      current -= inst.weight(order[i]);
      chosen.pop_back();
      for (std::size_t w = 0; w < words; ++w) used[w] ^= mask[i][w];
    }
    self(self, i + 1);
  };
  rec(rec, 0);
  return res;
}

}  // namespace setpack
