#pragma once

#include <algorithm>
#include <cstdint>
#include <set>
#include <stdexcept>
#include <utility>
#include <vector>

#include "setpack/instance.hpp"
#include "setpack/local_search.hpp"
#include "setpack/solve.hpp"

namespace setpack {

namespace detail {

inline std::set<std::pair<ElementId, ElementId>> pair_sets(const Instance& inst) {
  std::set<std::pair<ElementId, ElementId>> out;
  for (const auto& s : inst.sets()) {
    if (s.elements.size() == 2) out.emplace(std::minmax(s.elements[0], s.elements[1]));
  }
  return out;
}

}  // namespace detail

/// Every 3-set has all three of its 2-subsets present as sets.
inline bool is_hereditary(const Instance& inst) {
  const auto pairs = detail::pair_sets(inst);
  for (const auto& s : inst.sets()) {
    if (s.elements.size() != 3) continue;
    const auto& e = s.elements;
    for (auto [i, j] : {std::pair{0, 1}, std::pair{0, 2}, std::pair{1, 2}}) {
      if (!pairs.count(std::minmax(e[static_cast<std::size_t>(i)], e[static_cast<std::size_t>(j)]))) return false;
    }
  }
  return true;
}

class HereditaryInstance {
 public:
  explicit HereditaryInstance(Instance base) : base_(std::move(base)) {
    if (!is_hereditary(base_)) throw InstanceError("instance is not hereditary");
  }
  const Instance& base() const { return base_; }

 private:
  Instance base_;
};

/// Appends each missing 2-subset of a 3-set once, after the original sets.
inline HereditaryInstance hereditary_closure(const Instance& inst) {
  auto pairs = detail::pair_sets(inst);
  std::vector<PackSet> sets = inst.sets();
  for (const auto& s : inst.sets()) {
    if (s.elements.size() != 3) continue;
    const auto& e = s.elements;
    for (auto [i, j] : {std::pair{0, 1}, std::pair{0, 2}, std::pair{1, 2}}) {
      const ElementId a = e[static_cast<std::size_t>(i)];
      const ElementId b = e[static_cast<std::size_t>(j)];
      if (pairs.emplace(std::minmax(a, b)).second) sets.push_back({{a, b}});
    }
  }
  return HereditaryInstance(Instance(std::move(sets), inst.universe_size(), inst.labels()));
}

inline SolveResult solve_hereditary(const HereditaryInstance& h, std::uint64_t seed = 1, int tau = 10,
                                    ImprovementSearch how = ImprovementSearch::grown) {
  if (tau < 10) throw std::invalid_argument("hereditary solving needs tau >= 10");
  SearchParams params;
  params.mode = Mode::hereditary;
  params.tau = tau;
  params.seed = seed;
  params.improvement_search = how;
  return solve(h.base(), params);
}

}  // namespace setpack
