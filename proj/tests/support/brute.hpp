#pragma once

// Slow reference implementations used only by the tests. Everything here works
// from element sets or raw edge subsets, never from the library's indexes.

#include <algorithm>
#include <cstdint>
#include <functional>
#include <optional>
#include <random>
#include <set>
#include <tuple>
#include <utility>
#include <vector>

#include "setpack/setpack.hpp"

namespace brute {

using namespace setpack;

inline bool sets_meet(const Instance& inst, VertexId a, VertexId b) {
  const auto& x = inst.set(a).elements;
  const auto& y = inst.set(b).elements;
  return std::any_of(x.begin(), x.end(), [&](ElementId e) { return std::find(y.begin(), y.end(), e) != y.end(); });
}

inline bool disjoint_family(const Instance& inst, const VertexSet& xs) {
  for (std::size_t i = 0; i < xs.size(); ++i) {
    for (std::size_t j = i + 1; j < xs.size(); ++j) {
      if (sets_meet(inst, xs[i], xs[j])) return false;
    }
  }
  return true;
}

inline int weight(const Instance& inst, const VertexSet& xs) {
  int w = 0;
  for (VertexId v : xs) w += static_cast<int>(inst.set(v).elements.size()) - 1;
  return w;
}

inline int heavy(const Instance& inst, const VertexSet& xs) {
  return static_cast<int>(std::count_if(xs.begin(), xs.end(), [&](VertexId v) { return inst.set(v).elements.size() == 3; }));
}

/// (U ∩ W) plus every member of W meeting some member of U.
inline VertexSet neighborhood(const Instance& inst, const VertexSet& u, const VertexSet& w) {
  VertexSet out;
  for (VertexId y : w) {
    const bool hit = std::any_of(u.begin(), u.end(), [&](VertexId x) { return x == y || sets_meet(inst, x, y); });
    if (hit) out.push_back(y);
  }
  return out;
}

inline bool is_local_improvement(const Instance& inst, const VertexSet& a, const VertexSet& x) {
  if (!disjoint_family(inst, x)) return false;
  const VertexSet n = neighborhood(inst, x, a);
  const int wx = weight(inst, x), wn = weight(inst, n);
  return wx > wn || (wx == wn && heavy(inst, x) > heavy(inst, n));
}

/// Maximum packing weight by enumerating every packing.
inline int optimum(const Instance& inst) {
  int best = 0;
  std::vector<int> used(inst.universe_size(), 0);
  std::function<void(std::size_t, int)> rec = [&](std::size_t i, int w) {
    best = std::max(best, w);
    for (std::size_t j = i; j < inst.size(); ++j) {
      const auto& el = inst.set(static_cast<VertexId>(j)).elements;
      if (std::any_of(el.begin(), el.end(), [&](ElementId e) { return used[static_cast<std::size_t>(e)]; })) continue;
      for (ElementId e : el) used[static_cast<std::size_t>(e)] = 1;
      rec(j + 1, w + static_cast<int>(el.size()) - 1);
      for (ElementId e : el) used[static_cast<std::size_t>(e)] = 0;
    }
  };
  rec(0, 0);
  return best;
}

/// A packing maximizing (weight, number of 3-sets) lexicographically.
inline VertexSet lex_optimum(const Instance& inst) {
  std::pair<int, int> best{-1, -1};
  VertexSet best_set, pick;
  std::vector<int> used(inst.universe_size(), 0);
  std::function<void(std::size_t)> rec = [&](std::size_t i) {
    const std::pair<int, int> score{weight(inst, pick), heavy(inst, pick)};
    if (score > best) {
      best = score;
      best_set = pick;
    }
    for (std::size_t j = i; j < inst.size(); ++j) {
      const auto& el = inst.set(static_cast<VertexId>(j)).elements;
      if (std::any_of(el.begin(), el.end(), [&](ElementId e) { return used[static_cast<std::size_t>(e)]; })) continue;
      for (ElementId e : el) used[static_cast<std::size_t>(e)] = 1;
      pick.push_back(static_cast<VertexId>(j));
      rec(j + 1);
      pick.pop_back();
      for (ElementId e : el) used[static_cast<std::size_t>(e)] = 0;
    }
  };
  rec(0);
  return best_set;
}

/// Smallest local improvement of size <= tau, lexicographically first among
/// those, by scanning all subsets of the sets.
inline std::optional<VertexSet> min_improvement(const Instance& inst, const VertexSet& a, int tau) {
  const std::size_t m = inst.size();
  for (int k = 1; k <= tau && k <= static_cast<int>(m); ++k) {
    std::vector<VertexId> pick;
    std::optional<VertexSet> hit;
    std::function<bool(std::size_t)> rec = [&](std::size_t from) {
      if (static_cast<int>(pick.size()) == k) {
        if (!is_local_improvement(inst, a, pick)) return false;
        hit = pick;
        return true;
      }
      for (std::size_t j = from; j < m; ++j) {
        pick.push_back(static_cast<VertexId>(j));
        if (rec(j + 1)) return true;
        pick.pop_back();
      }
      return false;
    };
    if (rec(0)) return hit;
  }
  return std::nullopt;
}

/// Every WALK key reachable from `start` by walks of length <= max_len whose
/// edges carry pairwise disjoint color sets, found by plain DFS over edge
/// sequences.
struct Key {
  VertexId end;
  std::vector<std::uint32_t> colors;
  VertexSet x, y;
  int length;
  friend auto operator<=>(const Key&, const Key&) = default;
};

inline std::set<Key> walks(const ColorfulSearchGraph& csg, const VertexSet& u_loops, const VertexSet& w_loops,
                           VertexId start, int max_len) {
  std::set<Key> out;
  std::vector<std::size_t> seq;
  std::function<void(VertexId)> rec = [&](VertexId at) {
    std::vector<std::uint32_t> colors;
    VertexSet x, y;
    for (auto i : seq) {
      for (auto c : csg.edge_colors[i].members()) colors.push_back(c);
      x = set_union(x, set_intersection(csg.edges[i].u, u_loops));
      y = set_union(y, set_intersection(csg.edges[i].w, w_loops));
    }
    std::vector<std::uint32_t> sorted = colors;
    std::sort(sorted.begin(), sorted.end());
    if (std::adjacent_find(sorted.begin(), sorted.end()) != sorted.end()) return;  // colors overlap
    out.insert({at, sorted, x, y, static_cast<int>(seq.size())});
    if (static_cast<int>(seq.size()) == max_len) return;
    for (std::size_t i = 0; i < csg.edges.size(); ++i) {
      const auto& e = csg.edges[i];
      if (e.is_loop() || !contains(e.ends, at)) continue;
      seq.push_back(i);
      rec(e.ends[0] == at ? e.ends[1] : e.ends[0]);
      seq.pop_back();
    }
  };
  rec(start);
  return out;
}

inline Key key_of(const WalkKey& k) { return {k.end, k.colors.members(), k.x, k.y, k.length}; }

inline EdgeSubset subset_of(std::uint32_t mask, std::size_t m) {
  EdgeSubset es;
  for (std::size_t i = 0; i < m; ++i) {
    if (mask >> i & 1U) es.push_back(i);
  }
  return es;
}

inline bool binocular(const Multigraph& h, const EdgeSubset& es) {
  std::set<int> vs;
  for (auto i : es) {
    vs.insert(h.edges[i].a);
    vs.insert(h.edges[i].b);
  }
  return es.size() > vs.size();
}

/// All edge subsets that are binoculars with no binocular proper subset.
inline std::vector<EdgeSubset> minimal_binoculars(const Multigraph& h) {
  const std::size_t m = h.edges.size();
  std::vector<EdgeSubset> out;
  for (std::uint32_t mask = 1; mask < (1U << m); ++mask) {
    if (!binocular(h, subset_of(mask, m))) continue;
    bool minimal = true;
    for (std::uint32_t sub = (mask - 1) & mask; sub && minimal; sub = (sub - 1) & mask) {
      if (binocular(h, subset_of(sub, m))) minimal = false;
    }
    if (minimal) out.push_back(subset_of(mask, m));
  }
  return out;
}

inline Multigraph random_multigraph(std::mt19937_64& rng, int max_vertices, int max_edges, double loop_rate = 0.15) {
  Multigraph h;
  h.vertex_count = std::uniform_int_distribution<int>(1, max_vertices)(rng);
  const int m = std::uniform_int_distribution<int>(0, max_edges)(rng);
  std::uniform_int_distribution<int> pick(0, h.vertex_count - 1);
  std::bernoulli_distribution loop(loop_rate);
  for (int i = 0; i < m; ++i) {
    const int a = pick(rng);
    int b = loop(rng) ? a : pick(rng);
    h.add_edge(a, b);
  }
  return h;
}

}  // namespace brute
