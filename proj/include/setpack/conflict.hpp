#pragma once

#include <algorithm>
#include <cstddef>
#include <ostream>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "setpack/instance.hpp"
#include "setpack/vertex_set.hpp"

namespace setpack {

/// Intersection graph of an instance's sets. Vertices are set indices; two
/// vertices are adjacent iff their sets share an element.
class ConflictGraph {
 public:
  ConflictGraph() = default;

  explicit ConflictGraph(const Instance& inst) : weights_(inst.size()), adj_(inst.size()) {
    std::vector<std::vector<VertexId>> holders(inst.universe_size());
    for (std::size_t v = 0; v < inst.size(); ++v) {
      weights_[v] = inst.sets()[v].weight();
      for (ElementId e : inst.sets()[v].elements) {
        holders[static_cast<std::size_t>(e)].push_back(static_cast<VertexId>(v));
      }
    }
    for (const auto& list : holders) {
      for (std::size_t i = 0; i < list.size(); ++i) {
        for (std::size_t j = i + 1; j < list.size(); ++j) {
          adj_[static_cast<std::size_t>(list[i])].push_back(list[j]);
          adj_[static_cast<std::size_t>(list[j])].push_back(list[i]);
        }
      }
    }
    for (auto& nb : adj_) nb = make_vertex_set(std::move(nb));
    elements_.reserve(inst.size());
    for (const auto& s : inst.sets()) elements_.push_back(s.elements);
    universe_size_ = inst.universe_size();
  }

  /// Hand-built graph for analysis and tests; no backing set system.
  ConflictGraph(std::vector<int> weights, const std::vector<std::pair<VertexId, VertexId>>& edges)
      : weights_(std::move(weights)), adj_(weights_.size()) {
    for (int w : weights_) {
      if (w != 1 && w != 2) throw std::invalid_argument("vertex weight must be 1 or 2");
    }
    for (auto [a, b] : edges) {
      if (a == b) throw std::invalid_argument("conflict graph has no self-loops");
      check_vertex(a);
      check_vertex(b);
      adj_[static_cast<std::size_t>(a)].push_back(b);
      adj_[static_cast<std::size_t>(b)].push_back(a);
    }
    for (auto& nb : adj_) nb = make_vertex_set(std::move(nb));
  }

  std::size_t size() const { return weights_.size(); }
  int weight(VertexId v) const { return weights_[static_cast<std::size_t>(v)]; }
  const std::vector<int>& weights() const { return weights_; }
  const VertexSet& neighbors(VertexId v) const { return adj_[static_cast<std::size_t>(v)]; }
  bool adjacent(VertexId a, VertexId b) const { return contains(neighbors(a), b); }

  std::size_t edge_count() const {
    std::size_t deg = 0;
    for (const auto& nb : adj_) deg += nb.size();
    return deg / 2;
  }

  /// True when the graph was built from an Instance and carries its sets.
  bool has_elements() const { return !elements_.empty() || weights_.empty(); }
  const std::vector<ElementId>& elements(VertexId v) const {
    return elements_.at(static_cast<std::size_t>(v));
  }
  std::size_t universe_size() const { return universe_size_; }

  VertexSet all_vertices() const {
    VertexSet out(size());
    for (std::size_t v = 0; v < size(); ++v) out[v] = static_cast<VertexId>(v);
    return out;
  }

 private:
  void check_vertex(VertexId v) const {
    if (v < 0 || static_cast<std::size_t>(v) >= weights_.size()) {
      throw std::out_of_range("edge endpoint " + std::to_string(v) + " is not a vertex");
    }
  }

  std::vector<int> weights_;
  std::vector<VertexSet> adj_;
  std::vector<std::vector<ElementId>> elements_;
  std::size_t universe_size_ = 0;
};

inline ConflictGraph build_conflict_graph(const Instance& inst) { return ConflictGraph(inst); }

struct WeightClasses {
  VertexSet prime;         // weight 1
  VertexSet double_prime;  // weight 2
};

inline WeightClasses weight_classes(const ConflictGraph& g, const VertexSet& xs) {
  WeightClasses out;
  for (VertexId v : xs) (g.weight(v) == 1 ? out.prime : out.double_prime).push_back(v);
  return out;
}

inline WeightClasses weight_classes(const ConflictGraph& g) {
  return weight_classes(g, g.all_vertices());
}

inline int weight_of(const ConflictGraph& g, const VertexSet& xs) {
  int w = 0;
  for (VertexId v : xs) w += g.weight(v);
  return w;
}

/// Number of weight-2 vertices in xs.
inline int count_double(const ConflictGraph& g, const VertexSet& xs) {
  int c = 0;
  for (VertexId v : xs) c += g.weight(v) == 2;
  return c;
}

inline VertexSet double_prime_of(const ConflictGraph& g, const VertexSet& xs) {
  return weight_classes(g, xs).double_prime;
}

/// (U ∩ W) together with every member of W adjacent to some member of U.
inline VertexSet neighborhood(const ConflictGraph& g, const VertexSet& u, const VertexSet& w) {
  VertexSet out;
  for (VertexId x : w) {
    if (contains(u, x)) {
      out.push_back(x);
      continue;
    }
    const auto& nb = g.neighbors(x);
    if (nb.size() < u.size() ? std::any_of(nb.begin(), nb.end(),
                                           [&](VertexId y) { return contains(u, y); })
                             : intersects(nb, u)) {
      out.push_back(x);
    }
  }
  return out;
}

inline bool is_independent(const ConflictGraph& g, const VertexSet& xs) {
  for (std::size_t i = 0; i < xs.size(); ++i) {
    for (std::size_t j = i + 1; j < xs.size(); ++j) {
      if (g.adjacent(xs[i], xs[j])) return false;
    }
  }
  return true;
}

struct ClawViolation {
  VertexId center;
  VertexSet talons;
  enum class Kind { three_claw_at_weight_one, four_claw } kind;
};

struct ClawReport {
  std::vector<ClawViolation> violations;
  bool ok() const { return violations.empty(); }
};

/// Searches every vertex for an induced 4-claw, and every weight-1 vertex for
/// an induced 3-claw. One witness per offending center.
inline ClawReport assert_claw_structure(const ConflictGraph& g) {
  ClawReport report;
  for (std::size_t c = 0; c < g.size(); ++c) {
    const auto center = static_cast<VertexId>(c);
    const auto& nb = g.neighbors(center);
    const std::size_t want = g.weight(center) == 1 ? 3 : 4;
    VertexSet picked;
    bool found = false;
    auto dfs = [&](auto&& self, std::size_t from) -> void {
      if (picked.size() == want) {
        found = true;
        return;
      }
      for (std::size_t i = from; i < nb.size() && !found; ++i) {
        const VertexId x = nb[i];
        if (std::any_of(picked.begin(), picked.end(), [&](VertexId y) { return g.adjacent(x, y); })) {
          continue;
        }
        picked.push_back(x);
        self(self, i + 1);
        if (!found) picked.pop_back();
      }
    };
    dfs(dfs, 0);
    if (found) {
      report.violations.push_back({center, picked,
                                   want == 3 ? ClawViolation::Kind::three_claw_at_weight_one
                                             : ClawViolation::Kind::four_claw});
    }
  }
  return report;
}

inline void write_dot(std::ostream& out, const ConflictGraph& g) {
  out << "graph conflict {\n";
  for (std::size_t v = 0; v < g.size(); ++v) {
    out << "  " << v << " [label=\"" << v << ':' << g.weight(static_cast<VertexId>(v)) << "\"];\n";
  }
  for (std::size_t v = 0; v < g.size(); ++v) {
    for (VertexId u : g.neighbors(static_cast<VertexId>(v))) {
      if (static_cast<std::size_t>(u) > v) out << "  " << v << " -- " << u << ";\n";
    }
  }
  out << "}\n";
}

}  // namespace setpack
