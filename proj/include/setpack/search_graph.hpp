#pragma once

#include <algorithm>
#include <compare>
#include <cstddef>
#include <optional>
#include <ostream>
#include <stdexcept>
#include <string>
#include <vector>

#include "setpack/conflict.hpp"
#include "setpack/local_search.hpp"
#include "setpack/vertex_set.hpp"

namespace setpack {

/// Edge of the search graph. `ends` holds one vertex for a loop, two
/// otherwise; `u` and `w` are the labels of the pair that induced it.
struct SearchEdge {
  VertexSet ends;
  VertexSet u;
  VertexSet w;

  bool is_loop() const { return ends.size() == 1; }
  friend auto operator<=>(const SearchEdge&, const SearchEdge&) = default;
};

struct SearchGraph {
  VertexSet vertices;  // the weight-2 members of A
  std::vector<SearchEdge> edges;
};

/// Returns the edge endpoints N(W, A \ U) if (U, W) is an edge-inducing pair.
inline std::optional<VertexSet> is_edge_inducing_pair(const ConflictGraph& g, const Packing& a, int tau,
                                                      const VertexSet& u, const VertexSet& w) {
  if (!is_subset(u, a) || intersects(w, a) || !is_independent(g, w)) return std::nullopt;
  if (static_cast<int>(u.size()) > tau || static_cast<int>(w.size()) > tau) return std::nullopt;
  if (weight_of(g, u) + 2 != weight_of(g, w)) return std::nullopt;
  VertexSet e = neighborhood(g, w, set_difference(a, u));
  if (e.empty() || e.size() > 2 || count_double(g, e) != static_cast<int>(e.size())) return std::nullopt;
  return e;
}

/// Builds S_tau(G, w, A). Canonical mode only tries U = N(W, A) \ e; full
/// mode also pads U with vertices of A outside N(W, A) and is limited to
/// graphs of at most `full_budget` vertices.
inline SearchGraph enumerate_search_edges(const ConflictGraph& g, const Packing& a, int tau,
                                          PairMode mode = PairMode::canonical,
                                          std::size_t full_budget = 16) {
  if (tau < 1) throw std::invalid_argument("tau must be positive");
  if (mode == PairMode::full && g.size() > full_budget) {
    throw std::invalid_argument("full pair enumeration refused: " + std::to_string(g.size()) +
                                " vertices exceed budget " + std::to_string(full_budget));
  }
  SearchGraph sg;
  sg.vertices = double_prime_of(g, a);

  std::vector<char> in_a(g.size(), 0);
  for (VertexId v : a) in_a[static_cast<std::size_t>(v)] = 1;
  std::vector<VertexId> outside;
  for (std::size_t v = 0; v < g.size(); ++v) {
    if (!in_a[v]) outside.push_back(static_cast<VertexId>(v));
  }

  auto emit = [&](const VertexSet& w, const VertexSet& n) {
    const int ww = weight_of(g, w);
    const VertexSet n2 = double_prime_of(g, n);
    std::vector<VertexSet> ends;
    for (std::size_t i = 0; i < n2.size(); ++i) {
      ends.push_back({n2[i]});
      for (std::size_t j = i + 1; j < n2.size(); ++j) ends.push_back({n2[i], n2[j]});
    }
    for (const auto& e : ends) {
      const VertexSet base = set_difference(n, e);
      if (static_cast<int>(base.size()) > tau) continue;
      const int need = ww - 2 - weight_of(g, base);
      if (mode == PairMode::canonical) {
        if (need == 0) sg.edges.push_back({e, base, w});
        continue;
      }
      // pad with vertices of A \ N whose total weight is exactly `need`
      const VertexSet pool = set_difference(a, n);
      VertexSet extra;
      auto pad = [&](auto&& self, std::size_t from, int left) -> void {
        if (left == 0) {
          sg.edges.push_back({e, set_union(base, extra), w});
          return;
        }
        if (static_cast<int>(base.size() + extra.size()) >= tau) return;
        for (std::size_t i = from; i < pool.size(); ++i) {
          if (g.weight(pool[i]) > left) continue;
          extra.push_back(pool[i]);
          self(self, i + 1, left - g.weight(pool[i]));
          extra.pop_back();
        }
      };
      if (need >= 0) pad(pad, 0, need);
    }
  };

  // DFS over independent W outside A. N(W, A) only grows, and it must fit in
  // U plus the (at most two) endpoints, so |N(W, A)| > tau + 2 prunes.
  VertexSet w;
  std::vector<int> a_count(g.size(), 0);
  std::vector<int> blocked(g.size(), 0);
  int n_size = 0;
  auto dfs = [&](auto&& self, std::size_t from) -> void {
    for (std::size_t i = from; i < outside.size(); ++i) {
      const VertexId v = outside[i];
      if (blocked[static_cast<std::size_t>(v)]) continue;
      int added = 0;
      for (VertexId y : g.neighbors(v)) {
        if (in_a[static_cast<std::size_t>(y)] && a_count[static_cast<std::size_t>(y)]++ == 0) ++added;
      }
      n_size += added;
      if (n_size <= tau + 2) {
        w.push_back(v);
        for (VertexId y : g.neighbors(v)) ++blocked[static_cast<std::size_t>(y)];
        VertexSet n;
        for (VertexId x : a) {
          if (a_count[static_cast<std::size_t>(x)]) n.push_back(x);
        }
        emit(w, n);
        if (static_cast<int>(w.size()) < tau) self(self, i + 1);
        for (VertexId y : g.neighbors(v)) --blocked[static_cast<std::size_t>(y)];
        w.pop_back();
      }
      n_size -= added;
      for (VertexId y : g.neighbors(v)) {
        if (in_a[static_cast<std::size_t>(y)]) --a_count[static_cast<std::size_t>(y)];
      }
    }
  };
  dfs(dfs, 0);

  std::sort(sg.edges.begin(), sg.edges.end());
  sg.edges.erase(std::unique(sg.edges.begin(), sg.edges.end()), sg.edges.end());
  return sg;
}

/// A sub-multigraph of a search graph, kept with its labels.
struct LabeledBinocular {
  std::vector<SearchEdge> edges;

  VertexSet vertices() const {
    VertexSet out;
    for (const auto& e : edges) out = set_union(out, e.ends);
    return out;
  }
  std::vector<SearchEdge> loops() const {
    std::vector<SearchEdge> out;
    for (const auto& e : edges) {
      if (e.is_loop()) out.push_back(e);
    }
    return out;
  }
  std::vector<SearchEdge> links() const {
    std::vector<SearchEdge> out;
    for (const auto& e : edges) {
      if (!e.is_loop()) out.push_back(e);
    }
    return out;
  }
  /// U(B): endpoints together with every U label.
  VertexSet u_union() const {
    VertexSet out;
    for (const auto& e : edges) out = set_union(out, set_union(e.ends, e.u));
    return out;
  }
  /// W(B): union of the W labels.
  VertexSet w_union() const {
    VertexSet out;
    for (const auto& e : edges) out = set_union(out, e.w);
    return out;
  }
  bool is_binocular() const { return edges.size() > vertices().size(); }
};

inline bool is_improving_binocular(const LabeledBinocular& b, const ConflictGraph& g, const Packing&) {
  VertexSet w1, u1, w2, u2;
  int loops = 0;
  std::size_t w2_total = 0;
  for (const auto& e : b.edges) {
    if (e.is_loop()) {
      ++loops;
      w1 = set_union(w1, e.w);
      u1 = set_union(u1, e.u);
    } else {
      w2_total += e.w.size();
      w2 = set_union(w2, e.w);
      u2 = set_union(u2, e.u);
    }
  }
  if (w2.size() != w2_total) return false;  // (i)
  if (weight_of(g, set_difference(w1, w2)) < weight_of(g, set_difference(u1, u2)) + 2 * loops) {
    return false;  // (ii)
  }
  return is_independent(g, b.w_union());  // (iii)
}

/// W(B) for an improving binocular B; passes is_local_improvement.
inline VertexSet extract_improvement(const LabeledBinocular& b, const ConflictGraph& g, const Packing& a) {
  if (!b.is_binocular()) throw std::logic_error("extract_improvement: edge set is not a binocular");
  if (!is_improving_binocular(b, g, a)) {
    throw std::logic_error("extract_improvement: binocular is not improving");
  }
  return b.w_union();
}

inline void write_dot(std::ostream& out, const SearchGraph& sg, std::size_t max_label = 6) {
  auto label = [&](const VertexSet& s) {
    std::string txt;
    for (std::size_t i = 0; i < s.size() && i < max_label; ++i) txt += (i ? "," : "") + std::to_string(s[i]);
    if (s.size() > max_label) txt += ",...";
    return "{" + txt + "}";
  };
  out << "graph search {\n";
  for (VertexId v : sg.vertices) out << "  " << v << ";\n";
  for (const auto& e : sg.edges) {
    out << "  " << e.ends.front() << " -- " << e.ends.back() << " [label=\"U=" << label(e.u)
        << " W=" << label(e.w) << "\"];\n";
  }
  out << "}\n";
}

}  // namespace setpack
