#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <limits>
#include <numeric>
#include <optional>
#include <queue>
#include <stdexcept>
#include <string>
#include <vector>

#include "setpack/conflict.hpp"
#include "setpack/local_search.hpp"
#include "setpack/search_graph.hpp"

namespace setpack {

/// Loop when a == b.
struct MultiEdge {
  int a = 0;
  int b = 0;
  bool is_loop() const { return a == b; }
  friend bool operator==(const MultiEdge&, const MultiEdge&) = default;
};

struct Multigraph {
  int vertex_count = 0;
  std::vector<MultiEdge> edges;

  void add_edge(int a, int b) {
    if (a < 0 || b < 0 || a >= vertex_count || b >= vertex_count) {
      throw std::out_of_range("multigraph edge endpoint out of range");
    }
    edges.push_back({a, b});
  }
};

/// Indices into Multigraph::edges, sorted ascending.
using EdgeSubset = std::vector<std::size_t>;

inline EdgeSubset all_edges(const Multigraph& h) {
  EdgeSubset out(h.edges.size());
  std::iota(out.begin(), out.end(), std::size_t{0});
  return out;
}

inline std::vector<int> touched_vertices(const Multigraph& h, const EdgeSubset& es) {
  std::vector<int> out;
  for (auto i : es) {
    out.push_back(h.edges[i].a);
    out.push_back(h.edges[i].b);
  }
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

/// Degree inside the subset; a loop contributes 2.
inline std::vector<int> subset_degrees(const Multigraph& h, const EdgeSubset& es) {
  std::vector<int> deg(static_cast<std::size_t>(h.vertex_count), 0);
  for (auto i : es) {
    ++deg[static_cast<std::size_t>(h.edges[i].a)];
    ++deg[static_cast<std::size_t>(h.edges[i].b)];
  }
  return deg;
}

inline bool is_binocular(const Multigraph& h) {
  return h.edges.size() > static_cast<std::size_t>(h.vertex_count);
}

/// The sub-multigraph formed by `es` and the vertices it touches.
inline bool is_binocular(const Multigraph& h, const EdgeSubset& es) {
  return es.size() > touched_vertices(h, es).size();
}

inline bool is_connected(const Multigraph& h, const EdgeSubset& es) {
  const auto verts = touched_vertices(h, es);
  if (verts.empty()) return true;
  std::vector<int> parent(static_cast<std::size_t>(h.vertex_count));
  std::iota(parent.begin(), parent.end(), 0);
  auto find = [&](int x) {
    while (parent[static_cast<std::size_t>(x)] != x) {
      x = parent[static_cast<std::size_t>(x)] = parent[static_cast<std::size_t>(parent[static_cast<std::size_t>(x)])];
    }
    return x;
  };
  std::size_t merges = 0;
  for (auto i : es) {
    const int ra = find(h.edges[i].a);
    const int rb = find(h.edges[i].b);
    if (ra != rb) {
      parent[static_cast<std::size_t>(ra)] = rb;
      ++merges;
    }
  }
  return merges + 1 == verts.size();
}

/// Connected, one edge more than vertices, no vertex of degree below 2.
/// Equivalent to minimality for a binocular: a connected graph with
/// cyclomatic number 2 has a proper binocular subgraph only if some tree
/// hangs off it, which leaves a degree-1 vertex.
inline bool has_minimal_binocular_shape(const Multigraph& h, const EdgeSubset& es) {
  const auto verts = touched_vertices(h, es);
  if (es.size() != verts.size() + 1 || !is_connected(h, es)) return false;
  const auto deg = subset_degrees(h, es);
  return std::all_of(verts.begin(), verts.end(), [&](int v) { return deg[static_cast<std::size_t>(v)] >= 2; });
}

/// Binocular with no proper sub-multigraph that is a binocular. Checked
/// directly over all proper edge subsets when that is affordable.
inline bool is_minimal_binocular(const Multigraph& h, const EdgeSubset& es, std::size_t direct_limit = 20) {
  if (!is_binocular(h, es)) return false;
  if (es.size() > direct_limit) return has_minimal_binocular_shape(h, es);
  const std::size_t m = es.size();
  for (std::uint64_t mask = 1; mask + 1 < (std::uint64_t{1} << m); ++mask) {
    EdgeSubset sub;
    for (std::size_t i = 0; i < m; ++i) {
      if (mask >> i & 1U) sub.push_back(es[i]);
    }
    if (is_binocular(h, sub)) return false;
  }
  return true;
}

inline bool is_minimal_binocular(const Multigraph& h) { return is_minimal_binocular(h, all_edges(h)); }

namespace detail {

/// Depth-first enumeration of edge subsets of size k touching at most k - 1
/// vertices, in lexicographic index order. `visit` returns true to stop.
template <typename Visit>
bool for_each_dense_subset(const Multigraph& h, std::size_t k, Visit&& visit) {
  EdgeSubset pick;
  std::vector<int> cnt(static_cast<std::size_t>(h.vertex_count), 0);
  std::size_t touched = 0;
  auto touch = [&](int v, int d) {
    auto& c = cnt[static_cast<std::size_t>(v)];
    if (d > 0 && c++ == 0) ++touched;
    if (d < 0 && --c == 0) --touched;
  };
  auto rec = [&](auto&& self, std::size_t from) -> bool {
    if (pick.size() == k) return visit(static_cast<const EdgeSubset&>(pick));
    for (std::size_t i = from; i + (k - pick.size()) <= h.edges.size(); ++i) {
      const auto& e = h.edges[i];
      touch(e.a, 1);
      if (!e.is_loop()) touch(e.b, 1);
      if (touched + 1 <= k) {
        pick.push_back(i);
        if (self(self, i + 1)) return true;
        pick.pop_back();
      }
      touch(e.a, -1);
      if (!e.is_loop()) touch(e.b, -1);
    }
    return false;
  };
  return rec(rec, 0);
}

}  // namespace detail

/// Smallest minimal binocular with at most max_size edges; among those of the
/// same size, the lexicographically first edge subset.
inline std::optional<EdgeSubset> find_minimal_binocular(const Multigraph& h, std::size_t max_size) {
  const std::size_t cap = std::min(max_size, static_cast<std::size_t>(h.vertex_count) + 1);
  for (std::size_t k = 2; k <= cap; ++k) {
    std::optional<EdgeSubset> hit;
    detail::for_each_dense_subset(h, k, [&](const EdgeSubset& es) {
      if (!has_minimal_binocular_shape(h, es)) return false;
      hit = es;
      return true;
    });
    if (hit) return hit;
  }
  return std::nullopt;
}

inline std::vector<EdgeSubset> enumerate_minimal_binoculars(const Multigraph& h,
                                                            std::size_t max_size = std::numeric_limits<std::size_t>::max()) {
  std::vector<EdgeSubset> out;
  const std::size_t cap = std::min(max_size, static_cast<std::size_t>(h.vertex_count) + 1);
  for (std::size_t k = 2; k <= cap; ++k) {
    detail::for_each_dense_subset(h, k, [&](const EdgeSubset& es) {
      if (has_minimal_binocular_shape(h, es)) out.push_back(es);
      return false;
    });
  }
  return out;
}

/// Decomposition of a minimal binocular. For two_cycles_and_path the parts
/// are {cycle at u, cycle at v, u-v path}; u == v and the path is empty when
/// the cycles share a vertex. For three_paths the parts are three u-v paths.
/// Each part lists edge indices in traversal order.
struct BinocularShape {
  enum class Kind { two_cycles_and_path, three_paths } kind;
  int u = 0;
  int v = 0;
  std::vector<EdgeSubset> parts;
};

inline BinocularShape classify_minimal_binocular(const Multigraph& h, const EdgeSubset& es) {
  if (!has_minimal_binocular_shape(h, es)) {
    throw std::invalid_argument("classify_minimal_binocular: not a minimal binocular");
  }
  const auto deg = subset_degrees(h, es);
  std::vector<int> branch;
  for (int x : touched_vertices(h, es)) {
    if (deg[static_cast<std::size_t>(x)] > 2) branch.push_back(x);
  }
  std::vector<char> used(h.edges.size(), 0);
  auto other = [&](std::size_t i, int from) { return h.edges[i].a == from ? h.edges[i].b : h.edges[i].a; };
  // Follows degree-2 vertices from `start` until a branch vertex is reached.
  auto trace = [&](int start) {
    EdgeSubset walk;
    int at = start;
    do {
      std::size_t next = h.edges.size();
      for (auto i : es) {
        if (!used[i] && (h.edges[i].a == at || h.edges[i].b == at)) {
          next = i;
          break;
        }
      }
      if (next == h.edges.size()) throw std::logic_error("classify_minimal_binocular: dangling walk");
      used[next] = 1;
      walk.push_back(next);
      at = other(next, at);
    } while (std::find(branch.begin(), branch.end(), at) == branch.end());
    return std::pair{walk, at};
  };

  BinocularShape shape{};
  if (branch.size() == 1) {
    const int c = branch.front();
    auto [first, end1] = trace(c);
    auto [second, end2] = trace(c);
    shape = {BinocularShape::Kind::two_cycles_and_path, c, c, {first, second, {}}};
  } else if (branch.size() == 2) {
    const int u = branch[0];
    const int v = branch[1];
    std::vector<EdgeSubset> to_v;
    std::optional<EdgeSubset> cycle_u;
    for (int r = 0; r < 3 && !cycle_u; ++r) {
      auto [walk, end] = trace(u);
      if (end == u) {
        cycle_u = walk;
      } else {
        to_v.push_back(walk);
      }
    }
    if (cycle_u) {
      if (to_v.empty()) to_v.push_back(trace(u).first);
      auto [cycle_v, end] = trace(v);
      if (end != v) throw std::logic_error("classify_minimal_binocular: cycle at v does not close");
      shape = {BinocularShape::Kind::two_cycles_and_path, u, v, {*cycle_u, cycle_v, to_v.front()}};
    } else {
      shape = {BinocularShape::Kind::three_paths, u, v, to_v};
    }
  } else {
    throw std::logic_error("classify_minimal_binocular: unexpected branch vertex count");
  }

  EdgeSubset rebuilt;
  for (const auto& p : shape.parts) rebuilt.insert(rebuilt.end(), p.begin(), p.end());
  std::sort(rebuilt.begin(), rebuilt.end());
  if (std::adjacent_find(rebuilt.begin(), rebuilt.end()) != rebuilt.end() || rebuilt != es) {
    throw std::logic_error("classify_minimal_binocular: parts do not reconstruct the edge set");
  }
  return shape;
}

inline double log2_floor2(std::size_t n) { return std::log2(static_cast<double>(std::max<std::size_t>(n, 2))); }

/// 4 * s * log2 |V|, with |V| taken as at least 2.
inline std::size_t berman_furer_bound(int vertex_count, int s) {
  return static_cast<std::size_t>(std::floor(4.0 * s * log2_floor2(static_cast<std::size_t>(vertex_count)) + 1e-9));
}

namespace detail {

/// Strips degree-1 vertices until none remain.
inline EdgeSubset prune_pendants(const Multigraph& h, EdgeSubset es) {
  for (bool changed = true; changed;) {
    changed = false;
    const auto deg = subset_degrees(h, es);
    EdgeSubset keep;
    for (auto i : es) {
      const auto& e = h.edges[i];
      if (!e.is_loop() && (deg[static_cast<std::size_t>(e.a)] == 1 || deg[static_cast<std::size_t>(e.b)] == 1)) {
        changed = true;
      } else {
        keep.push_back(i);
      }
    }
    es = std::move(keep);
  }
  return es;
}

}  // namespace detail

/// A binocular of size at most 4 * s * log2 |V| in a graph with
/// s * |E| >= (s + 1) * |V|. Tries breadth-first trees from every root, closing
/// them with their two shallowest non-tree edges; exhaustive search is the
/// fallback if no tree yields one small enough.
inline EdgeSubset berman_furer_witness(const Multigraph& h, int s) {
  if (s < 1) throw std::invalid_argument("berman_furer_witness: s must be positive");
  const auto m = static_cast<std::int64_t>(h.edges.size());
  const auto n = static_cast<std::int64_t>(h.vertex_count);
  if (s * m < (s + 1) * n || m == 0) {
    throw std::invalid_argument("berman_furer_witness: density precondition |E| >= (s+1)/s |V| unmet");
  }
  const std::size_t bound = berman_furer_bound(h.vertex_count, s);
  std::vector<std::vector<std::size_t>> inc(static_cast<std::size_t>(h.vertex_count));
  for (std::size_t i = 0; i < h.edges.size(); ++i) {
    inc[static_cast<std::size_t>(h.edges[i].a)].push_back(i);
    if (!h.edges[i].is_loop()) inc[static_cast<std::size_t>(h.edges[i].b)].push_back(i);
  }

  std::optional<EdgeSubset> best;
  for (int root = 0; root < h.vertex_count; ++root) {
    std::vector<int> depth(static_cast<std::size_t>(h.vertex_count), -1);
    std::vector<std::size_t> via(static_cast<std::size_t>(h.vertex_count), h.edges.size());
    std::vector<char> tree(h.edges.size(), 0);
    std::queue<int> bfs;
    depth[static_cast<std::size_t>(root)] = 0;
    bfs.push(root);
    while (!bfs.empty()) {
      const int x = bfs.front();
      bfs.pop();
      for (auto i : inc[static_cast<std::size_t>(x)]) {
        const int y = h.edges[i].a == x ? h.edges[i].b : h.edges[i].a;
        if (depth[static_cast<std::size_t>(y)] < 0) {
          depth[static_cast<std::size_t>(y)] = depth[static_cast<std::size_t>(x)] + 1;
          via[static_cast<std::size_t>(y)] = i;
          tree[i] = 1;
          bfs.push(y);
        }
      }
    }
    std::vector<std::size_t> extra;
    for (std::size_t i = 0; i < h.edges.size(); ++i) {
      if (!tree[i] && depth[static_cast<std::size_t>(h.edges[i].a)] >= 0) extra.push_back(i);
    }
    if (extra.size() < 2) continue;
    auto reach = [&](std::size_t i) {
      return depth[static_cast<std::size_t>(h.edges[i].a)] + depth[static_cast<std::size_t>(h.edges[i].b)];
    };
    std::stable_sort(extra.begin(), extra.end(), [&](auto x, auto y) { return reach(x) < reach(y); });
    const std::size_t lim = std::min<std::size_t>(extra.size(), 4);
    for (std::size_t p = 0; p < lim; ++p) {
      for (std::size_t q = p + 1; q < lim; ++q) {
        std::vector<char> take(h.edges.size(), 0);
        for (auto i : {extra[p], extra[q]}) {
          take[i] = 1;
          for (int x : {h.edges[i].a, h.edges[i].b}) {
            while (x != root) {
              const auto t = via[static_cast<std::size_t>(x)];
              take[t] = 1;
              x = h.edges[t].a == x ? h.edges[t].b : h.edges[t].a;
            }
          }
        }
        EdgeSubset es;
        for (std::size_t i = 0; i < h.edges.size(); ++i) {
          if (take[i]) es.push_back(i);
        }
        es = detail::prune_pendants(h, std::move(es));
        if (!best || es.size() < best->size()) best = es;
      }
    }
  }
  if (best && best->size() <= bound && is_binocular(h, *best)) return *best;
  if (auto exact = find_minimal_binocular(h, bound)) return *exact;
  throw std::logic_error("berman_furer_witness: no binocular within the size bound");
}

/// True iff some connected component has more edges than vertices, which is
/// exactly when the multigraph contains a binocular at all.
inline bool has_dense_component(const Multigraph& h) {
  std::vector<int> parent(static_cast<std::size_t>(h.vertex_count));
  std::iota(parent.begin(), parent.end(), 0);
  auto find = [&](int x) {
    while (parent[static_cast<std::size_t>(x)] != x) x = parent[static_cast<std::size_t>(x)];
    return x;
  };
  for (const auto& e : h.edges) {
    const int ra = find(e.a);
    const int rb = find(e.b);
    if (ra != rb) parent[static_cast<std::size_t>(ra)] = rb;
  }
  std::vector<int> verts(parent.size(), 0), edges(parent.size(), 0);
  for (int v = 0; v < h.vertex_count; ++v) ++verts[static_cast<std::size_t>(find(v))];
  for (const auto& e : h.edges) ++edges[static_cast<std::size_t>(find(e.a))];
  for (std::size_t r = 0; r < parent.size(); ++r) {
    if (edges[r] > verts[r]) return true;
  }
  return false;
}

/// Remaps a search graph onto vertices 0..|A''|-1 (in sorted order); edge i
/// of the result is edge i of the search graph.
inline Multigraph to_multigraph(const SearchGraph& sg) {
  Multigraph h;
  h.vertex_count = static_cast<int>(sg.vertices.size());
  auto index = [&](VertexId v) {
    return static_cast<int>(std::lower_bound(sg.vertices.begin(), sg.vertices.end(), v) - sg.vertices.begin());
  };
  for (const auto& e : sg.edges) h.add_edge(index(e.ends.front()), index(e.ends.back()));
  return h;
}

/// Exhaustive search for an improving minimal binocular of at most max_size
/// edges: smallest size first, then lexicographic in edge order.
inline std::optional<LabeledBinocular> naive_improving_binocular(const SearchGraph& sg, const ConflictGraph& g,
                                                                 const Packing& a, std::size_t max_size,
                                                                 std::size_t budget = 8) {
  if (max_size > budget) {
    throw std::invalid_argument("naive_improving_binocular: max_size " + std::to_string(max_size) +
                                " exceeds budget " + std::to_string(budget));
  }
  const Multigraph h = to_multigraph(sg);
  const std::size_t cap = std::min(max_size, sg.vertices.size() + 1);
  for (std::size_t k = 2; k <= cap; ++k) {
    EdgeSubset pick;
    std::vector<int> cnt(static_cast<std::size_t>(h.vertex_count), 0);
    std::size_t touched = 0;
    std::size_t loops = 0;
    VertexSet w_links;  // union of W over non-loop edges picked
    VertexSet w_all;
    std::optional<LabeledBinocular> hit;
    auto rec = [&](auto&& self, std::size_t from) -> bool {
      if (pick.size() == k) {
        if (touched + 1 != k || !has_minimal_binocular_shape(h, pick)) return false;
        LabeledBinocular b;
        for (auto i : pick) b.edges.push_back(sg.edges[i]);
        if (!is_improving_binocular(b, g, a)) return false;
        hit = std::move(b);
        return true;
      }
      // a binocular already inside the partial pick rules out minimality
      if (pick.size() > touched) return false;
      for (std::size_t i = from; i + (k - pick.size()) <= h.edges.size(); ++i) {
        const auto& e = h.edges[i];
        const auto& lab = sg.edges[i];
        if (e.is_loop() && loops == 2) continue;
        if (!e.is_loop() && intersects(w_links, lab.w)) continue;
        const VertexSet w_next = set_union(w_all, lab.w);
        bool independent = true;
        for (VertexId x : lab.w) {
          if (contains(w_all, x)) continue;
          for (VertexId y : w_all) {
            if (g.adjacent(x, y)) {
              independent = false;
              break;
            }
          }
          if (!independent) break;
        }
        if (!independent) continue;
        const std::size_t before = touched;
        if (cnt[static_cast<std::size_t>(e.a)]++ == 0) ++touched;
        if (!e.is_loop() && cnt[static_cast<std::size_t>(e.b)]++ == 0) ++touched;
        if (touched + 1 <= k) {
          const VertexSet saved_links = w_links;
          const VertexSet saved_all = w_all;
          if (!e.is_loop()) w_links = set_union(w_links, lab.w);
          w_all = w_next;
          loops += e.is_loop();
          pick.push_back(i);
          if (self(self, i + 1)) return true;
          pick.pop_back();
          loops -= e.is_loop();
          w_links = saved_links;
          w_all = saved_all;
        }
        --cnt[static_cast<std::size_t>(e.a)];
        if (!e.is_loop()) --cnt[static_cast<std::size_t>(e.b)];
        touched = before;
      }
      return false;
    };
    if (rec(rec, 0)) return hit;
  }
  return std::nullopt;
}

}  // namespace setpack
