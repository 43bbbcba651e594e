#pragma once

#include <algorithm>
#include <bit>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <functional>
#include <map>
#include <optional>
#include <random>
#include <set>
#include <stdexcept>
#include <string>
#include <tuple>
#include <unordered_map>
#include <utility>
#include <vector>

#include "setpack/binocular.hpp"
#include "setpack/conflict.hpp"
#include "setpack/local_search.hpp"
#include "setpack/search_graph.hpp"

namespace setpack {

/// Subset of the colors 0..t-1 as a fixed-width bitmask.
class ColorSet {
 public:
  ColorSet() = default;
  explicit ColorSet(std::size_t t) : words_((t + 63) / 64, 0) {}

  void insert(std::uint32_t c) {
    const std::size_t w = c / 64;
    if (w >= words_.size()) words_.resize(w + 1, 0);
    words_[w] |= std::uint64_t{1} << (c % 64);
  }
  bool contains(std::uint32_t c) const {
    const std::size_t w = c / 64;
    return w < words_.size() && (words_[w] >> (c % 64) & 1U);
  }
  bool empty() const {
    return std::all_of(words_.begin(), words_.end(), [](std::uint64_t w) { return w == 0; });
  }
  std::size_t count() const {
    std::size_t n = 0;
    for (auto w : words_) n += static_cast<std::size_t>(std::popcount(w));
    return n;
  }
  bool intersects(const ColorSet& o) const {
    const std::size_t n = std::min(words_.size(), o.words_.size());
    for (std::size_t i = 0; i < n; ++i) {
      if (words_[i] & o.words_[i]) return true;
    }
    return false;
  }
  ColorSet& operator|=(const ColorSet& o) {
    if (o.words_.size() > words_.size()) words_.resize(o.words_.size(), 0);
    for (std::size_t i = 0; i < o.words_.size(); ++i) words_[i] |= o.words_[i];
    return *this;
  }
  friend ColorSet operator|(ColorSet a, const ColorSet& b) { return a |= b; }

  friend bool operator==(const ColorSet& a, const ColorSet& b) {
    const std::size_t n = std::max(a.words_.size(), b.words_.size());
    for (std::size_t i = 0; i < n; ++i) {
      if (a.word(i) != b.word(i)) return false;
    }
    return true;
  }
  friend bool operator<(const ColorSet& a, const ColorSet& b) {
    const std::size_t n = std::max(a.words_.size(), b.words_.size());
    for (std::size_t i = n; i-- > 0;) {
      if (a.word(i) != b.word(i)) return a.word(i) < b.word(i);
    }
    return false;
  }

  std::size_t hash() const {
    std::size_t h = 0x9e3779b97f4a7c15ULL;
    std::size_t last = words_.size();
    while (last > 0 && words_[last - 1] == 0) --last;
    for (std::size_t i = 0; i < last; ++i) h = (h ^ words_[i]) * 0x100000001b3ULL + (h >> 29);
    return h;
  }

  std::vector<std::uint32_t> members() const {
    std::vector<std::uint32_t> out;
    for (std::size_t i = 0; i < words_.size(); ++i) {
      for (std::uint64_t w = words_[i]; w; w &= w - 1) {
        out.push_back(static_cast<std::uint32_t>(i * 64 + static_cast<std::size_t>(std::countr_zero(w))));
      }
    }
    return out;
  }

 private:
  std::uint64_t word(std::size_t i) const { return i < words_.size() ? words_[i] : 0; }
  std::vector<std::uint64_t> words_;
};

/// Assignment of a color in 0..t-1 to every universe element.
struct Coloring {
  std::uint32_t t = 1;
  std::vector<std::uint32_t> color;

  ColorSet colors_of(const std::vector<ElementId>& elements) const {
    ColorSet out(t);
    for (ElementId e : elements) out.insert(color.at(static_cast<std::size_t>(e)));
    return out;
  }
};

/// ceil(3 * tau^2 * log2 |V|), with |V| taken as at least 2.
inline std::uint32_t default_t(int tau, std::size_t vertex_count) {
  const double t = 3.0 * tau * tau * log2_floor2(vertex_count);
  return static_cast<std::uint32_t>(std::ceil(t - 1e-9));
}

/// Probability that k fixed elements receive distinct colors out of t.
inline double injective_probability(std::uint32_t t, std::uint32_t k) {
  if (k > t) return 0.0;
  double p = 1.0;
  for (std::uint32_t i = 0; i < k; ++i) p *= static_cast<double>(t - i) / t;
  return p;
}

/// Repetitions R with (1 - p)^R <= miss_rate, where p is the chance that a
/// k-element target is colored injectively. Capped at max_reps.
inline int coloring_reps_for(std::uint32_t t, std::uint32_t k, double miss_rate = 0.01, int max_reps = 4096) {
  const double p = injective_probability(t, k);
  if (p >= 1.0) return 1;
  if (p <= 0.0) return max_reps;
  const double r = std::ceil(std::log(miss_rate) / std::log1p(-p));
  return static_cast<int>(std::clamp(r, 1.0, static_cast<double>(max_reps)));
}

/// Defaults for the repetition count. The target is a four-edge binocular
/// whose edges each carry two 3-sets. The miss rate is per search: a campaign
/// of 50 instances x 100 seeded searches that wants at most one miss per
/// instance needs roughly this.
inline constexpr std::uint32_t default_coloring_target = 24;
inline constexpr double default_miss_rate = 1e-4;

inline int default_coloring_reps(std::uint32_t t) {
  return coloring_reps_for(t, std::min(t, default_coloring_target), default_miss_rate);
}

/// `reps` independent uniform colorings; with `injective`, a single identity
/// coloring on max(t, universe_n) colors instead.
inline std::vector<Coloring> make_colorings(std::size_t universe_n, std::uint32_t t, int reps, std::uint64_t seed,
                                            bool injective = false) {
  if (t < 1) throw std::invalid_argument("make_colorings: t must be positive");
  if (reps < 1) throw std::invalid_argument("make_colorings: reps must be positive");
  if (injective) {
    Coloring f{std::max<std::uint32_t>(t, static_cast<std::uint32_t>(universe_n)), {}};
    f.color.resize(universe_n);
    for (std::size_t e = 0; e < universe_n; ++e) f.color[e] = static_cast<std::uint32_t>(e);
    return {f};
  }
  std::mt19937_64 rng(seed);
  std::uniform_int_distribution<std::uint32_t> pick(0, t - 1);
  std::vector<Coloring> out(static_cast<std::size_t>(reps));
  for (auto& f : out) {
    f.t = t;
    f.color.resize(universe_n);
    for (auto& c : f.color) c = pick(rng);
  }
  return out;
}

/// The search graph restricted to edges whose W-vertices carry pairwise
/// disjoint color sets. Colors of every W-vertex are kept for the loop checks.
struct ColorfulSearchGraph {
  VertexSet vertices;
  std::vector<SearchEdge> edges;
  std::vector<ColorSet> edge_colors;  // col(W(e))
  std::vector<std::size_t> source;    // index of the edge in the parent graph
  std::unordered_map<VertexId, ColorSet> vertex_colors;

  const ColorSet& colors(VertexId v) const { return vertex_colors.at(v); }
};

inline ColorfulSearchGraph colorful_subgraph(const SearchGraph& sg,
                                             std::unordered_map<VertexId, ColorSet> vertex_colors) {
  ColorfulSearchGraph csg;
  csg.vertices = sg.vertices;
  for (std::size_t i = 0; i < sg.edges.size(); ++i) {
    const auto& e = sg.edges[i];
    ColorSet all;
    bool disjoint = true;
    for (VertexId v : e.w) {
      const ColorSet& c = vertex_colors.at(v);
      if (all.intersects(c)) {
        disjoint = false;
        break;
      }
      all |= c;
    }
    if (!disjoint) continue;
    csg.edges.push_back(e);
    csg.edge_colors.push_back(std::move(all));
    csg.source.push_back(i);
  }
  csg.vertex_colors = std::move(vertex_colors);
  return csg;
}

inline ColorfulSearchGraph colorful_subgraph(const SearchGraph& sg, const Coloring& f, const ConflictGraph& g) {
  if (!g.has_elements()) throw std::invalid_argument("colorful_subgraph: conflict graph has no set elements");
  std::unordered_map<VertexId, ColorSet> vc;
  for (const auto& e : sg.edges) {
    for (VertexId v : e.w) {
      if (!vc.count(v)) vc.emplace(v, f.colors_of(g.elements(v)));
    }
  }
  return colorful_subgraph(sg, std::move(vc));
}

struct WalkKey {
  VertexId end = 0;
  ColorSet colors;
  VertexSet x;  // U(P) restricted to the table's U
  VertexSet y;  // W(P) restricted to the table's W
  int length = 0;

  friend bool operator==(const WalkKey&, const WalkKey&) = default;
};

struct WalkKeyHash {
  std::size_t operator()(const WalkKey& k) const {
    std::size_t h = k.colors.hash() ^ (static_cast<std::size_t>(k.end) * 0x9e3779b97f4a7c15ULL);
    for (VertexId v : k.x) h = h * 31 + static_cast<std::size_t>(v) + 1;
    h ^= 0xabcdef;
    for (VertexId v : k.y) h = h * 37 + static_cast<std::size_t>(v) + 1;
    return h * 131 + static_cast<std::size_t>(k.length);
  }
};

/// Reachable WALK states from one start vertex, each with one witness walk
/// stored as a parent pointer plus the appended edge.
class WalkTable {
 public:
  static constexpr std::size_t none = static_cast<std::size_t>(-1);

  struct Node {
    WalkKey key;
    std::size_t parent;
    std::size_t edge;  // index into the colorful graph's edges
  };

  VertexId start() const { return start_; }
  const std::vector<Node>& nodes() const { return nodes_; }
  std::size_t size() const { return nodes_.size(); }

  bool contains(const WalkKey& k) const { return index_.count(k) > 0; }
  std::optional<std::size_t> find(const WalkKey& k) const {
    auto it = index_.find(k);
    if (it == index_.end()) return std::nullopt;
    return it->second;
  }

  /// Edge indices of the stored walk, in order from the start vertex.
  std::vector<std::size_t> witness(std::size_t node) const {
    std::vector<std::size_t> out;
    for (std::size_t at = node; nodes_[at].parent != none; at = nodes_[at].parent) out.push_back(nodes_[at].edge);
    std::reverse(out.begin(), out.end());
    return out;
  }
  std::vector<std::size_t> witness(const WalkKey& k) const { return witness(index_.at(k)); }

  std::vector<WalkKey> keys() const {
    std::vector<WalkKey> out;
    out.reserve(nodes_.size());
    for (const auto& n : nodes_) out.push_back(n.key);
    return out;
  }

 private:
  friend WalkTable compute_walks(const ColorfulSearchGraph&, const VertexSet&, const VertexSet&, VertexId, int,
                                 std::size_t);
  VertexId start_ = 0;
  std::vector<Node> nodes_;
  std::unordered_map<WalkKey, std::size_t, WalkKeyHash> index_;
};

/// Forward DP over reachable keys, in order of length. A state is extended by
/// a non-loop edge at its end whose colors avoid the accumulated set.
inline WalkTable compute_walks(const ColorfulSearchGraph& csg, const VertexSet& u_loops, const VertexSet& w_loops,
                               VertexId start, int max_len, std::size_t max_states = 2'000'000) {
  if (max_len < 0 || max_len > 64) throw std::invalid_argument("compute_walks: max_len outside 0..64");
  if (!contains(csg.vertices, start)) throw std::invalid_argument("compute_walks: start is not a search vertex");
  std::unordered_map<VertexId, std::vector<std::size_t>> incident;
  for (std::size_t i = 0; i < csg.edges.size(); ++i) {
    const auto& e = csg.edges[i];
    if (e.is_loop()) continue;
    incident[e.ends[0]].push_back(i);
    incident[e.ends[1]].push_back(i);
  }
  WalkTable table;
  table.start_ = start;
  WalkKey base{start, ColorSet(), {}, {}, 0};
  table.index_.emplace(base, 0);
  table.nodes_.push_back({std::move(base), WalkTable::none, 0});

  std::size_t layer_begin = 0;
  for (int l = 1; l <= max_len; ++l) {
    const std::size_t layer_end = table.nodes_.size();
    for (std::size_t n = layer_begin; n < layer_end; ++n) {
      const VertexId at = table.nodes_[n].key.end;
      auto it = incident.find(at);
      if (it == incident.end()) continue;
      for (std::size_t i : it->second) {
        if (table.nodes_[n].key.colors.intersects(csg.edge_colors[i])) continue;
        const auto& e = csg.edges[i];
        const auto& cur = table.nodes_[n].key;
        WalkKey next{e.ends[0] == at ? e.ends[1] : e.ends[0], cur.colors | csg.edge_colors[i],
                     set_union(cur.x, set_intersection(e.u, u_loops)),
                     set_union(cur.y, set_intersection(e.w, w_loops)), l};
        if (table.index_.count(next)) continue;
        if (table.nodes_.size() >= max_states) throw std::runtime_error("compute_walks: state budget exhausted");
        table.index_.emplace(next, table.nodes_.size());
        table.nodes_.push_back({std::move(next), n, i});
      }
    }
    layer_begin = layer_end;
    if (layer_begin == table.nodes_.size()) break;
  }
  return table;
}

namespace detail {

/// A walk from a table reduced to what the structure checks need.
struct WalkRef {
  const WalkTable* table;
  std::size_t node;
  const ColorSet* colors;
  VertexSet x;
  VertexSet y;
};

/// Per-start tables built once with every U and W label present, so a single
/// table projects onto the loop unions of any choice of loops.
class StructureSearch {
 public:
  StructureSearch(const ColorfulSearchGraph& csg, const ConflictGraph& g, int max_len)
      : csg_(csg), g_(g), max_len_(max_len) {
    for (const auto& e : csg.edges) {
      all_u_ = set_union(all_u_, e.u);
      all_w_ = set_union(all_w_, e.w);
    }
    for (VertexId s : csg.vertices) tables_.emplace(s, compute_walks(csg, all_u_, all_w_, s, max_len));
    for (std::size_t i = 0; i < csg.edges.size(); ++i) {
      if (csg.edges[i].is_loop()) loops_.push_back(i);
    }
  }

  std::optional<LabeledBinocular> run() {
    if (auto b = no_loops()) return b;
    if (auto b = one_loop()) return b;
    if (auto b = two_loops()) return b;
    return std::nullopt;
  }

 private:
  // walks from s to t; lengths in [min_len, max_len_]. The empty walk is
  // included when s == t and min_len == 0.
  std::vector<WalkRef> walks(VertexId s, VertexId t, int min_len, const VertexSet& u_l, const VertexSet& w_l) const {
    const WalkTable& tab = tables_.at(s);
    std::vector<WalkRef> out;
    std::set<std::tuple<ColorSet, VertexSet, VertexSet>> seen;
    for (std::size_t n = 0; n < tab.size(); ++n) {
      const auto& k = tab.nodes()[n].key;
      if (k.end != t || k.length < min_len) continue;
      VertexSet x = set_intersection(k.x, u_l);
      VertexSet y = set_intersection(k.y, w_l);
      if (!seen.emplace(k.colors, x, y).second) continue;
      out.push_back({&tab, n, &k.colors, std::move(x), std::move(y)});
    }
    return out;
  }

  static bool disjoint(std::initializer_list<const WalkRef*> ws) {
    std::vector<const WalkRef*> v(ws);
    for (std::size_t i = 0; i < v.size(); ++i) {
      for (std::size_t j = i + 1; j < v.size(); ++j) {
        if (v[i]->colors->intersects(*v[j]->colors)) return false;
      }
    }
    return true;
  }

  // Clauses on the loop part: colors of W_L \ Y avoid C and are pairwise
  // disjoint, and the weight inequality holds.
  bool loop_clauses(const std::vector<std::size_t>& loops, std::initializer_list<const WalkRef*> ws) const {
    VertexSet u_l, w_l, x, y;
    ColorSet c;
    for (auto i : loops) {
      u_l = set_union(u_l, csg_.edges[i].u);
      w_l = set_union(w_l, csg_.edges[i].w);
    }
    for (const WalkRef* w : ws) {
      c |= *w->colors;
      x = set_union(x, w->x);
      y = set_union(y, w->y);
    }
    const VertexSet rest = set_difference(w_l, y);
    ColorSet seen;
    for (VertexId v : rest) {
      const ColorSet& cv = csg_.colors(v);
      if (cv.intersects(c) || cv.intersects(seen)) return false;
      seen |= cv;
    }
    return weight_of(g_, rest) >= weight_of(g_, set_difference(u_l, x)) + 2 * static_cast<int>(loops.size());
  }

  LabeledBinocular assemble(const std::vector<std::size_t>& loops, std::initializer_list<const WalkRef*> ws) const {
    std::vector<std::size_t> idx(loops);
    for (const WalkRef* w : ws) {
      auto part = w->table->witness(w->node);
      idx.insert(idx.end(), part.begin(), part.end());
    }
    std::sort(idx.begin(), idx.end());
    idx.erase(std::unique(idx.begin(), idx.end()), idx.end());
    LabeledBinocular b;
    for (auto i : idx) b.edges.push_back(csg_.edges[i]);
    return b;
  }

  std::optional<LabeledBinocular> no_loops() const {
    const VertexSet none;
    const auto& vs = csg_.vertices;
    // three u-v walks, u != v
    for (std::size_t i = 0; i < vs.size(); ++i) {
      for (std::size_t j = i + 1; j < vs.size(); ++j) {
        const auto p = walks(vs[i], vs[j], 1, none, none);
        for (std::size_t a = 0; a < p.size(); ++a) {
          for (std::size_t b = a + 1; b < p.size(); ++b) {
            if (!disjoint({&p[a], &p[b]})) continue;
            for (std::size_t c = b + 1; c < p.size(); ++c) {
              if (disjoint({&p[a], &p[b], &p[c]})) return assemble({}, {&p[a], &p[b], &p[c]});
            }
          }
        }
      }
    }
    // closed walks at u and v joined by a u-v walk (empty when u == v)
    for (std::size_t i = 0; i < vs.size(); ++i) {
      const auto cu = walks(vs[i], vs[i], 2, none, none);
      if (cu.empty()) continue;
      for (std::size_t j = i; j < vs.size(); ++j) {
        const auto cv = i == j ? cu : walks(vs[j], vs[j], 2, none, none);
        const auto conn = walks(vs[i], vs[j], i == j ? 0 : 1, none, none);
        for (const auto& p : conn) {
          if (i == j && p.table->nodes()[p.node].key.length != 0) continue;
          for (std::size_t a = 0; a < cu.size(); ++a) {
            if (!disjoint({&p, &cu[a]})) continue;
            for (std::size_t b = i == j ? a + 1 : 0; b < cv.size(); ++b) {
              if (disjoint({&p, &cu[a], &cv[b]})) return assemble({}, {&cu[a], &cv[b], &p});
            }
          }
        }
      }
    }
    return std::nullopt;
  }

  // loop at u, u-v walk (empty when u == v), closed walk at v
  std::optional<LabeledBinocular> one_loop() const {
    for (auto li : loops_) {
      const auto& loop = csg_.edges[li];
      const VertexId u = loop.ends[0];
      for (VertexId v : csg_.vertices) {
        const auto conn = walks(u, v, u == v ? 0 : 1, loop.u, loop.w);
        const auto cyc = walks(v, v, 2, loop.u, loop.w);
        for (const auto& p : conn) {
          if (u == v && p.table->nodes()[p.node].key.length != 0) continue;
          for (const auto& c : cyc) {
            if (disjoint({&p, &c}) && loop_clauses({li}, {&p, &c})) return assemble({li}, {&p, &c});
          }
        }
      }
    }
    return std::nullopt;
  }

  // loops at u and v joined by a u-v walk (empty when u == v)
  std::optional<LabeledBinocular> two_loops() const {
    for (std::size_t a = 0; a < loops_.size(); ++a) {
      for (std::size_t b = a + 1; b < loops_.size(); ++b) {
        const auto& l1 = csg_.edges[loops_[a]];
        const auto& l2 = csg_.edges[loops_[b]];
        const VertexId u = l1.ends[0];
        const VertexId v = l2.ends[0];
        const VertexSet u_l = set_union(l1.u, l2.u);
        const VertexSet w_l = set_union(l1.w, l2.w);
        for (const auto& p : walks(u, v, u == v ? 0 : 1, u_l, w_l)) {
          if (u == v && p.table->nodes()[p.node].key.length != 0) continue;
          if (loop_clauses({loops_[a], loops_[b]}, {&p})) return assemble({loops_[a], loops_[b]}, {&p});
        }
      }
    }
    return std::nullopt;
  }

  const ColorfulSearchGraph& csg_;
  const ConflictGraph& g_;
  int max_len_;
  VertexSet all_u_, all_w_;
  std::map<VertexId, WalkTable> tables_;
  std::vector<std::size_t> loops_;
};

}  // namespace detail

/// Walk-length cap for the binocular search: ceil(tau * log2 |V|), and never
/// more than the number of search vertices, which bounds every path or cycle
/// of a minimal binocular.
inline int walk_length_cap(int tau, std::size_t conflict_vertices, std::size_t search_vertices) {
  const int by_log = static_cast<int>(std::ceil(tau * log2_floor2(conflict_vertices) - 1e-9));
  return std::min(by_log, static_cast<int>(search_vertices));
}

/// Stitches loops and stored walks into a colorful binocular, or returns none.
inline std::optional<LabeledBinocular> find_colorful_binocular(const ColorfulSearchGraph& csg,
                                                               const ConflictGraph& g, int max_len) {
  if (csg.edges.empty()) return std::nullopt;
  return detail::StructureSearch(csg, g, max_len).run();
}

/// Colorings for one solve: t = ceil(3 tau^2 log2 |V|) unless overridden.
inline std::vector<Coloring> colorings_for(const ConflictGraph& g, const SearchParams& params) {
  const int tau = params.resolved_tau();
  const std::uint32_t t = params.t_override ? static_cast<std::uint32_t>(*params.t_override) : default_t(tau, g.size());
  const int reps = params.coloring_reps > 0 ? params.coloring_reps : default_coloring_reps(t);
  return make_colorings(g.universe_size(), t, reps, params.seed, params.injective_colorings);
}

/// Tries each coloring in order and returns the first colorful binocular.
inline std::optional<LabeledBinocular> search_improving_binocular(const SearchGraph& sg, const ConflictGraph& g,
                                                                  const Packing& a, int tau,
                                                                  const std::vector<Coloring>& colorings) {
  if (!has_dense_component(to_multigraph(sg))) return std::nullopt;
  const int cap = walk_length_cap(tau, g.size(), sg.vertices.size());
  for (const auto& f : colorings) {
    const auto csg = colorful_subgraph(sg, f, g);
    if (auto b = find_colorful_binocular(csg, g, cap)) {
      if (!b->is_binocular() || !is_improving_binocular(*b, g, a)) {
        throw std::logic_error("search_improving_binocular: colorful binocular failed the improving check");
      }
      return b;
    }
  }
  return std::nullopt;
}

inline std::optional<LabeledBinocular> search_improving_binocular(const SearchGraph& sg, const ConflictGraph& g,
                                                                  const Packing& a, const SearchParams& params) {
  return search_improving_binocular(sg, g, a, params.resolved_tau(), colorings_for(g, params));
}

}  // namespace setpack
