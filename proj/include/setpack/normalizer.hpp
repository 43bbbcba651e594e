#pragma once

#include <algorithm>
#include <cstdint>
#include <optional>
#include <random>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "json.hpp"
#include "setpack/conflict.hpp"
#include "setpack/instance.hpp"
#include "setpack/vertex_set.hpp"

namespace setpack {

/// A weighted graph with two independent sets, as used when comparing a
/// local optimum A against an optimum B.
struct AnalysisTuple {
  ConflictGraph g;
  VertexSet a;
  VertexSet b;
};

struct PathRecord {
  std::vector<VertexId> vertices;  // original ids, in path order
  int path_class = 0;              // 1: outside A-neighbor only, 2: outside B-neighbor only, 3: both
  std::optional<VertexId> trimmed;  // endpoint dropped from an odd component; it stands in for the whole component
  char trimmed_side = 0;            // 'A' or 'B'
  std::optional<VertexId> a_neighbor;
  std::optional<VertexId> b_neighbor;
};

struct LongPathTrim {
  VertexSet removed;  // deleted vertices of one long path component
  int a_count = 0;    // |removed ∩ A'|
  int b_count = 0;    // |removed ∩ B'|
};

struct Bridge {
  VertexId a = 0;
  VertexId b = 0;
  bool added = true;  // false when the edge was already present
};

struct NormalizationCertificate {
  VertexSet outside;        // in neither A nor B
  VertexSet shared;         // in A ∩ B
  VertexSet closed_parts;   // cycle components and isolated even paths of G[A' ∪ B']
  VertexSet long_paths;     // deleted vertices of long path components
  std::vector<LongPathTrim> trims;
  std::vector<PathRecord> paths;
  std::vector<Bridge> bridges;
  int path_a_total = 0;  // sum over paths of |V(P) ∩ A|
  int path_b_total = 0;  // sum over paths of |V(P) ∩ B|

  VertexSet deleted() const {
    return set_union(set_union(outside, shared), set_union(closed_parts, long_paths));
  }
  bool empty() const { return deleted().empty() && paths.empty() && bridges.empty(); }
};

struct NormalizedInstance {
  ConflictGraph g;
  VertexSet a;
  VertexSet b;
  std::vector<VertexId> original_ids;  // new id -> id in the input tuple
  NormalizationCertificate certificate;
};

class NotNiceError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

namespace detail {

struct PrimeComponent {
  std::vector<VertexId> order;  // path order, or cycle order
  bool cycle = false;
};

/// Components of the subgraph induced by `keep`, each an alternating path or
/// cycle when the graph is nice. Throws otherwise.
inline std::vector<PrimeComponent> prime_components(const ConflictGraph& g, const std::vector<char>& keep) {
  std::vector<std::vector<VertexId>> nb(g.size());
  for (std::size_t v = 0; v < g.size(); ++v) {
    if (!keep[v]) continue;
    for (VertexId u : g.neighbors(static_cast<VertexId>(v))) {
      if (keep[static_cast<std::size_t>(u)]) nb[v].push_back(u);
    }
    if (nb[v].size() > 2) {
      throw NotNiceError("vertex " + std::to_string(v) + " has three weight-1 neighbors across A and B");
    }
  }
  std::vector<char> seen(g.size(), 0);
  std::vector<PrimeComponent> out;
  auto walk = [&](VertexId start) {
    PrimeComponent c;
    VertexId prev = -1;
    VertexId at = start;
    while (true) {
      seen[static_cast<std::size_t>(at)] = 1;
      c.order.push_back(at);
      VertexId next = -1;
      for (VertexId y : nb[static_cast<std::size_t>(at)]) {
        if (y != prev && !seen[static_cast<std::size_t>(y)]) {
          next = y;
          break;
        }
      }
      if (next < 0) {
        c.cycle = c.order.size() > 2 && nb[static_cast<std::size_t>(at)].size() == 2 &&
                  std::find(nb[static_cast<std::size_t>(at)].begin(), nb[static_cast<std::size_t>(at)].end(),
                            start) != nb[static_cast<std::size_t>(at)].end();
        return c;
      }
      prev = at;
      at = next;
    }
  };
  for (std::size_t v = 0; v < g.size(); ++v) {
    if (keep[v] && !seen[v] && nb[v].size() <= 1) out.push_back(walk(static_cast<VertexId>(v)));
  }
  for (std::size_t v = 0; v < g.size(); ++v) {
    if (keep[v] && !seen[v]) out.push_back(walk(static_cast<VertexId>(v)));  // only cycles remain
  }
  return out;
}

inline void check_tuple(const AnalysisTuple& t) {
  for (const auto* s : {&t.a, &t.b}) {
    for (VertexId v : *s) {
      if (v < 0 || static_cast<std::size_t>(v) >= t.g.size()) throw std::invalid_argument("tuple set refers to a missing vertex");
    }
  }
  if (!is_independent(t.g, t.a)) throw std::invalid_argument("A is not independent");
  if (!is_independent(t.g, t.b)) throw std::invalid_argument("B is not independent");
  if (!assert_claw_structure(t.g).ok()) throw NotNiceError("graph has a forbidden claw");
}

}  // namespace detail

/// The deletable vertices, grouped by the rule that applies.
inline NormalizationCertificate deletable_set(const AnalysisTuple& t) {
  detail::check_tuple(t);
  const auto& g = t.g;
  NormalizationCertificate cert;
  std::vector<char> in_a(g.size(), 0), in_b(g.size(), 0);
  for (VertexId v : t.a) in_a[static_cast<std::size_t>(v)] = 1;
  for (VertexId v : t.b) in_b[static_cast<std::size_t>(v)] = 1;
  std::vector<char> prime(g.size(), 0);
  for (std::size_t v = 0; v < g.size(); ++v) {
    const auto id = static_cast<VertexId>(v);
    if (!in_a[v] && !in_b[v]) cert.outside.push_back(id);
    if (in_a[v] && in_b[v]) cert.shared.push_back(id);
    prime[v] = (in_a[v] || in_b[v]) && !(in_a[v] && in_b[v]) && g.weight(id) == 1;
  }
  for (const auto& comp : detail::prime_components(g, prime)) {
    VertexSet vs = make_vertex_set(comp.order);
    if (comp.cycle) {
      cert.closed_parts = set_union(cert.closed_parts, vs);
      continue;
    }
    auto outside_nb = [&](VertexId v, const std::vector<char>& side) {
      for (VertexId y : g.neighbors(v)) {
        if (side[static_cast<std::size_t>(y)] && !contains(vs, y)) return true;
      }
      return false;
    };
    if (vs.size() % 2 == 0) {
      const bool isolated = std::none_of(vs.begin(), vs.end(), [&](VertexId v) {
        for (VertexId y : g.neighbors(v)) {
          if ((in_a[static_cast<std::size_t>(y)] || in_b[static_cast<std::size_t>(y)]) && !contains(vs, y)) return true;
        }
        return false;
      });
      if (isolated) {
        cert.closed_parts = set_union(cert.closed_parts, vs);
        continue;
      }
    }
    int inner_a = 0;
    for (std::size_t i = 1; i + 1 < comp.order.size(); ++i) inner_a += in_a[static_cast<std::size_t>(comp.order[i])];
    if (inner_a >= 3) {
      LongPathTrim trim;
      for (VertexId v : comp.order) {
        if (!outside_nb(v, in_b)) trim.removed.push_back(v);
      }
      trim.removed = make_vertex_set(trim.removed);
      for (VertexId v : trim.removed) (in_a[static_cast<std::size_t>(v)] ? trim.a_count : trim.b_count) += 1;
      cert.long_paths = set_union(cert.long_paths, trim.removed);
      cert.trims.push_back(std::move(trim));
    }
  }
  return cert;
}

/// True when 3 w(B_bar) <= 4 w(A_bar) implies 3 w(B) <= 4 w(A).
inline bool ratio_transfer_holds(int w_a, int w_b, int w_a_bar, int w_b_bar) {
  return !(3 * w_b_bar <= 4 * w_a_bar) || 3 * w_b <= 4 * w_a;
}

inline NormalizedInstance normalize(const AnalysisTuple& t) {
  NormalizationCertificate cert = deletable_set(t);
  const auto& g = t.g;
  const VertexSet deleted = cert.deleted();

  // N(V \ D, A) must stay inside A \ D
  for (std::size_t v = 0; v < g.size(); ++v) {
    if (contains(deleted, static_cast<VertexId>(v))) continue;
    for (VertexId y : g.neighbors(static_cast<VertexId>(v))) {
      if (contains(t.a, y) && contains(deleted, y)) {
        throw std::logic_error("normalize: a kept vertex sees a deleted vertex of A");
      }
    }
  }
  for (const auto& trim : cert.trims) {
    if (3 * trim.b_count > 4 * trim.a_count) throw std::logic_error("normalize: long path trim removes too much of B");
  }

  const VertexSet a1 = set_difference(t.a, deleted);
  const VertexSet b1 = set_difference(t.b, deleted);
  std::vector<char> in_a(g.size(), 0), in_b(g.size(), 0), alive(g.size(), 0), prime(g.size(), 0);
  for (VertexId v : a1) in_a[static_cast<std::size_t>(v)] = alive[static_cast<std::size_t>(v)] = 1;
  for (VertexId v : b1) in_b[static_cast<std::size_t>(v)] = alive[static_cast<std::size_t>(v)] = 1;
  for (std::size_t v = 0; v < g.size(); ++v) prime[v] = alive[v] && g.weight(static_cast<VertexId>(v)) == 1;

  std::vector<char> on_path(g.size(), 0);
  for (auto& comp : detail::prime_components(g, prime)) {
    if (comp.cycle) throw std::logic_error("normalize: cycle component survived deletion");
    if (comp.order.size() == 1) continue;
    PathRecord rec;
    if (comp.order.size() % 2 == 1) {
      // drop the endpoint with the smaller id
      if (comp.order.back() < comp.order.front()) std::reverse(comp.order.begin(), comp.order.end());
      rec.trimmed = comp.order.front();
      rec.trimmed_side = in_a[static_cast<std::size_t>(*rec.trimmed)] ? 'A' : 'B';
      comp.order.erase(comp.order.begin());
    }
    rec.vertices = comp.order;
    const VertexSet vs = make_vertex_set(comp.order);
    for (VertexId v : vs) {
      on_path[static_cast<std::size_t>(v)] = 1;
      for (VertexId y : g.neighbors(v)) {
        if (!alive[static_cast<std::size_t>(y)] || contains(vs, y)) continue;
        auto& slot = in_a[static_cast<std::size_t>(y)] ? rec.a_neighbor : rec.b_neighbor;
        if (slot && *slot != y) throw NotNiceError("path has two outside neighbors on one side");
        slot = y;
      }
      (in_a[static_cast<std::size_t>(v)] ? cert.path_a_total : cert.path_b_total) += 1;
    }
    if (!rec.a_neighbor && !rec.b_neighbor) throw std::logic_error("normalize: path without outside neighbor");
    rec.path_class = rec.a_neighbor && rec.b_neighbor ? 3 : rec.a_neighbor ? 1 : 2;
    cert.paths.push_back(std::move(rec));
  }

  std::vector<VertexId> original;
  std::vector<VertexId> new_id(g.size(), -1);
  for (std::size_t v = 0; v < g.size(); ++v) {
    if (alive[v] && !on_path[v]) {
      new_id[v] = static_cast<VertexId>(original.size());
      original.push_back(static_cast<VertexId>(v));
    }
  }
  std::vector<int> weights;
  std::vector<std::pair<VertexId, VertexId>> edges;
  for (VertexId v : original) {
    weights.push_back(g.weight(v));
    for (VertexId y : g.neighbors(v)) {
      if (y > v && new_id[static_cast<std::size_t>(y)] >= 0) {
        edges.emplace_back(new_id[static_cast<std::size_t>(v)], new_id[static_cast<std::size_t>(y)]);
      }
    }
  }
  for (const auto& p : cert.paths) {
    if (p.path_class != 3) continue;
    Bridge br{*p.a_neighbor, *p.b_neighbor, !g.adjacent(*p.a_neighbor, *p.b_neighbor)};
    if (br.added) edges.emplace_back(new_id[static_cast<std::size_t>(br.a)], new_id[static_cast<std::size_t>(br.b)]);
    cert.bridges.push_back(br);
  }

  NormalizedInstance out{ConflictGraph(std::move(weights), edges), {}, {}, std::move(original), std::move(cert)};
  for (std::size_t i = 0; i < out.original_ids.size(); ++i) {
    const auto v = static_cast<std::size_t>(out.original_ids[i]);
    (in_a[v] ? out.a : out.b).push_back(static_cast<VertexId>(i));
  }

  const int w_a1 = weight_of(g, a1), w_b1 = weight_of(g, b1);
  const int w_a_bar = weight_of(out.g, out.a), w_b_bar = weight_of(out.g, out.b);
  const auto& c = out.certificate;
  if (c.path_a_total != c.path_b_total || w_a1 - w_a_bar != c.path_b_total || w_b1 - w_b_bar != c.path_b_total) {
    throw std::logic_error("normalize: path bookkeeping does not balance");
  }
  if (!ratio_transfer_holds(weight_of(g, t.a), weight_of(g, t.b), w_a_bar, w_b_bar)) {
    throw std::logic_error("normalize: ratio transfer failed");
  }
  return out;
}

/// Empty when the instance is normalized; otherwise one line per finding.
inline std::vector<std::string> check_normalized(const NormalizedInstance& n) {
  std::vector<std::string> issues;
  const auto& g = n.g;
  if (intersects(n.a, n.b)) issues.push_back("A and B overlap");
  if (set_union(n.a, n.b) != g.all_vertices()) issues.push_back("A and B do not cover the vertex set");
  if (!is_independent(g, n.a)) issues.push_back("A is not independent");
  if (!is_independent(g, n.b)) issues.push_back("B is not independent");
  for (std::size_t v = 0; v < g.size(); ++v) {
    for (VertexId y : g.neighbors(static_cast<VertexId>(v))) {
      const auto x = static_cast<VertexId>(v);
      if (y > x && contains(n.a, x) == contains(n.a, y)) {
        issues.push_back("edge " + std::to_string(x) + "-" + std::to_string(y) + " does not cross the bipartition");
      }
    }
  }
  VertexSet primes;
  for (VertexId v : set_union(n.a, n.b)) {
    if (static_cast<std::size_t>(v) < g.size() && g.weight(v) == 1) primes.push_back(v);
  }
  if (!is_independent(g, primes)) issues.push_back("weight-1 vertices of A and B are not independent");
  for (const auto& c : assert_claw_structure(g).violations) {
    issues.push_back(std::string(c.kind == ClawViolation::Kind::four_claw ? "4-claw" : "3-claw at weight 1") +
                     " centered at " + std::to_string(c.center));
  }
  return issues;
}

/// A tuple from the conflict graph of a random instance: A and B are greedy
/// packings over two random orders of the sets.
inline AnalysisTuple random_analysis_tuple(std::size_t universe_n, std::size_t m, double p3, std::uint64_t seed) {
  const Instance inst = generate_random(universe_n, m, p3, seed);
  AnalysisTuple t{build_conflict_graph(inst), {}, {}};
  std::mt19937_64 rng(seed ^ 0x5bd1e995ULL);
  auto greedy = [&] {
    std::vector<VertexId> order(inst.size());
    for (std::size_t i = 0; i < order.size(); ++i) order[i] = static_cast<VertexId>(i);
    std::shuffle(order.begin(), order.end(), rng);
    VertexSet pick;
    for (VertexId v : order) {
      if (std::none_of(pick.begin(), pick.end(), [&](VertexId u) { return t.g.adjacent(u, v); })) insert_sorted(pick, v);
    }
    return pick;
  };
  t.a = greedy();
  t.b = greedy();
  return t;
}

inline nlohmann::json tuple_to_json(const ConflictGraph& g, const VertexSet& a, const VertexSet& b) {
  nlohmann::json edges = nlohmann::json::array();
  for (std::size_t v = 0; v < g.size(); ++v) {
    for (VertexId y : g.neighbors(static_cast<VertexId>(v))) {
      if (static_cast<std::size_t>(y) > v) edges.push_back({v, y});
    }
  }
  return {{"weights", g.weights()}, {"edges", edges}, {"A", a}, {"B", b}};
}

inline AnalysisTuple tuple_from_json(const nlohmann::json& j) {
  try {
    std::vector<std::pair<VertexId, VertexId>> edges;
    for (const auto& e : j.at("edges")) edges.emplace_back(e.at(0).get<VertexId>(), e.at(1).get<VertexId>());
    return {ConflictGraph(j.at("weights").get<std::vector<int>>(), edges),
            make_vertex_set(j.at("A").get<std::vector<VertexId>>()),
            make_vertex_set(j.at("B").get<std::vector<VertexId>>())};
  } catch (const nlohmann::json::exception& e) {
    throw std::invalid_argument(std::string("malformed tuple JSON: ") + e.what());
  }
}

inline nlohmann::json certificate_to_json(const NormalizationCertificate& c) {
  nlohmann::json paths = nlohmann::json::array();
  for (const auto& p : c.paths) {
    nlohmann::json row{{"vertices", p.vertices}, {"class", p.path_class}};
    if (p.trimmed) {
      row["trimmed"] = *p.trimmed;
      row["trimmed_side"] = std::string(1, p.trimmed_side);
    }
    if (p.a_neighbor) row["a_neighbor"] = *p.a_neighbor;
    if (p.b_neighbor) row["b_neighbor"] = *p.b_neighbor;
    paths.push_back(std::move(row));
  }
  nlohmann::json bridges = nlohmann::json::array();
  for (const auto& b : c.bridges) bridges.push_back({{"a", b.a}, {"b", b.b}, {"added", b.added}});
  return {{"deleted",
           {{"outside", c.outside}, {"shared", c.shared}, {"closed_parts", c.closed_parts}, {"long_paths", c.long_paths}}},
          {"paths", paths},
          {"bridges", bridges},
          {"path_a_total", c.path_a_total},
          {"path_b_total", c.path_b_total}};
}

inline nlohmann::json normalized_to_json(const NormalizedInstance& n) {
  nlohmann::json j = tuple_to_json(n.g, n.a, n.b);
  j["original_ids"] = n.original_ids;
  j["certificate"] = certificate_to_json(n.certificate);
  return j;
}

}  // namespace setpack
