#pragma once

#include <algorithm>
#include <cstdint>
#include <numeric>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "json.hpp"
#include "setpack/conflict.hpp"
#include "setpack/vertex_set.hpp"

namespace setpack {

/// The solution state: an independent vertex set of the conflict graph.
using Packing = VertexSet;

/// Exchange X for N(X, A).
struct Improvement {
  VertexSet added;
  VertexSet removed;
};

enum class Mode { general, hereditary };
enum class PairMode { canonical, full };
enum class ImprovementSearch { grown, naive };

/// Positive rational parsed from "3", "0.25" or "2/5".
struct Rational {
  std::int64_t num = 1;
  std::int64_t den = 1;

  static Rational parse(std::string_view text) {
    const std::string s(text);
    auto fail = [&]() -> Rational { throw std::invalid_argument("not a rational number: '" + s + "'"); };
    auto digits = [](std::string_view d) {
      return !d.empty() && d.size() < 18 &&
             std::all_of(d.begin(), d.end(), [](char c) { return c >= '0' && c <= '9'; });
    };
    Rational r;
    if (auto slash = s.find('/'); slash != std::string::npos) {
      const auto a = std::string_view(s).substr(0, slash);
      const auto b = std::string_view(s).substr(slash + 1);
      if (!digits(a) || !digits(b)) return fail();
      r.num = std::stoll(std::string(a));
      r.den = std::stoll(std::string(b));
    } else if (auto dot = s.find('.'); dot != std::string::npos) {
      const auto a = std::string_view(s).substr(0, dot);
      const auto b = std::string_view(s).substr(dot + 1);
      if ((!a.empty() && !digits(a)) || !digits(b) || b.size() > 12) return fail();
      r.den = 1;
      for (std::size_t i = 0; i < b.size(); ++i) r.den *= 10;
      r.num = (a.empty() ? 0 : std::stoll(std::string(a))) * r.den + std::stoll(std::string(b));
    } else {
      if (!digits(s)) return fail();
      r.num = std::stoll(s);
    }
    if (r.num <= 0 || r.den <= 0) throw std::invalid_argument("rational must be positive: '" + s + "'");
    const auto g = std::gcd(r.num, r.den);
    r.num /= g;
    r.den /= g;
    return r;
  }

  friend bool operator==(const Rational&, const Rational&) = default;
};

/// 4 * ceil(2 / epsilon).
inline int tau_for_epsilon(const Rational& eps) {
  const std::int64_t ceil_two_over = (2 * eps.den + eps.num - 1) / eps.num;
  if (ceil_two_over > 1'000'000) throw std::invalid_argument("epsilon too small");
  return static_cast<int>(4 * ceil_two_over);
}

struct SearchParams {
  std::optional<int> tau;
  std::optional<Rational> epsilon;
  Mode mode = Mode::general;
  std::uint64_t seed = 1;
  int coloring_reps = 0;  // 0 = derived from t
  PairMode pair_mode = PairMode::canonical;
  ImprovementSearch improvement_search = ImprovementSearch::grown;
  bool injective_colorings = false;
  std::optional<int> t_override;

  int resolved_tau() const {
    if (tau && epsilon) throw std::invalid_argument("give either tau or epsilon, not both");
    int t = 8;
    if (tau) {
      if (*tau < 1) throw std::invalid_argument("tau must be positive");
      t = *tau;
    } else if (epsilon) {
      t = tau_for_epsilon(*epsilon);
    } else if (mode == Mode::hereditary) {
      t = 10;
    }
    return mode == Mode::hereditary ? std::max(t, 10) : t;
  }
};

struct RunStats {
  std::int64_t iterations = 0;
  std::int64_t improvements_applied = 0;
  std::int64_t binoculars_applied = 0;
  int final_weight = 0;
  double wall_ms = 0.0;
};

inline void to_json(nlohmann::json& j, const RunStats& s) {
  j = nlohmann::json{{"iterations", s.iterations},
                     {"improvements_applied", s.improvements_applied},
                     {"binoculars_applied", s.binoculars_applied},
                     {"final_weight", s.final_weight},
                     {"wall_ms", s.wall_ms}};
}

inline void from_json(const nlohmann::json& j, RunStats& s) {
  j.at("iterations").get_to(s.iterations);
  j.at("improvements_applied").get_to(s.improvements_applied);
  j.at("binoculars_applied").get_to(s.binoculars_applied);
  j.at("final_weight").get_to(s.final_weight);
  j.at("wall_ms").get_to(s.wall_ms);
}

/// Lexicographic comparison of (weight, weight-2 count).
inline bool lex_greater(int w1, int c1, int w2, int c2) {
  return w1 > w2 || (w1 == w2 && c1 > c2);
}

inline bool is_local_improvement(const ConflictGraph& g, const Packing& a, const VertexSet& x) {
  if (x.empty() || !is_independent(g, x)) return false;
  const VertexSet n = neighborhood(g, x, a);
  return lex_greater(weight_of(g, x), count_double(g, x), weight_of(g, n), count_double(g, n));
}

namespace detail {

/// Exhaustive search over independent subsets of all of V, by size and then
/// lexicographically. Used as the reference for the grown search.
inline std::optional<VertexSet> naive_improvement(const ConflictGraph& g, const Packing& a, int tau) {
  const auto n = static_cast<VertexId>(g.size());
  VertexSet pick;
  std::optional<VertexSet> hit;
  for (int k = 1; k <= tau && k <= n; ++k) {
    auto dfs = [&](auto&& self, VertexId from) -> bool {
      if (static_cast<int>(pick.size()) == k) {
        if (is_local_improvement(g, a, pick)) {
          hit = pick;
          return true;
        }
        return false;
      }
      for (VertexId v = from; v < n; ++v) {
        if (std::any_of(pick.begin(), pick.end(), [&](VertexId p) { return g.adjacent(p, v); })) {
          continue;
        }
        pick.push_back(v);
        if (self(self, v + 1)) return true;
        pick.pop_back();
      }
      return false;
    };
    if (dfs(dfs, 0)) return hit;
  }
  return std::nullopt;
}

/// Connected-set enumeration over the graph linking vertices outside A whose
/// A-neighborhoods meet. A smallest improvement is always connected there and
/// never contains a vertex of A, because the (weight, weight-2 count) gain is
/// additive over parts with disjoint A-neighborhoods and including a vertex
/// of A changes nothing. So this returns exactly what the naive search does.
class GrownSearch {
 public:
  GrownSearch(const ConflictGraph& g, const Packing& a, int tau)
      : g_(g), tau_(tau), in_a_(g.size(), 0), a_nb_(g.size()), h_adj_(g.size()),
        a_count_(g.size(), 0), blocked_(g.size(), 0), covered_(g.size(), 0) {
    for (VertexId v : a) in_a_[static_cast<std::size_t>(v)] = 1;
    std::vector<std::vector<VertexId>> touching(g.size());
    for (std::size_t v = 0; v < g.size(); ++v) {
      if (in_a_[v]) continue;
      for (VertexId u : g.neighbors(static_cast<VertexId>(v))) {
        if (in_a_[static_cast<std::size_t>(u)]) {
          a_nb_[v].push_back(u);
          touching[static_cast<std::size_t>(u)].push_back(static_cast<VertexId>(v));
        }
      }
    }
    for (const auto& list : touching) {
      for (std::size_t i = 0; i < list.size(); ++i) {
        for (std::size_t j = i + 1; j < list.size(); ++j) {
          h_adj_[static_cast<std::size_t>(list[i])].push_back(list[j]);
          h_adj_[static_cast<std::size_t>(list[j])].push_back(list[i]);
        }
      }
    }
    for (auto& nb : h_adj_) nb = make_vertex_set(std::move(nb));
  }

  std::optional<VertexSet> run() {
    limit_ = tau_;
    for (std::size_t v = 0; v < g_.size(); ++v) {
      if (in_a_[v]) continue;
      root_ = static_cast<VertexId>(v);
      std::vector<VertexId> ext;
      for (VertexId u : h_adj_[v]) {
        if (u > root_) ext.push_back(u);
      }
      push(root_);
      extend(ext);
      pop(root_);
    }
    return best_;
  }

 private:
  void push(VertexId x) {
    sub_.push_back(x);
    for (VertexId a : a_nb_[static_cast<std::size_t>(x)]) {
      if (a_count_[static_cast<std::size_t>(a)]++ == 0) {
        n_weight_ += g_.weight(a);
        n_double_ += g_.weight(a) == 2;
      }
    }
    x_weight_ += g_.weight(x);
    x_double_ += g_.weight(x) == 2;
    ++blocked_[static_cast<std::size_t>(x)];
    for (VertexId y : g_.neighbors(x)) ++blocked_[static_cast<std::size_t>(y)];
    ++covered_[static_cast<std::size_t>(x)];
    for (VertexId y : h_adj_[static_cast<std::size_t>(x)]) ++covered_[static_cast<std::size_t>(y)];
  }

  void pop(VertexId x) {
    sub_.pop_back();
    for (VertexId a : a_nb_[static_cast<std::size_t>(x)]) {
      if (--a_count_[static_cast<std::size_t>(a)] == 0) {
        n_weight_ -= g_.weight(a);
        n_double_ -= g_.weight(a) == 2;
      }
    }
    x_weight_ -= g_.weight(x);
    x_double_ -= g_.weight(x) == 2;
    --blocked_[static_cast<std::size_t>(x)];
    for (VertexId y : g_.neighbors(x)) --blocked_[static_cast<std::size_t>(y)];
    --covered_[static_cast<std::size_t>(x)];
    for (VertexId y : h_adj_[static_cast<std::size_t>(x)]) --covered_[static_cast<std::size_t>(y)];
  }

  void consider() {
    if (!lex_greater(x_weight_, x_double_, n_weight_, n_double_)) return;
    VertexSet x = make_vertex_set(sub_);
    if (!best_ || x.size() < best_->size() || (x.size() == best_->size() && x < *best_)) {
      best_ = std::move(x);
      limit_ = static_cast<int>(best_->size());
    }
  }

  void extend(std::vector<VertexId> ext) {
    consider();
    if (static_cast<int>(sub_.size()) >= limit_) return;
    while (!ext.empty()) {
      const VertexId w = ext.back();
      ext.pop_back();
      if (blocked_[static_cast<std::size_t>(w)]) continue;
      std::vector<VertexId> next = ext;
      for (VertexId u : h_adj_[static_cast<std::size_t>(w)]) {
        if (u > root_ && !covered_[static_cast<std::size_t>(u)]) next.push_back(u);
      }
      push(w);
      extend(std::move(next));
      pop(w);
      if (static_cast<int>(sub_.size()) >= limit_) return;
    }
  }

  const ConflictGraph& g_;
  int tau_;
  int limit_ = 0;
  VertexId root_ = 0;
  std::vector<char> in_a_;
  std::vector<std::vector<VertexId>> a_nb_;
  std::vector<VertexSet> h_adj_;
  std::vector<int> a_count_;
  std::vector<int> blocked_;
  std::vector<int> covered_;
  std::vector<VertexId> sub_;
  int x_weight_ = 0, x_double_ = 0, n_weight_ = 0, n_double_ = 0;
  std::optional<VertexSet> best_;
};

}  // namespace detail

/// Smallest local improvement of size at most tau, ties broken by the sorted
/// vertex tuple. Both search strategies return the same answer.
inline std::optional<Improvement> find_improvement(const ConflictGraph& g, const Packing& a, int tau,
                                                   ImprovementSearch how = ImprovementSearch::grown) {
  if (tau < 1) throw std::invalid_argument("tau must be positive");
  std::optional<VertexSet> x = how == ImprovementSearch::naive
                                   ? detail::naive_improvement(g, a, tau)
                                   : detail::GrownSearch(g, a, tau).run();
  if (!x) return std::nullopt;
  Improvement imp{*x, neighborhood(g, *x, a)};
  return imp;
}

inline Packing apply_improvement(const ConflictGraph& g, const Packing& a, const VertexSet& x) {
  if (!is_local_improvement(g, a, x)) {
    throw std::logic_error("apply_improvement: set is not a local improvement");
  }
  Packing out = set_union(set_difference(a, neighborhood(g, x, a)), x);
  if (!is_independent(g, out)) throw std::logic_error("apply_improvement: result not independent");
  return out;
}

inline Packing apply_improvement(const ConflictGraph& g, const Packing& a, const Improvement& imp) {
  return apply_improvement(g, a, imp.added);
}

}  // namespace setpack
