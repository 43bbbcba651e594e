#pragma once

#include <algorithm>
#include <array>
#include <cstdint>
#include <istream>
#include <map>
#include <ostream>
#include <random>
#include <set>
#include <sstream>
#include <stdexcept>
#include <string>
#include <string_view>
#include <unordered_map>
#include <utility>
#include <vector>

#include "json.hpp"
#include "setpack/vertex_set.hpp"

namespace setpack {

/// Raised for malformed input and for instances that violate the set-system
/// invariants (cardinality, duplicates, element range).
class InstanceError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// A set of cardinality 2 or 3. Its weight is |elements| - 1 and is never
/// stored separately.
struct PackSet {
  std::vector<ElementId> elements;

  int weight() const { return static_cast<int>(elements.size()) - 1; }
  friend bool operator==(const PackSet&, const PackSet&) = default;
};

/// A validated collection of 2- and 3-element sets over a dense universe
/// 0..universe_size-1. Each element keeps the token it was parsed from.
class Instance {
 public:
  Instance() = default;

  Instance(std::vector<PackSet> sets, std::size_t universe_size,
           std::vector<std::string> labels = {})
      : sets_(std::move(sets)), universe_size_(universe_size), labels_(std::move(labels)) {
    if (labels_.empty()) {
      labels_.reserve(universe_size_);
      for (std::size_t e = 0; e < universe_size_; ++e) labels_.push_back(std::to_string(e));
    }
    validate();
  }

  const std::vector<PackSet>& sets() const { return sets_; }
  const PackSet& set(VertexId v) const { return sets_.at(static_cast<std::size_t>(v)); }
  int weight(VertexId v) const { return set(v).weight(); }
  std::size_t size() const { return sets_.size(); }
  bool empty() const { return sets_.empty(); }
  std::size_t universe_size() const { return universe_size_; }
  const std::string& label(ElementId e) const { return labels_.at(static_cast<std::size_t>(e)); }
  const std::vector<std::string>& labels() const { return labels_; }

  int total_weight() const {
    int w = 0;
    for (const auto& s : sets_) w += s.weight();
    return w;
  }

  friend bool operator==(const Instance&, const Instance&) = default;

 private:
  void validate() const {
    if (labels_.size() != universe_size_) {
      throw InstanceError("label count does not match universe size");
    }
    std::set<std::vector<ElementId>> seen;
    for (std::size_t i = 0; i < sets_.size(); ++i) {
      const auto& elems = sets_[i].elements;
      if (elems.size() < 2 || elems.size() > 3) {
        throw InstanceError("set " + std::to_string(i) + " has cardinality " +
                            std::to_string(elems.size()) + ", expected 2 or 3");
      }
      auto key = elems;
      std::sort(key.begin(), key.end());
      if (std::adjacent_find(key.begin(), key.end()) != key.end()) {
        throw InstanceError("set " + std::to_string(i) + " repeats an element");
      }
      for (ElementId e : key) {
        if (e < 0 || static_cast<std::size_t>(e) >= universe_size_) {
          throw InstanceError("set " + std::to_string(i) + " references element " +
                              std::to_string(e) + " outside the universe");
        }
      }
      if (!seen.insert(std::move(key)).second) {
        throw InstanceError("set " + std::to_string(i) + " duplicates an earlier set");
      }
    }
  }

  std::vector<PackSet> sets_;
  std::size_t universe_size_ = 0;
  std::vector<std::string> labels_;
};

/// Interns element tokens in first-appearance order.
class InstanceBuilder {
 public:
  void add_set(const std::vector<std::string>& tokens) {
    PackSet s;
    s.elements.reserve(tokens.size());
    for (const auto& t : tokens) s.elements.push_back(intern(t));
    sets_.push_back(std::move(s));
  }

  Instance build() && {
    const std::size_t n = labels_.size();
    return Instance(std::move(sets_), n, std::move(labels_));
  }

 private:
  ElementId intern(const std::string& token) {
    auto [it, inserted] = ids_.try_emplace(token, static_cast<ElementId>(labels_.size()));
    if (inserted) labels_.push_back(token);
    return it->second;
  }

  std::vector<PackSet> sets_;
  std::vector<std::string> labels_;
  std::unordered_map<std::string, ElementId> ids_;
};

enum class Format { text, json };

inline Format parse_format(std::string_view name) {
  if (name == "text" || name == "txt") return Format::text;
  if (name == "json") return Format::json;
  throw InstanceError("unknown instance format '" + std::string(name) + "'");
}

namespace detail {

inline bool is_integer_token(const std::string& s) {
  if (s.empty()) return false;
  std::size_t i = s[0] == '-' ? 1 : 0;
  if (i == s.size()) return false;
  if (s[i] == '0' && s.size() > i + 1) return false;
  for (; i < s.size(); ++i) {
    if (s[i] < '0' || s[i] > '9') return false;
  }
  return s.size() < 19;
}

inline Instance parse_text(std::istream& in) {
  InstanceBuilder builder;
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    const auto first = line.find_first_not_of(" \t\r");
    if (first == std::string::npos || line[first] == '#') continue;
    std::istringstream fields(line);
    std::vector<std::string> tokens;
    for (std::string tok; fields >> tok;) tokens.push_back(tok);
    if (tokens.size() < 2 || tokens.size() > 3) {
      throw InstanceError("line " + std::to_string(lineno) + ": expected 2 or 3 elements, got " +
                          std::to_string(tokens.size()));
    }
    builder.add_set(tokens);
  }
  return std::move(builder).build();
}

inline Instance parse_json(std::istream& in) {
  nlohmann::json doc;
  try {
    in >> doc;
  } catch (const nlohmann::json::exception& e) {
    throw InstanceError(std::string("malformed JSON: ") + e.what());
  }
  if (!doc.is_object() || !doc.contains("sets") || !doc["sets"].is_array()) {
    throw InstanceError("JSON instance must be an object with a \"sets\" array");
  }
  InstanceBuilder builder;
  std::size_t index = 0;
  for (const auto& set : doc["sets"]) {
    if (!set.is_array()) {
      throw InstanceError("sets[" + std::to_string(index) + "] is not an array");
    }
    std::vector<std::string> tokens;
    for (const auto& tok : set) {
      if (tok.is_string()) {
        tokens.push_back(tok.get<std::string>());
      } else if (tok.is_number_integer()) {
        tokens.push_back(std::to_string(tok.get<std::int64_t>()));
      } else {
        throw InstanceError("sets[" + std::to_string(index) +
                            "] contains a token that is neither string nor integer");
      }
    }
    if (tokens.size() < 2 || tokens.size() > 3) {
      throw InstanceError("sets[" + std::to_string(index) + "] has cardinality " +
                          std::to_string(tokens.size()) + ", expected 2 or 3");
    }
    builder.add_set(tokens);
    ++index;
  }
  return std::move(builder).build();
}

}  // namespace detail

inline Instance parse_instance(std::istream& in, Format format) {
  return format == Format::json ? detail::parse_json(in) : detail::parse_text(in);
}

inline Instance parse_instance(std::string_view input, Format format) {
  std::istringstream in{std::string(input)};
  return parse_instance(in, format);
}

inline void write_instance(std::ostream& out, const Instance& inst, Format format) {
  if (format == Format::text) {
    for (const auto& s : inst.sets()) {
      for (std::size_t i = 0; i < s.elements.size(); ++i) {
        const auto& tok = inst.label(s.elements[i]);
        if (tok.empty() || tok[0] == '#' ||
            tok.find_first_of(" \t\r\n") != std::string::npos) {
          throw InstanceError("token '" + tok + "' cannot be written in text format");
        }
        out << (i ? " " : "") << tok;
      }
      out << '\n';
    }
    return;
  }
  nlohmann::json sets = nlohmann::json::array();
  for (const auto& s : inst.sets()) {
    nlohmann::json row = nlohmann::json::array();
    for (ElementId e : s.elements) {
      const auto& tok = inst.label(e);
      if (detail::is_integer_token(tok)) {
        row.push_back(std::stoll(tok));
      } else {
        row.push_back(tok);
      }
    }
    sets.push_back(std::move(row));
  }
  out << nlohmann::json{{"sets", std::move(sets)}}.dump() << '\n';
}

inline std::string serialize_instance(const Instance& inst, Format format) {
  std::ostringstream out;
  write_instance(out, inst, format);
  return out.str();
}

namespace detail {

inline std::uint64_t binomial(std::uint64_t n, std::uint64_t k) {
  if (k > n) return 0;
  std::uint64_t r = 1;
  for (std::uint64_t i = 1; i <= k; ++i) r = r * (n - k + i) / i;
  return r;
}

}  // namespace detail

/// Draws m distinct sets over elements 0..universe_n-1; each is a 3-set with
/// probability p3, otherwise a 2-set. Pure function of its arguments.
inline Instance generate_random(std::size_t universe_n, std::size_t m, double p3,
                                std::uint64_t seed) {
  if (universe_n < 3) throw std::invalid_argument("generate_random: universe_n must be >= 3");
  if (m < 1) throw std::invalid_argument("generate_random: m must be >= 1");
  if (!(p3 >= 0.0 && p3 <= 1.0)) throw std::invalid_argument("generate_random: p3 not in [0,1]");
  const std::uint64_t pairs = p3 < 1.0 ? detail::binomial(universe_n, 2) : 0;
  const std::uint64_t triples = p3 > 0.0 ? detail::binomial(universe_n, 3) : 0;
  if (m > pairs + triples) {
    throw std::invalid_argument("generate_random: m exceeds the number of distinct sets (" +
                                std::to_string(pairs + triples) + ")");
  }
  std::mt19937_64 rng(seed);
  std::bernoulli_distribution three(p3);
  std::vector<int> pool(universe_n);
  for (std::size_t i = 0; i < universe_n; ++i) pool[i] = static_cast<int>(i);

  std::set<std::vector<int>> seen;
  std::uint64_t used_pairs = 0;
  std::uint64_t used_triples = 0;
  InstanceBuilder builder;
  while (seen.size() < m) {
    std::size_t k = three(rng) ? 3 : 2;
    if (k == 3 && used_triples == triples) k = 2;
    if (k == 2 && used_pairs == pairs) k = 3;
    // partial Fisher-Yates: elements drawn uniformly without replacement
    for (std::size_t i = 0; i < k; ++i) {
      std::uniform_int_distribution<std::size_t> pick(i, universe_n - 1);
      std::swap(pool[i], pool[pick(rng)]);
    }
    std::vector<int> draw(pool.begin(), pool.begin() + static_cast<std::ptrdiff_t>(k));
    std::vector<int> key = draw;
    std::sort(key.begin(), key.end());
    if (!seen.insert(key).second) continue;
    (k == 3 ? used_triples : used_pairs) += 1;
    std::vector<std::string> tokens;
    for (int e : draw) tokens.push_back(std::to_string(e));
    builder.add_set(tokens);
  }
  return std::move(builder).build();
}

using Triple = std::array<std::string, 3>;

/// Interprets a 3-Dimensional Matching instance (triples over disjoint parts
/// X, Y, Z) as 3-sets of weight 2.
inline Instance embed_3dm(const std::vector<Triple>& triples) {
  std::unordered_map<std::string, int> part_of;
  InstanceBuilder builder;
  std::set<std::vector<std::string>> seen;
  for (std::size_t i = 0; i < triples.size(); ++i) {
    const auto& t = triples[i];
    for (int p = 0; p < 3; ++p) {
      auto [it, inserted] = part_of.try_emplace(t[static_cast<std::size_t>(p)], p);
      if (!inserted && it->second != p) {
        throw InstanceError("triple " + std::to_string(i) + ": token '" + it->first +
                            "' appears in two different parts");
      }
    }
    if (t[0] == t[1] || t[0] == t[2] || t[1] == t[2]) {
      throw InstanceError("triple " + std::to_string(i) + " repeats an element");
    }
    builder.add_set({t[0], t[1], t[2]});
  }
  return std::move(builder).build();
}

/// Random 3DM instance: m distinct triples over parts of size q each.
inline std::vector<Triple> generate_random_3dm(std::size_t q, std::size_t m, std::uint64_t seed) {
  if (q == 0) throw std::invalid_argument("generate_random_3dm: q must be positive");
  if (m > q * q * q) throw std::invalid_argument("generate_random_3dm: m exceeds q^3");
  std::mt19937_64 rng(seed);
  std::uniform_int_distribution<std::size_t> pick(0, q - 1);
  std::set<std::array<std::size_t, 3>> seen;
  std::vector<Triple> out;
  while (out.size() < m) {
    std::array<std::size_t, 3> t{pick(rng), pick(rng), pick(rng)};
    if (!seen.insert(t).second) continue;
    out.push_back({"x" + std::to_string(t[0]), "y" + std::to_string(t[1]),
                   "z" + std::to_string(t[2])});
  }
  return out;
}

}  // namespace setpack
