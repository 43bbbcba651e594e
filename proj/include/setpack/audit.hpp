#pragma once

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdint>
#include <exception>
#include <iomanip>
#include <istream>
#include <numeric>
#include <ostream>
#include <random>
#include <sstream>
#include <stdexcept>
#include <string>
#include <thread>
#include <tuple>
#include <vector>

#include "json.hpp"
#include "setpack/hereditary.hpp"
#include "setpack/instance.hpp"
#include "setpack/local_search.hpp"
#include "setpack/oracle.hpp"
#include "setpack/solve.hpp"

namespace setpack {

struct AuditRow {
  std::string instance;
  int alg_weight = 0;
  int opt_weight = 0;
  std::int64_t ratio_num = 1;  // opt / alg, reduced
  std::int64_t ratio_den = 1;
  std::int64_t iterations = 0;
  std::int64_t binoculars = 0;
  double wall_ms = 0.0;
  bool hereditary = false;

  /// 3 opt <= 4 alg; only enforced on hereditary rows.
  bool within_four_thirds() const { return 3 * opt_weight <= 4 * alg_weight; }
  bool violates_guarantee() const { return hereditary && !within_four_thirds(); }

  friend bool operator==(const AuditRow&, const AuditRow&) = default;
};

inline std::pair<std::int64_t, std::int64_t> reduced_ratio(int opt, int alg) {
  if (alg == 0) return {opt == 0 ? 1 : opt, opt == 0 ? 1 : 0};
  const std::int64_t g = std::gcd(opt, alg);
  return {opt / g, alg / g};
}

inline std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

/// Hereditary closure of 5 to 10 random 3-sets over 9 to 15 elements.
inline HereditaryInstance random_hereditary_instance(std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  const auto n = std::uniform_int_distribution<std::size_t>(9, 15)(rng);
  const auto k = std::uniform_int_distribution<std::size_t>(5, 10)(rng);
  return hereditary_closure(generate_random(n, k, 1.0, rng()));
}

/// Embedded random 3DM instance with at most 12 triples.
inline Instance random_3dm_instance(std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  const auto q = std::uniform_int_distribution<std::size_t>(3, 5)(rng);
  const auto m = std::uniform_int_distribution<std::size_t>(q, 12)(rng);
  return embed_3dm(generate_random_3dm(q, m, rng()));
}

struct SuiteInstance {
  std::string id;
  Instance instance;
  bool hereditary = false;
};

inline const std::vector<std::string>& suite_names() {
  static const std::vector<std::string> names{"hereditary-small", "3dm-small", "random-small"};
  return names;
}

inline std::vector<SuiteInstance> make_suite(const std::string& name, std::size_t count, std::uint64_t master_seed) {
  std::vector<SuiteInstance> out;
  const int width = static_cast<int>(std::to_string(std::max<std::size_t>(count, 1) - 1).size());
  for (std::size_t i = 0; i < count; ++i) {
    const std::uint64_t seed = splitmix64(master_seed + i);
    std::ostringstream id;
    id << name << '-' << std::setw(width) << std::setfill('0') << i;
    if (name == "hereditary-small") {
      out.push_back({id.str(), random_hereditary_instance(seed).base(), true});
    } else if (name == "3dm-small") {
      out.push_back({id.str(), random_3dm_instance(seed), false});
    } else if (name == "random-small") {
      std::mt19937_64 rng(seed);
      const auto n = std::uniform_int_distribution<std::size_t>(8, 14)(rng);
      const auto m = std::uniform_int_distribution<std::size_t>(6, 14)(rng);
      out.push_back({id.str(), generate_random(n, m, 0.5, rng()), false});
    } else {
      throw std::invalid_argument("unknown suite '" + name + "'");
    }
  }
  return out;
}

/// Solves one instance and compares against the exact optimum. Hereditary
/// instances go through the hereditary solver.
inline AuditRow audit_instance(const std::string& id, const Instance& inst, const SearchParams& params, bool hereditary,
                               std::uint64_t oracle_budget = 10'000'000) {
  SearchParams p = params;
  if (hereditary) p.mode = Mode::hereditary;
  const SolveResult res =
      hereditary ? solve_hereditary(HereditaryInstance(inst), p.seed, p.resolved_tau(), p.improvement_search)
                 : solve(inst, p);
  const OracleResult opt = solve_exact(inst, oracle_budget);
  AuditRow row;
  row.instance = id;
  row.alg_weight = res.stats.final_weight;
  row.opt_weight = opt.optimum_weight;
  std::tie(row.ratio_num, row.ratio_den) = reduced_ratio(row.opt_weight, row.alg_weight);
  row.iterations = res.stats.iterations;
  row.binoculars = res.stats.binoculars_applied;
  row.wall_ms = std::round(res.stats.wall_ms * 1000.0) / 1000.0;
  row.hereditary = hereditary;
  if (row.alg_weight > row.opt_weight) throw std::logic_error("audit: solver beat the exact optimum on " + id);
  return row;
}

/// Audits every instance on `threads` workers. Each instance seeds its own
/// solve from the master seed, so rows do not depend on scheduling.
inline std::vector<AuditRow> run_suite(const std::vector<SuiteInstance>& suite, const SearchParams& params,
                                       unsigned threads = 1, std::uint64_t oracle_budget = 10'000'000) {
  std::vector<AuditRow> rows(suite.size());
  std::vector<std::exception_ptr> errors(suite.size());
  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (std::size_t i = next++; i < suite.size(); i = next++) {
      try {
        SearchParams p = params;
        p.seed = splitmix64(params.seed ^ splitmix64(i));
        rows[i] = audit_instance(suite[i].id, suite[i].instance, p, suite[i].hereditary, oracle_budget);
      } catch (...) {
        errors[i] = std::current_exception();
      }
    }
  };
  threads = std::max(1u, std::min<unsigned>(threads, static_cast<unsigned>(std::max<std::size_t>(suite.size(), 1))));
  std::vector<std::thread> pool;
  for (unsigned t = 1; t < threads; ++t) pool.emplace_back(worker);
  worker();
  for (auto& t : pool) t.join();
  for (const auto& e : errors) {
    if (e) std::rethrow_exception(e);
  }
  std::sort(rows.begin(), rows.end(), [](const AuditRow& a, const AuditRow& b) { return a.instance < b.instance; });
  return rows;
}

inline constexpr const char* audit_csv_header = "instance,alg_weight,opt_weight,ratio_num,ratio_den,iterations,binoculars,wall_ms";

inline void write_audit_csv(std::ostream& out, const std::vector<AuditRow>& rows) {
  out << audit_csv_header << '\n';
  for (const auto& r : rows) {
    out << r.instance << ',' << r.alg_weight << ',' << r.opt_weight << ',' << r.ratio_num << ',' << r.ratio_den << ','
        << r.iterations << ',' << r.binoculars << ',' << std::fixed << std::setprecision(3) << r.wall_ms
        << std::defaultfloat << '\n';
  }
}

/// Inverse of write_audit_csv. The hereditary flag is not a CSV column and
/// comes back false.
inline std::vector<AuditRow> read_audit_csv(std::istream& in) {
  std::string line;
  if (!std::getline(in, line) || line != audit_csv_header) throw std::invalid_argument("audit CSV: bad header");
  std::vector<AuditRow> rows;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    std::vector<std::string> cells;
    std::stringstream ss(line);
    for (std::string cell; std::getline(ss, cell, ',');) cells.push_back(cell);
    if (cells.size() != 8) throw std::invalid_argument("audit CSV: expected 8 columns in '" + line + "'");
    try {
      AuditRow r;
      r.instance = cells[0];
      r.alg_weight = std::stoi(cells[1]);
      r.opt_weight = std::stoi(cells[2]);
      r.ratio_num = std::stoll(cells[3]);
      r.ratio_den = std::stoll(cells[4]);
      r.iterations = std::stoll(cells[5]);
      r.binoculars = std::stoll(cells[6]);
      r.wall_ms = std::stod(cells[7]);
      rows.push_back(std::move(r));
    } catch (const std::logic_error&) {
      throw std::invalid_argument("audit CSV: bad number in '" + line + "'");
    }
  }
  return rows;
}

inline void to_json(nlohmann::json& j, const AuditRow& r) {
  j = nlohmann::json{{"instance", r.instance},     {"alg_weight", r.alg_weight}, {"opt_weight", r.opt_weight},
                     {"ratio_num", r.ratio_num},   {"ratio_den", r.ratio_den},   {"iterations", r.iterations},
                     {"binoculars", r.binoculars}, {"wall_ms", r.wall_ms},       {"hereditary", r.hereditary}};
}

inline void from_json(const nlohmann::json& j, AuditRow& r) {
  j.at("instance").get_to(r.instance);
  j.at("alg_weight").get_to(r.alg_weight);
  j.at("opt_weight").get_to(r.opt_weight);
  j.at("ratio_num").get_to(r.ratio_num);
  j.at("ratio_den").get_to(r.ratio_den);
  j.at("iterations").get_to(r.iterations);
  j.at("binoculars").get_to(r.binoculars);
  j.at("wall_ms").get_to(r.wall_ms);
  r.hereditary = j.value("hereditary", false);
}

}  // namespace setpack
