// setpack command-line driver.

#include <cstdlib>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <stdexcept>
#include <string>
#include <thread>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"
#include "setpack/setpack.hpp"

namespace {

using nlohmann::json;
using namespace setpack;

struct RunConfig {
  std::string input;
  std::string format = "text";
  std::string output = "json";
  std::optional<int> tau;
  std::optional<std::string> epsilon;
  std::uint64_t seed = 1;
  int colorings = 0;
  std::optional<int> t_override;
  bool injective = false;
  std::string pair_mode = "canonical";
  bool naive_improve = false;
  bool close = false;
  bool hereditary = false;
  bool force = false;
  std::size_t max_sets = 60;
  std::uint64_t oracle_budget = 10'000'000;
  // gen
  std::string kind = "random";
  std::size_t n = 10, m = 10, q = 4;
  double p3 = 0.5;
  // bench
  std::string suite = "hereditary-small";
  std::size_t count = 50;
  unsigned threads = 0;
};

Instance load(const RunConfig& cfg) {
  const Format f = parse_format(cfg.format);
  if (cfg.input == "-") return parse_instance(std::cin, f);
  std::ifstream in(cfg.input);
  if (!in) throw std::runtime_error("cannot open '" + cfg.input + "'");
  return parse_instance(in, f);
}

SearchParams params_of(const RunConfig& cfg, Mode mode) {
  SearchParams p;
  p.mode = mode;
  p.tau = cfg.tau;
  if (cfg.epsilon) p.epsilon = Rational::parse(*cfg.epsilon);
  p.seed = cfg.seed;
  p.coloring_reps = cfg.colorings;
  p.t_override = cfg.t_override;
  p.injective_colorings = cfg.injective;
  if (cfg.pair_mode == "full") {
    p.pair_mode = PairMode::full;
  } else if (cfg.pair_mode != "canonical") {
    throw std::invalid_argument("pair mode must be canonical or full");
  }
  if (cfg.naive_improve) p.improvement_search = ImprovementSearch::naive;
  p.resolved_tau();  // surfaces config conflicts before any work
  return p;
}

json packing_json(const Instance& inst, const SolveResult& res, int tau) {
  json labels = json::array();
  for (VertexId v : res.packing) {
    json elems = json::array();
    for (ElementId e : inst.set(v).elements) elems.push_back(inst.label(e));
    labels.push_back(elems);
  }
  return {{"tau", tau}, {"packing", res.packing}, {"sets", labels}, {"weight", res.stats.final_weight},
          {"stats", res.stats}};
}

void emit_rows(const RunConfig& cfg, const std::vector<AuditRow>& rows) {
  if (cfg.output == "csv") {
    write_audit_csv(std::cout, rows);
  } else {
    std::cout << json(rows).dump(2) << '\n';
  }
}

int guarantee_exit(const std::vector<AuditRow>& rows) {
  int bad = 0;
  for (const auto& r : rows) {
    if (r.violates_guarantee()) {
      std::cerr << "guarantee violated on " << r.instance << ": opt " << r.opt_weight << ", alg " << r.alg_weight
                << '\n';
      ++bad;
    }
  }
  return bad ? 1 : 0;
}

int run_solve(const RunConfig& cfg) {
  const Instance inst = load(cfg);
  const SearchParams p = params_of(cfg, Mode::general);
  std::cout << packing_json(inst, solve(inst, p), p.resolved_tau()).dump(2) << '\n';
  return 0;
}

int run_solve_hereditary(const RunConfig& cfg) {
  Instance inst = load(cfg);
  const SearchParams p = params_of(cfg, Mode::hereditary);
  HereditaryInstance h = cfg.close ? hereditary_closure(inst) : HereditaryInstance(std::move(inst));
  const auto res = solve_hereditary(h, p.seed, p.resolved_tau(), p.improvement_search);
  std::cout << packing_json(h.base(), res, p.resolved_tau()).dump(2) << '\n';
  return 0;
}

int run_oracle(const RunConfig& cfg) {
  const Instance inst = load(cfg);
  const auto res = solve_exact(inst, cfg.oracle_budget);
  std::cout << json{{"optimum_weight", res.optimum_weight},
                    {"witness", res.witness},
                    {"nodes_explored", res.nodes_explored}}
                   .dump(2)
            << '\n';
  return 0;
}

int run_audit(const RunConfig& cfg) {
  Instance inst = load(cfg);
  if (inst.size() > cfg.max_sets && !cfg.force) {
    throw std::invalid_argument("instance has " + std::to_string(inst.size()) +
                                " sets; the oracle limit is " + std::to_string(cfg.max_sets) + " (use --force)");
  }
  bool hereditary = cfg.hereditary;
  if (hereditary && cfg.close) inst = hereditary_closure(inst).base();
  const SearchParams p = params_of(cfg, hereditary ? Mode::hereditary : Mode::general);
  const std::vector<AuditRow> rows{audit_instance(cfg.input, inst, p, hereditary, cfg.oracle_budget)};
  emit_rows(cfg, rows);
  return guarantee_exit(rows);
}

int run_gen(const RunConfig& cfg) {
  Instance inst = [&] {
    if (cfg.kind == "random") return generate_random(cfg.n, cfg.m, cfg.p3, cfg.seed);
    if (cfg.kind == "3dm") return embed_3dm(generate_random_3dm(cfg.q, cfg.m, cfg.seed));
    if (cfg.kind == "hereditary") return hereditary_closure(generate_random(cfg.n, cfg.m, 1.0, cfg.seed)).base();
    throw std::invalid_argument("unknown generator '" + cfg.kind + "'");
  }();
  write_instance(std::cout, inst, parse_format(cfg.format));
  return 0;
}

int run_normalize(const RunConfig& cfg) {
  json j;
  if (cfg.input == "-") {
    std::cin >> j;
  } else {
    std::ifstream in(cfg.input);
    if (!in) throw std::runtime_error("cannot open '" + cfg.input + "'");
    in >> j;
  }
  const auto n = normalize(tuple_from_json(j));
  json out = normalized_to_json(n);
  out["issues"] = check_normalized(n);
  std::cout << out.dump(2) << '\n';
  return out["issues"].empty() ? 0 : 3;
}

int run_bench(const RunConfig& cfg) {
  const auto suite = make_suite(cfg.suite, cfg.count, cfg.seed);
  const Mode mode = cfg.suite == "hereditary-small" ? Mode::hereditary : Mode::general;
  const unsigned threads = cfg.threads ? cfg.threads : std::max(1u, std::thread::hardware_concurrency());
  const auto rows = run_suite(suite, params_of(cfg, mode), threads, cfg.oracle_budget);
  emit_rows(cfg, rows);
  return guarantee_exit(rows);
}

void add_search_flags(CLI::App* cmd, RunConfig& cfg) {
  cmd->add_option("--tau", cfg.tau, "largest improvement size");
  cmd->add_option("--epsilon", cfg.epsilon, "accuracy; tau = 4*ceil(2/epsilon)");
  cmd->add_option("--colorings", cfg.colorings, "random colorings per binocular search (0 = automatic)");
  cmd->add_option("--t-override", cfg.t_override, "number of colors");
  cmd->add_flag("--injective-colorings", cfg.injective, "use one coloring that is injective on the universe");
  cmd->add_option("--pair-mode", cfg.pair_mode, "canonical or full")->check(CLI::IsMember({"canonical", "full"}));
  cmd->add_flag("--naive-improve", cfg.naive_improve, "enumerate improvements without pruning");
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Local search for 2-3 set packing"};
  app.require_subcommand(1);
  RunConfig cfg;
  app.add_option("--seed", cfg.seed, "master seed (SETPACK_SEED overrides)");
  app.add_option("--format", cfg.format, "instance format")->check(CLI::IsMember({"text", "json"}));

  auto input = [&](CLI::App* cmd) { cmd->add_option("file", cfg.input, "instance file, - for stdin")->required(); };

  auto* solve_cmd = app.add_subcommand("solve", "run the local search");
  input(solve_cmd);
  add_search_flags(solve_cmd, cfg);

  auto* her_cmd = app.add_subcommand("solve-hereditary", "run the hereditary local search");
  input(her_cmd);
  her_cmd->add_option("--tau", cfg.tau, "largest improvement size (at least 10)");
  her_cmd->add_flag("--close", cfg.close, "add missing 2-subsets first");
  her_cmd->add_flag("--naive-improve", cfg.naive_improve, "enumerate improvements without pruning");

  auto* oracle_cmd = app.add_subcommand("oracle", "exact optimum by branch and bound");
  input(oracle_cmd);
  oracle_cmd->add_option("--budget", cfg.oracle_budget, "node budget");

  auto* audit_cmd = app.add_subcommand("audit", "compare the local search with the exact optimum");
  input(audit_cmd);
  add_search_flags(audit_cmd, cfg);
  audit_cmd->add_flag("--hereditary", cfg.hereditary, "use the hereditary solver");
  audit_cmd->add_flag("--close", cfg.close, "with --hereditary, add missing 2-subsets first");
  audit_cmd->add_option("--max-sets", cfg.max_sets, "refuse larger instances");
  audit_cmd->add_flag("--force", cfg.force, "ignore --max-sets");
  audit_cmd->add_option("--budget", cfg.oracle_budget, "oracle node budget");
  audit_cmd->add_option("--output", cfg.output, "json or csv")->check(CLI::IsMember({"json", "csv"}));

  auto* gen_cmd = app.add_subcommand("gen", "write a random instance");
  gen_cmd->add_option("kind", cfg.kind, "random, 3dm or hereditary")
      ->check(CLI::IsMember({"random", "3dm", "hereditary"}));
  gen_cmd->add_option("-n", cfg.n, "universe size");
  gen_cmd->add_option("-m", cfg.m, "number of sets or triples");
  gen_cmd->add_option("-q", cfg.q, "3dm part size");
  gen_cmd->add_option("--p3", cfg.p3, "probability of a 3-set");

  auto* norm_cmd = app.add_subcommand("normalize", "normalize an analysis tuple (JSON)");
  norm_cmd->add_option("file", cfg.input, "tuple file, - for stdin")->required();

  auto* bench_cmd = app.add_subcommand("bench", "audit a generated suite");
  add_search_flags(bench_cmd, cfg);
  bench_cmd->add_option("--suite", cfg.suite, "suite name")->check(CLI::IsMember(suite_names()));
  bench_cmd->add_option("--count", cfg.count, "instances in the suite");
  bench_cmd->add_option("--threads", cfg.threads, "worker threads (0 = all cores)");
  bench_cmd->add_option("--budget", cfg.oracle_budget, "oracle node budget");
  bench_cmd->add_option("--output", cfg.output, "json or csv")->check(CLI::IsMember({"json", "csv"}));

  CLI11_PARSE(app, argc, argv);

  try {
    if (const char* env = std::getenv("SETPACK_SEED")) {
      try {
        cfg.seed = std::stoull(env);
      } catch (const std::logic_error&) {
        throw std::invalid_argument(std::string("SETPACK_SEED is not an integer: ") + env);
      }
    }
    if (solve_cmd->parsed()) return run_solve(cfg);
    if (her_cmd->parsed()) return run_solve_hereditary(cfg);
    if (oracle_cmd->parsed()) return run_oracle(cfg);
    if (audit_cmd->parsed()) return run_audit(cfg);
    if (gen_cmd->parsed()) return run_gen(cfg);
    if (norm_cmd->parsed()) return run_normalize(cfg);
    if (bench_cmd->parsed()) return run_bench(cfg);
  } catch (const std::logic_error& e) {
    // invalid_argument derives from logic_error but is a user error
    if (dynamic_cast<const std::invalid_argument*>(&e)) {
      std::cerr << "error: " << e.what() << '\n';
      return 2;
    }
    std::cerr << "internal error: " << e.what() << '\n';
    return 3;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 2;
  }
  return 0;
}
