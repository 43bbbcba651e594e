#pragma once

#include <chrono>
#include <cstdint>
#include <functional>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "setpack/color_coding.hpp"
#include "setpack/conflict.hpp"
#include "setpack/instance.hpp"
#include "setpack/local_search.hpp"
#include "setpack/search_graph.hpp"

namespace setpack {

struct SolveResult {
  Packing packing;
  RunStats stats;
};

/// One applied exchange, reported to an optional observer.
struct StepEvent {
  enum class Kind { improvement, binocular } kind;
  const Packing& before;
  const VertexSet& added;
  const LabeledBinocular* binocular;  // set for Kind::binocular
};

using StepObserver = std::function<void(const StepEvent&)>;

/// 2 |V| (|V| + 2): weight can rise at most 2|V| times, with at most |V| + 1
/// weight-neutral steps around each rise.
inline std::int64_t iteration_bound(std::size_t vertex_count) {
  const auto n = static_cast<std::int64_t>(vertex_count);
  return 2 * n * (n + 2);
}

/// The local search loop. Each pass first looks for an improvement of at
/// most tau sets, then (in general mode) for an improving binocular on the
/// updated solution, and stops after a pass that applies neither.
inline SolveResult solve(const ConflictGraph& g, const SearchParams& params, const StepObserver& observe = {}) {
  const auto started = std::chrono::steady_clock::now();
  const int tau = params.resolved_tau();
  SolveResult out;
  auto& st = out.stats;
  Packing& a = out.packing;

  std::vector<Coloring> colorings;
  bool colorings_ready = false;
  const std::int64_t bound = iteration_bound(g.size());

  if (g.size() > 0) {
    bool found = true;
    while (found) {
      found = false;
      ++st.iterations;
      if (st.iterations > bound) {
        throw std::logic_error("solve: iteration bound " + std::to_string(bound) + " exceeded");
      }
      if (auto imp = find_improvement(g, a, tau, params.improvement_search)) {
        if (observe) observe({StepEvent::Kind::improvement, a, imp->added, nullptr});
        a = apply_improvement(g, a, imp->added);
        ++st.improvements_applied;
        found = true;
      }
      if (params.mode == Mode::general) {
        const SearchGraph sg = enumerate_search_edges(g, a, tau, params.pair_mode);
        if (!colorings_ready && !sg.edges.empty()) {
          colorings = colorings_for(g, params);
          colorings_ready = true;
        }
        if (auto b = search_improving_binocular(sg, g, a, tau, colorings)) {
          const VertexSet x = extract_improvement(*b, g, a);
          if (!is_local_improvement(g, a, x)) {
            throw std::logic_error("solve: improving binocular did not yield a local improvement");
          }
          if (observe) observe({StepEvent::Kind::binocular, a, x, &*b});
          a = apply_improvement(g, a, x);
          ++st.binoculars_applied;
          found = true;
        }
      }
    }
  }
  st.final_weight = weight_of(g, a);
  st.wall_ms = std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - started).count();
  return out;
}

inline SolveResult solve(const Instance& inst, const SearchParams& params, const StepObserver& observe = {}) {
  return solve(build_conflict_graph(inst), params, observe);
}

}  // namespace setpack
