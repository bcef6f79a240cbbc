#pragma once

#include <cstdint>
#include <optional>
#include <utility>

#include "detach/cascade.hpp"

namespace detach {

enum class Method { greedy, mincut, exhaustive };

inline const char* method_name(Method m) {
  switch (m) {
    case Method::greedy: return "greedy";
    case Method::mincut: return "mincut";
    case Method::exhaustive: return "exhaustive";
  }
  return "unknown";
}

// How a candidate collection is scored inside the optimizers.
struct Evaluator {
  enum class Kind { monte_carlo, exact };
  Kind kind = Kind::monte_carlo;
  std::uint64_t trials = 10000;                  // monte_carlo only
  std::size_t edge_cap = kDefaultExactEdgeCap;   // exact only

  static Evaluator monte_carlo(std::uint64_t trials) {
    return {Kind::monte_carlo, trials, kDefaultExactEdgeCap};
  }
  static Evaluator exact(std::size_t edge_cap = kDefaultExactEdgeCap) {
    return {Kind::exact, 0, edge_cap};
  }
};

struct OptimizationResult {
  DetachmentSet detachments;
  CircleCollection final_circles;
  std::vector<VertexId> orphaned;
  // epoi_trace[0] is the baseline; one more entry per committed step
  // (greedy), or one entry for the applied set (mincut, exhaustive).
  std::vector<EpoiEstimate> epoi_trace;
  Method method = Method::greedy;
  double wall_time_ms = 0;
  std::optional<std::pair<CircleId, CircleId>> terminals;  // mincut only
};

struct MinCutConfig {
  enum class TerminalSelection { largest_influence, largest_size, explicit_pair };
  enum class CapacityPolicy { unit, weighted };

  TerminalSelection terminal_selection = TerminalSelection::largest_influence;
  CapacityPolicy capacity_policy = CapacityPolicy::unit;
  std::optional<std::pair<CircleId, CircleId>> explicit_terminals;
  std::uint64_t terminal_trials = 1000;  // MC budget per circle when ranking by influence
};

// Steepest-descent detachment: m steps, each scoring every BBN link and
// committing the minimum. The incumbent resets every step; candidate scores
// within a step share RNG streams (common random numbers).
OptimizationResult greedy_detach(const CircleCollection& circles,
                                 const EdgeWeights& weights,
                                 const SourceDistribution& p, std::size_t m,
                                 const Evaluator& eval, RngSpec rng,
                                 int threads = 1);

// Exact minimum over all m-subsets of BBN links; ties resolve to the
// lexicographically smallest subset in candidate byte order.
OptimizationResult exhaustive_detach(const CircleCollection& circles,
                                     const EdgeWeights& weights,
                                     const SourceDistribution& p, std::size_t m,
                                     std::size_t combination_cap = 5000,
                                     std::size_t edge_cap = kDefaultExactEdgeCap);

// Detachment set from a minimum s-t cut between two terminal circles in the
// bridge-block network. The returned set always separates the terminals.
OptimizationResult min_cut_detach(const CircleCollection& circles,
                                  const EdgeWeights& weights,
                                  const SourceDistribution& p,
                                  const MinCutConfig& config,
                                  std::uint64_t mc_trials, RngSpec rng,
                                  int threads = 1);

struct MethodComparison {
  std::size_t mincut_size = 0;
  EpoiEstimate base;
  EpoiEstimate cut;
  EpoiEstimate greedy;
  std::pair<CircleId, CircleId> terminals;
  DetachmentSet cut_detachments;
  DetachmentSet greedy_detachments;
  CircleCollection cut_circles;
  CircleCollection greedy_circles;
  double ms_cut = 0;
  double ms_greedy = 0;
};

struct CompareConfig {
  std::uint64_t mc_trials = 10000;    // final estimates
  std::uint64_t greedy_trials = 500;  // per-candidate budget inside greedy
  MinCutConfig mincut{};
};

// Min-cut first, then greedy with m equal to the cut size; both finals are
// re-estimated at the full mc_trials budget.
MethodComparison compare_methods(const CircleCollection& circles,
                                 const EdgeWeights& weights,
                                 const SourceDistribution& p,
                                 const CompareConfig& config, RngSpec rng,
                                 int threads = 1);

}  // namespace detach
