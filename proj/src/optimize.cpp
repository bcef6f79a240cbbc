#include "detach/optimize.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <limits>
#include <sstream>

namespace detach {

namespace {

using Clock = std::chrono::steady_clock;

double ms_since(Clock::time_point start) {
  return std::chrono::duration<double, std::milli>(Clock::now() - start).count();
}

EpoiEstimate evaluate(const CircleCollection& circles, const EdgeWeights& weights,
                      const SourceDistribution& p, const Evaluator& eval,
                      RngSpec rng, int threads) {
  if (eval.kind == Evaluator::Kind::exact)
    return exact_epoi(circles, weights, p, eval.edge_cap);
  return estimate_epoi(circles, weights, p, eval.trials, rng, threads);
}

// Dinic on a small graph; capacities are doubles, residuals below 1e-12 are
// treated as empty.
class MaxFlow {
 public:
  explicit MaxFlow(int n) : graph_(n) {}

  void add_pair(int a, int b, double cap_ab, double cap_ba) {
    graph_[a].push_back({b, cap_ab, static_cast<int>(graph_[b].size())});
    graph_[b].push_back({a, cap_ba, static_cast<int>(graph_[a].size()) - 1});
  }

  double run(int s, int t) {
    double total = 0;
    while (bfs(s, t)) {
      iter_.assign(graph_.size(), 0);
      for (;;) {
        const double pushed = dfs(s, t, std::numeric_limits<double>::max());
        if (pushed <= kEps) break;
        total += pushed;
      }
    }
    return total;
  }

  // Residual reachability from s: the canonical minimal source side.
  std::vector<char> source_side(int s) const {
    std::vector<char> seen(graph_.size(), 0);
    std::vector<int> stack{s};
    seen[s] = 1;
    while (!stack.empty()) {
      const int u = stack.back();
      stack.pop_back();
      for (const auto& arc : graph_[u]) {
        if (arc.cap > kEps && !seen[arc.to]) {
          seen[arc.to] = 1;
          stack.push_back(arc.to);
        }
      }
    }
    return seen;
  }

 private:
  static constexpr double kEps = 1e-12;

  struct Arc {
    int to;
    double cap;
    int rev;
  };

  bool bfs(int s, int t) {
    level_.assign(graph_.size(), -1);
    std::vector<int> queue{s};
    level_[s] = 0;
    for (std::size_t head = 0; head < queue.size(); ++head) {
      const int u = queue[head];
      for (const auto& arc : graph_[u]) {
        if (arc.cap > kEps && level_[arc.to] < 0) {
          level_[arc.to] = level_[u] + 1;
          queue.push_back(arc.to);
        }
      }
    }
    return level_[t] >= 0;
  }

  double dfs(int u, int t, double limit) {
    if (u == t) return limit;
    for (int& i = iter_[u]; i < static_cast<int>(graph_[u].size()); ++i) {
      Arc& arc = graph_[u][i];
      if (arc.cap <= kEps || level_[arc.to] != level_[u] + 1) continue;
      const double pushed = dfs(arc.to, t, std::min(limit, arc.cap));
      if (pushed > kEps) {
        arc.cap -= pushed;
        graph_[arc.to][arc.rev].cap += pushed;
        return pushed;
      }
    }
    return 0;
  }

  std::vector<std::vector<Arc>> graph_;
  std::vector<int> level_;
  std::vector<int> iter_;
};

double link_capacity(const CircleCollection& circles, const EdgeWeights& weights,
                     const CircleId& circle, const VertexId& bridge,
                     MinCutConfig::CapacityPolicy policy) {
  if (policy == MinCutConfig::CapacityPolicy::unit) return 1.0;
  // mean outgoing weight from the bridge into the circle, scaled by circle size
  const auto& members = circles.circles.at(circle);
  double sum = 0;
  std::size_t count = 0;
  for (const auto& u : members) {
    if (u == bridge) continue;
    if (auto w = weights.get(bridge, u)) sum += *w;
    ++count;
  }
  if (count == 0) return 0.0;
  return sum / static_cast<double>(count) * static_cast<double>(members.size());
}

std::pair<CircleId, CircleId> select_terminals(const CircleCollection& circles,
                                               const EdgeWeights& weights,
                                               const BridgeBlockNetwork& bbn,
                                               const BbnComponents& comps,
                                               const MinCutConfig& config,
                                               RngSpec rng, int threads) {
  using TS = MinCutConfig::TerminalSelection;
  if (config.terminal_selection == TS::explicit_pair) {
    if (!config.explicit_terminals)
      throw std::invalid_argument("explicit terminal selection without terminals");
    const auto& [a, b] = *config.explicit_terminals;
    if (!bbn.blocks.count(a) || !bbn.blocks.count(b))
      throw DomainError(Errc::disconnected_terminals,
                        "terminal is not a circle in the collection");
    if (a == b)
      throw std::invalid_argument("terminals must be two distinct circles");
    return {a, b};
  }

  if (config.terminal_selection == TS::largest_size) {
    std::vector<CircleId> order(bbn.blocks.begin(), bbn.blocks.end());
    std::stable_sort(order.begin(), order.end(),
                     [&](const CircleId& a, const CircleId& b) {
                       return circles.circles.at(a).size() >
                              circles.circles.at(b).size();
                     });
    if (order.size() < 2)
      throw DomainError(Errc::no_bridges, "fewer than two circles");
    return {order[0], order[1]};
  }

  // largest_influence: rank circles of the largest component by estimated
  // influence of their member set
  int best_label = 0;
  std::size_t best_blocks = 0;
  std::map<int, std::size_t> blocks_per_label;
  for (const auto& [c, label] : comps.block_label) ++blocks_per_label[label];
  for (const auto& [label, count] : blocks_per_label) {
    if (count > best_blocks) {  // ties keep the smallest label
      best_blocks = count;
      best_label = label;
    }
  }
  const InducedNetwork net = induce_network(circles, weights);
  const IndexedNetwork ix = index_network(net);
  std::vector<std::pair<double, CircleId>> ranked;
  for (const auto& [c, label] : comps.block_label) {
    if (label != best_label) continue;
    const auto& members = circles.circles.at(c);
    if (members.empty()) {
      ranked.push_back({0.0, c});
      continue;
    }
    std::vector<std::uint32_t> src;
    src.reserve(members.size());
    for (const auto& v : members) src.push_back(*ix.index_of(v));
    const auto est = estimate_influence(ix, src, config.terminal_trials,
                                        rng.fork(fnv1a64(c.value)), threads);
    ranked.push_back({est.mean, c});
  }
  if (ranked.size() < 2)
    throw DomainError(Errc::disconnected_terminals,
                      "largest component has fewer than two circles");
  std::sort(ranked.begin(), ranked.end(),
            [](const auto& a, const auto& b) {
              if (a.first != b.first) return a.first > b.first;
              return a.second < b.second;
            });
  return {ranked[0].second, ranked[1].second};
}

std::uint64_t combinations_capped(std::uint64_t n, std::uint64_t k,
                                  std::uint64_t cap) {
  if (k > n) return 0;
  std::uint64_t c = 1;
  for (std::uint64_t i = 0; i < k; ++i) {
    c = c * (n - i) / (i + 1);  // exact: product of i+1 consecutive ints
    if (c > cap) return cap + 1;
  }
  return c;
}

}  // namespace

OptimizationResult greedy_detach(const CircleCollection& circles,
                                 const EdgeWeights& weights,
                                 const SourceDistribution& p, std::size_t m,
                                 const Evaluator& eval, RngSpec rng,
                                 int threads) {
  if (m < 1) throw std::invalid_argument("greedy_detach: m must be at least 1");
  validate_distribution(p, circles);
  const auto start = Clock::now();

  OptimizationResult result;
  result.method = Method::greedy;
  CircleCollection current = circles;
  result.epoi_trace.push_back(
      evaluate(current, weights, p, eval, rng.fork("greedy-baseline"), threads));

  for (std::size_t step = 0; step < m; ++step) {
    const auto candidates = enumerate_candidates(build_bbn(current));
    if (candidates.empty()) {
      std::ostringstream msg;
      msg << "no detachment candidates left after " << step << " of " << m
          << " steps";
      throw DomainError(Errc::no_candidates, msg.str());
    }
    // one stream family per step: every candidate sees the same draws
    const RngSpec step_rng = rng.fork("greedy-step").fork(step);
    double best_value = std::numeric_limits<double>::infinity();
    std::size_t best_index = 0;
    EpoiEstimate best_est;
    CircleCollection best_circles;
    for (std::size_t i = 0; i < candidates.size(); ++i) {
      auto trial = apply_detachment(current, candidates[i]);
      const auto est = evaluate(trial.circles, weights, p, eval, step_rng, threads);
      if (est.value < best_value) {  // strict: first candidate wins ties
        best_value = est.value;
        best_index = i;
        best_est = est;
        best_circles = std::move(trial.circles);
      }
    }
    result.detachments.pairs.push_back(candidates[best_index]);
    result.epoi_trace.push_back(best_est);
    current = std::move(best_circles);
  }

  const auto replay = apply_detachment_set(circles, result.detachments);
  result.orphaned = replay.orphaned;
  result.final_circles = replay.circles;
  result.wall_time_ms = ms_since(start);
  return result;
}

OptimizationResult exhaustive_detach(const CircleCollection& circles,
                                     const EdgeWeights& weights,
                                     const SourceDistribution& p, std::size_t m,
                                     std::size_t combination_cap,
                                     std::size_t edge_cap) {
  if (m < 1) throw std::invalid_argument("exhaustive_detach: m must be at least 1");
  validate_distribution(p, circles);
  const auto start = Clock::now();

  const auto candidates = enumerate_candidates(build_bbn(circles));
  if (m > candidates.size()) {
    std::ostringstream msg;
    msg << "m=" << m << " exceeds the " << candidates.size()
        << " available candidate links";
    throw DomainError(Errc::no_candidates, msg.str());
  }
  const std::uint64_t combos =
      combinations_capped(candidates.size(), m, combination_cap);
  if (combos > combination_cap) {
    std::ostringstream msg;
    msg << "C(" << candidates.size() << "," << m << ") exceeds the cap of "
        << combination_cap << " combinations";
    throw DomainError(Errc::too_large, msg.str());
  }

  OptimizationResult result;
  result.method = Method::exhaustive;
  result.epoi_trace.push_back(exact_epoi(circles, weights, p, edge_cap));

  // lexicographic index vectors over the sorted candidate list; the first
  // strict minimum is therefore the byte-order smallest minimizer
  std::vector<std::size_t> pick(m);
  for (std::size_t i = 0; i < m; ++i) pick[i] = i;
  double best_value = std::numeric_limits<double>::infinity();
  DetachmentSet best_set;
  EpoiEstimate best_est;
  for (;;) {
    DetachmentSet set;
    set.pairs.reserve(m);
    for (std::size_t i : pick) set.pairs.push_back(candidates[i]);
    const auto applied = apply_detachment_set(circles, set);
    const auto est = exact_epoi(applied.circles, weights, p, edge_cap);
    if (est.value < best_value) {
      best_value = est.value;
      best_set = set;
      best_est = est;
    }
    // advance the combination
    std::size_t i = m;
    while (i > 0) {
      --i;
      if (pick[i] != i + candidates.size() - m) break;
      if (i == 0) {
        i = m;  // done
        break;
      }
    }
    if (i == m) break;
    ++pick[i];
    for (std::size_t j = i + 1; j < m; ++j) pick[j] = pick[j - 1] + 1;
  }

  result.detachments = best_set;
  const auto applied = apply_detachment_set(circles, best_set);
  result.final_circles = applied.circles;
  result.orphaned = applied.orphaned;
  result.epoi_trace.push_back(best_est);
  result.wall_time_ms = ms_since(start);
  return result;
}

OptimizationResult min_cut_detach(const CircleCollection& circles,
                                  const EdgeWeights& weights,
                                  const SourceDistribution& p,
                                  const MinCutConfig& config,
                                  std::uint64_t mc_trials, RngSpec rng,
                                  int threads) {
  validate_distribution(p, circles);
  const auto start = Clock::now();

  const BridgeBlockNetwork bbn = build_bbn(circles);
  if (bbn.links.empty())
    throw DomainError(Errc::no_bridges, "no vertex belongs to two circles");
  const BbnComponents comps = bbn_components(bbn);
  const auto terminals = select_terminals(circles, weights, bbn, comps, config,
                                          rng.fork("terminals"), threads);
  if (comps.block_label.at(terminals.first) !=
      comps.block_label.at(terminals.second)) {
    std::ostringstream msg;
    msg << terminals.first << " and " << terminals.second
        << " are already in different components";
    throw DomainError(Errc::disconnected_terminals, msg.str());
  }

  // flow nodes: s, t, blocks in byte order, bridges in byte order
  std::vector<CircleId> blocks(bbn.blocks.begin(), bbn.blocks.end());
  std::vector<VertexId> bridges(bbn.bridges.begin(), bbn.bridges.end());
  std::map<CircleId, int> block_node;
  std::map<VertexId, int> bridge_node;
  for (std::size_t i = 0; i < blocks.size(); ++i)
    block_node[blocks[i]] = 2 + static_cast<int>(i);
  for (std::size_t i = 0; i < bridges.size(); ++i)
    bridge_node[bridges[i]] = 2 + static_cast<int>(blocks.size() + i);

  double capacity_total = 0;
  std::vector<double> caps;
  caps.reserve(bbn.links.size());
  for (const auto& [c, v] : bbn.links) {
    caps.push_back(link_capacity(circles, weights, c, v, config.capacity_policy));
    capacity_total += caps.back();
  }

  MaxFlow flow(2 + static_cast<int>(blocks.size() + bridges.size()));
  // terminal arcs get more capacity than every link together, so they can
  // never end up in the cut
  const double terminal_cap = capacity_total + 1.0;
  flow.add_pair(0, block_node.at(terminals.first), terminal_cap, 0.0);
  flow.add_pair(block_node.at(terminals.second), 1, terminal_cap, 0.0);
  std::size_t link_index = 0;
  for (const auto& [c, v] : bbn.links) {
    const double cap = caps[link_index++];
    flow.add_pair(block_node.at(c), bridge_node.at(v), cap, cap);
  }
  flow.run(0, 1);
  const auto side = flow.source_side(0);

  OptimizationResult result;
  result.method = Method::mincut;
  result.terminals = terminals;
  for (const auto& [c, v] : bbn.links) {
    if (side[block_node.at(c)] != side[bridge_node.at(v)])
      result.detachments.pairs.push_back({v, c});
  }
  if (result.detachments.pairs.empty())
    throw std::logic_error("min cut produced no crossing links");

  const auto applied = apply_detachment_set(circles, result.detachments);
  result.final_circles = applied.circles;
  result.orphaned = applied.orphaned;

  // the cut must actually separate the terminals once re-derived
  const auto post = bbn_components(build_bbn(result.final_circles));
  if (post.block_label.at(terminals.first) ==
      post.block_label.at(terminals.second))
    throw std::logic_error("cut failed to separate the terminal circles");

  result.epoi_trace.push_back(
      estimate_epoi(circles, weights, p, mc_trials, rng.fork("mincut-base"), threads));
  result.epoi_trace.push_back(estimate_epoi(result.final_circles, weights, p,
                                            mc_trials, rng.fork("mincut-final"),
                                            threads));
  result.wall_time_ms = ms_since(start);
  return result;
}

MethodComparison compare_methods(const CircleCollection& circles,
                                 const EdgeWeights& weights,
                                 const SourceDistribution& p,
                                 const CompareConfig& config, RngSpec rng,
                                 int threads) {
  MethodComparison row;

  auto cut_start = Clock::now();
  const auto cut = min_cut_detach(circles, weights, p, config.mincut,
                                  config.mc_trials, rng.fork("cut"), threads);
  row.ms_cut = ms_since(cut_start);
  row.mincut_size = cut.detachments.pairs.size();
  row.base = cut.epoi_trace.front();
  row.cut = cut.epoi_trace.back();
  row.terminals = *cut.terminals;
  row.cut_detachments = cut.detachments;
  row.cut_circles = cut.final_circles;

  auto greedy_start = Clock::now();
  const auto greedy =
      greedy_detach(circles, weights, p, row.mincut_size,
                    Evaluator::monte_carlo(config.greedy_trials),
                    rng.fork("greedy"), threads);
  row.greedy = estimate_epoi(greedy.final_circles, weights, p, config.mc_trials,
                             rng.fork("greedy-final"), threads);
  row.ms_greedy = ms_since(greedy_start);
  row.greedy_detachments = greedy.detachments;
  row.greedy_circles = greedy.final_circles;
  return row;
}

}  // namespace detach
