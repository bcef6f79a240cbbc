#include "detach/cascade.hpp"

#include <algorithm>
#include <cmath>
#include <cstring>
#include <sstream>
#include <thread>

namespace detach {

namespace {

int resolve_threads(int threads) {
  if (threads > 0) return threads;
  unsigned hw = std::thread::hardware_concurrency();
  return hw ? static_cast<int>(hw) : 1;
}

struct CascadeScratch {
  std::vector<std::uint32_t> epoch;
  std::uint32_t cur = 0;
  std::vector<std::uint32_t> frontier;
  std::vector<std::uint32_t> next;
};

// One diffusion trial. Newly infected vertices are processed in ascending
// index order and their out-neighbours likewise, so the live-edge trial
// sequence is the sorted (u,v) order and the draw sequence is a pure
// function of (network, sources, stream). An edge is only tried while its
// target is uninfected; a success blocks later attempts in the same layer.
template <class LayerSink>
std::uint64_t cascade_core(const IndexedNetwork& net,
                           const std::vector<std::uint32_t>& sources,
                           RngStream& rng, CascadeScratch& s, LayerSink&& sink) {
  s.epoch.resize(net.vertex_count(), 0);
  if (++s.cur == 0) {
    std::fill(s.epoch.begin(), s.epoch.end(), 0);
    s.cur = 1;
  }
  const std::uint32_t cur = s.cur;
  s.frontier.assign(sources.begin(), sources.end());
  for (std::uint32_t v : s.frontier) s.epoch[v] = cur;
  sink(s.frontier);
  std::uint64_t total = s.frontier.size();
  while (!s.frontier.empty()) {
    s.next.clear();
    for (std::uint32_t u : s.frontier) {
      for (std::uint32_t e = net.offsets[u]; e < net.offsets[u + 1]; ++e) {
        const std::uint32_t v = net.targets[e];
        if (s.epoch[v] == cur) continue;
        if (rng.next_unit() < net.probs[e]) {
          s.epoch[v] = cur;
          s.next.push_back(v);
        }
      }
    }
    if (s.next.empty()) break;
    std::sort(s.next.begin(), s.next.end());
    total += s.next.size();
    sink(s.next);
    s.frontier.swap(s.next);
  }
  return total;
}

struct NullSink {
  void operator()(const std::vector<std::uint32_t>&) const {}
};

// A batch of trials against one source set, with its own stream base.
struct SimJob {
  const std::vector<std::uint32_t>* sources;
  std::uint64_t trials;
  std::uint64_t stream_base;
};

struct SimSums {
  std::uint64_t sum = 0;
  std::uint64_t sum_sq = 0;
};

// Runs all jobs' trials, split contiguously across threads. Infected counts
// are integers, so partial sums combine exactly regardless of the split.
std::vector<SimSums> simulate_many(const IndexedNetwork& net,
                                   const std::vector<SimJob>& jobs,
                                   std::uint64_t master_seed, int threads) {
  std::vector<SimSums> totals(jobs.size());
  std::vector<std::uint64_t> first_trial(jobs.size() + 1, 0);
  for (std::size_t i = 0; i < jobs.size(); ++i)
    first_trial[i + 1] = first_trial[i] + jobs[i].trials;
  const std::uint64_t grand_total = first_trial.back();
  if (grand_total == 0) return totals;

  const int n_workers =
      static_cast<int>(std::min<std::uint64_t>(resolve_threads(threads), grand_total));

  auto run_range = [&](std::uint64_t begin, std::uint64_t end,
                       std::vector<SimSums>& acc) {
    CascadeScratch scratch;
    std::size_t job = static_cast<std::size_t>(
        std::upper_bound(first_trial.begin(), first_trial.end(), begin) -
        first_trial.begin() - 1);
    for (std::uint64_t g = begin; g < end;) {
      while (g >= first_trial[job + 1]) ++job;
      const std::uint64_t stop = std::min(end, first_trial[job + 1]);
      for (; g < stop; ++g) {
        const std::uint64_t t = g - first_trial[job];
        RngStream rng(RngSpec{master_seed, jobs[job].stream_base + t});
        const std::uint64_t count =
            cascade_core(net, *jobs[job].sources, rng, scratch, NullSink{});
        acc[job].sum += count;
        acc[job].sum_sq += count * count;
      }
    }
  };

  if (n_workers <= 1) {
    run_range(0, grand_total, totals);
    return totals;
  }
  std::vector<std::vector<SimSums>> partial(n_workers,
                                            std::vector<SimSums>(jobs.size()));
  std::vector<std::thread> pool;
  pool.reserve(n_workers);
  for (int w = 0; w < n_workers; ++w) {
    const std::uint64_t begin = grand_total * w / n_workers;
    const std::uint64_t end = grand_total * (w + 1) / n_workers;
    pool.emplace_back(run_range, begin, end, std::ref(partial[w]));
  }
  for (auto& th : pool) th.join();
  for (int w = 0; w < n_workers; ++w)
    for (std::size_t i = 0; i < jobs.size(); ++i) {
      totals[i].sum += partial[w][i].sum;
      totals[i].sum_sq += partial[w][i].sum_sq;
    }
  return totals;
}

// Sample mean / standard error from exact integer sums.
std::pair<double, double> mean_and_se(const SimSums& s, std::uint64_t trials) {
  const double mean = static_cast<double>(s.sum) / static_cast<double>(trials);
  if (trials < 2) return {mean, 0.0};
  const __int128 num = static_cast<__int128>(s.sum_sq) * trials -
                       static_cast<__int128>(s.sum) * s.sum;
  const double var = std::max(0.0, static_cast<double>(num)) /
                     (static_cast<double>(trials) * static_cast<double>(trials - 1));
  return {mean, std::sqrt(var / static_cast<double>(trials))};
}

std::vector<std::uint32_t> to_indices(const IndexedNetwork& net,
                                      const std::set<VertexId>& sources) {
  std::vector<std::uint32_t> out;
  out.reserve(sources.size());
  for (const auto& v : sources) {
    auto ix = net.index_of(v);
    if (!ix) {
      std::ostringstream msg;
      msg << "source vertex " << v << " is not in the network";
      throw DomainError(Errc::unknown_vertex, msg.str());
    }
    out.push_back(*ix);  // set iteration is sorted, so indices ascend
  }
  return out;
}

}  // namespace

std::set<VertexId> CascadeTrace::influenced() const {
  std::set<VertexId> all;
  for (const auto& layer : layers) all.insert(layer.begin(), layer.end());
  return all;
}

SourceDistribution SourceDistribution::uniform(const CircleCollection& circles) {
  if (circles.circles.empty())
    throw DomainError(Errc::invalid_distribution,
                      "uniform distribution over an empty collection");
  SourceDistribution p;
  const double share = 1.0 / static_cast<double>(circles.circles.size());
  for (const auto& [id, members] : circles.circles) p.probs[id] = share;
  return p;
}

void validate_distribution(const SourceDistribution& p,
                           const CircleCollection& circles) {
  double total = 0;
  for (const auto& [id, prob] : p.probs) {
    if (!(prob >= 0)) {
      throw DomainError(Errc::invalid_distribution,
                        "negative probability for circle " + id.value);
    }
    if (!circles.circles.count(id)) {
      throw DomainError(Errc::invalid_distribution,
                        "probability assigned to unknown circle " + id.value);
    }
    total += prob;
  }
  if (std::abs(total - 1.0) > 1e-9) {
    std::ostringstream msg;
    msg << "probabilities sum to " << total << ", expected 1";
    throw DomainError(Errc::invalid_distribution, msg.str());
  }
}

std::optional<std::uint32_t> IndexedNetwork::index_of(const VertexId& v) const {
  auto it = std::lower_bound(ids.begin(), ids.end(), v);
  if (it == ids.end() || *it != v) return std::nullopt;
  return static_cast<std::uint32_t>(it - ids.begin());
}

IndexedNetwork index_network(const InducedNetwork& net) {
  IndexedNetwork ix;
  ix.ids.assign(net.vertices.begin(), net.vertices.end());
  ix.offsets.assign(ix.ids.size() + 1, 0);
  for (const auto& [u, v] : net.edges) {
    auto ui = ix.index_of(u);
    ++ix.offsets[*ui + 1];
  }
  for (std::size_t i = 1; i < ix.offsets.size(); ++i) ix.offsets[i] += ix.offsets[i - 1];
  ix.targets.resize(net.edges.size());
  ix.probs.resize(net.edges.size());
  // the edge set iterates in sorted (u,v) order, so each adjacency list is
  // filled ascending
  std::vector<std::uint32_t> cursor(ix.offsets.begin(), ix.offsets.end() - 1);
  for (const auto& [u, v] : net.edges) {
    const std::uint32_t ui = *ix.index_of(u);
    const std::uint32_t vi = *ix.index_of(v);
    auto w = net.weights.get(u, v);
    const std::uint32_t slot = cursor[ui]++;
    ix.targets[slot] = vi;
    ix.probs[slot] = w ? *w : 0.0;
  }
  return ix;
}

CascadeTrace run_cascade(const InducedNetwork& net,
                         const std::set<VertexId>& sources, RngSpec rng) {
  if (sources.empty()) throw std::invalid_argument("run_cascade: empty source set");
  const IndexedNetwork ix = index_network(net);
  const auto src = to_indices(ix, sources);
  CascadeTrace trace;
  CascadeScratch scratch;
  RngStream stream(rng);
  cascade_core(ix, src, stream, scratch, [&](const std::vector<std::uint32_t>& layer) {
    std::set<VertexId> ids;
    for (std::uint32_t v : layer) ids.insert(ix.ids[v]);
    trace.layers.push_back(std::move(ids));
  });
  return trace;
}

InfluenceEstimate estimate_influence(const IndexedNetwork& net,
                                     const std::vector<std::uint32_t>& sources,
                                     std::uint64_t trials, RngSpec rng,
                                     int threads) {
  if (sources.empty())
    throw std::invalid_argument("estimate_influence: empty source set");
  if (trials == 0)
    throw std::invalid_argument("estimate_influence: zero trials");
  for (std::uint32_t v : sources) {
    if (v >= net.vertex_count())
      throw DomainError(Errc::unknown_vertex, "source index out of range");
  }
  const std::vector<SimJob> jobs{{&sources, trials, rng.stream_index}};
  const auto sums = simulate_many(net, jobs, rng.master_seed, threads);
  auto [mean, se] = mean_and_se(sums[0], trials);
  return {mean, se, trials, false};
}

InfluenceEstimate estimate_influence(const InducedNetwork& net,
                                     const std::set<VertexId>& sources,
                                     std::uint64_t trials, RngSpec rng,
                                     int threads) {
  const IndexedNetwork ix = index_network(net);
  return estimate_influence(ix, to_indices(ix, sources), trials, rng, threads);
}

InfluenceEstimate exact_influence(const InducedNetwork& net,
                                  const std::set<VertexId>& sources,
                                  std::size_t edge_cap) {
  const std::size_t m = net.edges.size();
  if (m > edge_cap) {
    std::ostringstream msg;
    msg << m << " directed edges exceed the enumeration cap of " << edge_cap;
    throw DomainError(Errc::too_large, msg.str());
  }
  if (sources.empty())
    throw std::invalid_argument("exact_influence: empty source set");
  const IndexedNetwork ix = index_network(net);
  const auto src = to_indices(ix, sources);

  struct Edge { std::uint32_t u, v; double w; };
  std::vector<Edge> edges;
  edges.reserve(m);
  for (const auto& [u, v] : net.edges) {
    auto w = net.weights.get(u, v);
    edges.push_back({*ix.index_of(u), *ix.index_of(v), w ? *w : 0.0});
  }

  const std::size_t n = ix.vertex_count();
  std::vector<std::uint32_t> epoch(n, 0);
  std::uint32_t cur = 0;
  std::vector<std::uint32_t> stack;
  double sigma = 0;

  for (std::uint64_t mask = 0; mask < (1ULL << m); ++mask) {
    double prob = 1.0;
    for (std::size_t e = 0; e < m; ++e)
      prob *= (mask >> e) & 1 ? edges[e].w : 1.0 - edges[e].w;
    if (prob == 0.0) continue;

    ++cur;
    stack.assign(src.begin(), src.end());
    for (std::uint32_t v : stack) epoch[v] = cur;
    std::uint64_t reached = stack.size();
    while (!stack.empty()) {
      const std::uint32_t u = stack.back();
      stack.pop_back();
      for (std::size_t e = 0; e < m; ++e) {
        if (!((mask >> e) & 1) || edges[e].u != u) continue;
        const std::uint32_t v = edges[e].v;
        if (epoch[v] == cur) continue;
        epoch[v] = cur;
        ++reached;
        stack.push_back(v);
      }
    }
    sigma += prob * static_cast<double>(reached);
  }
  return {sigma, 0.0, 0, true};
}

namespace {

struct CircleJob {
  CircleId id;
  std::vector<std::uint32_t> members;
  double prob = 0;
  std::size_t size = 0;
  std::size_t outside = 0;
};

}  // namespace

EpoiEstimate estimate_epoi(const CircleCollection& circles,
                           const EdgeWeights& weights,
                           const SourceDistribution& p,
                           std::uint64_t trials_per_circle, RngSpec rng,
                           int threads) {
  validate_distribution(p, circles);
  if (trials_per_circle == 0)
    throw std::invalid_argument("estimate_epoi: zero trials");
  const InducedNetwork net = induce_network(circles, weights);
  const IndexedNetwork ix = index_network(net);
  const std::size_t n_universe = net.vertices.size();

  EpoiEstimate out;
  out.trials_per_circle = trials_per_circle;

  std::vector<CircleJob> active;
  for (const auto& [id, prob] : p.probs) {
    if (prob <= 0) continue;
    const auto& members = circles.circles.at(id);
    CircleJob job;
    job.id = id;
    job.prob = prob;
    job.size = members.size();
    job.outside = n_universe - members.size();
    if (job.size == 0 || job.outside == 0) {
      out.per_circle_terms[id] = 0.0;  // degenerate circle contributes nothing
      continue;
    }
    job.members.reserve(members.size());
    for (const auto& v : members) job.members.push_back(*ix.index_of(v));
    active.push_back(std::move(job));
  }

  std::vector<SimJob> jobs;
  jobs.reserve(active.size());
  for (const auto& job : active) {
    jobs.push_back({&job.members, trials_per_circle,
                    mix64(rng.stream_index ^ fnv1a64(job.id.value))});
  }
  const auto sums = simulate_many(ix, jobs, rng.master_seed, threads);

  double value = 0;
  double var_total = 0;
  for (std::size_t i = 0; i < active.size(); ++i) {
    const auto& job = active[i];
    auto [mean, se] = mean_and_se(sums[i], trials_per_circle);
    const double denom = static_cast<double>(job.outside);
    const double term = (mean - static_cast<double>(job.size)) / denom;
    const double term_se = se / denom;
    out.per_circle_terms[job.id] = term;
    value += job.prob * term;
    var_total += job.prob * job.prob * term_se * term_se;
  }
  // degenerate circles already recorded with term 0; add their p * 0 = 0
  out.value = value;
  out.std_error = std::sqrt(var_total);
  return out;
}

EpoiEstimate exact_epoi(const CircleCollection& circles,
                        const EdgeWeights& weights,
                        const SourceDistribution& p, std::size_t edge_cap) {
  validate_distribution(p, circles);
  const InducedNetwork net = induce_network(circles, weights);
  if (net.edges.size() > edge_cap) {
    std::ostringstream msg;
    msg << net.edges.size() << " directed edges exceed the enumeration cap of "
        << edge_cap;
    throw DomainError(Errc::too_large, msg.str());
  }
  const std::size_t n_universe = net.vertices.size();

  EpoiEstimate out;
  out.exact = true;
  double value = 0;
  for (const auto& [id, prob] : p.probs) {
    if (prob <= 0) continue;
    const auto& members = circles.circles.at(id);
    const std::size_t outside = n_universe - members.size();
    if (members.empty() || outside == 0) {
      out.per_circle_terms[id] = 0.0;
      continue;
    }
    const double sigma = exact_influence(net, members, edge_cap).mean;
    const double term =
        (sigma - static_cast<double>(members.size())) / static_cast<double>(outside);
    out.per_circle_terms[id] = term;
    value += prob * term;
  }
  out.value = value;
  return out;
}

}  // namespace detach
