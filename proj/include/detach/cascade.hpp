#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <set>
#include <vector>

#include "detach/circles.hpp"
#include "detach/rng.hpp"

namespace detach {

// One simulated diffusion: layers[0] is the seed set, layers[i+1] the
// vertices first infected in step i+1. Layers are disjoint and non-empty.
struct CascadeTrace {
  std::vector<std::set<VertexId>> layers;

  std::set<VertexId> influenced() const;
};

// Probability of each circle being the seed circle. Missing circles have
// probability zero. Must sum to 1 within 1e-9.
struct SourceDistribution {
  std::map<CircleId, double> probs;

  static SourceDistribution uniform(const CircleCollection& circles);
};

void validate_distribution(const SourceDistribution& p,
                           const CircleCollection& circles);

struct InfluenceEstimate {
  double mean = 0;
  double std_error = 0;
  std::uint64_t trials = 0;
  bool exact = false;
};

struct EpoiEstimate {
  double value = 0;
  double std_error = 0;
  std::uint64_t trials_per_circle = 0;
  // Term (sigma(I) - |I|) / |V \ I| for every circle with positive
  // probability; degenerate circles (empty, or covering the universe)
  // contribute a literal 0.
  std::map<CircleId, double> per_circle_terms;
  bool exact = false;
};

// Index-compiled view of an induced network for the simulation hot path.
// Vertices are sorted by byte order, so index order == id order, and each
// CSR adjacency list is ascending.
struct IndexedNetwork {
  std::vector<VertexId> ids;
  std::vector<std::uint32_t> offsets;
  std::vector<std::uint32_t> targets;
  std::vector<double> probs;

  std::size_t vertex_count() const { return ids.size(); }
  std::size_t edge_count() const { return targets.size(); }
  std::optional<std::uint32_t> index_of(const VertexId& v) const;
};

IndexedNetwork index_network(const InducedNetwork& net);

inline constexpr std::size_t kDefaultExactEdgeCap = 20;

CascadeTrace run_cascade(const InducedNetwork& net,
                         const std::set<VertexId>& sources, RngSpec rng);

// Monte Carlo influence: mean infected count over `trials` cascades. Trial t
// draws from stream rng.stream_index + t, so estimates do not depend on
// execution order or thread count.
InfluenceEstimate estimate_influence(const InducedNetwork& net,
                                     const std::set<VertexId>& sources,
                                     std::uint64_t trials, RngSpec rng,
                                     int threads = 1);

InfluenceEstimate estimate_influence(const IndexedNetwork& net,
                                     const std::vector<std::uint32_t>& sources,
                                     std::uint64_t trials, RngSpec rng,
                                     int threads = 1);

// Exact influence by enumerating all 2^|E| edge realizations.
InfluenceEstimate exact_influence(const InducedNetwork& net,
                                  const std::set<VertexId>& sources,
                                  std::size_t edge_cap = kDefaultExactEdgeCap);

// Expected proportional outside influence over the circle collection.
// Trial t of circle c draws from stream mix64(rng.stream_index ^ fnv(c)) + t.
EpoiEstimate estimate_epoi(const CircleCollection& circles,
                           const EdgeWeights& weights,
                           const SourceDistribution& p,
                           std::uint64_t trials_per_circle, RngSpec rng,
                           int threads = 1);

EpoiEstimate exact_epoi(const CircleCollection& circles,
                        const EdgeWeights& weights,
                        const SourceDistribution& p,
                        std::size_t edge_cap = kDefaultExactEdgeCap);

}  // namespace detach
