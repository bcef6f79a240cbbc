#pragma once

#include <cstddef>
#include <map>
#include <optional>
#include <set>
#include <utility>
#include <vector>

#include "detach/errors.hpp"
#include "detach/ids.hpp"

namespace detach {

// Named circles over a derived vertex universe: a vertex exists exactly as
// long as it belongs to at least one circle.
struct CircleCollection {
  std::map<CircleId, std::set<VertexId>> circles;

  std::set<VertexId> universe() const;
  bool is_member(const CircleId& c, const VertexId& v) const;
  std::size_t membership_count(const VertexId& v) const;

  friend bool operator==(const CircleCollection&, const CircleCollection&) = default;
};

// Directed transmission probabilities keyed by ordered vertex pair.
// Weights for (u,v) and (v,u) are independent values.
struct EdgeWeights {
  std::map<std::pair<VertexId, VertexId>, double> weights;

  std::optional<double> get(const VertexId& u, const VertexId& v) const;
  void set(const VertexId& u, const VertexId& v, double w);
};

// Directed graph induced by circle co-membership: (u,v) is an edge iff
// u != v and some circle contains both. Every edge carries a weight.
struct InducedNetwork {
  std::set<VertexId> vertices;
  std::set<std::pair<VertexId, VertexId>> edges;
  EdgeWeights weights;
};

// Bipartite view: blocks are circles, bridges are vertices belonging to two
// or more circles, links are (circle, bridge) memberships. Removing one link
// is exactly one detachment.
struct BridgeBlockNetwork {
  std::set<CircleId> blocks;
  std::set<VertexId> bridges;
  std::set<std::pair<CircleId, VertexId>> links;
};

struct DetachmentOutcome {
  CircleCollection circles;
  // Vertices that lost their last membership, in application order. They are
  // no longer part of the universe.
  std::vector<VertexId> orphaned;
};

InducedNetwork induce_network(const CircleCollection& circles,
                              const EdgeWeights& weights);

BridgeBlockNetwork build_bbn(const CircleCollection& circles);

DetachmentOutcome apply_detachment(const CircleCollection& circles,
                                   const DetachmentPair& pair);

DetachmentOutcome apply_detachment_set(const CircleCollection& circles,
                                       const DetachmentSet& set);

// All single-detachment candidates, i.e. the BBN links, sorted by
// (circle, vertex) byte order.
std::vector<DetachmentPair> enumerate_candidates(const BridgeBlockNetwork& bbn);

// Connected components over blocks + bridges. Isolated blocks form their own
// component; a bridge always shares a component with its circles.
struct BbnComponents {
  std::map<CircleId, int> block_label;
  std::map<VertexId, int> bridge_label;
  int count = 0;
  std::size_t largest_size = 0;  // blocks + bridges in the largest component
};

BbnComponents bbn_components(const BridgeBlockNetwork& bbn);

}  // namespace detach
