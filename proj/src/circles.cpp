#include "detach/circles.hpp"

#include <algorithm>
#include <sstream>

namespace detach {

std::set<VertexId> CircleCollection::universe() const {
  std::set<VertexId> all;
  for (const auto& [id, members] : circles) all.insert(members.begin(), members.end());
  return all;
}

bool CircleCollection::is_member(const CircleId& c, const VertexId& v) const {
  auto it = circles.find(c);
  return it != circles.end() && it->second.count(v) > 0;
}

std::size_t CircleCollection::membership_count(const VertexId& v) const {
  std::size_t n = 0;
  for (const auto& [id, members] : circles) n += members.count(v);
  return n;
}

std::optional<double> EdgeWeights::get(const VertexId& u, const VertexId& v) const {
  auto it = weights.find({u, v});
  if (it == weights.end()) return std::nullopt;
  return it->second;
}

void EdgeWeights::set(const VertexId& u, const VertexId& v, double w) {
  weights[{u, v}] = w;
}

InducedNetwork induce_network(const CircleCollection& circles,
                              const EdgeWeights& weights) {
  InducedNetwork net;
  net.vertices = circles.universe();
  for (const auto& [id, members] : circles.circles) {
    for (const auto& u : members) {
      for (const auto& v : members) {
        if (u == v) continue;  // self-pairs are never edges
        net.edges.insert({u, v});
      }
    }
  }
  for (const auto& [u, v] : net.edges) {
    auto w = weights.get(u, v);
    if (!w) {
      std::ostringstream msg;
      msg << "no weight for induced edge (" << u << "," << v << ")";
      throw DomainError(Errc::missing_weight, msg.str());
    }
    if (!(*w >= 0.0 && *w <= 1.0)) {
      std::ostringstream msg;
      msg << "weight " << *w << " for edge (" << u << "," << v
          << ") outside [0,1]";
      throw DomainError(Errc::invalid_weight, msg.str());
    }
    net.weights.set(u, v, *w);
  }
  return net;
}

BridgeBlockNetwork build_bbn(const CircleCollection& circles) {
  BridgeBlockNetwork bbn;
  std::map<VertexId, std::vector<CircleId>> memberships;
  for (const auto& [id, members] : circles.circles) {
    bbn.blocks.insert(id);
    for (const auto& v : members) memberships[v].push_back(id);
  }
  for (const auto& [v, in] : memberships) {
    if (in.size() < 2) continue;
    bbn.bridges.insert(v);
    for (const auto& c : in) bbn.links.insert({c, v});
  }
  return bbn;
}

DetachmentOutcome apply_detachment(const CircleCollection& circles,
                                   const DetachmentPair& pair) {
  if (!circles.is_member(pair.circle, pair.vertex)) {
    std::ostringstream msg;
    msg << pair.vertex << " is not a member of " << pair.circle;
    throw DomainError(Errc::not_a_member, msg.str());
  }
  DetachmentOutcome out;
  out.circles = circles;
  out.circles.circles.at(pair.circle).erase(pair.vertex);
  if (out.circles.membership_count(pair.vertex) == 0)
    out.orphaned.push_back(pair.vertex);
  return out;
}

DetachmentOutcome apply_detachment_set(const CircleCollection& circles,
                                       const DetachmentSet& set) {
  DetachmentOutcome out;
  out.circles = circles;
  for (std::size_t i = 0; i < set.pairs.size(); ++i) {
    const auto& pair = set.pairs[i];
    if (!out.circles.is_member(pair.circle, pair.vertex)) {
      std::ostringstream msg;
      msg << pair.vertex << " is not a member of " << pair.circle
          << " (pair " << i + 1 << " of " << set.pairs.size() << ")";
      throw DomainError(Errc::not_a_member, msg.str());
    }
    out.circles.circles.at(pair.circle).erase(pair.vertex);
    if (out.circles.membership_count(pair.vertex) == 0)
      out.orphaned.push_back(pair.vertex);
  }
  return out;
}

std::vector<DetachmentPair> enumerate_candidates(const BridgeBlockNetwork& bbn) {
  std::vector<DetachmentPair> out;
  out.reserve(bbn.links.size());
  // links are already sorted by (circle, vertex)
  for (const auto& [c, v] : bbn.links) out.push_back({v, c});
  return out;
}

BbnComponents bbn_components(const BridgeBlockNetwork& bbn) {
  BbnComponents out;
  // union-find over block ids then bridge ids, in byte order
  std::vector<CircleId> blocks(bbn.blocks.begin(), bbn.blocks.end());
  std::vector<VertexId> bridges(bbn.bridges.begin(), bbn.bridges.end());
  std::map<CircleId, std::size_t> block_ix;
  std::map<VertexId, std::size_t> bridge_ix;
  for (std::size_t i = 0; i < blocks.size(); ++i) block_ix[blocks[i]] = i;
  for (std::size_t i = 0; i < bridges.size(); ++i)
    bridge_ix[bridges[i]] = blocks.size() + i;

  std::vector<std::size_t> parent(blocks.size() + bridges.size());
  for (std::size_t i = 0; i < parent.size(); ++i) parent[i] = i;
  auto find = [&](std::size_t x) {
    while (parent[x] != x) x = parent[x] = parent[parent[x]];
    return x;
  };
  for (const auto& [c, v] : bbn.links) {
    std::size_t a = find(block_ix.at(c)), b = find(bridge_ix.at(v));
    if (a != b) parent[std::max(a, b)] = std::min(a, b);
  }

  // labels in first-seen order over blocks then bridges: deterministic
  std::map<std::size_t, int> label_of_root;
  std::vector<std::size_t> comp_size;
  auto label = [&](std::size_t x) {
    std::size_t r = find(x);
    auto it = label_of_root.find(r);
    if (it == label_of_root.end()) {
      it = label_of_root.emplace(r, out.count++).first;
      comp_size.push_back(0);
    }
    ++comp_size[it->second];
    return it->second;
  };
  for (const auto& c : blocks) out.block_label[c] = label(block_ix.at(c));
  for (const auto& v : bridges) out.bridge_label[v] = label(bridge_ix.at(v));
  for (std::size_t s : comp_size) out.largest_size = std::max(out.largest_size, s);
  return out;
}

}  // namespace detach
