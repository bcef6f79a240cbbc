#pragma once

#include <compare>
#include <ostream>
#include <string>
#include <tuple>
#include <vector>

namespace detach {

// Opaque string identifier. Ordering is plain byte order; it is the tie-break
// order everywhere candidates, edges, or links are enumerated.
template <class Tag>
struct Id {
  std::string value;

  Id() = default;
  explicit Id(std::string v) : value(std::move(v)) {}
  Id(const char* v) : value(v) {}

  bool empty() const { return value.empty(); }
  auto operator<=>(const Id&) const = default;
};

using VertexId = Id<struct VertexTag>;
using CircleId = Id<struct CircleTag>;

template <class Tag>
inline std::ostream& operator<<(std::ostream& os, const Id<Tag>& id) {
  return os << id.value;
}

// A single (vertex, circle) membership removal. Sorted by (circle, vertex)
// so enumeration order matches candidate order.
struct DetachmentPair {
  VertexId vertex;
  CircleId circle;

  friend bool operator==(const DetachmentPair&, const DetachmentPair&) = default;
  friend auto operator<=>(const DetachmentPair& a, const DetachmentPair& b) {
    return std::tie(a.circle, a.vertex) <=> std::tie(b.circle, b.vertex);
  }
};

inline std::ostream& operator<<(std::ostream& os, const DetachmentPair& p) {
  return os << "(" << p.vertex << "," << p.circle << ")";
}

// Ordered sequence of detachments, applied left to right.
struct DetachmentSet {
  std::vector<DetachmentPair> pairs;

  friend bool operator==(const DetachmentSet&, const DetachmentSet&) = default;
};

}  // namespace detach
