#include <doctest.h>

#include "detach/circles.hpp"
#include "test_support.hpp"

using namespace detach;
using testsupport::flat_weights;
using testsupport::t1;
using testsupport::t2;

TEST_CASE("ids order by byte value and detachment pairs by (circle, vertex)") {
  CHECK(VertexId{"a"} < VertexId{"b"});
  CHECK(CircleId{"I10"} < CircleId{"I2"});  // byte order, not numeric
  const DetachmentPair p1{VertexId{"z"}, CircleId{"I1"}};
  const DetachmentPair p2{VertexId{"a"}, CircleId{"I2"}};
  CHECK(p1 < p2);
  CHECK(DetachmentPair{VertexId{"a"}, CircleId{"I1"}} <
        DetachmentPair{VertexId{"b"}, CircleId{"I1"}});
}

TEST_CASE("universe and membership counts derive from the circles") {
  const auto c = t2();
  CHECK(c.universe() ==
        std::set<VertexId>{VertexId{"a"}, VertexId{"b"}, VertexId{"c"},
                           VertexId{"d"}});
  CHECK(c.membership_count(VertexId{"a"}) == 1);
  CHECK(c.membership_count(VertexId{"b"}) == 2);
  CHECK(c.membership_count(VertexId{"nope"}) == 0);
  CHECK(c.is_member(CircleId{"I1"}, VertexId{"a"}));
  CHECK_FALSE(c.is_member(CircleId{"I1"}, VertexId{"c"}));
}

TEST_CASE("induce_network connects exactly the co-members") {
  const auto c = t2();
  const auto net = induce_network(c, flat_weights(c, 0.5));
  CHECK(net.vertices.size() == 4);
  CHECK(net.edges.size() == 6);
  CHECK(net.edges.count({VertexId{"a"}, VertexId{"b"}}) == 1);
  CHECK(net.edges.count({VertexId{"b"}, VertexId{"a"}}) == 1);
  CHECK(net.edges.count({VertexId{"a"}, VertexId{"c"}}) == 0);
  CHECK(net.edges.count({VertexId{"a"}, VertexId{"a"}}) == 0);
  for (const auto& e : net.edges) CHECK(net.weights.get(e.first, e.second) == 0.5);
}

TEST_CASE("induce_network rejects missing and out-of-range weights") {
  const auto c = t1();
  EdgeWeights partial;
  partial.set(VertexId{"a"}, VertexId{"b"}, 0.5);
  CHECK_THROWS_WITH_AS(induce_network(c, partial),
                       doctest::Contains("b,a"), DomainError);
  try {
    induce_network(c, partial);
  } catch (const DomainError& e) {
    CHECK(e.code() == Errc::missing_weight);
  }

  auto bad = flat_weights(c, 0.5);
  bad.set(VertexId{"a"}, VertexId{"b"}, 1.5);
  try {
    induce_network(c, bad);
    FAIL("expected InvalidWeight");
  } catch (const DomainError& e) {
    CHECK(e.code() == Errc::invalid_weight);
  }
}

TEST_CASE("bridge-block network of the three-circle chain") {
  const auto bbn = build_bbn(t2());
  CHECK(bbn.blocks ==
        std::set<CircleId>{CircleId{"I1"}, CircleId{"I2"}, CircleId{"I3"}});
  CHECK(bbn.bridges == std::set<VertexId>{VertexId{"b"}, VertexId{"c"}});
  const std::set<std::pair<CircleId, VertexId>> want{
      {CircleId{"I1"}, VertexId{"b"}},
      {CircleId{"I2"}, VertexId{"b"}},
      {CircleId{"I2"}, VertexId{"c"}},
      {CircleId{"I3"}, VertexId{"c"}}};
  CHECK(bbn.links == want);
}

TEST_CASE("enumerate_candidates lists links in (circle, vertex) byte order") {
  const auto cands = enumerate_candidates(build_bbn(t2()));
  REQUIRE(cands.size() == 4);
  CHECK(cands[0] == DetachmentPair{VertexId{"b"}, CircleId{"I1"}});
  CHECK(cands[1] == DetachmentPair{VertexId{"b"}, CircleId{"I2"}});
  CHECK(cands[2] == DetachmentPair{VertexId{"c"}, CircleId{"I2"}});
  CHECK(cands[3] == DetachmentPair{VertexId{"c"}, CircleId{"I3"}});
}

TEST_CASE("apply_detachment removes one membership and reports orphans") {
  const auto c = t2();

  SUBCASE("bridge keeps its other circle") {
    const auto out = apply_detachment(c, {VertexId{"b"}, CircleId{"I2"}});
    CHECK(out.orphaned.empty());
    CHECK(out.circles.circles.at(CircleId{"I2"}) ==
          std::set<VertexId>{VertexId{"c"}});
    CHECK(out.circles.universe().size() == 4);
  }

  SUBCASE("sole membership orphans the vertex") {
    const auto out = apply_detachment(c, {VertexId{"a"}, CircleId{"I1"}});
    CHECK(out.orphaned == std::vector<VertexId>{VertexId{"a"}});
    CHECK(out.circles.universe().size() == 3);
    CHECK(out.circles.circles.at(CircleId{"I1"}) ==
          std::set<VertexId>{VertexId{"b"}});
  }

  SUBCASE("detaching a non-member fails") {
    try {
      apply_detachment(c, {VertexId{"a"}, CircleId{"I2"}});
      FAIL("expected NotAMember");
    } catch (const DomainError& e) {
      CHECK(e.code() == Errc::not_a_member);
    }
  }

  SUBCASE("a circle may become empty") {
    auto first = apply_detachment(c, {VertexId{"b"}, CircleId{"I2"}});
    auto second =
        apply_detachment(first.circles, {VertexId{"c"}, CircleId{"I2"}});
    CHECK(second.circles.circles.at(CircleId{"I2"}).empty());
    CHECK(second.circles.circles.size() == 3);
    CHECK(second.orphaned.empty());  // c is still in I3
  }
}

TEST_CASE("apply_detachment_set applies in order and names the failing pair") {
  const auto c = t2();
  const DetachmentSet set{{{VertexId{"b"}, CircleId{"I1"}},
                           {VertexId{"c"}, CircleId{"I3"}}}};
  const auto out = apply_detachment_set(c, set);
  CHECK(out.circles.circles.at(CircleId{"I1"}) ==
        std::set<VertexId>{VertexId{"a"}});
  CHECK(out.circles.circles.at(CircleId{"I2"}) ==
        std::set<VertexId>{VertexId{"b"}, VertexId{"c"}});
  CHECK(out.circles.circles.at(CircleId{"I3"}) ==
        std::set<VertexId>{VertexId{"d"}});
  CHECK(out.orphaned.empty());

  const DetachmentSet dup{{{VertexId{"b"}, CircleId{"I1"}},
                           {VertexId{"b"}, CircleId{"I1"}}}};
  CHECK_THROWS_WITH_AS(apply_detachment_set(c, dup),
                       doctest::Contains("pair 2"), DomainError);
}

TEST_CASE("detaching a bridge updates the BBN link set as a whole") {
  auto c = t2();

  SUBCASE("three memberships lose exactly one link") {
    c.circles[CircleId{"I3"}].insert(VertexId{"b"});  // b in I1, I2, I3
    const auto before = build_bbn(c).links;
    const auto after =
        build_bbn(apply_detachment(c, {VertexId{"b"}, CircleId{"I2"}}).circles)
            .links;
    CHECK(before.size() == after.size() + 1);
    CHECK(after.count({CircleId{"I2"}, VertexId{"b"}}) == 0);
    CHECK(after.count({CircleId{"I1"}, VertexId{"b"}}) == 1);
    CHECK(after.count({CircleId{"I3"}, VertexId{"b"}}) == 1);
  }

  SUBCASE("two memberships demote the bridge, removing both links") {
    const auto before = build_bbn(c).links;
    const auto after =
        build_bbn(apply_detachment(c, {VertexId{"b"}, CircleId{"I2"}}).circles)
            .links;
    CHECK(before.size() == 4);
    CHECK(after.size() == 2);  // both of b's links are gone
    CHECK(after.count({CircleId{"I1"}, VertexId{"b"}}) == 0);
  }

  SUBCASE("detaching a non-bridge leaves the links unchanged") {
    const auto before = build_bbn(c).links;
    const auto after =
        build_bbn(apply_detachment(c, {VertexId{"a"}, CircleId{"I1"}}).circles)
            .links;
    CHECK(before == after);
  }
}

TEST_CASE("bbn_components separates disconnected collections") {
  const auto one = bbn_components(build_bbn(t2()));
  CHECK(one.count == 1);
  CHECK(one.largest_size == 5);  // 3 blocks + 2 bridges

  CircleCollection disjoint;
  disjoint.circles[CircleId{"I1"}] = {VertexId{"a"}, VertexId{"b"}};
  disjoint.circles[CircleId{"I2"}] = {VertexId{"c"}, VertexId{"d"}};
  const auto two = bbn_components(build_bbn(disjoint));
  CHECK(two.count == 2);
  CHECK(two.largest_size == 1);  // isolated blocks, no bridges
}
