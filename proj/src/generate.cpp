#include "detach/generate.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <sstream>
#include <stdexcept>

namespace detach {

namespace {

std::size_t round_ratio(double n, double ratio) {
  return static_cast<std::size_t>(std::llround(n / ratio));
}

std::string padded(const char* prefix, std::size_t index, std::size_t width) {
  std::ostringstream out;
  out << prefix;
  std::string digits = std::to_string(index + 1);
  for (std::size_t i = digits.size(); i < width; ++i) out << '0';
  out << digits;
  return out.str();
}

std::size_t digit_width(std::size_t max_value) {
  return std::to_string(max_value).size();
}

// Mixed circle choice: (1-mix)/k + mix * size_i / total. `total` is the
// current number of memberships, so the weights always sum to 1.
std::size_t draw_mixed(const std::vector<std::size_t>& sizes, std::size_t total,
                       double mix, RngStream& rng) {
  const double k = static_cast<double>(sizes.size());
  const double r = rng.next_unit();
  double acc = 0;
  for (std::size_t i = 0; i + 1 < sizes.size(); ++i) {
    acc += (1.0 - mix) / k +
           mix * static_cast<double>(sizes[i]) / static_cast<double>(total);
    if (r < acc) return i;
  }
  return sizes.size() - 1;
}

}  // namespace

DerivedTargets derive_targets(const GeneratorParams& params) {
  const double n = static_cast<double>(params.n_vertices);
  auto fail = [&](const std::string& what) {
    throw DomainError(Errc::infeasible_targets, what);
  };
  if (params.n_vertices == 0) fail("n_vertices must be positive");
  if (!(params.alpha > 1.0)) fail("alpha must exceed 1");
  if (!(params.beta > 1.0)) fail("beta must exceed 1");
  if (!(params.gamma > 0.0)) fail("gamma must be positive");
  if (!(params.mix >= 0.0 && params.mix <= 1.0)) fail("mix must be in [0,1]");
  if (!(params.weight_a > 0.0 && params.weight_b > 0.0))
    fail("weight shape parameters must be positive");

  DerivedTargets t;
  t.circles = round_ratio(n, params.alpha);
  t.bridges = round_ratio(n, params.beta);
  t.links = round_ratio(n, params.gamma);

  std::ostringstream detail;
  detail << "n=" << params.n_vertices << " circles=" << t.circles
         << " bridges=" << t.bridges << " links=" << t.links;
  if (t.circles < 2) fail("need at least 2 circles; " + detail.str());
  if (t.circles > params.n_vertices)
    fail("more circles than vertices; " + detail.str());
  if (t.bridges < t.circles - 1)
    fail("bridge target below the circles-1 needed for connectivity; " +
         detail.str());
  if (t.bridges > params.n_vertices)
    fail("more bridges than vertices; " + detail.str());
  if (t.links < 2 * t.bridges)
    fail("link target below two memberships per bridge; " + detail.str());
  if (t.links > t.circles * t.bridges)
    fail("link target exceeds circles*bridges; " + detail.str());
  return t;
}

GeneratorParams paper_profile(std::uint64_t n, std::uint64_t seed,
                              double link_ratio) {
  GeneratorParams params;
  params.n_vertices = n;
  params.alpha = kPaperAlpha;
  params.beta = kPaperBeta;
  params.mix = kPaperMix;
  params.weight_a = kPaperWeightA;
  params.weight_b = kPaperWeightB;
  params.seed = seed;
  // choose gamma so the link target rounds to link_ratio * bridge target
  const double bridges =
      static_cast<double>(round_ratio(static_cast<double>(n), kPaperBeta));
  params.gamma = static_cast<double>(n) / std::round(link_ratio * bridges);
  return params;
}

namespace detail {

std::vector<std::vector<std::uint32_t>> stage1_assign(std::size_t n,
                                                      std::size_t k, double mix,
                                                      RngStream& rng) {
  std::vector<std::vector<std::uint32_t>> circles(k);
  std::vector<std::size_t> sizes(k, 1);
  for (std::size_t i = 0; i < k; ++i)
    circles[i].push_back(static_cast<std::uint32_t>(i));
  std::size_t total = k;
  for (std::size_t v = k; v < n; ++v) {
    const std::size_t c = draw_mixed(sizes, total, mix, rng);
    circles[c].push_back(static_cast<std::uint32_t>(v));
    ++sizes[c];
    ++total;
  }
  return circles;
}

}  // namespace detail

CircleCollection generate_circles(const GeneratorParams& params) {
  const DerivedTargets targets = derive_targets(params);
  const std::size_t n = params.n_vertices;
  const std::size_t k = targets.circles;
  RngStream rng(RngSpec{params.seed, 0});

  // memberships[v] = sorted circle indices; member_lists[c] mirrors it
  auto member_lists = detail::stage1_assign(n, k, params.mix, rng);
  std::vector<std::vector<std::uint32_t>> memberships(n);
  std::vector<std::size_t> sizes(k);
  std::size_t total_memberships = n;
  for (std::size_t c = 0; c < k; ++c) {
    sizes[c] = member_lists[c].size();
    for (std::uint32_t v : member_lists[c])
      memberships[v].push_back(static_cast<std::uint32_t>(c));
  }

  auto add_membership = [&](std::uint32_t v, std::uint32_t c) {
    member_lists[c].push_back(v);
    memberships[v].push_back(c);
    ++sizes[c];
    ++total_memberships;
  };

  // stage 2: connect the bridge-block view. A uniformly random vertex roots
  // the connected set; each step picks a uniform vertex all of whose circles
  // are unconnected and adds it to a uniform connected circle, turning it
  // into a bridge and connecting its circle.
  std::vector<char> connected(k, 0);
  std::vector<std::uint32_t> connected_circles;
  std::size_t connected_count = 1;
  {
    const std::uint32_t root_vertex =
        static_cast<std::uint32_t>(rng.next_below(n));
    const std::uint32_t root = memberships[root_vertex][0];
    connected[root] = 1;
    connected_circles.push_back(root);
  }
  std::size_t bridge_count = 0;
  while (connected_count < k) {
    std::vector<std::uint32_t> pool;
    for (std::uint32_t v = 0; v < n; ++v) {
      bool all_unconnected = true;
      for (std::uint32_t c : memberships[v])
        if (connected[c]) all_unconnected = false;
      if (all_unconnected) pool.push_back(v);
    }
    const std::uint32_t v =
        pool[static_cast<std::size_t>(rng.next_below(pool.size()))];
    const std::uint32_t home = memberships[v][0];
    const std::uint32_t target = connected_circles[static_cast<std::size_t>(
        rng.next_below(connected_circles.size()))];
    add_membership(v, target);
    ++bridge_count;
    connected[home] = 1;
    connected_circles.push_back(home);
    ++connected_count;
  }

  // stage 3: promote uniform non-bridge vertices into uniform other circles
  // until the bridge count is met
  while (bridge_count < targets.bridges) {
    std::vector<std::uint32_t> pool;
    for (std::uint32_t v = 0; v < n; ++v)
      if (memberships[v].size() == 1) pool.push_back(v);
    const std::uint32_t v =
        pool[static_cast<std::size_t>(rng.next_below(pool.size()))];
    const std::uint32_t home = memberships[v][0];
    std::uint32_t c =
        static_cast<std::uint32_t>(rng.next_below(k - 1));
    if (c >= home) ++c;
    add_membership(v, c);
    ++bridge_count;
  }

  // stage 4: add memberships to existing bridges until the link count is
  // met. The circle comes from the stage-1 mixed distribution; draws landing
  // on a circle the bridge already belongs to are redrawn up to 1000 times,
  // then the choice falls back to uniform over the eligible circles.
  std::size_t links = 2 * targets.bridges;
  while (links < targets.links) {
    std::vector<std::uint32_t> pool;
    for (std::uint32_t v = 0; v < n; ++v)
      if (memberships[v].size() >= 2 && memberships[v].size() < k)
        pool.push_back(v);
    const std::uint32_t v =
        pool[static_cast<std::size_t>(rng.next_below(pool.size()))];
    const auto& mine = memberships[v];
    std::uint32_t chosen = k;
    for (int attempt = 0; attempt < 1000; ++attempt) {
      const std::uint32_t c = static_cast<std::uint32_t>(
          draw_mixed(sizes, total_memberships, params.mix, rng));
      if (std::find(mine.begin(), mine.end(), c) == mine.end()) {
        chosen = c;
        break;
      }
    }
    if (chosen == k) {
      std::vector<std::uint32_t> eligible;
      for (std::uint32_t c = 0; c < k; ++c)
        if (std::find(mine.begin(), mine.end(), c) == mine.end())
          eligible.push_back(c);
      chosen = eligible[static_cast<std::size_t>(rng.next_below(eligible.size()))];
    }
    add_membership(v, chosen);
    ++links;
  }

  const std::size_t vw = digit_width(n);
  const std::size_t cw = digit_width(k);
  CircleCollection out;
  for (std::size_t c = 0; c < k; ++c) {
    auto& members = out.circles[CircleId{padded("c", c, cw)}];
    for (std::uint32_t v : member_lists[c])
      members.insert(VertexId{padded("v", v, vw)});
  }

  // structural guarantees: exact counts and a connected bridge-block view
  const auto bbn = build_bbn(out);
  if (out.circles.size() != k || bbn.bridges.size() != targets.bridges ||
      bbn.links.size() != targets.links ||
      bbn_components(bbn).count != 1)
    throw std::logic_error("generated collection violates its targets");
  return out;
}

double sample_beta(RngStream& rng, double a, double b) {
  std::gamma_distribution<double> ga(a, 1.0);
  std::gamma_distribution<double> gb(b, 1.0);
  const double x = ga(rng);
  const double y = gb(rng);
  return (x + y > 0) ? x / (x + y) : 0.0;
}

EdgeWeights sample_weights(const InducedNetwork& net, double weight_a,
                           double weight_b, RngSpec rng) {
  EdgeWeights out;
  RngStream stream(rng);
  for (const auto& [u, v] : net.edges)
    out.set(u, v, sample_beta(stream, weight_a, weight_b));
  return out;
}

StatsReport graph_stats(const CircleCollection& circles,
                        const InducedNetwork& net) {
  StatsReport report;
  report.n_vertices = net.vertices.size();
  report.n_circles = circles.circles.size();

  const auto bbn = build_bbn(circles);
  report.n_bridges = bbn.bridges.size();
  report.n_links = bbn.links.size();

  std::map<std::size_t, std::size_t> circle_sizes;
  for (const auto& [id, members] : circles.circles) ++circle_sizes[members.size()];
  for (const auto& [size, count] : circle_sizes)
    report.circle_size_histogram.push_back({size, count});

  std::map<VertexId, std::size_t> degree;
  for (const auto& v : net.vertices) degree[v] = 0;
  for (const auto& [u, v] : net.edges) ++degree[u];  // distinct out-neighbours
  std::map<std::size_t, std::size_t> degrees;
  for (const auto& [v, d] : degree) ++degrees[d];
  for (const auto& [d, count] : degrees)
    report.vertex_degree_histogram.push_back({d, count});

  std::map<std::size_t, std::size_t> bridge_memberships;
  for (const auto& v : bbn.bridges) ++bridge_memberships[circles.membership_count(v)];
  for (const auto& [mships, count] : bridge_memberships)
    report.bridge_membership_histogram.push_back({mships, count});

  const auto comps = bbn_components(bbn);
  report.bbn_component_count = comps.count;
  const std::size_t bbn_nodes = bbn.blocks.size() + bbn.bridges.size();
  report.largest_component_fraction =
      bbn_nodes ? static_cast<double>(comps.largest_size) /
                      static_cast<double>(bbn_nodes)
                : 0.0;
  return report;
}

}  // namespace detach
