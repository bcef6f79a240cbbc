#pragma once

#include <cstdint>
#include <vector>

#include "detach/cascade.hpp"

namespace detach {

// Empirical-profile constants: 967 vertices spread over 106 circles with 140
// multi-circle vertices. The link ratio is a calibration constant; it is
// surfaced as a CLI flag and recorded in generated stats output rather than
// buried in the generator.
inline constexpr double kPaperAlpha = 967.0 / 106.0;
inline constexpr double kPaperBeta = 967.0 / 140.0;
inline constexpr double kPaperMix = 0.3;
inline constexpr double kPaperWeightA = 20.0;
inline constexpr double kPaperWeightB = 80.0;
inline constexpr double kPaperLinkRatio = 2.35;  // target_links / target_bridges

struct GeneratorParams {
  std::uint64_t n_vertices = 0;
  double alpha = kPaperAlpha;  // n / circle count
  double beta = kPaperBeta;    // n / bridge count
  double gamma = 0;            // n / link count
  double mix = kPaperMix;      // 0 = uniform assignment, 1 = fully preferential
  double weight_a = kPaperWeightA;
  double weight_b = kPaperWeightB;
  std::uint64_t seed = 0;
};

struct DerivedTargets {
  std::size_t circles = 0;
  std::size_t bridges = 0;
  std::size_t links = 0;
};

// Rounds the ratio targets and validates feasibility before any work.
DerivedTargets derive_targets(const GeneratorParams& params);

GeneratorParams paper_profile(std::uint64_t n, std::uint64_t seed,
                              double link_ratio = kPaperLinkRatio);

// Four-stage construction: seed circles, force BBN connectivity, promote
// bridges to target, add links to target. Output counts hit the derived
// targets exactly and the BBN is connected.
CircleCollection generate_circles(const GeneratorParams& params);

// Independent Beta(a,b) weight per directed edge, drawn in sorted edge order.
EdgeWeights sample_weights(const InducedNetwork& net, double weight_a,
                           double weight_b, RngSpec rng);

double sample_beta(RngStream& rng, double a, double b);

struct StatsReport {
  std::size_t n_vertices = 0;
  std::size_t n_circles = 0;
  std::size_t n_bridges = 0;
  std::size_t n_links = 0;
  // (value, count) pairs sorted by value ascending.
  std::vector<std::pair<std::size_t, std::size_t>> circle_size_histogram;
  std::vector<std::pair<std::size_t, std::size_t>> vertex_degree_histogram;
  std::vector<std::pair<std::size_t, std::size_t>> bridge_membership_histogram;
  std::size_t bbn_component_count = 0;
  double largest_component_fraction = 0;

  friend bool operator==(const StatsReport&, const StatsReport&) = default;
};

StatsReport graph_stats(const CircleCollection& circles,
                        const InducedNetwork& net);

namespace detail {
// Stage-1 assignment: circle i gets vertex i as its seed, then every further
// vertex picks a circle with probability (1-mix)/k + mix*size/assigned.
// Exposed so the distribution can be tested directly.
std::vector<std::vector<std::uint32_t>> stage1_assign(std::size_t n,
                                                      std::size_t k, double mix,
                                                      RngStream& rng);
}  // namespace detail

}  // namespace detach
