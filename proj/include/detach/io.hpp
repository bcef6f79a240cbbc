#pragma once

#include <cstdint>
#include <filesystem>
#include <string>

#include <json.hpp>

#include "detach/cascade.hpp"
#include "detach/generate.hpp"
#include "detach/optimize.hpp"

namespace detach {

// Circle file: {"circles": {"<circle-id>": ["<vertex-id>", ...], ...}}.
// Keys and arrays are emitted in byte order, so saves are byte-stable.
CircleCollection parse_circles_json(const std::string& text);
std::string circles_to_json(const CircleCollection& circles);
CircleCollection load_circles_json(const std::filesystem::path& path);
void save_circles_json(const CircleCollection& circles,
                       const std::filesystem::path& path);

// Weight file: CSV with header "u,v,w", one row per ordered pair, fixed
// 6-decimal weights, rows in (u,v) byte order.
EdgeWeights parse_weights_csv(const std::string& text);
std::string weights_to_csv(const EdgeWeights& weights);
EdgeWeights load_weights_csv(const std::filesystem::path& path);
void save_weights_csv(const EdgeWeights& weights,
                      const std::filesystem::path& path);

// Seed distribution file: {"<circle-id>": probability, ...}.
SourceDistribution parse_distribution_json(const std::string& text);
SourceDistribution load_distribution_json(const std::filesystem::path& path);

nlohmann::json stats_to_json(const StatsReport& report);
StatsReport parse_stats_json(const nlohmann::json& j);

// nlohmann ADL hooks.
void to_json(nlohmann::json& j, const EpoiEstimate& e);
void to_json(nlohmann::json& j, const DetachmentPair& p);
void to_json(nlohmann::json& j, const DetachmentSet& s);

struct BenchRow {
  std::uint64_t n = 0;
  std::size_t mincut = 0;
  double epoi_cut = 0;
  double epoi_greedy = 0;
  double epoi_stderr = 0;
  double epoi_base = 0;
  std::uint64_t seed = 0;
  double ms_cut = 0;
  double ms_greedy = 0;

  friend bool operator==(const BenchRow&, const BenchRow&) = default;
};

std::string bench_csv_header();
std::string bench_row_to_csv(const BenchRow& row);
// Skips '#' comment lines; validates the pinned header.
std::vector<BenchRow> parse_bench_csv(const std::string& text);

std::string read_text_file(const std::filesystem::path& path);
void write_text_file(const std::filesystem::path& path, const std::string& text);

}  // namespace detach
