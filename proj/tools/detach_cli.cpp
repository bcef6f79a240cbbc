#include <cstdint>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "detach/generate.hpp"
#include "detach/io.hpp"
#include "detach/optimize.hpp"

namespace fs = std::filesystem;
using namespace detach;

namespace {

std::set<std::pair<VertexId, VertexId>> comember_pairs(
    const CircleCollection& circles) {
  std::set<std::pair<VertexId, VertexId>> pairs;
  for (const auto& [id, members] : circles.circles)
    for (const auto& u : members)
      for (const auto& v : members)
        if (u != v) pairs.insert({u, v});
  return pairs;
}

std::pair<double, double> parse_beta_spec(const std::string& spec) {
  const auto comma = spec.find(',');
  if (comma == std::string::npos)
    throw InputFormatError("--beta expects two comma-separated shapes, got " +
                           spec);
  double a = 0, b = 0;
  try {
    std::size_t used = 0;
    a = std::stod(spec.substr(0, comma), &used);
    if (used != comma) throw std::invalid_argument(spec);
    const std::string rest = spec.substr(comma + 1);
    b = std::stod(rest, &used);
    if (used != rest.size()) throw std::invalid_argument(spec);
  } catch (const std::exception&) {
    throw InputFormatError("--beta expects two comma-separated shapes, got " +
                           spec);
  }
  if (!(a > 0 && b > 0))
    throw InputFormatError("--beta shapes must be positive, got " + spec);
  return {a, b};
}

struct WeightFlags {
  std::string csv_path;
  std::optional<double> flat;
  std::string beta_spec;
};

// Weight sources compose: a CSV provides explicit pairs and --flat-weight or
// --beta fills the co-member pairs the CSV leaves out. Without a CSV the
// filler covers every pair.
EdgeWeights resolve_weights(const CircleCollection& circles,
                            const WeightFlags& flags, RngSpec rng) {
  const bool have_csv = !flags.csv_path.empty();
  const bool have_fill = flags.flat.has_value() || !flags.beta_spec.empty();
  if (!have_csv && !have_fill)
    throw InputFormatError(
        "need a weight source: --weights, --flat-weight, or --beta");
  if (flags.flat.has_value() && !flags.beta_spec.empty())
    throw InputFormatError("--flat-weight and --beta are mutually exclusive");

  EdgeWeights weights;
  if (have_csv) weights = load_weights_csv(flags.csv_path);
  if (!have_fill) return weights;

  std::vector<std::pair<VertexId, VertexId>> missing;
  for (const auto& pair : comember_pairs(circles))
    if (!weights.weights.count(pair)) missing.push_back(pair);

  if (flags.flat.has_value()) {
    if (!(*flags.flat >= 0.0 && *flags.flat <= 1.0))
      throw InputFormatError("--flat-weight must be in [0,1]");
    for (const auto& [u, v] : missing) weights.set(u, v, *flags.flat);
  } else {
    const auto [a, b] = parse_beta_spec(flags.beta_spec);
    RngStream stream(rng.fork("weights"));
    for (const auto& [u, v] : missing)
      weights.set(u, v, sample_beta(stream, a, b));
  }
  return weights;
}

SourceDistribution resolve_distribution(const CircleCollection& circles,
                                        const std::string& p_flag) {
  if (p_flag == "uniform") return SourceDistribution::uniform(circles);
  return load_distribution_json(p_flag);
}

MinCutConfig::TerminalSelection parse_terminal_mode(
    const std::string& value, std::optional<std::pair<CircleId, CircleId>>& out) {
  if (value == "largest_influence")
    return MinCutConfig::TerminalSelection::largest_influence;
  if (value == "largest_size")
    return MinCutConfig::TerminalSelection::largest_size;
  const auto comma = value.find(',');
  if (comma == std::string::npos || comma == 0 || comma + 1 == value.size())
    throw InputFormatError(
        "--terminals expects largest_influence, largest_size, or two "
        "comma-separated circle ids");
  out = {CircleId{value.substr(0, comma)}, CircleId{value.substr(comma + 1)}};
  return MinCutConfig::TerminalSelection::explicit_pair;
}

nlohmann::json estimate_json(const EpoiEstimate& est) {
  nlohmann::json j = est;
  return j;
}

void emit(const nlohmann::json& doc, const std::string& out_path) {
  const std::string text = doc.dump(2) + "\n";
  std::cout << text;
  if (!out_path.empty()) write_text_file(out_path, text);
}

int run_generate(std::uint64_t n, bool profile, double link_ratio,
                 const GeneratorParams& explicit_params, bool have_gamma,
                 std::uint64_t seed, const std::string& out_dir) {
  if (out_dir.empty())
    throw InputFormatError("generate requires --out <directory>");
  GeneratorParams params;
  if (profile) {
    params = paper_profile(n, seed, link_ratio);
  } else {
    if (!have_gamma)
      throw InputFormatError("generate requires --gamma unless --paper-profile");
    params = explicit_params;
    params.n_vertices = n;
    params.seed = seed;
  }

  const auto targets = derive_targets(params);
  const auto circles = generate_circles(params);

  EdgeWeights flat;
  for (const auto& pair : comember_pairs(circles))
    flat.set(pair.first, pair.second, 0.5);
  const auto skeleton = induce_network(circles, flat);
  const auto weights = sample_weights(skeleton, params.weight_a,
                                      params.weight_b,
                                      RngSpec{params.seed, 0}.fork("weights"));

  nlohmann::json stats = stats_to_json(graph_stats(circles, skeleton));
  stats["params"] = {{"n_vertices", params.n_vertices}, {"alpha", params.alpha},
                     {"beta", params.beta},             {"gamma", params.gamma},
                     {"mix", params.mix},               {"weight_a", params.weight_a},
                     {"weight_b", params.weight_b},     {"seed", params.seed}};
  stats["targets"] = {{"circles", targets.circles},
                      {"bridges", targets.bridges},
                      {"links", targets.links}};
  if (profile) stats["link_ratio"] = link_ratio;

  const fs::path dir(out_dir);
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec) throw IoError("cannot create " + dir.string() + ": " + ec.message());
  save_circles_json(circles, dir / "circles.json");
  save_weights_csv(weights, dir / "weights.csv");
  write_text_file(dir / "stats.json", stats.dump(2) + "\n");

  std::cout << "generated n=" << params.n_vertices << " circles="
            << targets.circles << " bridges=" << targets.bridges
            << " links=" << targets.links << " -> " << dir.string() << "\n";
  return 0;
}

int run_stats(const std::string& circles_path, const std::string& weights_path,
              const std::string& out_path) {
  const auto circles = load_circles_json(circles_path);
  WeightFlags flags;
  flags.csv_path = weights_path;
  if (weights_path.empty()) flags.flat = 0.5;  // degrees ignore the values
  const auto weights = resolve_weights(circles, flags, RngSpec{0, 0});
  const auto net = induce_network(circles, weights);
  emit(stats_to_json(graph_stats(circles, net)), out_path);
  return 0;
}

int run_epoi(const std::string& circles_path, const WeightFlags& wflags,
             const std::string& p_flag, std::uint64_t trials, bool exact,
             std::size_t edge_cap, std::uint64_t seed, int threads,
             const std::string& out_path) {
  const auto circles = load_circles_json(circles_path);
  const RngSpec rng{seed, 0};
  const auto weights = resolve_weights(circles, wflags, rng);
  const auto p = resolve_distribution(circles, p_flag);
  const EpoiEstimate est =
      exact ? exact_epoi(circles, weights, p, edge_cap)
            : estimate_epoi(circles, weights, p, trials, rng.fork("epoi"),
                            threads);
  emit(estimate_json(est), out_path);
  return 0;
}

int run_optimize(const std::string& circles_path, const WeightFlags& wflags,
                 const std::string& p_flag, const std::string& method_flag,
                 std::size_t m, std::uint64_t trials, bool exact,
                 std::size_t edge_cap, std::size_t combo_cap,
                 const std::string& terminals_flag,
                 const std::string& capacity_flag,
                 std::uint64_t terminal_trials, std::uint64_t seed,
                 int threads, const std::string& out_path) {
  const auto circles = load_circles_json(circles_path);
  const RngSpec rng{seed, 0};
  const auto weights = resolve_weights(circles, wflags, rng);
  const auto p = resolve_distribution(circles, p_flag);

  OptimizationResult result;
  if (method_flag == "greedy") {
    const Evaluator eval =
        exact ? Evaluator::exact(edge_cap) : Evaluator::monte_carlo(trials);
    result = greedy_detach(circles, weights, p, m, eval, rng.fork("optimize"),
                           threads);
  } else if (method_flag == "exhaustive") {
    result = exhaustive_detach(circles, weights, p, m, combo_cap, edge_cap);
  } else if (method_flag == "mincut") {
    MinCutConfig config;
    config.terminal_selection =
        parse_terminal_mode(terminals_flag, config.explicit_terminals);
    if (capacity_flag == "weighted")
      config.capacity_policy = MinCutConfig::CapacityPolicy::weighted;
    else if (capacity_flag != "unit")
      throw InputFormatError("--capacity must be unit or weighted");
    config.terminal_trials = terminal_trials;
    result = min_cut_detach(circles, weights, p, config, trials,
                            rng.fork("optimize"), threads);
  } else {
    throw InputFormatError("--method must be greedy, mincut, or exhaustive");
  }

  nlohmann::json doc;
  doc["method"] = method_name(result.method);
  doc["detachments"] = result.detachments;
  nlohmann::json orphans = nlohmann::json::array();
  for (const auto& v : result.orphaned) orphans.push_back(v.value);
  doc["orphaned"] = std::move(orphans);
  nlohmann::json trace = nlohmann::json::array();
  for (const auto& est : result.epoi_trace) trace.push_back(estimate_json(est));
  doc["epoi_trace"] = std::move(trace);
  doc["final_circle_count"] = result.final_circles.circles.size();
  if (result.terminals)
    doc["terminals"] = {result.terminals->first.value,
                        result.terminals->second.value};
  doc["wall_time_ms"] = result.wall_time_ms;

  std::cout << doc.dump(2) << "\n";
  if (!out_path.empty()) save_circles_json(result.final_circles, out_path);
  return 0;
}

int run_bench(const std::vector<std::uint64_t>& sizes, std::uint64_t replicates,
              std::uint64_t trials, std::uint64_t greedy_trials,
              double link_ratio, const std::string& terminals_flag,
              const std::string& capacity_flag, std::uint64_t terminal_trials,
              std::uint64_t seed, int threads, const std::string& out_path) {
  std::ofstream file;
  if (!out_path.empty()) {
    file.open(out_path, std::ios::binary | std::ios::trunc);
    if (!file) throw IoError("cannot open " + out_path + " for writing");
  }
  std::ostream& out = out_path.empty() ? std::cout : file;
  auto put = [&](const std::string& line) {
    out << line << '\n';
    out.flush();
    if (!out) throw IoError("write failed on bench output");
  };

  CompareConfig config;
  config.mc_trials = trials;
  config.greedy_trials = greedy_trials;
  config.mincut.terminal_selection =
      parse_terminal_mode(terminals_flag, config.mincut.explicit_terminals);
  if (config.mincut.terminal_selection ==
      MinCutConfig::TerminalSelection::explicit_pair)
    throw InputFormatError("bench terminals must be a selection rule, not ids");
  if (capacity_flag == "weighted")
    config.mincut.capacity_policy = MinCutConfig::CapacityPolicy::weighted;
  else if (capacity_flag != "unit")
    throw InputFormatError("--capacity must be unit or weighted");
  config.mincut.terminal_trials = terminal_trials;

  put(bench_csv_header());
  put("# greedy m = min-cut size per row; epoi_stderr = max standard error of"
      " base/cut/greedy estimates");
  {
    std::ostringstream cfg;
    cfg << "# config: seed=" << seed << " link_ratio=" << link_ratio
        << " trials=" << trials << " greedy_trials=" << greedy_trials
        << " terminals=" << terminals_flag << " capacity=" << capacity_flag
        << " terminal_trials=" << terminal_trials;
    put(cfg.str());
  }

  bool any_failed = false;
  for (const auto n : sizes) {
    for (std::uint64_t rep = 0; rep < replicates; ++rep) {
      const std::uint64_t row_seed =
          mix64(seed ^ mix64(n) ^ mix64(0x9e3779b97f4a7c15ULL + rep));
      try {
        const auto params = paper_profile(n, row_seed, link_ratio);
        const auto circles = generate_circles(params);
        EdgeWeights flat;
        for (const auto& pair : comember_pairs(circles))
          flat.set(pair.first, pair.second, 0.5);
        const auto skeleton = induce_network(circles, flat);
        const auto weights =
            sample_weights(skeleton, params.weight_a, params.weight_b,
                           RngSpec{row_seed, 0}.fork("weights"));
        const auto p = SourceDistribution::uniform(circles);
        const auto cmp = compare_methods(circles, weights, p, config,
                                         RngSpec{row_seed, 1}, threads);
        BenchRow row;
        row.n = n;
        row.mincut = cmp.mincut_size;
        row.epoi_cut = cmp.cut.value;
        row.epoi_greedy = cmp.greedy.value;
        row.epoi_stderr = std::max({cmp.base.std_error, cmp.cut.std_error,
                                    cmp.greedy.std_error});
        row.epoi_base = cmp.base.value;
        row.seed = row_seed;
        row.ms_cut = cmp.ms_cut;
        row.ms_greedy = cmp.ms_greedy;
        put(bench_row_to_csv(row));
      } catch (const DomainError& e) {
        any_failed = true;
        put("# n=" + std::to_string(n) + " rep=" + std::to_string(rep) +
            " seed=" + std::to_string(row_seed) + " failed: " + e.what());
      }
    }
  }
  return any_failed ? 3 : 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"circle detachment toolkit: generate circle networks, estimate"
               " outside influence, and search for detachments that cut it"};
  app.require_subcommand(1);

  std::uint64_t seed = 0;
  int threads = 1;
  std::string out_path;
  app.add_option("--seed", seed, "master RNG seed")->capture_default_str();
  app.add_option("--threads", threads,
                 "simulation worker threads (0 = hardware)")
      ->capture_default_str();
  app.add_option("--out", out_path, "output file or directory");

  // generate
  auto* gen = app.add_subcommand("generate", "generate a circle collection");
  gen->fallthrough();
  std::uint64_t gen_n = 0;
  bool gen_profile = false;
  double gen_link_ratio = kPaperLinkRatio;
  GeneratorParams gen_params;
  auto* gen_n_opt = gen->add_option("--n", gen_n, "vertex count")->required();
  (void)gen_n_opt;
  gen->add_flag("--paper-profile", gen_profile,
                "use the calibrated empirical-profile ratios");
  gen->add_option("--link-ratio", gen_link_ratio,
                  "target links per bridge under --paper-profile")
      ->capture_default_str();
  auto* gen_alpha = gen->add_option("--alpha", gen_params.alpha,
                                    "vertices per circle ratio");
  auto* gen_beta = gen->add_option("--beta", gen_params.beta,
                                   "vertices per bridge ratio");
  auto* gen_gamma =
      gen->add_option("--gamma", gen_params.gamma, "vertices per link ratio");
  auto* gen_mix = gen->add_option(
      "--mix", gen_params.mix, "preferential-assignment mixing coefficient");
  gen->add_option("--weight-a", gen_params.weight_a, "Beta shape a")
      ->capture_default_str();
  gen->add_option("--weight-b", gen_params.weight_b, "Beta shape b")
      ->capture_default_str();
  for (auto* opt : {gen_alpha, gen_beta, gen_gamma, gen_mix})
    opt->excludes("--paper-profile");

  // stats
  auto* stats = app.add_subcommand("stats", "report structural statistics");
  stats->fallthrough();
  std::string stats_circles;
  std::string stats_weights;
  stats->add_option("--circles", stats_circles, "circle JSON file")->required();
  stats->add_option("--weights", stats_weights, "weight CSV file");

  // shared epoi/optimize inputs
  std::string in_circles;
  WeightFlags wflags;
  std::string p_flag = "uniform";
  std::uint64_t trials = 10000;
  bool exact = false;
  std::size_t edge_cap = kDefaultExactEdgeCap;

  auto add_inputs = [&](CLI::App* sub) {
    sub->fallthrough();
    sub->add_option("--circles", in_circles, "circle JSON file")->required();
    sub->add_option("--weights", wflags.csv_path, "weight CSV file");
    sub->add_option("--flat-weight", wflags.flat,
                    "uniform weight for pairs the CSV does not cover");
    sub->add_option("--beta", wflags.beta_spec,
                    "a,b Beta shapes for pairs the CSV does not cover");
    sub->add_option("--p", p_flag,
                    "seed-circle distribution: uniform or a JSON file")
        ->capture_default_str();
    sub->add_option("--trials", trials, "Monte Carlo trials per circle")
        ->capture_default_str();
    sub->add_flag("--exact", exact, "exhaustive live-edge enumeration");
    sub->add_option("--edge-cap", edge_cap,
                    "largest edge count --exact accepts")
        ->capture_default_str();
  };

  auto* epoi = app.add_subcommand("epoi", "estimate outside influence");
  add_inputs(epoi);

  auto* opt = app.add_subcommand("optimize", "search for a detachment set");
  add_inputs(opt);
  std::string method_flag = "greedy";
  std::size_t opt_m = 1;
  std::size_t combo_cap = 5000;
  std::string terminals_flag = "largest_influence";
  std::string capacity_flag = "unit";
  std::uint64_t terminal_trials = 1000;
  opt->add_option("--method", method_flag, "greedy, mincut, or exhaustive")
      ->capture_default_str();
  opt->add_option("--m", opt_m, "detachments to commit (greedy, exhaustive)")
      ->capture_default_str();
  opt->add_option("--combo-cap", combo_cap,
                  "largest m-subset count exhaustive accepts")
      ->capture_default_str();
  opt->add_option("--terminals", terminals_flag,
                  "largest_influence, largest_size, or two circle ids")
      ->capture_default_str();
  opt->add_option("--capacity", capacity_flag, "unit or weighted link capacity")
      ->capture_default_str();
  opt->add_option("--terminal-trials", terminal_trials,
                  "per-circle trials when ranking terminals by influence")
      ->capture_default_str();

  // bench
  auto* bench = app.add_subcommand(
      "bench", "generate, optimize, and tabulate one row per instance");
  bench->fallthrough();
  std::vector<std::uint64_t> bench_sizes;
  std::uint64_t replicates = 1;
  std::uint64_t bench_trials = 10000;
  std::uint64_t greedy_trials = 500;
  double bench_link_ratio = kPaperLinkRatio;
  std::string bench_terminals = "largest_influence";
  std::string bench_capacity = "unit";
  std::uint64_t bench_terminal_trials = 1000;
  bench->add_option("--sizes", bench_sizes, "vertex counts, comma separated")
      ->delimiter(',')
      ->required();
  bench->add_option("--replicates", replicates, "instances per size")
      ->capture_default_str();
  bench->add_option("--trials", bench_trials, "Monte Carlo trials per circle")
      ->capture_default_str();
  bench->add_option("--greedy-trials", greedy_trials,
                    "per-candidate trials inside greedy")
      ->capture_default_str();
  bench->add_option("--link-ratio", bench_link_ratio,
                    "target links per bridge")
      ->capture_default_str();
  bench->add_option("--terminals", bench_terminals,
                    "largest_influence or largest_size")
      ->capture_default_str();
  bench->add_option("--capacity", bench_capacity,
                    "unit or weighted link capacity")
      ->capture_default_str();
  bench->add_option("--terminal-trials", bench_terminal_trials,
                    "per-circle trials when ranking terminals by influence")
      ->capture_default_str();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  try {
    if (gen->parsed())
      return run_generate(gen_n, gen_profile, gen_link_ratio, gen_params,
                          gen_gamma->count() > 0, seed, out_path);
    if (stats->parsed()) return run_stats(stats_circles, stats_weights, out_path);
    if (epoi->parsed())
      return run_epoi(in_circles, wflags, p_flag, trials, exact, edge_cap,
                      seed, threads, out_path);
    if (opt->parsed())
      return run_optimize(in_circles, wflags, p_flag, method_flag, opt_m,
                          trials, exact, edge_cap, combo_cap, terminals_flag,
                          capacity_flag, terminal_trials, seed, threads,
                          out_path);
    if (bench->parsed())
      return run_bench(bench_sizes, replicates, bench_trials, greedy_trials,
                       bench_link_ratio, bench_terminals, bench_capacity,
                       bench_terminal_trials, seed, threads, out_path);
  } catch (const InputFormatError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const DomainError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 3;
  } catch (const IoError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 4;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 2;
}
