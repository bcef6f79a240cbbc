// Acceptance checklist runner: one line per criterion, exit 0 only if every
// testable criterion passes. Usage: acceptance <path-to-cli>

#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "detach/generate.hpp"
#include "detach/io.hpp"
#include "detach/optimize.hpp"
#include "test_support.hpp"

namespace fs = std::filesystem;
using namespace detach;
using testsupport::flat_weights;
using testsupport::make_small_instance;
using testsupport::oracle_epoi;
using testsupport::t2;

namespace {

std::string g_cli;
int g_failures = 0;

class Criterion {
 public:
  explicit Criterion(int number, const std::string& name)
      : number_(number), name_(name), start_(std::chrono::steady_clock::now()) {}

  void result(bool pass, const std::string& detail) {
    const auto elapsed =
        std::chrono::duration_cast<std::chrono::seconds>(
            std::chrono::steady_clock::now() - start_)
            .count();
    std::cout << (pass ? "PASS" : "FAIL") << "  criterion " << number_ << "  "
              << std::left << std::setw(24) << name_ << "  " << detail << "  ["
              << elapsed << "s]" << std::endl;
    if (!pass) ++g_failures;
  }

 private:
  int number_;
  std::string name_;
  std::chrono::steady_clock::time_point start_;
};

EdgeWeights profile_weights(const CircleCollection& circles,
                            const GeneratorParams& params) {
  const auto skeleton = induce_network(circles, flat_weights(circles, 0.5));
  return sample_weights(skeleton, params.weight_a, params.weight_b,
                        RngSpec{params.seed, 0}.fork("weights"));
}

void criterion_1_oracle_equivalence() {
  Criterion crit(1, "oracle equivalence");
  int within = 0;
  for (std::uint64_t seed = 1; seed <= 100; ++seed) {
    const auto inst = make_small_instance(seed);
    const auto p = SourceDistribution::uniform(inst.circles);
    const auto mc =
        estimate_epoi(inst.circles, inst.weights, p, 10000, RngSpec{seed, 100});
    const double exact = oracle_epoi(inst.circles, inst.weights);
    if (std::fabs(mc.value - exact) <= 4 * mc.std_error + 1e-12) ++within;
  }
  std::ostringstream detail;
  detail << within << "/100 estimates within 4 standard errors (need >= 95)";
  crit.result(within >= 95, detail.str());
}

void criterion_2_fixture_exactness() {
  Criterion crit(2, "fixture exactness");
  const auto chain = t2();
  const auto w = flat_weights(chain, 0.5);
  const auto p = SourceDistribution::uniform(chain);

  const double base = exact_epoi(chain, w, p).value;

  const auto after_b_i1 =
      apply_detachment(chain, {VertexId{"b"}, CircleId{"I1"}}).circles;
  const double detached_b_i1 =
      exact_epoi(after_b_i1, w, SourceDistribution::uniform(after_b_i1)).value;

  const auto after_b_i2 =
      apply_detachment(chain, {VertexId{"b"}, CircleId{"I2"}}).circles;
  const double detached_b_i2 =
      exact_epoi(after_b_i2, w, SourceDistribution::uniform(after_b_i2)).value;

  const bool pass = std::fabs(base - 5.0 / 12.0) <= 1e-9 &&
                    std::fabs(detached_b_i1 - 1.0 / 6.0) <= 1e-9 &&
                    std::fabs(detached_b_i2 - 1.0 / 18.0) <= 1e-9;
  std::ostringstream detail;
  detail << std::setprecision(10) << "base " << base << ", det(b,I1) "
         << detached_b_i1 << ", det(b,I2) " << detached_b_i2
         << " vs 0.4166667, 0.1666667, 0.0555556 (enumeration oracle)";
  crit.result(pass, detail.str());
}

void criterion_3_baseline_band() {
  Criterion crit(3, "baseline band");
  const std::vector<std::uint64_t> sizes{280, 320, 680, 1000};
  int in_band = 0;
  int runs = 0;
  double lo = 1, hi = 0;
  for (const auto n : sizes) {
    for (std::uint64_t seed = 501; seed <= 505; ++seed) {
      const auto params = paper_profile(n, seed);
      const auto circles = generate_circles(params);
      const auto weights = profile_weights(circles, params);
      const auto p = SourceDistribution::uniform(circles);
      const auto est =
          estimate_epoi(circles, weights, p, 10000, RngSpec{seed, 1});
      ++runs;
      lo = std::min(lo, est.value);
      hi = std::max(hi, est.value);
      if (est.value >= 0.74 && est.value <= 0.83) ++in_band;
    }
  }
  std::ostringstream detail;
  detail << in_band << "/" << runs << " baselines in [0.74,0.83] (need >= 18),"
         << std::setprecision(3) << " observed range [" << lo << "," << hi
         << "]";
  crit.result(in_band >= 18, detail.str());
}

std::vector<MethodComparison> g_comparisons;  // feeds criterion 5

void criterion_4_greedy_vs_cut() {
  Criterion crit(4, "greedy vs cut");
  const std::vector<std::uint64_t> sizes{240, 280, 320};
  int greedy_wins = 0;
  int runs = 0;
  CompareConfig config;
  config.mc_trials = 5000;
  config.greedy_trials = 200;
  for (const auto n : sizes) {
    for (std::uint64_t seed = 601; seed <= 605; ++seed) {
      const auto params = paper_profile(n, seed);
      const auto circles = generate_circles(params);
      const auto weights = profile_weights(circles, params);
      const auto p = SourceDistribution::uniform(circles);
      const auto cmp =
          compare_methods(circles, weights, p, config, RngSpec{seed, 1});
      g_comparisons.push_back(cmp);
      ++runs;
      const double margin = 2 * std::hypot(cmp.cut.std_error,
                                           cmp.greedy.std_error);
      if (cmp.greedy.value <= cmp.cut.value - margin) ++greedy_wins;
    }
  }
  std::ostringstream detail;
  detail << greedy_wins << "/" << runs
         << " runs with greedy below cut by over two combined standard errors"
         << " (need >= 10)";
  crit.result(greedy_wins >= 10, detail.str());
}

void criterion_5_separation_guarantee() {
  Criterion crit(5, "cut separation");
  int violations = 0;
  for (const auto& cmp : g_comparisons) {
    const auto comps = bbn_components(build_bbn(cmp.cut_circles));
    if (comps.block_label.at(cmp.terminals.first) ==
        comps.block_label.at(cmp.terminals.second))
      ++violations;
  }
  std::ostringstream detail;
  detail << violations << " violations across " << g_comparisons.size()
         << " min-cut outputs (need 0)";
  crit.result(!g_comparisons.empty() && violations == 0, detail.str());
}

void criterion_6_greedy_m1_optimality() {
  Criterion crit(6, "greedy m=1 optimality");
  int violations = 0;
  for (std::uint64_t seed = 301; seed <= 350; ++seed) {
    const auto inst = make_small_instance(seed);
    const auto p = SourceDistribution::uniform(inst.circles);
    const auto greedy = greedy_detach(inst.circles, inst.weights, p, 1,
                                      Evaluator::exact(), RngSpec{seed, 0});
    const auto best = exhaustive_detach(inst.circles, inst.weights, p, 1);
    if (std::fabs(greedy.epoi_trace.back().value -
                  best.epoi_trace.back().value) > 1e-12)
      ++violations;
  }
  std::ostringstream detail;
  detail << violations << " mismatches across 50 instances (need 0)";
  crit.result(violations == 0, detail.str());
}

void criterion_7_monotonicity() {
  Criterion crit(7, "greedy monotonicity");
  int violations = 0;
  int steps_checked = 0;
  for (std::uint64_t seed = 301; seed <= 350; ++seed) {
    const auto inst = make_small_instance(seed);
    const auto p = SourceDistribution::uniform(inst.circles);
    OptimizationResult res;
    bool ok = false;
    for (std::size_t m = 3; m >= 1 && !ok; --m) {
      try {
        res = greedy_detach(inst.circles, inst.weights, p, m,
                            Evaluator::exact(), RngSpec{seed, 0});
        ok = true;
      } catch (const DomainError&) {
      }
    }
    if (!ok) continue;
    for (std::size_t i = 1; i < res.epoi_trace.size(); ++i) {
      ++steps_checked;
      if (res.epoi_trace[i].value > res.epoi_trace[i - 1].value + 1e-12)
        ++violations;
    }
  }
  std::ostringstream detail;
  detail << violations << " increases across " << steps_checked
         << " committed steps (need 0)";
  crit.result(violations == 0 && steps_checked > 50, detail.str());
}

void criterion_8_generator_fidelity() {
  Criterion crit(8, "generator fidelity");
  bool counts_ok = true;
  for (std::uint64_t seed = 1; seed <= 10; ++seed) {
    const auto circles = generate_circles(paper_profile(967, seed));
    const auto bbn = build_bbn(circles);
    if (circles.circles.size() != 106 || bbn.bridges.size() != 140 ||
        bbn_components(bbn).count != 1)
      counts_ok = false;
  }

  RngStream rng(RngSpec{8, 0});
  const std::size_t draws = 100000;
  double sum = 0, sum_sq = 0;
  for (std::size_t i = 0; i < draws; ++i) {
    const double x = sample_beta(rng, 20, 80);
    sum += x;
    sum_sq += x * x;
  }
  const double mean = sum / draws;
  const double stddev = std::sqrt(sum_sq / draws - mean * mean);
  const bool moments_ok =
      std::fabs(mean - 0.2) <= 0.005 && std::fabs(stddev - 0.0398) <= 0.005;

  std::ostringstream detail;
  detail << "10/10 runs at 106 circles, 140 bridges, connected: "
         << (counts_ok ? "yes" : "NO") << "; weight moments mean "
         << std::setprecision(4) << mean << ", std " << stddev
         << " vs 0.2 and 0.0398 +- 0.005";
  crit.result(counts_ok && moments_ok, detail.str());
}

void criterion_9_bench_determinism() {
  Criterion crit(9, "bench determinism");
  const auto dir = fs::temp_directory_path() / "detach_acceptance";
  fs::create_directories(dir);
  const auto f1 = dir / "bench1.csv";
  const auto f2 = dir / "bench2.csv";
  const std::string flags =
      " bench --sizes 320 --seed 42 --trials 2000 --greedy-trials 100"
      " --terminal-trials 200 --out ";
  const int rc1 = std::system((g_cli + flags + f1.string()).c_str());
  const int rc2 = std::system((g_cli + flags + f2.string()).c_str());

  // wall-time columns are genuinely non-deterministic; compare every other
  // byte of every line
  auto masked = [](const fs::path& path) {
    std::ifstream in(path);
    std::ostringstream out;
    std::string line;
    while (std::getline(in, line)) {
      if (!line.empty() && line[0] != '#' && line.find(',') != std::string::npos
          && line != bench_csv_header()) {
        std::size_t fields = 0;
        std::size_t pos = 0;
        for (std::size_t i = 0; i < line.size(); ++i)
          if (line[i] == ',' && ++fields == 7) { pos = i; break; }
        line = line.substr(0, pos);  // strip ms_cut, ms_greedy
      }
      out << line << '\n';
    }
    return out.str();
  };

  const std::string a = masked(f1);
  const std::string b = masked(f2);
  bool parsed_ok = true;
  std::size_t rows = 0;
  try {
    rows = parse_bench_csv(read_text_file(f1)).size();
    parse_bench_csv(read_text_file(f2));
  } catch (const std::exception&) {
    parsed_ok = false;
  }
  const bool pass =
      rc1 == 0 && rc2 == 0 && !a.empty() && a == b && parsed_ok && rows == 1;
  std::ostringstream detail;
  detail << "two runs byte-identical outside the wall-time columns: "
         << (a == b ? "yes" : "NO") << ", " << rows << " row(s) parsed";
  crit.result(pass, detail.str());
  fs::remove_all(dir);
}

}  // namespace

int main(int argc, char** argv) {
  if (argc < 2) {
    std::cerr << "usage: acceptance <path-to-cli>\n";
    return 2;
  }
  g_cli = argv[1];

  criterion_1_oracle_equivalence();
  criterion_2_fixture_exactness();
  criterion_3_baseline_band();
  criterion_4_greedy_vs_cut();
  criterion_5_separation_guarantee();
  criterion_6_greedy_m1_optimality();
  criterion_7_monotonicity();
  criterion_8_generator_fidelity();
  criterion_9_bench_determinism();
  std::cout << "NOTE  criterion 10  table reproduction      exact reference-"
               "table values depend on a proprietary dataset and unpublished "
               "seeds; criteria 3 and 4 check distributional bands instead."
            << std::endl;

  if (g_failures == 0) {
    std::cout << "ALL PASS (9/9 testable criteria)" << std::endl;
    return 0;
  }
  std::cout << g_failures << " criteria FAILED" << std::endl;
  return 1;
}
