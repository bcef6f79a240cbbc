#include "detach/io.hpp"

#include <cmath>
#include <fstream>
#include <iomanip>
#include <sstream>

namespace detach {

namespace {

nlohmann::json parse_json(const std::string& text, const std::string& what) {
  nlohmann::json doc = nlohmann::json::parse(text, nullptr, false);
  if (doc.is_discarded()) throw InputFormatError(what + ": not valid JSON");
  return doc;
}

std::string format_real(double value) {
  std::ostringstream out;
  out << std::fixed << std::setprecision(6) << value;
  return out.str();
}

}  // namespace

std::string read_text_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open " + path.string() + " for reading");
  std::ostringstream buf;
  buf << in.rdbuf();
  if (in.bad()) throw IoError("read failed on " + path.string());
  return buf.str();
}

void write_text_file(const std::filesystem::path& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw IoError("cannot open " + path.string() + " for writing");
  out << text;
  out.flush();
  if (!out) throw IoError("write failed on " + path.string());
}

CircleCollection parse_circles_json(const std::string& text) {
  const auto doc = parse_json(text, "circles");
  if (!doc.is_object() || !doc.contains("circles") || !doc["circles"].is_object())
    throw InputFormatError("circles: expected an object with a \"circles\" key");
  CircleCollection out;
  for (const auto& [name, members] : doc["circles"].items()) {
    if (name.empty()) throw InputFormatError("circles: empty circle id");
    if (!members.is_array())
      throw InputFormatError("circles: circle " + name + " is not an array");
    auto& set = out.circles[CircleId{name}];
    for (const auto& entry : members) {
      if (!entry.is_string() || entry.get<std::string>().empty())
        throw InputFormatError("circles: circle " + name +
                               " has a member that is not a non-empty string");
      const auto [it, inserted] = set.insert(VertexId{entry.get<std::string>()});
      if (!inserted)
        throw InputFormatError("circles: duplicate vertex " + it->value +
                               " in circle " + name);
    }
  }
  return out;
}

std::string circles_to_json(const CircleCollection& circles) {
  nlohmann::json members = nlohmann::json::object();
  for (const auto& [id, set] : circles.circles) {
    auto& arr = members[id.value] = nlohmann::json::array();
    for (const auto& v : set) arr.push_back(v.value);
  }
  nlohmann::json doc;
  doc["circles"] = std::move(members);
  return doc.dump(2) + "\n";
}

CircleCollection load_circles_json(const std::filesystem::path& path) {
  return parse_circles_json(read_text_file(path));
}

void save_circles_json(const CircleCollection& circles,
                       const std::filesystem::path& path) {
  write_text_file(path, circles_to_json(circles));
}

EdgeWeights parse_weights_csv(const std::string& text) {
  std::istringstream in(text);
  std::string line;
  if (!std::getline(in, line) || (line != "u,v,w" && line != "u,v,w\r"))
    throw InputFormatError("weights: first line must be the header u,v,w");
  EdgeWeights out;
  std::size_t line_no = 1;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    std::istringstream row(line);
    std::string u, v, w;
    if (!std::getline(row, u, ',') || !std::getline(row, v, ',') ||
        !std::getline(row, w) || u.empty() || v.empty() || w.empty())
      throw InputFormatError("weights: line " + std::to_string(line_no) +
                             " does not have three fields");
    if (u == v)
      throw InputFormatError("weights: line " + std::to_string(line_no) +
                             " has identical endpoints " + u);
    double value = 0;
    std::size_t used = 0;
    try {
      value = std::stod(w, &used);
    } catch (const std::exception&) {
      throw InputFormatError("weights: line " + std::to_string(line_no) +
                             " has a non-numeric weight " + w);
    }
    if (used != w.size() || !std::isfinite(value) || value < 0.0 || value > 1.0)
      throw InputFormatError("weights: line " + std::to_string(line_no) +
                             " weight must be a probability, got " + w);
    const std::pair<VertexId, VertexId> key{VertexId{u}, VertexId{v}};
    if (out.weights.count(key))
      throw InputFormatError("weights: duplicate pair " + u + "," + v +
                             " at line " + std::to_string(line_no));
    out.weights.emplace(key, value);
  }
  return out;
}

std::string weights_to_csv(const EdgeWeights& weights) {
  std::ostringstream out;
  out << "u,v,w\n";
  for (const auto& [pair, w] : weights.weights)
    out << pair.first.value << ',' << pair.second.value << ',' << format_real(w)
        << '\n';
  return out.str();
}

EdgeWeights load_weights_csv(const std::filesystem::path& path) {
  return parse_weights_csv(read_text_file(path));
}

void save_weights_csv(const EdgeWeights& weights,
                      const std::filesystem::path& path) {
  write_text_file(path, weights_to_csv(weights));
}

SourceDistribution parse_distribution_json(const std::string& text) {
  const auto doc = parse_json(text, "distribution");
  if (!doc.is_object())
    throw InputFormatError(
        "distribution: expected an object of circle: probability");
  SourceDistribution out;
  for (const auto& [name, value] : doc.items()) {
    if (name.empty()) throw InputFormatError("distribution: empty circle id");
    if (!value.is_number())
      throw InputFormatError("distribution: probability for " + name +
                             " is not a number");
    out.probs[CircleId{name}] = value.get<double>();
  }
  return out;
}

SourceDistribution load_distribution_json(const std::filesystem::path& path) {
  return parse_distribution_json(read_text_file(path));
}

namespace {

nlohmann::json histogram_json(
    const std::vector<std::pair<std::size_t, std::size_t>>& h) {
  nlohmann::json arr = nlohmann::json::array();
  for (const auto& [value, count] : h) arr.push_back({value, count});
  return arr;
}

std::vector<std::pair<std::size_t, std::size_t>> histogram_from_json(
    const nlohmann::json& arr, const std::string& what) {
  if (!arr.is_array())
    throw InputFormatError("stats: " + what + " is not an array");
  std::vector<std::pair<std::size_t, std::size_t>> out;
  for (const auto& entry : arr) {
    if (!entry.is_array() || entry.size() != 2)
      throw InputFormatError("stats: " + what + " entries must be [value, count]");
    out.push_back({entry[0].get<std::size_t>(), entry[1].get<std::size_t>()});
  }
  return out;
}

}  // namespace

nlohmann::json stats_to_json(const StatsReport& report) {
  nlohmann::json doc;
  doc["n_vertices"] = report.n_vertices;
  doc["n_circles"] = report.n_circles;
  doc["n_bridges"] = report.n_bridges;
  doc["n_links"] = report.n_links;
  doc["circle_size_histogram"] = histogram_json(report.circle_size_histogram);
  doc["vertex_degree_histogram"] = histogram_json(report.vertex_degree_histogram);
  doc["bridge_membership_histogram"] =
      histogram_json(report.bridge_membership_histogram);
  doc["bbn_component_count"] = report.bbn_component_count;
  doc["largest_component_fraction"] = report.largest_component_fraction;
  return doc;
}

StatsReport parse_stats_json(const nlohmann::json& j) {
  StatsReport report;
  try {
    report.n_vertices = j.at("n_vertices").get<std::size_t>();
    report.n_circles = j.at("n_circles").get<std::size_t>();
    report.n_bridges = j.at("n_bridges").get<std::size_t>();
    report.n_links = j.at("n_links").get<std::size_t>();
    report.circle_size_histogram =
        histogram_from_json(j.at("circle_size_histogram"), "circle_size_histogram");
    report.vertex_degree_histogram = histogram_from_json(
        j.at("vertex_degree_histogram"), "vertex_degree_histogram");
    report.bridge_membership_histogram = histogram_from_json(
        j.at("bridge_membership_histogram"), "bridge_membership_histogram");
    report.bbn_component_count = j.at("bbn_component_count").get<std::size_t>();
    report.largest_component_fraction =
        j.at("largest_component_fraction").get<double>();
  } catch (const nlohmann::json::exception& e) {
    throw InputFormatError(std::string("stats: ") + e.what());
  }
  return report;
}

void to_json(nlohmann::json& j, const EpoiEstimate& e) {
  j = nlohmann::json{{"value", e.value},
                     {"std_error", e.std_error},
                     {"trials_per_circle", e.trials_per_circle},
                     {"exact", e.exact}};
  nlohmann::json per = nlohmann::json::object();
  for (const auto& [circle, term] : e.per_circle_terms) per[circle.value] = term;
  j["per_circle_terms"] = std::move(per);
}

void to_json(nlohmann::json& j, const DetachmentPair& p) {
  j = nlohmann::json{{"vertex", p.vertex.value}, {"circle", p.circle.value}};
}

void to_json(nlohmann::json& j, const DetachmentSet& s) {
  j = nlohmann::json::array();
  for (const auto& pair : s.pairs) j.push_back(pair);
}

std::string bench_csv_header() {
  return "n,mincut,epoi_cut,epoi_greedy,epoi_stderr,epoi_base,seed,ms_cut,ms_greedy";
}

std::string bench_row_to_csv(const BenchRow& row) {
  std::ostringstream out;
  out << row.n << ',' << row.mincut << ',' << format_real(row.epoi_cut) << ','
      << format_real(row.epoi_greedy) << ',' << format_real(row.epoi_stderr)
      << ',' << format_real(row.epoi_base) << ',' << row.seed << ','
      << format_real(row.ms_cut) << ',' << format_real(row.ms_greedy);
  return out.str();
}

std::vector<BenchRow> parse_bench_csv(const std::string& text) {
  std::istringstream in(text);
  std::string line;
  if (!std::getline(in, line)) throw InputFormatError("bench: empty input");
  if (!line.empty() && line.back() == '\r') line.pop_back();
  if (line != bench_csv_header())
    throw InputFormatError("bench: unexpected header " + line);
  std::vector<BenchRow> rows;
  std::size_t line_no = 1;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty() || line[0] == '#') continue;
    std::istringstream row_in(line);
    std::string field;
    std::vector<std::string> fields;
    while (std::getline(row_in, field, ',')) fields.push_back(field);
    if (fields.size() != 9)
      throw InputFormatError("bench: line " + std::to_string(line_no) +
                             " does not have nine fields");
    try {
      BenchRow row;
      row.n = std::stoull(fields[0]);
      row.mincut = std::stoull(fields[1]);
      row.epoi_cut = std::stod(fields[2]);
      row.epoi_greedy = std::stod(fields[3]);
      row.epoi_stderr = std::stod(fields[4]);
      row.epoi_base = std::stod(fields[5]);
      row.seed = std::stoull(fields[6]);
      row.ms_cut = std::stod(fields[7]);
      row.ms_greedy = std::stod(fields[8]);
      rows.push_back(row);
    } catch (const std::exception&) {
      throw InputFormatError("bench: line " + std::to_string(line_no) +
                             " has a malformed field");
    }
  }
  return rows;
}

}  // namespace detach
