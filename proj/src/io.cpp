#include "sublab/io.hpp"

#include <algorithm>
#include <charconv>
#include <cstdio>
#include <fstream>
#include <istream>
#include <map>
#include <ostream>
#include <set>
#include <sstream>
#include <string_view>

#include "sublab/errors.hpp"

namespace sublab {

namespace {

// Parses exactly `count` unsigned integers separated by single spaces or commas.
bool parse_fields(std::string_view line, char sep, std::vector<std::int64_t>& out, std::size_t count) {
  out.clear();
  if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
  std::size_t pos = 0;
  while (out.size() < count) {
    std::int64_t v = 0;
    const auto [ptr, ec] = std::from_chars(line.data() + pos, line.data() + line.size(), v);
    if (ec != std::errc()) return false;
    out.push_back(v);
    pos = static_cast<std::size_t>(ptr - line.data());
    if (out.size() < count) {
      if (pos >= line.size() || line[pos] != sep) return false;
      ++pos;
    }
  }
  return pos == line.size();
}

std::ifstream open_in(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open " + path.string());
  return in;
}

struct Schema {
  std::vector<std::string> required;
  std::vector<std::string> optional;
};

const std::map<std::string, Schema>& schemas() {
  static const std::map<std::string, Schema> table{
      {"metric",
       {{"metric", "value", "n", "k", "M", "samples", "window", "seed"},
        {"kind", "scale", "z0", "z1", "argmax", "points", "point_se", "noisy", "C", "r", "worst_z", "mu", "sigma"}}},
      {"stein",
       {{"n", "k", "M", "lambda", "Sigma11", "A_hat", "A_se", "B_hat", "B_se", "T_hat", "seed"},
        {"outer", "lambda_1", "lambda_2", "conditioning", "singular", "drift_max", "drift_subsets",
         "sigma_enumeration_error", "sigma11_rel"}}},
      {"defect",
       {{"metric", "value", "n", "k", "M", "samples", "a", "window", "seed"},
        {"kind", "r", "z1", "z2", "implied_bound", "noise", "scale", "step"}}},
      {"window",
       {{"n", "k", "M", "t", "lo", "hi", "mode", "trials", "seed", "p", "proportion", "binomial", "deviation", "se"},
        {"a"}}},
      {"schedule",
       {{"n", "beta", "eps", "j0", "a", "t_sum", "all_valid", "monotone", "in_target", "target_lo", "target_hi"},
        {}}},
      {"graph",
       {{"n", "M", "density", "mean_degree", "scaled_variance", "paths", "regular", "third_moment"},
        {"seed", "source", "degree_identity"}}},
      {"distribution", {{"n", "k", "M", "kind", "total", "seed", "mean", "min", "max"}, {"path"}}},
      {"sweep", {{"metric", "slope", "slope_se", "intercept", "points", "seed"}, {"grid_size", "seeds"}}},
  };
  return table;
}

const std::set<std::string>& config_keys() {
  static const std::set<std::string> keys{
      "command", "n",     "k",    "M",    "p",    "seed", "samples", "workers", "beta",   "eps",   "window",
      "graph",   "out",   "budget", "t",  "mode", "outer", "grid",   "seeds",   "metric", "C",     "r",
      "a",       "step",  "exact", "k_frac", "lo", "hi", "delta"};
  return keys;
}

bool scalar(const Json& v) { return v.is_primitive(); }

}  // namespace

void write_graph(std::ostream& out, const Graph& g) {
  out << g.n() << ' ' << g.edge_count() << '\n';
  for (const auto& [u, v] : g.edges()) out << u << ' ' << v << '\n';
}

Graph read_graph(std::istream& in) {
  std::string line;
  std::vector<std::int64_t> f;
  if (!std::getline(in, line) || !parse_fields(line, ' ', f, 2) || f[0] < 0 || f[1] < 0)
    throw ConfigError("graph header must be \"n M\"");
  const auto n = static_cast<std::uint64_t>(f[0]);
  const auto m = static_cast<std::uint64_t>(f[1]);
  if (n > (1u << 20)) throw ConfigError("graph too large: n=" + std::to_string(n));
  if (m > pairs_of(n)) throw ConfigError("graph header lists more edges than pairs");
  GraphBuilder builder(n);
  for (std::uint64_t i = 0; i < m; ++i) {
    const std::string where = "graph line " + std::to_string(i + 2);
    if (!std::getline(in, line)) throw ConfigError("graph ends after " + std::to_string(i) + " of " + std::to_string(m) + " edges");
    if (!parse_fields(line, ' ', f, 2)) throw ConfigError(where + ": expected \"u v\"");
    if (f[0] < 0 || f[1] < 0 || static_cast<std::uint64_t>(f[1]) >= n || static_cast<std::uint64_t>(f[0]) >= n)
      throw ConfigError(where + ": vertex out of range");
    if (f[0] == f[1]) throw ConfigError(where + ": self-loop");
    if (f[0] > f[1]) throw ConfigError(where + ": endpoints must satisfy u < v");
    if (!builder.add_edge(static_cast<Vertex>(f[0]), static_cast<Vertex>(f[1])))
      throw ConfigError(where + ": duplicate edge");
  }
  while (std::getline(in, line))
    if (line.find_first_not_of(" \t\r") != std::string::npos) throw ConfigError("trailing data after the edge list");
  return std::move(builder).build();
}

void save_graph(const std::filesystem::path& path, const Graph& g) {
  std::ostringstream out;
  write_graph(out, g);
  write_text_file(path, out.str());
}

Graph load_graph(const std::filesystem::path& path) {
  auto in = open_in(path);
  return read_graph(in);
}

void write_distribution_csv(std::ostream& out, const EdgeCountDistribution& dist) {
  out << "z,count\n";
  for (const auto& [z, c] : dist.counts)
    if (c != 0) out << z << ',' << c << '\n';
}

Json distribution_metadata(const EdgeCountDistribution& dist) {
  Json j;
  j["format"] = kFormatVersion;
  j["n"] = dist.n;
  j["k"] = dist.k;
  j["M"] = dist.edges;
  j["kind"] = name(dist.kind);
  j["total"] = dist.total;
  j["seed"] = dist.seed;
  return j;
}

EdgeCountDistribution read_distribution(std::istream& csv, const Json& meta) {
  static const std::set<std::string> keys{"format", "n", "k", "M", "kind", "total", "seed"};
  for (const auto& [key, value] : meta.items())
    if (!keys.count(key)) throw ConfigError("unknown field '" + key + "' in distribution metadata");
  for (const auto& key : keys)
    if (!meta.contains(key)) throw ConfigError("distribution metadata lacks '" + key + "'");
  if (meta["format"] != kFormatVersion) throw ConfigError("unsupported distribution format");
  EdgeCountDistribution dist;
  try {
    dist.n = meta["n"].get<std::uint64_t>();
    dist.k = meta["k"].get<std::uint64_t>();
    dist.edges = meta["M"].get<std::uint64_t>();
    dist.seed = meta["seed"].get<std::uint64_t>();
    const auto kind = meta["kind"].get<std::string>();
    if (kind == name(DistributionKind::exact))
      dist.kind = DistributionKind::exact;
    else if (kind == name(DistributionKind::empirical))
      dist.kind = DistributionKind::empirical;
    else
      throw ConfigError("unknown distribution kind '" + kind + "'");
    dist.total = meta["total"].get<std::uint64_t>();
  } catch (const nlohmann::json::exception& e) {
    throw ConfigError(std::string("malformed distribution metadata: ") + e.what());
  }

  std::string line;
  if (!std::getline(csv, line) || (line != "z,count" && line != "z,count\r"))
    throw ConfigError("distribution CSV header must be \"z,count\"");
  std::vector<std::int64_t> f;
  std::uint64_t sum = 0;
  bool first = true;
  std::int64_t prev = 0;
  while (std::getline(csv, line)) {
    if (line.empty()) continue;
    if (!parse_fields(line, ',', f, 2) || f[1] < 0) throw ConfigError("malformed distribution row \"" + line + "\"");
    if (!first && f[0] <= prev) throw ConfigError("distribution rows must be strictly sorted by z");
    first = false;
    prev = f[0];
    dist.counts[f[0]] = static_cast<std::uint64_t>(f[1]);
    sum += static_cast<std::uint64_t>(f[1]);
  }
  if (sum != dist.total) throw ConfigError("distribution counts do not add up to the recorded total");
  return dist;
}

void save_distribution(const std::filesystem::path& path, const EdgeCountDistribution& dist) {
  std::ostringstream out;
  write_distribution_csv(out, dist);
  write_text_file(path, out.str());
  write_text_file(path.string() + ".json", distribution_metadata(dist).dump(2) + "\n");
}

EdgeCountDistribution load_distribution(const std::filesystem::path& path) {
  auto meta_in = open_in(path.string() + ".json");
  Json meta;
  try {
    meta = Json::parse(meta_in);
  } catch (const nlohmann::json::exception& e) {
    throw ConfigError(std::string("malformed distribution metadata: ") + e.what());
  }
  auto in = open_in(path);
  return read_distribution(in, meta);
}

void write_schedule_csv(std::ostream& out, const SmoothingSchedule& s) {
  out << "j,a_j,t_j,c_j,valid\n";
  char c[32];
  for (const auto& step : s.steps) {
    std::snprintf(c, sizeof c, "%.6f", step.triple.c);
    out << step.j << ',' << step.triple.a << ',' << step.triple.t << ',' << c << ','
        << (step.triple.valid() && step.shrinks ? 1 : 0) << '\n';
  }
  out << s.j0 << ',' << s.a << ",,," << (s.in_target() ? 1 : 0) << '\n';
}

Json make_record(const std::string& type) {
  Json j;
  j["format"] = kFormatVersion;
  j["record"] = type;
  return j;
}

void validate_record(const Json& r) {
  if (!r.is_object()) throw ConfigError("record is not an object");
  if (!r.contains("format") || r["format"] != kFormatVersion) throw ConfigError("record has a missing or unsupported format");
  if (!r.contains("record") || !r["record"].is_string()) throw ConfigError("record lacks a type");
  const auto type = r["record"].get<std::string>();
  const auto it = schemas().find(type);
  if (it == schemas().end()) throw ConfigError("unknown record type '" + type + "'");
  const Schema& schema = it->second;
  for (const auto& key : schema.required)
    if (!r.contains(key)) throw ConfigError(type + " record lacks '" + key + "'");
  if (!r.contains("config") || !r["config"].is_object()) throw ConfigError(type + " record lacks its config");
  for (const auto& [key, value] : r.items()) {
    if (key == "format" || key == "record") continue;
    if (key == "config") {
      for (const auto& [ck, cv] : value.items()) {
        if (!config_keys().count(ck)) throw ConfigError("unknown config field '" + ck + "'");
        const bool ok = scalar(cv) || (cv.is_array() && std::all_of(cv.begin(), cv.end(), [](const Json& x) {
                                         return x.is_number();
                                       }));
        if (!ok) throw ConfigError("config field '" + ck + "' is not flat");
      }
      continue;
    }
    const bool known = std::find(schema.required.begin(), schema.required.end(), key) != schema.required.end() ||
                       std::find(schema.optional.begin(), schema.optional.end(), key) != schema.optional.end();
    if (!known) throw ConfigError("unknown field '" + key + "' in " + type + " record");
    if (!scalar(value)) throw ConfigError("field '" + key + "' in " + type + " record is not a scalar");
  }
}

void write_records(std::ostream& out, const std::vector<Json>& records) {
  for (const auto& r : records) {
    validate_record(r);
    out << r.dump() << '\n';
  }
}

std::vector<Json> read_records(std::istream& in) {
  std::vector<Json> out;
  std::string line;
  std::size_t number = 0;
  while (std::getline(in, line)) {
    ++number;
    if (line.empty()) continue;
    Json r;
    try {
      r = Json::parse(line);
    } catch (const nlohmann::json::exception& e) {
      throw ConfigError("record line " + std::to_string(number) + " is not JSON");
    }
    validate_record(r);
    out.push_back(std::move(r));
  }
  return out;
}

void write_text_file(const std::filesystem::path& path, const std::string& text) {
  std::error_code ec;
  if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path(), ec);
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw ConfigError("cannot write " + path.string());
  out << text;
  out.flush();
  if (!out) throw ConfigError("write failed for " + path.string());
}

}  // namespace sublab
