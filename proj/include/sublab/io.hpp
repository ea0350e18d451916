#pragma once
// File formats.
//
// Graph (text):        "n M", then M lines "u v" with 0 ≤ u < v < n.
// Distribution (CSV):  "z,count" rows sorted by z (zero counts omitted), with a
//                      JSON sidecar {format, n, k, M, kind, total, seed}.
// Schedule (CSV):      "j,a_j,t_j,c_j,valid"; the last row is j0 with t_j and
//                      c_j empty and valid = a_{j0} in the target window.
// Records (JSON lines): one flat object per line with "format", "record" (the
//                      type), the type's fields and "config", the resolved run
//                      configuration. Values are scalars; readers reject
//                      unknown fields.

#include <filesystem>
#include <iosfwd>
#include <string>
#include <vector>

#include "json.hpp"
#include "sublab/graph.hpp"
#include "sublab/smoothing.hpp"
#include "sublab/subset.hpp"

namespace sublab {

using Json = nlohmann::ordered_json;

inline constexpr const char* kFormatVersion = "sublab/1";

void write_graph(std::ostream& out, const Graph& g);
/// Strict reader: malformed lines, a wrong edge count, u ≥ v, out-of-range
/// vertices, duplicates and trailing data all throw ConfigError.
Graph read_graph(std::istream& in);
void save_graph(const std::filesystem::path& path, const Graph& g);
Graph load_graph(const std::filesystem::path& path);

void write_distribution_csv(std::ostream& out, const EdgeCountDistribution& dist);
Json distribution_metadata(const EdgeCountDistribution& dist);
/// Rebuilds a distribution; the CSV total must match the sidecar.
EdgeCountDistribution read_distribution(std::istream& csv, const Json& metadata);
/// Writes `path` and the sidecar `path` + ".json".
void save_distribution(const std::filesystem::path& path, const EdgeCountDistribution& dist);
EdgeCountDistribution load_distribution(const std::filesystem::path& path);

void write_schedule_csv(std::ostream& out, const SmoothingSchedule& s);

/// Starts a record of the given type with the format and type fields set.
Json make_record(const std::string& type);

/// Throws ConfigError on a wrong format version, unknown record type, missing
/// or unknown fields, or non-scalar values.
void validate_record(const Json& record);

/// Validates and writes one record per line.
void write_records(std::ostream& out, const std::vector<Json>& records);
std::vector<Json> read_records(std::istream& in);

/// Writes `text` to `path` (creating parent directories); throws ConfigError on failure.
void write_text_file(const std::filesystem::path& path, const std::string& text);

}  // namespace sublab
