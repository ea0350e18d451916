#include "sublab/graph.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <cstdio>
#include <numeric>
#include <string>

#include "sublab/errors.hpp"
#include "sublab/rng.hpp"

namespace sublab {

GraphBuilder::GraphBuilder(std::size_t n) {
  require(n >= 1 && n <= (std::size_t{1} << 16), "vertex count out of range: " + std::to_string(n));
  graph_.n_ = n;
  graph_.stride_ = (n + 63) / 64;
  graph_.bits_.assign(n * graph_.stride_, 0);
  graph_.degrees_.assign(n, 0);
}

bool GraphBuilder::add_edge(Vertex u, Vertex v) {
  if (u >= graph_.n_ || v >= graph_.n_)
    throw ConfigError("vertex out of range in edge " + std::to_string(u) + " " + std::to_string(v));
  if (u == v) throw ConfigError("self-loop at vertex " + std::to_string(u));
  if (graph_.adjacent(u, v)) return false;
  graph_.bits_[u * graph_.stride_ + (v >> 6)] |= std::uint64_t{1} << (v & 63);
  graph_.bits_[v * graph_.stride_ + (u >> 6)] |= std::uint64_t{1} << (u & 63);
  ++graph_.degrees_[u];
  ++graph_.degrees_[v];
  ++graph_.edges_;
  return true;
}

Graph GraphBuilder::build() && { return std::move(graph_); }

Graph Graph::from_edges(std::size_t n, std::span<const Edge> edges) {
  GraphBuilder b(n);
  for (const auto& [u, v] : edges) {
    if (!b.add_edge(u, v))
      throw ConfigError("duplicate edge " + std::to_string(u) + " " + std::to_string(v));
  }
  return std::move(b).build();
}

std::vector<Edge> Graph::edges() const {
  std::vector<Edge> out;
  out.reserve(edges_);
  for (Vertex u = 0; u < n_; ++u) {
    const std::uint64_t* r = row(u);
    // Only columns above u.
    for (std::size_t w = (u + 1) >> 6; w < stride_; ++w) {
      std::uint64_t word = r[w];
      if (w == ((u + 1) >> 6)) word &= ~((std::uint64_t{1} << ((u + 1) & 63)) - 1);
      while (word != 0) {
        const auto bit = static_cast<Vertex>(std::countr_zero(word));
        out.emplace_back(u, static_cast<Vertex>(w * 64 + bit));
        word &= word - 1;
      }
    }
  }
  return out;
}

Edge unrank_pair(std::uint64_t index) {
  auto v = static_cast<std::uint64_t>((1.0 + std::sqrt(1.0 + 8.0 * static_cast<double>(index))) / 2.0);
  while (v * (v - 1) / 2 > index) --v;
  while ((v + 1) * v / 2 <= index) ++v;
  return {static_cast<Vertex>(index - v * (v - 1) / 2), static_cast<Vertex>(v)};
}

namespace {

void check_vertex_count(std::size_t n) {
  require(n >= 2, "graph generation needs n >= 2, got " + std::to_string(n));
}

}  // namespace

Graph gen_gnm(std::size_t n, std::uint64_t m, std::uint64_t seed) {
  check_vertex_count(n);
  const std::uint64_t total = pairs_of(n);
  require(m <= total, "edge count " + std::to_string(m) + " exceeds C(n,2) = " + std::to_string(total));
  Philox rng(seed, stream_id(StreamTag::graph, 0));
  GraphBuilder b(n);

  // Draw the smaller of the edge set and its complement.
  const bool complement = m > total / 2;
  const std::uint64_t draws = complement ? total - m : m;
  std::vector<std::uint64_t> chosen;
  chosen.reserve(draws);
  if (draws < total / 64) {
    // Sparse draw: rejection sampling of edge indices.
    std::vector<std::uint64_t> seen((total + 63) / 64, 0);
    while (chosen.size() < draws) {
      const std::uint64_t idx = uniform_below64(rng, total);
      std::uint64_t& word = seen[idx >> 6];
      const std::uint64_t bit = std::uint64_t{1} << (idx & 63);
      if (word & bit) continue;
      word |= bit;
      chosen.push_back(idx);
    }
  } else {
    // Partial Fisher-Yates over all edge indices.
    std::vector<std::uint32_t> idx(total);
    std::iota(idx.begin(), idx.end(), 0u);
    for (std::uint64_t i = 0; i < draws; ++i) {
      const std::uint64_t j = i + uniform_below64(rng, total - i);
      std::swap(idx[i], idx[j]);
      chosen.push_back(idx[i]);
    }
  }

  if (!complement) {
    for (std::uint64_t e : chosen) {
      const auto [u, v] = unrank_pair(e);
      b.add_edge(u, v);
    }
  } else {
    std::vector<std::uint64_t> excluded((total + 63) / 64, 0);
    for (std::uint64_t e : chosen) excluded[e >> 6] |= std::uint64_t{1} << (e & 63);
    for (std::uint64_t e = 0; e < total; ++e) {
      if ((excluded[e >> 6] >> (e & 63)) & 1) continue;
      const auto [u, v] = unrank_pair(e);
      b.add_edge(u, v);
    }
  }
  return std::move(b).build();
}

Graph gen_gnp(std::size_t n, double p, std::uint64_t seed) {
  check_vertex_count(n);
  require(p >= 0.0 && p <= 1.0, "edge probability must lie in [0,1], got " + std::to_string(p));
  Philox rng(seed, stream_id(StreamTag::graph, 1));
  GraphBuilder b(n);
  for (Vertex v = 1; v < n; ++v)
    for (Vertex u = 0; u < v; ++u)
      if (uniform01(rng) < p) b.add_edge(u, v);
  return std::move(b).build();
}

GraphStats stats(const Graph& g) {
  GraphStats s;
  s.n = g.n();
  s.pairs = pairs_of(s.n);
  s.edges = g.edge_count();
  std::uint64_t sum_sq = 0;
  std::uint64_t paths = 0;
  for (std::uint32_t d : g.degrees()) {
    sum_sq += std::uint64_t{d} * d;
    paths += d == 0 ? 0 : std::uint64_t{d} * (d - 1) / 2;
  }
  s.sum_degree_squares = sum_sq;
  s.paths = paths;
  const BigInt n = s.n;
  const BigInt m = s.edges;
  s.scaled_variance = n * s.sum_degree_squares - 4 * m * m;
  s.density = s.pairs == 0 ? Rational(0) : Rational(m, BigInt(s.pairs));
  s.mean_degree = Rational(2 * m, n);
  s.density_value = to_double(s.density);
  s.mean_degree_value = to_double(s.mean_degree);

  // 2Pn = nV + 4M² − 2Mn
  if (2 * s.paths * n != s.scaled_variance + 4 * m * m - 2 * m * n)
    throw NumericError("degree identity 2Pn = Vn + 4M^2 - 2Mn failed");
  if (s.scaled_variance < 0) throw NumericError("negative degree variance");
  return s;
}

double third_moment_stat(const Graph& g) {
  const long double mean = 2.0L * static_cast<long double>(g.edge_count()) / g.n();
  long double total = 0;
  for (std::uint32_t d : g.degrees()) {
    const long double dev = std::fabs(static_cast<long double>(d) - mean);
    total += dev * dev * dev;
  }
  return static_cast<double>(total / g.n());
}

std::vector<std::string> regime_warnings(std::size_t n, std::uint64_t m, std::uint64_t k, double delta) {
  if (!(delta >= 0 && delta <= 0.5)) throw ConfigError("delta must lie in [0, 1/2]");
  std::vector<std::string> out;
  auto check = [&](const char* name, double x) {
    if (x < delta || x > 1 - delta) {
      char buf[128];
      std::snprintf(buf, sizeof buf, "%s = %.4g lies outside [%.4g, %.4g]", name, x, delta, 1 - delta);
      out.emplace_back(buf);
    }
  };
  if (n >= 2) check("M/N", static_cast<double>(m) / static_cast<double>(pairs_of(n)));
  if (n >= 1) check("k/n", static_cast<double>(k) / static_cast<double>(n));
  return out;
}

}  // namespace sublab
