#pragma once

#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "sublab/rational.hpp"

namespace sublab {

using Vertex = std::uint32_t;
using Edge = std::pair<Vertex, Vertex>;

/// Number of unordered pairs of n items, C(n, 2).
constexpr std::uint64_t pairs_of(std::uint64_t n) { return n < 2 ? 0 : n * (n - 1) / 2; }

/// Immutable simple undirected graph on vertices 0..n-1 with bit-vector
/// adjacency rows. Rows are `stride()` 64-bit words; bits at positions ≥ n
/// are zero.
class Graph {
 public:
  Graph() = default;

  /// Builds from an edge list; rejects self-loops, duplicates and
  /// out-of-range endpoints.
  static Graph from_edges(std::size_t n, std::span<const Edge> edges);

  std::size_t n() const { return n_; }
  std::uint64_t edge_count() const { return edges_; }
  std::size_t stride() const { return stride_; }

  bool adjacent(Vertex u, Vertex v) const {
    return (bits_[u * stride_ + (v >> 6)] >> (v & 63)) & 1;
  }
  const std::uint64_t* row(Vertex v) const { return bits_.data() + v * stride_; }
  const std::uint64_t* rows() const { return bits_.data(); }
  std::span<const std::uint32_t> degrees() const { return degrees_; }
  std::uint32_t degree(Vertex v) const { return degrees_[v]; }

  /// Edges (u, v) with u < v, sorted lexicographically.
  std::vector<Edge> edges() const;

  friend bool operator==(const Graph& a, const Graph& b) {
    return a.n_ == b.n_ && a.bits_ == b.bits_;
  }

 private:
  friend class GraphBuilder;

  std::size_t n_ = 0;
  std::size_t stride_ = 0;
  std::uint64_t edges_ = 0;
  std::vector<std::uint64_t> bits_;
  std::vector<std::uint32_t> degrees_;
};

/// Mutable staging area for generators and readers.
class GraphBuilder {
 public:
  explicit GraphBuilder(std::size_t n);

  /// Adds u~v; returns false if the edge was already present.
  bool add_edge(Vertex u, Vertex v);
  bool has_edge(Vertex u, Vertex v) const { return graph_.adjacent(u, v); }
  std::size_t n() const { return graph_.n_; }

  Graph build() &&;

 private:
  Graph graph_;
};

/// Uniform graph with exactly M edges, deterministic in the seed.
Graph gen_gnm(std::size_t n, std::uint64_t m, std::uint64_t seed);

/// Each of the C(n,2) edges present independently with probability p.
Graph gen_gnp(std::size_t n, double p, std::uint64_t seed);

/// Degree statistics that enter λ, Σ and the degree identity.
///
/// V (n times the degree variance) is held as the integer n·V = n·Σd² − 4M²,
/// so 2Pn = nV + 4M² − 2Mn can be checked exactly.
struct GraphStats {
  std::uint64_t n = 0;
  std::uint64_t pairs = 0;  // N = C(n, 2)
  std::uint64_t edges = 0;  // M
  Rational density;         // M / N
  Rational mean_degree;     // d(G) = 2M / n
  double density_value = 0;
  double mean_degree_value = 0;
  BigInt sum_degree_squares;
  BigInt scaled_variance;  // n·V
  BigInt paths;            // P = Σ C(d(v), 2)

  Rational degree_variance_sum() const { return Rational(scaled_variance, BigInt(n)); }  // V
  bool regular() const { return scaled_variance == 0; }
};

/// Computes the statistics and verifies the degree identity; a failure
/// throws NumericError.
GraphStats stats(const Graph& g);

/// (1/n)·Σ_v |d(v) − d(G)|³.
double third_moment_stat(const Graph& g);

/// The dense regime M/N, k/n ∈ [δ, 1−δ]. Returns one message per ratio
/// outside the band (callers warn, they do not reject). δ must lie in [0, 1/2].
std::vector<std::string> regime_warnings(std::size_t n, std::uint64_t m, std::uint64_t k, double delta);

/// Maps an index in [0, C(n,2)) to the pair (u, v), u < v, ordered by v then u.
Edge unrank_pair(std::uint64_t index);

}  // namespace sublab
