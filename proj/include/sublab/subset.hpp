#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <span>
#include <string_view>
#include <utility>
#include <vector>

#include "sublab/graph.hpp"
#include "sublab/rational.hpp"
#include "sublab/rng.hpp"

namespace sublab {

/// A k-subset S with e(S) and d_S(v) = |N(v) ∩ S| for every vertex, so that a
/// swap costs one pass over n counters.
class SubsetState {
 public:
  std::size_t n() const { return into_.size(); }
  std::uint32_t k() const { return static_cast<std::uint32_t>(members_.size()); }
  std::uint64_t edges() const { return edges_; }  // e(S)
  bool contains(Vertex v) const { return (mask_[v >> 6] >> (v & 63)) & 1; }
  std::int32_t into(Vertex v) const { return into_[v]; }  // d_S(v)
  std::span<const std::int32_t> into() const { return into_; }
  std::span<const std::uint64_t> mask() const { return mask_; }
  std::span<const Vertex> members() const { return members_; }  // unordered

  /// Σ_{v∈S} d(v).
  std::uint64_t degree_sum() const { return degree_sum_; }

  /// e(S̄) = M − Σ_{v∈S} d(v) + e(S).
  std::uint64_t complement_edges(const Graph& g) const {
    return g.edge_count() - degree_sum_ + edges_;
  }

  /// Same subset and cached values; member order is ignored.
  friend bool operator==(const SubsetState& a, const SubsetState& b) {
    return a.mask_ == b.mask_ && a.edges_ == b.edges_ && a.into_ == b.into_ &&
           a.degree_sum_ == b.degree_sum_;
  }

 private:
  friend SubsetState build_state(const Graph& g, std::span<const Vertex> members);
  friend void apply_swap(const Graph& g, SubsetState& st, Vertex x, Vertex xb);

  std::vector<std::uint64_t> mask_;
  std::vector<std::int32_t> into_;
  std::vector<Vertex> members_;
  std::vector<std::uint32_t> slot_;  // position of v in members_, if v ∈ S
  std::uint64_t edges_ = 0;
  std::uint64_t degree_sum_ = 0;
};

/// Rejects out-of-range or repeated vertices.
SubsetState build_state(const Graph& g, std::span<const Vertex> members);

/// e(S − x + xb) − e(S) = d_S(xb) − d_S(x) − [x ~ xb]. Requires x ∈ S, xb ∉ S.
std::int64_t swap_delta(const Graph& g, const SubsetState& st, Vertex x, Vertex xb);

/// Replaces x by xb, updating e(S) and every d_S(v).
void apply_swap(const Graph& g, SubsetState& st, Vertex x, Vertex xb);

/// e(S) by popcount over the members' rows, independent of any cached state.
std::uint64_t induced_edge_count(const Graph& g, std::span<const Vertex> members);

enum class DistributionKind { exact, empirical };

std::string_view name(DistributionKind kind);

/// Counts of e(S) = z over all k-subsets (exact) or over i.i.d. draws (empirical).
struct EdgeCountDistribution {
  DistributionKind kind = DistributionKind::empirical;
  std::map<std::int64_t, std::uint64_t> counts;
  std::uint64_t total = 0;
  std::uint64_t n = 0;
  std::uint64_t k = 0;
  std::uint64_t edges = 0;  // M
  std::uint64_t seed = 0;   // 0 for exact distributions

  bool empty() const { return total == 0; }
  std::uint64_t count(std::int64_t z) const {
    const auto it = counts.find(z);
    return it == counts.end() ? 0 : it->second;
  }
  double pmf(std::int64_t z) const { return static_cast<double>(count(z)) / static_cast<double>(total); }
  /// Mass of the integer range [lo, hi] (inclusive).
  std::uint64_t range_count(std::int64_t lo, std::int64_t hi) const;
  /// Σ z·count(z) / total, exactly.
  Rational mean() const;
};

/// Total-variation distance (1/2)·Σ_z |p(z) − q(z)|.
double total_variation(const EdgeCountDistribution& a, const EdgeCountDistribution& b);

/// Draws uniform k-subsets by partial Fisher–Yates over a persistent
/// permutation; each draw is independent of the previous one.
class SubsetSampler {
 public:
  SubsetSampler(std::size_t n, std::uint32_t k);
  /// Fills members() with a fresh uniform k-subset.
  std::span<const Vertex> draw(Philox& rng);
  std::span<const Vertex> members() const { return {perm_.data(), k_}; }
  /// Remaining vertices (the complement of the last draw).
  std::span<const Vertex> rest() const { return {perm_.data() + k_, perm_.size() - k_}; }

 private:
  std::vector<Vertex> perm_;
  std::uint32_t k_;
};

/// Samples e(S) for `samples` uniform k-subsets. Work is cut into fixed
/// blocks, each with its own random stream, so the result depends on the
/// seed but not on the number of workers.
EdgeCountDistribution sample_edge_counts(const Graph& g, std::uint32_t k, std::uint64_t samples,
                                         std::uint64_t seed, unsigned workers = 1);

inline constexpr std::uint64_t kSamplesPerBlock = 16384;
inline constexpr std::uint64_t kDefaultExactBudget = 100'000'000;

/// Exact distribution by revolving-door enumeration of all C(n,k) subsets.
/// Throws BudgetExceeded, without doing any work, when C(n,k) > budget.
EdgeCountDistribution exact_distribution(const Graph& g, std::uint32_t k,
                                         std::uint64_t budget = kDefaultExactBudget);

/// Exact joint counts of (e(S), e(S̄)) over all k-subsets.
std::map<std::pair<std::int64_t, std::int64_t>, std::uint64_t> exact_joint_distribution(
    const Graph& g, std::uint32_t k, std::uint64_t budget = kDefaultExactBudget);

/// S = S' ∪ T with S' a uniform (k−t)-set and T a uniform t-set of its complement.
struct SplitDraw {
  std::vector<Vertex> base;     // S'
  std::vector<Vertex> extra;    // T
  std::uint64_t base_edges = 0; // e(S')
  std::uint64_t increment = 0;  // e(S' ∪ T) − e(S')
};

/// Requires 1 ≤ t ≤ k/2 and k ≤ n.
SplitDraw split_sample(const Graph& g, std::uint32_t k, std::uint32_t t, std::uint64_t seed);

/// Repeated T draws against a fixed S'. increment(T) = Σ_{v∈T} d_{S'}(v) + e(T).
class SplitSampler {
 public:
  SplitSampler(const Graph& g, std::span<const Vertex> base, std::uint32_t t);
  std::uint64_t base_edges() const { return base_.edges(); }
  std::span<const Vertex> outside() const { return outside_; }
  /// Increment of a uniform t-subset of the complement of S'.
  std::uint64_t draw(Philox& rng);
  /// Increment for an explicit t-set disjoint from S'.
  std::uint64_t increment(std::span<const Vertex> extra);

 private:
  const Graph* g_;
  SubsetState base_;
  std::vector<Vertex> outside_;
  std::vector<std::uint64_t> scratch_;
  std::uint32_t t_;
};

/// Moments of the degrees into S for uniform x ∈ S and x̄ ∈ S̄.
struct DegreeMoments {
  Rational var_inside;        // Var_x d_S(x)
  Rational var_outside;       // Var_x̄ d_S(x̄)
  Rational cov_outside;       // Cov_x̄(d_S(x̄), d_S̄(x̄))
};

/// Requires 2 ≤ |S| ≤ n − 2.
DegreeMoments fixed_subset_degree_stats(const Graph& g, std::span<const Vertex> members);

}  // namespace sublab
