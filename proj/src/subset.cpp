#include "sublab/subset.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>
#include <unordered_map>

#include "sublab/errors.hpp"
#include "sublab/parallel.hpp"
#include "sublab/revolving_door.hpp"
#include "sublab/simd.hpp"

namespace sublab {

namespace {

void set_bit(std::vector<std::uint64_t>& words, Vertex v) { words[v >> 6] |= std::uint64_t{1} << (v & 63); }
void clear_bit(std::vector<std::uint64_t>& words, Vertex v) { words[v >> 6] &= ~(std::uint64_t{1} << (v & 63)); }

void check_swap(const Graph& g, const SubsetState& st, Vertex x, Vertex xb) {
  require(x < g.n() && xb < g.n(), "swap vertex out of range");
  require(st.n() == g.n(), "subset state belongs to a different graph");
  if (!st.contains(x)) throw ConfigError("swap source " + std::to_string(x) + " is not in S");
  if (st.contains(xb)) throw ConfigError("swap target " + std::to_string(xb) + " is already in S");
}

void check_enumeration(const Graph& g, std::uint32_t k, std::uint64_t budget) {
  require(k >= 1 && k < g.n(), "exact enumeration needs 1 <= k <= n-1");
  const auto subsets = binomial_count(g.n(), k);
  if (!subsets || *subsets > budget)
    throw BudgetExceeded("C(" + std::to_string(g.n()) + "," + std::to_string(k) +
                         ") subsets exceed the enumeration budget of " + std::to_string(budget));
}

}  // namespace

SubsetState build_state(const Graph& g, std::span<const Vertex> members) {
  const std::size_t n = g.n();
  SubsetState st;
  st.mask_.assign(g.stride(), 0);
  st.into_.assign(n, 0);
  st.slot_.assign(n, 0);
  st.members_.assign(members.begin(), members.end());
  for (std::size_t i = 0; i < members.size(); ++i) {
    const Vertex v = members[i];
    if (v >= n) throw ConfigError("subset vertex " + std::to_string(v) + " out of range");
    if (st.contains(v)) throw ConfigError("subset vertex " + std::to_string(v) + " repeated");
    set_bit(st.mask_, v);
    st.slot_[v] = static_cast<std::uint32_t>(i);
    st.degree_sum_ += g.degree(v);
  }
  const auto& kt = simd::kernels();
  st.edges_ = kt.induced_edges(g.rows(), g.stride(), st.mask_.data(), members.data(), members.size());
  for (Vertex v = 0; v < n; ++v) {
    const Vertex one[1] = {v};
    st.into_[v] = static_cast<std::int32_t>(kt.cross_edges(g.rows(), g.stride(), st.mask_.data(), one, 1));
  }
  return st;
}

std::int64_t swap_delta(const Graph& g, const SubsetState& st, Vertex x, Vertex xb) {
  check_swap(g, st, x, xb);
  return std::int64_t{st.into(xb)} - st.into(x) - (g.adjacent(x, xb) ? 1 : 0);
}

void apply_swap(const Graph& g, SubsetState& st, Vertex x, Vertex xb) {
  const std::int64_t delta = swap_delta(g, st, x, xb);
  simd::kernels().shift_degrees(st.into_.data(), g.row(xb), g.row(x), g.n());
  st.edges_ = static_cast<std::uint64_t>(static_cast<std::int64_t>(st.edges_) + delta);
  st.degree_sum_ = st.degree_sum_ + g.degree(xb) - g.degree(x);
  clear_bit(st.mask_, x);
  set_bit(st.mask_, xb);
  const std::uint32_t slot = st.slot_[x];
  st.members_[slot] = xb;
  st.slot_[xb] = slot;
}

std::uint64_t induced_edge_count(const Graph& g, std::span<const Vertex> members) {
  std::vector<std::uint64_t> mask(g.stride(), 0);
  for (Vertex v : members) {
    require(v < g.n(), "subset vertex out of range");
    set_bit(mask, v);
  }
  return simd::kernels().induced_edges(g.rows(), g.stride(), mask.data(), members.data(), members.size());
}

std::string_view name(DistributionKind kind) {
  return kind == DistributionKind::exact ? "exact" : "empirical";
}

std::uint64_t EdgeCountDistribution::range_count(std::int64_t lo, std::int64_t hi) const {
  std::uint64_t c = 0;
  if (lo > hi) return 0;
  for (auto it = counts.lower_bound(lo); it != counts.end() && it->first <= hi; ++it) c += it->second;
  return c;
}

Rational EdgeCountDistribution::mean() const {
  require(total > 0, "mean of an empty distribution");
  BigInt s = 0;
  for (const auto& [z, c] : counts) s += BigInt(z) * c;
  return Rational(s, BigInt(total));
}

double total_variation(const EdgeCountDistribution& a, const EdgeCountDistribution& b) {
  require(a.total > 0 && b.total > 0, "total variation of an empty distribution");
  const double ta = static_cast<double>(a.total);
  const double tb = static_cast<double>(b.total);
  double sum = 0;
  auto ia = a.counts.begin();
  auto ib = b.counts.begin();
  while (ia != a.counts.end() || ib != b.counts.end()) {
    if (ib == b.counts.end() || (ia != a.counts.end() && ia->first < ib->first)) {
      sum += static_cast<double>(ia->second) / ta;
      ++ia;
    } else if (ia == a.counts.end() || ib->first < ia->first) {
      sum += static_cast<double>(ib->second) / tb;
      ++ib;
    } else {
      sum += std::abs(static_cast<double>(ia->second) / ta - static_cast<double>(ib->second) / tb);
      ++ia;
      ++ib;
    }
  }
  return sum / 2;
}

SubsetSampler::SubsetSampler(std::size_t n, std::uint32_t k) : perm_(n), k_(k) {
  require(k <= n, "subset size exceeds vertex count");
  std::iota(perm_.begin(), perm_.end(), Vertex{0});
}

std::span<const Vertex> SubsetSampler::draw(Philox& rng) {
  // A partial shuffle of any fixed arrangement yields a uniform k-prefix, so
  // the permutation is reused between draws.
  const auto n = static_cast<std::uint32_t>(perm_.size());
  for (std::uint32_t i = 0; i < k_; ++i) {
    const std::uint32_t j = i + uniform_below(rng, n - i);
    std::swap(perm_[i], perm_[j]);
  }
  return members();
}

EdgeCountDistribution sample_edge_counts(const Graph& g, std::uint32_t k, std::uint64_t samples,
                                         std::uint64_t seed, unsigned workers) {
  const std::size_t n = g.n();
  require(n >= 4 && k >= 2 && k <= n - 2,
          "sampling needs 2 <= k <= n-2, got n=" + std::to_string(n) + " k=" + std::to_string(k));
  require(samples >= 1, "sample count must be positive");

  // The complement of a uniform k-set is a uniform (n−k)-set; draw the
  // smaller side and use e(S) = M − Σ_{v∈S̄} d(v) + e(S̄) when it is S̄.
  const bool via_complement = n - k < k;
  const auto side = static_cast<std::uint32_t>(via_complement ? n - k : k);
  const std::uint64_t support = pairs_of(k) + 1;
  const bool dense = support <= (std::uint64_t{1} << 24);
  const std::uint64_t blocks = (samples + kSamplesPerBlock - 1) / kSamplesPerBlock;
  workers = static_cast<unsigned>(std::min<std::uint64_t>(resolve_workers(workers), blocks));

  struct Local {
    std::vector<std::uint64_t> dense;
    std::unordered_map<std::int64_t, std::uint64_t> sparse;
  };
  std::vector<Local> locals(workers);
  for (auto& l : locals)
    if (dense) l.dense.assign(support, 0);

  const auto& kt = simd::kernels();
  parallel_blocks(blocks, workers, [&](std::uint64_t block, unsigned w) {
    Local& local = locals[w];
    Philox rng(seed, stream_id(StreamTag::sample, block));
    SubsetSampler sampler(n, side);
    std::vector<std::uint64_t> mask(g.stride(), 0);
    const std::uint64_t begin = block * kSamplesPerBlock;
    const std::uint64_t end = std::min(samples, begin + kSamplesPerBlock);
    for (std::uint64_t s = begin; s < end; ++s) {
      const auto members = sampler.draw(rng);
      for (Vertex v : members) set_bit(mask, v);
      std::uint64_t e = kt.induced_edges(g.rows(), g.stride(), mask.data(), members.data(), members.size());
      if (via_complement) {
        std::uint64_t deg = 0;
        for (Vertex v : members) deg += g.degree(v);
        e = g.edge_count() - deg + e;
      }
      for (Vertex v : members) clear_bit(mask, v);
      if (dense)
        ++local.dense[e];
      else
        ++local.sparse[static_cast<std::int64_t>(e)];
    }
  });

  EdgeCountDistribution dist;
  dist.kind = DistributionKind::empirical;
  dist.total = samples;
  dist.n = n;
  dist.k = k;
  dist.edges = g.edge_count();
  dist.seed = seed;
  for (const auto& l : locals) {
    for (std::uint64_t z = 0; z < l.dense.size(); ++z)
      if (l.dense[z] != 0) dist.counts[static_cast<std::int64_t>(z)] += l.dense[z];
    for (const auto& [z, c] : l.sparse) dist.counts[z] += c;
  }
  return dist;
}

EdgeCountDistribution exact_distribution(const Graph& g, std::uint32_t k, std::uint64_t budget) {
  check_enumeration(g, k, budget);
  RevolvingDoor door(static_cast<std::uint32_t>(g.n()), k);
  SubsetState st = build_state(g, door.current());
  std::vector<std::uint64_t> counts(pairs_of(k) + 1, 0);
  std::uint64_t total = 0;
  while (true) {
    ++counts[st.edges()];
    ++total;
    const auto step = door.next();
    if (!step) break;
    apply_swap(g, st, step->out, step->in);
  }

  EdgeCountDistribution dist;
  dist.kind = DistributionKind::exact;
  dist.total = total;
  dist.n = g.n();
  dist.k = k;
  dist.edges = g.edge_count();
  for (std::uint64_t z = 0; z < counts.size(); ++z)
    if (counts[z] != 0) dist.counts[static_cast<std::int64_t>(z)] = counts[z];
  if (total != binomial_count(g.n(), k).value())
    throw NumericError("revolving-door enumeration visited the wrong number of subsets");
  return dist;
}

std::map<std::pair<std::int64_t, std::int64_t>, std::uint64_t> exact_joint_distribution(
    const Graph& g, std::uint32_t k, std::uint64_t budget) {
  check_enumeration(g, k, budget);
  RevolvingDoor door(static_cast<std::uint32_t>(g.n()), k);
  SubsetState st = build_state(g, door.current());
  std::map<std::pair<std::int64_t, std::int64_t>, std::uint64_t> joint;
  while (true) {
    ++joint[{static_cast<std::int64_t>(st.edges()), static_cast<std::int64_t>(st.complement_edges(g))}];
    const auto step = door.next();
    if (!step) break;
    apply_swap(g, st, step->out, step->in);
  }
  return joint;
}

SplitSampler::SplitSampler(const Graph& g, std::span<const Vertex> base, std::uint32_t t)
    : g_(&g), base_(build_state(g, base)), scratch_(g.stride(), 0), t_(t) {
  for (Vertex v = 0; v < g.n(); ++v)
    if (!base_.contains(v)) outside_.push_back(v);
  require(t >= 1 && t <= outside_.size(), "extra set size out of range");
}

std::uint64_t SplitSampler::draw(Philox& rng) {
  const auto m = static_cast<std::uint32_t>(outside_.size());
  for (std::uint32_t i = 0; i < t_; ++i) {
    const std::uint32_t j = i + uniform_below(rng, m - i);
    std::swap(outside_[i], outside_[j]);
  }
  return increment({outside_.data(), t_});
}

std::uint64_t SplitSampler::increment(std::span<const Vertex> extra) {
  std::uint64_t cross = 0;
  for (Vertex v : extra) {
    require(v < g_->n() && !base_.contains(v), "extra vertex must lie outside S'");
    require(((scratch_[v >> 6] >> (v & 63)) & 1) == 0, "extra vertex repeated");
    set_bit(scratch_, v);
    cross += static_cast<std::uint64_t>(base_.into(v));
  }
  const std::uint64_t inner =
      simd::kernels().induced_edges(g_->rows(), g_->stride(), scratch_.data(), extra.data(), extra.size());
  for (Vertex v : extra) clear_bit(scratch_, v);
  return cross + inner;
}

SplitDraw split_sample(const Graph& g, std::uint32_t k, std::uint32_t t, std::uint64_t seed) {
  require(k <= g.n(), "k exceeds n");
  require(t >= 1 && 2 * std::uint64_t{t} <= k,
          "split needs 1 <= t <= k/2, got k=" + std::to_string(k) + " t=" + std::to_string(t));
  Philox rng(seed, stream_id(StreamTag::split, 0));
  SubsetSampler sampler(g.n(), k - t);
  const auto base = sampler.draw(rng);
  SplitSampler split(g, base, t);
  SplitDraw out;
  out.base.assign(base.begin(), base.end());
  out.base_edges = split.base_edges();
  out.increment = split.draw(rng);
  out.extra.assign(split.outside().begin(), split.outside().begin() + t);
  return out;
}

DegreeMoments fixed_subset_degree_stats(const Graph& g, std::span<const Vertex> members) {
  const std::size_t n = g.n();
  const std::size_t k = members.size();
  require(k >= 2 && k + 2 <= n, "degree moments need 2 <= |S| <= n-2");
  const SubsetState st = build_state(g, members);
  BigInt s1 = 0, s2 = 0;           // over S: Σ d_S, Σ d_S²
  BigInt o1 = 0, o2 = 0, oc = 0;   // over S̄: Σ d_S, Σ d_S², Σ d_S·d_S̄
  BigInt c1 = 0;                   // over S̄: Σ d_S̄
  for (Vertex v = 0; v < n; ++v) {
    const std::int64_t a = st.into(v);
    if (st.contains(v)) {
      s1 += a;
      s2 += a * a;
    } else {
      const std::int64_t b = std::int64_t{g.degree(v)} - a;
      o1 += a;
      o2 += a * a;
      oc += a * b;
      c1 += b;
    }
  }
  const BigInt kk = k;
  const BigInt kb = n - k;
  DegreeMoments m;
  m.var_inside = Rational(kk * s2 - s1 * s1, kk * kk);
  m.var_outside = Rational(kb * o2 - o1 * o1, kb * kb);
  m.cov_outside = Rational(kb * oc - o1 * c1, kb * kb);
  return m;
}

}  // namespace sublab
