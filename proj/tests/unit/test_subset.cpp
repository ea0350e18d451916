#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>
#include <set>
#include <vector>

#include "doctest.h"
#include "sublab/errors.hpp"
#include "sublab/graph.hpp"
#include "sublab/revolving_door.hpp"
#include "sublab/subset.hpp"

using namespace sublab;

namespace {

Graph cycle4() {
  const std::vector<Edge> e{{0, 1}, {1, 2}, {2, 3}, {0, 3}};
  return Graph::from_edges(4, e);
}

// Independent recount: loops over pairs, no bit tricks.
std::uint64_t recount(const Graph& g, const std::vector<Vertex>& s) {
  std::uint64_t e = 0;
  for (std::size_t i = 0; i < s.size(); ++i)
    for (std::size_t j = i + 1; j < s.size(); ++j) e += g.adjacent(s[i], s[j]);
  return e;
}

std::vector<Vertex> random_subset(std::size_t n, std::size_t k, std::mt19937_64& gen) {
  std::vector<Vertex> all(n);
  std::iota(all.begin(), all.end(), Vertex{0});
  std::shuffle(all.begin(), all.end(), gen);
  all.resize(k);
  return all;
}

// Exact distribution by plain lexicographic enumeration with full recounts.
std::map<std::int64_t, std::uint64_t> brute_distribution(const Graph& g, std::size_t k) {
  std::map<std::int64_t, std::uint64_t> out;
  std::vector<Vertex> s(k);
  std::iota(s.begin(), s.end(), Vertex{0});
  while (true) {
    ++out[static_cast<std::int64_t>(recount(g, s))];
    std::size_t i = k;
    while (i > 0 && s[i - 1] == g.n() - k + i - 1) --i;
    if (i == 0) break;
    ++s[i - 1];
    for (std::size_t j = i; j < k; ++j) s[j] = s[j - 1] + 1;
  }
  return out;
}

}  // namespace

TEST_CASE("revolving door visits every k-subset once, one swap at a time") {
  for (std::uint32_t n = 2; n <= 11; ++n) {
    for (std::uint32_t k = 1; k < n; ++k) {
      CAPTURE(n);
      CAPTURE(k);
      RevolvingDoor door(n, k);
      std::set<std::vector<std::uint32_t>> seen;
      auto cur = std::vector<std::uint32_t>(door.current().begin(), door.current().end());
      REQUIRE(std::is_sorted(cur.begin(), cur.end()));
      seen.insert(cur);
      while (auto step = door.next()) {
        auto next = std::vector<std::uint32_t>(door.current().begin(), door.current().end());
        REQUIRE(std::is_sorted(next.begin(), next.end()));
        REQUIRE(std::adjacent_find(next.begin(), next.end()) == next.end());
        REQUIRE(next.back() < n);
        // next = cur − out + in
        std::vector<std::uint32_t> expect = cur;
        auto it = std::find(expect.begin(), expect.end(), step->out);
        REQUIRE(it != expect.end());
        REQUIRE(std::find(cur.begin(), cur.end(), step->in) == cur.end());
        *it = step->in;
        std::sort(expect.begin(), expect.end());
        REQUIRE(expect == next);
        REQUIRE(seen.insert(next).second);
        cur = next;
      }
      CHECK(seen.size() == binomial_count(n, k).value());
    }
  }
  CHECK_THROWS_AS(RevolvingDoor(5, 0), ConfigError);
  CHECK_THROWS_AS(RevolvingDoor(5, 5), ConfigError);
}

TEST_CASE("binomial counts") {
  CHECK(binomial_count(4, 2) == 6u);
  CHECK(binomial_count(24, 12) == 2704156u);
  CHECK(binomial_count(62, 31) == 465428353255261088ull);
  CHECK_FALSE(binomial_count(100, 50).has_value());
  CHECK(binomial_count(3, 5) == 0u);
}

TEST_CASE("build_state examples") {
  const Graph k4 = gen_gnm(4, 6, 0);
  const std::vector<Vertex> s01{0, 1};
  const SubsetState a = build_state(k4, s01);
  CHECK(a.edges() == 1);
  CHECK(std::vector<std::int32_t>(a.into().begin(), a.into().end()) == std::vector<std::int32_t>{1, 1, 2, 2});

  const SubsetState e = build_state(gen_gnm(6, 0, 0), s01);
  CHECK(e.edges() == 0);
  for (auto d : e.into()) CHECK(d == 0);

  const std::vector<Vertex> s02{0, 2};
  const SubsetState c = build_state(cycle4(), s02);
  CHECK(c.edges() == 0);
  CHECK(std::vector<std::int32_t>(c.into().begin(), c.into().end()) == std::vector<std::int32_t>{0, 2, 0, 2});

  const std::vector<Vertex> bad{0, 4};
  const std::vector<Vertex> rep{1, 1};
  CHECK_THROWS_AS(build_state(k4, bad), ConfigError);
  CHECK_THROWS_AS(build_state(k4, rep), ConfigError);
}

TEST_CASE("swap_delta examples") {
  const Graph k6 = gen_gnm(6, 15, 0);
  const std::vector<Vertex> s{0, 1, 2};
  const SubsetState st = build_state(k6, s);
  for (Vertex x : s)
    for (Vertex xb : {3u, 4u, 5u}) CHECK(swap_delta(k6, st, x, xb) == 0);

  const Graph c4 = cycle4();
  const std::vector<Vertex> s01{0, 1};
  SubsetState cs = build_state(c4, s01);
  CHECK(swap_delta(c4, cs, 0, 2) == 0);
  CHECK_THROWS_AS(swap_delta(c4, cs, 2, 3), ConfigError);
  CHECK_THROWS_AS(swap_delta(c4, cs, 0, 1), ConfigError);
  apply_swap(c4, cs, 0, 2);
  const std::vector<Vertex> s12{1, 2};
  CHECK(cs == build_state(c4, s12));
  CHECK(cs.edges() == 1);
}

TEST_CASE("swap deltas and updates agree with full recounts") {
  std::mt19937_64 gen(5);
  int checked = 0;
  for (std::uint64_t seed = 0; checked < 10000; ++seed) {
    const std::size_t n = 6 + seed % 140;
    const Graph g = gen_gnp(n, 0.2 + 0.6 * ((seed * 37) % 100) / 100.0, seed);
    const std::size_t k = 1 + seed % (n - 1);
    auto s = random_subset(n, k, gen);
    SubsetState st = build_state(g, s);
    REQUIRE(st.edges() == recount(g, s));
    for (int step = 0; step < 50; ++step, ++checked) {
      std::vector<Vertex> out;
      for (Vertex v = 0; v < n; ++v)
        if (!st.contains(v)) out.push_back(v);
      const std::size_t xi = gen() % s.size();
      const Vertex x = s[xi];
      const Vertex xb = out[gen() % out.size()];
      const std::int64_t delta = swap_delta(g, st, x, xb);
      const std::uint64_t before = recount(g, s);
      s[xi] = xb;
      REQUIRE(static_cast<std::int64_t>(recount(g, s)) - static_cast<std::int64_t>(before) == delta);
      apply_swap(g, st, x, xb);
      REQUIRE(st.edges() == recount(g, s));
      REQUIRE(st.complement_edges(g) == g.edge_count() - [&] {
        std::uint64_t d = 0;
        for (Vertex v : s) d += g.degree(v);
        return d;
      }() + st.edges());
    }
    REQUIRE(st == build_state(g, s));
  }
}

TEST_CASE("exact distribution examples and mean identity") {
  const auto c4 = exact_distribution(cycle4(), 2);
  CHECK(c4.kind == DistributionKind::exact);
  CHECK(c4.total == 6);
  CHECK(c4.count(0) == 2);
  CHECK(c4.count(1) == 4);

  const auto k5 = exact_distribution(gen_gnm(5, 10, 0), 3);
  CHECK(k5.total == 10);
  CHECK(k5.count(3) == 10);
  CHECK(k5.counts.size() == 1);

  for (std::uint64_t seed = 0; seed < 30; ++seed) {
    const std::size_t n = 4 + seed % 10;
    const Graph g = gen_gnm(n, (seed * 11) % (pairs_of(n) + 1), seed);
    for (std::uint32_t k = 1; k < n; ++k) {
      const auto d = exact_distribution(g, k);
      CHECK(d.mean() == Rational(BigInt(pairs_of(k)) * g.edge_count(), BigInt(pairs_of(n))));
      CHECK(d.counts == brute_distribution(g, k));
      for (const auto& [z, c] : d.counts) CHECK((z >= 0 && static_cast<std::uint64_t>(z) <= pairs_of(k)));
    }
  }
}

TEST_CASE("exact enumeration refuses oversized work") {
  const Graph g = gen_gnm(40, 300, 1);
  CHECK_THROWS_AS(exact_distribution(g, 20), BudgetExceeded);
  CHECK_THROWS_AS(exact_distribution(g, 3, 100), BudgetExceeded);
  CHECK_NOTHROW(exact_distribution(g, 3, 9880));
}

TEST_CASE("complement symmetry of the joint (e(S), e(S-bar)) counts") {
  for (std::uint64_t seed = 0; seed < 12; ++seed) {
    const std::size_t n = 5 + seed % 8;
    const Graph g = gen_gnm(n, (seed * 13 + 3) % (pairs_of(n) + 1), seed);
    for (std::uint32_t k = 1; k < n; ++k) {
      const auto a = exact_joint_distribution(g, k);
      const auto b = exact_joint_distribution(g, static_cast<std::uint32_t>(n - k));
      std::map<std::pair<std::int64_t, std::int64_t>, std::uint64_t> swapped;
      for (const auto& [zz, c] : b) swapped[{zz.second, zz.first}] = c;
      CHECK(a == swapped);
    }
  }
}

TEST_CASE("sampling examples") {
  const auto k4 = sample_edge_counts(gen_gnm(4, 6, 0), 2, 1000, 1);
  CHECK(k4.count(1) == 1000);

  const std::uint64_t s = 1000000;
  const auto c4 = sample_edge_counts(cycle4(), 2, s, 2);
  CHECK(c4.total == s);
  const double sd = std::sqrt((2.0 / 6) * (4.0 / 6) / s);
  CHECK(std::abs(c4.pmf(1) - 4.0 / 6) <= 4 * sd);
  CHECK(std::abs(c4.pmf(0) - 2.0 / 6) <= 4 * sd);

  CHECK_THROWS_AS(sample_edge_counts(cycle4(), 1, 10, 1), ConfigError);
  CHECK_THROWS_AS(sample_edge_counts(cycle4(), 3, 10, 1), ConfigError);
}

TEST_CASE("sampling is reproducible and independent of the worker count") {
  const Graph g = gen_gnm(60, 800, 4);
  const auto a = sample_edge_counts(g, 25, 100000, 17, 1);
  const auto b = sample_edge_counts(g, 25, 100000, 17, 3);
  const auto c = sample_edge_counts(g, 25, 100000, 18, 1);
  CHECK(a.counts == b.counts);
  CHECK_FALSE(a.counts == c.counts);
  // k > n/2 is drawn through the complement; same law as direct counting
  const auto hi = sample_edge_counts(g, 40, 200000, 5);
  const auto lo_mean = to_double(hi.mean());
  const double exact_mean = static_cast<double>(pairs_of(40)) * g.edge_count() / pairs_of(60);
  CHECK(std::abs(lo_mean - exact_mean) < 0.5);
}

TEST_CASE("empirical distributions converge to the exact one") {
  for (std::uint64_t seed = 0; seed < 6; ++seed) {
    const std::size_t n = 9 + seed;
    const Graph g = gen_gnm(n, pairs_of(n) / 2, seed);
    const std::uint32_t k = static_cast<std::uint32_t>(n / 2);
    const std::uint64_t samples = 200000;
    const auto exact = exact_distribution(g, k);
    const auto emp = sample_edge_counts(g, k, samples, seed + 100);
    CHECK(total_variation(exact, emp) <= 4 * std::sqrt(static_cast<double>(pairs_of(k)) / samples));
  }
  const Graph g20 = gen_gnm(20, 95, 1);
  const auto exact = exact_distribution(g20, 10);
  const auto emp = sample_edge_counts(g20, 10, 1000000, 1);
  CHECK(total_variation(exact, emp) <= 0.005);
}

TEST_CASE("split draws") {
  const Graph g = gen_gnm(30, 200, 3);
  CHECK_THROWS_AS(split_sample(g, 10, 10, 1), ConfigError);
  CHECK_THROWS_AS(split_sample(g, 10, 0, 1), ConfigError);
  CHECK_THROWS_AS(split_sample(g, 10, 6, 1), ConfigError);
  for (std::uint64_t seed = 0; seed < 200; ++seed) {
    const auto d = split_sample(g, 10, 5, seed);
    REQUIRE(d.base.size() == 5);
    REQUIRE(d.extra.size() == 5);
    std::vector<Vertex> all = d.base;
    all.insert(all.end(), d.extra.begin(), d.extra.end());
    std::set<Vertex> uniq(all.begin(), all.end());
    REQUIRE(uniq.size() == 10);
    REQUIRE(d.base_edges == recount(g, d.base));
    REQUIRE(d.increment == recount(g, all) - recount(g, d.base));
  }
  const Graph empty = gen_gnm(30, 0, 0);
  for (std::uint64_t seed = 0; seed < 20; ++seed) CHECK(split_sample(empty, 12, 6, seed).increment == 0);

  // The union S' ∪ T is a uniform k-set: compare e(S' ∪ T) with the exact law.
  const Graph h = gen_gnm(10, 22, 9);
  const auto exact = exact_distribution(h, 4);
  EdgeCountDistribution emp;
  emp.total = 60000;
  for (std::uint64_t seed = 0; seed < emp.total; ++seed) {
    const auto d = split_sample(h, 4, 2, seed);
    ++emp.counts[static_cast<std::int64_t>(d.base_edges + d.increment)];
  }
  CHECK(total_variation(exact, emp) <= 4 * std::sqrt(6.0 / emp.total));
}

TEST_CASE("split sampler increments for explicit sets") {
  const Graph g = gen_gnm(25, 150, 2);
  const std::vector<Vertex> base{0, 1, 2, 3, 4, 5};
  SplitSampler sp(g, base, 3);
  const std::vector<Vertex> extra{7, 9, 20};
  std::vector<Vertex> all = base;
  all.insert(all.end(), extra.begin(), extra.end());
  CHECK(sp.increment(extra) == recount(g, all) - recount(g, base));
  const std::vector<Vertex> clash{2, 9, 20};
  CHECK_THROWS_AS(sp.increment(clash), ConfigError);
}

TEST_CASE("fixed subset degree moments") {
  const std::vector<Vertex> s01{0, 1};
  const auto k4 = fixed_subset_degree_stats(gen_gnm(4, 6, 0), s01);
  CHECK(k4.var_inside == 0);
  const auto e = fixed_subset_degree_stats(gen_gnm(8, 0, 0), s01);
  CHECK(e.var_inside == 0);
  CHECK(e.var_outside == 0);
  CHECK(e.cov_outside == 0);

  // Brute-force comparison with two-pass definitions.
  std::mt19937_64 gen(3);
  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    const std::size_t n = 8 + seed;
    const Graph g = gen_gnm(n, (seed * 19) % pairs_of(n), seed);
    const auto s = random_subset(n, n / 3 + 2, gen);
    const auto m = fixed_subset_degree_stats(g, s);
    std::set<Vertex> in(s.begin(), s.end());
    std::vector<Rational> a, b, c;
    for (Vertex v = 0; v < n; ++v) {
      long long ds = 0;
      for (Vertex u : s) ds += g.adjacent(u, v);
      if (in.count(v))
        a.emplace_back(ds);
      else {
        b.emplace_back(ds);
        c.emplace_back(static_cast<long long>(g.degree(v)) - ds);
      }
    }
    auto mean = [](const std::vector<Rational>& x) {
      Rational t = 0;
      for (const auto& v : x) t += v;
      return t / static_cast<long long>(x.size());
    };
    Rational va = 0, vb = 0, cv = 0;
    const Rational ma = mean(a), mb = mean(b), mc = mean(c);
    for (const auto& v : a) va += (v - ma) * (v - ma);
    for (std::size_t i = 0; i < b.size(); ++i) {
      vb += (b[i] - mb) * (b[i] - mb);
      cv += (b[i] - mb) * (c[i] - mc);
    }
    CHECK(m.var_inside == va / static_cast<long long>(a.size()));
    CHECK(m.var_outside == vb / static_cast<long long>(b.size()));
    CHECK(m.cov_outside == cv / static_cast<long long>(b.size()));
  }
}

TEST_CASE("inside degree variance concentrates near p(1-p)k") {
  // |Var_x d_S(x) − p(1−p)k| ≤ n^0.55 in at least 99 of 100 trials on G(2000, 1/2).
  const std::size_t n = 2000, k = 1000;
  const double p = 0.5;
  int ok = 0;
  std::mt19937_64 gen(8);
  for (std::uint64_t trial = 0; trial < 100; ++trial) {
    const Graph g = gen_gnp(n, p, trial);
    const auto m = fixed_subset_degree_stats(g, random_subset(n, k, gen));
    ok += std::abs(to_double(m.var_inside) - p * (1 - p) * k) <= std::pow(double(n), 0.55);
  }
  CHECK(ok >= 99);
}
