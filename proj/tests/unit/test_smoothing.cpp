#include <algorithm>
#include <boost/multiprecision/cpp_bin_float.hpp>
#include <cmath>
#include <string>

#include "doctest.h"
#include "sublab/errors.hpp"
#include "sublab/graph.hpp"
#include "sublab/smoothing.hpp"
#include "sublab/subset.hpp"

using namespace sublab;
using Float50 = boost::multiprecision::cpp_bin_float_50;

namespace {

// The recurrence in 50-digit arithmetic.
struct RefStep {
  std::uint64_t a, t, next;
};
std::vector<RefStep> reference_schedule(std::uint64_t n, double beta, double eps, std::uint64_t* a_final) {
  const Float50 N(n), b(beta);
  const Float50 lo = pow(N, 1 - 2.5 * b - Float50(eps)), hi = pow(N, 1 - 2.5 * b);
  std::vector<RefStep> out;
  std::uint64_t a = 1;
  while (!(Float50(a) >= lo && Float50(a) <= hi)) {
    const Float50 t = ceil(cbrt(Float50(a) * a * pow(N, 1 - 4 * b)));
    const Float50 r = floor(cbrt(Float50(a) * pow(N, 2 - 5 * b)));
    out.push_back({a, t.convert_to<std::uint64_t>(), r.convert_to<std::uint64_t>()});
    a = out.back().next;
    REQUIRE(out.size() < 64);
  }
  *a_final = a;
  return out;
}

EdgeCountDistribution from_counts(const std::map<std::int64_t, std::uint64_t>& counts, std::uint64_t n = 10) {
  EdgeCountDistribution d;
  d.counts = counts;
  for (const auto& [z, c] : counts) d.total += c;
  d.n = n;
  return d;
}

double brute_difference(const EdgeCountDistribution& d, std::uint64_t a, std::uint64_t r, ZWindow w) {
  double best = 0;
  for (std::int64_t z1 = w.lo; z1 <= w.hi; ++z1)
    for (std::int64_t z2 = w.lo; z2 <= w.hi; ++z2) {
      if (std::abs(z1 - z2) > static_cast<std::int64_t>(r)) continue;
      const double p1 = double(d.range_count(z1, z1 + std::int64_t(a) - 1)) / d.total;
      const double p2 = double(d.range_count(z2, z2 + std::int64_t(a) - 1)) / d.total;
      best = std::max(best, std::abs(p1 - p2));
    }
  return best;
}

}  // namespace

TEST_CASE("valid triples") {
  const std::uint64_t n = 1000000;
  const double beta = 1.0 / 14;
  const auto unit = make_valid_triple(1, 1, n, beta);
  CHECK(unit.t == static_cast<std::uint64_t>(std::ceil(std::pow(1e6, (1 - 4 * beta) / 3))));
  CHECK(unit.valid());

  CHECK(make_valid_triple(1931, 24040, n, beta).valid());
  CHECK(make_valid_triple(1930, 24038, n, beta).valid());

  CHECK_THROWS_WITH_AS(make_valid_triple(5, 4, n, beta), doctest::Contains("a <= r"), ConfigError);
  CHECK_THROWS_WITH_AS(make_valid_triple(2, 100000, n, beta), doctest::Contains("r^3"), ConfigError);
  CHECK_THROWS_AS(make_valid_triple(1, 1, n, 0.1), ConfigError);

  const auto bad = check_triple(10, 5, 1, n, beta);
  CHECK_FALSE(bad.cond_i);
  CHECK_FALSE(bad.cond_ii);
}

TEST_CASE("schedule follows the recurrence") {
  for (double beta : {1.0 / 14, 1.0 / 20})
    for (std::uint64_t n : {1000ull, 2000ull, 10000ull, 1000000ull}) {
      CAPTURE(beta);
      CAPTURE(n);
      const auto s = schedule(n, beta, 0.05);
      std::uint64_t a_final = 0;
      const auto ref = reference_schedule(n, beta, 0.05, &a_final);
      REQUIRE(s.steps.size() == ref.size());
      CHECK(s.j0 == ref.size());
      CHECK(s.a == a_final);
      std::uint64_t t_sum = 0;
      for (std::size_t j = 0; j < ref.size(); ++j) {
        CHECK(s.steps[j].triple.a == ref[j].a);
        CHECK(s.steps[j].triple.t == ref[j].t);
        CHECK(s.steps[j].triple.r == ref[j].next);
        CHECK(s.steps[j].triple.valid());
        CHECK(s.steps[j].shrinks);
        t_sum += ref[j].t;
        if (j >= 1) {
          const double trend = schedule_trend(n, beta, static_cast<std::uint32_t>(j));
          CHECK(double(ref[j].a) <= 2 * trend);
          CHECK(double(ref[j].a) >= trend / 2);
        }
      }
      CHECK(s.t_sum == t_sum);
      CHECK(s.all_valid);
      CHECK(s.monotone);
      CHECK(s.in_target());
      // Σt_j ≤ k/2 is asymptotic; at n ≤ 2000 with β = 1/20 the extra sets overflow.
      if (n >= 10000) CHECK(s.fits(n / 2));
    }
}

TEST_CASE("schedule rejects bad parameters") {
  CHECK_THROWS_AS(schedule(1000, 0.1, 0.01), ConfigError);
  CHECK_THROWS_AS(schedule(1000, 0.0, 0.01), ConfigError);
  CHECK_THROWS_AS(schedule(1000, 1.0 / 14, 0.08), ConfigError);
  CHECK_THROWS_AS(schedule(1000, 1.0 / 14, 0.0), ConfigError);
  CHECK_THROWS_AS(schedule(5, 1.0 / 14, 0.05), NumericError);
}

TEST_CASE("window on trivial graphs") {
  const Graph empty = gen_gnm(60, 0, 1);
  const Graph full = gen_gnm(60, pairs_of(60), 1);
  for (auto mode : {WindowMode::disjoint_family, WindowMode::uniform_t}) {
    const auto e = window_vs_binomial(empty, 30, 5, 0, 0, mode, 100, 3);
    CHECK(e.deviation == 0);
    CHECK(e.proportion == 1);
    const auto trials = static_cast<std::int64_t>(binomial_model(30, 5, 1).trials);
    const auto f = window_vs_binomial(full, 30, 5, trials, trials, mode, 100, 3);
    CHECK(f.deviation == 0);
  }
  CHECK_THROWS_AS(window_vs_binomial(empty, 30, 16, 0, 0, WindowMode::uniform_t, 10, 1), ConfigError);
  CHECK_THROWS_AS(window_vs_binomial(empty, 30, 0, 0, 0, WindowMode::uniform_t, 10, 1), ConfigError);
  CHECK_THROWS_AS(window_vs_binomial(empty, 30, 5, 3, 2, WindowMode::uniform_t, 10, 1), ConfigError);
  CHECK_THROWS_AS(window_vs_binomial(empty, 30, 5, 0, 1000, WindowMode::uniform_t, 10, 1), ConfigError);
}

TEST_CASE("disjoint family proportion") {
  const Graph g = gen_gnp(300, 0.3, 11);
  const std::uint32_t k = 150, t = 20;
  const auto r = window_vs_binomial(g, k, t, 700, 900, WindowMode::disjoint_family, 0, 5);
  CHECK(r.trials == (300 - k + t) / t);

  // Same S' as the call above, then an independent recount per family.
  Philox rng(5, stream_id(StreamTag::window, 0));
  SubsetSampler sampler(300, k - t);
  const auto base = sampler.draw(rng);
  SplitSampler split(g, base, t);
  auto families = disjoint_family(split.outside(), t);
  REQUIRE(families.size() == r.trials);
  const std::uint64_t base_edges = induced_edge_count(g, base);
  std::uint64_t hits = 0;
  for (const auto& f : families) {
    std::vector<Vertex> all(base.begin(), base.end());
    all.insert(all.end(), f.begin(), f.end());
    const auto inc = induced_edge_count(g, all) - base_edges;
    hits += inc >= 700 && inc <= 900;
  }
  CHECK(r.proportion == double(hits) / families.size());

  const double forward = family_proportion(split, families, 700, 900);
  std::reverse(families.begin(), families.end());
  CHECK(family_proportion(split, families, 700, 900) == forward);
}

TEST_CASE("uniform-T window on G(2000, 1/2)") {
  const Graph g = gen_gnp(2000, 0.5, 8);
  const auto s = schedule(2000, 1.0 / 14, 0.05);
  const auto y = binomial_model(1000, 50, 0.5);
  const auto lo = static_cast<std::int64_t>(std::ceil(y.mean() - s.a / 2.0));
  const auto hi = lo + static_cast<std::int64_t>(s.a) - 1;
  const auto r = window_vs_binomial(g, 1000, 50, lo, hi, WindowMode::uniform_t, 100000, 1, 0.5);
  CHECK(r.trials == 100000);
  CHECK(r.deviation <= 0.02);
  const auto again = window_vs_binomial(g, 1000, 50, lo, hi, WindowMode::uniform_t, 100000, 1, 0.5);
  CHECK(again.proportion == r.proportion);
}

TEST_CASE("smoothing defect identities") {
  const Graph g = gen_gnm(20, 95, 3);
  const auto exact = exact_distribution(g, 10);
  const ZWindow w{0, 45};
  CHECK(smoothing_defect(exact, 1, w).value == 0);
  const auto emp = sample_edge_counts(g, 10, 5000, 2);
  CHECK(smoothing_defect(emp, 1, w).value == 0);

  for (std::uint64_t a : {1ull, 2ull, 5ull, 9ull}) {
    const auto win = window_counts(exact, a, w.lo, w.hi);
    for (std::int64_t z = w.lo; z <= w.hi; ++z) {
      std::uint64_t s = 0;
      for (std::uint64_t i = 0; i < a; ++i) s += exact.count(z + static_cast<std::int64_t>(i));
      REQUIRE(win[static_cast<std::size_t>(z - w.lo)] == s);
    }
  }

  std::map<std::int64_t, std::uint64_t> flat;
  for (std::int64_t z = 0; z < 100; ++z) flat[z] = 5;
  const auto uni = from_counts(flat);
  for (std::uint64_t a : {2ull, 4ull, 5ull, 10ull, 25ull})
    CHECK(smoothing_defect(uni, a, {0, 100 - static_cast<std::int64_t>(a)}).value == 0);
  CHECK(smoothing_defect(uni, 5, {0, 99}).value > 0);
  CHECK_THROWS_AS(smoothing_defect(uni, 0, {0, 99}), ConfigError);
}

TEST_CASE("smoothing defect on the exact n=24 distribution") {
  const Graph g = gen_gnm(24, pairs_of(24) / 2, 17);
  const auto exact = exact_distribution(g, 12);
  const auto model = normal_model(24, 12, g.edge_count());
  const auto w = z_window(model, 2);
  const auto a = static_cast<std::uint64_t>(std::ceil(std::pow(24.0, 0.8)));
  const auto sd = smoothing_defect(exact, a, w);

  Rational best = 0;
  for (std::int64_t z = w.lo; z <= w.hi; ++z) {
    Rational mass = 0;
    for (std::uint64_t i = 0; i < a; ++i) mass += Rational(exact.count(z + std::int64_t(i)), exact.total);
    Rational d = Rational(exact.count(z), exact.total) - mass / BigInt(a);
    if (d < 0) d = -d;
    if (d > best) best = d;
  }
  CHECK(sd.value == doctest::Approx(to_double(best)).epsilon(1e-15));

  // |P(z) − mean of P(z..z+a−1)| ≤ max_{i<a} |P(z) − P(z+i)|.
  const auto envelope = difference_defect(exact, 1, a - 1, {w.lo, w.hi + std::int64_t(a) - 1});
  CHECK(sd.value <= envelope.value);
}

TEST_CASE("difference defect") {
  const Graph g = gen_gnm(20, 95, 3);
  const auto exact = exact_distribution(g, 10);
  const ZWindow w{10, 40};
  const auto d = difference_defect(exact, 3, 10, w);
  CHECK(d.value == doctest::Approx(brute_difference(exact, 3, 10, w)).epsilon(1e-15));
  CHECK(std::abs(d.z1 - d.z2) <= 10);
  const double at = std::abs(double(exact.range_count(d.z1, d.z1 + 2)) - double(exact.range_count(d.z2, d.z2 + 2)));
  CHECK(at / exact.total == d.value);
  for (std::uint64_t a = 1; a <= 6; ++a)
    for (std::uint64_t r = a; r <= 12; r += 3)
      CHECK(difference_defect(exact, a, r, w).value ==
            doctest::Approx(brute_difference(exact, a, r, w)).epsilon(1e-15));
  CHECK_THROWS_AS(difference_defect(exact, 4, 3, w), ConfigError);

  std::map<std::int64_t, std::uint64_t> sym;
  for (std::int64_t z = 0; z <= 40; ++z) sym[z] = static_cast<std::uint64_t>(400 - (z - 20) * (z - 20));
  const auto sd = from_counts(sym);
  const std::uint64_t a = 4;
  const auto win = window_counts(sd, a, -5, 45);
  for (std::int64_t z = -5; z <= 45; ++z) {
    const std::int64_t mirror = 40 - z - std::int64_t(a) + 1;
    if (mirror < -5 || mirror > 45) continue;
    CHECK(win[std::size_t(z + 5)] == win[std::size_t(mirror + 5)]);
  }
  CHECK(difference_defect(sd, 1, 1, {20, 20}).value == 0);

  const auto peak = window_counts(exact, 3, -2, 45);
  const double best = double(*std::max_element(peak.begin(), peak.end())) / exact.total;
  CHECK(d.implied_bound == doctest::Approx(best * 20 / 3));
}

TEST_CASE("difference defect at n=2000 stays below n^(-1-beta+0.1)") {
  const std::uint64_t n = 2000;
  const double beta = 1.0 / 14;
  const Graph g = gen_gnm(n, pairs_of(n) / 2, 21);
  const auto dist = sample_edge_counts(g, 1000, 10000000, 4);
  const auto model = normal_model(n, 1000, g.edge_count());
  const auto step = schedule(n, beta, 0.05).steps.at(0).triple;
  REQUIRE(step.a == 1);
  const auto d = difference_defect(dist, step.a, step.r, z_window(model, 2));
  // Each window sum has multinomial sd ≤ sqrt(P/samples); a difference of two at most twice that.
  const auto win = window_counts(dist, step.a, d.z1, d.z1);
  const double noise = 2 * std::sqrt(double(win[0]) / dist.total / dist.total);
  CHECK(d.value / step.a <= std::pow(double(n), -1 - beta + 0.1) + 4 * noise / step.a);
}
