#include <algorithm>
#include <boost/math/special_functions/erf.hpp>
#include <boost/multiprecision/cpp_bin_float.hpp>
#include <cmath>
#include <numbers>
#include <random>
#include <vector>

#include "doctest.h"
#include "sublab/errors.hpp"
#include "sublab/graph.hpp"
#include "sublab/limit_models.hpp"
#include "sublab/subset.hpp"

using namespace sublab;
using Float50 = boost::multiprecision::cpp_bin_float_50;

namespace {

// Φ((z − μ)/σ) in 50-digit arithmetic.
double reference_cdf(double mu, double sigma, double z) {
  const Float50 x = (Float50(z) - Float50(mu)) / (Float50(sigma) * boost::multiprecision::sqrt(Float50(2)));
  return static_cast<double>(Float50(0.5) * boost::math::erfc(-x));
}

// Exact pmf of Bin(n, a/b) as a rational, rounded once.
std::vector<double> exact_pmf(unsigned n, unsigned a, unsigned b) {
  std::vector<double> out(n + 1);
  BigInt binom = 1;
  const BigInt den = boost::multiprecision::pow(BigInt(b), n);
  for (unsigned m = 0; m <= n; ++m) {
    if (m > 0) binom = binom * (n - m + 1) / m;
    const BigInt num = binom * boost::multiprecision::pow(BigInt(a), m) * boost::multiprecision::pow(BigInt(b - a), n - m);
    out[m] = to_double(Rational(num, den));
  }
  return out;
}

Graph cycle4() {
  const std::vector<Edge> e{{0, 1}, {1, 2}, {2, 3}, {0, 3}};
  return Graph::from_edges(4, e);
}

}  // namespace

TEST_CASE("normal model parameters") {
  const auto m = normal_model(4, 2, 3);
  CHECK(m.mu_q == Rational(1, 2));
  CHECK(m.sigma2 == doctest::Approx(3.0 / 8).epsilon(1e-15));
  const auto zero = normal_model(10, 5, 0);
  CHECK(zero.sigma2 == 0);
  CHECK_THROWS_AS(normal_cdf(zero, 1.0), NumericError);
  CHECK_THROWS_AS(normal_pdf(zero, 1.0), NumericError);

  const std::uint64_t n = 2000, N = pairs_of(n);
  const auto big = normal_model(n, 1000, N / 2);
  CHECK(big.mu == doctest::Approx(pairs_of(1000) / 2.0).epsilon(1e-6));
  CHECK(big.sigma2 / (n * n) == doctest::Approx(3.0 / 128).epsilon(1e-5));
}

TEST_CASE("normal cdf accuracy and symmetry") {
  std::mt19937_64 gen(3);
  std::uniform_real_distribution<double> mu(-1000, 1000), sd(0.01, 500), x(-12, 12);
  for (int i = 0; i < 20000; ++i) {
    const auto model = normal_model_from(mu(gen), std::pow(sd(gen), 2));
    const double z = model.mu + x(gen) * model.sigma;
    REQUIRE(std::abs(normal_cdf(model, z) - reference_cdf(model.mu, model.sigma, z)) <= 1e-15);
    const double d = std::abs(z - model.mu);
    REQUIRE(std::abs(normal_cdf(model, model.mu + d) + normal_cdf(model, model.mu - d) - 1) <= 1e-12);
  }
  const auto model = normal_model_from(3, 4);
  CHECK(normal_cdf(model, 3) == 0.5);
  CHECK(normal_cdf(model, INFINITY) == 1);
  CHECK(normal_cdf(model, -INFINITY) == 0);
  double prev = 0;
  for (double z = -20; z <= 26; z += 0.01) {
    const double c = normal_cdf(model, z);
    REQUIRE(c >= prev);
    prev = c;
  }
}

TEST_CASE("normal density bounds") {
  const auto model = normal_model_from(7, 9);
  CHECK(normal_pdf(model, 7) == doctest::Approx(1 / (3 * std::sqrt(2 * std::numbers::pi))).epsilon(1e-15));
  std::mt19937_64 gen(4);
  std::uniform_real_distribution<double> mu(-50, 50), sd(0.05, 40), off(-6, 6);
  for (int i = 0; i < 100000; ++i) {
    const auto m = normal_model_from(mu(gen), std::pow(sd(gen), 2));
    const double x = m.mu + off(gen) * m.sigma, y = m.mu + off(gen) * m.sigma;
    const double bound = 1 / (m.sigma * std::sqrt(2 * std::numbers::pi));
    REQUIRE(normal_pdf(m, x) <= bound * (1 + 1e-15));
    REQUIRE(std::abs(normal_pdf(m, x) - normal_pdf(m, y)) <=
            std::abs(x - y) / (m.sigma2 * std::sqrt(2 * std::numbers::pi * std::numbers::e)) * (1 + 1e-12) + 1e-300);
  }
}

TEST_CASE("binomial pmf against exact rationals") {
  for (unsigned n : {1u, 2u, 7u, 30u, 100u, 200u})
    for (unsigned a = 1; a < 20; a += 3) {
      const auto exact = exact_pmf(n, a, 20);
      const BinomialModel model{n, a / 20.0};
      for (unsigned m = 0; m <= n; ++m) {
        if (exact[m] < 1e-300) continue;
        REQUIRE(std::abs(binomial_pmf(model, m) / exact[m] - 1) <= 1e-12);
      }
    }
  CHECK_THROWS_AS(binomial_pmf(BinomialModel{5, 0.5}, 6), ConfigError);
  CHECK(binomial_pmf(BinomialModel{5, 0.0}, 0) == 1);
  CHECK(binomial_pmf(BinomialModel{5, 1.0}, 5) == 1);
}

TEST_CASE("binomial pmf sums to one") {
  for (std::uint64_t n : {10ull, 1000ull, 48725ull, 100000ull})
    for (double p : {0.05, 0.3, 0.5, 0.77}) {
      const BinomialModel model{n, p};
      CHECK(std::abs(binomial_interval(model, 0, static_cast<std::int64_t>(n)) - 1) <= 1e-10);
    }
  const auto w = binomial_model(1000, 50, 0.5);
  CHECK(w.trials == 950 * 50 + 1225);
  CHECK(w.variance() == doctest::Approx(w.trials * 0.25));
}

TEST_CASE("binomial anti-concentration bounds") {
  const BinomialModel coin{1, 0.5};
  CHECK(binomial_pmf(coin, 0) == 0.5);
  CHECK(binomial_bounds(coin).point == doctest::Approx(std::sqrt(std::numbers::pi / 2)));

  const BinomialModel b100{100, 0.5};
  const auto bounds = binomial_bounds(b100);
  CHECK(bounds.point == doctest::Approx(std::sqrt(std::numbers::pi / 200)));
  CHECK(binomial_pmf(b100, 50) == doctest::Approx(0.0795892).epsilon(1e-6));
  CHECK(binomial_pmf(b100, 50) <= bounds.point);
  for (std::uint64_t m = 0; m < 100; ++m)
    CHECK(std::abs(binomial_pmf(b100, m + 1) - binomial_pmf(b100, m)) <= std::numbers::pi / 100);
  CHECK_THROWS_AS(binomial_bounds(BinomialModel{10, 0.0}), NumericError);
}

TEST_CASE("Kolmogorov distance") {
  EdgeCountDistribution point;
  point.counts[5] = 10;
  point.total = 10;
  point.n = 10;
  CHECK(kolmogorov_distance(point, normal_model_from(5, 2)) == doctest::Approx(0.5));

  const auto c4 = exact_distribution(cycle4(), 2);
  const auto model = normal_model(4, 2, 4);
  CHECK(model.mu == doctest::Approx(2.0 / 3));
  CHECK(model.sigma2 == doctest::Approx(1.0 / 3));
  const double phi0 = reference_cdf(2.0 / 3, std::sqrt(1.0 / 3), 0);
  const double phi1 = reference_cdf(2.0 / 3, std::sqrt(1.0 / 3), 1);
  const double hand = std::max({phi0, std::abs(1.0 / 3 - phi0), std::abs(1.0 / 3 - phi1), 1 - phi1});
  CHECK(kolmogorov_distance(c4, model) == doctest::Approx(hand).epsilon(1e-14));
  CHECK(hand == doctest::Approx(0.38481).epsilon(1e-4));

  EdgeCountDistribution padded = c4;
  padded.counts[-3] = 0;
  padded.counts[7] = 0;
  CHECK(kolmogorov_distance(padded, model) == kolmogorov_distance(c4, model));
  EdgeCountDistribution empty;
  CHECK_THROWS_AS(kolmogorov_distance(empty, model), ConfigError);
}

TEST_CASE("interval errors") {
  const auto c4 = exact_distribution(cycle4(), 2);
  const auto model = normal_model(4, 2, 4);
  CHECK(interval_error(c4, model, -INFINITY, INFINITY) <= 1e-12);
  CHECK(interval_error(c4, model, 1, 1) == doctest::Approx(2.0 / 3));
  CHECK_THROWS_AS(interval_error(c4, model, 2, 1), ConfigError);

  const Graph g = gen_gnm(200, pairs_of(200) / 2, 5);
  const auto dist = sample_edge_counts(g, 100, 100000, 6);
  const auto m = normal_model(200, 100, g.edge_count());
  const double d = kolmogorov_distance(dist, m);
  std::mt19937_64 gen(9);
  std::uniform_real_distribution<double> u(m.mu - 4 * m.sigma, m.mu + 4 * m.sigma);
  for (int i = 0; i < 2000; ++i) {
    double a = u(gen), b = u(gen);
    if (i % 3 == 0) a = std::round(a);
    if (a > b) std::swap(a, b);
    REQUIRE(interval_error(dist, m, a, b) <= 2 * d + 1e-15);
  }
}

TEST_CASE("local limit error") {
  const auto k5 = exact_distribution(gen_gnm(5, 10, 0), 3);
  CHECK_THROWS_AS(llt_error(k5, normal_model(5, 3, 10), 2), NumericError);

  const Graph g = gen_gnm(20, 95, 3);
  const auto exact = exact_distribution(g, 10);
  const auto model = normal_model(20, 10, 95);
  const auto r = llt_error(exact, model, 2);
  CHECK(std::isfinite(r.value));
  CHECK_FALSE(r.noisy);
  double direct = 0;
  std::uint64_t points = 0;
  for (std::int64_t z = 0; z <= 45; ++z)
    if (std::abs(z - model.mu) <= 2 * model.sigma) {
      direct = std::max(direct, 20 * std::abs(exact.pmf(z) - normal_pdf(model, double(z))));
      ++points;
    }
  CHECK(r.value == direct);
  CHECK(r.points == points);

  const auto emp = sample_edge_counts(g, 10, 100, 1);
  CHECK_THROWS_AS(llt_error(emp, model, 2), ConfigError);
  CHECK_THROWS_AS(llt_error(exact, model, 0), ConfigError);
  const auto small = llt_error(emp, model, 2, 100);
  CHECK(small.noisy);
}

TEST_CASE("interval upper check") {
  const Graph g = gen_gnm(20, 95, 3);
  const auto exact = exact_distribution(g, 10);
  const auto whole = interval_upper_check(exact, 46, 4);
  CHECK(whole.ratio == doctest::Approx(20.0 / (4 * 46)));
  const auto r5 = interval_upper_check(exact, 5, 4);
  CHECK(r5.ratio <= 1);
  double best = 0;
  for (std::int64_t z = -10; z <= 50; ++z) best = std::max(best, double(exact.range_count(z, z + 5)) / exact.total);
  CHECK(r5.ratio == doctest::Approx(best * 20 / 20.0));
  CHECK(double(exact.range_count(r5.worst_z, r5.worst_z + 5)) / exact.total == doctest::Approx(best));
  CHECK_THROWS_AS(interval_upper_check(exact, 0, 4), ConfigError);
}

namespace {

double split_ks(const Graph& g, std::uint32_t k, std::uint32_t t, double p, int draws) {
  std::vector<std::uint64_t> inc(draws);
  for (int i = 0; i < draws; ++i) inc[i] = split_sample(g, k, t, static_cast<std::uint64_t>(i)).increment;
  std::sort(inc.begin(), inc.end());
  const auto y = binomial_model(k, t, p);
  double cdf = 0, ks = 0;
  std::size_t idx = 0;
  for (std::uint64_t m = 0; m <= y.trials; ++m) {
    const double before = static_cast<double>(idx) / draws;
    const double prev = cdf;
    cdf += binomial_pmf(y, m);
    while (idx < inc.size() && inc[idx] <= m) ++idx;
    const double after = static_cast<double>(idx) / draws;
    ks = std::max({ks, std::abs(after - cdf), std::abs(before - prev)});
  }
  return ks;
}

}  // namespace

// For a fixed vertex set the increment is binomial over the random graph. On
// one fixed graph the mean is trials·M/N, so the comparison is made at the
// graph's own density: G(n, 1/2) conditioned on M = N/2, and G(n, p) at p = M/N.
TEST_CASE("split increments follow the binomial law") {
  const std::uint32_t n = 2000, k = 1000, t = 50;
  const Graph half = gen_gnm(n, pairs_of(n) / 2, 42);
  CHECK(split_ks(half, k, t, 0.5, 100000) <= 0.01);
  const Graph g = gen_gnp(n, 0.5, 42);
  CHECK(split_ks(g, k, t, static_cast<double>(g.edge_count()) / pairs_of(n), 100000) <= 0.01);
}
