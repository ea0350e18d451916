#include "sublab/limit_models.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>

#include "sublab/errors.hpp"
#include "sublab/stein.hpp"

namespace sublab {

namespace {

void check_model(const NormalModel& model) {
  if (!(model.sigma2 > 0)) throw NumericError("normal model is degenerate (sigma^2 = " + std::to_string(model.sigma2) + ")");
}

void check_dist(const EdgeCountDistribution& dist) {
  if (dist.total == 0) throw ConfigError("empty distribution");
}

// Stirling-series remainder lgamma(x+1) − (x+1/2)·log x + x − log√(2π).
double stirlerr(double x) {
  constexpr double s0 = 1.0 / 12, s1 = 1.0 / 360, s2 = 1.0 / 1260, s3 = 1.0 / 1680, s4 = 1.0 / 1188;
  if (x <= 15) {
    return std::lgamma(x + 1) - (x + 0.5) * std::log(x) + x - 0.5 * std::log(2 * std::numbers::pi);
  }
  const double x2 = x * x;
  if (x > 500) return (s0 - s1 / x2) / x;
  if (x > 80) return (s0 - (s1 - s2 / x2) / x2) / x;
  if (x > 35) return (s0 - (s1 - (s2 - s3 / x2) / x2) / x2) / x;
  return (s0 - (s1 - (s2 - (s3 - s4 / x2) / x2) / x2) / x2) / x;
}

// x·log(x/np) + np − x without cancellation.
double bd0(double x, double np) {
  if (std::abs(x - np) < 0.1 * (x + np)) {
    double v = (x - np) / (x + np);
    double s = (x - np) * v;
    double ej = 2 * x * v;
    v *= v;
    for (int j = 1; j < 1000; ++j) {
      ej *= v;
      const double s1 = s + ej / (2 * j + 1);
      if (s1 == s) return s1;
      s = s1;
    }
    return s;
  }
  return x * std::log(x / np) + np - x;
}

}  // namespace

NormalModel normal_model(std::uint64_t n, std::uint64_t k, std::uint64_t m) {
  NormalModel model;
  model.n = n;
  model.k = k;
  model.m = m;
  const Rational lambda = lambda_exact(n, k, m);
  model.mu_q = Rational(BigInt(pairs_of(k)) * m, BigInt(pairs_of(n)));
  model.mu = to_double(model.mu_q);
  model.sigma2 = to_double(lambda * BigInt(n) * BigInt(n));
  model.sigma = std::sqrt(model.sigma2);
  return model;
}

NormalModel normal_model_from(double mu, double sigma2) {
  NormalModel model;
  model.mu = mu;
  model.sigma2 = sigma2;
  model.sigma = std::sqrt(std::max(0.0, sigma2));
  return model;
}

double normal_cdf(const NormalModel& model, double z) {
  check_model(model);
  if (z == std::numeric_limits<double>::infinity()) return 1;
  if (z == -std::numeric_limits<double>::infinity()) return 0;
  return 0.5 * std::erfc(-(z - model.mu) / (model.sigma * std::numbers::sqrt2));
}

double normal_pdf(const NormalModel& model, double z) {
  check_model(model);
  const double x = (z - model.mu) / model.sigma;
  return std::exp(-0.5 * x * x) / (model.sigma * std::sqrt(2 * std::numbers::pi));
}

BinomialModel binomial_model(std::uint64_t k, std::uint64_t t, double p) {
  require(t <= k, "binomial window needs t <= k");
  require(p >= 0 && p <= 1, "binomial probability must lie in [0,1]");
  return {(k - t) * t + pairs_of(t), p};
}

double binomial_pmf(const BinomialModel& model, std::uint64_t m) {
  if (m > model.trials) throw ConfigError("binomial outcome " + std::to_string(m) + " exceeds trials");
  const double n = static_cast<double>(model.trials);
  const double x = static_cast<double>(m);
  const double p = model.p, q = 1 - p;
  if (p == 0) return m == 0 ? 1 : 0;
  if (q == 0) return m == model.trials ? 1 : 0;
  if (m == 0) return std::exp(n * std::log1p(-p));
  if (m == model.trials) return std::exp(n * std::log(p));
  const double lc = stirlerr(n) - stirlerr(x) - stirlerr(n - x) - bd0(x, n * p) - bd0(n - x, n * q);
  return std::exp(lc) * std::sqrt(n / (2 * std::numbers::pi * x * (n - x)));
}

double binomial_interval(const BinomialModel& model, std::int64_t lo, std::int64_t hi) {
  lo = std::max<std::int64_t>(lo, 0);
  hi = std::min<std::int64_t>(hi, static_cast<std::int64_t>(model.trials));
  double s = 0;
  for (std::int64_t m = lo; m <= hi; ++m) s += binomial_pmf(model, static_cast<std::uint64_t>(m));
  return s;
}

BinomialBounds binomial_bounds(const BinomialModel& model) {
  const double var = model.variance();
  if (!(var > 0)) throw NumericError("binomial bounds need positive variance");
  return {std::sqrt(std::numbers::pi / (8 * var)), std::numbers::pi / (4 * var)};
}

double kolmogorov_distance(const EdgeCountDistribution& dist, const NormalModel& model) {
  check_dist(dist);
  check_model(model);
  const double total = static_cast<double>(dist.total);
  std::uint64_t below = 0;
  double d = 0;
  for (const auto& [z, c] : dist.counts) {
    const double phi = normal_cdf(model, static_cast<double>(z));
    const double left = static_cast<double>(below) / total;  // P̂(e < z)
    below += c;
    const double right = static_cast<double>(below) / total;  // P̂(e ≤ z)
    d = std::max({d, std::abs(left - phi), std::abs(right - phi)});
  }
  return d;
}

double interval_error(const EdgeCountDistribution& dist, const NormalModel& model, double z0, double z1) {
  check_dist(dist);
  require(z0 <= z1, "interval needs z0 <= z1");
  const double lo = std::ceil(z0), hi = std::floor(z1);
  std::uint64_t inside = 0;
  for (const auto& [z, c] : dist.counts)
    if (static_cast<double>(z) >= lo && static_cast<double>(z) <= hi) inside += c;
  const double emp = static_cast<double>(inside) / static_cast<double>(dist.total);
  return std::abs(emp - (normal_cdf(model, z1) - normal_cdf(model, z0)));
}

LltResult llt_error(const EdgeCountDistribution& dist, const NormalModel& model, double window,
                    std::uint64_t min_samples) {
  check_dist(dist);
  check_model(model);
  require(window > 0, "LLT window must be positive");
  require(dist.kind == DistributionKind::exact || dist.total >= min_samples,
          "LLT error needs an exact distribution or at least " + std::to_string(min_samples) + " samples");
  const double scale = static_cast<double>(dist.n);
  const double total = static_cast<double>(dist.total);
  const auto lo = static_cast<std::int64_t>(std::ceil(model.mu - window * model.sigma));
  const auto hi = static_cast<std::int64_t>(std::floor(model.mu + window * model.sigma));
  LltResult r;
  for (std::int64_t z = lo; z <= hi; ++z) {
    const double dev = scale * std::abs(dist.pmf(z) - normal_pdf(model, static_cast<double>(z)));
    if (r.points == 0 || dev > r.value) {
      r.value = dev;
      r.argmax = z;
    }
    ++r.points;
  }
  const double peak = normal_pdf(model, model.mu);
  if (dist.kind == DistributionKind::empirical) {
    r.point_se = std::sqrt(peak * (1 - peak) / total);
    r.noisy = r.point_se > 0.1 * peak;
  }
  return r;
}

IntervalCheck interval_upper_check(const EdgeCountDistribution& dist, std::uint64_t r, double c) {
  check_dist(dist);
  require(r >= 1, "interval length r must be >= 1");
  require(c > 0, "constant C must be positive");
  // Sliding window [z, z+r] anchored at each support point.
  IntervalCheck out;
  out.worst_z = dist.counts.begin()->first;
  std::uint64_t best = 0, mass = 0;
  auto head = dist.counts.begin();
  for (auto tail = dist.counts.begin(); tail != dist.counts.end(); ++tail) {
    while (head != dist.counts.end() && head->first <= tail->first + static_cast<std::int64_t>(r)) {
      mass += head->second;
      ++head;
    }
    if (mass > best) {
      best = mass;
      out.worst_z = tail->first;
    }
    mass -= tail->second;
  }
  const double p = static_cast<double>(best) / static_cast<double>(dist.total);
  out.ratio = p * static_cast<double>(dist.n) / (c * static_cast<double>(r));
  return out;
}

}  // namespace sublab
