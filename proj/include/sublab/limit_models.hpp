#pragma once

#include <cstdint>
#include <limits>

#include "sublab/rational.hpp"
#include "sublab/subset.hpp"

namespace sublab {

/// Z ~ N(K·M/N, λn²).
struct NormalModel {
  std::uint64_t n = 0, k = 0, m = 0;
  Rational mu_q;  // K·M/N
  double mu = 0;
  double sigma2 = 0;  // λ·n²
  double sigma = 0;
};

NormalModel normal_model(std::uint64_t n, std::uint64_t k, std::uint64_t m);

/// Model with explicit parameters (for tests and derived windows).
NormalModel normal_model_from(double mu, double sigma2);

/// Φ((z − μ)/σ) from the complementary error function of the C library,
/// absolute error below 1e−15. ±∞ give 0 and 1. Throws NumericError when σ² ≤ 0.
double normal_cdf(const NormalModel& model, double z);
double normal_pdf(const NormalModel& model, double z);

/// Y ~ Bin(trials, p).
struct BinomialModel {
  std::uint64_t trials = 0;
  double p = 0;
  double mean() const { return static_cast<double>(trials) * p; }
  double variance() const { return static_cast<double>(trials) * p * (1 - p); }
};

/// trials = (k − t)·t + C(t, 2).
BinomialModel binomial_model(std::uint64_t k, std::uint64_t t, double p);

/// P(Y = m) by Loader's saddle-point expansion, relative error ~1e−14.
/// Throws ConfigError when m > trials.
double binomial_pmf(const BinomialModel& model, std::uint64_t m);

/// P(lo ≤ Y ≤ hi) over the integers; bounds are clipped to [0, trials].
double binomial_interval(const BinomialModel& model, std::int64_t lo, std::int64_t hi);

/// Bounds valid for any sum of independent Bernoulli variables:
/// max_m P(Y=m) ≤ sqrt(π/(8 Var)), |P(Y=m') − P(Y=m)| ≤ π/(4 Var)·|m' − m|.
struct BinomialBounds {
  double point = 0;
  double slope = 0;
};
BinomialBounds binomial_bounds(const BinomialModel& model);

/// sup_z |P̂(e ≤ z) − Φ(z)|, evaluated at every support point from both sides.
double kolmogorov_distance(const EdgeCountDistribution& dist, const NormalModel& model);

/// |P̂(e ∈ [z0, z1]) − P(Z ∈ [z0, z1])|; infinite endpoints allowed.
double interval_error(const EdgeCountDistribution& dist, const NormalModel& model, double z0, double z1);

struct LltResult {
  double value = 0;          // max n·|P̂(z) − φ(z)|
  std::int64_t argmax = 0;
  std::uint64_t points = 0;  // integers scanned
  double point_se = 0;       // MC standard error of P̂ at the mean (0 when exact)
  bool noisy = false;        // point_se > 10% of φ(μ)
};

/// Pointwise local-limit error over integers z with |z − μ| ≤ window·σ.
/// Requires an exact distribution or at least `min_samples` draws.
LltResult llt_error(const EdgeCountDistribution& dist, const NormalModel& model, double window,
                    std::uint64_t min_samples = 1'000'000);

struct IntervalCheck {
  std::int64_t worst_z = 0;
  double ratio = 0;  // sup_z P(e ∈ [z, z+r])·n/(C·r)
};

/// ratio ≤ 1 means P(e(S) ∈ [z, z+r]) ≤ C·r/n for every z.
IntervalCheck interval_upper_check(const EdgeCountDistribution& dist, std::uint64_t r, double c);

}  // namespace sublab
