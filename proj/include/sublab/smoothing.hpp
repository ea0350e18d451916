#pragma once
// Interval smoothing of the edge-count distribution: valid triples, the
// a_j/t_j schedule, binomial windows and the smoothing/difference defects.

#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include "sublab/graph.hpp"
#include "sublab/limit_models.hpp"
#include "sublab/subset.hpp"

namespace sublab {

/// (a, r, t) with the three conditions
///   (i)   a ≤ r
///   (ii)  a = c·t^{3/2}·n^{2β−1/2} with 1/2 ≤ c ≤ 1
///   (iii) r ≤ n^{−β}·sqrt(n·t)
struct ValidTriple {
  std::uint64_t n = 0, a = 0, r = 0, t = 0;
  double beta = 0;
  double c = 0;
  bool cond_i = false, cond_ii = false, cond_iii = false;
  bool valid() const { return cond_i && cond_ii && cond_iii; }
};

/// Evaluates the conditions for explicit parameters. (iii) is checked as
/// r² ≤ n^{1−2β}·t in long double.
ValidTriple check_triple(std::uint64_t a, std::uint64_t r, std::uint64_t t, std::uint64_t n, double beta);

/// t = ⌈(a²·n^{1−4β})^{1/3}⌉, the smallest integer with t³ ≥ a²·n^{1−4β}.
std::uint64_t triple_t(std::uint64_t a, std::uint64_t n, double beta);

/// Builds the triple with t = triple_t(a, n, β). Requires
/// r³·n^{−2+5β} ≤ a ≤ r and 0 < β < 1/10; a violation throws ConfigError
/// naming the inequality.
ValidTriple make_valid_triple(std::uint64_t a, std::uint64_t r, std::uint64_t n, double beta);

struct ScheduleStep {
  std::uint32_t j = 0;
  ValidTriple triple;    // (a_j, a_{j+1}, t_j)
  bool shrinks = false;  // a_{j+1}³ ≤ a_j·n^{2−5β}
};

struct SmoothingSchedule {
  std::uint64_t n = 0;
  double beta = 0, eps = 0;
  std::vector<ScheduleStep> steps;  // j = 0 .. j0−1
  std::uint32_t j0 = 0;
  std::uint64_t a = 0;              // a_{j0}
  double target_lo = 0, target_hi = 0;
  std::uint64_t t_sum = 0;          // Σ_{j<j0} t_j
  bool all_valid = false;
  bool monotone = false;            // a_{j+1} ≥ a_j throughout

  bool in_target() const { return target_lo <= double(a) && double(a) <= target_hi; }
  /// Room for the extra sets inside a k-set: Σ t_j ≤ k/2.
  bool fits(std::uint64_t k) const { return 2 * t_sum <= k; }
};

/// a_0 = 1, t_j = ⌈(a_j²·n^{1−4β})^{1/3}⌉, a_{j+1} = ⌊(a_j·n^{2−5β})^{1/3}⌋,
/// stopped at the first a_j in [n^{1−5β/2−ε}, n^{1−5β/2}]. Requires
/// 0 < β < 1/10 and 0 < ε < (1−10β)/4; throws NumericError when the target
/// is not reached within 64 steps.
SmoothingSchedule schedule(std::uint64_t n, double beta, double eps);

/// n^{(1−5β/2)(1−3^{−j})}, the continuous version of a_j.
double schedule_trend(std::uint64_t n, double beta, std::uint32_t j);

enum class WindowMode { disjoint_family, uniform_t };
const char* name(WindowMode mode);

/// Consecutive t-blocks of `outside` in the given order; the remainder is dropped.
std::vector<std::vector<Vertex>> disjoint_family(std::span<const Vertex> outside, std::uint32_t t);

/// Fraction of the families whose increment falls in [lo, hi].
double family_proportion(SplitSampler& split, std::span<const std::vector<Vertex>> families, std::int64_t lo,
                         std::int64_t hi);

struct WindowResult {
  WindowMode mode = WindowMode::uniform_t;
  std::uint64_t trials = 0;  // m families or inner samples
  double proportion = 0;
  double binomial = 0;       // P(Y ∈ A)
  double deviation = 0;      // |proportion − binomial|
  double se = 0;             // binomial standard error of the proportion
  BinomialModel y;
};

/// Draws S' once and compares the proportion of extra t-sets T with
/// e(S' ∪ T) − e(S') ∈ [lo, hi] against P(Y ∈ [lo, hi]). `p` defaults to the
/// edge density M/N of g. `samples` is used in uniform-T mode only.
WindowResult window_vs_binomial(const Graph& g, std::uint32_t k, std::uint32_t t, std::int64_t lo, std::int64_t hi,
                                WindowMode mode, std::uint64_t samples, std::uint64_t seed,
                                std::optional<double> p = std::nullopt);

/// Integer range of z values scanned by the defects.
struct ZWindow {
  std::int64_t lo = 0, hi = 0;
};

/// [⌈μ − width·σ⌉, ⌊μ + width·σ⌋].
ZWindow z_window(const NormalModel& model, double width);

struct DefectResult {
  double value = 0;
  std::int64_t z1 = 0, z2 = 0;  // maximizer (z2 unused for the smoothing defect)
  std::uint64_t points = 0;
  double implied_bound = 0;     // sup_z P([z, z+a))·n/a (difference defect only)
};

/// max over z in the window of |P(z) − a⁻¹·P([z, z+a))|, computed from
/// integer counts with one final division. Requires a ≥ 1.
DefectResult smoothing_defect(const EdgeCountDistribution& dist, std::uint64_t a, ZWindow window);

/// max over z1, z2 in the window with |z1 − z2| ≤ r of
/// |P([z1, z1+a)) − P([z2, z2+a))|. Requires 1 ≤ a ≤ r.
DefectResult difference_defect(const EdgeCountDistribution& dist, std::uint64_t a, std::uint64_t r, ZWindow window);

/// P([z, z+a)) for every z in [lo, hi] as integer counts.
std::vector<std::uint64_t> window_counts(const EdgeCountDistribution& dist, std::uint64_t a, std::int64_t lo,
                                         std::int64_t hi);

}  // namespace sublab
