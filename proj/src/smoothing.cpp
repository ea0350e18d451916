#include "sublab/smoothing.hpp"

#include <algorithm>
#include <cmath>
#include <deque>
#include <string>

#include "sublab/errors.hpp"
#include "sublab/rng.hpp"

namespace sublab {

namespace {

using LD = long double;

LD pow_n(std::uint64_t n, LD e) { return std::pow(static_cast<LD>(n), e); }

void check_beta(double beta) {
  if (!(beta > 0 && beta < 0.1)) throw ConfigError("beta must lie in (0, 1/10), got " + std::to_string(beta));
}

// Largest r with r³ ≤ x.
std::uint64_t floor_cbrt(LD x) {
  auto r = static_cast<std::uint64_t>(std::floor(std::cbrt(x)));
  while (static_cast<LD>(r + 1) * (r + 1) * (r + 1) <= x) ++r;
  while (r > 0 && static_cast<LD>(r) * r * r > x) --r;
  return r;
}

// Smallest t with t³ ≥ x.
std::uint64_t ceil_cbrt(LD x) {
  auto t = static_cast<std::uint64_t>(std::ceil(std::cbrt(x)));
  while (t > 0 && static_cast<LD>(t - 1) * (t - 1) * (t - 1) >= x) --t;
  while (static_cast<LD>(t) * t * t < x) ++t;
  return t;
}

void check_counts(const EdgeCountDistribution& dist, ZWindow w) {
  if (dist.total == 0) throw ConfigError("empty distribution");
  if (w.lo > w.hi) throw ConfigError("empty z window");
}

}  // namespace

ValidTriple check_triple(std::uint64_t a, std::uint64_t r, std::uint64_t t, std::uint64_t n, double beta) {
  require(a >= 1 && r >= 1 && t >= 1 && n >= 2, "triple needs positive a, r, t and n >= 2");
  ValidTriple v{n, a, r, t, beta};
  const LD b = beta;
  v.c = static_cast<double>(static_cast<LD>(a) / (std::pow(static_cast<LD>(t), 1.5L) * pow_n(n, 2 * b - 0.5L)));
  v.cond_i = a <= r;
  v.cond_ii = v.c >= 0.5 && v.c <= 1;
  v.cond_iii = static_cast<LD>(r) * r <= pow_n(n, 1 - 2 * b) * t;
  return v;
}

std::uint64_t triple_t(std::uint64_t a, std::uint64_t n, double beta) {
  return ceil_cbrt(static_cast<LD>(a) * a * pow_n(n, 1 - 4 * static_cast<LD>(beta)));
}

ValidTriple make_valid_triple(std::uint64_t a, std::uint64_t r, std::uint64_t n, double beta) {
  check_beta(beta);
  require(a >= 1 && n >= 2, "triple needs a >= 1 and n >= 2");
  if (a > r) throw ConfigError("triple precondition a <= r violated (a=" + std::to_string(a) + ", r=" + std::to_string(r) + ")");
  const LD lhs = static_cast<LD>(r) * r * r * pow_n(n, -2 + 5 * static_cast<LD>(beta));
  if (lhs > static_cast<LD>(a))
    throw ConfigError("triple precondition r^3 n^(-2+5beta) <= a violated (" + std::to_string(static_cast<double>(lhs)) +
                      " > " + std::to_string(a) + ")");
  return check_triple(a, r, triple_t(a, n, beta), n, beta);
}

double schedule_trend(std::uint64_t n, double beta, std::uint32_t j) {
  const double e = (1 - 2.5 * beta) * (1 - std::pow(3.0, -static_cast<double>(j)));
  return std::pow(static_cast<double>(n), e);
}

SmoothingSchedule schedule(std::uint64_t n, double beta, double eps) {
  check_beta(beta);
  if (!(eps > 0 && eps < (1 - 10 * beta) / 4))
    throw ConfigError("eps must lie in (0, (1-10beta)/4), got " + std::to_string(eps));
  require(n >= 2, "schedule needs n >= 2");
  SmoothingSchedule s;
  s.n = n;
  s.beta = beta;
  s.eps = eps;
  const LD b = beta;
  s.target_lo = static_cast<double>(pow_n(n, 1 - 2.5L * b - eps));
  s.target_hi = static_cast<double>(pow_n(n, 1 - 2.5L * b));
  const LD growth = pow_n(n, 2 - 5 * b);
  s.all_valid = true;
  s.monotone = true;
  std::uint64_t a = 1;
  for (std::uint32_t j = 0;; ++j) {
    if (s.target_lo <= static_cast<double>(a) && static_cast<double>(a) <= s.target_hi) {
      s.j0 = j;
      s.a = a;
      return s;
    }
    if (j == 64) throw NumericError("schedule did not reach the target window within 64 steps (n=" + std::to_string(n) + ")");
    const std::uint64_t next = floor_cbrt(static_cast<LD>(a) * growth);
    ScheduleStep step;
    step.j = j;
    step.triple = check_triple(a, next, triple_t(a, n, beta), n, beta);
    step.shrinks = static_cast<LD>(next) * next * next <= static_cast<LD>(a) * growth;
    s.all_valid = s.all_valid && step.triple.valid() && step.shrinks;
    s.monotone = s.monotone && next >= a;
    s.t_sum += step.triple.t;
    s.steps.push_back(step);
    a = next;
  }
}

const char* name(WindowMode mode) { return mode == WindowMode::disjoint_family ? "disjoint-family" : "uniform-T"; }

std::vector<std::vector<Vertex>> disjoint_family(std::span<const Vertex> outside, std::uint32_t t) {
  require(t >= 1, "family block size must be >= 1");
  std::vector<std::vector<Vertex>> out;
  for (std::size_t i = 0; i + t <= outside.size(); i += t) out.emplace_back(outside.begin() + i, outside.begin() + i + t);
  return out;
}

double family_proportion(SplitSampler& split, std::span<const std::vector<Vertex>> families, std::int64_t lo,
                         std::int64_t hi) {
  require(!families.empty(), "empty family");
  std::uint64_t hits = 0;
  for (const auto& f : families) {
    const auto inc = static_cast<std::int64_t>(split.increment(f));
    hits += inc >= lo && inc <= hi;
  }
  return static_cast<double>(hits) / static_cast<double>(families.size());
}

WindowResult window_vs_binomial(const Graph& g, std::uint32_t k, std::uint32_t t, std::int64_t lo, std::int64_t hi,
                                WindowMode mode, std::uint64_t samples, std::uint64_t seed, std::optional<double> p) {
  const std::uint64_t n = g.n();
  if (k > n || t < 1 || 2 * std::uint64_t{t} > k)
    throw ConfigError("window needs 1 <= t <= k/2 and k <= n (k=" + std::to_string(k) + ", t=" + std::to_string(t) + ")");
  const double density = p ? *p : static_cast<double>(g.edge_count()) / static_cast<double>(pairs_of(n));
  WindowResult r;
  r.mode = mode;
  r.y = binomial_model(k, t, density);
  if (lo > hi) throw ConfigError("window interval A is empty");
  if (lo < 0 || hi > static_cast<std::int64_t>(r.y.trials)) throw ConfigError("window interval A leaves [0, trials]");
  if (mode == WindowMode::uniform_t) require(samples >= 1, "uniform-T mode needs samples >= 1");

  Philox rng(seed, stream_id(StreamTag::window, 0));
  SubsetSampler sampler(n, k - t);
  const auto base = sampler.draw(rng);
  SplitSampler split(g, base, t);

  if (mode == WindowMode::disjoint_family) {
    const auto families = disjoint_family(split.outside(), t);
    r.trials = families.size();
    r.proportion = family_proportion(split, families, lo, hi);
  } else {
    Philox inner(seed, stream_id(StreamTag::window, 1));
    std::uint64_t hits = 0;
    for (std::uint64_t i = 0; i < samples; ++i) {
      const auto inc = static_cast<std::int64_t>(split.draw(inner));
      hits += inc >= lo && inc <= hi;
    }
    r.trials = samples;
    r.proportion = static_cast<double>(hits) / static_cast<double>(samples);
  }
  r.binomial = binomial_interval(r.y, lo, hi);
  r.deviation = std::abs(r.proportion - r.binomial);
  r.se = std::sqrt(r.binomial * (1 - r.binomial) / static_cast<double>(r.trials));
  return r;
}

ZWindow z_window(const NormalModel& model, double width) {
  require(width > 0, "window width must be positive");
  return {static_cast<std::int64_t>(std::ceil(model.mu - width * model.sigma)),
          static_cast<std::int64_t>(std::floor(model.mu + width * model.sigma))};
}

std::vector<std::uint64_t> window_counts(const EdgeCountDistribution& dist, std::uint64_t a, std::int64_t lo,
                                         std::int64_t hi) {
  require(a >= 1 && lo <= hi, "window counts need a >= 1 and lo <= hi");
  const std::int64_t span_hi = hi + static_cast<std::int64_t>(a) - 1;
  std::vector<std::uint64_t> prefix(static_cast<std::size_t>(span_hi - lo + 2), 0);
  for (auto it = dist.counts.lower_bound(lo); it != dist.counts.end() && it->first <= span_hi; ++it)
    prefix[static_cast<std::size_t>(it->first - lo + 1)] = it->second;
  for (std::size_t i = 1; i < prefix.size(); ++i) prefix[i] += prefix[i - 1];
  std::vector<std::uint64_t> out(static_cast<std::size_t>(hi - lo + 1));
  for (std::size_t i = 0; i < out.size(); ++i) out[i] = prefix[i + a] - prefix[i];
  return out;
}

DefectResult smoothing_defect(const EdgeCountDistribution& dist, std::uint64_t a, ZWindow w) {
  check_counts(dist, w);
  require(a >= 1, "smoothing defect needs a >= 1");
  const auto win = window_counts(dist, a, w.lo, w.hi);
  DefectResult r;
  r.z1 = w.lo;
  std::uint64_t best = 0;
  for (std::int64_t z = w.lo; z <= w.hi; ++z) {
    const std::uint64_t point = dist.count(z) * a;
    const std::uint64_t mass = win[static_cast<std::size_t>(z - w.lo)];
    const std::uint64_t diff = point > mass ? point - mass : mass - point;
    if (diff > best) {
      best = diff;
      r.z1 = z;
    }
    ++r.points;
  }
  r.value = static_cast<double>(best) / (static_cast<double>(a) * static_cast<double>(dist.total));
  return r;
}

DefectResult difference_defect(const EdgeCountDistribution& dist, std::uint64_t a, std::uint64_t r, ZWindow w) {
  check_counts(dist, w);
  if (a < 1 || a > r) throw ConfigError("difference defect needs 1 <= a <= r (a=" + std::to_string(a) + ", r=" + std::to_string(r) + ")");
  const auto win = window_counts(dist, a, w.lo, w.hi);
  const std::size_t len = win.size();
  const std::size_t span = static_cast<std::size_t>(std::min<std::uint64_t>(r, len - 1)) + 1;

  // Largest max − min of the window sums over every run of span consecutive z.
  DefectResult out;
  out.z1 = out.z2 = w.lo;
  out.points = len;
  std::uint64_t best = 0;
  std::deque<std::size_t> hi_q, lo_q;
  for (std::size_t i = 0; i < len; ++i) {
    while (!hi_q.empty() && win[hi_q.back()] <= win[i]) hi_q.pop_back();
    while (!lo_q.empty() && win[lo_q.back()] >= win[i]) lo_q.pop_back();
    hi_q.push_back(i);
    lo_q.push_back(i);
    if (hi_q.front() + span <= i) hi_q.pop_front();
    if (lo_q.front() + span <= i) lo_q.pop_front();
    const std::uint64_t d = win[hi_q.front()] - win[lo_q.front()];
    if (d > best) {
      best = d;
      out.z1 = w.lo + static_cast<std::int64_t>(hi_q.front());
      out.z2 = w.lo + static_cast<std::int64_t>(lo_q.front());
    }
  }
  const double total = static_cast<double>(dist.total);
  out.value = static_cast<double>(best) / total;

  const std::int64_t first = dist.counts.begin()->first, last = dist.counts.rbegin()->first;
  const auto all = window_counts(dist, a, first - static_cast<std::int64_t>(a) + 1, last);
  const std::uint64_t peak = *std::max_element(all.begin(), all.end());
  out.implied_bound = static_cast<double>(peak) / total * static_cast<double>(dist.n) / static_cast<double>(a);
  return out;
}

}  // namespace sublab
