#include "sublab/stein.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>
#include <vector>

#include "sublab/errors.hpp"
#include "sublab/parallel.hpp"
#include "sublab/revolving_door.hpp"
#include "sublab/rng.hpp"
#include "sublab/simd.hpp"

namespace sublab {

namespace {

void check_nk(std::uint64_t n, std::uint64_t k) {
  require(n >= 4, "need n >= 4, got n=" + std::to_string(n));
  require(k >= 2 && k + 2 <= n, "need 2 <= k <= n-2, got n=" + std::to_string(n) + " k=" + std::to_string(k));
}

Rational abs_q(const Rational& q) { return q < 0 ? Rational(-q) : q; }

MatrixRoots roots_from(const Mat2d& s, double det) {
  const double root_det = std::sqrt(det);
  const double scale = std::sqrt(s.trace() + 2 * root_det);
  MatrixRoots r;
  r.half = {(s.a + root_det) / scale, s.b / scale, s.c / scale, (s.d + root_det) / scale};
  // det(Σ^{1/2}) = √det Σ
  const double inv = 1.0 / root_det;
  r.neg_half = {r.half.d * inv, -r.half.b * inv, -r.half.c * inv, r.half.a * inv};
  return r;
}

}  // namespace

Mat2d to_double(const Mat2q& m) {
  return {to_double(m.a), to_double(m.b), to_double(m.c), to_double(m.d)};
}

double max_abs(const Mat2d& m) {
  return std::max({std::abs(m.a), std::abs(m.b), std::abs(m.c), std::abs(m.d)});
}

Rational lambda_exact(std::uint64_t n, std::uint64_t k, std::uint64_t m) {
  check_nk(n, k);
  const std::uint64_t total = pairs_of(n);
  require(m <= total, "edge count exceeds C(n,2)");
  const BigInt nn = n, kk = k, mm = m, N = total;
  return Rational((nn * nn - kk * kk) * kk * kk, 2 * nn * nn * nn * nn) * Rational(mm * (N - mm), N * N);
}

double lambda_scalar(std::uint64_t n, std::uint64_t k, std::uint64_t m) { return to_double(lambda_exact(n, k, m)); }

LambdaPair lambda_matrix(std::uint64_t n, std::uint64_t k) {
  require(n >= 2 && k >= 1 && k < n, "drift matrix needs 1 <= k <= n-1");
  const BigInt nn = n, kk = k, kb = n - k;
  const Rational f(BigInt(1), kk * kb);
  const Rational g(kk * kb, 2 * nn * (nn - 1));
  LambdaPair out;
  out.lambda = f * Mat2q{Rational(nn + kb - 1), Rational(kk - 1), Rational(kb - 1), Rational(nn + kk - 1)};
  out.inverse = g * Mat2q{Rational(nn + kk - 1), Rational(1 - kk), Rational(1 - kb), Rational(nn + kb - 1)};
  return out;
}

Mat2q sigma_matrix(const GraphStats& s, std::uint64_t k) {
  check_nk(s.n, k);
  const BigInt n = s.n, kk = k, kb = s.n - k, N = s.pairs, M = s.edges;
  const BigInt K = kk * (kk - 1) / 2;
  const BigInt Kb = kb * (kb - 1) / 2;
  const Rational V(s.scaled_variance, n);
  const Rational c(2 * K * Kb, n * n * N * N * (n - 2) * (n - 3));
  const Rational mix(M * (N - M));
  const Rational NV = Rational(N) * V;
  const Rational off = mix - NV;
  return c * Mat2q{mix + Rational(kk - 2, kb - 1) * NV, off, off, mix + Rational(kb - 2, kk - 1) * NV};
}

MatrixRoots sqrt_2x2(const Mat2d& sigma) {
  const double tr = sigma.trace();
  const double det = sigma.det();
  if (!(std::abs(sigma.b - sigma.c) <= 1e-12 * std::max(1.0, max_abs(sigma))))
    throw NumericError("matrix square root needs a symmetric matrix");
  if (!(tr > 0) || !(det > 1e-13 * tr * tr))
    throw NumericError("matrix is singular or not positive definite (det=" + std::to_string(det) + ")");
  return roots_from(sigma, det);
}

const MatrixRoots& SteinMatrices::require_roots() const {
  if (!roots) throw NumericError("Sigma is singular (regular graph, V = 0); its inverse square root does not exist");
  return *roots;
}

SteinMatrices stein_matrices(const GraphStats& s, std::uint64_t k) {
  SteinMatrices sm;
  sm.n = s.n;
  sm.k = k;
  sm.m = s.edges;
  sm.lambda_q = lambda_exact(s.n, k, s.edges);
  sm.lambda = to_double(sm.lambda_q);
  const LambdaPair lp = lambda_matrix(s.n, k);
  sm.Lambda_q = lp.lambda;
  sm.LambdaInv_q = lp.inverse;
  sm.Sigma_q = sigma_matrix(s, k);
  sm.Lambda = to_double(sm.Lambda_q);
  sm.LambdaInv = to_double(sm.LambdaInv_q);
  sm.Sigma = to_double(sm.Sigma_q);
  sm.Sigma11 = sm.Sigma.a;
  const Rational det = sm.Sigma_q.det();
  if (det > 0) sm.roots = roots_from(sm.Sigma, to_double(det));
  return sm;
}

WVector w_vector(std::uint64_t n, std::uint64_t k, std::uint64_t m, std::uint64_t e, std::uint64_t ebar) {
  const BigInt N = pairs_of(n);
  require(N > 0, "need n >= 2");
  const BigInt K = pairs_of(k), Kb = pairs_of(n - k), M = m;
  WVector w;
  w.w = (Rational(BigInt(e)) - Rational(K * M, N)) / Rational(BigInt(n));
  w.wbar = (Rational(BigInt(ebar)) - Rational(Kb * M, N)) / Rational(BigInt(n));
  w.w_value = to_double(w.w);
  w.wbar_value = to_double(w.wbar);
  return w;
}

WVector w_vector(const Graph& g, const SubsetState& st) {
  return w_vector(g.n(), st.k(), g.edge_count(), st.edges(), st.complement_edges(g));
}

Rational drift_check(const Graph& g, std::span<const Vertex> members) {
  const std::size_t n = g.n();
  const std::size_t k = members.size();
  require(k >= 1 && k < n, "drift check needs 1 <= |S| <= n-1");
  const SubsetState st = build_state(g, members);
  std::vector<Vertex> outside;
  for (Vertex v = 0; v < n; ++v)
    if (!st.contains(v)) outside.push_back(v);

  // D2 = e(S̄') − e(S̄) = D1 + d(x) − d(x̄), from e(S̄) = M − Σ_{v∈S} d(v) + e(S).
  BigInt sum1 = 0, sum2 = 0;
  for (Vertex x : members) {
    std::int64_t s1 = 0, s2 = 0;
    for (Vertex xb : outside) {
      const std::int64_t d1 = swap_delta(g, st, x, xb);
      s1 += d1;
      s2 += d1 + std::int64_t{g.degree(x)} - g.degree(xb);
    }
    sum1 += s1;
    sum2 += s2;
  }
  const BigInt pairs = BigInt(k) * (n - k);
  const Rational avg1(sum1, pairs * n);
  const Rational avg2(sum2, pairs * n);
  const WVector w = w_vector(g, st);
  const Mat2q lambda = lambda_matrix(n, k).lambda;
  const auto rhs = lambda.apply(w.w, w.wbar);
  const Rational e1 = abs_q(avg1 + rhs[0]);
  const Rational e2 = abs_q(avg2 + rhs[1]);
  return e1 > e2 ? e1 : e2;
}

EnumeratedMoments sigma_by_enumeration(const Graph& g, std::uint32_t k, std::uint64_t budget) {
  const std::size_t n = g.n();
  require(k >= 1 && k < n, "enumeration needs 1 <= k <= n-1");
  const auto count = binomial_count(n, k);
  if (!count || *count > budget)
    throw BudgetExceeded("C(" + std::to_string(n) + "," + std::to_string(k) + ") subsets exceed the budget of " +
                         std::to_string(budget));

  std::vector<Vertex> s(k), rest;
  std::iota(s.begin(), s.end(), Vertex{0});
  __int128 se = 0, sb = 0, see = 0, seb = 0, sbb = 0;
  std::uint64_t subsets = 0;
  std::vector<bool> in(n);
  while (true) {
    std::fill(in.begin(), in.end(), false);
    for (Vertex v : s) in[v] = true;
    rest.clear();
    for (Vertex v = 0; v < n; ++v)
      if (!in[v]) rest.push_back(v);
    const auto e = static_cast<__int128>(induced_edge_count(g, s));
    const auto eb = static_cast<__int128>(induced_edge_count(g, rest));
    se += e;
    sb += eb;
    see += e * e;
    seb += e * eb;
    sbb += eb * eb;
    ++subsets;
    std::size_t i = k;
    while (i > 0 && s[i - 1] == n - k + i - 1) --i;
    if (i == 0) break;
    ++s[i - 1];
    for (std::size_t j = i; j < k; ++j) s[j] = s[j - 1] + 1;
  }

  auto big = [](__int128 v) {
    const bool neg = v < 0;
    unsigned __int128 u = neg ? -static_cast<unsigned __int128>(v) : static_cast<unsigned __int128>(v);
    BigInt r = static_cast<std::uint64_t>(u >> 64);
    r <<= 64;
    r += static_cast<std::uint64_t>(u);
    return neg ? BigInt(-r) : r;
  };
  const BigInt N = pairs_of(n), M = g.edge_count();
  const Rational mu(BigInt(pairs_of(k)) * M, N);
  const Rational mub(BigInt(pairs_of(n - k)) * M, N);
  const Rational cnt{BigInt(subsets)};
  const Rational ee = Rational(big(se)) / cnt, eb = Rational(big(sb)) / cnt;
  const Rational n2(BigInt(n) * n);
  EnumeratedMoments out;
  out.subsets = subsets;
  out.mean_w = (ee - mu) / Rational(BigInt(n));
  out.mean_wbar = (eb - mub) / Rational(BigInt(n));
  // E[(e − μ)(ē − μ̄)] = E[eē] − μ̄E[e] − μE[ē] + μμ̄
  const Rational m11 = (Rational(big(see)) / cnt - 2 * mu * ee + mu * mu) / n2;
  const Rational m12 = (Rational(big(seb)) / cnt - mub * ee - mu * eb + mu * mub) / n2;
  const Rational m22 = (Rational(big(sbb)) / cnt - 2 * mub * eb + mub * mub) / n2;
  out.second = {m11, m12, m12, m22};
  return out;
}

double sigma11_vs_lambda(const GraphStats& s, std::uint64_t k) {
  const Rational lambda = lambda_exact(s.n, k, s.edges);
  if (lambda == 0) throw NumericError("lambda is zero (empty or complete graph)");
  const Rational sigma11 = sigma_matrix(s, k).a;
  return std::abs(to_double(sigma11 / lambda - 1));
}

std::array<double, 2> stein_weights(const SteinMatrices& sm) {
  const MatrixRoots& r = sm.require_roots();
  const Mat2d m = r.neg_half * sm.LambdaInv * r.half;
  return {std::abs(m.a) + std::abs(m.c), std::abs(m.b) + std::abs(m.d)};
}

SwapSecondMoments swap_second_moments(const Graph& g, const SubsetState& st) {
  // b = d_S, c = d_S̄; sums over S (upper case) and over S̄ (suffix o).
  std::int64_t B1 = 0, B2 = 0, C1 = 0, C2 = 0, BC = 0;
  std::int64_t b1o = 0, b2o = 0, c1o = 0, c2o = 0, bco = 0;
  for (Vertex v = 0; v < g.n(); ++v) {
    const std::int64_t b = st.into(v);
    const std::int64_t c = std::int64_t{g.degree(v)} - b;
    if (st.contains(v)) {
      B1 += b, B2 += b * b, C1 += c, C2 += c * c, BC += b * c;
    } else {
      b1o += b, b2o += b * b, c1o += c, c2o += c * c, bco += b * c;
    }
  }
  const std::int64_t k = st.k();
  const std::int64_t kb = static_cast<std::int64_t>(g.n()) - k;
  const std::int64_t cut = C1;  // e(S, S̄)
  SwapSecondMoments m;
  m.d11 = k * b2o + kb * B2 + cut - 2 * b1o * B1 - 2 * b2o + 2 * BC;
  m.d22 = kb * C2 + k * c2o + cut - 2 * C1 * c1o - 2 * C2 + 2 * bco;
  m.d12 = b1o * C1 - k * bco - b2o - kb * BC + B1 * c1o + BC - C2 + bco + cut;
  return m;
}

SwapSecondMoments swap_scan_moments(const Graph& g, const SubsetState& st, const Mat2d& whiten,
                                    std::array<double, 2> weight, double* third) {
  const std::size_t n = g.n();
  std::vector<std::int32_t> comp(n);
  for (Vertex v = 0; v < n; ++v) comp[v] = static_cast<std::int32_t>(g.degree(v)) - st.into(v);
  std::vector<std::uint64_t> outside(g.stride());
  const auto mask = st.mask();
  for (std::size_t w = 0; w < outside.size(); ++w) outside[w] = ~mask[w];
  if (n % 64 != 0) outside.back() &= (std::uint64_t{1} << (n % 64)) - 1;

  simd::SwapScanInput in;
  in.outside = outside.data();
  in.into = st.into().data();
  in.into_comp = comp.data();
  in.n = n;
  in.whiten[0] = whiten.a;
  in.whiten[1] = whiten.b;
  in.whiten[2] = whiten.c;
  in.whiten[3] = whiten.d;
  in.weight[0] = weight[0];
  in.weight[1] = weight[1];
  simd::SwapScanSums sums;
  const auto& kt = simd::kernels();
  for (Vertex x : st.members()) {
    in.adj_row = g.row(x);
    in.x_into = st.into(x);
    in.x_into_comp = comp[x];
    kt.swap_scan(in, sums);
  }
  if (third) *third = sums.third;
  return {sums.d11, sums.d12, sums.d22};
}

double stein_T(double A, double B) {
  const double d = 2;
  const double inner = A / 2 + std::sqrt(std::sqrt(d) * B + A * A / 4);
  return inner * inner / (4 * d);
}

SteinDiagnostics estimate_AB(const Graph& g, std::uint32_t k, std::uint64_t outer, std::uint64_t seed,
                             unsigned workers) {
  const std::size_t n = g.n();
  check_nk(n, k);
  require(outer >= 100, "estimate_AB needs at least 100 outer samples");
  const GraphStats s = stats(g);
  const SteinMatrices sm = stein_matrices(s, k);
  const MatrixRoots& roots = sm.require_roots();
  const auto weights = stein_weights(sm);
  const double inv_n = 1.0 / static_cast<double>(n);
  const Mat2d whiten = inv_n * roots.neg_half;  // u = Σ^{−1/2}·(D1, D2)/n
  const double pairs = static_cast<double>(k) * static_cast<double>(n - k);

  // Per sampled S: Q = Σ^{−1/2} E[ΔΔᵀ | S] Σ^{−1/2} (three entries) and the
  // mean third-order term.
  std::vector<std::array<double, 3>> q(outer);
  std::vector<double> third(outer);
  parallel_blocks(outer, workers, [&](std::uint64_t b, unsigned) {
    Philox rng(seed, stream_id(StreamTag::stein, b));
    SubsetSampler sampler(n, k);
    const SubsetState st = build_state(g, sampler.draw(rng));
    double t = 0;
    const SwapSecondMoments mom = swap_scan_moments(g, st, whiten, weights, &t);
    const double scale = 1.0 / (pairs * static_cast<double>(n) * static_cast<double>(n));
    const Mat2d e{mom.d11 * scale, mom.d12 * scale, mom.d12 * scale, mom.d22 * scale};
    const Mat2d w = roots.neg_half * e * roots.neg_half;
    q[b] = {w.a, w.b, w.d};
    third[b] = t / pairs;
  });

  const auto m = static_cast<double>(outer);
  std::array<double, 3> mean{};
  for (const auto& row : q)
    for (int j = 0; j < 3; ++j) mean[j] += row[j] / m;
  std::array<double, 3> s1{}, s2{};
  for (const auto& row : q)
    for (int j = 0; j < 3; ++j) {
      const double c = row[j] - mean[j];
      s1[j] += c;
      s2[j] += c * c;
    }
  // A = λ1(sd Q11 + sd Q12) + λ2(sd Q21 + sd Q22), with Q21 = Q12.
  auto a_from = [&](const std::array<double, 3>& var) {
    const double sd11 = std::sqrt(std::max(0.0, var[0]));
    const double sd12 = std::sqrt(std::max(0.0, var[1]));
    const double sd22 = std::sqrt(std::max(0.0, var[2]));
    return weights[0] * (sd11 + sd12) + weights[1] * (sd12 + sd22);
  };
  std::array<double, 3> var{};
  for (int j = 0; j < 3; ++j) var[j] = (s2[j] - s1[j] * s1[j] / m) / (m - 1);
  const double A = a_from(var);

  // Leave-one-out jackknife for the standard error of A.
  std::vector<double> loo(outer);
  for (std::uint64_t i = 0; i < outer; ++i) {
    std::array<double, 3> v{};
    for (int j = 0; j < 3; ++j) {
      const double c = q[i][j] - mean[j];
      const double t1 = s1[j] - c, t2 = s2[j] - c * c;
      v[j] = (t2 - t1 * t1 / (m - 1)) / (m - 2);
    }
    loo[i] = a_from(v);
  }
  const double loo_mean = std::accumulate(loo.begin(), loo.end(), 0.0) / m;
  double jk = 0;
  for (double x : loo) jk += (x - loo_mean) * (x - loo_mean);

  const double b_mean = std::accumulate(third.begin(), third.end(), 0.0) / m;
  double b_var = 0;
  for (double x : third) b_var += (x - b_mean) * (x - b_mean);
  b_var /= m - 1;

  SteinDiagnostics d;
  d.n = n;
  d.k = k;
  d.m = g.edge_count();
  d.outer = outer;
  d.seed = seed;
  d.lambda = sm.lambda;
  d.Sigma11 = sm.Sigma11;
  d.lambda_i = weights;
  d.A_hat = A;
  d.A_se = std::sqrt((m - 1) / m * jk);
  d.B_hat = b_mean;
  d.B_se = std::sqrt(b_var / m);
  d.T_hat = stein_T(A, b_mean);
  return d;
}

}  // namespace sublab
