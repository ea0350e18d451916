#pragma once
// Exchangeable-pair objects for the vector (W, W̄):
//
//   W = (e(S) − K·M/N)/n,   W̄ = (e(S̄) − K̄·M/N)/n,   K = C(k,2), K̄ = C(n−k,2),
//
// where the pair (S, S') swaps a uniform x ∈ S with a uniform x̄ ∈ S̄.

#include <array>
#include <cstdint>
#include <optional>
#include <span>
#include <string>

#include "sublab/graph.hpp"
#include "sublab/rational.hpp"
#include "sublab/subset.hpp"

namespace sublab {

template <class T>
struct Mat2 {
  T a{}, b{}, c{}, d{};  // [[a, b], [c, d]]

  static Mat2 identity() { return {T(1), T(0), T(0), T(1)}; }
  Mat2 transpose() const { return {a, c, b, d}; }
  T det() const { return a * d - b * c; }
  T trace() const { return a + d; }

  friend Mat2 operator*(const Mat2& x, const Mat2& y) {
    return {x.a * y.a + x.b * y.c, x.a * y.b + x.b * y.d, x.c * y.a + x.d * y.c, x.c * y.b + x.d * y.d};
  }
  friend Mat2 operator*(const T& s, const Mat2& x) { return {s * x.a, s * x.b, s * x.c, s * x.d}; }
  friend Mat2 operator+(const Mat2& x, const Mat2& y) { return {x.a + y.a, x.b + y.b, x.c + y.c, x.d + y.d}; }
  friend Mat2 operator-(const Mat2& x, const Mat2& y) { return {x.a - y.a, x.b - y.b, x.c - y.c, x.d - y.d}; }
  friend bool operator==(const Mat2& x, const Mat2& y) {
    return x.a == y.a && x.b == y.b && x.c == y.c && x.d == y.d;
  }
  std::array<T, 2> apply(const T& x, const T& y) const { return {a * x + b * y, c * x + d * y}; }
};

using Mat2d = Mat2<double>;
using Mat2q = Mat2<Rational>;

Mat2d to_double(const Mat2q& m);
double max_abs(const Mat2d& m);

/// λ = ((n²−k²)k²/(2n⁴))·M(N−M)/N². Requires n ≥ 4, 2 ≤ k ≤ n−2, M ≤ N.
Rational lambda_exact(std::uint64_t n, std::uint64_t k, std::uint64_t m);
double lambda_scalar(std::uint64_t n, std::uint64_t k, std::uint64_t m);

struct LambdaPair {
  Mat2q lambda;
  Mat2q inverse;
};

/// Drift matrix Λ and its inverse; requires 1 ≤ k ≤ n−1 (and n ≥ 2).
LambdaPair lambda_matrix(std::uint64_t n, std::uint64_t k);

/// Covariance matrix Σ of (W, W̄) in closed form; requires n ≥ 4, 2 ≤ k ≤ n−2.
Mat2q sigma_matrix(const GraphStats& s, std::uint64_t k);

struct MatrixRoots {
  Mat2d half;      // Σ^{1/2}
  Mat2d neg_half;  // Σ^{−1/2}
};

/// Principal square root of a symmetric positive definite 2x2 matrix,
/// Σ^{1/2} = (Σ + √det·I)/√(tr + 2√det). Throws NumericError when Σ is not
/// positive definite (to relative precision 1e−13).
MatrixRoots sqrt_2x2(const Mat2d& sigma);

struct SteinMatrices {
  std::uint64_t n = 0, k = 0, m = 0;
  Rational lambda_q;
  double lambda = 0;
  Mat2q Lambda_q, LambdaInv_q, Sigma_q;
  Mat2d Lambda, LambdaInv, Sigma;
  std::optional<MatrixRoots> roots;  // absent when Σ is singular (V = 0)
  double Sigma11 = 0;

  bool singular() const { return !roots.has_value(); }
  /// Σ^{1/2} and Σ^{−1/2}; throws NumericError when Σ is singular.
  const MatrixRoots& require_roots() const;
};

SteinMatrices stein_matrices(const GraphStats& s, std::uint64_t k);

struct WVector {
  Rational w, wbar;
  double w_value = 0, wbar_value = 0;
};

WVector w_vector(std::uint64_t n, std::uint64_t k, std::uint64_t m, std::uint64_t e, std::uint64_t ebar);
WVector w_vector(const Graph& g, const SubsetState& st);

/// Averages (W'−W, W̄'−W̄) over all k·k̄ swaps of S and compares with
/// −Λ·(W, W̄); returns the larger absolute difference (exactly 0 when the
/// drift identity holds). Requires 1 ≤ |S| ≤ n−1.
Rational drift_check(const Graph& g, std::span<const Vertex> members);

/// E[W·Wᵀ] and E[W], E[W̄] over all C(n,k) subsets by lexicographic
/// enumeration with a fresh edge count per subset. Budget as for
/// exact_distribution.
struct EnumeratedMoments {
  Mat2q second;  // E[(W, W̄)(W, W̄)ᵀ]
  Rational mean_w, mean_wbar;
  std::uint64_t subsets = 0;
};
EnumeratedMoments sigma_by_enumeration(const Graph& g, std::uint32_t k,
                                       std::uint64_t budget = kDefaultExactBudget);

/// |Σ₁₁/λ − 1|. Throws NumericError when λ = 0.
double sigma11_vs_lambda(const GraphStats& s, std::uint64_t k);

/// λ^{(i)} = Σ_m |(Σ^{−1/2} Λ^{−1} Σ^{1/2})_{m,i}|.
std::array<double, 2> stein_weights(const SteinMatrices& sm);

/// Integer sums over the k·k̄ swaps of S of D1², D1·D2, D2², where D1 and D2
/// are the changes of e(S) and e(S̄).
struct SwapSecondMoments {
  std::int64_t d11 = 0, d12 = 0, d22 = 0;
  friend bool operator==(const SwapSecondMoments&, const SwapSecondMoments&) = default;
};

/// Closed form from the degree vector, O(n).
SwapSecondMoments swap_second_moments(const Graph& g, const SubsetState& st);

/// Direct scan of every swap with the dispatched kernel. `third` receives
/// Σ (w0|u0| + w1|u1|)(|u0| + |u1|)² with u = whiten·(D1, D2).
SwapSecondMoments swap_scan_moments(const Graph& g, const SubsetState& st, const Mat2d& whiten,
                                    std::array<double, 2> weight, double* third);

struct SteinDiagnostics {
  std::uint64_t n = 0, k = 0, m = 0, outer = 0, seed = 0;
  double lambda = 0;
  double Sigma11 = 0;
  std::array<double, 2> lambda_i{};
  double A_hat = 0, A_se = 0;
  double B_hat = 0, B_se = 0;
  double T_hat = 0;
  /// The inner expectation conditions on S, which refines the conditioning
  /// on W; by the tower property A_hat then overestimates the W-conditioned A.
  std::string conditioning = "S";
};

/// T = (1/(4d))·(A/2 + sqrt(√d·B + A²/4))² with d = 2.
double stein_T(double A, double B);

/// Monte Carlo estimates of the A and B terms: `outer` uniform subsets S,
/// each with the exact average over all k·k̄ swaps. Requires V > 0 and
/// outer ≥ 100.
SteinDiagnostics estimate_AB(const Graph& g, std::uint32_t k, std::uint64_t outer, std::uint64_t seed,
                             unsigned workers = 1);

}  // namespace sublab
