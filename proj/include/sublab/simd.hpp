#pragma once
// Data-parallel kernels with a scalar reference implementation and
// vectorized variants selected at runtime.
//
// Every variant must produce results identical to the scalar kernel
// (bit-exact for the integer kernels and the generator, and up to summation
// order for the floating-point part of swap_scan). tests/unit/test_simd.cpp
// checks this for every ISA the host supports.

#include <cstddef>
#include <cstdint>
#include <string_view>
#include <vector>

namespace sublab::simd {

enum class Isa { scalar, avx2, avx512 };

std::string_view name(Isa isa);

/// Inputs of the inner loop that visits every swap partner x̄ ∉ S of a fixed x ∈ S.
struct SwapScanInput {
  const std::uint64_t* adj_row = nullptr;  // adjacency row of x
  const std::uint64_t* outside = nullptr;  // membership bits of the complement
  const std::int32_t* into = nullptr;      // d_S(v), length n
  const std::int32_t* into_comp = nullptr; // d_{S̄}(v), length n
  std::size_t n = 0;
  std::int32_t x_into = 0;       // d_S(x)
  std::int32_t x_into_comp = 0;  // d_{S̄}(x)
  double whiten[4] = {1, 0, 0, 1};  // row-major 2x2 map applied to (D1, D2)
  double weight[2] = {1, 1};
};

/// With D1 = e(S')-e(S) and D2 = e(S̄')-e(S̄) for the swap (x, x̄) and
/// u = whiten·(D1, D2), accumulates over all x̄:
///   d11 += D1², d12 += D1·D2, d22 += D2²,
///   third += (weight0·|u0| + weight1·|u1|)·(|u0| + |u1|)².
struct SwapScanSums {
  std::int64_t d11 = 0;
  std::int64_t d12 = 0;
  std::int64_t d22 = 0;
  std::int64_t pairs = 0;
  double third = 0;
};

struct KernelTable {
  Isa isa;

  /// Σ over members v of popcount(adj[v] ∧ mask) restricted to columns < v.
  /// When mask is the indicator of members this is e(S).
  std::uint64_t (*induced_edges)(const std::uint64_t* adj, std::size_t stride,
                                 const std::uint64_t* mask, const std::uint32_t* members,
                                 std::size_t count);

  /// Σ over members v of popcount(adj[v] ∧ mask) over the full row.
  std::uint64_t (*cross_edges)(const std::uint64_t* adj, std::size_t stride,
                               const std::uint64_t* mask, const std::uint32_t* members,
                               std::size_t count);

  /// into[v] += bit(gained, v) - bit(lost, v) for v < n.
  void (*shift_degrees)(std::int32_t* into, const std::uint64_t* gained,
                        const std::uint64_t* lost, std::size_t n);

  /// Accumulates into `sums`; see SwapScanSums.
  void (*swap_scan)(const SwapScanInput& in, SwapScanSums& sums);

  /// Philox4x32-10 output for counters (counter + i, stream), i < blocks;
  /// writes 4 words per block.
  void (*philox_blocks)(std::uint64_t key, std::uint64_t counter, std::uint64_t stream,
                        std::uint32_t* out, std::size_t blocks);
};

/// Best kernels for this host. The environment variable SUBLAB_SIMD
/// (scalar|avx2|avx512) caps the selection.
const KernelTable& kernels();

/// Kernels for a specific ISA; throws ConfigError when the host lacks it.
const KernelTable& kernels_for(Isa isa);

/// ISAs usable on this host, scalar first.
std::vector<Isa> supported_isas();

}  // namespace sublab::simd
