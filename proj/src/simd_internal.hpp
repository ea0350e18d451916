#pragma once

#include <array>
#include <cmath>
#include <cstdint>

#include "sublab/simd.hpp"

namespace sublab::simd::detail {

inline constexpr std::uint32_t kPhiloxM0 = 0xD2511F53u;
inline constexpr std::uint32_t kPhiloxM1 = 0xCD9E8D57u;
inline constexpr std::uint32_t kPhiloxW0 = 0x9E3779B9u;
inline constexpr std::uint32_t kPhiloxW1 = 0xBB67AE85u;

/// One Philox4x32-10 block; the reference every vectorized variant must match.
inline std::array<std::uint32_t, 4> philox4x32_10(std::array<std::uint32_t, 4> ctr,
                                                  std::array<std::uint32_t, 2> key) {
  for (int round = 0; round < 10; ++round) {
    if (round > 0) {
      key[0] += kPhiloxW0;
      key[1] += kPhiloxW1;
    }
    const std::uint64_t p0 = std::uint64_t{kPhiloxM0} * ctr[0];
    const std::uint64_t p1 = std::uint64_t{kPhiloxM1} * ctr[2];
    const auto hi0 = static_cast<std::uint32_t>(p0 >> 32);
    const auto lo0 = static_cast<std::uint32_t>(p0);
    const auto hi1 = static_cast<std::uint32_t>(p1 >> 32);
    const auto lo1 = static_cast<std::uint32_t>(p1);
    ctr = {hi1 ^ ctr[1] ^ key[0], lo1, hi0 ^ ctr[3] ^ key[1], lo0};
  }
  return ctr;
}

inline void swap_scan_one(const SwapScanInput& in, std::int32_t a, std::int32_t into_v,
                          std::int32_t into_comp_v, SwapScanSums& sums, double& third) {
  const std::int64_t d1 = std::int64_t{into_v} - in.x_into - a;
  const std::int64_t d2 = std::int64_t{in.x_into_comp} - into_comp_v - a;
  sums.d11 += d1 * d1;
  sums.d12 += d1 * d2;
  sums.d22 += d2 * d2;
  sums.pairs += 1;
  const double f1 = static_cast<double>(d1);
  const double f2 = static_cast<double>(d2);
  const double u0 = std::abs(in.whiten[0] * f1 + in.whiten[1] * f2);
  const double u1 = std::abs(in.whiten[2] * f1 + in.whiten[3] * f2);
  const double s = u0 + u1;
  third += (in.weight[0] * u0 + in.weight[1] * u1) * (s * s);
}

extern const KernelTable kScalarTable;
#if defined(SUBLAB_HAVE_X86_KERNELS)
extern const KernelTable kAvx2Table;
std::uint64_t induced_edges_avx512(const std::uint64_t* adj, std::size_t stride,
                                   const std::uint64_t* mask, const std::uint32_t* members,
                                   std::size_t count);
std::uint64_t cross_edges_avx512(const std::uint64_t* adj, std::size_t stride,
                                 const std::uint64_t* mask, const std::uint32_t* members,
                                 std::size_t count);
#endif

}  // namespace sublab::simd::detail
