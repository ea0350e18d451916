#include <bit>

#include "simd_internal.hpp"

namespace sublab::simd::detail {
namespace {

std::uint64_t induced_edges_scalar(const std::uint64_t* adj, std::size_t stride,
                                   const std::uint64_t* mask, const std::uint32_t* members,
                                   std::size_t count) {
  std::uint64_t total = 0;
  for (std::size_t i = 0; i < count; ++i) {
    const std::uint32_t v = members[i];
    const std::uint64_t* row = adj + v * stride;
    const std::size_t full = v >> 6;
    for (std::size_t w = 0; w < full; ++w) total += std::popcount(row[w] & mask[w]);
    const std::uint64_t below = (std::uint64_t{1} << (v & 63)) - 1;
    total += std::popcount(row[full] & mask[full] & below);
  }
  return total;
}

std::uint64_t cross_edges_scalar(const std::uint64_t* adj, std::size_t stride,
                                 const std::uint64_t* mask, const std::uint32_t* members,
                                 std::size_t count) {
  std::uint64_t total = 0;
  for (std::size_t i = 0; i < count; ++i) {
    const std::uint64_t* row = adj + members[i] * stride;
    for (std::size_t w = 0; w < stride; ++w) total += std::popcount(row[w] & mask[w]);
  }
  return total;
}

void shift_degrees_scalar(std::int32_t* into, const std::uint64_t* gained,
                          const std::uint64_t* lost, std::size_t n) {
  for (std::size_t v = 0; v < n; ++v) {
    const auto g = static_cast<std::int32_t>((gained[v >> 6] >> (v & 63)) & 1);
    const auto l = static_cast<std::int32_t>((lost[v >> 6] >> (v & 63)) & 1);
    into[v] += g - l;
  }
}

void swap_scan_scalar(const SwapScanInput& in, SwapScanSums& sums) {
  double third = 0;
  for (std::size_t v = 0; v < in.n; ++v) {
    if (((in.outside[v >> 6] >> (v & 63)) & 1) == 0) continue;
    const auto a = static_cast<std::int32_t>((in.adj_row[v >> 6] >> (v & 63)) & 1);
    swap_scan_one(in, a, in.into[v], in.into_comp[v], sums, third);
  }
  sums.third += third;
}

void philox_blocks_scalar(std::uint64_t key, std::uint64_t counter, std::uint64_t stream,
                          std::uint32_t* out, std::size_t blocks) {
  const std::array<std::uint32_t, 2> k = {static_cast<std::uint32_t>(key),
                                          static_cast<std::uint32_t>(key >> 32)};
  for (std::size_t i = 0; i < blocks; ++i) {
    const std::uint64_t c = counter + i;
    const auto r = philox4x32_10({static_cast<std::uint32_t>(c), static_cast<std::uint32_t>(c >> 32),
                                  static_cast<std::uint32_t>(stream),
                                  static_cast<std::uint32_t>(stream >> 32)},
                                 k);
    for (int j = 0; j < 4; ++j) out[4 * i + j] = r[j];
  }
}

}  // namespace

const KernelTable kScalarTable = {
    Isa::scalar,     induced_edges_scalar, cross_edges_scalar,
    shift_degrees_scalar, swap_scan_scalar, philox_blocks_scalar,
};

}  // namespace sublab::simd::detail
