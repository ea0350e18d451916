// AVX-512 (F + VPOPCNTDQ) popcount kernels. The remaining kernels of the
// avx512 table are the AVX2 ones; see simd_dispatch.cpp.
#include <immintrin.h>

#include "simd_internal.hpp"

namespace sublab::simd::detail {

namespace {

inline void and_popcount_into(const std::uint64_t* row, const std::uint64_t* mask,
                              std::size_t words, __m512i& acc) {
  std::size_t w = 0;
  for (; w + 8 <= words; w += 8) {
    const __m512i r = _mm512_loadu_si512(row + w);
    const __m512i m = _mm512_loadu_si512(mask + w);
    acc = _mm512_add_epi64(acc, _mm512_popcnt_epi64(_mm512_and_si512(r, m)));
  }
  if (w < words) {
    const auto lanes = static_cast<__mmask8>((1u << (words - w)) - 1);
    const __m512i r = _mm512_maskz_loadu_epi64(lanes, row + w);
    const __m512i m = _mm512_maskz_loadu_epi64(lanes, mask + w);
    acc = _mm512_add_epi64(acc, _mm512_popcnt_epi64(_mm512_and_si512(r, m)));
  }
}

}  // namespace

std::uint64_t induced_edges_avx512(const std::uint64_t* adj, std::size_t stride,
                                   const std::uint64_t* mask, const std::uint32_t* members,
                                   std::size_t count) {
  __m512i acc = _mm512_setzero_si512();
  std::uint64_t tail = 0;
  for (std::size_t i = 0; i < count; ++i) {
    const std::uint32_t v = members[i];
    const std::uint64_t* row = adj + v * stride;
    const std::size_t full = v >> 6;
    and_popcount_into(row, mask, full, acc);
    const std::uint64_t below = (std::uint64_t{1} << (v & 63)) - 1;
    tail += static_cast<std::uint64_t>(_mm_popcnt_u64(row[full] & mask[full] & below));
  }
  return static_cast<std::uint64_t>(_mm512_reduce_add_epi64(acc)) + tail;
}

std::uint64_t cross_edges_avx512(const std::uint64_t* adj, std::size_t stride,
                                 const std::uint64_t* mask, const std::uint32_t* members,
                                 std::size_t count) {
  __m512i acc = _mm512_setzero_si512();
  for (std::size_t i = 0; i < count; ++i) {
    and_popcount_into(adj + members[i] * stride, mask, stride, acc);
  }
  return static_cast<std::uint64_t>(_mm512_reduce_add_epi64(acc));
}

}  // namespace sublab::simd::detail
