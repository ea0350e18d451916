// AVX2 variants. Compiled with -mavx2 -mfma -mpopcnt; only reached when the
// dispatcher has confirmed the host supports them.
#include <immintrin.h>

#include "simd_internal.hpp"

namespace sublab::simd::detail {
namespace {

// Nibble-table popcount (Muła): per-64-bit-lane counts.
inline __m256i popcount_lanes(__m256i v) {
  const __m256i lut = _mm256_setr_epi8(0, 1, 1, 2, 1, 2, 2, 3, 1, 2, 2, 3, 2, 3, 3, 4,  //
                                       0, 1, 1, 2, 1, 2, 2, 3, 1, 2, 2, 3, 2, 3, 3, 4);
  const __m256i low = _mm256_set1_epi8(0x0f);
  const __m256i lo = _mm256_and_si256(v, low);
  const __m256i hi = _mm256_and_si256(_mm256_srli_epi16(v, 4), low);
  const __m256i bytes =
      _mm256_add_epi8(_mm256_shuffle_epi8(lut, lo), _mm256_shuffle_epi8(lut, hi));
  return _mm256_sad_epu8(bytes, _mm256_setzero_si256());
}

inline std::uint64_t horizontal_sum(__m256i acc) {
  alignas(32) std::uint64_t lanes[4];
  _mm256_store_si256(reinterpret_cast<__m256i*>(lanes), acc);
  return lanes[0] + lanes[1] + lanes[2] + lanes[3];
}

inline void and_popcount_into(const std::uint64_t* row, const std::uint64_t* mask,
                              std::size_t words, __m256i& acc, std::uint64_t& tail) {
  std::size_t w = 0;
  for (; w + 4 <= words; w += 4) {
    const __m256i r = _mm256_loadu_si256(reinterpret_cast<const __m256i*>(row + w));
    const __m256i m = _mm256_loadu_si256(reinterpret_cast<const __m256i*>(mask + w));
    acc = _mm256_add_epi64(acc, popcount_lanes(_mm256_and_si256(r, m)));
  }
  for (; w < words; ++w) tail += static_cast<std::uint64_t>(_mm_popcnt_u64(row[w] & mask[w]));
}

std::uint64_t induced_edges_avx2(const std::uint64_t* adj, std::size_t stride,
                                 const std::uint64_t* mask, const std::uint32_t* members,
                                 std::size_t count) {
  __m256i acc = _mm256_setzero_si256();
  std::uint64_t tail = 0;
  for (std::size_t i = 0; i < count; ++i) {
    const std::uint32_t v = members[i];
    const std::uint64_t* row = adj + v * stride;
    const std::size_t full = v >> 6;
    and_popcount_into(row, mask, full, acc, tail);
    const std::uint64_t below = (std::uint64_t{1} << (v & 63)) - 1;
    tail += static_cast<std::uint64_t>(_mm_popcnt_u64(row[full] & mask[full] & below));
  }
  return horizontal_sum(acc) + tail;
}

std::uint64_t cross_edges_avx2(const std::uint64_t* adj, std::size_t stride,
                               const std::uint64_t* mask, const std::uint32_t* members,
                               std::size_t count) {
  __m256i acc = _mm256_setzero_si256();
  std::uint64_t tail = 0;
  for (std::size_t i = 0; i < count; ++i) {
    and_popcount_into(adj + members[i] * stride, mask, stride, acc, tail);
  }
  return horizontal_sum(acc) + tail;
}

void shift_degrees_avx2(std::int32_t* into, const std::uint64_t* gained,
                        const std::uint64_t* lost, std::size_t n) {
  const __m256i bits = _mm256_setr_epi32(1, 2, 4, 8, 16, 32, 64, 128);
  std::size_t v = 0;
  for (; v + 8 <= n; v += 8) {
    const auto gbyte = static_cast<int>((gained[v >> 6] >> (v & 63)) & 0xff);
    const auto lbyte = static_cast<int>((lost[v >> 6] >> (v & 63)) & 0xff);
    if ((gbyte | lbyte) == 0) continue;
    const __m256i g = _mm256_cmpeq_epi32(_mm256_and_si256(_mm256_set1_epi32(gbyte), bits), bits);
    const __m256i l = _mm256_cmpeq_epi32(_mm256_and_si256(_mm256_set1_epi32(lbyte), bits), bits);
    __m256i d = _mm256_loadu_si256(reinterpret_cast<const __m256i*>(into + v));
    // Comparison masks are -1 where the bit is set.
    d = _mm256_add_epi32(_mm256_sub_epi32(d, g), l);
    _mm256_storeu_si256(reinterpret_cast<__m256i*>(into + v), d);
  }
  for (; v < n; ++v) {
    const auto g = static_cast<std::int32_t>((gained[v >> 6] >> (v & 63)) & 1);
    const auto l = static_cast<std::int32_t>((lost[v >> 6] >> (v & 63)) & 1);
    into[v] += g - l;
  }
}

struct NibbleTable {
  alignas(32) double lanes[16][4];
  NibbleTable() {
    for (int nib = 0; nib < 16; ++nib)
      for (int j = 0; j < 4; ++j) lanes[nib][j] = ((nib >> j) & 1) ? 1.0 : 0.0;
  }
};

const NibbleTable kNibbles;

inline double horizontal_sum(__m256d v) {
  alignas(32) double lanes[4];
  _mm256_store_pd(lanes, v);
  return (lanes[0] + lanes[1]) + (lanes[2] + lanes[3]);
}

void swap_scan_avx2(const SwapScanInput& in, SwapScanSums& sums) {
  const __m256d sign = _mm256_set1_pd(-0.0);
  const __m256d x_into = _mm256_set1_pd(in.x_into);
  const __m256d x_comp = _mm256_set1_pd(in.x_into_comp);
  const __m256d w0 = _mm256_set1_pd(in.whiten[0]);
  const __m256d w1 = _mm256_set1_pd(in.whiten[1]);
  const __m256d w2 = _mm256_set1_pd(in.whiten[2]);
  const __m256d w3 = _mm256_set1_pd(in.whiten[3]);
  const __m256d l0 = _mm256_set1_pd(in.weight[0]);
  const __m256d l1 = _mm256_set1_pd(in.weight[1]);
  __m256d s11 = _mm256_setzero_pd(), s12 = _mm256_setzero_pd(), s22 = _mm256_setzero_pd();
  __m256d third = _mm256_setzero_pd();
  std::int64_t pairs = 0;

  std::size_t v = 0;
  for (; v + 4 <= in.n; v += 4) {
    const auto nib_out = static_cast<int>((in.outside[v >> 6] >> (v & 63)) & 0xf);
    if (nib_out == 0) continue;
    const auto nib_adj = static_cast<int>((in.adj_row[v >> 6] >> (v & 63)) & 0xf);
    const __m256d keep = _mm256_load_pd(kNibbles.lanes[nib_out]);
    const __m256d a = _mm256_load_pd(kNibbles.lanes[nib_adj]);
    const __m256d dv =
        _mm256_cvtepi32_pd(_mm_loadu_si128(reinterpret_cast<const __m128i*>(in.into + v)));
    const __m256d cv =
        _mm256_cvtepi32_pd(_mm_loadu_si128(reinterpret_cast<const __m128i*>(in.into_comp + v)));
    const __m256d d1 = _mm256_mul_pd(keep, _mm256_sub_pd(_mm256_sub_pd(dv, x_into), a));
    const __m256d d2 = _mm256_mul_pd(keep, _mm256_sub_pd(_mm256_sub_pd(x_comp, cv), a));
    s11 = _mm256_fmadd_pd(d1, d1, s11);
    s12 = _mm256_fmadd_pd(d1, d2, s12);
    s22 = _mm256_fmadd_pd(d2, d2, s22);
    const __m256d u0 = _mm256_andnot_pd(sign, _mm256_fmadd_pd(w0, d1, _mm256_mul_pd(w1, d2)));
    const __m256d u1 = _mm256_andnot_pd(sign, _mm256_fmadd_pd(w2, d1, _mm256_mul_pd(w3, d2)));
    const __m256d s = _mm256_add_pd(u0, u1);
    const __m256d lin = _mm256_fmadd_pd(l0, u0, _mm256_mul_pd(l1, u1));
    third = _mm256_fmadd_pd(lin, _mm256_mul_pd(s, s), third);
    pairs += _mm_popcnt_u32(static_cast<unsigned>(nib_out));
  }
  // Masked lanes contribute exact zeros, and the integer sums stay below 2^53.
  sums.d11 += static_cast<std::int64_t>(horizontal_sum(s11));
  sums.d12 += static_cast<std::int64_t>(horizontal_sum(s12));
  sums.d22 += static_cast<std::int64_t>(horizontal_sum(s22));
  sums.pairs += pairs;
  double rest = 0;
  for (; v < in.n; ++v) {
    if (((in.outside[v >> 6] >> (v & 63)) & 1) == 0) continue;
    const auto adj = static_cast<std::int32_t>((in.adj_row[v >> 6] >> (v & 63)) & 1);
    swap_scan_one(in, adj, in.into[v], in.into_comp[v], sums, rest);
  }
  sums.third += horizontal_sum(third) + rest;
}

// 32x32 -> 64 multiply of all eight lanes, split into high and low halves.
inline void mulhilo(__m256i x, __m256i m, __m256i& hi, __m256i& lo) {
  const __m256i even = _mm256_mul_epu32(x, m);
  const __m256i odd = _mm256_mul_epu32(_mm256_srli_epi64(x, 32), m);
  lo = _mm256_blend_epi32(even, _mm256_slli_epi64(odd, 32), 0b10101010);
  hi = _mm256_blend_epi32(_mm256_srli_epi64(even, 32), odd, 0b10101010);
}

void philox_blocks_avx2(std::uint64_t key, std::uint64_t counter, std::uint64_t stream,
                        std::uint32_t* out, std::size_t blocks) {
  const __m256i m0 = _mm256_set1_epi32(static_cast<int>(kPhiloxM0));
  const __m256i m1 = _mm256_set1_epi32(static_cast<int>(kPhiloxM1));
  std::size_t i = 0;
  for (; i + 8 <= blocks; i += 8) {
    alignas(32) std::uint32_t lo_words[8], hi_words[8];
    for (int j = 0; j < 8; ++j) {
      const std::uint64_t c = counter + i + j;
      lo_words[j] = static_cast<std::uint32_t>(c);
      hi_words[j] = static_cast<std::uint32_t>(c >> 32);
    }
    __m256i c0 = _mm256_load_si256(reinterpret_cast<const __m256i*>(lo_words));
    __m256i c1 = _mm256_load_si256(reinterpret_cast<const __m256i*>(hi_words));
    __m256i c2 = _mm256_set1_epi32(static_cast<int>(static_cast<std::uint32_t>(stream)));
    __m256i c3 = _mm256_set1_epi32(static_cast<int>(static_cast<std::uint32_t>(stream >> 32)));
    std::uint32_t k0 = static_cast<std::uint32_t>(key);
    std::uint32_t k1 = static_cast<std::uint32_t>(key >> 32);
    for (int round = 0; round < 10; ++round) {
      if (round > 0) {
        k0 += kPhiloxW0;
        k1 += kPhiloxW1;
      }
      __m256i hi0, lo0, hi1, lo1;
      mulhilo(c0, m0, hi0, lo0);
      mulhilo(c2, m1, hi1, lo1);
      const __m256i n0 = _mm256_xor_si256(_mm256_xor_si256(hi1, c1),
                                          _mm256_set1_epi32(static_cast<int>(k0)));
      const __m256i n2 = _mm256_xor_si256(_mm256_xor_si256(hi0, c3),
                                          _mm256_set1_epi32(static_cast<int>(k1)));
      c0 = n0;
      c1 = lo1;
      c2 = n2;
      c3 = lo0;
    }
    alignas(32) std::uint32_t r[4][8];
    _mm256_store_si256(reinterpret_cast<__m256i*>(r[0]), c0);
    _mm256_store_si256(reinterpret_cast<__m256i*>(r[1]), c1);
    _mm256_store_si256(reinterpret_cast<__m256i*>(r[2]), c2);
    _mm256_store_si256(reinterpret_cast<__m256i*>(r[3]), c3);
    for (int j = 0; j < 8; ++j)
      for (int w = 0; w < 4; ++w) out[4 * (i + j) + w] = r[w][j];
  }
  if (i < blocks) kScalarTable.philox_blocks(key, counter + i, stream, out + 4 * i, blocks - i);
}

}  // namespace

const KernelTable kAvx2Table = {
    Isa::avx2,          induced_edges_avx2, cross_edges_avx2,
    shift_degrees_avx2, swap_scan_avx2,     philox_blocks_avx2,
};

}  // namespace sublab::simd::detail
