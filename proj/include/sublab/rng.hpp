#pragma once
// Counter-based random numbers.
//
// Philox4x32-10 (Salmon et al., "Parallel random numbers: as easy as 1, 2, 3",
// SC'11) keyed by the 64-bit run seed. Each generator owns one stream: the
// 128-bit counter is (block index, stream id), with the block index in the
// low 64 bits. Stream ids are derived as
//
//     stream_id(tag, index) = tag << 56 | index        (index < 2^56)
//
// so that every consumer of randomness (graph generation, subset sampling,
// split draws, ...) and every work block inside it reads a disjoint part of
// the key's output. Parallel runs assign blocks, not workers, to streams, so
// results do not depend on the worker count.

#include <array>
#include <cstdint>

namespace sublab {

enum class StreamTag : std::uint64_t {
  graph = 1,
  sample = 2,
  split = 3,
  stein = 4,
  window = 5,
  corpus = 6,
  sweep = 7,
  derive = 14,
  test = 15,
};

constexpr std::uint64_t stream_id(StreamTag tag, std::uint64_t index) {
  return (static_cast<std::uint64_t>(tag) << 56) | (index & ((std::uint64_t{1} << 56) - 1));
}

/// Derives a child seed from a parent seed; used when one run needs several
/// independently keyed sub-experiments (e.g. one graph per sweep point).
std::uint64_t derive_seed(std::uint64_t seed, StreamTag tag, std::uint64_t index);

class Philox {
 public:
  using result_type = std::uint64_t;

  Philox(std::uint64_t seed, std::uint64_t stream) : key_(seed), stream_(stream) {}

  static constexpr result_type min() { return 0; }
  static constexpr result_type max() { return ~result_type{0}; }

  result_type operator()() {
    const std::uint64_t lo = next_u32();
    return lo | (std::uint64_t{next_u32()} << 32);
  }

  std::uint32_t next_u32() {
    if (pos_ == buffer_.size()) refill();
    return buffer_[pos_++];
  }

  std::uint64_t seed() const { return key_; }
  std::uint64_t stream() const { return stream_; }

 private:
  static constexpr std::size_t kBlocks = 32;

  void refill();

  std::uint64_t key_;
  std::uint64_t stream_;
  std::uint64_t counter_ = 0;
  std::array<std::uint32_t, 4 * kBlocks> buffer_{};
  std::size_t pos_ = 4 * kBlocks;
};

/// Uniform integer in [0, bound), bound ≥ 1 (Lemire's multiply-shift with rejection).
inline std::uint32_t uniform_below(Philox& rng, std::uint32_t bound) {
  std::uint64_t m = std::uint64_t{rng.next_u32()} * bound;
  auto low = static_cast<std::uint32_t>(m);
  if (low < bound) {
    const std::uint32_t threshold = (0u - bound) % bound;
    while (low < threshold) {
      m = std::uint64_t{rng.next_u32()} * bound;
      low = static_cast<std::uint32_t>(m);
    }
  }
  return static_cast<std::uint32_t>(m >> 32);
}

inline std::uint64_t uniform_below64(Philox& rng, std::uint64_t bound) {
  if (bound <= 0xffffffffu) return uniform_below(rng, static_cast<std::uint32_t>(bound));
  unsigned __int128 m = static_cast<unsigned __int128>(rng()) * bound;
  auto low = static_cast<std::uint64_t>(m);
  if (low < bound) {
    const std::uint64_t threshold = (0 - bound) % bound;
    while (low < threshold) {
      m = static_cast<unsigned __int128>(rng()) * bound;
      low = static_cast<std::uint64_t>(m);
    }
  }
  return static_cast<std::uint64_t>(m >> 64);
}

/// Uniform double in [0, 1) with 53 random bits.
inline double uniform01(Philox& rng) { return static_cast<double>(rng() >> 11) * 0x1.0p-53; }

}  // namespace sublab
