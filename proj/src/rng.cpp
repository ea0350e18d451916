#include "sublab/rng.hpp"

#include "sublab/simd.hpp"

namespace sublab {

void Philox::refill() {
  simd::kernels().philox_blocks(key_, counter_, stream_, buffer_.data(), kBlocks);
  counter_ += kBlocks;
  pos_ = 0;
}

std::uint64_t derive_seed(std::uint64_t seed, StreamTag tag, std::uint64_t index) {
  // Derivations get their own tag; the requested tag is folded into the index.
  Philox rng(seed, stream_id(StreamTag::derive,
                             (static_cast<std::uint64_t>(tag) << 48) | (index & 0xffffffffffffu)));
  return rng();
}

}  // namespace sublab
