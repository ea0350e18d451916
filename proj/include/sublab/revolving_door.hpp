#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <vector>

namespace sublab {

/// Revolving-door enumeration of the k-subsets of {0..n-1} (Knuth, TAOCP
/// 7.2.1.3, Algorithm R). Consecutive subsets differ by exchanging one
/// element, which lets callers update per-subset statistics in O(1) swaps.
class RevolvingDoor {
 public:
  struct Swap {
    std::uint32_t out;
    std::uint32_t in;
  };

  /// 1 ≤ k ≤ n-1.
  RevolvingDoor(std::uint32_t n, std::uint32_t k);

  /// Current subset, ascending.
  std::span<const std::uint32_t> current() const { return {c_.data() + 1, k_}; }

  /// Advances to the next subset; nullopt after the last one.
  std::optional<Swap> next();

 private:
  std::uint32_t n_;
  std::uint32_t k_;
  std::vector<std::uint32_t> c_;  // 1-based c_1 < ... < c_k, sentinel c_{k+1} = n
};

/// C(n, k) as an unsigned 64-bit value, or nullopt when it overflows.
std::optional<std::uint64_t> binomial_count(std::uint64_t n, std::uint64_t k);

}  // namespace sublab
