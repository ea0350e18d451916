#include "sublab/revolving_door.hpp"

#include <string>

#include "sublab/errors.hpp"

namespace sublab {

RevolvingDoor::RevolvingDoor(std::uint32_t n, std::uint32_t k) : n_(n), k_(k), c_(k + 2, 0) {
  require(k >= 1 && k < n, "revolving door needs 1 <= k < n, got n=" + std::to_string(n) +
                               " k=" + std::to_string(k));
  for (std::uint32_t j = 1; j <= k; ++j) c_[j] = j - 1;
  c_[k + 1] = n;
}

// Steps follow Algorithm R. j indexes c_ from 1; each branch reports the
// element that left and the one that entered.
std::optional<RevolvingDoor::Swap> RevolvingDoor::next() {
  auto& c = c_;
  if (k_ == 1) {
    if (c[1] + 1 >= n_) return std::nullopt;
    ++c[1];
    return Swap{c[1] - 1, c[1]};
  }

  std::uint32_t j = 2;
  bool increase;  // enter R5 (true) or R4 (false)
  if (k_ % 2 == 1) {
    if (c[1] + 1 < c[2]) {
      ++c[1];
      return Swap{c[1] - 1, c[1]};
    }
    increase = false;
  } else {
    if (c[1] > 0) {
      --c[1];
      return Swap{c[1] + 1, c[1]};
    }
    increase = true;
  }

  while (j <= k_) {
    if (!increase) {
      // R4: here c_j = c_{j-1} + 1.
      if (c[j] >= j) {
        const std::uint32_t out = c[j];
        c[j] = c[j - 1];
        c[j - 1] = j - 2;
        return Swap{out, j - 2};
      }
      ++j;
      if (j > k_) break;
    }
    // R5: here c_{j-1} = j - 2.
    if (c[j] + 1 < c[j + 1]) {
      const std::uint32_t out = c[j - 1];
      c[j - 1] = c[j];
      ++c[j];
      return Swap{out, c[j]};
    }
    ++j;
    increase = false;
  }
  return std::nullopt;
}

std::optional<std::uint64_t> binomial_count(std::uint64_t n, std::uint64_t k) {
  if (k > n) return 0;
  if (k > n - k) k = n - k;
  unsigned __int128 r = 1;
  for (std::uint64_t i = 1; i <= k; ++i) {
    r = r * (n - k + i) / i;
    if (r > ~std::uint64_t{0}) return std::nullopt;
  }
  return static_cast<std::uint64_t>(r);
}

}  // namespace sublab
