#include <cstdlib>
#include <string>

#include "simd_internal.hpp"
#include "sublab/errors.hpp"

namespace sublab::simd {

std::string_view name(Isa isa) {
  switch (isa) {
    case Isa::scalar: return "scalar";
    case Isa::avx2: return "avx2";
    case Isa::avx512: return "avx512";
  }
  return "unknown";
}

namespace {

bool host_supports(Isa isa) {
#if defined(SUBLAB_HAVE_X86_KERNELS)
  __builtin_cpu_init();
  switch (isa) {
    case Isa::scalar: return true;
    case Isa::avx2:
      return __builtin_cpu_supports("avx2") && __builtin_cpu_supports("fma") &&
             __builtin_cpu_supports("popcnt") && __builtin_cpu_supports("bmi2");
    case Isa::avx512:
      return host_supports(Isa::avx2) && __builtin_cpu_supports("avx512f") &&
             __builtin_cpu_supports("avx512vpopcntdq");
  }
  return false;
#else
  return isa == Isa::scalar;
#endif
}

#if defined(SUBLAB_HAVE_X86_KERNELS)
const KernelTable& avx512_table() {
  static const KernelTable table = {
      Isa::avx512,
      detail::induced_edges_avx512,
      detail::cross_edges_avx512,
      detail::kAvx2Table.shift_degrees,
      detail::kAvx2Table.swap_scan,
      detail::kAvx2Table.philox_blocks,
  };
  return table;
}
#endif

Isa cap_from_environment() {
  const char* env = std::getenv("SUBLAB_SIMD");
  if (env == nullptr || *env == '\0') return Isa::avx512;
  const std::string value(env);
  if (value == "scalar") return Isa::scalar;
  if (value == "avx2") return Isa::avx2;
  if (value == "avx512") return Isa::avx512;
  throw ConfigError("SUBLAB_SIMD must be scalar, avx2 or avx512, got '" + value + "'");
}

}  // namespace

std::vector<Isa> supported_isas() {
  std::vector<Isa> out;
  for (Isa isa : {Isa::scalar, Isa::avx2, Isa::avx512})
    if (host_supports(isa)) out.push_back(isa);
  return out;
}

const KernelTable& kernels_for(Isa isa) {
  if (!host_supports(isa)) throw ConfigError("host does not support " + std::string(name(isa)));
#if defined(SUBLAB_HAVE_X86_KERNELS)
  if (isa == Isa::avx2) return detail::kAvx2Table;
  if (isa == Isa::avx512) return avx512_table();
#endif
  return detail::kScalarTable;
}

const KernelTable& kernels() {
  static const KernelTable& best = [] () -> const KernelTable& {
    const Isa cap = cap_from_environment();
    Isa chosen = Isa::scalar;
    for (Isa isa : supported_isas())
      if (static_cast<int>(isa) <= static_cast<int>(cap)) chosen = isa;
    return kernels_for(chosen);
  }();
  return best;
}

}  // namespace sublab::simd
