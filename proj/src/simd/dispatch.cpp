#include <cstdlib>
#include <cstring>
#include <stdexcept>

#include "relatent/simd/kernels.hpp"

namespace relatent::simd {

namespace {

constexpr KernelTable kScalar{Isa::scalar, &scalar::l1_distance, &scalar::min_max_sums};

#if defined(__x86_64__) || defined(_M_X64)
constexpr KernelTable kAvx2{Isa::avx2, &avx2::l1_distance, &avx2::min_max_sums};
#endif
#if defined(__aarch64__)
constexpr KernelTable kNeon{Isa::neon, &neon::l1_distance, &neon::min_max_sums};
#endif

const KernelTable& select() {
  if (const char* forced = std::getenv("RELATENT_KERNELS"); forced && std::strcmp(forced, "scalar") == 0) {
    return kScalar;
  }
#if defined(__x86_64__) || defined(_M_X64)
  if (isa_available(Isa::avx2)) return kAvx2;
#endif
#if defined(__aarch64__)
  return kNeon;
#endif
  return kScalar;
}

}  // namespace

bool isa_available(Isa isa) {
  switch (isa) {
    case Isa::scalar:
      return true;
    case Isa::avx2:
#if defined(__x86_64__) || defined(_M_X64)
      return __builtin_cpu_supports("avx2");
#else
      return false;
#endif
    case Isa::neon:
#if defined(__aarch64__)
      return true;
#else
      return false;
#endif
  }
  return false;
}

const KernelTable& kernels_for(Isa isa) {
  if (!isa_available(isa)) throw std::invalid_argument("kernel variant not available: " + std::string(isa_name(isa)));
  switch (isa) {
#if defined(__x86_64__) || defined(_M_X64)
    case Isa::avx2:
      return kAvx2;
#endif
#if defined(__aarch64__)
    case Isa::neon:
      return kNeon;
#endif
    default:
      return kScalar;
  }
}

const KernelTable& active_kernels() {
  static const KernelTable& table = select();
  return table;
}

std::string_view isa_name(Isa isa) {
  switch (isa) {
    case Isa::scalar:
      return "scalar";
    case Isa::avx2:
      return "avx2";
    case Isa::neon:
      return "neon";
  }
  return "unknown";
}

}  // namespace relatent::simd
