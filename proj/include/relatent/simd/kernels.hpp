#pragma once

// Dense reduction kernels behind the core similarities. Every kernel has a
// scalar reference implementation; vector variants (AVX2 on x86-64, NEON on
// AArch64) are compiled in separate translation units and chosen once at
// startup from the running CPU's capabilities.
//
// Set RELATENT_KERNELS=scalar in the environment to force the reference path.

#include <cstddef>
#include <span>
#include <string_view>

namespace relatent::simd {

struct MinMaxSums {
  double min_sum = 0.0;
  double max_sum = 0.0;
};

enum class Isa { scalar, avx2, neon };

struct KernelTable {
  Isa isa;
  // sum_i |a[i] - b[i]|
  double (*l1_distance)(const double* a, const double* b, std::size_t n);
  // (sum_i min(a[i], b[i]), sum_i max(a[i], b[i]))
  MinMaxSums (*min_max_sums)(const double* a, const double* b, std::size_t n);
};

namespace scalar {
double l1_distance(const double* a, const double* b, std::size_t n);
MinMaxSums min_max_sums(const double* a, const double* b, std::size_t n);
}  // namespace scalar

namespace avx2 {
double l1_distance(const double* a, const double* b, std::size_t n);
MinMaxSums min_max_sums(const double* a, const double* b, std::size_t n);
}  // namespace avx2

namespace neon {
double l1_distance(const double* a, const double* b, std::size_t n);
MinMaxSums min_max_sums(const double* a, const double* b, std::size_t n);
}  // namespace neon

// True when the variant is compiled into this binary and supported by the CPU.
bool isa_available(Isa isa);
const KernelTable& kernels_for(Isa isa);

// Table selected for this process.
const KernelTable& active_kernels();
std::string_view isa_name(Isa isa);

inline double l1_distance(std::span<const double> a, std::span<const double> b) {
  return active_kernels().l1_distance(a.data(), b.data(), a.size());
}
inline MinMaxSums min_max_sums(std::span<const double> a, std::span<const double> b) {
  return active_kernels().min_max_sums(a.data(), b.data(), a.size());
}

}  // namespace relatent::simd
