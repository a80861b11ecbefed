#include <arm_neon.h>

#include <algorithm>
#include <cmath>

#include "relatent/simd/kernels.hpp"

namespace relatent::simd::neon {

double l1_distance(const double* a, const double* b, std::size_t n) {
  float64x2_t acc0 = vdupq_n_f64(0.0);
  float64x2_t acc1 = vdupq_n_f64(0.0);
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    acc0 = vaddq_f64(acc0, vabdq_f64(vld1q_f64(a + i), vld1q_f64(b + i)));
    acc1 = vaddq_f64(acc1, vabdq_f64(vld1q_f64(a + i + 2), vld1q_f64(b + i + 2)));
  }
  double sum = vaddvq_f64(vaddq_f64(acc0, acc1));
  for (; i < n; ++i) sum += std::fabs(a[i] - b[i]);
  return sum;
}

MinMaxSums min_max_sums(const double* a, const double* b, std::size_t n) {
  float64x2_t lo = vdupq_n_f64(0.0);
  float64x2_t hi = vdupq_n_f64(0.0);
  std::size_t i = 0;
  for (; i + 2 <= n; i += 2) {
    float64x2_t x = vld1q_f64(a + i);
    float64x2_t y = vld1q_f64(b + i);
    lo = vaddq_f64(lo, vminq_f64(x, y));
    hi = vaddq_f64(hi, vmaxq_f64(x, y));
  }
  MinMaxSums out{vaddvq_f64(lo), vaddvq_f64(hi)};
  for (; i < n; ++i) {
    out.min_sum += std::min(a[i], b[i]);
    out.max_sum += std::max(a[i], b[i]);
  }
  return out;
}

}  // namespace relatent::simd::neon
