#include <algorithm>
#include <cmath>

#include "relatent/simd/kernels.hpp"

namespace relatent::simd::scalar {

double l1_distance(const double* a, const double* b, std::size_t n) {
  double sum = 0.0;
  for (std::size_t i = 0; i < n; ++i) sum += std::fabs(a[i] - b[i]);
  return sum;
}

MinMaxSums min_max_sums(const double* a, const double* b, std::size_t n) {
  MinMaxSums out;
  for (std::size_t i = 0; i < n; ++i) {
    out.min_sum += std::min(a[i], b[i]);
    out.max_sum += std::max(a[i], b[i]);
  }
  return out;
}

}  // namespace relatent::simd::scalar
