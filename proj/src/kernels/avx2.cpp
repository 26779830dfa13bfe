#include <immintrin.h>

#include "variants.hpp"

namespace mixchain::kernels::avx2 {

namespace {
constexpr std::size_t kLanes = 4;
}

void taboo_step(std::span<const double> p, std::span<const double> x, std::size_t skip,
                std::span<double> out) {
  const std::size_t m = x.size();
  std::size_t i = 0;
  for (; i + kLanes <= m; i += kLanes) {
    __m256d acc = _mm256_setzero_pd();
    for (std::size_t k = 0; k < m; ++k) {
      if (k == skip) continue;
      const __m256d col = _mm256_loadu_pd(p.data() + k * m + i);
      acc = _mm256_add_pd(acc, _mm256_mul_pd(col, _mm256_set1_pd(x[k])));
    }
    _mm256_storeu_pd(out.data() + i, acc);
  }
  for (; i < m; ++i) {
    double acc = 0.0;
    for (std::size_t k = 0; k < m; ++k) {
      if (k == skip) continue;
      acc += p[k * m + i] * x[k];
    }
    out[i] = acc;
  }
}

void taboo_step_all(std::span<const double> p, std::span<const double> prev,
                    std::span<double> next, std::size_t m) {
  for (std::size_t j = 0; j < m; ++j) {
    taboo_step(p, prev.subspan(j * m, m), j, next.subspan(j * m, m));
  }
}

void horner_planes(std::span<const double> planes, std::size_t width, double s,
                   std::span<double> out) {
  const std::size_t count = width == 0 ? 0 : planes.size() / width;
  if (count == 0) {
    for (std::size_t e = 0; e < width; ++e) out[e] = 0.0;
    return;
  }
  const __m256d vs = _mm256_set1_pd(s);
  std::size_t e = 0;
  for (; e + kLanes <= width; e += kLanes) {
    __m256d acc = _mm256_loadu_pd(planes.data() + (count - 1) * width + e);
    for (std::size_t k = count - 1; k-- > 0;) {
      acc = _mm256_add_pd(_mm256_mul_pd(acc, vs), _mm256_loadu_pd(planes.data() + k * width + e));
    }
    _mm256_storeu_pd(out.data() + e, acc);
  }
  for (; e < width; ++e) {
    double acc = planes[(count - 1) * width + e];
    for (std::size_t k = count - 1; k-- > 0;) acc = acc * s + planes[k * width + e];
    out[e] = acc;
  }
}

}  // namespace mixchain::kernels::avx2
