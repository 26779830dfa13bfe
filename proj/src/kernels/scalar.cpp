#include "variants.hpp"

namespace mixchain::kernels::scalar {

void taboo_step(std::span<const double> p, std::span<const double> x, std::size_t skip,
                std::span<double> out) {
  const std::size_t m = x.size();
  for (std::size_t i = 0; i < m; ++i) {
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
  for (std::size_t e = 0; e < width; ++e) {
    double acc = planes[(count - 1) * width + e];
    for (std::size_t k = count - 1; k-- > 0;) acc = acc * s + planes[k * width + e];
    out[e] = acc;
  }
}

}  // namespace mixchain::kernels::scalar
