#pragma once

#include "mixchain/kernels.hpp"

namespace mixchain::kernels {

namespace scalar {
void taboo_step(std::span<const double> p, std::span<const double> x, std::size_t skip,
                std::span<double> out);
void taboo_step_all(std::span<const double> p, std::span<const double> prev,
                    std::span<double> next, std::size_t m);
void horner_planes(std::span<const double> planes, std::size_t width, double s,
                   std::span<double> out);
}  // namespace scalar

#if MIXCHAIN_HAVE_AVX2
namespace avx2 {
void taboo_step(std::span<const double> p, std::span<const double> x, std::size_t skip,
                std::span<double> out);
void taboo_step_all(std::span<const double> p, std::span<const double> prev,
                    std::span<double> next, std::size_t m);
void horner_planes(std::span<const double> planes, std::size_t width, double s,
                   std::span<double> out);
}  // namespace avx2
#endif

}  // namespace mixchain::kernels
