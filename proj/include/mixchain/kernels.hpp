#pragma once

// Data-parallel inner loops with a scalar reference implementation and an
// AVX2 variant chosen at runtime. Both variants perform the same sequence of
// IEEE multiplies and adds per output element (no FMA, no reassociation), so
// their results are bit-identical; tests/test_kernels.cpp holds them to that.

#include <cstddef>
#include <span>
#include <string_view>

namespace mixchain::kernels {

enum class Isa { scalar, avx2 };

std::string_view isa_name(Isa isa);
bool isa_supported(Isa isa);
/// Best variant this CPU (and build) supports.
Isa detected_isa();
Isa active_isa();
/// Force a variant, e.g. for equivalence tests. Throws if unsupported.
void set_active_isa(Isa isa);

/// One step of the taboo (first-passage) recurrence for a single target:
///   out[i] = sum_{k != skip} p(i, k) * x[k],   k ascending,
/// with `p_colmajor` an m x m column-major matrix.
using TabooStepFn = void (*)(std::span<const double> p_colmajor, std::span<const double> x,
                             std::size_t skip, std::span<double> out);

/// All targets at once: column j of `next` is taboo_step(P, prev(:, j), j).
/// All matrices are m x m column-major.
using TabooStepAllFn = void (*)(std::span<const double> p_colmajor,
                                std::span<const double> prev_colmajor,
                                std::span<double> next_colmajor, std::size_t m);

/// Elementwise Horner evaluation of `planes.size() / width` stacked
/// coefficient planes: out[e] = sum_k planes[k * width + e] * s^k.
using HornerPlanesFn = void (*)(std::span<const double> planes, std::size_t width, double s,
                                std::span<double> out);

struct KernelTable {
  TabooStepFn taboo_step;
  TabooStepAllFn taboo_step_all;
  HornerPlanesFn horner_planes;
};

/// Kernels of a specific variant (throws if unsupported).
const KernelTable& kernel_table(Isa isa);

void taboo_step(std::span<const double> p_colmajor, std::span<const double> x, std::size_t skip,
                std::span<double> out);
void taboo_step_all(std::span<const double> p_colmajor, std::span<const double> prev_colmajor,
                    std::span<double> next_colmajor, std::size_t m);
void horner_planes(std::span<const double> planes, std::size_t width, double s,
                   std::span<double> out);

}  // namespace mixchain::kernels
