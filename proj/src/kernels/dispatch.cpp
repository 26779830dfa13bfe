#include <atomic>
#include <string>

#include "mixchain/error.hpp"
#include "variants.hpp"

namespace mixchain::kernels {
namespace {

constexpr KernelTable kScalar{scalar::taboo_step, scalar::taboo_step_all, scalar::horner_planes};
#if MIXCHAIN_HAVE_AVX2
constexpr KernelTable kAvx2{avx2::taboo_step, avx2::taboo_step_all, avx2::horner_planes};
#endif

bool cpu_has_avx2() {
#if MIXCHAIN_HAVE_AVX2 && (defined(__GNUC__) || defined(__clang__))
  return __builtin_cpu_supports("avx2");
#else
  return false;
#endif
}

std::atomic<Isa>& active() {
  static std::atomic<Isa> isa{detected_isa()};
  return isa;
}

}  // namespace

std::string_view isa_name(Isa isa) {
  switch (isa) {
    case Isa::scalar: return "scalar";
    case Isa::avx2: return "avx2";
  }
  return "unknown";
}

bool isa_supported(Isa isa) {
  switch (isa) {
    case Isa::scalar: return true;
    case Isa::avx2: return cpu_has_avx2();
  }
  return false;
}

Isa detected_isa() { return isa_supported(Isa::avx2) ? Isa::avx2 : Isa::scalar; }

Isa active_isa() { return active().load(std::memory_order_relaxed); }

void set_active_isa(Isa isa) {
  if (!isa_supported(isa)) {
    throw Error(ErrorCode::InvalidArgument,
                std::string("kernel variant ") + std::string(isa_name(isa)) + " is not supported");
  }
  active().store(isa, std::memory_order_relaxed);
}

const KernelTable& kernel_table(Isa isa) {
  if (!isa_supported(isa)) {
    throw Error(ErrorCode::InvalidArgument,
                std::string("kernel variant ") + std::string(isa_name(isa)) + " is not supported");
  }
#if MIXCHAIN_HAVE_AVX2
  if (isa == Isa::avx2) return kAvx2;
#endif
  return kScalar;
}

void taboo_step(std::span<const double> p, std::span<const double> x, std::size_t skip,
                std::span<double> out) {
  kernel_table(active_isa()).taboo_step(p, x, skip, out);
}

void taboo_step_all(std::span<const double> p, std::span<const double> prev,
                    std::span<double> next, std::size_t m) {
  kernel_table(active_isa()).taboo_step_all(p, prev, next, m);
}

void horner_planes(std::span<const double> planes, std::size_t width, double s,
                   std::span<double> out) {
  kernel_table(active_isa()).horner_planes(planes, width, s, out);
}

}  // namespace mixchain::kernels
