#include <atomic>
#include <cstdlib>
#include <stdexcept>
#include <string_view>

#include "qgauss/kernels.hpp"

namespace qgauss::kernels {
namespace {

bool cpu_has_avx2() noexcept {
#if defined(QGAUSS_HAVE_AVX2)
  return __builtin_cpu_supports("avx2");
#else
  return false;
#endif
}

Isa initial_isa() noexcept {
  if (const char* env = std::getenv("QGAUSS_ISA"); env != nullptr && std::string_view(env) == "scalar") {
    return Isa::scalar;
  }
  return detected_isa();
}

std::atomic<Isa>& active() {
  static std::atomic<Isa> isa{initial_isa()};
  return isa;
}

bool use_avx2() { return active().load(std::memory_order_relaxed) == Isa::avx2; }

}  // namespace

const char* isa_name(Isa isa) noexcept { return isa == Isa::avx2 ? "avx2" : "scalar"; }

Isa detected_isa() noexcept { return cpu_has_avx2() ? Isa::avx2 : Isa::scalar; }

Isa active_isa() noexcept { return active().load(std::memory_order_relaxed); }

void set_active_isa(Isa isa) {
  if (isa == Isa::avx2 && !cpu_has_avx2()) {
    throw std::invalid_argument("AVX2 kernels are not available on this build or CPU");
  }
  active().store(isa, std::memory_order_relaxed);
}

#if defined(QGAUSS_HAVE_AVX2)
#define QGAUSS_DISPATCH(call) (use_avx2() ? avx2::call : scalar::call)
#else
#define QGAUSS_DISPATCH(call) (scalar::call)
#endif

double sum(std::span<const double> x) { return QGAUSS_DISPATCH(sum(x)); }

double sum_squared_deviations(std::span<const double> x, double center) {
  return QGAUSS_DISPATCH(sum_squared_deviations(x, center));
}

void standardize(std::span<const double> x, double center, double scale, std::span<double> out) {
  QGAUSS_DISPATCH(standardize(x, center, scale, out));
}

void count_abs_exceedances(std::span<const double> x, std::span<const double> thresholds,
                           std::span<std::size_t> counts) {
  QGAUSS_DISPATCH(count_abs_exceedances(x, thresholds, counts));
}

double max_abs(std::span<const double> x) { return QGAUSS_DISPATCH(max_abs(x)); }

#undef QGAUSS_DISPATCH

}  // namespace qgauss::kernels
