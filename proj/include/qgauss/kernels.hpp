#pragma once

// Data-parallel inner loops of the returns pipeline.
//
// Each kernel has a scalar reference in qgauss::kernels::scalar and, on
// x86-64 builds, an AVX2 variant in qgauss::kernels::avx2. The
// unqualified functions dispatch at runtime to the best variant the CPU
// supports. Reductions accumulate in four interleaved lanes in both
// variants and neither uses FMA, so the two produce bit-identical results.

#include <cstddef>
#include <span>

namespace qgauss::kernels {

enum class Isa { scalar, avx2 };

const char* isa_name(Isa isa) noexcept;

// Best variant supported by both the build and the running CPU.
Isa detected_isa() noexcept;

// Variant used by the dispatching functions. Starts at detected_isa(),
// or at scalar when the environment sets QGAUSS_ISA=scalar.
Isa active_isa() noexcept;

// Throws std::invalid_argument if the variant is unavailable here.
void set_active_isa(Isa isa);

double sum(std::span<const double> x);
double sum_squared_deviations(std::span<const double> x, double center);
// out[i] = (x[i] - center) / scale; out may alias x.
void standardize(std::span<const double> x, double center, double scale, std::span<double> out);
// counts[j] = #{ i : |x[i]| > thresholds[j] }.
void count_abs_exceedances(std::span<const double> x, std::span<const double> thresholds,
                           std::span<std::size_t> counts);
// max |x[i]|, 0 for empty input.
double max_abs(std::span<const double> x);

namespace scalar {
double sum(std::span<const double> x);
double sum_squared_deviations(std::span<const double> x, double center);
void standardize(std::span<const double> x, double center, double scale, std::span<double> out);
void count_abs_exceedances(std::span<const double> x, std::span<const double> thresholds,
                           std::span<std::size_t> counts);
double max_abs(std::span<const double> x);
}  // namespace scalar

#if defined(QGAUSS_HAVE_AVX2)
namespace avx2 {
double sum(std::span<const double> x);
double sum_squared_deviations(std::span<const double> x, double center);
void standardize(std::span<const double> x, double center, double scale, std::span<double> out);
void count_abs_exceedances(std::span<const double> x, std::span<const double> thresholds,
                           std::span<std::size_t> counts);
double max_abs(std::span<const double> x);
}  // namespace avx2
#endif

}  // namespace qgauss::kernels
