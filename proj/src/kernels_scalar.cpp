#include <algorithm>
#include <cmath>

#include "qgauss/kernels.hpp"

namespace qgauss::kernels::scalar {
namespace {

constexpr std::size_t kLanes = 4;
// Values per pass over the threshold list; keeps a chunk resident in L1.
constexpr std::size_t kChunk = 2048;

}  // namespace

// All reductions below accumulate lane j over elements i = j (mod 4) and
// combine lanes as (l0 + l1) + (l2 + l3), matching the AVX2 variants.

double sum(std::span<const double> x) {
  double lane[kLanes] = {0.0, 0.0, 0.0, 0.0};
  const std::size_t blocked = x.size() - x.size() % kLanes;
  for (std::size_t i = 0; i < blocked; i += kLanes) {
    for (std::size_t j = 0; j < kLanes; ++j) lane[j] += x[i + j];
  }
  double total = (lane[0] + lane[1]) + (lane[2] + lane[3]);
  for (std::size_t i = blocked; i < x.size(); ++i) total += x[i];
  return total;
}

double sum_squared_deviations(std::span<const double> x, double center) {
  double lane[kLanes] = {0.0, 0.0, 0.0, 0.0};
  const std::size_t blocked = x.size() - x.size() % kLanes;
  for (std::size_t i = 0; i < blocked; i += kLanes) {
    for (std::size_t j = 0; j < kLanes; ++j) {
      const double d = x[i + j] - center;
      lane[j] += d * d;
    }
  }
  double total = (lane[0] + lane[1]) + (lane[2] + lane[3]);
  for (std::size_t i = blocked; i < x.size(); ++i) {
    const double d = x[i] - center;
    total += d * d;
  }
  return total;
}

void standardize(std::span<const double> x, double center, double scale, std::span<double> out) {
  for (std::size_t i = 0; i < x.size(); ++i) out[i] = (x[i] - center) / scale;
}

void count_abs_exceedances(std::span<const double> x, std::span<const double> thresholds,
                           std::span<std::size_t> counts) {
  for (auto& c : counts) c = 0;
  for (std::size_t start = 0; start < x.size(); start += kChunk) {
    const auto chunk = x.subspan(start, std::min(kChunk, x.size() - start));
    for (std::size_t t = 0; t < thresholds.size(); ++t) {
      const double threshold = thresholds[t];
      std::size_t n = 0;
      for (const double v : chunk) n += std::abs(v) > threshold ? 1 : 0;
      counts[t] += n;
    }
  }
}

double max_abs(std::span<const double> x) {
  double lane[kLanes] = {0.0, 0.0, 0.0, 0.0};
  const std::size_t blocked = x.size() - x.size() % kLanes;
  for (std::size_t i = 0; i < blocked; i += kLanes) {
    for (std::size_t j = 0; j < kLanes; ++j) {
      const double v = std::abs(x[i + j]);
      lane[j] = v > lane[j] ? v : lane[j];
    }
  }
  const double m01 = lane[0] > lane[1] ? lane[0] : lane[1];
  const double m23 = lane[2] > lane[3] ? lane[2] : lane[3];
  double m = m01 > m23 ? m01 : m23;
  for (std::size_t i = blocked; i < x.size(); ++i) {
    const double v = std::abs(x[i]);
    m = v > m ? v : m;
  }
  return m;
}

}  // namespace qgauss::kernels::scalar
