#include <immintrin.h>

#include <algorithm>
#include <cmath>
#include <cstdint>

#include "qgauss/kernels.hpp"

namespace qgauss::kernels::avx2 {
namespace {

constexpr std::size_t kLanes = 4;
constexpr std::size_t kChunk = 2048;

inline __m256d abs_pd(__m256d v) { return _mm256_andnot_pd(_mm256_set1_pd(-0.0), v); }

inline double combine_sum(__m256d acc) {
  alignas(32) double lane[kLanes];
  _mm256_store_pd(lane, acc);
  return (lane[0] + lane[1]) + (lane[2] + lane[3]);
}

}  // namespace

double sum(std::span<const double> x) {
  const double* p = x.data();
  const std::size_t blocked = x.size() - x.size() % kLanes;
  __m256d acc = _mm256_setzero_pd();
  for (std::size_t i = 0; i < blocked; i += kLanes) acc = _mm256_add_pd(acc, _mm256_loadu_pd(p + i));
  double total = combine_sum(acc);
  for (std::size_t i = blocked; i < x.size(); ++i) total += p[i];
  return total;
}

double sum_squared_deviations(std::span<const double> x, double center) {
  const double* p = x.data();
  const std::size_t blocked = x.size() - x.size() % kLanes;
  const __m256d c = _mm256_set1_pd(center);
  __m256d acc = _mm256_setzero_pd();
  for (std::size_t i = 0; i < blocked; i += kLanes) {
    const __m256d d = _mm256_sub_pd(_mm256_loadu_pd(p + i), c);
    acc = _mm256_add_pd(acc, _mm256_mul_pd(d, d));
  }
  double total = combine_sum(acc);
  for (std::size_t i = blocked; i < x.size(); ++i) {
    const double d = p[i] - center;
    total += d * d;
  }
  return total;
}

void standardize(std::span<const double> x, double center, double scale, std::span<double> out) {
  const double* p = x.data();
  double* o = out.data();
  const std::size_t blocked = x.size() - x.size() % kLanes;
  const __m256d c = _mm256_set1_pd(center);
  const __m256d s = _mm256_set1_pd(scale);
  for (std::size_t i = 0; i < blocked; i += kLanes) {
    _mm256_storeu_pd(o + i, _mm256_div_pd(_mm256_sub_pd(_mm256_loadu_pd(p + i), c), s));
  }
  for (std::size_t i = blocked; i < x.size(); ++i) o[i] = (p[i] - center) / scale;
}

void count_abs_exceedances(std::span<const double> x, std::span<const double> thresholds,
                           std::span<std::size_t> counts) {
  for (auto& c : counts) c = 0;
  for (std::size_t start = 0; start < x.size(); start += kChunk) {
    const std::size_t len = std::min(kChunk, x.size() - start);
    const double* p = x.data() + start;
    const std::size_t blocked = len - len % kLanes;
    for (std::size_t t = 0; t < thresholds.size(); ++t) {
      const double threshold = thresholds[t];
      const __m256d th = _mm256_set1_pd(threshold);
      // Comparison masks are all-ones (-1 as int64); subtracting counts them.
      __m256i acc = _mm256_setzero_si256();
      for (std::size_t i = 0; i < blocked; i += kLanes) {
        const __m256d gt = _mm256_cmp_pd(abs_pd(_mm256_loadu_pd(p + i)), th, _CMP_GT_OQ);
        acc = _mm256_sub_epi64(acc, _mm256_castpd_si256(gt));
      }
      alignas(32) std::int64_t lane[kLanes];
      _mm256_store_si256(reinterpret_cast<__m256i*>(lane), acc);
      std::size_t n = static_cast<std::size_t>(lane[0] + lane[1] + lane[2] + lane[3]);
      for (std::size_t i = blocked; i < len; ++i) n += std::abs(p[i]) > threshold ? 1 : 0;
      counts[t] += n;
    }
  }
}

double max_abs(std::span<const double> x) {
  const double* p = x.data();
  const std::size_t blocked = x.size() - x.size() % kLanes;
  __m256d m = _mm256_setzero_pd();
  // max_pd(a, b) is a > b ? a : b, the same selection as the scalar loop.
  for (std::size_t i = 0; i < blocked; i += kLanes) m = _mm256_max_pd(abs_pd(_mm256_loadu_pd(p + i)), m);
  alignas(32) double lane[kLanes];
  _mm256_store_pd(lane, m);
  const double m01 = lane[0] > lane[1] ? lane[0] : lane[1];
  const double m23 = lane[2] > lane[3] ? lane[2] : lane[3];
  double result = m01 > m23 ? m01 : m23;
  for (std::size_t i = blocked; i < x.size(); ++i) {
    const double v = std::abs(p[i]);
    result = v > result ? v : result;
  }
  return result;
}

}  // namespace qgauss::kernels::avx2
