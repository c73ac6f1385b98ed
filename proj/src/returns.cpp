#include "qgauss/returns.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <string>

#include "qgauss/errors.hpp"
#include "qgauss/kernels.hpp"

namespace qgauss {
namespace {

struct Moments {
  double mean;
  double sd;  // population convention
};

Moments moments(std::span<const double> values) {
  const double n = static_cast<double>(values.size());
  const double mean = kernels::sum(values) / n;
  const double sd = std::sqrt(kernels::sum_squared_deviations(values, mean) / n);
  return {mean, sd};
}

void require_nondegenerate(const Moments& m, std::span<const double> values) {
  // Spread at rounding level of the data is treated as constant.
  const double scale = kernels::max_abs(values);
  if (!(m.sd > 0.0) || m.sd <= 1e-14 * scale || !std::isfinite(m.sd)) {
    throw DataError("normalize: returns have zero variance");
  }
}

// Largest |r| with at least `tail_count` strictly larger values; near the
// sample maximum the exceedance counts are 0 or 1 by construction.
double default_grid_max(std::span<const double> values, int tail_count) {
  if (tail_count < 0) throw DataError("grid: tail count must be non-negative");
  const auto k = static_cast<std::size_t>(tail_count);
  if (k == 0 || k >= values.size()) return kernels::max_abs(values);
  std::vector<double> magnitudes(values.size());
  std::transform(values.begin(), values.end(), magnitudes.begin(), [](double v) { return std::abs(v); });
  std::nth_element(magnitudes.begin(), magnitudes.begin() + static_cast<std::ptrdiff_t>(k), magnitudes.end(),
                   std::greater<>());
  return magnitudes[k];
}

}  // namespace

PriceSeries::PriceSeries(std::string id, std::vector<std::int64_t> timestamps, std::vector<double> log_prices)
    : id_(std::move(id)), timestamps_(std::move(timestamps)), log_prices_(std::move(log_prices)) {
  if (timestamps_.size() != log_prices_.size()) {
    throw DataError("price series '" + id_ + "': timestamp and price counts differ");
  }
  if (log_prices_.size() < 2) throw DataError("price series '" + id_ + "': needs at least two samples");
  for (std::size_t i = 1; i < timestamps_.size(); ++i) {
    if (timestamps_[i] <= timestamps_[i - 1]) {
      throw DataError("price series '" + id_ + "': timestamps must be strictly increasing (index " +
                      std::to_string(i) + ")");
    }
  }
  for (std::size_t i = 0; i < log_prices_.size(); ++i) {
    if (!std::isfinite(log_prices_[i])) {
      throw DataError("price series '" + id_ + "': non-finite log price at index " + std::to_string(i));
    }
  }
}

PriceSeries PriceSeries::from_prices(std::string id, std::vector<std::int64_t> timestamps,
                                     std::span<const double> prices) {
  std::vector<double> logs(prices.size());
  for (std::size_t i = 0; i < prices.size(); ++i) {
    if (!(prices[i] > 0.0) || !std::isfinite(prices[i])) {
      throw DataError("price series '" + id + "': price at index " + std::to_string(i) +
                      " must be positive and finite");
    }
    logs[i] = std::log(prices[i]);
  }
  return PriceSeries(std::move(id), std::move(timestamps), std::move(logs));
}

PriceSeries PriceSeries::from_log_prices(std::string id, std::vector<std::int64_t> timestamps,
                                         std::vector<double> log_prices) {
  return PriceSeries(std::move(id), std::move(timestamps), std::move(log_prices));
}

ReturnSeries log_returns(const PriceSeries& series, std::int64_t dt) {
  if (dt < 1) throw DataError("log_returns: dt must be at least 1");
  if (static_cast<std::size_t>(dt) >= series.size()) {
    throw DataError("log_returns: dt = " + std::to_string(dt) + " is not shorter than series '" + series.id() +
                    "' (" + std::to_string(series.size()) + " samples)");
  }
  const auto& t = series.timestamps();
  const auto& lw = series.log_prices();
  ReturnSeries out{dt, {}};
  out.values.reserve(series.size() - static_cast<std::size_t>(dt));
  // Two pointers over the sorted clock: pair t_k with the sample at t_k + dt, if present.
  std::size_t j = 0;
  for (std::size_t k = 0; k < t.size(); ++k) {
    const std::int64_t target = t[k] + dt;
    if (j <= k) j = k + 1;
    while (j < t.size() && t[j] < target) ++j;
    if (j == t.size()) break;
    if (t[j] == target) out.values.push_back(lw[j] - lw[k]);
  }
  return out;
}

NormalizedReturns normalize(const ReturnSeries& returns) {
  if (returns.values.size() < 2) throw DataError("normalize: needs at least two returns");
  const Moments m = moments(returns.values);
  require_nondegenerate(m, returns.values);
  NormalizedReturns out;
  out.dt = returns.dt;
  out.values.resize(returns.values.size());
  kernels::standardize(returns.values, m.mean, m.sd, out.values);
  out.mean_removed = m.mean;
  out.volatility = m.sd;
  out.span = returns.values.size();
  return out;
}

NormalizedReturns pool(std::span<const NormalizedReturns> parts) {
  if (parts.empty()) throw DataError("pool: no inputs");
  const std::int64_t dt = parts.front().dt;
  for (const auto& p : parts) {
    if (p.dt != dt) throw DataError("pool: inputs have different dt");
  }
  if (parts.size() == 1) return parts.front();

  NormalizedReturns out;
  out.dt = dt;
  std::size_t total = 0;
  for (const auto& p : parts) total += p.values.size();
  out.values.reserve(total);
  double weighted_mean = 0.0;
  double weighted_var = 0.0;
  for (const auto& p : parts) {
    out.values.insert(out.values.end(), p.values.begin(), p.values.end());
    const double w = static_cast<double>(p.values.size());
    weighted_mean += w * p.mean_removed;
    weighted_var += w * p.volatility * p.volatility;
  }
  if (out.values.size() < 2) throw DataError("pool: needs at least two returns");
  const Moments m = moments(out.values);
  require_nondegenerate(m, out.values);
  kernels::standardize(out.values, m.mean, m.sd, out.values);
  const double n = static_cast<double>(total);
  out.mean_removed = weighted_mean / n;
  // Effective scale, in return units, of one pooled unit.
  out.volatility = m.sd * std::sqrt(weighted_var / n);
  out.span = total;
  return out;
}

std::vector<double> log_grid(double min, double max, int count) {
  if (!(min > 0.0) || !std::isfinite(min) || !std::isfinite(max) || !(min < max)) {
    throw DataError("grid: requires 0 < min < max");
  }
  if (count < 2) throw DataError("grid: requires at least two points");
  std::vector<double> grid(static_cast<std::size_t>(count));
  const double lo = std::log(min);
  const double step = (std::log(max) - lo) / (count - 1);
  for (int i = 0; i < count; ++i) grid[static_cast<std::size_t>(i)] = std::exp(lo + step * i);
  grid.front() = min;
  grid.back() = max;
  return grid;
}

EmpiricalCCDF empirical_ccdf(std::span<const double> values, const GridSpec& grid, std::int64_t dt) {
  if (values.empty()) throw DataError("empirical_ccdf: no returns");
  const double max = grid.max ? *grid.max : default_grid_max(values, grid.tail_count);
  const auto thresholds = log_grid(grid.min, max, grid.count);

  std::vector<std::size_t> counts(thresholds.size());
  kernels::count_abs_exceedances(values, thresholds, counts);

  EmpiricalCCDF out;
  out.dt = dt;
  out.n_samples = values.size();
  const double n = static_cast<double>(values.size());
  for (std::size_t i = 0; i < thresholds.size(); ++i) {
    if (counts[i] == 0) continue;
    out.thresholds.push_back(thresholds[i]);
    out.probabilities.push_back(static_cast<double>(counts[i]) / n);
  }
  return out;
}

EmpiricalCCDF empirical_ccdf(const NormalizedReturns& returns, const GridSpec& grid) {
  return empirical_ccdf(returns.values, grid, returns.dt);
}

std::vector<DensityPoint> numerical_pdf(const EmpiricalCCDF& ccdf) {
  const auto& x = ccdf.thresholds;
  const auto& p = ccdf.probabilities;
  if (x.size() != p.size()) throw DataError("numerical_pdf: thresholds and probabilities differ in length");
  if (x.size() < 3) throw DataError("numerical_pdf: needs at least three ccdf points");
  std::vector<DensityPoint> out;
  out.reserve(x.size() - 1);
  for (std::size_t i = 0; i + 1 < x.size(); ++i) {
    const double width = x[i + 1] - x[i];
    if (!(width > 0.0)) throw DataError("numerical_pdf: thresholds must be strictly increasing");
    if (p[i + 1] > p[i]) throw DataError("numerical_pdf: exceedance probabilities must be non-increasing");
    // max() guards against -0.0 on flat stretches.
    const double density = std::max(0.0, -(p[i + 1] - p[i]) / width);
    out.push_back({std::sqrt(x[i] * x[i + 1]), density});
  }
  return out;
}

}  // namespace qgauss
