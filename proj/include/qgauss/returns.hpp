#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

namespace qgauss {

/// One instrument's price history W(t) on an integer tick clock.
///
/// Prices are held as ln W: log returns need only logs, and
/// synthetic walks can leave the range of a double long before their
/// logarithm does.
class PriceSeries {
 public:
  // Throws DataError on length mismatch, fewer than two samples,
  // non-increasing timestamps or non-positive/non-finite prices.
  static PriceSeries from_prices(std::string id, std::vector<std::int64_t> timestamps,
                                 std::span<const double> prices);
  static PriceSeries from_log_prices(std::string id, std::vector<std::int64_t> timestamps,
                                     std::vector<double> log_prices);

  const std::string& id() const noexcept { return id_; }
  const std::vector<std::int64_t>& timestamps() const noexcept { return timestamps_; }
  const std::vector<double>& log_prices() const noexcept { return log_prices_; }
  std::size_t size() const noexcept { return log_prices_.size(); }

 private:
  PriceSeries(std::string id, std::vector<std::int64_t> timestamps, std::vector<double> log_prices);

  std::string id_;
  std::vector<std::int64_t> timestamps_;
  std::vector<double> log_prices_;
};

struct ReturnSeries {
  std::int64_t dt = 0;
  std::vector<double> values;
};

struct NormalizedReturns {
  std::int64_t dt = 0;
  std::vector<double> values;
  double mean_removed = 0.0;
  // Standard deviation the centred returns were divided by, in return units.
  double volatility = 1.0;
  // Number of return observations T.
  std::size_t span = 0;
};

/// Logarithmically spaced thresholds from `min` to `max`.
///
/// Without `max` the upper end is the largest |r| that still has
/// `tail_count` larger values, so the last point carries that many
/// exceedances. With tail_count = 0 it is the sample maximum.
struct GridSpec {
  double min = 1e-2;
  std::optional<double> max;
  int count = 60;
  int tail_count = 300;
};

struct EmpiricalCCDF {
  std::int64_t dt = 0;
  std::vector<double> thresholds;
  std::vector<double> probabilities;
  std::size_t n_samples = 0;
};

struct DensityPoint {
  double x;
  double density;
};

/// R(t) = ln W(t + dt) - ln W(t) over every pair exactly dt ticks apart.
/// Throws DataError if dt < 1 or dt >= series.size().
ReturnSeries log_returns(const PriceSeries& series, std::int64_t dt);

/// Centre and scale to unit population standard deviation.
/// Throws DataError on fewer than two values or zero variance.
NormalizedReturns normalize(const ReturnSeries& returns);

/// Concatenate per-instrument normalized returns and renormalize.
/// Throws DataError on empty input or mismatched dt.
NormalizedReturns pool(std::span<const NormalizedReturns> parts);

/// Log-spaced grid of `count` thresholds in [min, max].
/// Throws DataError unless 0 < min < max and count >= 2.
std::vector<double> log_grid(double min, double max, int count);

/// Exceedance probabilities P(|r| > x_i); thresholds with P = 0 are dropped.
EmpiricalCCDF empirical_ccdf(const NormalizedReturns& returns, const GridSpec& grid = {});
EmpiricalCCDF empirical_ccdf(std::span<const double> values, const GridSpec& grid = {},
                             std::int64_t dt = 0);

/// Density of |r| from the difference quotient -dP/dx on each grid
/// interval, placed at the interval's geometric midpoint.
/// Throws DataError for fewer than three points.
std::vector<DensityPoint> numerical_pdf(const EmpiricalCCDF& ccdf);

}  // namespace qgauss
