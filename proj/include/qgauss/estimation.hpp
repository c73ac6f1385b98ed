#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include "qgauss/qgaussian.hpp"
#include "qgauss/returns.hpp"

namespace qgauss {

/// Fitted (q, beta) at one time scale, plus diagnostics.
struct ScaleFitResult {
  std::int64_t dt = 0;
  double q = 0.0;
  double beta = 0.0;
  // Sum of squared log10 residuals at the optimum.
  double residual = 0.0;
  std::size_t n_points = 0;
  bool converged = false;
  // Scale the fitted sample was divided by (pooled volatility for
  // normalized returns, 1 for raw samples). Set by the caller.
  double volatility = 1.0;

  // beta of the same distribution expressed in un-normalized return units.
  double beta_in_return_units() const { return beta / (volatility * volatility); }
};

struct PowerLawFit {
  double exponent = 0.0;
  double amplitude = 0.0;
  double exponent_stderr = 0.0;
  double r_squared = 0.0;

  double predict(double x) const;
};

struct ScalingReport {
  PowerLawFit tau_fit;    // (q - 1) against dt
  PowerLawFit gamma_fit;  // 1/beta against dt
  PowerLawFit delta_fit;  // 1/beta against (q - 1)
};

struct FitInit {
  double q;
  double beta;
};

inline constexpr double kFitQMin = 1.01;
inline constexpr double kFitQMax = 2.99;
inline constexpr double kFitBetaMin = 1e-4;
inline constexpr double kFitBetaMax = 1e4;
inline constexpr double kDefaultTailFraction = 0.3;

/// Least-squares fit of ccdf_abs to log10 P over the box
/// q in (1.01, 2.99), beta in (1e-4, 1e4), by a bounded simplex search.
///
/// Without `init`, q starts from the tail exponent mapped through
/// tail_to_q and beta starts at 1. Throws DataError for fewer than 8
/// points or a non-positive probability. Non-convergence is reported
/// through ScaleFitResult::converged.
ScaleFitResult fit_qgaussian_ccdf(const EmpiricalCCDF& ccdf, std::optional<FitInit> init = std::nullopt);

/// Sum of squared log10 residuals of the model against the ccdf points.
double ccdf_log_residual(const EmpiricalCCDF& ccdf, const QGaussianParams& params);

/// alpha from an OLS fit of ln P on ln x over the largest-x
/// `tail_fraction` of the grid. Throws DataError with fewer than five
/// tail points or a non-decaying tail.
TailExponent estimate_tail_exponent(const EmpiricalCCDF& ccdf, double tail_fraction = kDefaultTailFraction);

/// OLS of ln y on ln x. Throws DataError on fewer than three points,
/// non-positive values, mismatched lengths or constant x.
PowerLawFit fit_power_law(std::span<const double> xs, std::span<const double> ys);

/// The three scaling laws across time scales. Throws DataError with
/// fewer than three fits or repeated dt.
ScalingReport scaling_report(std::span<const ScaleFitResult> fits);

}  // namespace qgauss
