#include "qgauss/estimation.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <set>
#include <string>

#include "qgauss/errors.hpp"
#include "simplex.hpp"

namespace qgauss {
namespace {

constexpr std::size_t kMinFitPoints = 8;
constexpr std::size_t kMinTailPoints = 5;
constexpr double kInitialStep = 0.3;
constexpr double kRestartStep = 0.1;
constexpr double kProbabilityFloor = 1e-300;

double logistic(double u) { return 1.0 / (1.0 + std::exp(-u)); }

double logit(double p) {
  p = std::clamp(p, 1e-12, 1.0 - 1e-12);
  return std::log(p / (1.0 - p));
}

// Unconstrained (u, v) <-> (q, beta) inside the fitting box.
struct BoxTransform {
  double ln_beta_min = std::log(kFitBetaMin);
  double ln_beta_max = std::log(kFitBetaMax);

  QGaussianParams params(const std::array<double, 2>& uv) const {
    return {kFitQMin + (kFitQMax - kFitQMin) * logistic(uv[0]),
            std::exp(ln_beta_min + (ln_beta_max - ln_beta_min) * logistic(uv[1])), 0.0};
  }

  std::array<double, 2> coords(double q, double beta) const {
    return {logit((q - kFitQMin) / (kFitQMax - kFitQMin)),
            logit((std::log(beta) - ln_beta_min) / (ln_beta_max - ln_beta_min))};
  }
};

struct Regression {
  double slope;
  double intercept;
  double ssr;
  double sst;
  double sxx;
  std::size_t n;
};

Regression ols(std::span<const double> x, std::span<const double> y) {
  const std::size_t n = x.size();
  double mx = 0.0;
  double my = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    mx += x[i];
    my += y[i];
  }
  mx /= static_cast<double>(n);
  my /= static_cast<double>(n);
  double sxx = 0.0;
  double sxy = 0.0;
  double sst = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    sxx += (x[i] - mx) * (x[i] - mx);
    sxy += (x[i] - mx) * (y[i] - my);
    sst += (y[i] - my) * (y[i] - my);
  }
  if (!(sxx > 0.0)) throw DataError("regression: abscissae are all equal");
  const double slope = sxy / sxx;
  const double intercept = my - slope * mx;
  double ssr = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const double r = y[i] - (intercept + slope * x[i]);
    ssr += r * r;
  }
  return {slope, intercept, ssr, sst, sxx, n};
}

void check_ccdf(const EmpiricalCCDF& ccdf, std::size_t min_points) {
  const auto& x = ccdf.thresholds;
  const auto& p = ccdf.probabilities;
  if (x.size() != p.size()) throw DataError("ccdf: thresholds and probabilities differ in length");
  if (x.size() < min_points) {
    throw DataError("ccdf: needs at least " + std::to_string(min_points) + " points, got " +
                    std::to_string(x.size()));
  }
  for (std::size_t i = 0; i < x.size(); ++i) {
    if (!(x[i] > 0.0) || !std::isfinite(x[i])) throw DataError("ccdf: thresholds must be positive");
    if (i > 0 && !(x[i] > x[i - 1])) throw DataError("ccdf: thresholds must be strictly increasing");
    if (!(p[i] > 0.0) || !(p[i] <= 1.0)) throw DataError("ccdf: probabilities must lie in (0, 1]");
  }
}

}  // namespace

double PowerLawFit::predict(double x) const { return amplitude * std::pow(x, exponent); }

double ccdf_log_residual(const EmpiricalCCDF& ccdf, const QGaussianParams& params) {
  double total = 0.0;
  for (std::size_t i = 0; i < ccdf.thresholds.size(); ++i) {
    const double model = std::max(ccdf_abs(params, ccdf.thresholds[i]), kProbabilityFloor);
    const double r = std::log10(ccdf.probabilities[i]) - std::log10(model);
    total += r * r;
  }
  return total;
}

ScaleFitResult fit_qgaussian_ccdf(const EmpiricalCCDF& ccdf, std::optional<FitInit> init) {
  check_ccdf(ccdf, kMinFitPoints);

  FitInit start{1.5, 1.0};
  if (init) {
    if (!std::isfinite(init->q) || !std::isfinite(init->beta) || !(init->beta > 0.0)) {
      throw DomainError("fit_qgaussian_ccdf: invalid initial guess");
    }
    start = *init;
  } else {
    try {
      start.q = tail_to_q(estimate_tail_exponent(ccdf));
    } catch (const Error&) {
      // Too few tail points or a non-decaying tail: keep the default guess.
    }
  }
  start.q = std::clamp(start.q, kFitQMin + 0.01, kFitQMax - 0.01);
  start.beta = std::clamp(start.beta, kFitBetaMin * 10.0, kFitBetaMax / 10.0);

  const BoxTransform box;
  auto objective = [&](const std::array<double, 2>& uv) {
    try {
      return ccdf_log_residual(ccdf, box.params(uv));
    } catch (const Error&) {
      return HUGE_VAL;
    }
  };

  auto first = detail::nelder_mead<2>(objective, box.coords(start.q, start.beta), kInitialStep);
  auto second = detail::nelder_mead<2>(objective, first.x, kRestartStep);
  const auto& best = second.value <= first.value ? second : first;

  const QGaussianParams p = box.params(best.x);
  ScaleFitResult out;
  out.dt = ccdf.dt;
  out.q = p.q;
  out.beta = p.beta;
  out.residual = best.value;
  out.n_points = ccdf.thresholds.size();
  out.converged = second.converged && std::isfinite(best.value);
  return out;
}

TailExponent estimate_tail_exponent(const EmpiricalCCDF& ccdf, double tail_fraction) {
  if (!(tail_fraction > 0.0 && tail_fraction < 1.0)) {
    throw DomainError("estimate_tail_exponent: tail_fraction must lie in (0, 1)");
  }
  check_ccdf(ccdf, 1);
  const std::size_t n = ccdf.thresholds.size();
  const auto k = static_cast<std::size_t>(std::lround(tail_fraction * static_cast<double>(n)));
  if (k < kMinTailPoints) {
    throw DataError("estimate_tail_exponent: tail region has " + std::to_string(k) + " points, needs " +
                    std::to_string(kMinTailPoints));
  }
  std::vector<double> lx(k);
  std::vector<double> lp(k);
  for (std::size_t i = 0; i < k; ++i) {
    lx[i] = std::log(ccdf.thresholds[n - k + i]);
    lp[i] = std::log(ccdf.probabilities[n - k + i]);
  }
  const double alpha = -ols(lx, lp).slope;
  if (!(alpha > 0.0)) throw DataError("estimate_tail_exponent: tail does not decay");
  return {alpha};
}

PowerLawFit fit_power_law(std::span<const double> xs, std::span<const double> ys) {
  if (xs.size() != ys.size()) throw DataError("fit_power_law: xs and ys differ in length");
  if (xs.size() < 3) throw DataError("fit_power_law: needs at least three points");
  std::vector<double> lx(xs.size());
  std::vector<double> ly(ys.size());
  for (std::size_t i = 0; i < xs.size(); ++i) {
    if (!(xs[i] > 0.0) || !(ys[i] > 0.0) || !std::isfinite(xs[i]) || !std::isfinite(ys[i])) {
      throw DataError("fit_power_law: data must be positive and finite");
    }
    lx[i] = std::log(xs[i]);
    ly[i] = std::log(ys[i]);
  }
  const Regression r = ols(lx, ly);
  PowerLawFit fit;
  fit.exponent = r.slope;
  fit.amplitude = std::exp(r.intercept);
  fit.exponent_stderr = std::sqrt(r.ssr / static_cast<double>(r.n - 2) / r.sxx);
  fit.r_squared = r.sst > 0.0 ? std::clamp(1.0 - r.ssr / r.sst, 0.0, 1.0) : 1.0;
  return fit;
}

ScalingReport scaling_report(std::span<const ScaleFitResult> fits) {
  if (fits.size() < 3) throw DataError("scaling_report: needs at least three time scales");
  std::set<std::int64_t> seen;
  std::vector<double> dt;
  std::vector<double> q_minus_1;
  std::vector<double> inv_beta;
  for (const auto& f : fits) {
    if (!seen.insert(f.dt).second) throw DataError("scaling_report: repeated dt " + std::to_string(f.dt));
    dt.push_back(static_cast<double>(f.dt));
    q_minus_1.push_back(f.q - 1.0);
    inv_beta.push_back(1.0 / f.beta);
  }
  return {fit_power_law(dt, q_minus_1), fit_power_law(dt, inv_beta), fit_power_law(q_minus_1, inv_beta)};
}

}  // namespace qgauss
