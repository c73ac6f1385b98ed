#include "qgauss/qgaussian.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <random>
#include <string>

#include "qgauss/errors.hpp"
#include "qgauss/special_functions.hpp"

namespace qgauss {
namespace {

// Above s = (q-1) beta x^2 = 1 the exceedance probability is taken from
// the 1/z connection formula, whose leading term cancels the 1 exactly.
constexpr double kTailSwitch = 1.0;

double ln_normalization(const QGaussianParams& p) {
  const double b = 1.0 / (p.q - 1.0);
  return 0.5 * std::log((p.q - 1.0) * p.beta / std::numbers::pi) + detail::ln_gamma_ratio(b, b - 0.5);
}

}  // namespace

void validate(const QGaussianParams& params) {
  if (!std::isfinite(params.q) || !(params.q > 1.0 && params.q < 3.0)) {
    throw DomainError("q-Gaussian: q must lie in (1, 3), got " + std::to_string(params.q));
  }
  if (!std::isfinite(params.beta) || !(params.beta > 0.0)) {
    throw DomainError("q-Gaussian: beta must be positive, got " + std::to_string(params.beta));
  }
  if (!std::isfinite(params.mu)) throw DomainError("q-Gaussian: mu must be finite");
}

double exp_q(double q, double x) {
  if (q == 1.0) return std::exp(x);
  const double base = 1.0 + (1.0 - q) * x;
  if (!(base > 0.0)) return 0.0;
  return std::pow(base, 1.0 / (1.0 - q));
}

double normalization(const QGaussianParams& params) {
  validate(params);
  return std::exp(ln_normalization(params));
}

double pdf(const QGaussianParams& params, double x) {
  validate(params);
  const double d = x - params.mu;
  const double b = 1.0 / (params.q - 1.0);
  // exp_q(-beta d^2) = (1 + (q-1) beta d^2)^(-1/(q-1)) for q > 1.
  return std::exp(ln_normalization(params) - b * std::log1p((params.q - 1.0) * params.beta * d * d));
}

double ccdf_abs(const QGaussianParams& params, double x) {
  validate(params);
  if (params.mu != 0.0) throw DomainError("ccdf_abs: requires mu == 0");
  if (std::isnan(x) || x < 0.0) throw DomainError("ccdf_abs: threshold must be non-negative");
  if (x == 0.0) return 1.0;
  if (std::isinf(x)) return 0.0;

  const double b = 1.0 / (params.q - 1.0);
  const double s = (params.q - 1.0) * params.beta * x * x;
  if (s <= kTailSwitch) {
    // 1 - 2 A x 2F1(1/2, b; 3/2; -s), with 2 A x = 2 sqrt(s/pi) Gamma(b)/Gamma(b-1/2).
    const double two_ax = 2.0 * std::sqrt(s / std::numbers::pi) * gamma_ratio(b, b - 0.5);
    const double p = 1.0 - two_ax * hyp2f1({0.5, b, 1.5, -s});
    return std::clamp(p, 0.0, 1.0);
  }
  // Second term of the 1/z expansion of the same expression:
  //   Gamma(b)/(sqrt(pi) Gamma(b+1/2)) s^(1/2-b) 2F1(b, b-1/2; b+1/2; -1/s).
  const double log_scale = detail::ln_gamma_ratio(b, b + 0.5) - 0.5 * std::log(std::numbers::pi) +
                           (0.5 - b) * std::log(s);
  const double p = std::exp(log_scale) * hyp2f1({b, b - 0.5, b + 0.5, -1.0 / s});
  return std::clamp(p, 0.0, 1.0);
}

TailExponent q_to_tail(double q) {
  if (!std::isfinite(q) || !(q > 1.0 && q < 3.0)) {
    throw DomainError("q_to_tail: q must lie in (1, 3), got " + std::to_string(q));
  }
  return {(3.0 - q) / (q - 1.0)};
}

double tail_to_q(TailExponent tail) {
  if (!std::isfinite(tail.alpha) || !(tail.alpha > 0.0)) {
    throw DomainError("tail_to_q: alpha must be positive, got " + std::to_string(tail.alpha));
  }
  return (3.0 + tail.alpha) / (1.0 + tail.alpha);
}

std::vector<double> sample(const QGaussianParams& params, std::size_t n, std::uint64_t seed) {
  validate(params);
  if (n == 0) throw DomainError("sample: n must be at least 1");
  const double nu = (3.0 - params.q) / (params.q - 1.0);
  const double scale = 1.0 / std::sqrt(params.beta * (3.0 - params.q));

  std::mt19937_64 rng(seed);
  std::normal_distribution<double> normal(0.0, 1.0);
  std::chi_squared_distribution<double> chi2(nu);

  std::vector<double> draws(n);
  for (auto& x : draws) {
    const double z = normal(rng);
    const double c = chi2(rng);
    x = params.mu + scale * z / std::sqrt(c / nu);
  }
  return draws;
}

}  // namespace qgauss
