#pragma once

// Reference computations for the tests. Nothing here calls into the
// library's special functions: high-precision series, quadrature and
// closed forms only.

#include <cmath>
#include <numbers>

#include <boost/math/quadrature/exp_sinh.hpp>
#include <boost/math/quadrature/gauss_kronrod.hpp>
#include <boost/math/quadrature/tanh_sinh.hpp>
#include <boost/math/special_functions/gamma.hpp>
#include <boost/multiprecision/cpp_bin_float.hpp>

namespace oracle {

using mp50 = boost::multiprecision::cpp_bin_float_50;

inline double lgamma50(double x) { return static_cast<double>(boost::math::lgamma(mp50(x))); }

// Gamma(p)/Gamma(r), with the log difference taken before rounding.
inline double gamma_ratio50(double p, double r) {
  return static_cast<double>(boost::multiprecision::exp(boost::math::lgamma(mp50(p)) - boost::math::lgamma(mp50(r))));
}

// 2F1 by its Taylor series in 50-digit arithmetic; |z| < 1.
inline double hyp2f1_series50(double a, double b, double c, double z) {
  mp50 term = 1;
  mp50 sum = 1;
  const mp50 eps("1e-45");
  for (int k = 0; k < 200000; ++k) {
    term *= (mp50(a) + k) * (mp50(b) + k) / ((mp50(c) + k) * (k + 1)) * mp50(z);
    sum += term;
    if (boost::multiprecision::abs(term) < eps * boost::multiprecision::abs(sum) && k > 10) break;
  }
  return static_cast<double>(sum);
}

// Euler integral for 2F1 in 50-digit arithmetic; c > b > 0, z < 1.
inline double hyp2f1_euler50(double a, double b, double c, double z) {
  using boost::multiprecision::pow;
  boost::math::quadrature::tanh_sinh<mp50> ts;
  const mp50 ma(a), mb(b), mc(c), mz(z);
  auto f = [&](mp50 t) { return pow(t, mb - 1) * pow(1 - t, mc - mb - 1) * pow(1 - mz * t, -ma); };
  const mp50 scale =
      boost::multiprecision::exp(boost::math::lgamma(mc) - boost::math::lgamma(mb) - boost::math::lgamma(mc - mb));
  return static_cast<double>(scale * ts.integrate(f, mp50(0), mp50(1), mp50("1e-25")));
}

// 2F1(1/2, b; 3/2; -s) = integral_0^1 (1 + s t^2)^-b dt, by adaptive
// Gauss-Kronrod split at the knee t ~ 1/sqrt(s).
inline double hyp2f1_half_family(double b, double s) {
  using boost::math::quadrature::gauss_kronrod;
  auto f = [b, s](double t) { return std::exp(-b * std::log1p(s * t * t)); };
  double knots[] = {0.0, 0.0, 0.0, 1.0};
  const double knee = s > 1.0 ? 1.0 / std::sqrt(s) : 0.5;
  knots[1] = std::min(knee, 0.5);
  knots[2] = std::min(10.0 * knee, 0.75);
  double total = 0.0;
  for (int i = 0; i < 3; ++i) {
    if (knots[i + 1] > knots[i]) total += gauss_kronrod<double, 61>::integrate(f, knots[i], knots[i + 1], 15, 1e-12);
  }
  return total;
}

// Density written out independently of the library, using std::lgamma.
inline double qgaussian_pdf(double q, double beta, double x) {
  const double b = 1.0 / (q - 1.0);
  const double ln_a =
      0.5 * std::log((q - 1.0) * beta / std::numbers::pi) + std::lgamma(b) - std::lgamma((3.0 - q) / (2.0 * (q - 1.0)));
  return std::exp(ln_a - b * std::log1p((q - 1.0) * beta * x * x));
}

// integral_lo^hi f by adaptive Gauss-Kronrod.
template <class F>
double integrate(F f, double lo, double hi, double tol = 1e-12) {
  return boost::math::quadrature::gauss_kronrod<double, 61>::integrate(f, lo, hi, 15, tol);
}

// integral_x^inf f via exp-sinh (handles algebraic tails).
template <class F>
double integrate_to_infinity(F f, double x, double tol = 1e-13) {
  boost::math::quadrature::exp_sinh<double> integrator;
  return integrator.integrate([&](double t) { return f(x + t); }, tol);
}

// P(|X| > x) = 2 integral_x^inf pdf, with a log-spaced panel split so
// that each panel is well resolved.
template <class F>
double exceedance(F pdf, double x) {
  if (x == 0.0) return 1.0;
  if (x < 1.0) {
    // 1 - 2 integral_0^x: no cancellation issue at this size.
    return 1.0 - 2.0 * integrate(pdf, 0.0, x);
  }
  return 2.0 * integrate_to_infinity(pdf, x);
}

}  // namespace oracle
