#pragma once

#include <cstddef>
#include <cstdint>
#include <vector>

namespace qgauss {

/// Parameters of G_q(x) = A(q, beta) exp_q(-beta (x - mu)^2).
/// Valid for 1 < q < 3 and beta > 0; mu is zero wherever absolute
/// returns are modelled.
struct QGaussianParams {
  double q = 1.5;
  double beta = 1.0;
  double mu = 0.0;
};

/// Asymptotic exceedance exponent: P(|X| > x) ~ x^-alpha.
struct TailExponent {
  double alpha = 0.0;
};

/// Throws DomainError unless 1 < q < 3, beta > 0 and all fields are finite.
void validate(const QGaussianParams& params);

/// q-exponential [1 + (1-q) x]_+^(1/(1-q)); exp(x) when q == 1.
double exp_q(double q, double x);

/// Normalization constant A(q, beta).
double normalization(const QGaussianParams& params);

/// Probability density G_q(x).
double pdf(const QGaussianParams& params, double x);

/// P(|X| > x) for x >= 0. Requires mu == 0.
double ccdf_abs(const QGaussianParams& params, double x);

/// alpha = (3 - q) / (q - 1), for 1 < q < 3.
TailExponent q_to_tail(double q);

/// q = (3 + alpha) / (1 + alpha), for alpha > 0.
double tail_to_q(TailExponent tail);

/// n independent draws from G_q, reproducible for a given seed.
///
/// Uses the equivalence with a Student-t of nu = (3-q)/(q-1) degrees of
/// freedom scaled by 1/sqrt(beta (3-q)); the t variate is a standard
/// normal over sqrt(chi^2_nu / nu), both driven by one mt19937_64.
std::vector<double> sample(const QGaussianParams& params, std::size_t n, std::uint64_t seed);

}  // namespace qgauss
