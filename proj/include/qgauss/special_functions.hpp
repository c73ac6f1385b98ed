#pragma once

namespace qgauss {

/// Arguments of the Gauss hypergeometric function 2F1(a, b; c; z).
///
/// The distribution code only ever builds a = 1/2, c = 3/2,
/// b = 1/(q-1) > 1/2 and z <= 0; hyp2f1 accepts any real parameters
/// with z <= 0 but its accuracy contract is stated for that family.
struct Hyp2F1Args {
  double a;
  double b;
  double c;
  double z;
};

/// ln Gamma(x) for x > 0. Relative error below 1e-13 on [1e-3, 1e6],
/// including the neighbourhoods of the zeros at x = 1 and x = 2.
/// Throws DomainError for x <= 0 or non-finite x.
double ln_gamma(double x);

/// Gamma(p) / Gamma(r) for p, r > 0, evaluated without forming either
/// Gamma value, so it stays finite when both arguments are large.
double gamma_ratio(double p, double r);

/// 2F1(a, b; c; z) for real parameters and z <= 0.
///
/// Throws DomainError when z > 0, c is a non-positive integer (and the
/// series does not terminate first), or when the z < -3 expansion is
/// degenerate for the given parameters. Throws ConvergenceError if a
/// series needs more than 10,000 terms.
double hyp2f1(const Hyp2F1Args& args);

namespace detail {

// Individual evaluation routes, exposed for cross-checking in tests.

// Taylor series about z = 0; requires |z| < 1.
double hyp2f1_series(const Hyp2F1Args& args);
// Pfaff transformation onto w = z / (z - 1) in [0, 1); requires z <= 0.
double hyp2f1_pfaff(const Hyp2F1Args& args);
// Connection formula onto 1/z; requires z < -1.
double hyp2f1_reciprocal(const Hyp2F1Args& args);

// ln(Gamma(p) / Gamma(r)) for p, r > 0.
double ln_gamma_ratio(double p, double r);

// Gamma(x) / Gamma(y) for real (possibly negative) x and y, resolving
// pole/pole quotients when x - y is an integer.
double gamma_quotient(double x, double y);

}  // namespace detail
}  // namespace qgauss
