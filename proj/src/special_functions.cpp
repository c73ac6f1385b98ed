#include "qgauss/special_functions.hpp"

#include <array>
#include <cmath>
#include <numbers>
#include <string>

#include "qgauss/errors.hpp"

namespace qgauss {
namespace {

constexpr int kMaxSeriesTerms = 10000;
constexpr double kSeriesTolerance = 1e-16;
// Direct series is rejected when sum |term| exceeds |sum| by this factor.
constexpr double kMaxCancellation = 1e3;
constexpr double kDirectSeriesLimit = 0.9;
constexpr double kPfaffLimit = 3.0;
constexpr double kStirlingThreshold = 10.0;
constexpr double kEulerGamma = 0.57721566490153286061;

// Taylor coefficients of ln Gamma(1 + e): -gamma e + sum (-1)^k zeta(k) e^k / k.
constexpr int kZetaTerms = 60;
constexpr std::array<double, 29> kZetaLow = {
    1.6449340668482264365, 1.2020569031595942854, 1.0823232337111381915, 1.0369277551433699263,
    1.0173430619844491397, 1.0083492773819228268, 1.0040773561979443394, 1.0020083928260822144,
    1.0009945751278180853, 1.0004941886041194646, 1.0002460865533080483, 1.0001227133475784891,
    1.0000612481350587048, 1.0000305882363070205, 1.0000152822594086519, 1.0000076371976378998,
    1.0000038172932649998, 1.0000019082127165539, 1.0000009539620338728, 1.0000004769329867878,
    1.0000002384505027277, 1.0000001192199259653, 1.0000000596081890513, 1.0000000298035035147,
    1.0000000149015548284, 1.0000000074507117898, 1.0000000037253340248, 1.0000000018626597235,
    1.0000000009313274324,
};

struct LnGammaSeries {
  std::array<double, kZetaTerms + 1> coeff{};

  LnGammaSeries() {
    coeff[1] = -kEulerGamma;
    for (int k = 2; k <= kZetaTerms; ++k) {
      double zeta;
      if (k - 2 < static_cast<int>(kZetaLow.size())) {
        zeta = kZetaLow[k - 2];
      } else {
        // 1 + 2^-k + ... + 6^-k is exact to 7^-31 here.
        zeta = 1.0;
        for (int j = 6; j >= 2; --j) zeta += std::pow(static_cast<double>(j), -k);
      }
      coeff[k] = ((k % 2 == 0) ? zeta : -zeta) / k;
    }
  }
};

// ln Gamma(1 + e) for |e| <= 1/2.
double ln_gamma_1p(double e) {
  static const LnGammaSeries series;
  double acc = 0.0;
  for (int k = kZetaTerms; k >= 1; --k) acc = (acc + series.coeff[k]) * e;
  return acc;
}

double stirling_correction(double x) {
  constexpr std::array<double, 8> kB = {
      1.0 / 12.0,   -1.0 / 360.0,           1.0 / 1260.0, -1.0 / 1680.0,
      1.0 / 1188.0, -691.0 / 360360.0,      1.0 / 156.0,  -3617.0 / 122400.0,
  };
  const double inv = 1.0 / x;
  const double inv2 = inv * inv;
  double acc = 0.0;
  for (auto it = kB.rbegin(); it != kB.rend(); ++it) acc = acc * inv2 + *it;
  return acc * inv;
}

double ln_gamma_stirling(double x) {
  constexpr double kHalfLn2Pi = 0.91893853320467274178;
  return (x - 0.5) * std::log(x) - x + kHalfLn2Pi + stirling_correction(x);
}

void require_positive(double x, const char* what) {
  if (!(x > 0.0) || !std::isfinite(x)) {
    throw DomainError(std::string(what) + ": argument must be positive and finite, got " + std::to_string(x));
  }
}

bool is_nonpositive_integer(double v) { return v <= 0.0 && v == std::floor(v); }

// sin(pi v) with exact zeros at the integers.
double sin_pi(double v) {
  double r = std::fmod(v, 2.0);
  if (r > 1.0) r -= 2.0;
  if (r < -1.0) r += 2.0;
  if (r == 0.0 || r == 1.0 || r == -1.0) return 0.0;
  if (r > 0.5) r = 1.0 - r;
  if (r < -0.5) r = -1.0 - r;
  return std::sin(std::numbers::pi * r);
}

// ln|Gamma(v)| and its sign for any real v that is not a pole.
double ln_abs_gamma(double v, int& sign) {
  if (v > 0.0) {
    sign = 1;
    return ln_gamma(v);
  }
  const double s = sin_pi(v);
  sign = s > 0.0 ? 1 : -1;
  return std::log(std::numbers::pi) - std::log(std::abs(s)) - ln_gamma(1.0 - v);
}

struct SeriesSum {
  double value;
  double abs_sum;
};

// sum_k (a)_k (b)_k / ((c)_k k!) z^k.
SeriesSum sum_series(double a, double b, double c, double z) {
  const bool polynomial = is_nonpositive_integer(a) || is_nonpositive_integer(b);
  double term = 1.0;
  double sum = 1.0;
  double abs_sum = 1.0;
  for (int k = 0; k < kMaxSeriesTerms; ++k) {
    const double num = (a + k) * (b + k);
    if (num == 0.0) return {sum, abs_sum};
    const double den = (c + k) * (k + 1.0);
    if (den == 0.0) throw DomainError("hyp2f1: lower parameter hits a non-positive integer");
    const double ratio = num / den * z;
    term *= ratio;
    sum += term;
    abs_sum += std::abs(term);
    if (!polynomial && std::abs(ratio) < 1.0 && std::abs(term) < kSeriesTolerance * std::abs(sum)) {
      return {sum, abs_sum};
    }
  }
  throw ConvergenceError("hyp2f1: series did not converge within " + std::to_string(kMaxSeriesTerms) + " terms");
}

void check_args(const Hyp2F1Args& args) {
  if (!std::isfinite(args.a) || !std::isfinite(args.b) || !std::isfinite(args.c) || !std::isfinite(args.z)) {
    throw DomainError("hyp2f1: non-finite argument");
  }
}

// True when the series stops (upper parameter -n) before the lower
// parameter -m reaches zero.
bool terminates_before_pole(double a, double b, double c) {
  const double m = -c;
  auto stops_early = [m](double u) { return is_nonpositive_integer(u) && -u <= m; };
  return stops_early(a) || stops_early(b);
}

}  // namespace

double ln_gamma(double x) {
  require_positive(x, "ln_gamma");
  if (x == 1.0 || x == 2.0) return 0.0;
  if (x < 0.5) return ln_gamma_1p(x) - std::log(x);  // Gamma(x) = Gamma(1+x)/x
  if (x <= 1.5) return ln_gamma_1p(x - 1.0);
  if (x <= 2.5) return ln_gamma_1p(x - 2.0) + std::log1p(x - 2.0);
  if (x < kStirlingThreshold) {
    // Step down into (1.5, 2.5]; every factor exceeds one, so no cancellation.
    double y = x;
    double product = 1.0;
    while (y > 2.5) {
      y -= 1.0;
      product *= y;
    }
    return ln_gamma_1p(y - 2.0) + std::log1p(y - 2.0) + std::log(product);
  }
  return ln_gamma_stirling(x);
}

namespace detail {

double ln_gamma_ratio(double p, double r) {
  require_positive(p, "gamma_ratio");
  require_positive(r, "gamma_ratio");
  if (p == r) return 0.0;
  if (p >= kStirlingThreshold && r >= kStirlingThreshold) {
    // Difference of Stirling expansions with the large logarithms cancelled analytically.
    const double d = p - r;
    return (p - 0.5) * std::log1p(d / r) + d * (std::log(r) - 1.0) + stirling_correction(p) -
           stirling_correction(r);
  }
  return ln_gamma(p) - ln_gamma(r);
}

double gamma_quotient(double x, double y) {
  const double d = y - x;
  if (d == std::floor(d) && std::abs(d) <= 64.0) {
    const int n = static_cast<int>(std::abs(d));
    const double base = d >= 0.0 ? x : y;
    double product = 1.0;
    for (int k = 0; k < n; ++k) product *= base + k;
    if (d >= 0.0) {
      if (product == 0.0) throw DomainError("gamma_quotient: pole in numerator");
      return 1.0 / product;
    }
    return product;
  }
  if (is_nonpositive_integer(x)) throw DomainError("gamma_quotient: pole in numerator");
  if (is_nonpositive_integer(y)) return 0.0;
  if (x > 0.0 && y > 0.0) return std::exp(ln_gamma_ratio(x, y));
  int sx = 1;
  int sy = 1;
  const double lx = ln_abs_gamma(x, sx);
  const double ly = ln_abs_gamma(y, sy);
  return sx * sy * std::exp(lx - ly);
}

double hyp2f1_series(const Hyp2F1Args& args) {
  check_args(args);
  if (!(std::abs(args.z) < 1.0) && !is_nonpositive_integer(args.a) && !is_nonpositive_integer(args.b)) {
    throw DomainError("hyp2f1_series: requires |z| < 1");
  }
  return sum_series(args.a, args.b, args.c, args.z).value;
}

double hyp2f1_pfaff(const Hyp2F1Args& args) {
  check_args(args);
  const auto [a, b, c, z] = args;
  if (z > 0.0) throw DomainError("hyp2f1_pfaff: requires z <= 0");
  const double w = z / (z - 1.0);
  // Two equivalent forms; prefer the one whose terms are all non-negative.
  //   (1-z)^-a F(a, c-b; c; w)   or   (1-z)^-b F(c-a, b; c; w)
  auto nonnegative = [c](double u, double v) { return u >= 0.0 && v >= 0.0 && c > 0.0; };
  bool use_a_form = true;
  if (!nonnegative(a, c - b)) {
    if (nonnegative(c - a, b)) {
      use_a_form = false;
    } else if (!is_nonpositive_integer(c - b) && is_nonpositive_integer(c - a)) {
      use_a_form = false;
    }
  }
  if (use_a_form) return std::pow(1.0 - z, -a) * sum_series(a, c - b, c, w).value;
  return std::pow(1.0 - z, -b) * sum_series(c - a, b, c, w).value;
}

double hyp2f1_reciprocal(const Hyp2F1Args& args) {
  check_args(args);
  const auto [a, b, c, z] = args;
  if (!(z < -1.0)) throw DomainError("hyp2f1_reciprocal: requires z < -1");
  const double inv = 1.0 / z;
  double result = 0.0;
  const double coef_a = gamma_quotient(b - a, c - a) * gamma_quotient(c, b);
  if (coef_a != 0.0) {
    result += coef_a * std::pow(-z, -a) * hyp2f1({a, a - c + 1.0, a - b + 1.0, inv});
  }
  const double coef_b = gamma_quotient(a - b, c - b) * gamma_quotient(c, a);
  if (coef_b != 0.0) {
    result += coef_b * std::pow(-z, -b) * hyp2f1({b, b - c + 1.0, b - a + 1.0, inv});
  }
  return result;
}

}  // namespace detail

double gamma_ratio(double p, double r) { return std::exp(detail::ln_gamma_ratio(p, r)); }

double hyp2f1(const Hyp2F1Args& args) {
  check_args(args);
  const auto [a, b, c, z] = args;
  if (z > 0.0) throw DomainError("hyp2f1: only z <= 0 is supported");
  if (is_nonpositive_integer(c) && !terminates_before_pole(a, b, c)) {
    throw DomainError("hyp2f1: c must not be a non-positive integer");
  }
  if (z == 0.0) return 1.0;
  if (is_nonpositive_integer(a) || is_nonpositive_integer(b)) return sum_series(a, b, c, z).value;
  if (z >= -kDirectSeriesLimit) {
    const SeriesSum direct = sum_series(a, b, c, z);
    if (direct.abs_sum <= kMaxCancellation * std::abs(direct.value)) return direct.value;
  }
  if (z >= -kPfaffLimit) return detail::hyp2f1_pfaff(args);
  return detail::hyp2f1_reciprocal(args);
}

}  // namespace qgauss
