#pragma once

// Nelder-Mead simplex search over an unconstrained parameter vector.
// Box constraints are the caller's business (map through a transform).

#include <algorithm>
#include <array>
#include <cmath>
#include <cstddef>
#include <numeric>

namespace qgauss::detail {

template <std::size_t N>
struct SimplexResult {
  std::array<double, N> x;
  double value;
  int iterations;
  bool converged;
};

struct SimplexOptions {
  // Converged once the spread of vertex values is below
  // f_tolerance * max(1, |f_best|) and the simplex diameter is below x_tolerance.
  double f_tolerance = 1e-10;
  double x_tolerance = 1e-10;
  int max_iterations = 20000;
};

template <std::size_t N, class F>
SimplexResult<N> nelder_mead(F&& f, const std::array<double, N>& start, double step,
                             const SimplexOptions& opts = {}) {
  using Point = std::array<double, N>;
  constexpr double kReflect = 1.0;
  constexpr double kExpand = 2.0;
  constexpr double kContract = 0.5;
  constexpr double kShrink = 0.5;

  auto eval = [&f](const Point& p) {
    const double v = f(p);
    return std::isnan(v) ? HUGE_VAL : v;
  };

  std::array<Point, N + 1> pts;
  std::array<double, N + 1> vals;
  pts[0] = start;
  for (std::size_t i = 0; i < N; ++i) {
    pts[i + 1] = start;
    pts[i + 1][i] += step;
  }
  for (std::size_t i = 0; i <= N; ++i) vals[i] = eval(pts[i]);

  std::array<std::size_t, N + 1> order;
  int it = 0;
  bool converged = false;
  for (; it < opts.max_iterations; ++it) {
    std::iota(order.begin(), order.end(), std::size_t{0});
    std::sort(order.begin(), order.end(), [&vals](std::size_t a, std::size_t b) { return vals[a] < vals[b]; });
    const std::size_t best = order.front();
    const std::size_t worst = order.back();
    const std::size_t second = order[N - 1];

    double diameter = 0.0;
    for (std::size_t i = 0; i <= N; ++i) {
      for (std::size_t d = 0; d < N; ++d) diameter = std::max(diameter, std::abs(pts[i][d] - pts[best][d]));
    }
    const double spread = vals[worst] - vals[best];
    if (spread <= opts.f_tolerance * std::max(1.0, std::abs(vals[best])) && diameter <= opts.x_tolerance) {
      converged = true;
      break;
    }

    Point centroid{};
    for (std::size_t i = 0; i <= N; ++i) {
      if (i == worst) continue;
      for (std::size_t d = 0; d < N; ++d) centroid[d] += pts[i][d] / N;
    }
    auto along = [&](double t) {
      Point p;
      for (std::size_t d = 0; d < N; ++d) p[d] = centroid[d] + t * (pts[worst][d] - centroid[d]);
      return p;
    };

    const Point reflected = along(-kReflect);
    const double f_reflected = eval(reflected);
    if (f_reflected < vals[best]) {
      const Point expanded = along(-kExpand);
      const double f_expanded = eval(expanded);
      if (f_expanded < f_reflected) {
        pts[worst] = expanded;
        vals[worst] = f_expanded;
      } else {
        pts[worst] = reflected;
        vals[worst] = f_reflected;
      }
      continue;
    }
    if (f_reflected < vals[second]) {
      pts[worst] = reflected;
      vals[worst] = f_reflected;
      continue;
    }
    const bool outside = f_reflected < vals[worst];
    const Point contracted = along(outside ? -kContract : kContract);
    const double f_contracted = eval(contracted);
    if (f_contracted < (outside ? f_reflected : vals[worst])) {
      pts[worst] = contracted;
      vals[worst] = f_contracted;
      continue;
    }
    for (std::size_t i = 0; i <= N; ++i) {
      if (i == best) continue;
      for (std::size_t d = 0; d < N; ++d) pts[i][d] = pts[best][d] + kShrink * (pts[i][d] - pts[best][d]);
      vals[i] = eval(pts[i]);
    }
  }

  const auto best = static_cast<std::size_t>(std::min_element(vals.begin(), vals.end()) - vals.begin());
  return {pts[best], vals[best], it, converged};
}

}  // namespace qgauss::detail
