#pragma once

// Catenaries, the Goldschmidt solution, and the constants c0, alpha0, cm,
// alpham, ac, alphacrit that separate the solution regimes.

#include <cmath>
#include <numbers>
#include <string>

#include "helfrich/error.hpp"
#include "helfrich/quadrature.hpp"
#include "helfrich/roots.hpp"

namespace helfrich {

/// Boundary radius of the catenary w_c: alpha(c) = c cosh(1/c).
inline double catenary_radius(double c) { return c * std::cosh(1.0 / c); }

/// alpha'(c) = cosh(1/c) - sinh(1/c) / c.
inline double catenary_radius_derivative(double c) {
  return std::cosh(1.0 / c) - std::sinh(1.0 / c) / c;
}

/// Area of the catenoid generated by w_c over [-1, 1].
inline double catenary_area(double c) {
  return 2.0 * std::numbers::pi * c + std::numbers::pi * c * c * std::sinh(2.0 / c);
}

struct ConstantsResiduals {
  double c0 = 0.0;
  double cm = 0.0;
  double ac = 0.0;
};

struct ConstantsTable {
  double c0 = 0.0;         // c = tanh(1/c)
  double alpha0 = 0.0;     // c0 cosh(1/c0)
  double cm = 0.0;         // 2/c = 1 + exp(-2/c)
  double alpham = 0.0;     // cm cosh(1/cm)
  double ac = 0.0;         // first root of tan x = tanh x in (pi, 3pi/2)
  double alphacrit = 0.0;  // 1 / (ac sqrt 2)
  ConstantsResiduals residuals;
};

inline ConstantsTable compute_constants() {
  ConstantsTable t;
  t.c0 = bisect([](double c) { return c - std::tanh(1.0 / c); }, 0.5, 1.5, 1e-15);
  t.alpha0 = catenary_radius(t.c0);
  // t = 2/c solves t = 1 + e^{-t}
  const double tm = bisect([](double s) { return s - 1.0 - std::exp(-s); }, 1.0, 2.0, 1e-15);
  t.cm = 2.0 / tm;
  t.alpham = catenary_radius(t.cm);
  // sin x cosh x - cos x sinh x = cos x cosh x (tan x - tanh x), pole-free
  t.ac = bisect([](double x) { return std::sin(x) * std::cosh(x) - std::cos(x) * std::sinh(x); },
                std::numbers::pi, 1.5 * std::numbers::pi, 1e-15);
  t.alphacrit = 1.0 / (t.ac * std::numbers::sqrt2);

  t.residuals.c0 = std::abs(t.c0 - std::tanh(1.0 / t.c0));
  t.residuals.cm = std::abs(2.0 / t.cm - 1.0 - std::exp(-2.0 / t.cm));
  t.residuals.ac = std::abs(std::tan(t.ac) - std::tanh(t.ac));
  return t;
}

/// Computed once, shared read-only.
inline const ConstantsTable& constants() {
  static const ConstantsTable table = compute_constants();
  return table;
}

struct CatenaryBranch {
  double alpha = 0.0;
  double c1 = 0.0;  // large branch, c1 >= c0
  double c2 = 0.0;  // small branch, c2 <= c0
  double area1 = 0.0;
  double area2 = 0.0;
  double eps_hat = 0.0;  // 1 / (4 c1^2)
};

/// Both solutions of c cosh(1/c) = alpha.
inline CatenaryBranch solve_catenary_branches(double alpha) {
  const auto& k = constants();
  if (!(alpha > 0.0) || !std::isfinite(alpha)) fail(ErrorKind::InvalidArgument, "alpha must be positive");
  CatenaryBranch b;
  b.alpha = alpha;
  if (std::abs(alpha - k.alpha0) <= 1e-12 * k.alpha0) {
    b.c1 = b.c2 = k.c0;
  } else if (alpha < k.alpha0) {
    fail(ErrorKind::NoSolution, "c cosh(1/c) = " + std::to_string(alpha) + " has no solution below alpha0");
  } else {
    auto residual = [alpha](double c) { return catenary_radius(c) - alpha; };
    // alpha(c) > c, so c1 < alpha; 2 alpha keeps a clear margin
    const double upper = std::max(alpha, 2.0 * alpha);
    b.c1 = bisect(residual, k.c0, upper, 1e-14 * upper);
    double lower = 0.1;
    while (catenary_radius(lower) <= alpha) lower *= 0.1;  // alpha(c) -> inf as c -> 0
    b.c2 = bisect(residual, lower, k.c0, 1e-16);
  }
  b.area1 = catenary_area(b.c1);
  b.area2 = catenary_area(b.c2);
  b.eps_hat = 1.0 / (4.0 * b.c1 * b.c1);
  return b;
}

/// Area of the two boundary disks.
inline double goldschmidt_area(double alpha) { return 2.0 * std::numbers::pi * alpha * alpha; }

/// (catenoid area - Goldschmidt area) / (2 pi) as a function of c.
inline double g_function(double c) { return c - 0.5 * c * c - 0.5 * c * c * std::exp(-2.0 / c); }

inline double g_function_derivative(double c) {
  const double e = std::exp(-2.0 / c);
  return 1.0 - c - c * e - e;
}

enum class AreaMinimiser { Catenary, Goldschmidt, Both };

inline std::string to_string(AreaMinimiser m) {
  switch (m) {
    case AreaMinimiser::Catenary: return "Catenary";
    case AreaMinimiser::Goldschmidt: return "Goldschmidt";
    case AreaMinimiser::Both: return "Both";
  }
  return "?";
}

inline AreaMinimiser classify_area_minimiser(double alpha) {
  const double am = constants().alpham;
  if (std::abs(alpha - am) <= 1e-12 * am) return AreaMinimiser::Both;
  return alpha > am ? AreaMinimiser::Catenary : AreaMinimiser::Goldschmidt;
}

struct ConvexityReport {
  double c = 0.0;
  double radius_gap = 0.0;  // alpha(c0 - c) - alpha(c0 + c)
  double area_gap = 0.0;    // g(c0 - c) - g(c0 + c)
  bool radius_holds = false;
  bool area_holds = false;
};

inline double catenary_radius_second_derivative(double c) { return std::cosh(1.0 / c) / (c * c * c); }

inline double g_function_second_derivative(double c) {
  const double e = std::exp(-2.0 / c);
  return -1.0 - e - 2.0 * e / c - 2.0 * e / (c * c);
}

namespace detail {

// f(c0 - c) - f(c0 + c) for f with f'(c0) = 0, written as
// int_0^c (c - r) (f''(c0 - r) - f''(c0 + r)) dr. Used when c is so small that
// the direct difference is below round-off.
template <class SecondDerivative>
double reflection_gap(SecondDerivative&& f2, double c0, double c) {
  static const GaussRule rule = gauss_legendre(20);
  double sum = 0.0;
  for (std::size_t q = 0; q < rule.size(); ++q) {
    const double r = c * rule.points[q];
    sum += rule.weights[q] * (c - r) * (f2(c0 - r) - f2(c0 + r));
  }
  return sum * c;
}

}  // namespace detail

/// The two reflection inequalities about c0 used to order the catenoid areas.
inline ConvexityReport reflection_convexity_checks(double c) {
  const double c0 = constants().c0;
  if (!(c > 0.0 && c < c0)) fail(ErrorKind::InvalidArgument, "need 0 < c < c0");
  ConvexityReport r;
  r.c = c;
  if (c >= 1e-3) {
    r.radius_gap = catenary_radius(c0 - c) - catenary_radius(c0 + c);
    r.area_gap = g_function(c0 - c) - g_function(c0 + c);
  } else {
    r.radius_gap = detail::reflection_gap(catenary_radius_second_derivative, c0, c);
    r.area_gap = detail::reflection_gap(g_function_second_derivative, c0, c);
  }
  r.radius_holds = r.radius_gap > 0.0;
  r.area_holds = r.area_gap > 0.0;
  return r;
}

}  // namespace helfrich
