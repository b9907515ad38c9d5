#pragma once

// Area, Willmore and Helfrich functionals on the discrete profile space, their
// exact discrete gradients, and the closed-form bounds and comparison surfaces.

#include <array>
#include <cmath>
#include <limits>
#include <numbers>
#include <optional>
#include <vector>

#include "helfrich/classical.hpp"
#include "helfrich/profile.hpp"
#include "helfrich/roots.hpp"

namespace helfrich {

inline constexpr double kPi = std::numbers::pi;

// ---------------------------------------------------------------------------
// Degrees of freedom
// ---------------------------------------------------------------------------

/// Free unknowns of an admissible curve: u at nodes 0..n-1 and u' at nodes
/// 1..n-1, interleaved by node (u0, u1, u1', u2, u2', ...). u(1), u'(1) and
/// u'(0) are fixed by the boundary and symmetry conditions.
struct DofMap {
  int n_elements = 0;

  [[nodiscard]] int size() const noexcept { return 2 * n_elements - 1; }
  [[nodiscard]] int value(int node) const noexcept {
    if (node >= n_elements) return -1;
    return node == 0 ? 0 : 2 * node - 1;
  }
  [[nodiscard]] int slope(int node) const noexcept {
    if (node == 0 || node >= n_elements) return -1;
    return 2 * node;
  }
  /// Global indices of the element's [u_e, u'_e, u_{e+1}, u'_{e+1}] slots.
  [[nodiscard]] std::array<int, 4> element(int e) const noexcept {
    return {value(e), slope(e), value(e + 1), slope(e + 1)};
  }
};

inline std::vector<double> pack_dofs(const ProfileCurve& curve) {
  const DofMap map{curve.grid().n_elements()};
  std::vector<double> x(map.size());
  for (int i = 0; i < curve.grid().n_nodes(); ++i) {
    if (const int k = map.value(i); k >= 0) x[k] = curve.values()[i];
    if (const int k = map.slope(i); k >= 0) x[k] = curve.derivatives()[i];
  }
  return x;
}

/// Nodal data of an admissible curve with the given free unknowns. No
/// positivity check, so callers can probe infeasible points.
inline NodalData unpack_dofs(std::span<const double> x, const Grid& grid, double alpha) {
  const DofMap map{grid.n_elements()};
  NodalData d{std::vector<double>(grid.n_nodes(), 0.0), std::vector<double>(grid.n_nodes(), 0.0)};
  for (int i = 0; i < grid.n_nodes(); ++i) {
    if (const int k = map.value(i); k >= 0) d.values[i] = x[k];
    if (const int k = map.slope(i); k >= 0) d.derivatives[i] = x[k];
  }
  d.values.back() = alpha;
  return d;
}

// ---------------------------------------------------------------------------
// Integrands
// ---------------------------------------------------------------------------

/// Willmore density (1/(u s) - u''/s^3)^2 u s with s = sqrt(1 + u'^2), and
/// its partials in (u, u', u'').
struct WillmoreDensity {
  double value, d_u, d_p, d_q;

  static WillmoreDensity at(double u, double p, double q) {
    const double w = 1.0 + p * p;
    const double s = std::sqrt(w);
    const double D = 1.0 / (u * s) - q / (w * s);
    WillmoreDensity r{};
    r.value = D * D * u * s;
    r.d_u = s * D * D - 2.0 * D / u;
    r.d_p = u * p * D * D / s + 2.0 * D * p * (-1.0 / w + 3.0 * u * q / (w * w));
    r.d_q = -2.0 * u * D / w;
    return r;
  }
};

struct AreaDensity {
  double value, d_u, d_p;

  static AreaDensity at(double u, double p) {
    const double s = std::sqrt(1.0 + p * p);
    return {u * s, s, u * p / s};
  }
};

struct EnergyParts {
  double area = 0.0;
  double willmore = 0.0;
};

namespace detail {

// Energy parts and (optionally) the gradient of area and Willmore with respect
// to the free unknowns. Returns nullopt if u <= 0 at a quadrature point.
inline std::optional<EnergyParts> integrate(const Grid& grid, std::span<const double> values,
                                            std::span<const double> slopes, double epsilon,
                                            std::vector<double>* gradient) {
  const auto& rule = grid.rule();
  const DofMap map{grid.n_elements()};
  if (gradient) gradient->assign(map.size(), 0.0);
  EnergyParts parts;
  for (int e = 0; e < grid.n_elements(); ++e) {
    const double h = grid.length(e);
    const std::array<double, 4> d = {values[e], slopes[e], values[e + 1], slopes[e + 1]};
    const auto idx = map.element(e);
    for (std::size_t q = 0; q < rule.size(); ++q) {
      const auto b = HermiteBasis::at(rule.points[q], h);
      double u = 0.0, p = 0.0, c = 0.0;
      for (int k = 0; k < 4; ++k) {
        u += b.n[k] * d[k];
        p += b.dn[k] * d[k];
        c += b.ddn[k] * d[k];
      }
      if (!(u > 0.0)) return std::nullopt;
      // factor 2 for the mirrored half
      const double w = 2.0 * rule.weights[q] * h;
      const auto wd = WillmoreDensity::at(u, p, c);
      const auto ad = AreaDensity::at(u, p);
      parts.willmore += w * 0.5 * kPi * wd.value;
      parts.area += w * 2.0 * kPi * ad.value;
      if (gradient) {
        const double fu = 0.5 * kPi * wd.d_u + 2.0 * kPi * epsilon * ad.d_u;
        const double fp = 0.5 * kPi * wd.d_p + 2.0 * kPi * epsilon * ad.d_p;
        const double fq = 0.5 * kPi * wd.d_q;
        for (int k = 0; k < 4; ++k) {
          if (idx[k] < 0) continue;
          (*gradient)[idx[k]] += w * (fu * b.n[k] + fp * b.dn[k] + fq * b.ddn[k]);
        }
      }
    }
  }
  return parts;
}

inline EnergyParts integrate_or_throw(const ProfileCurve& curve) {
  auto parts = integrate(curve.grid(), curve.values(), curve.derivatives(), 0.0, nullptr);
  if (!parts) fail(ErrorKind::NonPositiveProfile, "interpolant is not positive at a quadrature point");
  return *parts;
}

}  // namespace detail

/// Surface area 2 pi int u sqrt(1 + u'^2) dx over [-1, 1].
inline double area(const ProfileCurve& curve) { return detail::integrate_or_throw(curve).area; }

/// Willmore energy int H^2 dS of the surface of revolution.
inline double willmore(const ProfileCurve& curve) { return detail::integrate_or_throw(curve).willmore; }

struct EnergyReport {
  double area = 0.0;
  double willmore = 0.0;
  double helfrich = 0.0;
  double epsilon = 0.0;
  double product_bound_slack = 0.0;  // area * willmore - 4 pi^2
  double gradient_bound = std::numeric_limits<double>::infinity();
};

inline EnergyReport make_report(const EnergyParts& parts, double epsilon) {
  EnergyReport r;
  r.area = parts.area;
  r.willmore = parts.willmore;
  r.epsilon = epsilon;
  r.helfrich = parts.willmore + epsilon * parts.area;
  r.product_bound_slack = parts.area * parts.willmore - 4.0 * kPi * kPi;
  if (parts.willmore < 4.0 * kPi)
    r.gradient_bound = parts.willmore / std::sqrt(16.0 * kPi * kPi - parts.willmore * parts.willmore);
  return r;
}

inline EnergyReport helfrich_energy(const ProfileCurve& curve, double epsilon) {
  return make_report(detail::integrate_or_throw(curve), epsilon);
}

/// Exact gradient of the discrete Helfrich energy with respect to the free
/// unknowns (layout of DofMap).
inline std::vector<double> helfrich_gradient(const ProfileCurve& curve, double epsilon) {
  std::vector<double> g;
  if (!detail::integrate(curve.grid(), curve.values(), curve.derivatives(), epsilon, &g))
    fail(ErrorKind::NonPositiveProfile, "interpolant is not positive at a quadrature point");
  return g;
}

namespace detail {

// Partials (f_u, f_p, f_q) of the Helfrich density on the full interval.
inline std::array<double, 3> helfrich_partials(double u, double p, double q, double epsilon) {
  const auto wd = WillmoreDensity::at(u, p, q);
  const auto ad = AreaDensity::at(u, p);
  return {0.5 * kPi * wd.d_u + 2.0 * kPi * epsilon * ad.d_u, 0.5 * kPi * wd.d_p + 2.0 * kPi * epsilon * ad.d_p,
          0.5 * kPi * wd.d_q};
}

}  // namespace detail

/// Hessian of the discrete Helfrich energy in the free unknowns, as triplets.
/// The density's second derivatives come from central differences of its
/// exact partials; the assembly over basis functions is exact.
inline std::vector<std::array<double, 3>> helfrich_hessian_entries(const Grid& grid, std::span<const double> values,
                                                                    std::span<const double> slopes, double epsilon) {
  const auto& rule = grid.rule();
  const DofMap map{grid.n_elements()};
  std::vector<std::array<double, 3>> out;
  for (int e = 0; e < grid.n_elements(); ++e) {
    const double h = grid.length(e);
    const std::array<double, 4> d = {values[e], slopes[e], values[e + 1], slopes[e + 1]};
    const auto idx = map.element(e);
    double local[4][4] = {};
    for (std::size_t q = 0; q < rule.size(); ++q) {
      const auto b = HermiteBasis::at(rule.points[q], h);
      std::array<double, 3> z{};
      for (int k = 0; k < 4; ++k) {
        z[0] += b.n[k] * d[k];
        z[1] += b.dn[k] * d[k];
        z[2] += b.ddn[k] * d[k];
      }
      double second[3][3];
      for (int a = 0; a < 3; ++a) {
        const double step = 1e-5 * (a == 0 ? std::abs(z[0]) : 1.0 + std::abs(z[a]));
        auto zp = z, zm = z;
        zp[a] += step;
        zm[a] -= step;
        const auto fp = detail::helfrich_partials(zp[0], zp[1], zp[2], epsilon);
        const auto fm = detail::helfrich_partials(zm[0], zm[1], zm[2], epsilon);
        for (int c = 0; c < 3; ++c) second[c][a] = (fp[c] - fm[c]) / (2.0 * step);
      }
      const double w = 2.0 * rule.weights[q] * h;
      const std::array<const std::array<double, 4>*, 3> basis = {&b.n, &b.dn, &b.ddn};
      for (int a = 0; a < 3; ++a)
        for (int c = 0; c < 3; ++c) {
          const double s = 0.5 * w * (second[a][c] + second[c][a]);
          for (int i = 0; i < 4; ++i)
            for (int j = 0; j < 4; ++j) local[i][j] += s * (*basis[a])[i] * (*basis[c])[j];
        }
    }
    for (int i = 0; i < 4; ++i)
      for (int j = 0; j < 4; ++j)
        if (idx[i] >= 0 && idx[j] >= 0) out.push_back({double(idx[i]), double(idx[j]), local[i][j]});
  }
  return out;
}

// ---------------------------------------------------------------------------
// Three-way integrand identity
// ---------------------------------------------------------------------------

namespace detail {

// Integral over [lo, hi] within [0, 1] of f(jet), elementwise Gauss.
template <class F>
double integrate_half(const ProfileCurve& curve, double lo, double hi, F&& f) {
  const Grid& grid = curve.grid();
  const auto& rule = grid.rule();
  double sum = 0.0;
  for (int e = 0; e < grid.n_elements(); ++e) {
    const double a = std::max(lo, grid.node(e));
    const double b = std::min(hi, grid.node(e + 1));
    if (!(b > a)) continue;
    const double h = grid.length(e);
    for (std::size_t q = 0; q < rule.size(); ++q) {
      const double x = a + (b - a) * rule.points[q];
      sum += rule.weights[q] * (b - a) * f(curve.half_jet(e, (x - grid.node(e)) / h));
    }
  }
  return sum;
}

// Integral over [a, b] within [-1, 1] of an even integrand.
template <class F>
double integrate_even(const ProfileCurve& curve, double a, double b, F&& f) {
  double sum = 0.0;
  if (b > 0.0) sum += integrate_half(curve, std::max(a, 0.0), b, f);
  if (a < 0.0) sum += integrate_half(curve, std::max(-b, 0.0), -a, f);
  return sum;
}

}  // namespace detail

/// The three equivalent forms of int_a^b (1/(u s) - u''/s^3)^2 u s dx:
/// the direct integral, the split form with -2 [u'/s], and the plus-sign form
/// with -4 [u'/s]. They agree up to quadrature error.
inline std::array<double, 3> willmore_identity_check(const ProfileCurve& curve, double a, double b) {
  if (!(-1.0 <= a && a < b && b <= 1.0)) fail(ErrorKind::InvalidArgument, "need -1 <= a < b <= 1");
  auto tangent = [&](double x) {
    const auto j = curve.jet(x);
    return j.du / std::sqrt(1.0 + j.du * j.du);
  };
  const double boundary = tangent(b) - tangent(a);
  auto parts = [](const LocalJet& j) {
    const double w = 1.0 + j.du * j.du;
    const double s = std::sqrt(w);
    return std::pair{1.0 / (j.u * s), j.ddu / (w * s)};
  };
  const double minus = detail::integrate_even(curve, a, b, [&](const LocalJet& j) {
    const auto [p, q] = parts(j);
    return (p - q) * (p - q) * j.u * std::sqrt(1.0 + j.du * j.du);
  });
  const double split = detail::integrate_even(curve, a, b, [&](const LocalJet& j) {
    const auto [p, q] = parts(j);
    return (p * p + q * q) * j.u * std::sqrt(1.0 + j.du * j.du);
  });
  const double plus = detail::integrate_even(curve, a, b, [&](const LocalJet& j) {
    const auto [p, q] = parts(j);
    return (p + q) * (p + q) * j.u * std::sqrt(1.0 + j.du * j.du);
  });
  return {minus, split - 2.0 * boundary, plus - 4.0 * boundary};
}

// ---------------------------------------------------------------------------
// A-priori bounds
// ---------------------------------------------------------------------------

struct BoundCheck {
  bool applicable = false;
  double lhs = 0.0;
  double rhs = 0.0;
  bool satisfied = true;
};

struct BoundReport {
  BoundCheck product;         // A W >= 4 pi^2
  BoundCheck slope;           // max|u'| <= W / sqrt(16 pi^2 - W^2), needs W < 4 pi
  BoundCheck lower;           // alpha exp(-M sqrt(1+M^2) W / pi) <= min u
  BoundCheck upper;           // max u <= alpha + M
  BoundCheck helfrich_floor;  // H_eps >= 4 pi sqrt(eps)
  BoundCheck willmore_cap;    // W <= (H + sqrt(H^2 - 16 pi^2 eps)) / 2
  double max_slope = 0.0;

  [[nodiscard]] bool all_satisfied() const {
    for (const auto* b : {&product, &slope, &lower, &upper, &helfrich_floor, &willmore_cap})
      if (b->applicable && !b->satisfied) return false;
    return true;
  }
};

/// Extremes of u and |u'| of the interpolant over [0, 1]. u' is quadratic on
/// each element, so its maximum is at an end or at the zero of u''.
struct ProfileExtremes {
  double min_u = std::numeric_limits<double>::infinity();
  double max_u = -std::numeric_limits<double>::infinity();
  double max_abs_slope = 0.0;
};

inline ProfileExtremes profile_extremes(const ProfileCurve& curve, int samples_per_element = 16) {
  ProfileExtremes r;
  const Grid& grid = curve.grid();
  for (int e = 0; e < grid.n_elements(); ++e) {
    auto visit = [&](double t) {
      const auto j = curve.half_jet(e, t);
      r.min_u = std::min(r.min_u, j.u);
      r.max_u = std::max(r.max_u, j.u);
      r.max_abs_slope = std::max(r.max_abs_slope, std::abs(j.du));
    };
    for (int k = 0; k <= samples_per_element; ++k) visit(static_cast<double>(k) / samples_per_element);
    const auto j0 = curve.half_jet(e, 0.0);
    const auto j1 = curve.half_jet(e, 1.0);
    if ((j0.ddu < 0.0) != (j1.ddu < 0.0) && j0.ddu != j1.ddu) visit(j0.ddu / (j0.ddu - j1.ddu));
  }
  return r;
}

inline BoundReport bound_suite(const ProfileCurve& curve, double epsilon, double rel_tol = 1e-9) {
  BoundReport r;
  const auto energy = helfrich_energy(curve, epsilon);
  const auto ext = profile_extremes(curve);
  r.max_slope = ext.max_abs_slope;
  // every part assumes u'(+-1) = 0
  if (!curve.clamped()) return r;
  const double W = energy.willmore;
  const double A = energy.area;
  const double alpha = curve.alpha();
  auto le = [rel_tol](double lhs, double rhs) { return lhs <= rhs + rel_tol * std::max(1.0, std::abs(rhs)); };

  r.product = {true, A * W, 4.0 * kPi * kPi, le(4.0 * kPi * kPi, A * W)};
  if (W < 4.0 * kPi) {
    const double rhs = W / std::sqrt(16.0 * kPi * kPi - W * W);
    r.slope = {true, ext.max_abs_slope, rhs, le(ext.max_abs_slope, rhs)};
  }
  const double M = ext.max_abs_slope;
  const double lower = alpha * std::exp(-M * std::sqrt(1.0 + M * M) * W / kPi);
  r.lower = {true, lower, ext.min_u, le(lower, ext.min_u)};
  r.upper = {true, ext.max_u, alpha + M, le(ext.max_u, alpha + M)};
  const double floor = 4.0 * kPi * std::sqrt(epsilon);
  r.helfrich_floor = {true, floor, energy.helfrich, le(floor, energy.helfrich)};
  const double disc = energy.helfrich * energy.helfrich - 16.0 * kPi * kPi * epsilon;
  if (disc >= 0.0) {
    const double cap = 0.5 * (energy.helfrich + std::sqrt(disc));
    r.willmore_cap = {true, W, cap, le(W, cap)};
  }
  return r;
}

// ---------------------------------------------------------------------------
// Comparison surfaces
// ---------------------------------------------------------------------------

/// Helfrich energy of the cylinder u = alpha.
inline double cylinder_energy(double alpha, double epsilon) {
  return kPi / alpha + 4.0 * kPi * alpha * epsilon;
}

/// Upper bound for the sphere-catenary comparison surface.
inline double comparison_energy_bound(double alpha, double epsilon) {
  return 4.0 * kPi * std::tanh(1.0 / (2.0 * alpha)) +
         epsilon * (4.0 * kPi * std::sqrt(1.0 + alpha * alpha) + kPi * alpha +
                    kPi * alpha * alpha * std::sinh(1.0 / alpha));
}

struct ComparisonSurface {
  double alpha = 0.0;
  double x0 = 0.0;
  double r = 0.0;
  ProfileCurve profile;
  double value_jump = 0.0;  // |sphere - catenary| at x0
  double slope_jump = 0.0;
};

/// Spherical cap sqrt(r^2 - x^2) on |x| < x0 joined C^1 to
/// alpha cosh((|x| - 1)/alpha) near the boundary; the catenary normal at x0
/// passes through the origin.
inline ComparisonSurface build_comparison_surface(double alpha, const Grid& grid) {
  if (!(alpha > 0.0)) fail(ErrorKind::InvalidArgument, "alpha must be positive");
  auto normal_through_origin = [alpha](double x) {
    const double y = (x - 1.0) / alpha;
    return x + alpha * std::cosh(y) * std::sinh(y);
  };
  const double x0 = bisect(normal_through_origin, 0.5, 1.0, 1e-12);
  const double ch = std::cosh((x0 - 1.0) / alpha);
  const double r = std::sqrt(x0 * x0 + alpha * alpha * ch * ch);
  auto v = [=](double x) {
    const double xa = std::abs(x);
    return xa < x0 ? std::sqrt(r * r - xa * xa) : alpha * std::cosh((xa - 1.0) / alpha);
  };
  auto dv = [=](double x) {
    const double xa = std::abs(x);
    return xa < x0 ? -xa / std::sqrt(r * r - xa * xa) : std::sinh((xa - 1.0) / alpha);
  };
  ComparisonSurface s{alpha, x0, r, sample_profile(grid, v, dv), 0.0, 0.0};
  s.value_jump = std::abs(std::sqrt(r * r - x0 * x0) - alpha * ch);
  s.slope_jump = std::abs(-x0 / std::sqrt(r * r - x0 * x0) - std::sinh((x0 - 1.0) / alpha));
  return s;
}

// ---------------------------------------------------------------------------
// Regimes
// ---------------------------------------------------------------------------

struct RegimeLabel {
  double alpha = 0.0;
  double epsilon = 0.0;
  bool via_cylinder = false;
  bool via_comparison = false;
  bool via_gluing = false;
  bool on_cylinder_curve = false;
};

/// Threshold below which the comparison surface certifies existence.
inline double comparison_epsilon_threshold(double alpha) {
  return (1.0 - std::tanh(1.0 / (2.0 * alpha))) /
         (std::sqrt(1.0 + alpha * alpha) + alpha / 4.0 + alpha * alpha / 4.0 * std::sinh(1.0 / alpha) - 0.25);
}

inline RegimeLabel classify_regime(double alpha, double epsilon) {
  if (!(alpha > 0.0) || !(epsilon >= 0.0)) fail(ErrorKind::InvalidArgument, "need alpha > 0, epsilon >= 0");
  RegimeLabel r;
  r.alpha = alpha;
  r.epsilon = epsilon;
  r.via_cylinder = alpha > 0.25 && epsilon < 1.0 / alpha;
  r.via_comparison = epsilon <= comparison_epsilon_threshold(alpha);
  if (alpha >= constants().alpham) r.via_gluing = epsilon >= solve_catenary_branches(alpha).eps_hat;
  const double eps_cyl = 1.0 / (4.0 * alpha * alpha);
  r.on_cylinder_curve = std::abs(epsilon - eps_cyl) <= 1e-12 * eps_cyl;
  return r;
}

}  // namespace helfrich
