#pragma once

// Even profile curves u on [-1, 1] stored as piecewise-cubic Hermite data on
// [0, 1]; the left half is the mirror image.

#include <algorithm>
#include <array>
#include <cmath>
#include <functional>
#include <span>
#include <string>
#include <vector>

#include "helfrich/error.hpp"
#include "helfrich/quadrature.hpp"

namespace helfrich {

class Grid {
 public:
  /// Uniform grid on [0, 1].
  static Grid uniform(int n_elements, int quadrature_order = 5) {
    if (n_elements < 1) fail(ErrorKind::BadGrid, "n_elements must be positive");
    std::vector<double> nodes(n_elements + 1);
    for (int i = 0; i <= n_elements; ++i) nodes[i] = static_cast<double>(i) / n_elements;
    nodes.back() = 1.0;
    return Grid(std::move(nodes), quadrature_order);
  }

  /// Element lengths shrink geometrically by `ratio` toward x = 1, for
  /// resolving boundary layers. ratio = 1 is uniform.
  static Grid graded(int n_elements, double ratio, int quadrature_order = 5) {
    if (n_elements < 1) fail(ErrorKind::BadGrid, "n_elements must be positive");
    if (!(ratio >= 1.0)) fail(ErrorKind::BadGrid, "grading ratio must be >= 1");
    // only the last part of the grid is graded so the interior keeps resolution
    std::vector<double> lengths(n_elements, 1.0);
    const int graded_count = std::min(n_elements / 2, 12);
    for (int k = 0; k < graded_count; ++k)
      lengths[n_elements - 1 - k] = std::pow(ratio, -static_cast<double>(graded_count - k));
    double total = 0.0;
    for (double l : lengths) total += l;
    std::vector<double> nodes(n_elements + 1, 0.0);
    for (int i = 0; i < n_elements; ++i) nodes[i + 1] = nodes[i] + lengths[i] / total;
    nodes.back() = 1.0;
    return Grid(std::move(nodes), quadrature_order);
  }

  Grid(std::vector<double> nodes, int quadrature_order) : nodes_(std::move(nodes)) {
    if (nodes_.size() < 2) fail(ErrorKind::BadGrid, "need at least two nodes");
    if (nodes_.front() != 0.0 || nodes_.back() != 1.0)
      fail(ErrorKind::BadGrid, "nodes must span [0, 1]");
    for (std::size_t i = 1; i < nodes_.size(); ++i)
      if (!(nodes_[i] > nodes_[i - 1])) fail(ErrorKind::BadGrid, "nodes must be strictly increasing");
    if (quadrature_order < 3) fail(ErrorKind::BadGrid, "quadrature_order must be >= 3");
    rule_ = gauss_legendre(quadrature_order);
  }

  [[nodiscard]] int n_elements() const noexcept { return static_cast<int>(nodes_.size()) - 1; }
  [[nodiscard]] int n_nodes() const noexcept { return static_cast<int>(nodes_.size()); }
  [[nodiscard]] std::span<const double> nodes() const noexcept { return nodes_; }
  [[nodiscard]] double node(int i) const { return nodes_[i]; }
  [[nodiscard]] double length(int e) const { return nodes_[e + 1] - nodes_[e]; }
  [[nodiscard]] int quadrature_order() const noexcept { return static_cast<int>(rule_.size()); }
  [[nodiscard]] const GaussRule& rule() const noexcept { return rule_; }

  /// Element containing x in [0, 1]; nodes belong to the element on their right
  /// except x = 1.
  [[nodiscard]] int locate(double x) const {
    auto it = std::upper_bound(nodes_.begin(), nodes_.end(), x);
    int e = static_cast<int>(it - nodes_.begin()) - 1;
    return std::clamp(e, 0, n_elements() - 1);
  }

  /// Grid with `x` inserted as a node; returns the same grid if x is already a node.
  [[nodiscard]] Grid with_node(double x) const {
    std::vector<double> nodes = nodes_;
    auto it = std::lower_bound(nodes.begin(), nodes.end(), x);
    if (it != nodes.end() && *it == x) return *this;
    nodes.insert(it, x);
    return Grid(std::move(nodes), quadrature_order());
  }

 private:
  std::vector<double> nodes_;
  GaussRule rule_;
};

/// Cubic Hermite shape functions on the reference element t in [0, 1];
/// derivative slots are pre-multiplied by the element length.
struct HermiteBasis {
  std::array<double, 4> n;    // value
  std::array<double, 4> dn;   // d/dx
  std::array<double, 4> ddn;  // d2/dx2

  static HermiteBasis at(double t, double h) {
    const double t2 = t * t;
    const double t3 = t2 * t;
    HermiteBasis b;
    b.n = {2 * t3 - 3 * t2 + 1, h * (t3 - 2 * t2 + t), -2 * t3 + 3 * t2, h * (t3 - t2)};
    b.dn = {(6 * t2 - 6 * t) / h, 3 * t2 - 4 * t + 1, (-6 * t2 + 6 * t) / h, 3 * t2 - 2 * t};
    b.ddn = {(12 * t - 6) / (h * h), (6 * t - 4) / h, (-12 * t + 6) / (h * h), (6 * t - 2) / h};
    return b;
  }
};

/// Value and first two derivatives of a profile at one point.
struct LocalJet {
  double u = 0.0;
  double du = 0.0;
  double ddu = 0.0;
};

struct GeometrySample {
  double x = 0.0;
  double u = 0.0;
  double du = 0.0;
  double ddu = 0.0;
  double H = 0.0;
  double K = 0.0;
  double area_element = 0.0;
};

/// Mean and Gauss curvature of the surface of revolution from (u, u', u'').
inline GeometrySample geometry_from_jet(double x, const LocalJet& j) {
  const double w = 1.0 + j.du * j.du;
  const double s = std::sqrt(w);
  GeometrySample g;
  g.x = x;
  g.u = j.u;
  g.du = j.du;
  g.ddu = j.ddu;
  g.H = 0.5 * (1.0 / (j.u * s) - j.ddu / (w * s));
  g.K = -j.ddu / (j.u * w * w);
  g.area_element = j.u * s;
  return g;
}

/// An even profile curve. Curves built through `build_profile` are members of
/// the admissible class (u(1) = alpha, u'(1) = 0, u'(0) = 0, u > 0); curves
/// from `sample_profile` carry whatever boundary slope the sampled function
/// has and report `clamped() == false` when it is nonzero.
class ProfileCurve {
 public:
  ProfileCurve(Grid grid, std::vector<double> values, std::vector<double> derivatives)
      : grid_(std::move(grid)), values_(std::move(values)), derivatives_(std::move(derivatives)) {
    if (static_cast<int>(values_.size()) != grid_.n_nodes() ||
        static_cast<int>(derivatives_.size()) != grid_.n_nodes())
      fail(ErrorKind::BadGrid, "nodal data size does not match the grid");
    for (std::size_t i = 0; i < values_.size(); ++i) {
      if (!std::isfinite(values_[i]) || !std::isfinite(derivatives_[i]))
        fail(ErrorKind::InvalidArgument, "nodal data must be finite");
      if (!(values_[i] > 0.0))
        fail(ErrorKind::NonPositiveProfile,
             "u(" + std::to_string(grid_.node(static_cast<int>(i))) + ") = " + std::to_string(values_[i]));
    }
    if (derivatives_.front() != 0.0) fail(ErrorKind::InvalidArgument, "even profile needs u'(0) = 0");
  }

  [[nodiscard]] const Grid& grid() const noexcept { return grid_; }
  [[nodiscard]] std::span<const double> values() const noexcept { return values_; }
  [[nodiscard]] std::span<const double> derivatives() const noexcept { return derivatives_; }
  [[nodiscard]] double alpha() const noexcept { return values_.back(); }
  [[nodiscard]] double boundary_slope() const noexcept { return derivatives_.back(); }
  [[nodiscard]] bool clamped() const noexcept { return derivatives_.back() == 0.0; }

  /// (u, u', u'') on the half interval; x in [0, 1], element e.
  [[nodiscard]] LocalJet half_jet(int e, double t) const {
    const double h = grid_.length(e);
    const auto b = HermiteBasis::at(t, h);
    const std::array<double, 4> d = {values_[e], derivatives_[e], values_[e + 1], derivatives_[e + 1]};
    LocalJet j;
    for (int k = 0; k < 4; ++k) {
      j.u += b.n[k] * d[k];
      j.du += b.dn[k] * d[k];
      j.ddu += b.ddn[k] * d[k];
    }
    return j;
  }

  /// Interpolant at any x in [-1, 1], mirrored evenly.
  [[nodiscard]] LocalJet jet(double x) const {
    if (!(std::abs(x) <= 1.0)) fail(ErrorKind::OutOfDomain, "|x| > 1: " + std::to_string(x));
    const double xa = std::abs(x);
    const int e = grid_.locate(xa);
    const double t = (xa - grid_.node(e)) / grid_.length(e);
    LocalJet j = half_jet(e, t);
    if (x < 0.0) j.du = -j.du;
    return j;
  }

 private:
  Grid grid_;
  std::vector<double> values_;
  std::vector<double> derivatives_;
};

/// Nodal data for build_profile: one value and one slope per grid node.
struct NodalData {
  std::vector<double> values;
  std::vector<double> derivatives;
};

/// Overwrites the boundary and symmetry constraints onto `data` and returns a
/// member of the admissible class. Nonpositive nodal values are rejected.
inline ProfileCurve build_profile(double alpha, const Grid& grid, NodalData data) {
  if (!(alpha > 0.0) || !std::isfinite(alpha)) fail(ErrorKind::InvalidArgument, "alpha must be positive");
  const auto n = static_cast<std::size_t>(grid.n_nodes());
  if (data.values.size() != n || data.derivatives.size() != n)
    fail(ErrorKind::BadGrid, "nodal data size does not match the grid");
  data.values.back() = alpha;
  data.derivatives.back() = 0.0;
  data.derivatives.front() = 0.0;
  return ProfileCurve(grid, std::move(data.values), std::move(data.derivatives));
}

/// Exact nodal samples of a function and its derivative. The boundary slope is
/// kept as sampled, so catenaries and sphere caps can be represented.
inline ProfileCurve sample_profile(const Grid& grid, const std::function<double(double)>& u,
                                   const std::function<double(double)>& du) {
  std::vector<double> values(grid.n_nodes());
  std::vector<double> derivatives(grid.n_nodes());
  for (int i = 0; i < grid.n_nodes(); ++i) {
    values[i] = u(grid.node(i));
    derivatives[i] = du(grid.node(i));
  }
  derivatives.front() = 0.0;
  return ProfileCurve(grid, std::move(values), std::move(derivatives));
}

inline ProfileCurve cylinder_profile(double alpha, const Grid& grid) {
  return build_profile(alpha, grid,
                       {std::vector<double>(grid.n_nodes(), alpha), std::vector<double>(grid.n_nodes(), 0.0)});
}

/// w_c(x) = c cosh(x / c) sampled on the grid (boundary value c cosh(1/c)).
inline ProfileCurve catenary_profile(double c, const Grid& grid) {
  return sample_profile(
      grid, [c](double x) { return c * std::cosh(x / c); }, [c](double x) { return std::sinh(x / c); });
}

/// Interpolates `curve` onto another grid (value and slope at the new nodes).
inline ProfileCurve resample(const ProfileCurve& curve, const Grid& grid) {
  std::vector<double> values(grid.n_nodes());
  std::vector<double> derivatives(grid.n_nodes());
  for (int i = 0; i < grid.n_nodes(); ++i) {
    const auto j = curve.jet(grid.node(i));
    values[i] = j.u;
    derivatives[i] = j.du;
  }
  values.back() = curve.alpha();
  derivatives.back() = curve.boundary_slope();
  derivatives.front() = 0.0;
  return ProfileCurve(grid, std::move(values), std::move(derivatives));
}

inline GeometrySample evaluate_geometry(const ProfileCurve& curve, double x) {
  return geometry_from_jet(x, curve.jet(x));
}

/// u, H, K agree at x and -x and u' flips sign.
inline bool mirror_consistency_check(const ProfileCurve& curve, double x) {
  const auto a = evaluate_geometry(curve, x);
  const auto b = evaluate_geometry(curve, -x);
  auto close = [](double p, double q) { return std::abs(p - q) <= 1e-13 * std::max(1.0, std::abs(p)); };
  return close(a.u, b.u) && close(a.H, b.H) && close(a.K, b.K) && close(a.du, -b.du);
}

}  // namespace helfrich
