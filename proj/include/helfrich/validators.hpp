#pragma once

// Independent checks of a discrete profile against the Euler-Lagrange equation
// and its first integral. The Hermite interpolant's u'' jumps at nodes, so
// both checks work on a local high-order reconstruction of the nodal data:
// around each point the degree-11 polynomial matching (u, u') at six nodes,
// with evenly mirrored data across x = 0. On fine grids the six nodes are
// taken with a stride so their spacing stays near `spacing`; fourth
// derivatives of nodal data amplify round-off like spacing^-4.

#include <algorithm>
#include <array>
#include <cmath>
#include <vector>

#include "helfrich/jet.hpp"
#include "helfrich/profile.hpp"

namespace helfrich {

class NodalReconstruction {
 public:
  static constexpr int kWindow = 6;

  explicit NodalReconstruction(const ProfileCurve& curve, double spacing = 1.0 / 32.0)
      : curve_(curve), spacing_(spacing) {
    if (curve.grid().n_elements() < kWindow - 1)
      fail(ErrorKind::BadGrid, "reconstruction needs at least 5 elements");
  }

  /// Taylor jet of the reconstruction at x in [0, 1], derivatives up to order 4.
  [[nodiscard]] Jet<4> at(double x) const {
    const auto window = select_nodes(x);
    std::array<double, kWindow> xs{}, us{}, ds{};
    const Grid& g = curve_.grid();
    for (int k = 0; k < kWindow; ++k) {
      const int i = window[k];
      const int m = std::abs(i);
      const double sign = i < 0 ? -1.0 : 1.0;
      xs[k] = sign * g.node(m);
      us[k] = curve_.values()[m];
      ds[k] = sign * curve_.derivatives()[m];
    }
    const double center = 0.5 * (xs.front() + xs.back());
    const double scale = 0.5 * (xs.back() - xs.front());

    // confluent divided differences on doubled points, scaled coordinates
    constexpr int m = 2 * kWindow;
    std::array<double, m> z{}, table{};
    for (int k = 0; k < kWindow; ++k) {
      z[2 * k] = z[2 * k + 1] = (xs[k] - center) / scale;
      table[2 * k] = table[2 * k + 1] = us[k];
    }
    std::array<double, m> coeff{};
    coeff[0] = table[0];
    for (int level = 1; level < m; ++level) {
      for (int i = m - 1; i >= level; --i) {
        const double dz = z[i] - z[i - level];
        if (dz == 0.0)
          table[i] = ds[i / 2] * scale;  // level 1 on a repeated point
        else
          table[i] = (table[i] - table[i - 1]) / dz;
      }
      coeff[level] = table[level];
    }

    const double zx = (x - center) / scale;
    Jet<4> p(coeff[m - 1]);
    const Jet<4> Z = Jet<4>::variable(zx);
    for (int k = m - 2; k >= 0; --k) p = p * (Z - z[k]) + coeff[k];
    double f = 1.0;
    for (std::size_t k = 1; k <= 4; ++k) {
      f /= scale;
      p.c[k] *= f;
    }
    return p;
  }

 private:
  // Six node indices around x (negative = mirrored node), picked outward from
  // the node nearest x so consecutive picks are about `spacing_` apart.
  [[nodiscard]] std::array<int, kWindow> select_nodes(double x) const {
    const Grid& g = curve_.grid();
    const int n = g.n_elements();
    auto position = [&](int i) { return i < 0 ? -g.node(-i) : g.node(i); };
    const double gap = std::min(spacing_, 1.0 / (kWindow - 1)) * 0.75;
    const int e = g.locate(x);
    const int center = (x - g.node(e) < g.node(e + 1) - x) ? e : e + 1;
    std::vector<int> left{center}, right;
    auto last_right = [&] { return right.empty() ? center : right.back(); };
    auto extend_left = [&] {
      for (int i = left.back() - 1; i >= -n; --i)
        if (position(left.back()) - position(i) >= gap || i == -n) {
          left.push_back(i);
          return true;
        }
      return false;
    };
    auto extend_right = [&] {
      for (int i = last_right() + 1; i <= n; ++i)
        if (position(i) - position(last_right()) >= gap || i == n) {
          right.push_back(i);
          return true;
        }
      return false;
    };
    while (static_cast<int>(left.size() + right.size()) < kWindow) {
      const bool prefer_right = right.size() < left.size();
      if (prefer_right ? !extend_right() && !extend_left() : !extend_left() && !extend_right())
        fail(ErrorKind::BadGrid, "not enough nodes for the reconstruction");
    }
    std::array<int, kWindow> out{};
    int k = 0;
    for (auto it = left.rbegin(); it != left.rend(); ++it) out[k++] = *it;
    for (int i : right) out[k++] = i;
    return out;
  }

  const ProfileCurve& curve_;
  double spacing_;
};

/// Mean curvature and the expressions built from it at one point.
struct CurvatureJet {
  double x = 0.0;
  double H = 0.0;
  double el = 0.0;                // left-hand side of the Euler-Lagrange equation
  double first_integral = 0.0;    // M[u]
};

inline CurvatureJet curvature_jet(const Jet<4>& U, double x, double epsilon) {
  const Jet<4> du = U.differentiate();
  const Jet<4> ddu = du.differentiate();
  const Jet<4> w = 1.0 + du * du;
  const Jet<4> s = sqrt(w);
  const Jet<4> inv_us = reciprocal(U * s);
  const Jet<4> normal = ddu / (w * s);
  const Jet<4> H = 0.5 * (inv_us - normal);  // exact through order 2
  const Jet<4> dH = H.differentiate();
  const Jet<4> flux = U * dH / s;             // exact through order 1

  CurvatureJet c;
  c.x = x;
  const double u = U.value(), p = du.value(), sv = s.value(), wv = w.value();
  const double h = H.value(), hp = dH.value();
  const double sum = normal.value() + inv_us.value();
  c.H = h;
  c.el = inv_us.value() * flux.derivative(1) + 0.5 * h * sum * sum - 2.0 * epsilon * h;
  c.first_integral = u * p * hp / wv + u * h * h / sv - h / wv - epsilon * u / sv;
  return c;
}

namespace detail {

// Sample points in [0, 1] skipping the last `band` elements.
inline std::vector<double> interior_samples(const Grid& g, int per_element = 8, int band = 2) {
  std::vector<double> xs;
  const int last = std::max(1, g.n_elements() - band);
  for (int e = 0; e < last; ++e)
    for (int k = 0; k < per_element; ++k) xs.push_back(g.node(e) + g.length(e) * k / per_element);
  xs.push_back(g.node(last));
  return xs;
}

}  // namespace detail

/// Maximum of |Euler-Lagrange left-hand side| over the interior, excluding a
/// band of two elements at the boundary.
inline double el_residual(const ProfileCurve& curve, double epsilon) {
  const NodalReconstruction rec(curve);
  double worst = 0.0;
  for (double x : detail::interior_samples(curve.grid()))
    worst = std::max(worst, std::abs(curvature_jet(rec.at(x), x, epsilon).el));
  return worst;
}

struct FirstIntegralReport {
  std::vector<double> x;
  std::vector<double> values;
  double drift = 0.0;  // max - min
  double mean = 0.0;
};

inline FirstIntegralReport first_integral(const ProfileCurve& curve, double epsilon) {
  const NodalReconstruction rec(curve);
  FirstIntegralReport r;
  r.x = detail::interior_samples(curve.grid());
  for (double x : r.x) r.values.push_back(curvature_jet(rec.at(x), x, epsilon).first_integral);
  const auto [lo, hi] = std::minmax_element(r.values.begin(), r.values.end());
  r.drift = *hi - *lo;
  double sum = 0.0;
  for (double v : r.values) sum += v;
  r.mean = sum / static_cast<double>(r.values.size());
  return r;
}

}  // namespace helfrich
