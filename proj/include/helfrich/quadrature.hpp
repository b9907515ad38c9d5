#pragma once

#include <algorithm>
#include <cmath>
#include <numbers>
#include <utility>
#include <vector>

namespace helfrich {

/// Gauss-Legendre rule on the reference interval [0, 1], points ascending.
struct GaussRule {
  std::vector<double> points;
  std::vector<double> weights;

  [[nodiscard]] std::size_t size() const noexcept { return points.size(); }
};

namespace detail {

// P_n(z) and P_{n-1}(z) by the three-term recurrence.
inline std::pair<double, double> legendre_pair(int n, double z) {
  double prev = 1.0;
  double cur = z;
  if (n == 0) return {1.0, 0.0};
  for (int k = 2; k <= n; ++k) {
    const double next = ((2.0 * k - 1.0) * z * cur - (k - 1.0) * prev) / k;
    prev = cur;
    cur = next;
  }
  return {cur, prev};
}

}  // namespace detail

/// Nodes by Newton iteration on P_n; exact for polynomials of degree 2n-1.
inline GaussRule gauss_legendre(int order) {
  std::vector<std::pair<double, double>> nodes;
  nodes.reserve(order);
  for (int i = 0; i < order; ++i) {
    double z = std::cos(std::numbers::pi * (i + 0.75) / (order + 0.5));
    for (int it = 0; it < 100; ++it) {
      const auto [pn, pm] = detail::legendre_pair(order, z);
      const double dp = order * (z * pn - pm) / (z * z - 1.0);
      const double dz = pn / dp;
      z -= dz;
      if (std::abs(dz) < 1e-16) break;
    }
    const auto [pn, pm] = detail::legendre_pair(order, z);
    const double dp = order * (z * pn - pm) / (z * z - 1.0);
    const double w = 2.0 / ((1.0 - z * z) * dp * dp);
    nodes.emplace_back(0.5 * (1.0 + z), 0.5 * w);
  }
  std::sort(nodes.begin(), nodes.end());
  GaussRule rule;
  for (const auto& [t, w] : nodes) {
    rule.points.push_back(t);
    rule.weights.push_back(w);
  }
  return rule;
}

}  // namespace helfrich
