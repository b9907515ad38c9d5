#pragma once

#include <array>
#include <cmath>
#include <cstddef>

namespace helfrich {

/// Truncated Taylor series f(x0 + t) = sum_k c[k] t^k, k <= N.
/// Used by the validators to push curvature expressions through derivatives
/// without hand-expanding them.
template <std::size_t N>
struct Jet {
  std::array<double, N + 1> c{};

  constexpr Jet() = default;
  constexpr explicit Jet(double value) { c[0] = value; }

  static Jet variable(double x0) {
    Jet j(x0);
    if constexpr (N >= 1) j.c[1] = 1.0;
    return j;
  }

  /// Builds the series from plain derivatives f, f', f'', ...
  static Jet from_derivatives(const std::array<double, N + 1>& d) {
    Jet j;
    double fact = 1.0;
    for (std::size_t k = 0; k <= N; ++k) {
      if (k > 0) fact *= static_cast<double>(k);
      j.c[k] = d[k] / fact;
    }
    return j;
  }

  [[nodiscard]] double value() const { return c[0]; }

  /// k-th derivative at the expansion point.
  [[nodiscard]] double derivative(std::size_t k) const {
    double fact = 1.0;
    for (std::size_t i = 2; i <= k; ++i) fact *= static_cast<double>(i);
    return c[k] * fact;
  }

  /// d/dt of the series; the top coefficient is lost.
  [[nodiscard]] Jet differentiate() const {
    Jet r;
    for (std::size_t k = 0; k < N; ++k) r.c[k] = static_cast<double>(k + 1) * c[k + 1];
    return r;
  }

  Jet& operator+=(const Jet& o) {
    for (std::size_t k = 0; k <= N; ++k) c[k] += o.c[k];
    return *this;
  }
  Jet& operator-=(const Jet& o) {
    for (std::size_t k = 0; k <= N; ++k) c[k] -= o.c[k];
    return *this;
  }
  Jet& operator*=(double s) {
    for (auto& v : c) v *= s;
    return *this;
  }
};

template <std::size_t N>
Jet<N> operator+(Jet<N> a, const Jet<N>& b) { return a += b; }
template <std::size_t N>
Jet<N> operator-(Jet<N> a, const Jet<N>& b) { return a -= b; }
template <std::size_t N>
Jet<N> operator-(Jet<N> a) { return a *= -1.0; }
template <std::size_t N>
Jet<N> operator*(Jet<N> a, double s) { return a *= s; }
template <std::size_t N>
Jet<N> operator*(double s, Jet<N> a) { return a *= s; }
template <std::size_t N>
Jet<N> operator+(Jet<N> a, double s) { a.c[0] += s; return a; }
template <std::size_t N>
Jet<N> operator+(double s, Jet<N> a) { a.c[0] += s; return a; }
template <std::size_t N>
Jet<N> operator-(Jet<N> a, double s) { a.c[0] -= s; return a; }
template <std::size_t N>
Jet<N> operator-(double s, Jet<N> a) { return (-a) + s; }

template <std::size_t N>
Jet<N> operator*(const Jet<N>& a, const Jet<N>& b) {
  Jet<N> r;
  for (std::size_t i = 0; i <= N; ++i)
    for (std::size_t j = 0; i + j <= N; ++j) r.c[i + j] += a.c[i] * b.c[j];
  return r;
}

template <std::size_t N>
Jet<N> reciprocal(const Jet<N>& a) {
  Jet<N> r;
  r.c[0] = 1.0 / a.c[0];
  for (std::size_t k = 1; k <= N; ++k) {
    double s = 0.0;
    for (std::size_t j = 1; j <= k; ++j) s += a.c[j] * r.c[k - j];
    r.c[k] = -s / a.c[0];
  }
  return r;
}

template <std::size_t N>
Jet<N> operator/(const Jet<N>& a, const Jet<N>& b) { return a * reciprocal(b); }
template <std::size_t N>
Jet<N> operator/(double s, const Jet<N>& b) { return s * reciprocal(b); }
template <std::size_t N>
Jet<N> operator/(Jet<N> a, double s) { return a *= (1.0 / s); }

/// a^p for real p, a.c[0] > 0.
template <std::size_t N>
Jet<N> pow(const Jet<N>& a, double p) {
  Jet<N> r;
  r.c[0] = std::pow(a.c[0], p);
  // r' a = p r a'  =>  k a0 r_k = sum_{j=1..k} (p j - (k - j)) a_j r_{k-j}
  for (std::size_t k = 1; k <= N; ++k) {
    double s = 0.0;
    for (std::size_t j = 1; j <= k; ++j)
      s += (p * static_cast<double>(j) - static_cast<double>(k - j)) * a.c[j] * r.c[k - j];
    r.c[k] = s / (static_cast<double>(k) * a.c[0]);
  }
  return r;
}

template <std::size_t N>
Jet<N> sqrt(const Jet<N>& a) { return pow(a, 0.5); }

}  // namespace helfrich
