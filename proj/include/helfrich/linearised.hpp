#pragma once

// Linearisation at the Helfrich cylinder: the rate-of-change function rc, the
// fundamental system of phi'''' + phi / alpha^4 = 0, and the oscillation
// toolkit for h(x) = A cosh(ax) cos(ax) - B sinh(ax) sin(ax).

#include <array>
#include <cmath>
#include <optional>
#include <string>
#include <vector>

#include "helfrich/error.hpp"
#include "helfrich/roots.hpp"

namespace helfrich {

// ---------------------------------------------------------------------------
// Fundamental system
// ---------------------------------------------------------------------------

/// cosh cos, sinh sin, cosh sin, sinh cos evaluated at x / (alpha sqrt 2).
inline std::array<double, 4> fundamental_system(double alpha, double x) {
  const double t = x / (alpha * std::sqrt(2.0));
  const double ch = std::cosh(t), sh = std::sinh(t), c = std::cos(t), s = std::sin(t);
  return {ch * c, sh * s, ch * s, sh * c};
}

/// Coefficients of f' in the fundamental system, given those of f.
inline std::array<double, 4> differentiate_fundamental(const std::array<double, 4>& c, double beta) {
  return {beta * (c[2] + c[3]), beta * (c[2] - c[3]), beta * (c[1] - c[0]), beta * (c[0] + c[1])};
}

namespace detail {

// sinh(y) - sin(y), series for small y
inline double sinh_minus_sin(double y) {
  if (std::abs(y) > 0.5) return std::sinh(y) - std::sin(y);
  const double y2 = y * y;
  double term = y * y2 / 6.0, sum = 0.0;
  for (int k = 3; k < 60 && std::abs(term) > 1e-18 * std::abs(sum); k += 4) {
    sum += term;
    term *= y2 * y2 / ((k + 1.0) * (k + 2.0) * (k + 3.0) * (k + 4.0));
  }
  return 2.0 * sum;
}

}  // namespace detail

/// Determinant of the boundary matrix of (phi_j, phi_j') at x = 1, in the
/// factored form -(sinh 2b - sin 2b)(sinh 2b + sin 2b) that keeps its sign
/// for small beta.
inline double boundary_determinant(double beta) {
  if (!(beta > 0.0)) fail(ErrorKind::InvalidArgument, "beta must be positive");
  const double y = 2.0 * beta;
  return -detail::sinh_minus_sin(y) * (std::sinh(y) + std::sin(y));
}

/// The same determinant assembled as a 4x4 matrix and expanded directly.
inline double boundary_determinant_matrix(double beta) {
  const double ch = std::cosh(beta), sh = std::sinh(beta), c = std::cos(beta), s = std::sin(beta);
  // rows: values at -1 and +1, then slopes at -1 and +1; slopes are taken in
  // the scaled variable t = beta x
  const std::array<double, 4> v = {ch * c, sh * s, ch * s, sh * c};
  std::array<std::array<double, 4>, 4> m{};
  for (int j = 0; j < 4; ++j) {
    std::array<double, 4> e{};
    e[j] = 1.0;
    const auto d = differentiate_fundamental(e, 1.0);
    double slope = 0.0;
    for (int k = 0; k < 4; ++k) slope += d[k] * v[k];
    const double parity_value = (j < 2) ? 1.0 : -1.0;  // phi1, phi2 even; phi3, phi4 odd
    m[0][j] = parity_value * v[j];
    m[1][j] = v[j];
    m[2][j] = -parity_value * slope;
    m[3][j] = slope;
  }
  double det = 1.0;
  for (int col = 0; col < 4; ++col) {
    int pivot = col;
    for (int r = col + 1; r < 4; ++r)
      if (std::abs(m[r][col]) > std::abs(m[pivot][col])) pivot = r;
    if (m[pivot][col] == 0.0) return 0.0;
    if (pivot != col) {
      std::swap(m[pivot], m[col]);
      det = -det;
    }
    det *= m[col][col];
    for (int r = col + 1; r < 4; ++r) {
      const double f = m[r][col] / m[col][col];
      for (int k = col; k < 4; ++k) m[r][k] -= f * m[col][k];
    }
  }
  return det;
}

// ---------------------------------------------------------------------------
// Rate of change at the Helfrich cylinder
// ---------------------------------------------------------------------------

/// rc(x) = -2 alpha^3 + a cosh(bx) cos(bx) + b sinh(bx) sin(bx), b = 1/(alpha sqrt 2),
/// the solution of rc'''' + rc / alpha^4 = -2 / alpha with rc = rc' = 0 at +-1.
class RateOfChange {
 public:
  explicit RateOfChange(double alpha) : alpha_(alpha), beta_(1.0 / (alpha * std::sqrt(2.0))) {
    if (!(alpha > 0.0)) fail(ErrorKind::InvalidArgument, "alpha must be positive");
    const double b = beta_;
    const double t = std::tanh(b), sech2 = 1.0 / (std::cosh(b) * std::cosh(b));
    const double c = std::cos(b), s = std::sin(b);
    const double a3 = 2.0 * alpha * alpha * alpha;
    // coefficients scaled by cosh(beta); the basis is scaled by 1/cosh(beta)
    const double denom = t + c * s * sech2;
    scaled_a_ = a3 * (t * c + s) / denom;
    scaled_b_ = a3 * (s - t * c) / denom;
  }

  [[nodiscard]] double alpha() const noexcept { return alpha_; }
  [[nodiscard]] double beta() const noexcept { return beta_; }
  [[nodiscard]] double a_coeff() const { return scaled_a_ / std::cosh(beta_); }
  [[nodiscard]] double b_coeff() const { return scaled_b_ / std::cosh(beta_); }
  [[nodiscard]] double d_coeff() const {
    return 0.5 * std::sinh(2.0 * beta_) + 0.5 * std::sin(2.0 * beta_);
  }

  /// rc and its first four derivatives at x.
  [[nodiscard]] std::array<double, 5> derivatives(double x) const {
    const double y = beta_ * x;
    // cosh(y)/cosh(beta), sinh(y)/cosh(beta) without overflow
    const double e = std::exp(std::abs(y) - beta_);
    const double f = std::exp(-std::abs(y) - beta_);
    const double norm = 1.0 + std::exp(-2.0 * beta_);
    const double ch = (e + f) / norm;
    const double sh = std::copysign((e - f) / norm, y);
    const std::array<double, 4> basis = {ch * std::cos(y), sh * std::sin(y), ch * std::sin(y), sh * std::cos(y)};
    std::array<double, 4> coeff = {scaled_a_, scaled_b_, 0.0, 0.0};
    std::array<double, 5> out{};
    for (int k = 0; k < 5; ++k) {
      double v = 0.0;
      for (int j = 0; j < 4; ++j) v += coeff[j] * basis[j];
      out[k] = v;
      coeff = differentiate_fundamental(coeff, beta_);
    }
    out[0] -= 2.0 * alpha_ * alpha_ * alpha_;
    return out;
  }

  [[nodiscard]] double operator()(double x) const { return derivatives(x)[0]; }

 private:
  double alpha_;
  double beta_;
  double scaled_a_;
  double scaled_b_;
};

/// rc and its first four derivatives at x.
inline std::array<double, 5> rc_closed_form(double alpha, double x) { return RateOfChange(alpha).derivatives(x); }

/// max over `samples` uniform points in [-1, 1] of |rc'''' + rc / alpha^4 + 2 / alpha|.
inline double rc_bvp_residual(double alpha, int samples = 2000) {
  const RateOfChange rc(alpha);
  const double a4 = std::pow(alpha, 4);
  double worst = 0.0;
  for (int i = 0; i < samples; ++i) {
    const double x = -1.0 + 2.0 * i / (samples - 1);
    const auto d = rc.derivatives(x);
    worst = std::max(worst, std::abs(d[4] + d[0] / a4 + 2.0 / alpha));
  }
  return worst;
}

struct RcSample {
  double x, rc, rc_prime;
};

struct RcProfile {
  double alpha = 0.0;
  double a_coeff = 0.0;
  double b_coeff = 0.0;
  double d_coeff = 0.0;
  std::vector<RcSample> samples;
  double bvp_residual = 0.0;
};

inline RcProfile rc_profile(double alpha, int samples = 201) {
  const RateOfChange rc(alpha);
  RcProfile p{alpha, rc.a_coeff(), rc.b_coeff(), rc.d_coeff(), {}, rc_bvp_residual(alpha)};
  p.samples.reserve(samples);
  for (int i = 0; i < samples; ++i) {
    const double x = -1.0 + 2.0 * i / (samples - 1);
    const auto d = rc.derivatives(x);
    p.samples.push_back({x, d[0], d[1]});
  }
  return p;
}

enum class RcShape { Monotone, Oscillatory };

inline std::string to_string(RcShape v) { return v == RcShape::Monotone ? "Monotone" : "Oscillatory"; }

struct RcVerdict {
  RcShape shape = RcShape::Monotone;
  std::vector<double> sign_changes;  // located zeros of rc' in (0, 1)
  int samples = 0;
};

namespace detail {

inline RcVerdict scan_rc_slope(const RateOfChange& rc, int samples) {
  RcVerdict v;
  v.samples = samples;
  auto slope = [&](double x) { return rc.derivatives(x)[1]; };
  double prev_x = 0.0, prev = 0.0;
  for (int i = 1; i <= samples; ++i) {
    const double x = static_cast<double>(i) / (samples + 1);
    const double s = slope(x);
    if (!(s > 0.0)) v.shape = RcShape::Oscillatory;
    if (i > 1 && (s > 0.0) != (prev > 0.0)) v.sign_changes.push_back(bisect(slope, prev_x, x, 1e-14));
    prev_x = x;
    prev = s;
  }
  return v;
}

}  // namespace detail

/// Monotone iff rc' > 0 at every sample in (0, 1). Starts from 5000 samples and
/// doubles until two successive refinements agree.
inline RcVerdict rc_monotonicity_verdict(double alpha, int samples = 5000) {
  const RateOfChange rc(alpha);
  auto v = detail::scan_rc_slope(rc, samples);
  for (int round = 0; round < 6; ++round) {
    auto finer = detail::scan_rc_slope(rc, 2 * v.samples);
    const bool stable = finer.shape == v.shape && finer.sign_changes.size() == v.sign_changes.size();
    v = std::move(finer);
    if (stable) break;
  }
  return v;
}

// ---------------------------------------------------------------------------
// Oscillation toolkit
// ---------------------------------------------------------------------------

struct OscillationValue {
  double h, dh, ddh;
};

inline OscillationValue oscillation_h(double A, double B, double a, double x) {
  if (A == 0.0 && B == 0.0) fail(ErrorKind::DegenerateCoefficients, "A and B both vanish");
  const double t = a * x;
  const double ch = std::cosh(t), sh = std::sinh(t), c = std::cos(t), s = std::sin(t);
  return {A * ch * c - B * sh * s, a * ((A - B) * sh * c - (A + B) * ch * s),
          a * a * (-2.0 * A * sh * s - 2.0 * B * ch * c)};
}

struct Extremum {
  double x, h;
};

struct OscillationReport {
  double A = 0.0, B = 0.0, a = 0.0;
  std::vector<Extremum> extrema;
  bool abs_monotone = true;
  std::optional<double> y_star;
};

/// Zeros of h' on [0, x_max] (x = 0 is always one), by sign scan with step at
/// most pi/(8a) and bisection.
inline OscillationReport oscillation_extrema(double A, double B, double a, double x_max) {
  if (A == 0.0 && B == 0.0) fail(ErrorKind::DegenerateCoefficients, "A and B both vanish");
  if (!(a > 0.0) || !(x_max > 0.0)) fail(ErrorKind::InvalidArgument, "need a > 0 and x_max > 0");
  OscillationReport r{A, B, a, {}, true, std::nullopt};
  auto dh = [&](double x) { return oscillation_h(A, B, a, x).dh; };
  r.extrema.push_back({0.0, oscillation_h(A, B, a, 0.0).h});
  const double step = std::min(std::numbers::pi / (8.0 * a), x_max / 2000.0);
  const int n = static_cast<int>(std::ceil(x_max / step));
  // start just right of the root at 0
  double prev_x = 1e-3 * step;
  double prev = dh(prev_x);
  for (int i = 1; i <= n; ++i) {
    const double x = std::min(x_max, i * step);
    const double v = dh(x);
    if (v == 0.0) {
      r.extrema.push_back({x, oscillation_h(A, B, a, x).h});
    } else if (prev != 0.0 && (v > 0.0) != (prev > 0.0)) {
      const double root = bisect(dh, prev_x, x, 1e-14);
      r.extrema.push_back({root, oscillation_h(A, B, a, root).h});
    }
    prev_x = x;
    prev = v;
  }
  for (std::size_t i = 1; i < r.extrema.size(); ++i)
    if (!(std::abs(r.extrema[i].h) > std::abs(r.extrema[i - 1].h))) r.abs_monotone = false;
  return r;
}

struct PhaseValues {
  double E, F, phi, dphi, psi, dpsi;
};

/// Envelopes and phases with h = sign(A) E cos(t + phi) and
/// h'/a = F cos(t + psi), t = a x.
inline PhaseValues phase_functions(double A, double B, double a, double x) {
  if (A == 0.0) fail(ErrorKind::PhaseUndefined, "phi needs A != 0");
  const double t = a * x;
  const double ch = std::cosh(t), sh = std::sinh(t);
  PhaseValues p{};
  const double E2 = A * A * ch * ch + B * B * sh * sh;
  const double F2 = (A + B) * (A + B) * ch * ch + (A - B) * (A - B) * sh * sh;
  p.E = std::sqrt(E2);
  p.F = std::sqrt(F2);
  p.phi = std::atan(B / A * std::tanh(t));
  p.dphi = A * B / E2;
  if (A + B == 0.0) {
    if (A < 0.0) fail(ErrorKind::PhaseUndefined, "psi leaves (-pi, pi) for A + B = 0, A < 0");
    p.psi = 0.0;
  } else {
    p.psi = std::atan2((A + B) * ch, (A - B) * sh);
  }
  p.dpsi = -(A * A - B * B) / F2;
  return p;
}

/// tanh(x) / tan(x), continuous at 0.
inline double tanh_tan_ratio(double x) {
  if (x == 0.0) return 1.0;
  const double k = std::round(x / std::numbers::pi);
  if (k != 0.0 && std::abs(x - k * std::numbers::pi) < 1e-12 * std::max(1.0, std::abs(x)))
    fail(ErrorKind::PoleAtMultipleOfPi, "tan vanishes at a nonzero multiple of pi");
  return std::tanh(x) / std::tan(x);
}

/// cosh(a) sin(a) sinh(x) cos(x) - sinh(a) cos(a) cosh(x) sin(x).
inline double sign_expression(double a, double x) {
  return std::cosh(a) * std::sin(a) * std::sinh(x) * std::cos(x) -
         std::sinh(a) * std::cos(a) * std::cosh(x) * std::sin(x);
}

inline bool sign_inequality(double a, double x) {
  if (!(0.0 < x && x < a)) fail(ErrorKind::InvalidArgument, "need 0 < x < a");
  return sign_expression(a, x) > 0.0;
}

/// eta(y) = 1 - (1 + K^2) y^2 / (1 + K^2 y^2).
inline double eta_function(double K, double y) { return 1.0 - (1.0 + K * K) * y * y / (1.0 + K * K * y * y); }

/// The zero of 1 + K eta(y) in (0, 1/sqrt 2) when K < -1, otherwise none.
inline std::optional<double> crossing_point(double K) {
  if (K == 0.0) fail(ErrorKind::InvalidArgument, "K must be nonzero");
  if (K >= -1.0) return std::nullopt;
  return std::sqrt((1.0 + 1.0 / K) / (1.0 - K));
}

}  // namespace helfrich
