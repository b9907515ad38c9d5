#pragma once

// Direct minimisation of the Helfrich energy over the discrete admissible
// class, the two energy-non-increasing repairs (catenary gluing and cylinder
// insertion), and continuation in epsilon.

#include <Eigen/Dense>
#include <Eigen/Sparse>
#include <Eigen/SparseCholesky>
#include <algorithm>
#include <cmath>
#include <cstdint>
#include <optional>
#include <random>
#include <string>
#include <vector>

#include "helfrich/classical.hpp"
#include "helfrich/energetics.hpp"
#include "helfrich/optimizer.hpp"
#include "helfrich/profile.hpp"
#include "helfrich/roots.hpp"
#include "helfrich/validators.hpp"

namespace helfrich {

enum class SeedKind { Cylinder, Catenary, ComparisonSurface, Custom, Multistart };

inline std::string to_string(SeedKind k) {
  switch (k) {
    case SeedKind::Cylinder: return "cylinder";
    case SeedKind::Catenary: return "catenary";
    case SeedKind::ComparisonSurface: return "comparison";
    case SeedKind::Custom: return "custom";
    case SeedKind::Multistart: return "multistart";
  }
  return "?";
}

inline SeedKind seed_kind_from_string(const std::string& s) {
  for (auto k : {SeedKind::Cylinder, SeedKind::Catenary, SeedKind::ComparisonSurface, SeedKind::Custom,
                 SeedKind::Multistart})
    if (to_string(k) == s) return k;
  fail(ErrorKind::InvalidArgument, "unknown seed kind '" + s + "'");
}

struct SolverConfig {
  Grid grid = Grid::uniform(64);
  int max_iterations = 20000;
  double gradient_tolerance = 1e-10;
  LineSearchParams line_search;
  int lbfgs_memory = 12;
  double positivity_floor = 1e-6;
  bool gluing_enabled = true;
  SeedKind seed = SeedKind::Multistart;
  std::optional<ProfileCurve> custom_seed;
  /// Amplitude of a random smooth admissible perturbation added to each seed.
  double perturbation = 0.0;
  std::uint64_t random_seed = 0;
  /// Grade the grid toward x = 1 (ratio 1.2) when epsilon >= 100.
  bool boundary_refinement = true;

  void validate() const {
    if (max_iterations < 1) fail(ErrorKind::InvalidArgument, "max_iterations must be positive");
    if (!(gradient_tolerance > 0.0)) fail(ErrorKind::InvalidArgument, "gradient_tolerance must be positive");
    if (!(line_search.shrink > 0.0 && line_search.shrink < 1.0))
      fail(ErrorKind::InvalidArgument, "line search shrink factor must lie in (0, 1)");
    if (!(line_search.sufficient_decrease > 0.0 && line_search.sufficient_decrease < 1.0))
      fail(ErrorKind::InvalidArgument, "sufficient decrease constant must lie in (0, 1)");
    if (!(positivity_floor > 0.0)) fail(ErrorKind::InvalidArgument, "positivity_floor must be positive");
    if (!(perturbation >= 0.0)) fail(ErrorKind::InvalidArgument, "perturbation must be nonnegative");
    if (seed == SeedKind::Custom && !custom_seed) fail(ErrorKind::InvalidArgument, "custom seed missing");
    if (grid.n_elements() < 5) fail(ErrorKind::BadGrid, "solver needs at least 5 elements");
  }
};

struct SolveResult {
  ProfileCurve profile;
  EnergyReport energy;
  double gradient_norm = 0.0;
  double el_residual = 0.0;
  double first_integral_drift = 0.0;
  double first_integral_mean = 0.0;
  int iterations = 0;
  std::vector<double> energy_history;
  int gluing_moves_applied = 0;
  bool converged = false;
  SeedKind seed_used = SeedKind::Cylinder;
};

// ---------------------------------------------------------------------------
// Comparison catenary v_alpha = c cosh(x / c), c the larger branch
// ---------------------------------------------------------------------------

struct LimitCatenary {
  double c = 0.0;
  [[nodiscard]] double value(double x) const { return c * std::cosh(x / c); }
  [[nodiscard]] double slope(double x) const { return std::sinh(x / c); }

  static LimitCatenary for_alpha(double alpha) { return {solve_catenary_branches(alpha).c1}; }
};

// ---------------------------------------------------------------------------
// Random admissible data
// ---------------------------------------------------------------------------

/// sum_k r_k (cos(k pi x) - cos(k pi)) with r_k uniform in [-amplitude/k, amplitude/k],
/// k = 1..modes. Even, zero at x = +-1 with zero slope there.
struct SmoothPerturbation {
  std::vector<double> r;

  static SmoothPerturbation random(std::mt19937_64& rng, double amplitude, int modes = 4) {
    std::uniform_real_distribution<double> dist(-1.0, 1.0);
    SmoothPerturbation p;
    for (int k = 1; k <= modes; ++k) p.r.push_back(amplitude * dist(rng) / k);
    return p;
  }
  [[nodiscard]] double value(double x) const {
    double v = 0.0;
    for (std::size_t i = 0; i < r.size(); ++i) {
      const double k = static_cast<double>(i + 1);
      v += r[i] * (std::cos(k * kPi * x) - std::cos(k * kPi));
    }
    return v;
  }
  [[nodiscard]] double slope(double x) const {
    double v = 0.0;
    for (std::size_t i = 0; i < r.size(); ++i) {
      const double k = static_cast<double>(i + 1);
      v -= r[i] * k * kPi * std::sin(k * kPi * x);
    }
    return v;
  }
};

/// alpha plus a random smooth perturbation of size 0.2 alpha per mode.
inline ProfileCurve random_admissible_curve(double alpha, const Grid& grid, std::mt19937_64& rng) {
  const auto p = SmoothPerturbation::random(rng, 0.2 * alpha);
  NodalData d{std::vector<double>(grid.n_nodes()), std::vector<double>(grid.n_nodes())};
  for (int i = 0; i < grid.n_nodes(); ++i) {
    d.values[i] = alpha + p.value(grid.node(i));
    d.derivatives[i] = p.slope(grid.node(i));
  }
  return build_profile(alpha, grid, std::move(d));
}

/// Adds the perturbation; halves it until the nodal values stay above `floor`.
inline ProfileCurve perturb(const ProfileCurve& curve, const SmoothPerturbation& p, double floor) {
  const Grid& g = curve.grid();
  for (double scale = 1.0; scale > 1e-6; scale *= 0.5) {
    NodalData d{std::vector<double>(g.n_nodes()), std::vector<double>(g.n_nodes())};
    bool ok = true;
    for (int i = 0; i < g.n_nodes(); ++i) {
      d.values[i] = curve.values()[i] + scale * p.value(g.node(i));
      d.derivatives[i] = curve.derivatives()[i] + scale * p.slope(g.node(i));
      ok = ok && d.values[i] > floor;
    }
    if (ok) return build_profile(curve.alpha(), g, std::move(d));
  }
  return curve;
}

// ---------------------------------------------------------------------------
// Descent
// ---------------------------------------------------------------------------

namespace detail {

// Quadratic form with the leading parts of the second variation at a
// cylinder of radius ubar: bending, area tension and the 1/u^3 term.
inline Eigen::SparseMatrix<double> descent_metric(const Grid& grid, double ubar, double epsilon) {
  const DofMap map{grid.n_elements()};
  const auto& rule = grid.rule();
  std::vector<Eigen::Triplet<double>> triplets;
  const double kb = 2.0 * kPi * ubar;
  const double kt = 4.0 * kPi * epsilon * ubar;
  const double km = 2.0 * kPi / (ubar * ubar * ubar);
  for (int e = 0; e < grid.n_elements(); ++e) {
    const double h = grid.length(e);
    const auto idx = map.element(e);
    double local[4][4] = {};
    for (std::size_t q = 0; q < rule.size(); ++q) {
      const auto b = HermiteBasis::at(rule.points[q], h);
      const double w = rule.weights[q] * h;
      for (int i = 0; i < 4; ++i)
        for (int j = 0; j < 4; ++j)
          local[i][j] += w * (kb * b.ddn[i] * b.ddn[j] + kt * b.dn[i] * b.dn[j] + km * b.n[i] * b.n[j]);
    }
    for (int i = 0; i < 4; ++i)
      for (int j = 0; j < 4; ++j)
        if (idx[i] >= 0 && idx[j] >= 0) triplets.emplace_back(idx[i], idx[j], local[i][j]);
  }
  Eigen::SparseMatrix<double> m(map.size(), map.size());
  m.setFromTriplets(triplets.begin(), triplets.end());
  return m;
}

struct Descent {
  ProfileCurve curve;
  OptimizerResult opt;
};

inline Descent descend(const ProfileCurve& seed, double epsilon, const SolverConfig& cfg) {
  const Grid& grid = seed.grid();
  const double alpha = seed.alpha();
  const double floor = cfg.positivity_floor;
  std::vector<double> scratch_u(grid.n_nodes()), scratch_d(grid.n_nodes());
  std::vector<double> grad;

  Objective f = [&](const Eigen::VectorXd& x, Eigen::VectorXd* g) -> double {
    const auto data = unpack_dofs(std::span<const double>(x.data(), x.size()), grid, alpha);
    for (double v : data.values)
      if (!(v > floor)) return std::numeric_limits<double>::infinity();
    const auto parts = integrate(grid, data.values, data.derivatives, epsilon, g ? &grad : nullptr);
    if (!parts) return std::numeric_limits<double>::infinity();
    if (g) *g = Eigen::Map<const Eigen::VectorXd>(grad.data(), static_cast<Eigen::Index>(grad.size()));
    return parts->willmore + epsilon * parts->area;
  };

  double ubar = 0.0;
  for (double v : seed.values()) ubar += v;
  ubar /= static_cast<double>(seed.values().size());
  Eigen::SimplicialLDLT<Eigen::SparseMatrix<double>> metric(descent_metric(grid, ubar, epsilon));
  InverseMetric h0 = [&](const Eigen::VectorXd& v) -> Eigen::VectorXd { return metric.solve(v); };

  const auto packed = pack_dofs(seed);
  Eigen::VectorXd x0 = Eigen::Map<const Eigen::VectorXd>(packed.data(), static_cast<Eigen::Index>(packed.size()));
  if (!std::isfinite(f(x0, nullptr))) fail(ErrorKind::NonPositiveProfile, "seed is not feasible");

  OptimizerOptions opt;
  opt.max_iterations = cfg.max_iterations;
  opt.gradient_tolerance = cfg.gradient_tolerance;
  opt.line_search = cfg.line_search;
  opt.memory = cfg.lbfgs_memory;
  opt.norm = [&](const Eigen::VectorXd& g) { return std::sqrt(std::max(0.0, g.dot(metric.solve(g)))); };
  auto r = lbfgs(f, h0, std::move(x0), opt);
  if (!r.converged) {
    NewtonStep newton = [&](const Eigen::VectorXd& x, const Eigen::VectorXd& g) -> std::optional<Eigen::VectorXd> {
      const auto data = unpack_dofs(std::span<const double>(x.data(), x.size()), grid, alpha);
      const auto entries = helfrich_hessian_entries(grid, data.values, data.derivatives, epsilon);
      std::vector<Eigen::Triplet<double>> t;
      t.reserve(entries.size());
      for (const auto& e : entries) t.emplace_back(static_cast<int>(e[0]), static_cast<int>(e[1]), e[2]);
      Eigen::SparseMatrix<double> hess(x.size(), x.size());
      hess.setFromTriplets(t.begin(), t.end());
      Eigen::SimplicialLDLT<Eigen::SparseMatrix<double>> ldlt(hess);
      if (ldlt.info() != Eigen::Success || !(ldlt.vectorD().minCoeff() > 0.0)) return std::nullopt;
      return Eigen::VectorXd(-ldlt.solve(g));
    };
    newton_polish(f, newton, r, opt);
  }
  auto data = unpack_dofs(std::span<const double>(r.x.data(), r.x.size()), grid, alpha);
  return {build_profile(alpha, grid, std::move(data)), std::move(r)};
}

}  // namespace detail

// ---------------------------------------------------------------------------
// Repairs
// ---------------------------------------------------------------------------

struct GluingOutcome {
  ProfileCurve curve;
  bool applied = false;
  double x0 = 0.0;     // catenary gluing: last point with u' = v_alpha'
  double x1 = 0.0;     // catenary gluing: tangency point
  double c_hat = 0.0;  // catenary gluing: parameter of the attached catenary
  int passes = 0;      // cylinder insertion: intervals removed
};

namespace detail {

inline void require_gluing_range(const ProfileCurve& curve) {
  if (!(curve.alpha() >= constants().alpham))
    fail(ErrorKind::PreconditionViolated, "gluing needs alpha >= alpha_m");
  if (!curve.clamped()) fail(ErrorKind::PreconditionViolated, "gluing needs u'(1) = 0");
}

// Points of [0, 1] scanned from 1 down to 0 (exclusive), `per_element` per element.
inline std::vector<double> descending_scan(const Grid& g, int per_element) {
  std::vector<double> xs;
  for (int e = g.n_elements() - 1; e >= 0; --e)
    for (int j = 0; j < per_element; ++j) xs.push_back(g.node(e + 1) - g.length(e) * j / per_element);
  return xs;
}

struct GapMinimum {
  double x, value;
};

// min over [x0, 1] of c cosh(x/c) - u(x)
inline GapMinimum catenary_gap(const ProfileCurve& u, double c, double x0) {
  const Grid& g = u.grid();
  std::vector<double> xs{x0};
  for (int e = g.locate(x0); e < g.n_elements(); ++e)
    for (int j = 1; j <= 32; ++j) {
      const double x = g.node(e) + g.length(e) * j / 32.0;
      if (x > x0) xs.push_back(x);
    }
  auto gap = [&](double x) { return c * std::cosh(x / c) - u.jet(x).u; };
  auto dgap = [&](double x) { return std::sinh(x / c) - u.jet(x).du; };
  std::size_t best = 0;
  double best_value = gap(xs[0]);
  for (std::size_t i = 1; i < xs.size(); ++i) {
    const double v = gap(xs[i]);
    if (v < best_value) {
      best_value = v;
      best = i;
    }
  }
  GapMinimum m{xs[best], best_value};
  const double lo = xs[best > 0 ? best - 1 : 0];
  const double hi = xs[std::min(best + 1, xs.size() - 1)];
  if (lo < hi && dgap(lo) <= 0.0 && dgap(hi) >= 0.0) {
    const double x = bisect(dgap, lo, hi, 1e-15);
    const double v = gap(x);
    if (v < m.value) m = {x, v};
  }
  return m;
}

// Grid containing x as a node, snapping to an existing node within `snap`.
inline std::pair<Grid, double> grid_with_point(const Grid& g, double x, double snap = 1e-12) {
  const int e = g.locate(x);
  for (int i : {e, e + 1})
    if (std::abs(g.node(i) - x) <= snap) return {g, g.node(i)};
  return {g.with_node(x), x};
}

}  // namespace detail

/// Replaces u on (-x1, x1) by the catenary w_c, c = inf{c >= c_alpha : w_c > u
/// on [x0, 1]}, touching u tangentially at x1. Not applied when u' < v_alpha'
/// already holds on (0, 1].
inline GluingOutcome glue_catenary(const ProfileCurve& curve, double epsilon) {
  detail::require_gluing_range(curve);
  (void)epsilon;
  const auto va = LimitCatenary::for_alpha(curve.alpha());
  GluingOutcome out{curve};

  auto excess = [&](double x) { return va.slope(x) - curve.jet(x).du; };
  double prev = 1.0;
  bool found = false;
  for (double x : detail::descending_scan(curve.grid(), 16)) {
    if (x < 1.0 && excess(x) <= 0.0) {
      out.x0 = bisect(excess, x, prev, 1e-15);
      found = true;
      break;
    }
    prev = x;
  }
  if (!found) return out;

  auto gap = [&](double c) { return detail::catenary_gap(curve, c, out.x0).value; };
  double lo = va.c;
  double hi = 1.1 * va.c;
  for (int k = 0; gap(hi) <= 0.0; ++k) {
    if (k > 80) fail(ErrorKind::NoSolution, "no catenary lies above the profile");
    lo = hi;
    hi *= 1.5;
  }
  for (int k = 0; k < 200 && hi - lo > 1e-15 * hi; ++k) {
    const double mid = 0.5 * (lo + hi);
    (gap(mid) > 0.0 ? hi : lo) = mid;
  }
  out.c_hat = hi;
  out.x1 = detail::catenary_gap(curve, hi, out.x0).x;

  const auto [grid, x1] = detail::grid_with_point(curve.grid(), out.x1);
  out.x1 = x1;
  NodalData d{std::vector<double>(grid.n_nodes()), std::vector<double>(grid.n_nodes())};
  const double c = out.c_hat;
  for (int i = 0; i < grid.n_nodes(); ++i) {
    const double x = grid.node(i);
    if (x < x1) {
      d.values[i] = c * std::cosh(x / c);
      d.derivatives[i] = std::sinh(x / c);
    } else {
      const auto j = curve.jet(x);
      d.values[i] = j.u;
      d.derivatives[i] = j.du;
    }
  }
  out.curve = build_profile(curve.alpha(), grid, std::move(d));
  out.applied = true;
  return out;
}

namespace detail {

// Roots of u' (a quadratic on each element) inside the open elements.
inline std::vector<double> slope_roots(const ProfileCurve& u) {
  const Grid& g = u.grid();
  std::vector<double> roots;
  for (int e = 0; e < g.n_elements(); ++e) {
    const double h = g.length(e);
    const double u0 = u.values()[e], u1 = u.values()[e + 1];
    const double d0 = u.derivatives()[e], d1 = u.derivatives()[e + 1];
    const double A = 6.0 * (u0 - u1) / h + 3.0 * d0 + 3.0 * d1;
    const double B = -6.0 * (u0 - u1) / h - 4.0 * d0 - 2.0 * d1;
    const double C = d0;
    std::vector<double> ts;
    if (std::abs(A) < 1e-14 * (std::abs(B) + std::abs(C))) {
      if (B != 0.0) ts.push_back(-C / B);
    } else {
      const double disc = B * B - 4.0 * A * C;
      if (disc >= 0.0) {
        const double q = -0.5 * (B + std::copysign(std::sqrt(disc), B));
        if (q != 0.0) ts.push_back(C / q);
        ts.push_back(q / A);
      }
    }
    for (double t : ts)
      if (t > 0.0 && t < 1.0) roots.push_back(g.node(e) + t * h);
  }
  return roots;
}

// Maximal intervals of [0, 1] on which u' < 0.
inline std::vector<std::pair<double, double>> negative_slope_intervals(const ProfileCurve& u) {
  const Grid& g = u.grid();
  std::vector<double> pts(g.nodes().begin(), g.nodes().end());
  const auto roots = slope_roots(u);
  pts.insert(pts.end(), roots.begin(), roots.end());
  std::sort(pts.begin(), pts.end());
  pts.erase(std::unique(pts.begin(), pts.end()), pts.end());
  double scale = 0.0;
  for (double d : u.derivatives()) scale = std::max(scale, std::abs(d));
  const double tol = 1e-13 * std::max(1.0, scale);
  std::vector<std::pair<double, double>> out;
  for (std::size_t i = 0; i + 1 < pts.size(); ++i) {
    const double mid = 0.5 * (pts[i] + pts[i + 1]);
    if (!(u.jet(mid).du < -tol)) continue;
    if (!out.empty() && out.back().second == pts[i])
      out.back().second = pts[i + 1];
    else
      out.emplace_back(pts[i], pts[i + 1]);
  }
  return out;
}

}  // namespace detail

/// Removes the intervals where u' < 0, rightmost first: u is frozen at u(b) on
/// (a, b) and the inner part [0, a] is lowered by u(a) - u(b).
inline GluingOutcome insert_cylinder(const ProfileCurve& curve, double epsilon) {
  detail::require_gluing_range(curve);
  const auto branches = solve_catenary_branches(curve.alpha());
  if (!(epsilon >= branches.eps_hat))
    fail(ErrorKind::PreconditionViolated, "cylinder insertion needs epsilon >= eps_hat");
  const LimitCatenary va{branches.c1};
  for (double x : detail::descending_scan(curve.grid(), 16))
    if (x > 0.0 && curve.jet(x).du >= va.slope(x) + 1e-12)
      fail(ErrorKind::PreconditionViolated, "cylinder insertion needs u' < v_alpha' on (0, 1]");

  GluingOutcome out{curve};
  for (int pass = 0; pass < 10000; ++pass) {
    const auto intervals = detail::negative_slope_intervals(out.curve);
    if (intervals.empty()) break;
    const auto& u = out.curve;
    auto [a, b] = intervals.back();
    auto [g1, bb] = detail::grid_with_point(u.grid(), b);
    b = bb;
    Grid grid = g1;
    if (a > 0.0) {
      auto [g2, aa] = detail::grid_with_point(grid, a);
      grid = std::move(g2);
      a = aa;
    }
    const double ub = u.jet(b).u;
    const double shift = u.jet(a).u - ub;
    NodalData d{std::vector<double>(grid.n_nodes()), std::vector<double>(grid.n_nodes())};
    for (int i = 0; i < grid.n_nodes(); ++i) {
      const double x = grid.node(i);
      const auto j = u.jet(x);
      if (x < a) {
        d.values[i] = j.u - shift;
        d.derivatives[i] = j.du;
      } else if (x <= b) {
        d.values[i] = ub;
        d.derivatives[i] = 0.0;
      } else {
        d.values[i] = j.u;
        d.derivatives[i] = j.du;
      }
    }
    out.curve = build_profile(u.alpha(), grid, std::move(d));
    out.passes = pass + 1;
    out.applied = true;
  }
  return out;
}

// ---------------------------------------------------------------------------
// Solve
// ---------------------------------------------------------------------------

inline Grid working_grid(double epsilon, const SolverConfig& cfg) {
  if (cfg.boundary_refinement && epsilon >= 100.0)
    return Grid::graded(cfg.grid.n_elements(), 1.2, cfg.grid.quadrature_order());
  return cfg.grid;
}

inline ProfileCurve seed_profile(SeedKind kind, double alpha, const Grid& grid, const SolverConfig& cfg) {
  switch (kind) {
    case SeedKind::Cylinder: return cylinder_profile(alpha, grid);
    case SeedKind::Catenary: {
      if (!(alpha >= constants().alpha0))
        fail(ErrorKind::PreconditionViolated, "catenary seed needs alpha >= alpha_0");
      const auto va = LimitCatenary::for_alpha(alpha);
      NodalData d{std::vector<double>(grid.n_nodes()), std::vector<double>(grid.n_nodes())};
      for (int i = 0; i < grid.n_nodes(); ++i) {
        d.values[i] = va.value(grid.node(i));
        d.derivatives[i] = va.slope(grid.node(i));
      }
      return build_profile(alpha, grid, std::move(d));
    }
    case SeedKind::ComparisonSurface: return build_comparison_surface(alpha, grid).profile;
    case SeedKind::Custom: {
      const auto& c = *cfg.custom_seed;
      if (std::abs(c.alpha() - alpha) > 1e-12 * alpha)
        fail(ErrorKind::InvalidArgument, "custom seed has a different boundary value");
      auto r = resample(c, grid);
      NodalData d{{r.values().begin(), r.values().end()}, {r.derivatives().begin(), r.derivatives().end()}};
      return build_profile(alpha, grid, std::move(d));
    }
    case SeedKind::Multistart: break;
  }
  fail(ErrorKind::InvalidArgument, "multistart is not a single seed");
}

inline SolveResult finish_result(SolveResult r, double epsilon) {
  r.energy = helfrich_energy(r.profile, epsilon);
  r.el_residual = el_residual(r.profile, epsilon);
  const auto fi = first_integral(r.profile, epsilon);
  r.first_integral_drift = fi.drift;
  r.first_integral_mean = fi.mean;
  return r;
}

inline SolveResult minimise(double alpha, double epsilon, const SolverConfig& cfg) {
  if (!(alpha > 0.0) || !std::isfinite(alpha)) fail(ErrorKind::InvalidArgument, "alpha must be positive");
  if (!(epsilon >= 0.0) || !std::isfinite(epsilon)) fail(ErrorKind::InvalidArgument, "epsilon must be >= 0");
  cfg.validate();
  const Grid grid = working_grid(epsilon, cfg);

  std::vector<SeedKind> kinds;
  if (cfg.seed == SeedKind::Multistart) {
    kinds = {SeedKind::Cylinder, SeedKind::ComparisonSurface};
    if (alpha >= constants().alpha0) kinds.push_back(SeedKind::Catenary);
  } else {
    kinds = {cfg.seed};
  }

  std::optional<detail::Descent> best;
  SeedKind best_kind = kinds.front();
  for (std::size_t i = 0; i < kinds.size(); ++i) {
    auto seed = seed_profile(kinds[i], alpha, grid, cfg);
    if (cfg.perturbation > 0.0) {
      std::mt19937_64 rng(cfg.random_seed + 0x9e3779b97f4a7c15ULL * i);
      seed = perturb(seed, SmoothPerturbation::random(rng, cfg.perturbation, 8), cfg.positivity_floor);
    }
    auto d = detail::descend(seed, epsilon, cfg);
    if (!best || d.opt.energy < best->opt.energy) {
      best = std::move(d);
      best_kind = kinds[i];
    }
  }

  SolveResult r{best->curve};
  r.seed_used = best_kind;
  r.iterations = best->opt.iterations;
  r.energy_history = best->opt.history;
  r.gradient_norm = best->opt.gradient_norm;
  r.converged = best->opt.converged;

  const bool gluing_range =
      alpha >= constants().alpham && epsilon >= solve_catenary_branches(alpha).eps_hat;
  if (cfg.gluing_enabled && gluing_range) {
    auto glued = glue_catenary(r.profile, epsilon);
    int moves = glued.applied ? 1 : 0;
    auto inserted = insert_cylinder(glued.curve, epsilon);
    moves += inserted.applied ? 1 : 0;
    if (moves > 0) {
      const auto candidate = resample(inserted.curve, grid);
      NodalData nd{{candidate.values().begin(), candidate.values().end()},
                   {candidate.derivatives().begin(), candidate.derivatives().end()}};
      auto d = detail::descend(build_profile(alpha, grid, std::move(nd)), epsilon, cfg);
      if (d.opt.energy < best->opt.energy) {
        if (d.opt.history.front() <= r.energy_history.back())
          r.energy_history.insert(r.energy_history.end(), d.opt.history.begin() + 1, d.opt.history.end());
        else
          r.energy_history = d.opt.history;
        r.profile = d.curve;
        r.iterations += d.opt.iterations;
        r.gradient_norm = d.opt.gradient_norm;
        r.converged = d.opt.converged;
        r.gluing_moves_applied = moves;
      }
    }
  }
  return finish_result(std::move(r), epsilon);
}

// ---------------------------------------------------------------------------
// Continuation in epsilon
// ---------------------------------------------------------------------------

struct ContinuationRung {
  double epsilon = 0.0;
  std::optional<SolveResult> result;
  std::string error;
  std::optional<double> sup_gap;       // max |u - v_alpha|
  std::optional<double> slope_gap_l1;  // int_{-1}^{1} |u' - v_alpha'|
};

/// max |u - v_alpha| and the L1 norm of u' - v_alpha' over [-1, 1].
inline std::pair<double, double> distance_to_catenary(const ProfileCurve& u, const LimitCatenary& va) {
  const Grid& g = u.grid();
  const auto& rule = g.rule();
  double sup = 0.0, l1 = 0.0;
  for (int e = 0; e < g.n_elements(); ++e) {
    for (int k = 0; k <= 16; ++k) {
      const double x = g.node(e) + g.length(e) * k / 16.0;
      sup = std::max(sup, std::abs(u.jet(x).u - va.value(x)));
    }
    for (std::size_t q = 0; q < rule.size(); ++q) {
      const double x = g.node(e) + g.length(e) * rule.points[q];
      l1 += 2.0 * rule.weights[q] * g.length(e) * std::abs(u.jet(x).du - va.slope(x));
    }
  }
  return {sup, l1};
}

inline std::vector<ContinuationRung> continuation_epsilon(double alpha, const std::vector<double>& ladder,
                                                          const SolverConfig& cfg) {
  for (std::size_t i = 0; i < ladder.size(); ++i) {
    if (!(ladder[i] >= 0.0)) fail(ErrorKind::InvalidArgument, "ladder values must be >= 0");
    if (i > 0 && !(ladder[i] > ladder[i - 1])) fail(ErrorKind::InvalidArgument, "ladder must be increasing");
  }
  std::optional<LimitCatenary> va;
  if (alpha > constants().alpha0) va = LimitCatenary::for_alpha(alpha);

  std::vector<ContinuationRung> rungs;
  SolverConfig step = cfg;
  for (double eps : ladder) {
    ContinuationRung rung{eps};
    try {
      auto r = minimise(alpha, eps, step);
      if (va) {
        const auto [sup, l1] = distance_to_catenary(r.profile, *va);
        rung.sup_gap = sup;
        rung.slope_gap_l1 = l1;
      }
      step.seed = SeedKind::Custom;
      step.custom_seed = r.profile;
      step.perturbation = 0.0;
      rung.result = std::move(r);
    } catch (const Error& e) {
      rung.error = e.what();
    }
    rungs.push_back(std::move(rung));
  }
  return rungs;
}

}  // namespace helfrich
