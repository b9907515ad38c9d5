#include <gtest/gtest.h>

#include <cmath>
#include <numbers>
#include <random>

#include "helfrich/classical.hpp"
#include "helfrich/energetics.hpp"
#include "helfrich/minimiser.hpp"

using namespace helfrich;

namespace {

constexpr double pi = std::numbers::pi;

double rel(double a, double b) { return std::abs(a - b) / std::max(std::abs(b), 1e-300); }

ProfileCurve sphere_profile(double c, const Grid& g) {
  return sample_profile(
      g, [c](double x) { return std::sqrt(c * c - x * x); }, [c](double x) { return -x / std::sqrt(c * c - x * x); });
}

ProfileCurve from_dofs(const std::vector<double>& x, const Grid& g, double alpha) {
  return build_profile(alpha, g, unpack_dofs(x, g, alpha));
}

double dot(const std::vector<double>& a, const std::vector<double>& b) {
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
  return s;
}

double norm(const std::vector<double>& a) { return std::sqrt(dot(a, a)); }

// Fourth-order central difference of the energy along d, compared with the gradient.
double directional_error(const ProfileCurve& c, double eps, const std::vector<double>& d, double step) {
  const auto x = pack_dofs(c);
  const auto energy_at = [&](double t) {
    auto y = x;
    for (std::size_t i = 0; i < x.size(); ++i) y[i] += t * d[i];
    return helfrich_energy(from_dofs(y, c.grid(), c.alpha()), eps).helfrich;
  };
  const double fd = (8.0 * (energy_at(step) - energy_at(-step)) - (energy_at(2.0 * step) - energy_at(-2.0 * step))) /
                    (12.0 * step);
  const double an = dot(helfrich_gradient(c, eps), d);
  return std::abs(fd - an) / std::max(std::abs(an), 1e-8);
}

std::vector<double> random_direction(std::mt19937_64& rng, std::size_t n) {
  std::normal_distribution<double> nd;
  std::vector<double> d(n);
  for (auto& v : d) v = nd(rng);
  const double s = norm(d);
  for (auto& v : d) v /= s;
  return d;
}

}  // namespace

TEST(DofMap, LayoutInterleavesValuesAndSlopes) {
  const DofMap m{4};
  EXPECT_EQ(m.size(), 7);
  EXPECT_EQ(m.value(0), 0);
  EXPECT_EQ(m.slope(0), -1);
  EXPECT_EQ(m.value(1), 1);
  EXPECT_EQ(m.slope(1), 2);
  EXPECT_EQ(m.value(4), -1);
  EXPECT_EQ(m.slope(4), -1);
  std::mt19937_64 rng(3);
  const auto c = random_admissible_curve(1.0, Grid::uniform(4), rng);
  const auto d = unpack_dofs(pack_dofs(c), c.grid(), 1.0);
  for (int i = 0; i < 5; ++i) {
    EXPECT_EQ(d.values[i], c.values()[i]);
    EXPECT_EQ(d.derivatives[i], c.derivatives()[i]);
  }
}

TEST(Area, Cylinder) { EXPECT_NEAR(area(cylinder_profile(1.0, Grid::uniform(8))), 4.0 * pi, 1e-13); }

TEST(Area, UnitCatenaryValue) {
  const double exact = 2.0 * pi + pi * std::sinh(2.0);
  EXPECT_NEAR(exact, 17.6773, 1e-4);
  EXPECT_LT(rel(area(catenary_profile(1.0, Grid::uniform(64))), exact), 1e-10);
}

TEST(Area, CatenaryFamilyMatchesClosedForm) {
  for (double c : {0.5, 1.0, 2.0, 5.0}) {
    const double a = area(catenary_profile(c, Grid::uniform(64)));
    EXPECT_LT(rel(a, catenary_area(c)), 1e-10) << c;
  }
}

TEST(Area, QuadratureErrorDecaysUnderRefinement) {
  double prev = 0.0;
  for (int n : {4, 8, 16, 32}) {
    const double err = std::abs(area(catenary_profile(0.5, Grid::uniform(n))) - catenary_area(0.5));
    if (n > 4) EXPECT_LT(err, prev / 12.0) << n;  // at least h^4-like
    prev = err;
  }
}

TEST(Willmore, CatenaryIsNearlyZero) {
  for (double c : {0.5, 1.0, 2.0}) EXPECT_LT(willmore(catenary_profile(c, Grid::uniform(64))), 1e-8) << c;
}

TEST(Willmore, CylinderIsPiOverAlpha) {
  EXPECT_NEAR(willmore(cylinder_profile(1.0, Grid::uniform(8))), pi, 1e-13);
  EXPECT_NEAR(willmore(cylinder_profile(2.5, Grid::uniform(8))), pi / 2.5, 1e-13);
}

TEST(Willmore, SphereZone) {
  // W = zone area / c^2 = 2 pi c * 2 / c^2
  EXPECT_NEAR(willmore(sphere_profile(2.0, Grid::uniform(64))), 2.0 * pi, 1e-6);
}

TEST(Helfrich, CylinderValues) {
  const auto c = cylinder_profile(1.0, Grid::uniform(16));
  const auto r0 = helfrich_energy(c, 0.0);
  EXPECT_NEAR(r0.helfrich, pi, 1e-13);
  const auto r1 = helfrich_energy(c, 0.25);
  EXPECT_NEAR(r1.helfrich, 2.0 * pi, 1e-13);
  EXPECT_NEAR(r1.helfrich, 4.0 * pi * std::sqrt(0.25), 1e-13);
  EXPECT_NEAR(r1.product_bound_slack, 0.0, 1e-12);
  EXPECT_EQ(r1.helfrich, r1.willmore + 0.25 * r1.area);
  EXPECT_NEAR(r1.gradient_bound, pi / std::sqrt(16.0 * pi * pi - pi * pi), 1e-14);
}

TEST(Helfrich, CylinderFormulaRandomised) {
  std::mt19937_64 rng(5);
  std::uniform_real_distribution<double> ua(0.1, 5.0), ue(0.0, 10.0);
  for (int k = 0; k < 20; ++k) {
    const double a = ua(rng), e = ue(rng);
    EXPECT_LT(rel(helfrich_energy(cylinder_profile(a, Grid::uniform(64)), e).helfrich, cylinder_energy(a, e)), 1e-10);
  }
}

TEST(Helfrich, GradientBoundInfiniteAboveFourPi) {
  const auto r = helfrich_energy(cylinder_profile(0.2, Grid::uniform(8)), 0.0);
  EXPECT_GT(r.willmore, 4.0 * pi);
  EXPECT_TRUE(std::isinf(r.gradient_bound));
}

TEST(Gradient, MatchesFiniteDifferencesAlongRandomDirections) {
  std::mt19937_64 rng(17);
  const auto c = random_admissible_curve(1.2, Grid::uniform(32), rng);
  for (int k = 0; k < 20; ++k) {
    const auto d = random_direction(rng, pack_dofs(c).size());
    EXPECT_LT(directional_error(c, 0.7, d, 1e-4), 1e-6) << k;
  }
}

TEST(Gradient, MatchesFiniteDifferencesOnRandomCurves) {
  std::mt19937_64 rng(19);
  std::uniform_real_distribution<double> ua(0.5, 3.0), ue(0.0, 5.0);
  for (int k = 0; k < 100; ++k) {
    const auto c = random_admissible_curve(ua(rng), Grid::uniform(16), rng);
    const auto d = random_direction(rng, pack_dofs(c).size());
    EXPECT_LT(directional_error(c, ue(rng), d, 1e-4), 1e-6) << k;
  }
}

TEST(Gradient, VanishesAtHelfrichCylinder) {
  for (double a : {0.5, 1.0, 2.0}) {
    const auto g = helfrich_gradient(cylinder_profile(a, Grid::uniform(64)), 1.0 / (4.0 * a * a));
    EXPECT_LE(norm(g), 1e-8) << a;
  }
}

TEST(Gradient, ShrinksAtCatenaryForWillmore) {
  // H vanishes up to interpolation error, so the gradient decays under refinement
  double previous = 1.0;
  for (int n : {16, 32, 64}) {
    const auto c = catenary_profile(1.0, Grid::uniform(n));
    std::vector<double> g;
    ASSERT_TRUE(detail::integrate(c.grid(), c.values(), c.derivatives(), 0.0, &g));
    EXPECT_LE(helfrich_energy(c, 0.0).willmore, 1e-7) << n;
    EXPECT_LE(norm(g), previous / 4.0) << n;
    previous = norm(g);
  }
  EXPECT_LE(previous, 2e-5);
}

TEST(Hessian, MatchesGradientDifferences) {
  std::mt19937_64 rng(23);
  const auto c = random_admissible_curve(1.0, Grid::uniform(12), rng);
  const double eps = 0.4;
  const auto entries = helfrich_hessian_entries(c.grid(), c.values(), c.derivatives(), eps);
  const auto x = pack_dofs(c);
  const auto d = random_direction(rng, x.size());
  std::vector<double> hd(x.size(), 0.0);
  for (const auto& [i, j, v] : entries) hd[static_cast<int>(i)] += v * d[static_cast<int>(j)];
  const double h = 1e-6;
  auto xp = x, xm = x;
  for (std::size_t i = 0; i < x.size(); ++i) {
    xp[i] += h * d[i];
    xm[i] -= h * d[i];
  }
  const auto gp = helfrich_gradient(from_dofs(xp, c.grid(), 1.0), eps);
  const auto gm = helfrich_gradient(from_dofs(xm, c.grid(), 1.0), eps);
  std::vector<double> diff(x.size());
  for (std::size_t i = 0; i < x.size(); ++i) diff[i] = (gp[i] - gm[i]) / (2.0 * h) - hd[i];
  EXPECT_LT(norm(diff), 1e-5 * norm(hd));
}

TEST(IdentityCheck, Cylinder) {
  for (double a : {0.5, 1.0, 2.0}) {
    const auto t = willmore_identity_check(cylinder_profile(a, Grid::uniform(16)), -1.0, 1.0);
    for (double v : t) EXPECT_NEAR(v, 2.0 / a, 1e-12);
  }
}

TEST(IdentityCheck, CatenaryRearrangement) {
  const auto c = catenary_profile(1.0, Grid::uniform(64));
  const auto t = willmore_identity_check(c, -1.0, 1.0);
  EXPECT_NEAR(t[0], 0.0, 1e-8);
  const double boundary = 2.0 * std::tanh(1.0);  // [u'/sqrt(1+u'^2)] from -1 to 1
  EXPECT_NEAR(t[2] + 4.0 * boundary, 4.0 * boundary, 1e-6);
  EXPECT_NEAR(t[1], 0.0, 1e-6);
}

TEST(IdentityCheck, RandomCurvesAgree) {
  std::mt19937_64 rng(29);
  for (int k = 0; k < 20; ++k) {
    const auto c = random_admissible_curve(1.5, Grid::uniform(32), rng);
    const auto t = willmore_identity_check(c, -1.0, 1.0);
    EXPECT_LT(rel(t[1], t[0]), 1e-8);
    EXPECT_LT(rel(t[2], t[0]), 1e-8);
  }
}

TEST(IdentityCheck, RejectsBadInterval) { EXPECT_THROW(willmore_identity_check(cylinder_profile(1.0, Grid::uniform(4)), 0.5, 0.2), Error); }

TEST(Bounds, CylinderEqualityCase) {
  const auto b = bound_suite(cylinder_profile(1.0, Grid::uniform(16)), 0.25);
  ASSERT_TRUE(b.product.applicable);
  EXPECT_NEAR(b.product.lhs, b.product.rhs, 1e-11);
  EXPECT_TRUE(b.product.satisfied);
  ASSERT_TRUE(b.slope.applicable);
  EXPECT_EQ(b.slope.lhs, 0.0);
  EXPECT_NEAR(b.slope.rhs, pi / std::sqrt(16.0 * pi * pi - pi * pi), 1e-14);
  EXPECT_TRUE(b.all_satisfied());
}

TEST(Bounds, UnclampedCatenaryIsNotApplicable) {
  const auto b = bound_suite(catenary_profile(1.0, Grid::uniform(32)), 0.0);
  EXPECT_FALSE(b.slope.applicable);
  EXPECT_FALSE(b.product.applicable);
  EXPECT_NEAR(b.max_slope, std::sinh(1.0), 1e-12);
}

TEST(Bounds, HoldOnRandomCurves) {
  std::mt19937_64 rng(31);
  std::uniform_real_distribution<double> ua(0.3, 3.0), ue(0.0, 10.0);
  for (int k = 0; k < 100; ++k) {
    const auto c = random_admissible_curve(ua(rng), Grid::uniform(24), rng);
    const double eps = ue(rng);
    const auto b = bound_suite(c, eps);
    EXPECT_TRUE(b.all_satisfied()) << k;
    const auto e = helfrich_energy(c, eps);
    EXPECT_GE(e.area * e.willmore, 4.0 * pi * pi * (1.0 - 1e-9));
    if (e.willmore < 4.0 * pi) EXPECT_LE(b.max_slope, e.willmore / std::sqrt(16.0 * pi * pi - e.willmore * e.willmore) + 1e-9);
    if (e.helfrich * e.helfrich >= 16.0 * pi * pi * eps)
      EXPECT_LE(e.willmore, 0.5 * (e.helfrich + std::sqrt(e.helfrich * e.helfrich - 16.0 * pi * pi * eps)) + 1e-9);
  }
}

TEST(Bounds, HoldAlongMinimiserIterates) {
  SolverConfig cfg;
  cfg.grid = Grid::uniform(32);
  cfg.seed = SeedKind::ComparisonSurface;
  for (int cap : {1, 3, 10, 30}) {
    cfg.max_iterations = cap;
    const auto r = minimise(2.0, 0.5, cfg);
    EXPECT_TRUE(bound_suite(r.profile, 0.5).all_satisfied()) << cap;
  }
}

TEST(Comparison, UnitAlphaGluingPoint) {
  const auto s = build_comparison_surface(1.0, Grid::uniform(64));
  // independent bisection on x + cosh(x-1) sinh(x-1)
  double lo = 0.5, hi = 1.0;
  for (int i = 0; i < 200; ++i) {
    const double m = 0.5 * (lo + hi);
    (m + std::cosh(m - 1.0) * std::sinh(m - 1.0) < 0.0 ? lo : hi) = m;
  }
  EXPECT_NEAR(s.x0, lo, 1e-11);
  EXPECT_NEAR(s.x0, 0.535, 1e-3);
  EXPECT_NEAR(s.r, std::sqrt(s.x0 * s.x0 + std::pow(std::cosh(s.x0 - 1.0), 2)), 1e-14);
  EXPECT_LT(s.value_jump, 1e-12);
  EXPECT_LT(s.slope_jump, 1e-10);
}

TEST(Comparison, RadiusAndEnergyBounds) {
  for (double a : {0.3, 0.5, 1.0, 2.0, 4.0}) {
    const auto s = build_comparison_surface(a, Grid::uniform(64));
    EXPECT_GT(s.x0, 0.5);
    EXPECT_LT(s.x0, 1.0);
    EXPECT_LE(s.r, std::sqrt(1.0 + a * a));
    for (double e : {0.0, 0.1, 1.0, 5.0})
      EXPECT_LT(helfrich_energy(s.profile, e).helfrich, comparison_energy_bound(a, e)) << a << ' ' << e;
  }
}

TEST(Regime, Examples) {
  EXPECT_TRUE(classify_regime(1.0, 0.5).via_cylinder);
  const auto r = classify_regime(2.0, 1.0);
  EXPECT_TRUE(r.via_gluing);
  EXPECT_NEAR(solve_catenary_branches(2.0).eps_hat, 0.087, 0.003);
  EXPECT_TRUE(classify_regime(1.0, 0.25).on_cylinder_curve);
  EXPECT_FALSE(classify_regime(1.0, 0.3).on_cylinder_curve);
  EXPECT_FALSE(classify_regime(0.2, 0.1).via_cylinder);
  EXPECT_FALSE(classify_regime(1.0, 5.0).via_gluing);
  EXPECT_TRUE(classify_regime(1.0, 0.0).via_comparison);
  EXPECT_THROW(classify_regime(1.0, -1.0), Error);
}
