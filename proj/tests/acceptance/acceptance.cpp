// Acceptance run: one PASS/FAIL line per criterion, nonzero exit if any fails.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <limits>
#include <numbers>
#include <random>
#include <string>
#include <vector>

#include "helfrich/helfrich.hpp"

using namespace helfrich;

namespace {

constexpr double pi = std::numbers::pi;
constexpr double kNoBudget = std::numeric_limits<double>::infinity();

struct Verdict {
  bool pass = true;
  std::string detail;
};

class Checker {
 public:
  void require(bool ok, const std::string& what) {
    if (!ok && pass_) first_failure_ = what;
    pass_ = pass_ && ok;
  }
  void note(const std::string& s) { notes_ += (notes_.empty() ? "" : "; ") + s; }
  Verdict verdict() const {
    return {pass_, pass_ ? notes_ : first_failure_ + (notes_.empty() ? "" : " | " + notes_)};
  }

 private:
  bool pass_ = true;
  std::string first_failure_;
  std::string notes_;
};

std::string num(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.4g", v);
  return buf;
}

double rel(double a, double b) { return std::abs(a - b) / std::abs(b); }

double sup_distance_to_constant(const ProfileCurve& c, double a) {
  double worst = 0.0;
  for (double v : c.values()) worst = std::max(worst, std::abs(v - a));
  return worst;
}

Verdict constants_criterion() {
  Checker k;
  const auto t = compute_constants();
  k.require(std::abs(t.c0 - 0.8336) <= 5e-4, "c0 = " + num(t.c0));
  k.require(std::abs(t.alpha0 - 1.5089) <= 5e-4, "alpha0 = " + num(t.alpha0));
  k.require(std::abs(t.alpham - 1.895) <= 2e-3, "alpham = " + num(t.alpham));
  k.require(std::abs(t.alphacrit - 0.18008) <= 5e-5, "alphacrit = " + num(t.alphacrit));
  k.note("c0=" + num(t.c0) + " alpha0=" + num(t.alpha0) + " alpham=" + num(t.alpham) +
         " alphacrit=" + num(t.alphacrit));
  return k.verdict();
}

Verdict cylinder_energy_criterion() {
  Checker k;
  std::mt19937_64 rng(101);
  std::uniform_real_distribution<double> ua(0.1, 5.0), ue(0.0, 10.0);
  double worst = 0.0;
  for (int i = 0; i < 20; ++i) {
    const double a = ua(rng), e = ue(rng);
    const double q = helfrich_energy(cylinder_profile(a, Grid::uniform(64)), e).helfrich;
    const double r = rel(q, pi / a + 4.0 * pi * a * e);
    worst = std::max(worst, r);
    k.require(r <= 1e-10, "alpha=" + num(a) + " eps=" + num(e) + " rel=" + num(r));
  }
  k.note("max rel error " + num(worst));
  return k.verdict();
}

Verdict catenary_area_criterion() {
  Checker k;
  double worst = 0.0;
  for (double c : {0.5, 1.0, 2.0, 5.0}) {
    const double exact = 2.0 * pi * c + pi * c * c * std::sinh(2.0 / c);
    const double r = rel(area(catenary_profile(c, Grid::uniform(64))), exact);
    worst = std::max(worst, r);
    k.require(r <= 1e-8, "c=" + num(c) + " rel=" + num(r));
  }
  const double a0 = constants().alpha0;
  for (int i = 0; i < 20; ++i) {
    const double a = a0 + 0.01 + (10.0 - a0 - 0.01) * (i + 1) / 20.0;
    const auto b = solve_catenary_branches(a);
    k.require(catenary_area(b.c1) < catenary_area(b.c2), "area ordering at alpha=" + num(a));
  }
  k.note("max rel area error " + num(worst) + "; area ordering on 20 alphas");
  return k.verdict();
}

Verdict rate_of_change_criterion() {
  Checker k;
  double worst = 0.0;
  for (int i = 0; i <= 60; ++i) {
    const double a = 0.2 * std::pow(50.0, i / 60.0);
    const double r = rc_bvp_residual(a) / (2.0 / a);
    worst = std::max(worst, r);
    k.require(r <= 1e-9, "residual at alpha=" + num(a) + " is " + num(r) + " x 2/alpha");
  }
  for (int i = 0; i < 20; ++i) {
    const double a = 0.05 + 0.15 * i / 20.0;
    k.require(rc_bvp_residual(a) <= 1e-6 * 2.0 / a, "residual at small alpha=" + num(a));
  }
  for (double a : {0.1, 0.17, 0.19, 0.5, 1.0, 2.0}) {
    const RateOfChange rc(a);
    bool negative = true;
    for (int i = 1; i <= 1000; ++i) negative = negative && rc(-1.0 + 2.0 * i / 1001.0) < 0.0;
    k.require(negative, "rc not negative at alpha=" + num(a));
  }
  for (double a : {0.19, 0.5, 1.0})
    k.require(rc_monotonicity_verdict(a).shape == RcShape::Monotone, "verdict at alpha=" + num(a));
  for (double a : {0.10, 0.17})
    k.require(rc_monotonicity_verdict(a).shape == RcShape::Oscillatory, "verdict at alpha=" + num(a));
  k.note("max scaled residual on [0.2,10] " + num(worst));
  return k.verdict();
}

Verdict determinant_criterion() {
  Checker k;
  double largest = -std::numeric_limits<double>::infinity();
  for (int i = 0; i < 1000; ++i) {
    const double b = 1e-3 * std::pow(2e4, i / 999.0);
    const double d = boundary_determinant(b);
    largest = std::max(largest, d);
    k.require(d < 0.0, "det >= 0 at beta=" + num(b));
  }
  k.note("largest value " + num(largest));
  return k.verdict();
}

Verdict cylinder_recovery_criterion() {
  Checker k;
  for (double a : {0.5, 1.0, 2.0}) {
    SolverConfig cfg;
    cfg.seed = SeedKind::Cylinder;
    cfg.perturbation = 1e-2;
    cfg.random_seed = 11;
    const auto r = minimise(a, 1.0 / (4.0 * a * a), cfg);
    const double d = sup_distance_to_constant(r.profile, a);
    k.require(r.converged, "no convergence at alpha=" + num(a));
    k.require(d <= 1e-6, "alpha=" + num(a) + " sup distance " + num(d));
    k.note("alpha=" + num(a) + ": " + num(d));
  }
  return k.verdict();
}

Verdict gluing_criterion() {
  Checker k;
  std::mt19937_64 rng(2718);
  int glued = 0, inserted = 0;
  double worst = -std::numeric_limits<double>::infinity();
  for (int i = 0; i < 100; ++i) {
    const auto u = random_admissible_curve(2.0, Grid::uniform(48), rng);
    const double e0 = helfrich_energy(u, 1.0).helfrich;
    const auto g = glue_catenary(u, 1.0);
    const double e1 = helfrich_energy(g.curve, 1.0).helfrich;
    const auto c = insert_cylinder(g.curve, 1.0);
    const double e2 = helfrich_energy(c.curve, 1.0).helfrich;
    glued += g.applied;
    inserted += c.applied;
    worst = std::max({worst, (e1 - e0) / e0, (e2 - e1) / e1});
    k.require(e1 <= e0 * (1.0 + 1e-9), "catenary gluing raised energy on curve " + std::to_string(i));
    k.require(e2 <= e1 * (1.0 + 1e-9), "cylinder insertion raised energy on curve " + std::to_string(i));
  }
  k.note("gluing applied " + std::to_string(glued) + ", insertion applied " + std::to_string(inserted) +
         ", largest relative change " + num(worst));
  return k.verdict();
}

Verdict sandwich_criterion() {
  Checker k;
  const auto va = LimitCatenary::for_alpha(2.0);
  for (double eps : {0.1, 1.0, 10.0}) {
    const auto r = minimise(2.0, eps, SolverConfig{});
    k.require(r.converged, "no convergence at eps=" + num(eps));
    const auto& u = r.profile;
    double violation = 0.0;
    for (int i = 0; i < u.grid().n_nodes(); ++i) {
      const double x = u.grid().node(i), v = u.values()[i], s = u.derivatives()[i];
      violation = std::max({violation, va.value(x) - v, v - 2.0});
      if (x > 0.0 && x < 1.0) violation = std::max({violation, -s, s - va.slope(x)});
    }
    k.require(violation <= 1e-6, "eps=" + num(eps) + " violation " + num(violation));
    k.note("eps=" + num(eps) + ": worst " + num(violation));
  }
  return k.verdict();
}

Verdict first_integral_criterion() {
  Checker k;
  for (auto [a, eps] : {std::pair{2.0, 1.0}, std::pair{2.0, 10.0}, std::pair{1.0, 0.5}}) {
    SolverConfig coarse;
    SolverConfig fine;
    fine.grid = Grid::uniform(2 * coarse.grid.n_elements());
    const auto r = minimise(a, eps, coarse);
    const auto s = minimise(a, eps, fine);
    const std::string at = "alpha=" + num(a) + " eps=" + num(eps);
    k.require(r.converged && s.converged, "no convergence at " + at);
    const double ratio = r.first_integral_drift / s.first_integral_drift;
    k.require(r.first_integral_drift <= 1e-3 * std::abs(r.first_integral_mean),
              at + " drift " + num(r.first_integral_drift) + " vs mean " + num(r.first_integral_mean));
    k.require(ratio >= 4.0, at + " refinement ratio " + num(ratio));
    k.note(at + ": drift/|mean| " + num(r.first_integral_drift / std::abs(r.first_integral_mean)) + ", ratio " +
           num(ratio));
  }
  return k.verdict();
}

Verdict catenoid_limit_criterion() {
  Checker k;
  const double eh = solve_catenary_branches(2.0).eps_hat;
  const auto rungs = continuation_epsilon(2.0, {eh, 1.0, 10.0, 100.0}, SolverConfig{});
  std::string gaps;
  for (std::size_t i = 0; i < rungs.size(); ++i) {
    k.require(rungs[i].result.has_value() && rungs[i].sup_gap.has_value(), "rung failed: " + rungs[i].error);
    if (!rungs[i].sup_gap) continue;
    gaps += (i ? ", " : "") + num(*rungs[i].sup_gap);
    if (i > 0 && rungs[i - 1].sup_gap)
      k.require(*rungs[i].sup_gap < *rungs[i - 1].sup_gap, "gap not decreasing at eps=" + num(rungs[i].epsilon));
  }
  if (rungs.size() == 4 && rungs[3].sup_gap)
    k.require(*rungs[3].sup_gap <= 0.05, "gap at eps=100 is " + num(*rungs[3].sup_gap) + " > 0.05");
  k.note("sup gaps " + gaps);
  return k.verdict();
}

Verdict branch_derivative_criterion() {
  Checker k;
  const double e0 = 0.25, d = 0.02;
  SolverConfig cfg;
  cfg.seed = SeedKind::Cylinder;
  const auto rungs = continuation_epsilon(1.0, {e0 - d, e0, e0 + d}, cfg);
  for (const auto& r : rungs) k.require(r.result.has_value(), "rung failed: " + r.error);
  if (!(rungs[0].result && rungs[2].result)) return k.verdict();
  const RateOfChange rc(1.0);
  double err = 0.0, scale = 0.0;
  for (int i = -900; i <= 900; ++i) {
    const double x = i / 1000.0;
    const double fd = (rungs[2].result->profile.jet(x).u - rungs[0].result->profile.jet(x).u) / (2.0 * d);
    err = std::max(err, std::abs(fd - rc(x)));
    scale = std::max(scale, std::abs(rc(x)));
  }
  k.require(err <= 0.1 * scale, "relative sup error " + num(err / scale));
  k.note("relative sup error " + num(err / scale));
  return k.verdict();
}

Verdict oscillation_criterion() {
  Checker k;
  std::mt19937_64 rng(4242);
  std::uniform_real_distribution<double> uc(-2.0, 2.0), ua(0.01, 5.0);
  for (int i = 0; i < 200; ++i) {
    const double A = uc(rng), B = uc(rng), a = ua(rng);
    k.require(oscillation_extrema(A, B, a, 3.0).abs_monotone,
              "|h| extrema not increasing at A=" + num(A) + " B=" + num(B) + " a=" + num(a));
  }
  std::uniform_real_distribution<double> um(0.01, 6.0);
  for (int i = 0; i < 50; ++i) {
    const double a = um(rng);
    const double A = std::sinh(a) * std::cos(a) + std::cosh(a) * std::sin(a);
    const double B = std::sinh(a) * std::cos(a) - std::cosh(a) * std::sin(a);
    const double h1 = oscillation_h(A, B, a, 1.0).h;
    bool below = true;
    for (int j = 0; j < 1000; ++j) below = below && oscillation_h(A, B, a, j / 1000.0).h < h1;
    k.require(below, "maximum not at the right end for a=" + num(a));
  }
  for (double a : {1.0, 2.0, 3.9}) {
    bool holds = true;
    for (int j = 1; j < 5000; ++j) holds = holds && sign_inequality(a, a * j / 5000.0);
    k.require(holds, "sign inequality fails for a=" + num(a));
  }
  for (double a : {4.0, 5.0}) {
    bool violated = false;
    for (int j = 1; j < 5000; ++j) violated = violated || !sign_inequality(a, a * j / 5000.0);
    k.require(violated, "no violation found for a=" + num(a));
  }
  std::uniform_real_distribution<double> ub(0.3, 3.0), ue(0.0, 10.0);
  int applicable = 0;
  for (int i = 0; i < 100; ++i) {
    const auto c = random_admissible_curve(ub(rng), Grid::uniform(32), rng);
    const auto b = bound_suite(c, ue(rng));
    applicable += b.slope.applicable;
    k.require(b.all_satisfied(), "energy bound violated on curve " + std::to_string(i));
  }
  k.note("slope bound applicable on " + std::to_string(applicable) + "/100 curves");
  return k.verdict();
}

struct Criterion {
  std::string name;
  double budget_seconds;
  std::function<Verdict()> run;
};

}  // namespace

int main() {
  const std::vector<Criterion> criteria = {
      {"constants", 1.0, constants_criterion},
      {"cylinder energies", 1.0, cylinder_energy_criterion},
      {"catenary areas", kNoBudget, catenary_area_criterion},
      {"rate of change", 5.0, rate_of_change_criterion},
      {"boundary determinant", 1.0, determinant_criterion},
      {"cylinder recovery", 60.0, cylinder_recovery_criterion},
      {"gluing monotonicity", 60.0, gluing_criterion},
      {"minimiser sandwich", 120.0, sandwich_criterion},
      {"first integral", kNoBudget, first_integral_criterion},
      {"catenoid limit", 300.0, catenoid_limit_criterion},
      {"branch derivative", 120.0, branch_derivative_criterion},
      {"oscillation suite", 30.0, oscillation_criterion},
  };
  int failures = 0;
  for (std::size_t i = 0; i < criteria.size(); ++i) {
    const auto& c = criteria[i];
    const auto start = std::chrono::steady_clock::now();
    Verdict v;
    try {
      v = c.run();
    } catch (const std::exception& e) {
      v = {false, std::string("exception: ") + e.what()};
    }
    const double seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    if (seconds > c.budget_seconds) {
      v.pass = false;
      v.detail += " | runtime " + num(seconds) + " s over budget " + num(c.budget_seconds) + " s";
    }
    failures += !v.pass;
    std::printf("%s %2zu %-22s %7.2fs  %s\n", v.pass ? "PASS" : "FAIL", i + 1, c.name.c_str(), seconds,
                v.detail.c_str());
    std::fflush(stdout);
  }
  std::printf("%d of %zu criteria passed\n", static_cast<int>(criteria.size()) - failures, criteria.size());
  return failures == 0 ? 0 : 1;
}
