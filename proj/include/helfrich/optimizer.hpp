#pragma once

// Limited-memory BFGS with a user-supplied initial inverse Hessian and
// backtracking (Armijo) line search. Objectives return +inf outside their
// feasible set; the line search treats that as a rejected step.

#include <Eigen/Dense>
#include <cmath>
#include <deque>
#include <functional>
#include <limits>
#include <optional>
#include <vector>

namespace helfrich {

struct LineSearchParams {
  double shrink = 0.5;
  double sufficient_decrease = 1e-4;
  int max_backtracks = 60;
};

struct OptimizerOptions {
  int max_iterations = 5000;
  double gradient_tolerance = 1e-10;
  LineSearchParams line_search;
  int memory = 12;
  /// Stop once `stall_window` accepted steps lower the energy by less than
  /// `stall_tolerance` relative in total.
  int stall_window = 30;
  double stall_tolerance = 1e-13;
  /// Norm used for the stopping test; Euclidean when empty.
  std::function<double(const Eigen::VectorXd&)> norm;

  [[nodiscard]] double measure(const Eigen::VectorXd& g) const { return norm ? norm(g) : g.norm(); }
};

struct OptimizerResult {
  Eigen::VectorXd x;
  double energy = 0.0;
  double gradient_norm = 0.0;
  int iterations = 0;
  std::vector<double> history;
  bool converged = false;
};

/// f(x, g) returns the objective and writes the gradient into g (when non-null).
using Objective = std::function<double(const Eigen::VectorXd&, Eigen::VectorXd*)>;
/// Applies the initial inverse Hessian to a vector.
using InverseMetric = std::function<Eigen::VectorXd(const Eigen::VectorXd&)>;

inline OptimizerResult lbfgs(const Objective& f, const InverseMetric& h0, Eigen::VectorXd x,
                             const OptimizerOptions& opt) {
  OptimizerResult r;
  Eigen::VectorXd g(x.size());
  double fx = f(x, &g);
  r.history.push_back(fx);

  struct Pair {
    Eigen::VectorXd s, y;
    double rho;
  };
  std::deque<Pair> memory;
  double gamma = 1.0;

  auto direction = [&](const Eigen::VectorXd& grad) {
    Eigen::VectorXd q = grad;
    std::vector<double> a(memory.size());
    for (int i = static_cast<int>(memory.size()) - 1; i >= 0; --i) {
      a[i] = memory[i].rho * memory[i].s.dot(q);
      q -= a[i] * memory[i].y;
    }
    Eigen::VectorXd z = gamma * h0(q);
    for (std::size_t i = 0; i < memory.size(); ++i) {
      const double b = memory[i].rho * memory[i].y.dot(z);
      z += (a[i] - b) * memory[i].s;
    }
    return Eigen::VectorXd(-z);
  };

  Eigen::VectorXd g_new(x.size());
  for (r.iterations = 0; r.iterations < opt.max_iterations; ++r.iterations) {
    if (opt.measure(g) <= opt.gradient_tolerance) break;
    Eigen::VectorXd d = direction(g);
    double slope = g.dot(d);
    if (!(slope < 0.0)) {
      memory.clear();
      gamma = 1.0;
      d = -h0(g);
      slope = g.dot(d);
    }
    double t = 1.0;
    bool accepted = false;
    Eigen::VectorXd x_new;
    double f_new = 0.0;
    for (int k = 0; k <= opt.line_search.max_backtracks; ++k, t *= opt.line_search.shrink) {
      x_new = x + t * d;
      f_new = f(x_new, &g_new);
      if (!std::isfinite(f_new)) continue;
      if (f_new <= fx + opt.line_search.sufficient_decrease * t * slope) {
        accepted = true;
        break;
      }
      // at round-off level the Armijo test is meaningless; accept any step
      // that does not raise the energy and shrinks the gradient
      if (f_new <= fx && opt.measure(g_new) < opt.measure(g)) {
        accepted = true;
        break;
      }
    }
    if (!accepted) break;

    Eigen::VectorXd s = x_new - x;
    Eigen::VectorXd y = g_new - g;
    const double sy = s.dot(y);
    if (sy > 1e-300) {
      memory.push_back({s, y, 1.0 / sy});
      if (static_cast<int>(memory.size()) > opt.memory) memory.pop_front();
      gamma = sy / y.dot(h0(y));
    }
    x = std::move(x_new);
    fx = f_new;
    g = g_new;
    r.history.push_back(fx);
    const auto n = r.history.size();
    if (n > static_cast<std::size_t>(opt.stall_window) &&
        r.history[n - 1 - opt.stall_window] - fx <= opt.stall_tolerance * std::max(1.0, std::abs(fx))) {
      ++r.iterations;
      break;
    }
  }
  r.x = std::move(x);
  r.energy = fx;
  r.gradient_norm = opt.measure(g);
  r.converged = r.gradient_norm <= opt.gradient_tolerance;
  return r;
}

/// Returns the Newton step -H^{-1} g at x, or nothing when H is not positive definite.
using NewtonStep = std::function<std::optional<Eigen::VectorXd>(const Eigen::VectorXd&, const Eigen::VectorXd&)>;

/// Newton iterations from r.x. Near a minimiser the energy stops resolving
/// progress, so a step is also accepted when it shrinks the gradient and
/// raises the energy by no more than `roundoff` relative.
inline void newton_polish(const Objective& f, const NewtonStep& newton, OptimizerResult& r,
                          const OptimizerOptions& opt, int max_steps = 50, double roundoff = 1e-13) {
  Eigen::VectorXd g(r.x.size()), g_new(r.x.size());
  double fx = f(r.x, &g);
  for (int step = 0; step < max_steps && opt.measure(g) > opt.gradient_tolerance; ++step) {
    const auto d = newton(r.x, g);
    if (!d) break;
    const double slope = g.dot(*d);
    if (!(slope < 0.0)) break;
    bool accepted = false;
    double t = 1.0;
    for (int k = 0; k <= opt.line_search.max_backtracks; ++k, t *= opt.line_search.shrink) {
      Eigen::VectorXd x_new = r.x + t * *d;
      const double f_new = f(x_new, &g_new);
      if (!std::isfinite(f_new)) continue;
      const bool armijo = f_new <= fx + opt.line_search.sufficient_decrease * t * slope;
      const bool flat = f_new <= fx + roundoff * std::max(1.0, std::abs(fx)) && opt.measure(g_new) < opt.measure(g);
      if (armijo || flat) {
        r.x = std::move(x_new);
        fx = f_new;
        g = g_new;
        r.history.push_back(fx);
        ++r.iterations;
        accepted = true;
        break;
      }
    }
    if (!accepted) break;
  }
  r.energy = fx;
  r.gradient_norm = opt.measure(g);
  r.converged = r.gradient_norm <= opt.gradient_tolerance;
}

}  // namespace helfrich
