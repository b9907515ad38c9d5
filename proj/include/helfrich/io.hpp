#pragma once

// JSON and CSV serialisation. Doubles are written with 17 significant digits
// so that every value reads back bit-identical.

#include <cmath>
#include <cstdint>
#include <cstdio>
#include <fstream>
#include <initializer_list>
#include <ostream>
#include <string>
#include <vector>

#include <json.hpp>

#include "helfrich/classical.hpp"
#include "helfrich/energetics.hpp"
#include "helfrich/error.hpp"
#include "helfrich/linearised.hpp"
#include "helfrich/minimiser.hpp"
#include "helfrich/profile.hpp"

namespace helfrich {

using json = nlohmann::json;

inline std::string format_double(double v) {
  if (v == 0.0) return "0";
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

/// Comma-separated row, LF terminated.
inline void write_csv_row(std::ostream& os, std::initializer_list<double> values) {
  bool first = true;
  for (double v : values) {
    if (!first) os << ',';
    os << format_double(v);
    first = false;
  }
  os << '\n';
}

// ---------------------------------------------------------------------------
// JSON
// ---------------------------------------------------------------------------

inline json to_json(const ProfileCurve& c) {
  const auto n = c.grid().nodes();
  return json{{"alpha", c.alpha()},
              {"quadrature_order", c.grid().quadrature_order()},
              {"nodes", std::vector<double>(n.begin(), n.end())},
              {"values", std::vector<double>(c.values().begin(), c.values().end())},
              {"derivatives", std::vector<double>(c.derivatives().begin(), c.derivatives().end())}};
}

inline ProfileCurve profile_from_json(const json& j) {
  try {
    const int order = j.value("quadrature_order", 5);
    Grid grid(j.at("nodes").get<std::vector<double>>(), order);
    return ProfileCurve(std::move(grid), j.at("values").get<std::vector<double>>(),
                        j.at("derivatives").get<std::vector<double>>());
  } catch (const json::exception& e) {
    fail(ErrorKind::InvalidArgument, std::string("malformed profile: ") + e.what());
  }
}

inline json to_json(const EnergyReport& r) {
  json j{{"area", r.area},
         {"willmore", r.willmore},
         {"helfrich", r.helfrich},
         {"epsilon", r.epsilon},
         {"product_bound_slack", r.product_bound_slack}};
  j["gradient_bound"] = std::isfinite(r.gradient_bound) ? json(r.gradient_bound) : json(nullptr);
  return j;
}

inline json to_json(const RegimeLabel& r) {
  return json{{"alpha", r.alpha},
              {"epsilon", r.epsilon},
              {"via_cylinder", r.via_cylinder},
              {"via_comparison", r.via_comparison},
              {"via_gluing", r.via_gluing},
              {"on_cylinder_curve", r.on_cylinder_curve}};
}

inline json to_json(const ConstantsTable& c) {
  return json{{"c0", c.c0},
              {"alpha0", c.alpha0},
              {"cm", c.cm},
              {"alpham", c.alpham},
              {"ac", c.ac},
              {"alphacrit", c.alphacrit},
              {"residuals", {{"c0", c.residuals.c0}, {"cm", c.residuals.cm}, {"ac", c.residuals.ac}}}};
}

inline json to_json(const BoundCheck& b) {
  if (!b.applicable) return json{{"applicable", false}};
  return json{{"applicable", true}, {"lhs", b.lhs}, {"rhs", b.rhs}, {"satisfied", b.satisfied}};
}

inline json to_json(const BoundReport& r) {
  return json{{"product", to_json(r.product)},
              {"slope", to_json(r.slope)},
              {"lower", to_json(r.lower)},
              {"upper", to_json(r.upper)},
              {"helfrich_floor", to_json(r.helfrich_floor)},
              {"willmore_cap", to_json(r.willmore_cap)},
              {"max_slope", r.max_slope},
              {"all_satisfied", r.all_satisfied()}};
}

inline json to_json(const SolveResult& r) {
  return json{{"profile", to_json(r.profile)},
              {"energy", to_json(r.energy)},
              {"gradient_norm", r.gradient_norm},
              {"el_residual", r.el_residual},
              {"first_integral_drift", r.first_integral_drift},
              {"first_integral_mean", r.first_integral_mean},
              {"iterations", r.iterations},
              {"energy_history", r.energy_history},
              {"gluing_moves_applied", r.gluing_moves_applied},
              {"converged", r.converged},
              {"seed_used", to_string(r.seed_used)}};
}

inline json to_json(const RcProfile& p, const RcVerdict& v) {
  return json{{"alpha", p.alpha},
              {"a_alpha", p.a_coeff},
              {"b_alpha", p.b_coeff},
              {"d_alpha", p.d_coeff},
              {"bvp_residual", p.bvp_residual},
              {"verdict", to_string(v.shape)},
              {"sign_changes", v.sign_changes}};
}

inline json to_json(const OscillationReport& r) {
  json ex = json::array();
  for (const auto& e : r.extrema) ex.push_back({{"x", e.x}, {"h", e.h}});
  json j{{"A", r.A}, {"B", r.B}, {"a", r.a}, {"extrema", ex}, {"abs_monotone", r.abs_monotone}};
  j["y_star"] = r.y_star ? json(*r.y_star) : json(nullptr);
  return j;
}

// ---------------------------------------------------------------------------
// CSV
// ---------------------------------------------------------------------------

/// x,u,du,H,K at the nodes mirrored onto [-1, 1].
inline void write_profile_csv(std::ostream& os, const ProfileCurve& c) {
  os << "x,u,du,H,K\n";
  const auto nodes = c.grid().nodes();
  std::vector<double> xs;
  for (auto it = nodes.rbegin(); it != nodes.rend(); ++it)
    if (*it > 0.0) xs.push_back(-*it);
  xs.insert(xs.end(), nodes.begin(), nodes.end());
  for (double x : xs) {
    const auto g = evaluate_geometry(c, x);
    write_csv_row(os, {x, g.u, g.du, g.H, g.K});
  }
}

inline void write_rc_csv(std::ostream& os, const RcProfile& p) {
  os << "x,rc,rc_prime\n";
  for (const auto& s : p.samples) write_csv_row(os, {s.x, s.rc, s.rc_prime});
}

inline void write_extrema_csv(std::ostream& os, const OscillationReport& r) {
  os << "x,h\n";
  for (const auto& e : r.extrema) write_csv_row(os, {e.x, e.h});
}

// ---------------------------------------------------------------------------
// Files and fingerprints
// ---------------------------------------------------------------------------

inline json read_json_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) fail(ErrorKind::InvalidArgument, "cannot open " + path);
  try {
    return json::parse(in);
  } catch (const json::exception& e) {
    fail(ErrorKind::InvalidArgument, path + ": " + e.what());
  }
}

inline void write_text_file(const std::string& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) fail(ErrorKind::InvalidArgument, "cannot write " + path);
  out << text;
  if (!out) fail(ErrorKind::InvalidArgument, "write failed for " + path);
}

inline std::uint64_t fnv1a(const std::string& s) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char ch : s) {
    h ^= ch;
    h *= 0x100000001b3ULL;
  }
  return h;
}

inline std::string constants_fingerprint(const ConstantsTable& c) {
  std::string s;
  for (double v : {c.c0, c.alpha0, c.cm, c.alpham, c.ac, c.alphacrit}) s += format_double(v) + ';';
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(fnv1a(s)));
  return buf;
}

}  // namespace helfrich
