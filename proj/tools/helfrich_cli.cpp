// Command-line front end: constants | solve | sweep | rc | oscillation | verify.
//
// Exit codes: 0 success, 1 domain error (JSON on stderr), 2 usage error.

#include <CLI11.hpp>

#include <algorithm>
#include <atomic>
#include <cstdint>
#include <filesystem>
#include <iostream>
#include <map>
#include <mutex>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include "helfrich/helfrich.hpp"

namespace fs = std::filesystem;
using namespace helfrich;

namespace {

constexpr const char* kVersion = "1.0.0";

struct Common {
  std::string out_dir = ".";
  std::string format = "json";
  int jobs = 1;
  std::string config;
};

/// Collects output files and writes manifest.json after everything else.
class Run {
 public:
  Run(const Common& common, const CLI::App* sub) : common_(common), sub_(sub) {
    fs::create_directories(common.out_dir);
  }

  std::string path(const std::string& name) const { return (fs::path(common_.out_dir) / name).string(); }

  void write(const std::string& name, const std::string& text) {
    write_to(path(name), text);
  }
  void write_to(const std::string& file, const std::string& text) {
    write_text_file(file, text);
    outputs_.push_back(file);
  }

  void finish() {
    json params = json::object();
    for (const CLI::Option* opt : sub_->get_options()) {
      const std::string name = opt->get_single_name();
      if (name.empty() || name == "help") continue;
      if (opt->count() > 0) {
        const auto& res = opt->results();
        params[name] = res.size() == 1 ? res.front() : json(res).dump();
      } else if (!opt->get_default_str().empty()) {
        params[name] = opt->get_default_str();
      }
    }
    json m{{"command", sub_->get_name()},
           {"parameters", params},
           {"artifact_version", kVersion},
           {"constants_fingerprint", constants_fingerprint(constants())},
           {"outputs", outputs_}};
    write_text_file(path("manifest.json"), m.dump(2) + "\n");
  }

 private:
  const Common& common_;
  const CLI::App* sub_;
  std::vector<std::string> outputs_;
};

void emit(const Common& common, const json& j) {
  if (common.format == "csv") {
    std::cout << "key,value\n";
    for (const auto& [k, v] : j.items())
      if (v.is_primitive()) std::cout << k << ',' << (v.is_number_float() ? format_double(v.get<double>()) : v.dump())
                                      << '\n';
  } else {
    std::cout << j.dump(2) << '\n';
  }
}

// ---------------------------------------------------------------------------

int run_constants(const Common& common, const CLI::App* sub) {
  Run run(common, sub);
  const json j = to_json(constants());
  run.write("constants.json", j.dump(2) + "\n");
  run.finish();
  emit(common, j);
  return 0;
}

struct SolveArgs {
  double alpha = 1.0;
  double epsilon = 0.0;
  int n = 64;
  double tol = 1e-10;
  int max_iterations = 20000;
  std::uint64_t seed = 0;
  double perturbation = 0.0;
  std::string seed_kind = "multistart";
  bool no_gluing = false;
  std::string profile_out;
};

SolverConfig make_config(const SolveArgs& a) {
  SolverConfig cfg;
  cfg.grid = Grid::uniform(a.n);
  cfg.gradient_tolerance = a.tol;
  cfg.max_iterations = a.max_iterations;
  cfg.random_seed = a.seed;
  cfg.perturbation = a.perturbation;
  cfg.seed = seed_kind_from_string(a.seed_kind);
  cfg.gluing_enabled = !a.no_gluing;
  return cfg;
}

int run_solve(const Common& common, const CLI::App* sub, const SolveArgs& a) {
  const auto r = minimise(a.alpha, a.epsilon, make_config(a));
  Run run(common, sub);
  json j = to_json(r);
  j["alpha"] = a.alpha;
  j["epsilon"] = a.epsilon;
  run.write("solve.json", j.dump(2) + "\n");
  std::ostringstream csv;
  write_profile_csv(csv, r.profile);
  run.write("profile.csv", csv.str());
  if (!a.profile_out.empty()) run.write_to(a.profile_out, to_json(r.profile).dump(2) + "\n");
  run.finish();
  emit(common, json{{"alpha", a.alpha},
                    {"epsilon", a.epsilon},
                    {"helfrich", r.energy.helfrich},
                    {"willmore", r.energy.willmore},
                    {"area", r.energy.area},
                    {"gradient_norm", r.gradient_norm},
                    {"el_residual", r.el_residual},
                    {"first_integral_drift", r.first_integral_drift},
                    {"iterations", r.iterations},
                    {"converged", r.converged}});
  if (!r.converged)
    fail(ErrorKind::DidNotConverge, "gradient norm " + format_double(r.gradient_norm) + " above tolerance");
  return 0;
}

struct SweepArgs {
  double alpha_min = 0.2, alpha_max = 3.0;
  int alpha_steps = 8;
  double epsilon_min = 0.0, epsilon_max = 2.0;
  int epsilon_steps = 8;
  int n = 32;
  bool no_solve = false;
};

std::vector<double> ladder(double lo, double hi, int steps) {
  if (steps < 1) fail(ErrorKind::InvalidArgument, "steps must be >= 1");
  if (steps == 1) return {lo};
  std::vector<double> v(steps);
  for (int i = 0; i < steps; ++i) v[i] = lo + (hi - lo) * i / (steps - 1);
  return v;
}

int run_sweep(const Common& common, const CLI::App* sub, const SweepArgs& a) {
  if (a.alpha_min <= 0.0 || a.alpha_max < a.alpha_min || a.epsilon_max < a.epsilon_min)
    throw CLI::ValidationError("sweep ranges", "need 0 < alpha-min <= alpha-max and epsilon-min <= epsilon-max");
  struct Task {
    double alpha, epsilon;
  };
  std::vector<Task> tasks;
  for (double al : ladder(a.alpha_min, a.alpha_max, a.alpha_steps))
    for (double ep : ladder(a.epsilon_min, a.epsilon_max, a.epsilon_steps)) tasks.push_back({al, ep});

  struct Row {
    double alpha, epsilon;
    std::string line;
  };
  std::vector<std::vector<Row>> per_job(std::max(1, common.jobs));
  std::atomic<std::size_t> next{0};
  SolverConfig cfg;
  cfg.grid = Grid::uniform(a.n);

  auto worker = [&](int job) {
    for (std::size_t i = next++; i < tasks.size(); i = next++) {
      const auto [al, ep] = tasks[i];
      const auto reg = classify_regime(al, ep);
      std::ostringstream os;
      os << format_double(al) << ',' << format_double(ep) << ',' << reg.via_cylinder << ',' << reg.via_comparison
         << ',' << reg.via_gluing << ',' << reg.on_cylinder_curve << ',' << format_double(cylinder_energy(al, ep));
      if (!a.no_solve) {
        try {
          const auto r = minimise(al, ep, cfg);
          os << ',' << format_double(r.energy.helfrich) << ',' << format_double(r.energy.willmore) << ','
             << format_double(r.energy.area) << ',' << r.converged;
        } catch (const Error&) {
          os << ",nan,nan,nan,0";
        }
      }
      per_job[job].push_back({al, ep, os.str()});
    }
  };
  std::vector<std::thread> threads;
  for (int j = 1; j < static_cast<int>(per_job.size()); ++j) threads.emplace_back(worker, j);
  worker(0);
  for (auto& t : threads) t.join();

  std::vector<Row> rows;
  for (auto& v : per_job) rows.insert(rows.end(), v.begin(), v.end());
  std::sort(rows.begin(), rows.end(),
            [](const Row& p, const Row& q) { return std::tie(p.alpha, p.epsilon) < std::tie(q.alpha, q.epsilon); });

  std::ostringstream csv;
  csv << "alpha,epsilon,via_cylinder,via_comparison,via_gluing,on_cylinder_curve,cylinder_energy";
  if (!a.no_solve) csv << ",helfrich,willmore,area,converged";
  csv << '\n';
  for (const auto& r : rows) csv << r.line << '\n';

  Run run(common, sub);
  run.write("sweep.csv", csv.str());
  run.finish();
  emit(common, json{{"rows", rows.size()}, {"file", run.path("sweep.csv")}});
  return 0;
}

int run_rc(const Common& common, const CLI::App* sub, double alpha, int samples) {
  const auto p = rc_profile(alpha, samples);
  const auto v = rc_monotonicity_verdict(alpha);
  Run run(common, sub);
  std::ostringstream csv;
  write_rc_csv(csv, p);
  run.write("rc.csv", csv.str());
  const json j = to_json(p, v);
  run.write("rc.json", j.dump(2) + "\n");
  run.finish();
  emit(common, j);
  return 0;
}

int run_oscillation(const Common& common, const CLI::App* sub, double A, double B, double a, double xmax) {
  auto r = oscillation_extrema(A, B, a, xmax);
  if (A != 0.0) r.y_star = crossing_point(B / A);
  Run run(common, sub);
  std::ostringstream csv;
  write_extrema_csv(csv, r);
  run.write("extrema.csv", csv.str());
  const json j = to_json(r);
  run.write("oscillation.json", j.dump(2) + "\n");
  run.finish();
  emit(common, json{{"A", A}, {"B", B}, {"a", a}, {"extrema", r.extrema.size()}, {"abs_monotone", r.abs_monotone}});
  return 0;
}

int run_verify(const Common& common, const CLI::App* sub, const std::string& input, double epsilon) {
  const json in = read_json_file(input);
  const auto curve = profile_from_json(in.contains("profile") ? in.at("profile") : in);
  const auto energy = helfrich_energy(curve, epsilon);
  const auto fi = first_integral(curve, epsilon);
  json j{{"input", input},
         {"epsilon", epsilon},
         {"energy", to_json(energy)},
         {"el_residual", el_residual(curve, epsilon)},
         {"first_integral_drift", fi.drift},
         {"first_integral_mean", fi.mean},
         {"bounds", to_json(bound_suite(curve, epsilon))}};
  Run run(common, sub);
  run.write("verify.json", j.dump(2) + "\n");
  run.finish();
  emit(common, json{{"helfrich", energy.helfrich},
                    {"willmore", energy.willmore},
                    {"area", energy.area},
                    {"el_residual", j["el_residual"]},
                    {"first_integral_drift", fi.drift},
                    {"bounds_satisfied", j["bounds"]["all_satisfied"]}});
  return 0;
}

// ---------------------------------------------------------------------------
// Config file: a JSON object whose keys are long option names. Its entries
// are spliced in right after the subcommand so explicit flags, which come
// later, take precedence.

std::vector<std::string> config_arguments(const std::string& path) {
  const json j = read_json_file(path);
  if (!j.is_object()) throw CLI::ValidationError("--config", "config file must hold a JSON object");
  std::vector<std::string> out;
  for (const auto& [key, value] : j.items()) {
    if (key == "command" || key == "config") continue;
    const std::string flag = "--" + key;
    if (value.is_boolean()) {
      if (value.get<bool>()) out.push_back(flag);
    } else if (value.is_string()) {
      out.insert(out.end(), {flag, value.get<std::string>()});
    } else if (value.is_number_float()) {
      out.insert(out.end(), {flag, format_double(value.get<double>())});
    } else if (value.is_number()) {
      out.insert(out.end(), {flag, value.dump()});
    } else {
      throw CLI::ValidationError("--config", "unsupported value for '" + key + "'");
    }
  }
  return out;
}

std::vector<std::string> expand_config(std::vector<std::string> args, const std::vector<std::string>& commands) {
  std::string path;
  for (std::size_t i = 0; i < args.size(); ++i) {
    if (args[i] == "--config" && i + 1 < args.size()) path = args[i + 1];
    if (args[i].rfind("--config=", 0) == 0) path = args[i].substr(9);
  }
  if (path.empty()) return args;
  auto it = std::find_first_of(args.begin(), args.end(), commands.begin(), commands.end());
  if (it == args.end()) return args;
  const auto extra = config_arguments(path);
  args.insert(it + 1, extra.begin(), extra.end());
  return args;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Axisymmetric Helfrich surfaces: minimisers, classical solutions and the linearised branch"};
  app.require_subcommand(1);
  app.fallthrough();
  app.option_defaults()->multi_option_policy(CLI::MultiOptionPolicy::TakeLast);

  Common common;
  app.add_option("--out-dir", common.out_dir, "Directory for output files")->capture_default_str();
  app.add_option("--format", common.format, "Format of the summary on standard output")
      ->check(CLI::IsMember({"json", "csv"}))
      ->capture_default_str();
  app.add_option("--jobs", common.jobs, "Worker threads for sweep")->check(CLI::PositiveNumber)->capture_default_str();
  app.add_option("--config", common.config, "JSON file with option values; flags override it");

  auto* c_constants = app.add_subcommand("constants", "Special constants of the catenary and linearised problems");

  SolveArgs sa;
  auto* c_solve = app.add_subcommand("solve", "Minimise the Helfrich energy for one (alpha, epsilon)");
  c_solve->add_option("--alpha", sa.alpha, "Boundary radius")->required()->check(CLI::PositiveNumber);
  c_solve->add_option("--epsilon", sa.epsilon, "Area weight")->required()->check(CLI::NonNegativeNumber);
  c_solve->add_option("--n", sa.n, "Elements on [0, 1]")->check(CLI::Range(5, 100000))->capture_default_str();
  c_solve->add_option("--tol", sa.tol, "Gradient tolerance")->check(CLI::PositiveNumber)->capture_default_str();
  c_solve->add_option("--max-iterations", sa.max_iterations)->check(CLI::PositiveNumber)->capture_default_str();
  c_solve->add_option("--seed", sa.seed, "Random seed for seed perturbations")->capture_default_str();
  c_solve->add_option("--perturbation", sa.perturbation, "Amplitude of a random smooth seed perturbation")
      ->check(CLI::NonNegativeNumber)
      ->capture_default_str();
  c_solve->add_option("--seed-kind", sa.seed_kind)
      ->check(CLI::IsMember({"cylinder", "catenary", "comparison", "multistart"}))
      ->capture_default_str();
  c_solve->add_flag("--no-gluing", sa.no_gluing, "Skip the catenary and cylinder repairs");
  c_solve->add_option("--profile-out", sa.profile_out, "Also write the profile JSON here");

  SweepArgs wa;
  auto* c_sweep = app.add_subcommand("sweep", "Regime flags and converged energies on an (alpha, epsilon) grid");
  c_sweep->add_option("--alpha-min", wa.alpha_min)->check(CLI::PositiveNumber)->capture_default_str();
  c_sweep->add_option("--alpha-max", wa.alpha_max)->check(CLI::PositiveNumber)->capture_default_str();
  c_sweep->add_option("--alpha-steps", wa.alpha_steps)->check(CLI::PositiveNumber)->capture_default_str();
  c_sweep->add_option("--epsilon-min", wa.epsilon_min)->check(CLI::NonNegativeNumber)->capture_default_str();
  c_sweep->add_option("--epsilon-max", wa.epsilon_max)->check(CLI::NonNegativeNumber)->capture_default_str();
  c_sweep->add_option("--epsilon-steps", wa.epsilon_steps)->check(CLI::PositiveNumber)->capture_default_str();
  c_sweep->add_option("--n", wa.n, "Elements on [0, 1]")->check(CLI::Range(5, 100000))->capture_default_str();
  c_sweep->add_flag("--no-solve", wa.no_solve, "Regime flags only");

  double rc_alpha = 1.0;
  int rc_samples = 201;
  auto* c_rc = app.add_subcommand("rc", "Rate of change of the branch at the Helfrich cylinder");
  c_rc->add_option("--alpha", rc_alpha)->required()->check(CLI::PositiveNumber);
  c_rc->add_option("--samples", rc_samples)->check(CLI::Range(2, 10000000))->capture_default_str();

  double oA = 1.0, oB = 1.0, oa = 1.0, oxmax = 10.0;
  auto* c_osc = app.add_subcommand("oscillation", "Extrema of A cosh(ax)cos(ax) - B sinh(ax)sin(ax)");
  c_osc->add_option("--A", oA)->required();
  c_osc->add_option("--B", oB)->required();
  c_osc->add_option("--a", oa)->required()->check(CLI::PositiveNumber);
  c_osc->add_option("--xmax", oxmax)->check(CLI::PositiveNumber)->capture_default_str();

  std::string v_input;
  double v_epsilon = 0.0;
  auto* c_verify = app.add_subcommand("verify", "Energies, validators and bounds for a stored profile");
  c_verify->add_option("--input", v_input, "Profile JSON or solve.json")->required();
  c_verify->add_option("--epsilon", v_epsilon)->required()->check(CLI::NonNegativeNumber);

  try {
    std::vector<std::string> args(argv + 1, argv + argc);
    args = expand_config(std::move(args), {"constants", "solve", "sweep", "rc", "oscillation", "verify"});
    std::reverse(args.begin(), args.end());
    app.parse(args);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 2;
  } catch (const Error& e) {
    std::cerr << json{{"error", to_string(e.kind())}, {"message", e.what()}}.dump() << '\n';
    return 2;
  }

  try {
    if (*c_constants) return run_constants(common, c_constants);
    if (*c_solve) return run_solve(common, c_solve, sa);
    if (*c_sweep) return run_sweep(common, c_sweep, wa);
    if (*c_rc) return run_rc(common, c_rc, rc_alpha, rc_samples);
    if (*c_osc) return run_oscillation(common, c_osc, oA, oB, oa, oxmax);
    if (*c_verify) return run_verify(common, c_verify, v_input, v_epsilon);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 2;
  } catch (const Error& e) {
    std::cerr << json{{"error", to_string(e.kind())}, {"message", e.what()}}.dump() << '\n';
    return 1;
  } catch (const std::exception& e) {
    std::cerr << json{{"error", "Internal"}, {"message", e.what()}}.dump() << '\n';
    return 1;
  }
  return 2;
}
