#include <cstdlib>
#include <filesystem>
#include <iostream>
#include <numbers>
#include <string>
#include <thread>

#include <CLI11.hpp>

#include "cli_support.hpp"
#include "gkdv/verify/acceptance.hpp"

namespace fs = std::filesystem;
using namespace gkdv;
using namespace gkdv::cli;

namespace {

struct Options {
  std::string config;
  std::string out = ".";
  std::string mode;
  bool list = false;
};

fs::path prepare_out(const Options& o) {
  fs::path dir(o.out);
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec) throw InvalidArgument("cannot create output directory '" + o.out + "': " + ec.message());
  return dir;
}

Json error_json(const std::string& kind, const std::exception& e) {
  Json j;
  j["status"] = "error";
  j["kind"] = kind;
  j["message"] = e.what();
  return j;
}

int cmd_dispersion(const Options& o) {
  const Json cfg = load_json(o.config);
  const Section s(cfg, "dispersion", {"params", "k_min", "k_max", "count", "max_kh"});
  const auto params = parse_params(s.child("params", {"h", "g", "rho", "sigma"}));
  const double k0 = s.number("k_min", 0.0), k1 = s.number("k_max");
  const int count = s.integer("count", 101);
  const double max_kh = s.number("max_kh", 30.0);
  if (k0 < 0.0 || k1 < k0) throw InvalidArgument("k range must satisfy 0 <= k_min <= k_max");
  if (count < 1) throw InvalidArgument("count must be >= 1");
  const int rows = k1 == k0 ? 1 : count;
  Csv csv({"k", "omega2", "omega_model", "phase_v", "group_v"});
  for (int i = 0; i < rows; ++i) {
    const double k = rows == 1 ? k0 : k0 + (k1 - k0) * i / (rows - 1);
    const auto d = sample_dispersion(k, params, max_kh);
    csv.row({d.k, d.omega2, d.omega_model, d.phase_velocity, d.group_velocity});
  }
  write_file(prepare_out(o) / "dispersion.csv", csv.str());
  return ok;
}

Json residual_json(const ResidualReport& r) {
  Json j;
  j["equation"] = std::string(to_string(r.equation));
  j["delta"] = r.delta;
  j["x_max"] = r.x_max;
  j["sup"] = r.sup;
  j["l2"] = r.l2;
  j["scaled_sup"] = r.scaled_sup;
  j["scaled_l2"] = r.scaled_l2;
  j["truncated_scaled_sup"] = r.truncated_scaled_sup;
  j["tail_bound"] = r.tail_bound;
  j["evaluation_converged"] = r.evaluation_converged;
  j["verdict"] = r.pass ? "PASS" : "FAIL";
  return j;
}

int cmd_soliton(const Options& o) {
  const Json cfg = load_json(o.config);
  const Section s(cfg, "soliton", {"B", "h", "K", "mode", "depth", "X_max", "points", "residual"});
  const double B = s.number("B"), h = s.number("h");
  const int K = s.integer("K", 60);
  const auto mode = parse_mode(o.mode.empty() ? s.text("mode", "steady_derived") : o.mode);
  const auto depth = parse_depth(s.text("depth", "full"));
  const double x_max = s.number("X_max", 20.0 / B);
  const int points = s.integer("points", 401);
  if (points < 2 || x_max <= 0.0) throw InvalidArgument("profile needs points >= 2 and X_max > 0");
  ResidualOptions ropt;
  std::string equation = "auto";
  if (s.has("residual")) {
    const auto r = s.child("residual", {"equation", "delta_factor", "extent_factor", "points"});
    equation = r.text("equation", "auto");
    ropt.delta_factor = r.number("delta_factor", ropt.delta_factor);
    ropt.extent_factor = r.number("extent_factor", ropt.extent_factor);
    ropt.points = r.integer("points", ropt.points);
  }
  SteadyEquation which = depth == DepthModel::shallow ? SteadyEquation::kdv_steady : SteadyEquation::gkdv_steady;
  if (equation == "kdv_steady")
    which = SteadyEquation::kdv_steady;
  else if (equation == "gkdv_steady")
    which = SteadyEquation::gkdv_steady;
  else if (equation != "auto")
    throw InvalidArgument("residual.equation must be auto, kdv_steady or gkdv_steady");

  const fs::path dir = prepare_out(o);
  Json j;
  j["B"] = B;
  j["h"] = h;
  j["K"] = K;
  j["mode"] = std::string(to_string(mode));
  j["depth"] = std::string(to_string(depth));
  try {
    const auto sol = build_soliton(B, h, K, mode, depth);
    std::vector<double> X(static_cast<std::size_t>(points));
    for (int i = 0; i < points; ++i) X[static_cast<std::size_t>(i)] = -x_max + 2.0 * x_max * i / (points - 1);
    const auto prof = reconstruct_profile(sol.solution, X);
    const auto res = residual_check(sol.solution, which, ropt);
    Csv csv({"X", "eta"});
    for (const auto& p : prof) csv.row({p.X, p.eta});
    write_file(dir / "soliton_profile.csv", csv.str());
    j["status"] = "ok";
    j["A"] = sol.solution.A;
    j["a1"] = sol.matching.a1;
    j["a1_scaled"] = sol.matching.w;
    j["root_count"] = sol.matching.root_count;
    j["pade_spread"] = sol.matching.spread;
    j["radius"] = sol.radius.radius;
    j["radius_fit_rms"] = sol.radius.fit_rms;
    j["radius_geometric"] = sol.radius.geometric;
    j["peak"] = profile_at(sol.solution, 0.0);
    j["speed"] = -sol.solution.A;
    if (depth == DepthModel::shallow) j["koebe_max_deviation"] = koebe_diagnostic(sol.solution).max_deviation;
    j["residual"] = residual_json(res);
    write_file(dir / "soliton.json", to_text(j));
    return ok;
  } catch (const ResonanceError& e) {
    auto err = error_json("resonance", e);
    err["order"] = e.order();
    j.update(err);
    write_file(dir / "soliton.json", to_text(j));
    throw;
  } catch (const NoSmoothMatchingError& e) {
    j.update(error_json("no_smooth_matching", e));
    write_file(dir / "soliton.json", to_text(j));
    throw;
  } catch (const EvaluationError& e) {
    j.update(error_json("evaluation", e));
    write_file(dir / "soliton.json", to_text(j));
    throw;
  }
}

int cmd_evolve(const Options& o) {
  const Json cfg = load_json(o.config);
  const Section s(cfg, "evolve",
                  {"model", "params", "grid", "dt", "T", "initial", "filter", "nonlinear", "dealias", "max_kh",
                   "snapshots", "observe_every"});
  auto model = parse_model(s.text("model", "gkdv"));
  if (!model) throw InvalidArgument("model must be gkdv or kdv");
  const auto params = parse_params(s.child("params", {"h", "g", "rho", "sigma"}));
  const auto gs = s.child("grid", {"L", "N", "x0"});
  const int n = gs.integer("N");
  if (n < 1) throw InvalidArgument("grid.N must be positive");
  const PeriodicGrid grid(gs.number("L"), static_cast<std::size_t>(n), gs.number("x0", 0.0));
  IntegratorConfig ic;
  ic.dt = s.number("dt");
  ic.filter = s.optional_boolean("filter");
  ic.nonlinear = s.boolean("nonlinear", true);
  ic.dealias = s.number("dealias", ic.dealias);
  ic.max_kh = s.number("max_kh", ic.max_kh);
  const double T = s.number("T");
  EvolveOptions eo;
  eo.snapshot_times = s.numbers("snapshots");
  eo.observe_every = s.integer("observe_every", 0);

  const auto init = s.child("initial", {"type", "B", "K", "mode", "depth", "center", "filter", "modes"});
  const std::string type = init.text("type");
  std::optional<SeriesSolution> seed;
  SpectralField field = SpectralField::zeros(grid);
  std::vector<std::size_t> seeded_modes;
  if (type == "zero") {
  } else if (type == "soliton") {
    const auto mode = parse_mode(o.mode.empty() ? init.text("mode", "steady_derived") : o.mode);
    const auto depth = parse_depth(init.text("depth", *model == Model::kdv ? "shallow" : "full"));
    seed = build_soliton(init.number("B"), params.h(), init.integer("K", 60), mode, depth).solution;
    field = soliton_field(*seed, grid, init.number("center", 0.0), init.boolean("filter", *model == Model::gkdv));
  } else if (type == "modes") {
    if (!init.has("modes") || !init.raw("modes").is_array()) throw InvalidArgument("initial.modes must be an array");
    std::vector<Complex> c(grid.mode_count());
    int idx = 0;
    for (const auto& m : init.raw("modes")) {
      const Section ms(m, "initial.modes[" + std::to_string(idx++) + "]", {"j", "cos", "sin"});
      const int j = ms.integer("j");
      if (j < 0 || static_cast<std::size_t>(j) >= grid.nyquist()) throw InvalidArgument("mode index j out of range");
      // a cos(k (x - left)) + b sin(k (x - left)) has coefficient (a - i b)/2 for j > 0
      const double a = ms.number("cos", 0.0), b = ms.number("sin", 0.0);
      c[static_cast<std::size_t>(j)] += j == 0 ? Complex(a, 0.0) : Complex(0.5 * a, -0.5 * b);
      seeded_modes.push_back(static_cast<std::size_t>(j));
    }
    field = SpectralField::from_coeffs(grid, std::move(c));
  } else {
    throw InvalidArgument("initial.type must be zero, soliton or modes");
  }

  const fs::path dir = prepare_out(o);
  Json j;
  j["model"] = std::string(to_string(*model));
  j["T"] = T;
  try {
    const EvolutionState st(field, params, *model, ic);
    const auto run = evolve(st, T, eo);
    j["status"] = "ok";
    j["steps"] = run.steps;
    j["dt"] = run.dt;
    j["kmax_h"] = grid.kmax_h(params.h());
    j["mass_initial"] = run.observations.front().mass;
    j["mass_drift"] = run.mass_drift;
    j["energy_drift"] = run.energy_drift;
    j["peak_speed"] = run.speed;
    j["displacement"] = run.displacement;
    if (seed) {
      const double expected = *model == Model::kdv ? params.c0() * (1.0 - std::pow(seed->B * params.h(), 2) / 6.0)
                                                   : -seed->A * params.c0();
      j["expected_speed"] = expected;
      j["speed_rel_error"] = std::abs(run.speed / expected - 1.0);
      j["shape_error"] = shape_error(st.field(), run.final_state.field(), run.displacement);
    }
    if (!seeded_modes.empty() && !ic.nonlinear) {
      double worst = 0.0;
      for (std::size_t m : seeded_modes) {
        if (m == 0 || st.field().coeffs()[m] == Complex{}) continue;
        const double got = std::arg(run.final_state.field().coeffs()[m] / st.field().coeffs()[m]);
        const double want = -linear_frequency(*model, grid.wavenumber(m), params) * T;
        worst = std::max(worst, std::abs(std::remainder(got - want, 2.0 * std::numbers::pi)));
      }
      j["linear_phase_error"] = worst;
    }
    Json snaps = Json::array();
    for (std::size_t i = 0; i < run.snapshots.size(); ++i) {
      char name[32];
      std::snprintf(name, sizeof name, "snapshot_%03zu.csv", i);
      Csv csv({"x", "eta"});
      const auto& f = run.snapshots[i].field;
      for (std::size_t k = 0; k < f.size(); ++k) csv.row({grid.x(k), f[k]});
      write_file(dir / name, csv.str());
      Json e;
      e["file"] = name;
      e["t"] = run.snapshots[i].t;
      snaps.push_back(e);
    }
    j["snapshots"] = snaps;
    Csv obs({"t", "mass", "energy", "peak_x", "peak_value", "spectral_tail"});
    for (const auto& ob : run.observations) obs.row({ob.t, ob.mass, ob.energy, ob.peak_x, ob.peak_value, ob.spectral_tail});
    write_file(dir / "observations.csv", obs.str());
    write_file(dir / "evolve_summary.json", to_text(j));
    return ok;
  } catch (const BlowUpError& e) {
    auto err = error_json("blow_up", e);
    err["step"] = e.step();
    err["last_good_time"] = e.last_good_time();
    j.update(err);
    write_file(dir / "evolve_summary.json", to_text(j));
    throw;
  } catch (const StabilityError& e) {
    auto err = error_json("stability", e);
    err["last_good_time"] = e.last_good_time();
    j.update(err);
    write_file(dir / "evolve_summary.json", to_text(j));
    throw;
  }
}

verify::AcceptanceConfig parse_tolerances(const Section& t) {
  verify::AcceptanceConfig c;
  c.closed_form_tol = t.number("closed_form_tol", c.closed_form_tol);
  c.a1_tol = t.number("a1_tol", c.a1_tol);
  c.radius_tol = t.number("radius_tol", c.radius_tol);
  c.profile_tol = t.number("profile_tol", c.profile_tol);
  c.kdv_residual_tol = t.number("kdv_residual_tol", c.kdv_residual_tol);
  c.printed_residual_floor = t.number("printed_residual_floor", c.printed_residual_floor);
  c.printed_profile_must_satisfy_kdv = t.boolean("printed_profile_must_satisfy_kdv", c.printed_profile_must_satisfy_kdv);
  c.shape_r2_gap = t.number("shape_r2_gap", c.shape_r2_gap);
  c.half_width_tol = t.number("half_width_tol", c.half_width_tol);
  c.koebe_tol = t.number("koebe_tol", c.koebe_tol);
  c.acoustic_tol = t.number("acoustic_tol", c.acoustic_tol);
  c.capillary_tol = t.number("capillary_tol", c.capillary_tol);
  c.operator_tol = t.number("operator_tol", c.operator_tol);
  c.slope_tol = t.number("slope_tol", c.slope_tol);
  c.mass_tol = t.number("mass_tol", c.mass_tol);
  c.order_tol = t.number("order_tol", c.order_tol);
  c.phase_tol = t.number("phase_tol", c.phase_tol);
  c.kdv_shape_tol = t.number("kdv_shape_tol", c.kdv_shape_tol);
  c.kdv_speed_tol = t.number("kdv_speed_tol", c.kdv_speed_tol);
  c.gkdv_shape_tol = t.number("gkdv_shape_tol", c.gkdv_shape_tol);
  return c;
}

unsigned thread_count() {
  if (const char* env = std::getenv("GKDV_THREADS")) {
    char* end = nullptr;
    const long v = std::strtol(env, &end, 10);
    if (end == env || *end != '\0' || v < 1) throw InvalidArgument("GKDV_THREADS must be a positive integer");
    return static_cast<unsigned>(v);
  }
  return std::max(1u, std::thread::hardware_concurrency());
}

int cmd_verify(const Options& o) {
  if (o.list) {
    for (const auto& c : verify::criteria()) std::cout << c.id << ' ' << c.title << '\n';
    return ok;
  }
  verify::AcceptanceConfig cfg;
  std::vector<int> only;
  if (!o.config.empty()) {
    const Json j = load_json(o.config);
    const Section s(j, "verify", {"criteria", "tolerances"});
    if (s.has("tolerances"))
      cfg = parse_tolerances(s.child(
          "tolerances", {"closed_form_tol", "a1_tol", "radius_tol", "profile_tol", "kdv_residual_tol",
                         "printed_residual_floor", "printed_profile_must_satisfy_kdv", "shape_r2_gap",
                         "half_width_tol", "koebe_tol", "acoustic_tol", "capillary_tol", "operator_tol", "slope_tol",
                         "mass_tol", "order_tol", "phase_tol", "kdv_shape_tol", "kdv_speed_tol", "gkdv_shape_tol"}));
    for (double id : s.numbers("criteria")) {
      if (id != std::floor(id) || id < 1 || id > static_cast<double>(verify::criteria().size()))
        throw InvalidArgument("criteria entries must be ids 1.." + std::to_string(verify::criteria().size()));
      only.push_back(static_cast<int>(id));
    }
  }
  std::vector<verify::CriterionResult> results;
  if (only.empty()) {
    results = verify::run_all(cfg, thread_count());
  } else {
    for (int id : only) results.push_back(verify::run_criterion(id, cfg));
  }
  bool all = true;
  Json report;
  Json list = Json::array();
  for (const auto& r : results) {
    all = all && r.pass;
    std::cout << (r.pass ? "PASS" : "FAIL") << " [" << r.id << "] " << r.title << ": " << r.detail << '\n';
    Json e;
    e["id"] = r.id;
    e["title"] = r.title;
    e["verdict"] = r.pass ? "PASS" : "FAIL";
    e["detail"] = r.detail;
    Json m;
    for (const auto& x : r.metrics) m[x.name] = x.value;
    e["metrics"] = m;
    list.push_back(e);
  }
  report["status"] = all ? "PASS" : "FAIL";
  report["criteria"] = list;
  write_file(prepare_out(o) / "verify_report.json", to_text(report));
  return all ? ok : verify_failed;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Generalized KdV toolkit: dispersion, solitary waves, time evolution"};
  app.require_subcommand(1);
  Options o;
  auto add_common = [&o](CLI::App* sub, bool config_required) {
    auto* c = sub->add_option("--config", o.config, "JSON config file");
    if (config_required) c->required();
    sub->add_option("--out", o.out, "output directory")->capture_default_str();
  };
  auto* disp = app.add_subcommand("dispersion", "sweep the linear dispersion relation");
  add_common(disp, true);
  auto* sol = app.add_subcommand("soliton", "build a solitary wave from the coefficient recursion");
  add_common(sol, true);
  sol->add_option("--mode", o.mode, "paper_printed or steady_derived (overrides the config)");
  auto* evo = app.add_subcommand("evolve", "integrate gKdV or KdV in time");
  add_common(evo, true);
  evo->add_option("--mode", o.mode, "recursion mode for soliton initial data");
  auto* ver = app.add_subcommand("verify", "run the acceptance suite");
  add_common(ver, false);
  ver->add_flag("--list", o.list, "print the criteria without running them");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? ok : bad_input;
  }

  try {
    if (disp->parsed()) return cmd_dispersion(o);
    if (sol->parsed()) return cmd_soliton(o);
    if (evo->parsed()) return cmd_evolve(o);
    return cmd_verify(o);
  } catch (const ResonanceError& e) {
    std::cerr << "resonance: " << e.what() << '\n';
    return construction_failed;
  } catch (const NoSmoothMatchingError& e) {
    std::cerr << "no smooth matching: " << e.what() << '\n';
    return construction_failed;
  } catch (const EvaluationError& e) {
    std::cerr << "evaluation failed: " << e.what() << '\n';
    return construction_failed;
  } catch (const BlowUpError& e) {
    std::cerr << "blow-up: " << e.what() << " (last good t = " << num(e.last_good_time()) << ")\n";
    return runtime_failed;
  } catch (const StabilityError& e) {
    std::cerr << "unstable step: " << e.what() << " (last good t = " << num(e.last_good_time()) << ")\n";
    return runtime_failed;
  } catch (const Error& e) {
    std::cerr << "invalid input: " << e.what() << '\n';
    return bad_input;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return bad_input;
  }
}
