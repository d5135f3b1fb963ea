#include "cli.hpp"

#include <CLI11.hpp>

#include <filesystem>
#include <iostream>
#include <optional>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "geopath/error.hpp"
#include "geopath/evolve.hpp"
#include "geopath/harness.hpp"
#include "geopath/io.hpp"
#include "geopath/ionmodel.hpp"
#include "geopath/planner.hpp"

namespace geopath::cli {

int exit_code(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::Config:
      return 2;
    case ErrorKind::Io:
      return 3;
    case ErrorKind::InvalidArgument:
      return 10;
    case ErrorKind::DimensionMismatch:
      return 11;
    case ErrorKind::OpenCurve:
      return 12;
    case ErrorKind::Domain:
      return 13;
    case ErrorKind::SweepTooLarge:
      return 14;
    case ErrorKind::FrameNotOrthonormal:
      return 15;
    case ErrorKind::NonCyclicFrame:
      return 16;
    case ErrorKind::NonCyclic:
      return 17;
    case ErrorKind::UnitarityLost:
      return 18;
    case ErrorKind::ComplexEnvelope:
      return 19;
    case ErrorKind::CutoffTooSmall:
      return 20;
    case ErrorKind::DetuningTooSmall:
      return 21;
  }
  return 1;
}

namespace {

namespace fs = std::filesystem;

[[noreturn]] void config_error(const std::string& what) { throw Error(ErrorKind::Config, what); }

// ---- options -------------------------------------------------------------

struct PropagatorOpts {
  int n_steps = 4096;
  std::string method = "midpoint";

  PropagatorConfig config() const {
    PropagatorConfig c;
    c.n_steps = n_steps;
    c.method = method == "rk4" ? Method::RK4 : Method::MidpointExponential;
    return c;
  }
  Json echo() const { return {{"n_steps", n_steps}, {"method", method}}; }
};

struct SimulateOpts {
  std::string curve_path;
  std::optional<Json> curve_inline;
  std::string target = "z:pi/8";
  std::string kind = "one";
  PropagatorOpts prop;
  int schedule_samples = 0;
  int trajectory_stride = 0;
};

struct PlanOpts {
  std::string axis = "z";
  std::string gamma = "pi/8";
  std::vector<std::string> theta_mid{"pi/3"};
  double cap = 1.0;
  double min_fidelity = 1.0 - 1e-6;
  PropagatorOpts prop;
};

struct SweepOpts {
  PlanOpts plan;
  std::vector<double> amplitude{0.01, 0.05};
  std::vector<double> detuning{0.01, 0.05};
  int warps = 10;
  std::uint64_t seed = 12345;
};

struct IonOpts {
  double eta = 0.05;
  double omega = 1.0;
  std::vector<double> ratios{10.0, 20.0, 40.0};
  int n_max = 5;
  std::string area = "pi/4";
  std::string drive = "sine_squared";
  std::string qubits = "01";
  double steps_per_period = 50.0;
};

// ---- scenario files ------------------------------------------------------

class Reader {
 public:
  Reader(const Json& doc, std::set<std::string> allowed) : doc_(doc) {
    if (!doc.is_object()) config_error("scenario must be a JSON object");
    allowed.insert({"mode", "output"});
    for (const auto& [key, value] : doc.items()) {
      (void)value;
      if (!allowed.count(key)) config_error("unknown scenario key '" + key + "'");
    }
  }

  bool has(const char* key) const { return doc_.contains(key); }
  const Json& at(const char* key) const { return doc_.at(key); }

  void string(const char* key, std::string& out) const {
    if (!has(key)) return;
    if (!at(key).is_string()) config_error(std::string("'") + key + "' must be a string");
    out = at(key).get<std::string>();
  }
  // Angles may be numbers or tokens; both become tokens for parse_angle.
  void angle(const char* key, std::string& out) const {
    if (!has(key)) return;
    out = token(at(key), key);
  }
  void angles(const char* key, std::vector<std::string>& out) const {
    if (!has(key)) return;
    const Json& v = at(key);
    out.clear();
    if (!v.is_array()) {
      out.push_back(token(v, key));
      return;
    }
    for (const Json& x : v) out.push_back(token(x, key));
  }
  template <class T>
  void number(const char* key, T& out) const {
    if (!has(key)) return;
    const Json& v = at(key);
    if constexpr (std::is_integral_v<T>) {
      if (!v.is_number_integer()) config_error(std::string("'") + key + "' must be an integer");
    } else {
      if (!v.is_number()) config_error(std::string("'") + key + "' must be a number");
    }
    out = v.get<T>();
  }
  void numbers(const char* key, std::vector<double>& out) const {
    if (!has(key)) return;
    const Json& v = at(key);
    if (!v.is_array()) config_error(std::string("'") + key + "' must be an array of numbers");
    out.clear();
    for (const Json& x : v) {
      if (!x.is_number()) config_error(std::string("'") + key + "' must be an array of numbers");
      out.push_back(x.get<double>());
    }
  }
  void propagator(PropagatorOpts& p) const {
    if (!has("propagator")) return;
    Reader r(at("propagator"), {"n_steps", "method"});
    r.number("n_steps", p.n_steps);
    r.string("method", p.method);
  }

 private:
  static std::string token(const Json& v, const char* key) {
    if (v.is_string()) return v.get<std::string>();
    if (v.is_number()) return format_double(v.get<double>());
    config_error(std::string("'") + key + "' must be an angle (number or token like \"pi/8\")");
  }

  const Json& doc_;
};

void check_method(const std::string& m) {
  if (m != "midpoint" && m != "rk4") config_error("method must be 'midpoint' or 'rk4'");
}

void check_member(const std::string& value, const std::vector<std::string>& allowed,
                  const char* what) {
  for (const std::string& a : allowed) {
    if (a == value) return;
  }
  config_error(std::string("bad ") + what + " '" + value + "'");
}

// ---- pipelines -----------------------------------------------------------

struct Artifact {
  std::string name;
  std::string text;
};

struct Outcome {
  std::vector<Artifact> files;
  std::size_t primary = 0;
};

Json envelope(const char* mode, Json config) {
  Json doc;
  doc["tool"] = "geopath";
  doc["version"] = tool_version();
  doc["mode"] = mode;
  doc["config"] = std::move(config);
  return doc;
}

std::string dump(const Json& doc) { return doc.dump(2) + "\n"; }

GateKind gate_kind(const std::string& k) { return k == "two" ? GateKind::TwoQubit : GateKind::OneQubit; }

Outcome simulate(const SimulateOpts& o) {
  check_method(o.prop.method);
  check_member(o.kind, {"one", "two"}, "kind");
  const Json curve_doc = o.curve_inline ? *o.curve_inline : read_json_file(o.curve_path);
  const ParamCurve curve = curve_from_json(curve_doc);
  const GateSpec target = parse_target(o.target);
  const GateKind kind = gate_kind(o.kind);
  const PropagatorConfig cfg = o.prop.config();

  Json config{{"target", o.target}, {"kind", o.kind}, {"propagator", o.prop.echo()},
              {"schedule_samples", o.schedule_samples},
              {"trajectory_stride", o.trajectory_stride}};
  if (!o.curve_inline) config["curve_path"] = o.curve_path;
  config["curve"] = curve_to_json(curve);

  const EvolutionReport report = run_geometric_gate(curve, kind, target, cfg);
  Json doc = envelope("simulate", std::move(config));
  doc["report"] = report_to_json(report, target);

  Outcome out;
  out.files.push_back({"report.json", dump(doc)});
  if (o.schedule_samples > 0) {
    const HamiltonianSchedule s =
        kind == GateKind::TwoQubit ? twoqubit_hamiltonian(curve) : onequbit_hamiltonian(curve);
    out.files.push_back({"schedule.csv", schedule_csv(s, o.schedule_samples)});
  }
  if (o.trajectory_stride > 0) {
    out.files.push_back({"trajectory.csv", trajectory_csv(trajectory(curve, kind, cfg,
                                                                     o.trajectory_stride))});
  }
  return out;
}

GateSpec plan_spec(const PlanOpts& o) { return GateSpec(parse_axis(o.axis), parse_angle(o.gamma)); }

std::vector<double> theta_grid(const PlanOpts& o) {
  std::vector<double> out;
  for (const std::string& t : o.theta_mid) out.push_back(parse_angle(t));
  return out;
}

Json plan_echo(const PlanOpts& o) {
  return {{"axis", o.axis},   {"gamma", o.gamma},
          {"theta_mid", o.theta_mid}, {"cap", o.cap},
          {"min_fidelity", o.min_fidelity}, {"propagator", o.prop.echo()}};
}

Outcome plan(const PlanOpts& o) {
  check_method(o.prop.method);
  const GateSpec spec = plan_spec(o);
  const PlanComparison cmp = compare_plans(spec, theta_grid(o), o.cap, o.prop.config(),
                                           o.min_fidelity);
  Outcome out;
  out.files.push_back({"plans.csv", plans_csv(cmp)});
  Json doc = envelope("plan", plan_echo(o));
  Json rows = Json::array();
  for (std::size_t i = 0; i < cmp.rows.size(); ++i) {
    const PlanRow& row = cmp.rows[i];
    const std::string name = "curves/plan_" + std::to_string(i) + "_" + to_string(row.plan.family) +
                             ".json";
    Json j = plan_to_json(row.plan);
    j["curve_file"] = name;
    j["fidelity"] = row.report.fidelity;
    j["holonomy"] = row.report.phases_principal;
    j["pt_residual_max"] = row.report.pt_residual_max;
    rows.push_back(std::move(j));
    out.files.push_back({name, dump(curve_to_json(row.plan.curve))});
  }
  doc["plans"] = std::move(rows);
  doc["skipped"] = cmp.skipped;
  out.files.push_back({"plans.json", dump(doc)});
  return out;
}

Outcome sweep(const SweepOpts& o) {
  check_method(o.plan.prop.method);
  if (o.warps < 0) config_error("warps must be >= 0");
  const GateSpec spec = plan_spec(o.plan);
  PlanOptions popts;
  popts.amp_cap = o.plan.cap;
  std::vector<PathPlan> plans{plan_orange_slice(spec, popts)};
  std::vector<std::string> skipped;
  for (double th : theta_grid(o.plan)) {
    try {
      plans.push_back(plan_three_segment(spec, th, popts));
    } catch (const Error& e) {
      if (e.kind() != ErrorKind::SweepTooLarge && e.kind() != ErrorKind::InvalidArgument) throw;
      skipped.push_back("three_segment theta_mid=" + format_double(th) + ": " + e.what());
    }
  }
  plans.push_back(plan_min_circle(spec, popts));

  std::vector<ErrorModel> errors;
  for (double a : o.amplitude) errors.push_back(ErrorModel::amplitude(a));
  for (double d : o.detuning) errors.push_back(ErrorModel::detuning(d));
  const std::vector<RateProfile> warps = random_warps(o.seed, o.warps);
  for (std::size_t i = 0; i < warps.size(); ++i) {
    errors.push_back(ErrorModel::time_warp(warps[i], "warp" + std::to_string(i)));
  }
  const SweepTable table = fidelity_sweep(spec, plans, errors, o.plan.prop.config());

  Json config = plan_echo(o.plan);
  config.erase("min_fidelity");
  config["amplitude"] = o.amplitude;
  config["detuning"] = o.detuning;
  config["warps"] = o.warps;
  config["seed"] = o.seed;
  Json doc = envelope("sweep", std::move(config));
  doc["sanity_ok"] = table.sanity_ok;
  doc["skipped"] = skipped;
  Json spread = Json::object();
  for (const PathPlan& p : plans) {
    double lo = 1.0, hi = 0.0;
    for (const SweepRow& r : table.rows) {
      if (r.family == to_string(p.family) && (r.error_kind == "time_warp" || r.error_kind == "none")) {
        lo = std::min(lo, r.fidelity);
        hi = std::max(hi, r.fidelity);
      }
    }
    spread[to_string(p.family)] = hi - lo;
  }
  doc["time_warp_fidelity_spread"] = spread;

  Outcome out;
  out.files.push_back({"sweep.csv", sweep_csv(table)});
  out.files.push_back({"sweep.json", dump(doc)});
  return out;
}

Vector qubit_state(const std::string& bits) {
  check_member(bits, {"00", "01", "10", "11"}, "qubit state");
  return Vector::Unit(4, 2 * (bits[0] - '0') + (bits[1] - '0'));
}

Outcome ion_check(const IonOpts& o) {
  check_member(o.drive, {"constant", "sine_squared"}, "drive");
  if (o.ratios.empty()) config_error("ratios must be nonempty");
  ReductionConfig cfg;
  cfg.initial_qubits = qubit_state(o.qubits);
  cfg.steps_per_period = o.steps_per_period;
  const DriveShape shape = o.drive == "constant" ? DriveShape::Constant : DriveShape::SineSquared;
  const std::vector<ReductionRow> rows =
      reduction_sweep(o.eta, o.omega, o.ratios, o.n_max, parse_angle(o.area), shape, cfg);

  Json doc = envelope("ion-check", {{"eta", o.eta},
                                    {"omega", o.omega},
                                    {"ratios", o.ratios},
                                    {"n_max", o.n_max},
                                    {"area", o.area},
                                    {"drive", o.drive},
                                    {"qubits", o.qubits},
                                    {"steps_per_period", o.steps_per_period}});
  Json list = Json::array();
  std::vector<double> worst, final_inf;
  for (const ReductionRow& r : rows) {
    list.push_back({{"R", r.ratio},
                    {"subspace_fidelity", r.report.subspace_fidelity},
                    {"leakage", r.report.leakage},
                    {"phase_error", r.report.phase_error},
                    {"worst_infidelity", r.report.worst_infidelity},
                    {"cutoff_population", r.report.cutoff_population},
                    {"cutoff_change", r.report.cutoff_change},
                    {"n_steps", r.report.n_steps},
                    {"warnings", r.report.warnings}});
    worst.push_back(r.report.worst_infidelity);
    final_inf.push_back(1.0 - r.report.subspace_fidelity);
  }
  doc["rows"] = std::move(list);
  if (rows.size() >= 2) {
    doc["loglog_slope"] = {{"worst_infidelity", loglog_slope(o.ratios, worst)},
                           {"final_infidelity", loglog_slope(o.ratios, final_inf)}};
  }
  Outcome out;
  out.files.push_back({"ion.csv", ion_csv(rows)});
  out.files.push_back({"ion.json", dump(doc)});
  return out;
}

void emit(const Outcome& outcome, const std::string& dir, std::ostream& out) {
  if (dir.empty()) {
    out << outcome.files[outcome.primary].text;
    return;
  }
  Json written = Json::array();
  for (const Artifact& a : outcome.files) {
    const fs::path p = fs::path(dir) / a.name;
    std::error_code ec;
    fs::create_directories(p.parent_path(), ec);
    if (ec) throw Error(ErrorKind::Io, "cannot create '" + p.parent_path().string() + "'");
    write_text_file(p.string(), a.text);
    written.push_back(p.string());
  }
  out << Json{{"written", written}}.dump() << "\n";
}

// ---- scenario dispatch ---------------------------------------------------

Outcome run_scenario(const std::string& path, std::string& out_dir) {
  const Json doc = read_json_file(path);
  if (!doc.is_object() || !doc.contains("mode") || !doc.at("mode").is_string()) {
    config_error("scenario needs a string 'mode'");
  }
  const std::string mode = doc.at("mode").get<std::string>();
  if (out_dir.empty() && doc.contains("output")) {
    if (!doc.at("output").is_string()) config_error("'output' must be a string");
    out_dir = doc.at("output").get<std::string>();
  }
  if (mode == "simulate") {
    Reader r(doc, {"curve", "target", "kind", "propagator", "schedule_samples",
                   "trajectory_stride"});
    SimulateOpts o;
    if (!r.has("curve")) config_error("simulate scenario needs 'curve'");
    if (r.at("curve").is_string()) {
      fs::path p = r.at("curve").get<std::string>();
      if (p.is_relative()) p = fs::path(path).parent_path() / p;
      o.curve_path = p.string();
    } else {
      o.curve_inline = r.at("curve");
    }
    r.string("target", o.target);
    r.string("kind", o.kind);
    r.propagator(o.prop);
    r.number("schedule_samples", o.schedule_samples);
    r.number("trajectory_stride", o.trajectory_stride);
    return simulate(o);
  }
  const std::set<std::string> plan_keys{"axis", "gamma", "theta_mid", "cap", "propagator"};
  auto read_plan = [](const Reader& r, PlanOpts& o) {
    r.string("axis", o.axis);
    r.angle("gamma", o.gamma);
    r.angles("theta_mid", o.theta_mid);
    r.number("cap", o.cap);
    r.propagator(o.prop);
  };
  if (mode == "plan") {
    std::set<std::string> keys = plan_keys;
    keys.insert("min_fidelity");
    Reader r(doc, keys);
    PlanOpts o;
    read_plan(r, o);
    r.number("min_fidelity", o.min_fidelity);
    return plan(o);
  }
  if (mode == "sweep") {
    std::set<std::string> keys = plan_keys;
    keys.insert({"amplitude", "detuning", "warps", "seed"});
    Reader r(doc, keys);
    SweepOpts o;
    read_plan(r, o.plan);
    r.numbers("amplitude", o.amplitude);
    r.numbers("detuning", o.detuning);
    r.number("warps", o.warps);
    r.number("seed", o.seed);
    return sweep(o);
  }
  if (mode == "ion-check") {
    Reader r(doc, {"eta", "omega", "ratios", "n_max", "area", "drive", "qubits",
                   "steps_per_period"});
    IonOpts o;
    r.number("eta", o.eta);
    r.number("omega", o.omega);
    r.numbers("ratios", o.ratios);
    r.number("n_max", o.n_max);
    r.angle("area", o.area);
    r.string("drive", o.drive);
    r.string("qubits", o.qubits);
    r.number("steps_per_period", o.steps_per_period);
    return ion_check(o);
  }
  config_error("unknown mode '" + mode + "'");
}

void print_error(std::ostream& err, const char* kind, int code, const std::string& message) {
  err << Json{{"error", {{"kind", kind}, {"exit_code", code}, {"message", message}}}}.dump()
      << "\n";
}

void add_propagator(CLI::App* app, PropagatorOpts& p) {
  app->add_option("--steps", p.n_steps, "Propagator steps")->capture_default_str();
  app->add_option("--method", p.method, "midpoint | rk4")
      ->check(CLI::IsMember({"midpoint", "rk4"}))
      ->capture_default_str();
}

void add_plan(CLI::App* app, PlanOpts& o) {
  app->add_option("--axis", o.axis, "Gate axis: x, -y, z or a,b,c")->capture_default_str();
  app->add_option("--gamma", o.gamma, "Half rotation angle, e.g. pi/8")->capture_default_str();
  app->add_option("--theta-mid", o.theta_mid, "Three-segment turning latitudes (comma list)")
      ->delimiter(',')
      ->capture_default_str();
  app->add_option("--cap", o.cap, "Drive amplitude cap")->capture_default_str();
  add_propagator(app, o.prop);
}

}  // namespace

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Inverse-engineered geometric gates: simulate, plan, sweep and ion checks.",
               "geopath"};
  app.set_version_flag("--version", std::string(tool_version()));
  app.fallthrough();
  std::string scenario, out_dir;
  bool verbose = false;
  app.add_option("--scenario", scenario, "Scenario JSON with a 'mode' key and its settings");
  app.add_option("-o,--out", out_dir, "Output directory (default: main table to stdout)");
  app.add_flag("-v,--verbose", verbose, "Progress notes on stderr");

  SimulateOpts sim_o;
  CLI::App* sim = app.add_subcommand("simulate", "Synthesize and propagate a curve");
  sim->add_option("--curve", sim_o.curve_path, "Curve JSON file")->required();
  sim->add_option("--target", sim_o.target, "Target gate '<axis>:<gamma>'")->capture_default_str();
  sim->add_option("--kind", sim_o.kind, "one | two (exchange block)")
      ->check(CLI::IsMember({"one", "two"}))
      ->capture_default_str();
  sim->add_option("--schedule-samples", sim_o.schedule_samples, "Write schedule.csv with N rows")
      ->check(CLI::NonNegativeNumber);
  sim->add_option("--trajectory-stride", sim_o.trajectory_stride,
                  "Write trajectory.csv every N steps")
      ->check(CLI::NonNegativeNumber);
  add_propagator(sim, sim_o.prop);

  PlanOpts plan_o;
  CLI::App* pl = app.add_subcommand("plan", "Compare candidate paths for a target rotation");
  add_plan(pl, plan_o);
  pl->add_option("--min-fidelity", plan_o.min_fidelity, "Drop plans below this fidelity")
      ->capture_default_str();

  SweepOpts sweep_o;
  CLI::App* sw = app.add_subcommand("sweep", "Fidelity under control errors and time warps");
  add_plan(sw, sweep_o.plan);
  sw->add_option("--amplitude", sweep_o.amplitude, "Amplitude errors (comma list)")
      ->delimiter(',')
      ->capture_default_str();
  sw->add_option("--detuning", sweep_o.detuning, "Detuning offsets (comma list)")
      ->delimiter(',')
      ->capture_default_str();
  sw->add_option("--warps", sweep_o.warps, "Number of random time warps")->capture_default_str();
  sw->add_option("--seed", sweep_o.seed, "Warp seed")->capture_default_str();

  IonOpts ion_o;
  CLI::App* ion = app.add_subcommand("ion-check", "Full sideband model vs effective exchange");
  ion->add_option("--eta", ion_o.eta, "Lamb-Dicke parameter")->capture_default_str();
  ion->add_option("--omega", ion_o.omega, "Peak Rabi amplitude")->capture_default_str();
  ion->add_option("--ratios", ion_o.ratios, "R = delta / (eta omega) values (comma list)")
      ->delimiter(',')
      ->capture_default_str();
  ion->add_option("--n-max", ion_o.n_max, "Fock cutoff")->capture_default_str();
  ion->add_option("--area", ion_o.area, "Exchange area int Omega_eff dt")->capture_default_str();
  ion->add_option("--drive", ion_o.drive, "constant | sine_squared")
      ->check(CLI::IsMember({"constant", "sine_squared"}))
      ->capture_default_str();
  ion->add_option("--qubits", ion_o.qubits, "Initial qubit state 00 | 01 | 10 | 11")
      ->check(CLI::IsMember({"00", "01", "10", "11"}))
      ->capture_default_str();
  ion->add_option("--steps-per-period", ion_o.steps_per_period,
                  "Steps per sideband period 2 pi / delta")
      ->capture_default_str();

  app.require_subcommand(0, 1);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    if (e.get_exit_code() == static_cast<int>(CLI::ExitCodes::Success)) {
      return app.exit(e, out, err);
    }
    print_error(err, to_string(ErrorKind::Config), exit_code(ErrorKind::Config), e.what());
    return exit_code(ErrorKind::Config);
  }

  try {
    Outcome outcome;
    const bool sub = sim->parsed() || pl->parsed() || sw->parsed() || ion->parsed();
    if (!scenario.empty() && sub) config_error("--scenario cannot be combined with a subcommand");
    if (verbose) err << "geopath " << tool_version() << "\n";
    if (!scenario.empty()) {
      if (verbose) err << "scenario " << scenario << "\n";
      outcome = run_scenario(scenario, out_dir);
    } else if (sim->parsed()) {
      outcome = simulate(sim_o);
    } else if (pl->parsed()) {
      outcome = plan(plan_o);
    } else if (sw->parsed()) {
      outcome = sweep(sweep_o);
    } else if (ion->parsed()) {
      outcome = ion_check(ion_o);
    } else {
      config_error("expected a subcommand (simulate, plan, sweep, ion-check) or --scenario");
    }
    if (verbose) err << "done, " << outcome.files.size() << " artifact(s)\n";
    emit(outcome, out_dir, out);
    return 0;
  } catch (const Error& e) {
    const int code = exit_code(e.kind());
    print_error(err, to_string(e.kind()), code, e.what());
    return code;
  } catch (const std::exception& e) {
    print_error(err, "internal", 1, e.what());
    return 1;
  }
}

}  // namespace geopath::cli
