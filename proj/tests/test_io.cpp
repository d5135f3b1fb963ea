#include <doctest.h>

#include <filesystem>
#include <fstream>

#include "geopath/error.hpp"
#include "geopath/io.hpp"

using namespace geopath;

namespace {

ErrorKind kind_of(const std::function<void()>& f) {
  try {
    f();
  } catch (const Error& e) {
    return e.kind();
  }
  FAIL("no geopath::Error thrown");
  return ErrorKind::Io;
}

std::string temp_file(const std::string& name, const std::string& text) {
  const auto p = std::filesystem::temp_directory_path() / ("geopath_io_" + name);
  std::ofstream(p) << text;
  return p.string();
}

std::string first_line(const std::string& s) { return s.substr(0, s.find('\n')); }

}  // namespace

TEST_SUITE("io") {
  TEST_CASE("angle tokens are exact rational multiples of pi") {
    CHECK(parse_angle("pi/8") == kPi / 8);
    CHECK(parse_angle(" -3pi/4 ") == -3 * kPi / 4);
    CHECK(parse_angle("3*pi/4") == 3 * kPi / 4);
    CHECK(parse_angle("2pi") == 2 * kPi);
    CHECK(parse_angle("pi") == kPi);
    CHECK(parse_angle("+pi/2") == kPi / 2);
    CHECK(parse_angle("0.25") == 0.25);
    CHECK(parse_angle("1e-3") == 1e-3);
    for (const char* bad : {"", "pi/0", "abc", "pi/8x", "pi pi", "1/2", "nan"}) {
      CAPTURE(bad);
      CHECK(kind_of([bad] { parse_angle(bad); }) == ErrorKind::Config);
    }
    CHECK(angle_from_json(Json("pi/3")) == kPi / 3);
    CHECK(angle_from_json(Json(0.5)) == 0.5);
    CHECK(kind_of([] { angle_from_json(Json::array()); }) == ErrorKind::Config);
  }

  TEST_CASE("axes and targets") {
    CHECK(parse_axis("x") == Vec3::UnitX());
    CHECK(parse_axis("-y") == -Vec3::UnitY());
    CHECK((parse_axis("1,1,1") - Vec3(1, 1, 1).normalized()).norm() < 1e-16);
    CHECK(kind_of([] { parse_axis("0,0,0"); }) == ErrorKind::Config);
    CHECK(kind_of([] { parse_axis("q"); }) == ErrorKind::Config);
    CHECK(kind_of([] { parse_axis("1,2"); }) == ErrorKind::Config);
    const GateSpec t = parse_target("z:pi/8");
    CHECK(t.axis() == Vec3::UnitZ());
    CHECK(t.half_angle() == kPi / 8);
    CHECK(parse_target("1,0,0:-pi/4").half_angle() == -kPi / 4);
    CHECK(kind_of([] { parse_target("z"); }) == ErrorKind::Config);
    const auto list = parse_angle_list("pi/3,pi/2");
    REQUIRE(list.size() == 2);
    CHECK(list[1] == kPi / 2);
  }

  TEST_CASE("curve documents round-trip") {
    CustomPath p;
    p.s = {0.0, 0.5, 1.0};
    p.theta = {1.0, 1.2, 1.0};
    p.phi = {0.0, 1.0, 2.0};
    const ParamCurve c(
        {Segment(Meridian{0.0, 0.0, 1.0}, 0.2), Segment(LatitudeArc{1.0, 0.0, 0.0}, 0.1),
         Segment(p, 0.3), Segment(LatitudeArc{1.0, 2.0, 2.5}, 0.2),
         Segment(Meridian{2.5, 1.0, 0.0}, 0.2)},
        1.5, RateProfile::sine_series({0.2}).after(RateProfile::power(1.5)),
        Vec3(1, 0, 0));
    const Json doc = curve_to_json(c);
    const ParamCurve back = curve_from_json(doc);
    CHECK(curve_to_json(back) == doc);
    CHECK(solid_angle_phase(back) == solid_angle_phase(c));
    for (double t : {0.1, 0.6, 1.4}) CHECK((back.at(t).r - c.at(t).r).norm() == 0.0);
    // tilted circles and tokens
    const Json circ = Json::parse(R"({"segments": [{"kind": "tilted_circle", "axis": [0, 0, 1],
        "radius": "pi/4", "start_angle": 0, "sweep": "2pi", "fraction": 1}]})");
    const ParamCurve cc = curve_from_json(circ);
    CHECK(cc.tau() == 1.0);
    CHECK(curve_from_json(curve_to_json(cc)).segments().size() == 1);
  }

  TEST_CASE("malformed curve documents are config errors") {
    for (const char* text :
         {R"([])", R"({"tau": 1})", R"({"segments": []})",
          R"({"segments": [{"kind": "spiral", "fraction": 1}]})",
          R"({"segments": [{"kind": "meridian", "phi": 0, "theta_from": 0, "theta_to": 1}]})",
          R"({"segments": [{"kind": "meridian", "phi": "x", "theta_from": 0, "theta_to": 1, "fraction": 1}]})",
          R"({"tau": "1", "segments": [{"kind": "meridian", "phi": 0, "theta_from": 0, "theta_to": 1, "fraction": 1}]})"}) {
      CAPTURE(text);
      CHECK(kind_of([text] { curve_from_json(Json::parse(text)); }) == ErrorKind::Config);
    }
    // structurally fine, physically invalid: the component error passes through
    CHECK(kind_of([] {
            curve_from_json(Json::parse(
                R"({"segments": [{"kind": "meridian", "phi": 0, "theta_from": 0, "theta_to": 1, "fraction": 0.5}]})"));
          }) == ErrorKind::InvalidArgument);
  }

  TEST_CASE("files") {
    CHECK(kind_of([] { read_json_file(temp_file("empty.json", "")); }) == ErrorKind::Config);
    CHECK(kind_of([] { read_json_file(temp_file("blank.json", "  \n")); }) == ErrorKind::Config);
    CHECK(kind_of([] { read_json_file(temp_file("bad.json", "{oops")); }) == ErrorKind::Config);
    CHECK(kind_of([] { read_json_file("/nonexistent/geopath.json"); }) == ErrorKind::Io);
    CHECK(read_json_file(temp_file("ok.json", R"({"a": 1})"))["a"] == 1);
    CHECK(kind_of([] { write_text_file("/nonexistent/dir/x.txt", "x"); }) == ErrorKind::Io);
  }

  TEST_CASE("number formatting is fixed at 17 significant digits") {
    CHECK(format_double(0.1) == "0.10000000000000001");
    CHECK(format_double(1.0) == "1");
    CHECK(format_double(-2.5e-20) == "-2.4999999999999999e-20");
  }

  TEST_CASE("table headers") {
    const GateSpec spec(Vec3::UnitZ(), kPi / 8);
    PropagatorConfig cfg;
    cfg.n_steps = 1024;
    const PlanComparison cmp = compare_plans(spec, {kPi / 3}, 1.0, cfg, 0.0);
    CHECK(first_line(plans_csv(cmp)) ==
          "family,theta_mid,gamma,length_spherical,length_paramsum,time_times_cap,fidelity");
    const SweepTable t = fidelity_sweep(spec, {plan_orange_slice(spec)}, {}, cfg);
    CHECK(first_line(sweep_csv(t)).rfind("plan_family,gamma,axis,error_kind,magnitude", 0) == 0);
    CHECK(first_line(ion_csv({})).rfind("R,eta,n_max,subspace_fidelity,leakage,phase_error", 0) == 0);
    const std::string sched = schedule_csv(onequbit_hamiltonian(plan_orange_slice(spec).curve), 5);
    CHECK(first_line(sched) == "t,re_h00,re_h11,re_h01,im_h01,delta,re_omega,im_omega");
    CHECK(std::count(sched.begin(), sched.end(), '\n') == 6);
    CHECK(kind_of([&] { schedule_csv(onequbit_hamiltonian(plan_orange_slice(spec).curve), 1); }) ==
          ErrorKind::InvalidArgument);
  }

  TEST_CASE("report JSON carries the diagnostics") {
    const GateSpec spec(Vec3::UnitZ(), kPi / 8);
    const EvolutionReport r = run_geometric_gate(plan_orange_slice(spec).curve, GateKind::OneQubit, spec);
    const Json j = report_to_json(r, spec);
    for (const char* key : {"fidelity", "holonomy", "pt_residual_max", "cyclicity_defect",
                            "lengths", "pulse_areas", "final_unitary", "time_times_cap"}) {
      CAPTURE(key);
      CHECK(j.contains(key));
    }
    CHECK(j["final_unitary"].size() == 2);
    CHECK(j["lengths"]["note"].get<std::string>().find("paramsum") != std::string::npos);
  }
}
