#pragma once

// Serialization: curve JSON, reports, CSV tables and angle tokens.
//
// Curve document:
//   {"tau": 1.0,
//    "chart": {"pole": [0, 0, 1]},                       (optional)
//    "rate_profile": {"stages": [{"kind": "power", "exponent": 2},
//                                {"kind": "sine", "coeffs": [0.3]}]},  (optional)
//    "segments": [
//      {"kind": "meridian", "phi": 0, "theta_from": 0, "theta_to": "pi", "fraction": 0.5},
//      {"kind": "latitude_arc", "theta": "pi", "phi_from": 0, "phi_to": "pi/8", "fraction": 0.001},
//      {"kind": "tilted_circle", "axis": [x, y, z], "radius": r, "start_angle": a,
//       "sweep": s, "fraction": f},
//      {"kind": "custom", "s": [...], "theta": [...], "phi": [...], "fraction": f}]}
// Angles are numbers or tokens accepted by parse_angle.

#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

#include "geopath/evolve.hpp"
#include "geopath/harness.hpp"
#include "geopath/ionmodel.hpp"
#include "geopath/paths.hpp"
#include "geopath/planner.hpp"
#include "geopath/qcore.hpp"
#include "geopath/synth.hpp"

namespace geopath {

using Json = nlohmann::json;

const char* tool_version();

/// Exact rational multiples of pi ("pi/8", "-3pi/4", "3*pi/4", "2pi", "pi")
/// or plain decimals ("0.25", "1e-3"). Throws Config on anything else.
double parse_angle(std::string_view token);
double angle_from_json(const Json& value);

/// "x", "-y", "z" or "a,b,c" (normalized). Throws Config.
Vec3 parse_axis(std::string_view token);
/// "<axis>:<half angle>", e.g. "z:pi/8" or "1,1,1:pi/4". Throws Config.
GateSpec parse_target(std::string_view token);

/// Comma-separated list of angle tokens.
std::vector<double> parse_angle_list(std::string_view token);

Json curve_to_json(const ParamCurve& curve);
/// Throws Config for a malformed document; component errors pass through.
ParamCurve curve_from_json(const Json& doc);

Json read_json_file(const std::string& path);
void write_text_file(const std::string& path, const std::string& text);

/// %.17g
std::string format_double(double x);

Json matrix_to_json(const Matrix& m);
Json report_to_json(const EvolutionReport& report, const GateSpec& target);
Json plan_to_json(const PathPlan& plan);

/// Sampled schedule: t, Re h_ii, Re/Im of the upper-triangle entries, and the
/// controls Delta, Re Omega, Im Omega when present.
std::string schedule_csv(const HamiltonianSchedule& schedule, int samples);
std::string trajectory_csv(const std::vector<TrajectoryRow>& rows);
std::string plans_csv(const PlanComparison& comparison);
std::string sweep_csv(const SweepTable& table);
std::string ion_csv(const std::vector<ReductionRow>& rows);

}  // namespace geopath
