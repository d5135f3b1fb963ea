#include "geopath/io.hpp"

#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <regex>
#include <sstream>

#include "geopath/error.hpp"

#ifndef GEOPATH_VERSION
#define GEOPATH_VERSION "0.0.0"
#endif

namespace geopath {

const char* tool_version() { return GEOPATH_VERSION; }

namespace {

std::string trim(std::string_view s) {
  const auto b = s.find_first_not_of(" \t\r\n");
  if (b == std::string_view::npos) return {};
  const auto e = s.find_last_not_of(" \t\r\n");
  return std::string(s.substr(b, e - b + 1));
}

bool parse_number(const std::string& s, double& out) {
  if (s.empty()) return false;
  const char* first = s.data();
  if (*first == '+') ++first;
  const auto [ptr, ec] = std::from_chars(first, s.data() + s.size(), out);
  return ec == std::errc() && ptr == s.data() + s.size() && std::isfinite(out);
}

[[noreturn]] void config_error(const std::string& what) { throw Error(ErrorKind::Config, what); }

const Json& require_key(const Json& obj, const char* key) {
  if (!obj.is_object() || !obj.contains(key)) {
    config_error(std::string("missing key '") + key + "'");
  }
  return obj.at(key);
}

double number_at(const Json& obj, const char* key) {
  const Json& v = require_key(obj, key);
  if (!v.is_number()) config_error(std::string("'") + key + "' must be a number");
  return v.get<double>();
}

double angle_at(const Json& obj, const char* key) {
  try {
    return angle_from_json(require_key(obj, key));
  } catch (const Error& e) {
    config_error(std::string("'") + key + "': " + e.what());
  }
}

Vec3 vec3_from_json(const Json& v, const char* what) {
  if (!v.is_array() || v.size() != 3) config_error(std::string(what) + " must be a 3-vector");
  Vec3 out;
  for (int i = 0; i < 3; ++i) {
    if (!v[i].is_number()) config_error(std::string(what) + " entries must be numbers");
    out[i] = v[i].get<double>();
  }
  return out;
}

std::vector<double> angles_from_json(const Json& v, const char* what) {
  if (!v.is_array()) config_error(std::string(what) + " must be an array");
  std::vector<double> out;
  for (const Json& x : v) out.push_back(angle_from_json(x));
  return out;
}

Json vec3_to_json(const Vec3& v) { return Json::array({v.x(), v.y(), v.z()}); }

}  // namespace

double parse_angle(std::string_view token) {
  const std::string s = trim(token);
  static const std::regex pi_form(
      R"(^([+-])?\s*(\d+(?:\.\d*)?|\.\d+)?\s*\*?\s*pi\s*(?:/\s*(\d+(?:\.\d*)?))?$)");
  std::smatch m;
  if (std::regex_match(s, m, pi_form)) {
    double num = 1.0, den = 1.0;
    if (m[2].matched && !parse_number(m[2].str(), num)) config_error("bad angle '" + s + "'");
    if (m[3].matched && (!parse_number(m[3].str(), den) || den == 0.0)) {
      config_error("bad angle '" + s + "'");
    }
    const double sign = (m[1].matched && m[1].str() == "-") ? -1.0 : 1.0;
    return sign * (num * kPi / den);
  }
  double x = 0.0;
  if (!parse_number(s, x)) config_error("cannot parse angle '" + s + "'");
  return x;
}

double angle_from_json(const Json& value) {
  if (value.is_number()) return value.get<double>();
  if (value.is_string()) return parse_angle(value.get<std::string>());
  config_error("angle must be a number or a string token");
}

Vec3 parse_axis(std::string_view token) {
  std::string s = trim(token);
  double sign = 1.0;
  std::string name = s;
  if (!name.empty() && (name[0] == '-' || name[0] == '+')) {
    sign = name[0] == '-' ? -1.0 : 1.0;
    name = name.substr(1);
  }
  if (name == "x") return sign * Vec3::UnitX();
  if (name == "y") return sign * Vec3::UnitY();
  if (name == "z") return sign * Vec3::UnitZ();
  Vec3 v;
  std::stringstream ss(s);
  std::string part;
  int i = 0;
  while (std::getline(ss, part, ',')) {
    if (i >= 3 || !parse_number(trim(part), v[i])) config_error("bad axis '" + s + "'");
    ++i;
  }
  if (i != 3) config_error("bad axis '" + s + "'");
  const double n = v.norm();
  if (!(n > 0.0)) config_error("axis must be nonzero");
  return v / n;
}

GateSpec parse_target(std::string_view token) {
  const std::string s = trim(token);
  const auto colon = s.rfind(':');
  if (colon == std::string::npos) config_error("target must look like 'z:pi/8'");
  return GateSpec(parse_axis(s.substr(0, colon)), parse_angle(s.substr(colon + 1)));
}

std::vector<double> parse_angle_list(std::string_view token) {
  std::vector<double> out;
  std::stringstream ss{std::string(token)};
  std::string part;
  while (std::getline(ss, part, ',')) out.push_back(parse_angle(part));
  if (out.empty()) config_error("empty angle list");
  return out;
}

Json curve_to_json(const ParamCurve& curve) {
  Json doc;
  doc["tau"] = curve.tau();
  if (!curve.has_lab_chart()) doc["chart"] = {{"pole", vec3_to_json(curve.chart_pole())}};
  if (!curve.rate_profile().is_identity()) {
    Json stages = Json::array();
    for (const auto& st : curve.rate_profile().stages()) {
      if (st.kind == RateProfile::Stage::Kind::Power) {
        stages.push_back({{"kind", "power"}, {"exponent", st.exponent}});
      } else {
        stages.push_back({{"kind", "sine"}, {"coeffs", st.coeffs}});
      }
    }
    doc["rate_profile"] = {{"stages", stages}};
  }
  Json segs = Json::array();
  for (const Segment& seg : curve.segments()) {
    Json j;
    std::visit(
        [&j](const auto& s) {
          using T = std::decay_t<decltype(s)>;
          if constexpr (std::is_same_v<T, Meridian>) {
            j = {{"kind", "meridian"}, {"phi", s.phi}, {"theta_from", s.theta_from},
                 {"theta_to", s.theta_to}};
          } else if constexpr (std::is_same_v<T, LatitudeArc>) {
            j = {{"kind", "latitude_arc"}, {"theta", s.theta}, {"phi_from", s.phi_from},
                 {"phi_to", s.phi_to}};
          } else if constexpr (std::is_same_v<T, TiltedCircle>) {
            j = {{"kind", "tilted_circle"}, {"axis", vec3_to_json(s.axis)},
                 {"radius", s.radius}, {"start_angle", s.start_angle}, {"sweep", s.sweep}};
          } else {
            j = {{"kind", "custom"}, {"s", s.s}, {"theta", s.theta}, {"phi", s.phi}};
          }
        },
        seg.shape());
    j["fraction"] = seg.duration_fraction();
    segs.push_back(std::move(j));
  }
  doc["segments"] = std::move(segs);
  return doc;
}

ParamCurve curve_from_json(const Json& doc) {
  if (!doc.is_object()) config_error("curve document must be a JSON object");
  const double tau = doc.contains("tau") ? number_at(doc, "tau") : 1.0;
  const Json& segs = require_key(doc, "segments");
  if (!segs.is_array() || segs.empty()) config_error("'segments' must be a non-empty array");
  std::vector<Segment> segments;
  for (const Json& j : segs) {
    if (!j.is_object()) config_error("segment must be an object");
    const Json& kind_v = require_key(j, "kind");
    if (!kind_v.is_string()) config_error("segment kind must be a string");
    const std::string kind = kind_v.get<std::string>();
    const double fraction = number_at(j, "fraction");
    Segment::Shape shape;
    if (kind == "meridian") {
      shape = Meridian{angle_at(j, "phi"), angle_at(j, "theta_from"), angle_at(j, "theta_to")};
    } else if (kind == "latitude_arc") {
      shape = LatitudeArc{angle_at(j, "theta"), angle_at(j, "phi_from"), angle_at(j, "phi_to")};
    } else if (kind == "tilted_circle") {
      shape = TiltedCircle{vec3_from_json(require_key(j, "axis"), "axis"), angle_at(j, "radius"),
                           angle_at(j, "start_angle"), angle_at(j, "sweep")};
    } else if (kind == "custom") {
      CustomPath c;
      c.s = angles_from_json(require_key(j, "s"), "s");
      c.theta = angles_from_json(require_key(j, "theta"), "theta");
      c.phi = angles_from_json(require_key(j, "phi"), "phi");
      shape = std::move(c);
    } else {
      config_error("unknown segment kind '" + kind + "'");
    }
    segments.emplace_back(std::move(shape), fraction);
  }
  RateProfile rate;
  if (doc.contains("rate_profile")) {
    const Json& stages = require_key(doc.at("rate_profile"), "stages");
    if (!stages.is_array()) config_error("'stages' must be an array");
    std::vector<RateProfile::Stage> list;
    for (const Json& s : stages) {
      RateProfile::Stage st;
      const Json& k = require_key(s, "kind");
      if (k == "power") {
        st.kind = RateProfile::Stage::Kind::Power;
        st.exponent = number_at(s, "exponent");
      } else if (k == "sine") {
        st.kind = RateProfile::Stage::Kind::Sine;
        const Json& c = require_key(s, "coeffs");
        if (!c.is_array()) config_error("'coeffs' must be an array");
        for (const Json& a : c) {
          if (!a.is_number()) config_error("'coeffs' entries must be numbers");
          st.coeffs.push_back(a.get<double>());
        }
      } else {
        config_error("unknown rate stage kind");
      }
      list.push_back(std::move(st));
    }
    rate = RateProfile(std::move(list));
  }
  Vec3 pole = Vec3::UnitZ();
  if (doc.contains("chart")) pole = vec3_from_json(require_key(doc.at("chart"), "pole"), "pole");
  return ParamCurve(std::move(segments), tau, std::move(rate), pole);
}

Json read_json_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorKind::Io, "cannot open '" + path + "'");
  std::stringstream buf;
  buf << in.rdbuf();
  const std::string text = buf.str();
  if (trim(text).empty()) config_error("'" + path + "' is empty");
  try {
    return Json::parse(text);
  } catch (const Json::parse_error& e) {
    config_error("'" + path + "' is not valid JSON: " + e.what());
  }
}

void write_text_file(const std::string& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error(ErrorKind::Io, "cannot write '" + path + "'");
  out << text;
  if (!out) throw Error(ErrorKind::Io, "write to '" + path + "' failed");
}

std::string format_double(double x) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

Json matrix_to_json(const Matrix& m) {
  Json rows = Json::array();
  for (Eigen::Index i = 0; i < m.rows(); ++i) {
    Json row = Json::array();
    for (Eigen::Index j = 0; j < m.cols(); ++j) {
      row.push_back(Json::array({m(i, j).real(), m(i, j).imag()}));
    }
    rows.push_back(std::move(row));
  }
  return rows;
}

Json report_to_json(const EvolutionReport& r, const GateSpec& target) {
  Json j;
  j["kind"] = r.kind == GateKind::OneQubit ? "one_qubit" : "two_qubit";
  j["target"] = {{"axis", vec3_to_json(target.axis())}, {"half_angle", target.half_angle()}};
  j["final_unitary"] = matrix_to_json(r.final_unitary);
  j["holonomy"] = {{"continuous", r.phases_continuous},
                   {"principal", r.phases_principal},
                   {"winding", r.winding}};
  j["pt_residual_max"] = r.pt_residual_max;
  j["pt_grid_points"] = r.pt_grid_points;
  j["cyclicity_defect"] = r.cyclicity_defect;
  j["unitarity_defect"] = r.unitarity_defect;
  j["fidelity"] = r.fidelity;
  j["solid_angle"] = r.solid_angle;
  j["lengths"] = {{"spherical", r.length_spherical},
                  {"paramsum", r.length_paramsum},
                  {"note", r.length_note}};
  j["time_times_cap"] = r.time_times_cap;
  if (r.pulse_areas_real) {
    j["pulse_areas"] = r.pulse_areas;
  } else {
    j["pulse_areas"] = nullptr;
  }
  j["n_steps"] = r.n_steps;
  return j;
}

Json plan_to_json(const PathPlan& plan) {
  Json j;
  j["family"] = to_string(plan.family);
  if (plan.family == PlanFamily::ThreeSegment) j["theta_mid"] = plan.theta_mid;
  j["predicted_gamma"] = plan.predicted_gamma;
  j["lengths"] = {{"spherical", plan.length_spherical}, {"paramsum", plan.length_paramsum}};
  j["time_estimate"] = plan.time_estimate;
  j["amp_cap"] = plan.amp_cap;
  j["pulse_areas"] = plan.pulse_areas;
  j["envelope_areas"] = plan.envelope_areas;
  j["curve"] = curve_to_json(plan.curve);
  return j;
}

namespace {

class CsvWriter {
 public:
  explicit CsvWriter(const std::vector<std::string>& header) {
    for (std::size_t i = 0; i < header.size(); ++i) {
      out_ << (i ? "," : "") << header[i];
    }
    out_ << '\n';
  }
  CsvWriter& cell(double x) { return text(format_double(x)); }
  CsvWriter& cell(int x) { return text(std::to_string(x)); }
  CsvWriter& text(const std::string& s) {
    out_ << (first_ ? "" : ",") << s;
    first_ = false;
    return *this;
  }
  void end_row() {
    out_ << '\n';
    first_ = true;
  }
  std::string str() const { return out_.str(); }

 private:
  std::ostringstream out_;
  bool first_ = true;
};

std::string axis_text(const Vec3& a) {
  return format_double(a.x()) + " " + format_double(a.y()) + " " + format_double(a.z());
}

}  // namespace

std::string schedule_csv(const HamiltonianSchedule& schedule, int samples) {
  if (samples < 2) throw Error(ErrorKind::InvalidArgument, "schedule export needs >= 2 samples");
  const int d = schedule.dim();
  std::vector<std::string> header{"t"};
  for (int i = 0; i < d; ++i) header.push_back("re_h" + std::to_string(i) + std::to_string(i));
  for (int i = 0; i < d; ++i) {
    for (int k = i + 1; k < d; ++k) {
      const std::string ij = std::to_string(i) + std::to_string(k);
      header.push_back("re_h" + ij);
      header.push_back("im_h" + ij);
    }
  }
  const bool controls = schedule.has_controls();
  if (controls) {
    header.insert(header.end(), {"delta", "re_omega", "im_omega"});
  }
  CsvWriter w(header);
  for (int j = 0; j < samples; ++j) {
    const double t = j == samples - 1 ? schedule.tau() : schedule.tau() * j / (samples - 1);
    const Matrix h = schedule.at(t).matrix();
    w.cell(t);
    for (int i = 0; i < d; ++i) w.cell(h(i, i).real());
    for (int i = 0; i < d; ++i) {
      for (int k = i + 1; k < d; ++k) w.cell(h(i, k).real()).cell(h(i, k).imag());
    }
    if (controls) {
      const ControlSignals c = schedule.controls(t);
      w.cell(c.delta).cell(c.rabi.real()).cell(c.rabi.imag());
    }
    w.end_row();
  }
  return w.str();
}

std::string trajectory_csv(const std::vector<TrajectoryRow>& rows) {
  std::vector<std::string> header{"t"};
  const std::size_t nk = rows.empty() ? 0 : rows.front().states.size();
  const Eigen::Index dim = nk ? rows.front().states.front().size() : 0;
  for (std::size_t k = 0; k < nk; ++k) {
    for (Eigen::Index i = 0; i < dim; ++i) {
      const std::string tag = std::to_string(k) + "_" + std::to_string(i);
      header.push_back("re_psi" + tag);
      header.push_back("im_psi" + tag);
    }
    header.push_back("energy" + std::to_string(k));
  }
  CsvWriter w(header);
  for (const TrajectoryRow& r : rows) {
    w.cell(r.t);
    for (std::size_t k = 0; k < nk; ++k) {
      for (Eigen::Index i = 0; i < dim; ++i) w.cell(r.states[k][i].real()).cell(r.states[k][i].imag());
      w.cell(r.energies[k]);
    }
    w.end_row();
  }
  return w.str();
}

std::string plans_csv(const PlanComparison& cmp) {
  CsvWriter w({"family", "theta_mid", "gamma", "length_spherical", "length_paramsum",
               "time_times_cap", "fidelity"});
  for (const PlanRow& row : cmp.rows) {
    const PathPlan& p = row.plan;
    w.text(to_string(p.family));
    if (p.family == PlanFamily::ThreeSegment) {
      w.cell(p.theta_mid);
    } else {
      w.text("");
    }
    w.cell(p.predicted_gamma)
        .cell(p.length_spherical)
        .cell(p.length_paramsum)
        .cell(p.time_estimate * p.amp_cap)
        .cell(row.report.fidelity);
    w.end_row();
  }
  return w.str();
}

std::string sweep_csv(const SweepTable& table) {
  CsvWriter w({"plan_family", "gamma", "axis", "error_kind", "magnitude", "label", "fidelity"});
  for (const SweepRow& r : table.rows) {
    w.text(r.family).cell(r.gamma).text(axis_text(r.axis)).text(r.error_kind);
    w.cell(r.magnitude).text(r.label).cell(r.fidelity);
    w.end_row();
  }
  return w.str();
}

std::string ion_csv(const std::vector<ReductionRow>& rows) {
  CsvWriter w({"R", "eta", "n_max", "subspace_fidelity", "leakage", "phase_error",
               "worst_infidelity", "drive"});
  for (const ReductionRow& r : rows) {
    w.cell(r.ratio).cell(r.eta).cell(r.n_max).cell(r.report.subspace_fidelity);
    w.cell(r.report.leakage).cell(r.report.phase_error).cell(r.report.worst_infidelity);
    w.text(to_string(r.shape));
    w.end_row();
  }
  return w.str();
}

}  // namespace geopath
