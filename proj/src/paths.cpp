#include "geopath/paths.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <sstream>

#include "geopath/error.hpp"
#include "geopath/quadrature.hpp"

namespace geopath {

namespace {

constexpr double kThetaSlack = 1e-12;
constexpr double kFractionSumTol = 1e-9;
constexpr double kGuardOffset = 1e-6;

template <class... Ts>
struct Overloaded : Ts... {
  using Ts::operator()...;
};
template <class... Ts>
Overloaded(Ts...) -> Overloaded<Ts...>;

Vec3 sphere_point(double theta, double phi) {
  return Vec3(std::sin(theta) * std::cos(phi), std::sin(theta) * std::sin(phi),
              std::cos(theta));
}

bool theta_in_range(double theta) {
  return std::isfinite(theta) && theta >= -kThetaSlack && theta <= kPi + kThetaSlack;
}

void require(bool ok, const char* what) {
  if (!ok) throw Error(ErrorKind::InvalidArgument, what);
}

struct CirclePoint {
  Vec3 p;
  Vec3 dp;  // d/ds
};

CirclePoint circle_point(const TiltedCircle& c, const Mat3& basis, double s) {
  const double psi = c.start_angle + c.sweep * s;
  const Vec3 e1 = basis.col(0);
  const Vec3 e2 = basis.col(1);
  const double sr = std::sin(c.radius);
  CirclePoint out;
  out.p = std::cos(c.radius) * c.axis + sr * (std::cos(psi) * e1 + std::sin(psi) * e2);
  out.dp = c.sweep * sr * (-std::sin(psi) * e1 + std::cos(psi) * e2);
  return out;
}

// Chart derivatives of a point moving with velocity dp, away from the poles.
void chart_rates(const Vec3& p, const Vec3& dp, double& dtheta, double& dphi) {
  const double rho2 = p.x() * p.x() + p.y() * p.y();
  dtheta = -dp.z() / std::sqrt(rho2);
  dphi = (p.x() * dp.y() - p.y() * dp.x()) / rho2;
}

PathPoint circle_path_point(const TiltedCircle& c, double s) {
  const Mat3 basis = circle_basis(c.axis);
  const CirclePoint cp = circle_point(c, basis, s);
  PathPoint out;
  out.r = cp.p;
  out.dr = cp.dp;
  out.theta = std::acos(std::clamp(cp.p.z(), -1.0, 1.0));
  const double sin_theta = std::hypot(cp.p.x(), cp.p.y());
  if (sin_theta > kPoleGuard) {
    out.phi = std::atan2(cp.p.y(), cp.p.x());
    chart_rates(cp.p, cp.dp, out.dtheta, out.dphi);
    return out;
  }
  const double s_in = (s < 0.5) ? s + kGuardOffset : s - kGuardOffset;
  const CirclePoint near = circle_point(c, basis, s_in);
  if (std::hypot(near.p.x(), near.p.y()) > kPoleGuard) {
    out.phi = std::atan2(near.p.y(), near.p.x());
    chart_rates(near.p, near.dp, out.dtheta, out.dphi);
  }
  return out;
}

// Range [zmin, zmax] of the height along a circle arc.
std::pair<double, double> circle_z_range(const TiltedCircle& c) {
  const Mat3 basis = circle_basis(c.axis);
  const double a0 = std::cos(c.radius) * c.axis.z();
  const double bz1 = std::sin(c.radius) * basis(2, 0);
  const double bz2 = std::sin(c.radius) * basis(2, 1);
  const double amp = std::hypot(bz1, bz2);
  const double center = std::atan2(bz2, bz1);
  const double lo = std::min(c.start_angle, c.start_angle + c.sweep);
  const double hi = std::max(c.start_angle, c.start_angle + c.sweep);
  auto z_at = [&](double psi) { return a0 + amp * std::cos(psi - center); };
  auto hits = [&](double target) {
    if (hi - lo >= 2.0 * kPi) return true;
    const double k = std::ceil((lo - target) / (2.0 * kPi));
    return target + 2.0 * kPi * k <= hi;
  };
  double zmin = std::min(z_at(lo), z_at(hi));
  double zmax = std::max(z_at(lo), z_at(hi));
  if (hits(center + kPi)) zmin = a0 - amp;
  if (hits(center)) zmax = a0 + amp;
  return {zmin, zmax};
}

// Cubic Hermite interpolation with central-difference node slopes.
struct HermiteValue {
  double y;
  double dy;
};

double node_slope(const std::vector<double>& s, const std::vector<double>& y, std::size_t i) {
  const std::size_t n = s.size();
  if (n == 2) return (y[1] - y[0]) / (s[1] - s[0]);
  if (i == 0) return (y[1] - y[0]) / (s[1] - s[0]);
  if (i == n - 1) return (y[n - 1] - y[n - 2]) / (s[n - 1] - s[n - 2]);
  return (y[i + 1] - y[i - 1]) / (s[i + 1] - s[i - 1]);
}

HermiteValue hermite(const std::vector<double>& s, const std::vector<double>& y, double x) {
  const std::size_t n = s.size();
  std::size_t i = static_cast<std::size_t>(
      std::upper_bound(s.begin(), s.end(), x) - s.begin());
  i = std::clamp<std::size_t>(i == 0 ? 0 : i - 1, 0, n - 2);
  const double h = s[i + 1] - s[i];
  const double t = (x - s[i]) / h;
  const double m0 = node_slope(s, y, i);
  const double m1 = node_slope(s, y, i + 1);
  const double t2 = t * t;
  const double t3 = t2 * t;
  HermiteValue v;
  v.y = (2 * t3 - 3 * t2 + 1) * y[i] + (t3 - 2 * t2 + t) * h * m0 +
        (-2 * t3 + 3 * t2) * y[i + 1] + (t3 - t2) * h * m1;
  v.dy = ((6 * t2 - 6 * t) * y[i] + (-6 * t2 + 6 * t) * y[i + 1]) / h +
         (3 * t2 - 4 * t + 1) * m0 + (3 * t2 - 2 * t) * m1;
  return v;
}

PathPoint custom_path_point(const CustomPath& c, double s) {
  const HermiteValue th = hermite(c.s, c.theta, s);
  const HermiteValue ph = hermite(c.s, c.phi, s);
  PathPoint out;
  out.theta = std::clamp(th.y, 0.0, kPi);
  out.phi = ph.y;
  out.dtheta = th.dy;
  out.dphi = ph.dy;
  out.r = sphere_point(out.theta, out.phi);
  const double ct = std::cos(out.theta), st = std::sin(out.theta);
  const double cp = std::cos(out.phi), sp = std::sin(out.phi);
  out.dr = out.dtheta * Vec3(ct * cp, ct * sp, -st) + out.dphi * Vec3(-st * sp, st * cp, 0.0);
  return out;
}

QuadratureOptions segment_quadrature() {
  QuadratureOptions q;
  q.abs_tol = 1e-10;
  return q;
}

// Integrate over a custom path piece by piece (smooth within each piece).
double integrate_custom(const CustomPath& c, const std::function<double(double)>& f) {
  return integrate_piecewise(f, c.s, segment_quadrature());
}

}  // namespace

Mat3 circle_basis(const Vec3& axis) {
  Vec3 e1 = Vec3::UnitZ() - axis.z() * axis;
  if (e1.norm() < 1e-12) {
    e1 = Vec3::UnitX();
  } else {
    e1.normalize();
  }
  const Vec3 e2 = axis.cross(e1);
  Mat3 basis;
  basis.col(0) = e1;
  basis.col(1) = e2;
  basis.col(2) = axis;
  return basis;
}

Segment::Segment(Shape shape, double duration_fraction)
    : shape_(std::move(shape)), fraction_(duration_fraction) {
  require(std::isfinite(fraction_) && fraction_ > 0.0 && fraction_ <= 1.0,
          "segment duration fraction must lie in (0, 1]");
  std::visit(
      Overloaded{
          [](const Meridian& m) {
            require(std::isfinite(m.phi), "meridian phi must be finite");
            require(theta_in_range(m.theta_from) && theta_in_range(m.theta_to),
                    "meridian theta must lie in [0, pi]");
          },
          [](const LatitudeArc& a) {
            require(theta_in_range(a.theta), "latitude theta must lie in [0, pi]");
            require(std::isfinite(a.phi_from) && std::isfinite(a.phi_to),
                    "latitude phi must be finite");
          },
          [](const TiltedCircle& c) {
            require(c.axis.allFinite() && std::abs(c.axis.norm() - 1.0) <= 1e-12,
                    "circle axis must be a unit vector");
            require(std::isfinite(c.radius) && c.radius >= 0.0 && c.radius <= kPi,
                    "circle radius must lie in [0, pi]");
            require(std::isfinite(c.start_angle) && std::isfinite(c.sweep),
                    "circle angles must be finite");
          },
          [](const CustomPath& c) {
            require(c.s.size() >= 2 && c.s.size() == c.theta.size() &&
                        c.s.size() == c.phi.size(),
                    "custom path needs >= 2 samples of equal length");
            require(c.s.front() == 0.0 && c.s.back() == 1.0,
                    "custom path grid must run from 0 to 1");
            for (std::size_t i = 0; i < c.s.size(); ++i) {
              require(theta_in_range(c.theta[i]) && std::isfinite(c.phi[i]),
                      "custom path theta must lie in [0, pi]");
              if (i > 0) require(c.s[i] > c.s[i - 1], "custom path grid must increase");
            }
          },
      },
      shape_);
}

SegmentKind Segment::kind() const {
  return static_cast<SegmentKind>(shape_.index());
}

PathPoint Segment::at(double s) const {
  return std::visit(
      Overloaded{
          [s](const Meridian& m) {
            PathPoint p;
            p.theta = m.theta_from + (m.theta_to - m.theta_from) * s;
            p.phi = m.phi;
            p.dtheta = m.theta_to - m.theta_from;
            p.dphi = 0.0;
            p.r = sphere_point(p.theta, p.phi);
            p.dr = p.dtheta * Vec3(std::cos(p.theta) * std::cos(p.phi),
                                   std::cos(p.theta) * std::sin(p.phi), -std::sin(p.theta));
            return p;
          },
          [s](const LatitudeArc& a) {
            PathPoint p;
            p.theta = a.theta;
            p.phi = a.phi_from + (a.phi_to - a.phi_from) * s;
            p.dtheta = 0.0;
            p.dphi = a.phi_to - a.phi_from;
            p.r = sphere_point(p.theta, p.phi);
            p.dr = p.dphi * Vec3(-std::sin(p.theta) * std::sin(p.phi),
                                 std::sin(p.theta) * std::cos(p.phi), 0.0);
            return p;
          },
          [s](const TiltedCircle& c) { return circle_path_point(c, s); },
          [s](const CustomPath& c) { return custom_path_point(c, s); },
      },
      shape_);
}

Vec3 Segment::start_point() const { return at(0.0).r; }
Vec3 Segment::end_point() const { return at(1.0).r; }

bool Segment::is_pole_turn() const {
  const auto* arc = std::get_if<LatitudeArc>(&shape_);
  return arc != nullptr && std::abs(std::sin(arc->theta)) < 1e-12;
}

Segment Segment::reversed() const {
  Shape shape = std::visit(
      Overloaded{
          [](const Meridian& m) -> Shape { return Meridian{m.phi, m.theta_to, m.theta_from}; },
          [](const LatitudeArc& a) -> Shape {
            return LatitudeArc{a.theta, a.phi_to, a.phi_from};
          },
          [](const TiltedCircle& c) -> Shape {
            return TiltedCircle{c.axis, c.radius, c.start_angle + c.sweep, -c.sweep};
          },
          [](const CustomPath& c) -> Shape {
            CustomPath r;
            for (std::size_t i = c.s.size(); i-- > 0;) {
              r.s.push_back(1.0 - c.s[i]);
              r.theta.push_back(c.theta[i]);
              r.phi.push_back(c.phi[i]);
            }
            r.s.front() = 0.0;
            r.s.back() = 1.0;
            return r;
          },
      },
      shape_);
  return Segment(std::move(shape), fraction_);
}

Segment Segment::with_fraction(double fraction) const { return Segment(shape_, fraction); }

double Segment::solid_angle_contribution() const {
  return std::visit(
      Overloaded{
          [](const Meridian&) { return 0.0; },
          [](const LatitudeArc& a) {
            return 0.5 * (1.0 - std::cos(a.theta)) * (a.phi_to - a.phi_from);
          },
          [](const TiltedCircle& c) {
            const auto [zmin, zmax] = circle_z_range(c);
            if (zmin <= -1.0 + kPoleGuard) {
              // (1 - cos theta) dphi is singular at the south pole; a full circle
              // is integrated in its own chart instead.
              if (std::abs(std::abs(c.sweep) - 2.0 * kPi) <= 1e-12) {
                return 0.5 * (1.0 - std::cos(c.radius)) * c.sweep;
              }
              throw Error(ErrorKind::Domain,
                          "circle arc through the south pole has an ambiguous solid angle");
            }
            const Mat3 basis = circle_basis(c.axis);
            auto integrand = [&](double s) {
              const CirclePoint cp = circle_point(c, basis, s);
              return 0.5 * (cp.p.x() * cp.dp.y() - cp.p.y() * cp.dp.x()) / (1.0 + cp.p.z());
            };
            // Split into quarter turns so each panel sees a smooth integrand.
            const int pieces = std::max(1, static_cast<int>(std::ceil(std::abs(c.sweep) / (kPi / 2))));
            std::vector<double> pts(pieces + 1);
            for (int i = 0; i <= pieces; ++i) pts[i] = static_cast<double>(i) / pieces;
            return integrate_piecewise(integrand, pts, segment_quadrature());
          },
          [](const CustomPath& c) {
            return integrate_custom(c, [&](double s) {
              const PathPoint p = custom_path_point(c, s);
              return 0.5 * (1.0 - std::cos(p.theta)) * p.dphi;
            });
          },
      },
      shape_);
}

double Segment::spherical_length() const {
  return std::visit(
      Overloaded{
          [](const Meridian& m) { return std::abs(m.theta_to - m.theta_from); },
          [this](const LatitudeArc& a) {
            if (is_pole_turn()) return 0.0;
            return std::sin(a.theta) * std::abs(a.phi_to - a.phi_from);
          },
          [](const TiltedCircle& c) { return std::sin(c.radius) * std::abs(c.sweep); },
          [](const CustomPath& c) {
            return integrate_custom(c, [&](double s) {
              const PathPoint p = custom_path_point(c, s);
              const double st = std::sin(p.theta);
              return std::sqrt(p.dtheta * p.dtheta + st * st * p.dphi * p.dphi);
            });
          },
      },
      shape_);
}

double Segment::param_sum_length() const {
  return std::visit(
      Overloaded{
          [](const Meridian& m) { return std::abs(m.theta_to - m.theta_from); },
          [this](const LatitudeArc& a) {
            if (is_pole_turn()) return 0.0;
            return std::abs(a.phi_to - a.phi_from);
          },
          [](const TiltedCircle& c) {
            const Mat3 basis = circle_basis(c.axis);
            auto integrand = [&](double s) {
              const CirclePoint cp = circle_point(c, basis, s);
              if (std::hypot(cp.p.x(), cp.p.y()) <= kPoleGuard) return 0.0;
              double dtheta = 0.0, dphi = 0.0;
              chart_rates(cp.p, cp.dp, dtheta, dphi);
              return std::abs(dtheta) + std::abs(dphi);
            };
            const int pieces = std::max(1, static_cast<int>(std::ceil(std::abs(c.sweep) / (kPi / 2))));
            std::vector<double> pts(pieces + 1);
            for (int i = 0; i <= pieces; ++i) pts[i] = static_cast<double>(i) / pieces;
            return integrate_piecewise(integrand, pts, segment_quadrature());
          },
          [](const CustomPath& c) {
            return integrate_custom(c, [&](double s) {
              const PathPoint p = custom_path_point(c, s);
              return std::abs(p.dtheta) + std::abs(p.dphi);
            });
          },
      },
      shape_);
}

// ---------------------------------------------------------------------------
// RateProfile

RateProfile::RateProfile(std::vector<Stage> stages) : stages_(std::move(stages)) {
  for (const Stage& st : stages_) {
    if (st.kind == Stage::Kind::Power) {
      require(std::isfinite(st.exponent) && st.exponent >= 1.0,
              "power rate profile needs an exponent >= 1");
    } else {
      double total = 0.0;
      for (double a : st.coeffs) {
        require(std::isfinite(a), "sine rate profile coefficients must be finite");
        total += std::abs(a);
      }
      require(total < 1.0, "sine rate profile needs sum |a_k| < 1 to stay monotone");
    }
  }
}

RateProfile RateProfile::power(double exponent) {
  Stage st;
  st.kind = Stage::Kind::Power;
  st.exponent = exponent;
  return RateProfile({st});
}

RateProfile RateProfile::sine_series(std::vector<double> coeffs) {
  Stage st;
  st.kind = Stage::Kind::Sine;
  st.coeffs = std::move(coeffs);
  return RateProfile({st});
}

RateProfile RateProfile::after(const RateProfile& inner) const {
  std::vector<Stage> stages = inner.stages_;
  stages.insert(stages.end(), stages_.begin(), stages_.end());
  return RateProfile(std::move(stages));
}

namespace {

double stage_value(const RateProfile::Stage& st, double x) {
  if (st.kind == RateProfile::Stage::Kind::Power) return std::pow(x, st.exponent);
  double v = x;
  for (std::size_t k = 0; k < st.coeffs.size(); ++k) {
    const double w = kPi * static_cast<double>(k + 1);
    v += st.coeffs[k] * std::sin(w * x) / w;
  }
  return v;
}

double stage_derivative(const RateProfile::Stage& st, double x) {
  if (st.kind == RateProfile::Stage::Kind::Power) {
    return st.exponent * std::pow(x, st.exponent - 1.0);
  }
  double d = 1.0;
  for (std::size_t k = 0; k < st.coeffs.size(); ++k) {
    d += st.coeffs[k] * std::cos(kPi * static_cast<double>(k + 1) * x);
  }
  return d;
}

}  // namespace

double RateProfile::value(double u) const {
  double x = std::clamp(u, 0.0, 1.0);
  for (const Stage& st : stages_) x = std::clamp(stage_value(st, x), 0.0, 1.0);
  return x;
}

double RateProfile::derivative(double u) const {
  double x = std::clamp(u, 0.0, 1.0);
  double d = 1.0;
  for (const Stage& st : stages_) {
    d *= stage_derivative(st, x);
    x = std::clamp(stage_value(st, x), 0.0, 1.0);
  }
  return d;
}

double RateProfile::inverse(double s) const {
  if (stages_.empty()) return s;
  if (s <= 0.0) return 0.0;
  if (s >= 1.0) return 1.0;
  double lo = 0.0, hi = 1.0;
  for (int i = 0; i < 200 && hi - lo > 1e-16; ++i) {
    const double mid = 0.5 * (lo + hi);
    if (value(mid) < s) {
      lo = mid;
    } else {
      hi = mid;
    }
  }
  return 0.5 * (lo + hi);
}

// ---------------------------------------------------------------------------
// ParamCurve

Mat3 chart_rotation_for(const Vec3& pole) {
  const Vec3 z = Vec3::UnitZ();
  const Vec3 k = z.cross(pole);
  const double s = k.norm();
  const double c = std::clamp(z.dot(pole), -1.0, 1.0);
  if (s < 1e-15) {
    if (c > 0.0) return Mat3::Identity();
    return Eigen::AngleAxisd(kPi, Vec3::UnitX()).toRotationMatrix();
  }
  return Eigen::AngleAxisd(std::atan2(s, c), k / s).toRotationMatrix();
}

ParamCurve::ParamCurve(std::vector<Segment> segments, double tau, RateProfile rate,
                       Vec3 chart_pole)
    : segments_(std::move(segments)), tau_(tau), rate_(std::move(rate)), pole_(chart_pole) {
  require(!segments_.empty(), "curve needs at least one segment");
  require(std::isfinite(tau_) && tau_ > 0.0, "curve duration must be positive");
  require(pole_.allFinite() && std::abs(pole_.norm() - 1.0) <= 1e-12,
          "chart pole must be a unit vector");
  starts_.assign(segments_.size() + 1, 0.0);
  for (std::size_t i = 0; i < segments_.size(); ++i) {
    starts_[i + 1] = starts_[i] + segments_[i].duration_fraction();
  }
  if (std::abs(starts_.back() - 1.0) > kFractionSumTol) {
    std::ostringstream msg;
    msg << "segment duration fractions sum to " << starts_.back() << ", expected 1";
    throw Error(ErrorKind::InvalidArgument, msg.str());
  }
  starts_.back() = 1.0;
  for (std::size_t i = 0; i + 1 < segments_.size(); ++i) {
    const double gap = (segments_[i].end_point() - segments_[i + 1].start_point()).norm();
    if (gap > kChainTol) {
      std::ostringstream msg;
      msg << "segments " << i << " and " << i + 1 << " do not chain (gap " << gap << ")";
      throw Error(ErrorKind::InvalidArgument, msg.str());
    }
  }
}

bool ParamCurve::has_lab_chart() const { return pole_ == Vec3::UnitZ(); }

Mat3 ParamCurve::chart_rotation() const { return chart_rotation_for(pole_); }

Matrix ParamCurve::chart_unitary() const { return su2_from_rotation(chart_rotation()); }

ParamCurve::Locus ParamCurve::locate(double t) const {
  const double u = std::clamp(t / tau_, 0.0, 1.0);
  const double sigma = rate_.value(u);
  const double dsigma_dt = rate_.derivative(u) / tau_;
  const int n = static_cast<int>(segments_.size());
  int i = static_cast<int>(std::upper_bound(starts_.begin(), starts_.end(), sigma) -
                           starts_.begin()) - 1;
  i = std::clamp(i, 0, n - 1);
  const double width = starts_[i + 1] - starts_[i];
  Locus loc;
  loc.segment = i;
  loc.s = std::clamp((sigma - starts_[i]) / width, 0.0, 1.0);
  loc.ds_dt = dsigma_dt / width;
  return loc;
}

PathPoint ParamCurve::at(double t) const {
  const Locus loc = locate(t);
  PathPoint p = segments_[loc.segment].at(loc.s);
  p.dtheta *= loc.ds_dt;
  p.dphi *= loc.ds_dt;
  p.dr *= loc.ds_dt;
  return p;
}

std::vector<double> ParamCurve::segment_times() const {
  std::vector<double> times(starts_.size());
  for (std::size_t i = 0; i < starts_.size(); ++i) {
    times[i] = tau_ * rate_.inverse(starts_[i]);
  }
  times.front() = 0.0;
  times.back() = tau_;
  return times;
}

std::pair<double, double> ParamCurve::segment_window(int i) const {
  if (i < 0 || i >= static_cast<int>(segments_.size())) {
    throw Error(ErrorKind::InvalidArgument, "segment index out of range");
  }
  return {tau_ * rate_.inverse(starts_[i]), tau_ * rate_.inverse(starts_[i + 1])};
}

bool ParamCurve::is_closed(double tol) const {
  return (end_point() - start_point()).norm() <= tol;
}

void ParamCurve::require_closed() const {
  if (!is_closed()) {
    std::ostringstream msg;
    msg << "curve is not closed (end point off by " << (end_point() - start_point()).norm()
        << ")";
    throw Error(ErrorKind::OpenCurve, msg.str());
  }
}

ParamCurve ParamCurve::reversed() const {
  std::vector<Segment> rev;
  rev.reserve(segments_.size());
  for (auto it = segments_.rbegin(); it != segments_.rend(); ++it) rev.push_back(it->reversed());
  return ParamCurve(std::move(rev), tau_, RateProfile{}, pole_);
}

ParamCurve ParamCurve::with_rate_profile(RateProfile rate) const {
  return ParamCurve(segments_, tau_, std::move(rate), pole_);
}

ParamCurve ParamCurve::with_tau(double tau) const {
  return ParamCurve(segments_, tau, rate_, pole_);
}

ParamCurve ParamCurve::with_chart_pole(const Vec3& pole) const {
  return ParamCurve(segments_, tau_, rate_, pole);
}

double solid_angle_phase(const ParamCurve& curve) {
  curve.require_closed();
  double total = 0.0;
  for (const Segment& seg : curve.segments()) total += seg.solid_angle_contribution();
  return total;
}

double path_length(const ParamCurve& curve, LengthConvention convention) {
  double total = 0.0;
  for (const Segment& seg : curve.segments()) {
    total += (convention == LengthConvention::Spherical) ? seg.spherical_length()
                                                         : seg.param_sum_length();
  }
  return total;
}

ParamCurve min_circle_curve(const GateSpec& spec, double tau) {
  const double gamma = spec.half_angle();
  if (std::abs(2.0 * gamma) >= 4.0 * kPi) {
    throw Error(ErrorKind::Domain, "rotation angle must satisfy |2 gamma| < 4 pi");
  }
  const double sign = (gamma < 0.0) ? -1.0 : 1.0;
  if (std::abs(gamma) >= kPi - 1e-12) {
    constexpr double kTurn = 1e-3;
    const double half = 0.5 * (1.0 - kTurn);
    std::vector<Segment> segs{
        Segment(Meridian{-sign * kPi / 2, 0.0, kPi}, half),
        Segment(LatitudeArc{kPi, -sign * kPi / 2, sign * kPi / 2}, kTurn),
        Segment(Meridian{sign * kPi / 2, kPi, 0.0}, half),
    };
    return ParamCurve(std::move(segs), tau, RateProfile{}, spec.axis());
  }
  const double cos_rho = 1.0 - std::abs(gamma) / kPi;
  const double rho = std::acos(std::clamp(cos_rho, -1.0, 1.0));
  const Vec3 axis(std::sin(rho), 0.0, std::cos(rho));
  TiltedCircle circle{axis, rho, 0.0, sign * 2.0 * kPi};
  return ParamCurve({Segment(circle, 1.0)}, tau, RateProfile{}, spec.axis());
}

std::vector<CurveSample> sample(const ParamCurve& curve, int n_steps) {
  if (n_steps < 1) throw Error(ErrorKind::InvalidArgument, "sample needs n_steps >= 1");
  std::vector<CurveSample> out;
  out.reserve(n_steps + 1);
  for (int j = 0; j <= n_steps; ++j) {
    const double t = (j == n_steps) ? curve.tau() : curve.tau() * j / n_steps;
    const ParamCurve::Locus loc = curve.locate(t);
    const PathPoint p = curve.at(t);
    double phi = p.phi;
    if (!out.empty() &&
        curve.segments()[loc.segment].kind() == SegmentKind::TiltedCircle) {
      phi += 2.0 * kPi * std::round((out.back().phi - phi) / (2.0 * kPi));
    }
    out.push_back({t, p.theta, phi, p.dtheta, p.dphi});
  }
  return out;
}

}  // namespace geopath
