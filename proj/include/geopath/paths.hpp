#pragma once

// Prescribed parameter curves t -> (theta(t), phi(t)) on the unit sphere and
// their geometric functionals.
//
// Coordinates are taken in a chart whose north pole is `chart_pole`; the lab
// Bloch vector of a chart point r is chart_rotation() * r. With the default
// pole (0, 0, 1) chart and lab coincide.
//
// Pole turns are LatitudeArc segments at theta = 0 or pi. They have zero
// length on the sphere but carry the jump in phi, which the solid-angle
// integrand (1 - cos theta) dphi weights by 2 at the south pole.

#include <optional>
#include <utility>
#include <variant>
#include <vector>

#include "geopath/qcore.hpp"

namespace geopath {

inline constexpr double kChainTol = 1e-10;
inline constexpr double kPoleGuard = 1e-8;

struct Meridian {
  double phi = 0.0;
  double theta_from = 0.0;
  double theta_to = 0.0;
};

struct LatitudeArc {
  double theta = 0.0;
  double phi_from = 0.0;
  double phi_to = 0.0;
};

/// Circle of angular radius `radius` about the unit `axis`:
///   p(psi) = cos(radius) axis + sin(radius) (cos(psi) e1 + sin(psi) e2),
/// psi running from start_angle to start_angle + sweep. e1 points from the
/// axis towards the chart north pole (x if the axis is vertical) and
/// e2 = axis x e1. A positive sweep is counterclockwise about the axis.
struct TiltedCircle {
  Vec3 axis = Vec3::UnitZ();
  double radius = 0.0;
  double start_angle = 0.0;
  double sweep = 0.0;
};

/// Tabulated (theta_i, phi_i) on a strictly increasing local grid s_i with
/// s_0 = 0 and s_last = 1. Interpolated by cubic Hermite pieces whose node
/// slopes are central differences.
struct CustomPath {
  std::vector<double> s;
  std::vector<double> theta;
  std::vector<double> phi;
};

enum class SegmentKind { Meridian, LatitudeArc, TiltedCircle, Custom };

/// Position and first derivatives with respect to the local parameter or,
/// from ParamCurve::at, with respect to time.
struct PathPoint {
  double theta = 0.0;
  double phi = 0.0;
  double dtheta = 0.0;
  double dphi = 0.0;
  Vec3 r = Vec3::UnitZ();
  Vec3 dr = Vec3::Zero();
};

/// Orthonormal columns (e1, e2, axis) of a tilted circle's own chart.
Mat3 circle_basis(const Vec3& axis);

class Segment {
 public:
  using Shape = std::variant<Meridian, LatitudeArc, TiltedCircle, CustomPath>;

  Segment(Shape shape, double duration_fraction);

  SegmentKind kind() const;
  const Shape& shape() const { return shape_; }
  double duration_fraction() const { return fraction_; }

  /// Local parameter s in [0, 1]; derivatives are d/ds. For a tilted circle
  /// within kPoleGuard of a pole, (phi, dtheta, dphi) are taken from a point
  /// just inside the segment, since phi is undefined on the pole itself.
  PathPoint at(double s) const;

  Vec3 start_point() const;
  Vec3 end_point() const;

  /// Zero-length latitude arc at theta = 0 or pi.
  bool is_pole_turn() const;

  Segment reversed() const;
  Segment with_fraction(double fraction) const;

  /// Contribution 1/2 int (1 - cos theta) dphi of this segment.
  double solid_angle_contribution() const;
  double spherical_length() const;
  double param_sum_length() const;

 private:
  Shape shape_;
  double fraction_;
};

/// Monotone map u -> s of [0, 1] onto itself with fixed endpoints, built from
/// stages applied in order. Power stages u^p need p >= 1; sine stages
/// u + sum_k a_k sin(k pi u) / (k pi) need sum_k |a_k| < 1.
class RateProfile {
 public:
  struct Stage {
    enum class Kind { Power, Sine };
    Kind kind = Kind::Power;
    double exponent = 1.0;
    std::vector<double> coeffs;
  };

  RateProfile() = default;
  explicit RateProfile(std::vector<Stage> stages);

  static RateProfile power(double exponent);
  static RateProfile sine_series(std::vector<double> coeffs);

  /// this(inner(u)).
  RateProfile after(const RateProfile& inner) const;

  double value(double u) const;
  double derivative(double u) const;
  double inverse(double s) const;

  bool is_identity() const { return stages_.empty(); }
  const std::vector<Stage>& stages() const { return stages_; }

 private:
  std::vector<Stage> stages_;
};

/// Rotation taking (0, 0, 1) to `pole`; the identity for the default pole.
Mat3 chart_rotation_for(const Vec3& pole);

class ParamCurve {
 public:
  ParamCurve(std::vector<Segment> segments, double tau, RateProfile rate = {},
             Vec3 chart_pole = Vec3::UnitZ());

  const std::vector<Segment>& segments() const { return segments_; }
  double tau() const { return tau_; }
  const RateProfile& rate_profile() const { return rate_; }
  const Vec3& chart_pole() const { return pole_; }
  bool has_lab_chart() const;
  Mat3 chart_rotation() const;
  /// SU(2) lift of chart_rotation().
  Matrix chart_unitary() const;

  struct Locus {
    int segment = 0;
    double s = 0.0;
    double ds_dt = 0.0;
  };
  Locus locate(double t) const;

  /// Chart coordinates at time t with time derivatives.
  PathPoint at(double t) const;

  /// Segment start times followed by tau (segments().size() + 1 entries).
  std::vector<double> segment_times() const;
  std::pair<double, double> segment_window(int i) const;

  Vec3 start_point() const { return segments_.front().start_point(); }
  Vec3 end_point() const { return segments_.back().end_point(); }
  bool is_closed(double tol = kChainTol) const;
  /// Throws OpenCurve.
  void require_closed() const;

  /// Traverses the segments backwards; the rate profile is reset.
  ParamCurve reversed() const;
  ParamCurve with_rate_profile(RateProfile rate) const;
  ParamCurve with_tau(double tau) const;
  ParamCurve with_chart_pole(const Vec3& pole) const;

 private:
  std::vector<Segment> segments_;
  std::vector<double> starts_;  // cumulative fractions, size n + 1
  double tau_;
  RateProfile rate_;
  Vec3 pole_;
};

/// 1/2 closed-integral (1 - cos theta) dphi, unwrapped. Throws OpenCurve.
double solid_angle_phase(const ParamCurve& curve);

enum class LengthConvention { Spherical, ParamSum };

/// Spherical: int sqrt(theta'^2 + sin^2 theta phi'^2). ParamSum: the total
/// variation int (|theta'| + |phi'|), which is sum (|dtheta| + |dphi|) over
/// monotone segments. Pole turns count zero in both.
double path_length(const ParamCurve& curve, LengthConvention convention);

/// Circle through the chart north pole, in a chart whose pole is the gate
/// axis, with angular radius rho solving 2 pi (1 - cos rho) = |2 gamma| and
/// signed enclosed solid angle 2 gamma. At |gamma| = pi the circle is the
/// great circle through both chart poles and is emitted as two meridians
/// joined by a south-pole turn. Throws Domain if |2 gamma| >= 4 pi.
ParamCurve min_circle_curve(const GateSpec& spec, double tau = 1.0);

struct CurveSample {
  double t;
  double theta;
  double phi;
  double dtheta;
  double dphi;
};

/// n_steps + 1 points on a uniform grid in t including both ends; phi
/// unwrapped along the grid.
std::vector<CurveSample> sample(const ParamCurve& curve, int n_steps);

}  // namespace geopath
