#include "geopath/synth.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "geopath/error.hpp"
#include "geopath/quadrature.hpp"

namespace geopath {

namespace {

constexpr double kFrameTol = 1e-10;
constexpr double kAntiHermitianTol = 1e-10;

double max_abs(const Matrix& m) { return m.size() == 0 ? 0.0 : m.cwiseAbs().maxCoeff(); }

std::vector<double> interior_breakpoints(std::vector<double> points, double tau) {
  std::vector<double> out;
  for (double p : points) {
    if (p > 0.0 && p < tau) out.push_back(p);
  }
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

Matrix frame_hamiltonian(const Matrix& v, const Matrix& dv) {
  Matrix a = v.adjoint() * dv;  // a(l, k) = <v_l|dv_k>
  a.diagonal().setZero();
  return kI * v * a * v.adjoint();
}

// Frame columns for chart angles (theta, phi) and their time derivatives.
void onequbit_columns(double theta, double phi, double dtheta, double dphi, Matrix* v,
                      Matrix* dv) {
  const double c = std::cos(0.5 * theta);
  const double s = std::sin(0.5 * theta);
  const Complex ep = std::exp(Complex(0.0, phi));
  const Complex em = std::conj(ep);
  if (v != nullptr) {
    v->resize(2, 2);
    (*v)(0, 0) = c;
    (*v)(1, 0) = s * ep;
    (*v)(0, 1) = s * em;
    (*v)(1, 1) = -c;
  }
  if (dv != nullptr) {
    dv->resize(2, 2);
    (*dv)(0, 0) = -0.5 * s * dtheta;
    (*dv)(1, 0) = (0.5 * c * dtheta + kI * s * dphi) * ep;
    (*dv)(0, 1) = (0.5 * c * dtheta - kI * s * dphi) * em;
    (*dv)(1, 1) = 0.5 * s * dtheta;
  }
}

Matrix embed_block(const Matrix& m2) {
  Matrix m = Matrix::Zero(4, 4);
  m.block(1, 1, 2, 2) = m2;
  return m;
}

// Chart-frame field 1/2 r x dr for a path point, in closed form.
Vec3 chart_field(const PathPoint& p) {
  const double st = std::sin(p.theta), ct = std::cos(p.theta);
  const double sp = std::sin(p.phi), cp = std::cos(p.phi);
  return Vec3(-0.5 * (p.dtheta * sp + p.dphi * st * ct * cp),
              0.5 * (p.dtheta * cp - p.dphi * st * ct * sp), 0.5 * p.dphi * st * st);
}

}  // namespace

void validate_frame(const AuxiliaryFrame& frame, int samples) {
  if (frame.dim <= 0 || !frame.basis) {
    throw Error(ErrorKind::InvalidArgument, "frame needs a dimension and a basis generator");
  }
  if (!(frame.tau > 0.0)) throw Error(ErrorKind::InvalidArgument, "frame tau must be positive");
  samples = std::max(samples, 2);
  const Matrix id = Matrix::Identity(frame.dim, frame.dim);
  for (int j = 0; j < samples; ++j) {
    const double t = frame.tau * j / (samples - 1);
    const Matrix v = frame.basis(t);
    if (v.rows() != frame.dim || v.cols() != frame.dim) {
      throw Error(ErrorKind::DimensionMismatch, "frame basis has wrong shape");
    }
    const double defect = max_abs(v.adjoint() * v - id);
    if (defect > kFrameTol) {
      std::ostringstream msg;
      msg << "frame not orthonormal at t = " << t << " (defect " << defect << ")";
      throw Error(ErrorKind::FrameNotOrthonormal, msg.str());
    }
  }
  const double gap = max_abs(frame.basis(frame.tau) - frame.basis(0.0));
  if (gap > kFrameTol) {
    std::ostringstream msg;
    msg << "frame does not return to itself (max gap " << gap << ")";
    throw Error(ErrorKind::NonCyclicFrame, msg.str());
  }
}

Matrix frame_derivative(const AuxiliaryFrame& frame, double t, double h) {
  if (frame.derivative) return frame.derivative(t);
  if (h <= 0.0) h = (frame.fd_step > 0.0) ? frame.fd_step : frame.tau * 1e-6;
  // Smooth interval containing t; a breakpoint belongs to the interval it opens.
  double lo = 0.0, hi = frame.tau;
  for (double b : frame.breakpoints) {
    if (b <= t) lo = std::max(lo, b);
    if (b > t) hi = std::min(hi, b);
  }
  if (t - h >= lo && t + h <= hi) {
    return (frame.basis(t + h) - frame.basis(t - h)) / (2.0 * h);
  }
  if (t + 2.0 * h <= hi) {
    return (-3.0 * frame.basis(t) + 4.0 * frame.basis(t + h) - frame.basis(t + 2.0 * h)) /
           (2.0 * h);
  }
  return (3.0 * frame.basis(t) - 4.0 * frame.basis(t - h) + frame.basis(t - 2.0 * h)) /
         (2.0 * h);
}

HamiltonianSchedule::HamiltonianSchedule(int dim, double tau, Evaluator evaluator,
                                         std::vector<double> breakpoints,
                                         ControlEvaluator controls)
    : dim_(dim),
      tau_(tau),
      eval_(std::move(evaluator)),
      breakpoints_(interior_breakpoints(std::move(breakpoints), tau)),
      controls_(std::move(controls)) {
  if (dim_ <= 0) throw Error(ErrorKind::InvalidArgument, "schedule dimension must be positive");
  if (!(std::isfinite(tau_) && tau_ > 0.0)) {
    throw Error(ErrorKind::InvalidArgument, "schedule duration must be positive");
  }
  if (!eval_) throw Error(ErrorKind::InvalidArgument, "schedule needs an evaluator");
}

std::vector<double> HamiltonianSchedule::knots() const {
  std::vector<double> k;
  k.reserve(breakpoints_.size() + 2);
  k.push_back(0.0);
  k.insert(k.end(), breakpoints_.begin(), breakpoints_.end());
  k.push_back(tau_);
  return k;
}

HermitianMatrix HamiltonianSchedule::at(double t) const {
  Matrix m = eval_(t);
  if (m.rows() != dim_ || m.cols() != dim_) {
    throw Error(ErrorKind::DimensionMismatch, "schedule evaluator returned wrong shape");
  }
  return HermitianMatrix(m);
}

ControlSignals HamiltonianSchedule::controls(double t) const {
  if (!controls_) throw Error(ErrorKind::InvalidArgument, "schedule has no control signals");
  return controls_(t);
}

HamiltonianSchedule frame_to_hamiltonian(const AuxiliaryFrame& frame) {
  validate_frame(frame);
  const bool analytic = frame.analytic_derivative();
  auto eval = [frame, analytic](double t) -> Matrix {
    const Matrix v = frame.basis(t);
    const Matrix h = frame_hamiltonian(v, frame_derivative(frame, t));
    if (analytic) {
      const double residual = anti_hermitian_residual(h);
      if (residual > kAntiHermitianTol) {
        std::ostringstream msg;
        msg << "frame derivative inconsistent with orthonormality at t = " << t
            << " (anti-Hermitian residual " << residual << ")";
        throw Error(ErrorKind::FrameNotOrthonormal, msg.str());
      }
    }
    return 0.5 * (h + h.adjoint());
  };
  return HamiltonianSchedule(frame.dim, frame.tau, eval, frame.breakpoints);
}

RichardsonReport richardson_check(const AuxiliaryFrame& frame, double t, double h) {
  AuxiliaryFrame numeric = frame;
  numeric.derivative = nullptr;
  const Matrix v = frame.basis(t);
  auto ham = [&](double step) {
    const Matrix m = frame_hamiltonian(v, frame_derivative(numeric, t, step));
    return Matrix(0.5 * (m + m.adjoint()));
  };
  const Matrix h1 = ham(h), h2 = ham(0.5 * h), h4 = ham(0.25 * h);
  RichardsonReport r;
  r.diff_h = max_abs(h1 - h2);
  r.diff_h2 = max_abs(h2 - h4);
  r.order = (r.diff_h > 0.0 && r.diff_h2 > 0.0) ? std::log2(r.diff_h / r.diff_h2) : 0.0;
  return r;
}

AuxiliaryFrame onequbit_frame(const ParamCurve& curve) {
  AuxiliaryFrame f;
  f.dim = 2;
  f.tau = curve.tau();
  f.basis = [curve](double t) {
    const PathPoint p = curve.at(t);
    Matrix v;
    onequbit_columns(p.theta, p.phi, 0.0, 0.0, &v, nullptr);
    return v;
  };
  f.derivative = [curve](double t) {
    const PathPoint p = curve.at(t);
    Matrix dv;
    onequbit_columns(p.theta, p.phi, p.dtheta, p.dphi, nullptr, &dv);
    return dv;
  };
  const std::vector<double> times = curve.segment_times();
  f.breakpoints.assign(times.begin() + 1, times.end() - 1);
  return f;
}

AuxiliaryFrame twoqubit_frame(const ParamCurve& curve) {
  AuxiliaryFrame one = onequbit_frame(curve);
  AuxiliaryFrame f;
  f.dim = 4;
  f.tau = one.tau;
  f.breakpoints = one.breakpoints;
  f.basis = [b = one.basis](double t) {
    Matrix v = Matrix::Zero(4, 4);
    v(0, 0) = 1.0;
    v(3, 3) = 1.0;
    v.block(1, 1, 2, 2) = b(t);
    return v;
  };
  f.derivative = [d = one.derivative](double t) { return embed_block(d(t)); };
  return f;
}

AuxiliaryFrame constant_frame(int dim, double tau) {
  AuxiliaryFrame f;
  f.dim = dim;
  f.tau = tau;
  f.basis = [dim](double) { return Matrix(Matrix::Identity(dim, dim)); };
  f.derivative = [dim](double) { return Matrix(Matrix::Zero(dim, dim)); };
  return f;
}

Vec3 onequbit_field(const ParamCurve& curve, double t) {
  const ParamCurve::Locus loc = curve.locate(t);
  const Segment& seg = curve.segments()[loc.segment];
  PathPoint p = seg.at(loc.s);
  Vec3 h;
  if (seg.kind() == SegmentKind::TiltedCircle) {
    // Chart-free form; the circle may pass through the chart's poles.
    h = 0.5 * loc.ds_dt * p.r.cross(p.dr);
  } else {
    p.dtheta *= loc.ds_dt;
    p.dphi *= loc.ds_dt;
    h = chart_field(p);
  }
  if (!curve.has_lab_chart()) h = curve.chart_rotation() * h;
  return h;
}

namespace {

ControlSignals onequbit_controls(const ParamCurve& curve, double t) {
  const Vec3 h = onequbit_field(curve, t);
  ControlSignals c;
  c.delta = -h.z();
  c.rabi = Complex(h.x(), h.y());
  c.drive_phase = curve.at(t).phi;
  c.cx = h.x();
  c.cy = -h.y();
  c.cz = h.z();
  return c;
}

std::vector<double> interior_times(const ParamCurve& curve) {
  const std::vector<double> times = curve.segment_times();
  return std::vector<double>(times.begin() + 1, times.end() - 1);
}

}  // namespace

HamiltonianSchedule onequbit_hamiltonian(const ParamCurve& curve) {
  auto eval = [curve](double t) { return pauli::dot(onequbit_field(curve, t)); };
  auto controls = [curve](double t) { return onequbit_controls(curve, t); };
  return HamiltonianSchedule(2, curve.tau(), eval, interior_times(curve), controls);
}

HamiltonianSchedule twoqubit_hamiltonian(const ParamCurve& curve) {
  auto eval = [curve](double t) {
    const Vec3 h = onequbit_field(curve, t);
    // cx R^x + cy R^y + cz R^z with cy = -h_y: on the {|01>, |10>} block R^y
    // acts as -sigma_y, so the block is h.sigma.
    return Matrix(h.x() * exchange::rx() - h.y() * exchange::ry() + h.z() * exchange::rz());
  };
  auto controls = [curve](double t) { return onequbit_controls(curve, t); };
  return HamiltonianSchedule(4, curve.tau(), eval, interior_times(curve), controls);
}

namespace exchange {

const Matrix& rx() {
  static const Matrix m = 0.5 * (kron(pauli::x(), pauli::x()) + kron(pauli::y(), pauli::y()));
  return m;
}

const Matrix& ry() {
  static const Matrix m = 0.5 * (kron(pauli::x(), pauli::y()) - kron(pauli::y(), pauli::x()));
  return m;
}

const Matrix& rz() {
  static const Matrix m =
      0.5 * (kron(pauli::z(), pauli::identity()) - kron(pauli::identity(), pauli::z()));
  return m;
}

}  // namespace exchange

Complex segment_envelope(const Segment& segment, double s) {
  const PathPoint p = segment.at(s);
  return 0.5 * Complex(-p.dphi * std::sin(p.theta) * std::cos(p.theta), p.dtheta);
}

double pulse_area(const Segment& segment) {
  if (const auto* m = std::get_if<Meridian>(&segment.shape())) {
    return 0.5 * (m->theta_to - m->theta_from);
  }
  if (const auto* a = std::get_if<LatitudeArc>(&segment.shape())) {
    if (segment.is_pole_turn()) return 0.0;
    return -0.5 * (a->phi_to - a->phi_from) * std::sin(a->theta) * std::cos(a->theta);
  }
  constexpr int kProbe = 129;
  std::vector<Complex> probe(kProbe);
  double peak = 0.0;
  for (int j = 0; j < kProbe; ++j) {
    probe[j] = segment_envelope(segment, static_cast<double>(j) / (kProbe - 1));
    peak = std::max(peak, std::abs(probe[j]));
  }
  if (peak == 0.0) return 0.0;
  Complex u{0.0, 0.0};
  for (const Complex& e : probe) {
    if (std::abs(e) > 1e-9 * peak) {
      u = e / std::abs(e);
      break;
    }
  }
  if (u.real() < -1e-12 || (std::abs(u.real()) <= 1e-12 && u.imag() < 0.0)) u = -u;
  for (const Complex& e : probe) {
    if (std::abs((e * std::conj(u)).imag()) > 1e-9 * peak) {
      throw Error(ErrorKind::ComplexEnvelope,
                  "segment envelope changes phase; no real pulse area exists");
    }
  }
  return integrate(
      [&](double s) { return (segment_envelope(segment, s) * std::conj(u)).real(); }, 0.0, 1.0,
      QuadratureOptions{1e-12, 10, 30});
}

std::vector<double> pulse_areas(const ParamCurve& curve) {
  std::vector<double> areas;
  for (const Segment& seg : curve.segments()) {
    if (!seg.is_pole_turn()) areas.push_back(pulse_area(seg));
  }
  return areas;
}

double envelope_area(const Segment& segment) {
  if (const auto* m = std::get_if<Meridian>(&segment.shape())) {
    return 0.5 * std::abs(m->theta_to - m->theta_from);
  }
  if (const auto* a = std::get_if<LatitudeArc>(&segment.shape())) {
    if (segment.is_pole_turn()) return 0.0;
    return 0.5 * std::abs((a->phi_to - a->phi_from) * std::sin(a->theta) * std::cos(a->theta));
  }
  // |Omega| = 1/2 sqrt(|dr|^2 - (x dy - y dx)^2), valid through the poles.
  auto integrand = [&](double s) {
    const PathPoint p = segment.at(s);
    const double lz = p.r.x() * p.dr.y() - p.r.y() * p.dr.x();
    return 0.5 * std::sqrt(std::max(0.0, p.dr.squaredNorm() - lz * lz));
  };
  std::vector<double> pts;
  if (const auto* c = std::get_if<CustomPath>(&segment.shape())) {
    pts = c->s;
  } else {
    const auto& circle = std::get<TiltedCircle>(segment.shape());
    const int pieces =
        std::max(1, static_cast<int>(std::ceil(std::abs(circle.sweep) / (kPi / 2))));
    for (int i = 0; i <= pieces; ++i) pts.push_back(static_cast<double>(i) / pieces);
  }
  return integrate_piecewise(integrand, pts, QuadratureOptions{1e-12, 10, 30});
}

double envelope_area(const ParamCurve& curve) {
  double total = 0.0;
  for (const Segment& seg : curve.segments()) total += envelope_area(seg);
  return total;
}

}  // namespace geopath
