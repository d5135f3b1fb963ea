#pragma once

// Driving Hamiltonians from auxiliary frames.
//
// Generic route: H = i sum_{l != k} <v_l|dv_k/dt> |v_l><v_k| for an
// orthonormal frame {v_k(t)}. Closed forms for the one-qubit frame
//   v1 = cos(theta/2)|0> + sin(theta/2) e^{i phi}|1>
//   v2 = sin(theta/2) e^{-i phi}|0> - cos(theta/2)|1>
// give H = h.sigma with h = 1/2 r x dr/dt (r the Bloch vector), and the
// two-qubit XY/DM form is the same generator on the {|01>, |10>} block.
//
// Control convention: H = Delta (|1><1| - |0><0|) + (Omega |1><0| + h.c.),
// so Delta = -h_z and Omega = h_x + i h_y.

#include <functional>
#include <optional>
#include <vector>

#include "geopath/paths.hpp"
#include "geopath/qcore.hpp"

namespace geopath {

/// Time-dependent orthonormal basis; column k of basis(t) is v_k(t).
struct AuxiliaryFrame {
  int dim = 0;
  double tau = 1.0;
  std::function<Matrix(double)> basis;
  /// Column-wise time derivative. Empty means central differences.
  std::function<Matrix(double)> derivative;
  /// Times in (0, tau) where the derivative may jump. Finite differences never
  /// straddle them.
  std::vector<double> breakpoints;
  /// Finite-difference step; 0 selects tau * 1e-6.
  double fd_step = 0.0;

  bool analytic_derivative() const { return static_cast<bool>(derivative); }
};

/// Checks orthonormality (1e-10) on `samples` uniform times and v_k(tau) =
/// v_k(0) (1e-10). Throws FrameNotOrthonormal / NonCyclicFrame.
void validate_frame(const AuxiliaryFrame& frame, int samples = 64);

/// Derivative of the frame at t: analytic when supplied, otherwise central
/// differences with step h, one-sided (second order) next to breakpoints.
Matrix frame_derivative(const AuxiliaryFrame& frame, double t, double h = 0.0);

struct ControlSignals {
  double delta = 0.0;
  Complex rabi{0.0, 0.0};
  /// Chart azimuth phi; rabi * e^{-i drive_phase} is the envelope
  /// 1/2 (i dtheta - dphi sin theta cos theta).
  double drive_phase = 0.0;
  /// Two-qubit coefficients of R^x, R^y, R^z.
  double cx = 0.0;
  double cy = 0.0;
  double cz = 0.0;
};

class HamiltonianSchedule {
 public:
  using Evaluator = std::function<Matrix(double)>;
  using ControlEvaluator = std::function<ControlSignals(double)>;

  /// `breakpoints` are interior times where H may jump.
  HamiltonianSchedule(int dim, double tau, Evaluator evaluator,
                      std::vector<double> breakpoints = {},
                      ControlEvaluator controls = {});

  int dim() const { return dim_; }
  double tau() const { return tau_; }
  /// Interior breakpoints, sorted, strictly inside (0, tau).
  const std::vector<double>& breakpoints() const { return breakpoints_; }
  /// 0, interior breakpoints, tau.
  std::vector<double> knots() const;

  HermitianMatrix at(double t) const;
  /// Unsymmetrized evaluator output (for diagnostics).
  Matrix raw(double t) const { return eval_(t); }
  const Evaluator& evaluator() const { return eval_; }

  bool has_controls() const { return static_cast<bool>(controls_); }
  ControlSignals controls(double t) const;
  const ControlEvaluator& control_evaluator() const { return controls_; }

 private:
  int dim_;
  double tau_;
  Evaluator eval_;
  std::vector<double> breakpoints_;
  ControlEvaluator controls_;
};

/// H(t) = i sum_{l != k} <v_l|dv_k> |v_l><v_k|, returned Hermitian. With an
/// analytic derivative the anti-Hermitian part before symmetrization must stay
/// below 1e-10 (FrameNotOrthonormal otherwise).
HamiltonianSchedule frame_to_hamiltonian(const AuxiliaryFrame& frame);

/// Step-halving study of the finite-difference Hamiltonian at time t:
/// max-entry differences between steps h, h/2 and h/4 and the observed order.
struct RichardsonReport {
  double diff_h = 0.0;
  double diff_h2 = 0.0;
  double order = 0.0;
};
RichardsonReport richardson_check(const AuxiliaryFrame& frame, double t, double h);

/// The one-qubit frame of the curve, in the curve's chart.
AuxiliaryFrame onequbit_frame(const ParamCurve& curve);
/// {|00>, v1 on (|01>, |10>), v2 on (|01>, |10>), |11>} in the chart.
AuxiliaryFrame twoqubit_frame(const ParamCurve& curve);
/// Time-independent frame (identity columns).
AuxiliaryFrame constant_frame(int dim, double tau);

/// Bloch-vector generator h(t) with H = h.sigma, chart rotation applied.
Vec3 onequbit_field(const ParamCurve& curve, double t);

HamiltonianSchedule onequbit_hamiltonian(const ParamCurve& curve);
/// Acts on |q1 q2> with index 2 q1 + q2; H|00> = H|11> = 0.
HamiltonianSchedule twoqubit_hamiltonian(const ParamCurve& curve);

/// R^x = (XX + YY)/2, R^y = (XY - YX)/2, R^z = (Z x I - I x Z)/2.
namespace exchange {
const Matrix& rx();
const Matrix& ry();
const Matrix& rz();
}  // namespace exchange

/// Chart-frame envelope 1/2 (i dtheta - dphi sin theta cos theta) of segment i
/// as a function of the local parameter s.
Complex segment_envelope(const Segment& segment, double s);

/// Signed pulse area of a segment: the integral of the envelope along its
/// fixed direction u (normalized to Re u > 0, or u = i if purely imaginary).
/// Throws ComplexEnvelope if the envelope phase varies over the segment.
double pulse_area(const Segment& segment);
/// Areas of all segments except pole turns, in order.
std::vector<double> pulse_areas(const ParamCurve& curve);

/// Integral of |Omega| over a segment: 1/2 int sqrt(theta'^2 + phi'^2 sin^2
/// theta cos^2 theta) ds. The time needed at a cap Omega_bar is this / cap.
double envelope_area(const Segment& segment);
double envelope_area(const ParamCurve& curve);

}  // namespace geopath
