#pragma once

// Time-ordered propagation and geometric-gate reports.

#include <functional>
#include <string>
#include <vector>

#include "geopath/paths.hpp"
#include "geopath/qcore.hpp"
#include "geopath/synth.hpp"

namespace geopath {

enum class Method { MidpointExponential, RK4 };

struct PropagatorConfig {
  int n_steps = 4096;
  Method method = Method::MidpointExponential;
  double unitarity_tol = 1e-9;
  double eigentol = 1e-6;

  /// Throws InvalidArgument unless n_steps >= 16 and tolerances are positive.
  void validate() const;
};

/// Called after every step with the time reached and the propagator so far
/// (also once at t = 0 with the identity).
using StepObserver = std::function<void(double t, const Matrix& u)>;

/// Steps are shared out over the smooth pieces between breakpoints in
/// proportion to their length, at least one per piece, so no step straddles
/// a jump of H. Throws UnitarityLost if the result drifts beyond
/// cfg.unitarity_tol; the result is never re-unitarized.
UnitaryMatrix propagate(const HamiltonianSchedule& schedule, const PropagatorConfig& cfg,
                        const StepObserver& observer = {});

/// Step grid used by propagate: knots 0 = t_0 < ... < t_n = tau, about
/// n_steps in total, uniform inside each interval between breakpoints.
std::vector<double> step_grid(const HamiltonianSchedule& schedule, int n_steps);

/// gamma_k = i int <v_k|dv_k> dt over [0, tau], unwrapped, plus
/// arg<v_k(0)|v_k(tau)> when the frame closes only up to a phase.
double geometric_phase_continuous(const AuxiliaryFrame& frame, int k);

enum class GateKind { OneQubit, TwoQubit };

struct EvolutionReport {
  GateKind kind = GateKind::OneQubit;
  Matrix final_unitary;
  std::vector<double> phases_continuous;
  std::vector<double> phases_principal;
  std::vector<int> winding;
  double pt_residual_max = 0.0;
  int pt_grid_points = 0;
  double cyclicity_defect = 0.0;
  double unitarity_defect = 0.0;
  double fidelity = 0.0;
  double solid_angle = 0.0;
  double length_spherical = 0.0;
  double length_paramsum = 0.0;
  std::string length_note;
  /// Sum of envelope areas: tau * Omega_bar for cap-saturating envelopes.
  double time_times_cap = 0.0;
  std::vector<double> pulse_areas;
  bool pulse_areas_real = true;
  int n_steps = 0;
};

/// Synthesizes the schedule for the curve, propagates, extracts the
/// holonomies on the initial frame states and compares with the target
/// (embedded on the {|01>, |10>} block for TwoQubit). Throws OpenCurve for an
/// open curve and NonCyclic if a two-qubit run moves |00> or |11> (1e-8).
EvolutionReport run_geometric_gate(const ParamCurve& curve, GateKind kind,
                                   const GateSpec& target, const PropagatorConfig& cfg = {});

/// Target operator for a gate kind: the one-qubit rotation, or
/// diag(1, rotation on {|01>, |10>}, 1).
Matrix target_unitary(const GateSpec& target, GateKind kind);

/// Max over a uniform grid of |<phi_k|H|phi_k>| on the frame states. The
/// grid starts at `min_points` and doubles until the max changes < 10%.
double parallel_transport_residual(const HamiltonianSchedule& schedule,
                                   const AuxiliaryFrame& frame, const Matrix& chart,
                                   int min_points = 256, int* points_used = nullptr);

struct TrajectoryRow {
  double t;
  std::vector<Vector> states;        // U(t)|phi_k(0)>
  std::vector<double> energies;      // <psi_k|H(t)|psi_k>
};

/// States propagated from the initial frame states, every `stride` steps.
std::vector<TrajectoryRow> trajectory(const ParamCurve& curve, GateKind kind,
                                      const PropagatorConfig& cfg, int stride = 16);

}  // namespace geopath
