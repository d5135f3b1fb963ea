#pragma once

// Two ions sharing one vibrational mode, driven on the blue sideband in the
// Lamb-Dicke regime:
//   H(t) = i eta Omega_1 e^{-i delta t} a^dag sigma_1^+ + i eta Omega_2 e^{-i delta t}
//          a^dag sigma_2^+ + h.c.
// on qubits (x) Fock states truncated at n_max, and its large-detuning
// reduction H_eff = Omega_eff |01><10| + h.c., Omega_eff = eta^2 Omega_1^* Omega_2 / delta.
//
// Basis index of |q1 q2, n> is (2 q1 + q2)(n_max + 1) + n.

#include <functional>
#include <string>
#include <vector>

#include "geopath/paths.hpp"
#include "geopath/qcore.hpp"
#include "geopath/synth.hpp"

namespace geopath {

struct IonModel {
  double eta = 0.05;
  double delta = 1.0;
  std::function<Complex(double)> omega1;
  std::function<Complex(double)> omega2;
  int n_max = 5;
  /// Large-detuning requirement delta >= ratio * eta * max|Omega_j|.
  double detuning_ratio = 20.0;

  /// Equal constant real drives with delta = ratio * eta * omega.
  static IonModel constant(double eta, double omega, double ratio, int n_max = 5);

  int dim() const { return 4 * (n_max + 1); }
  int index(int q1, int q2, int n) const { return (2 * q1 + q2) * (n_max + 1) + n; }
  /// Throws InvalidArgument for a malformed model.
  void validate() const;
};

struct RegimeCheck {
  /// eta^2 (n_max + 1)
  double lamb_dicke = 0.0;
  /// delta / (eta max|Omega|) over the sampled window.
  double detuning_margin = 0.0;
  bool large_detuning = false;
  std::vector<std::string> warnings;
};

/// Lamb-Dicke flag: warning above 0.1, InvalidArgument above 0.5. The
/// detuning margin is taken over `samples` points of [0, duration].
RegimeCheck check_regime(const IonModel& model, double duration, int samples = 257);

HermitianMatrix full_hamiltonian(const IonModel& model, double t);

Complex effective_coupling(const IonModel& model, double t);
/// 4x4 on the qubits. Throws DetuningTooSmall when delta < ratio eta max|Omega_j(t)|.
HermitianMatrix effective_hamiltonian(const IonModel& model, double t);

/// Duration for which constant drives give int Omega_eff dt = area.
double exchange_duration(const IonModel& model, double area);

/// Equal real drives of peak amplitude omega. A constant drive switches on
/// and off suddenly, which leaves an oscillation into the one-phonon sector
/// of relative size ~ 4/R^2 whose phase at the end depends on R; a sin^2
/// envelope keeps the mode adiabatically slaved to the qubits.
enum class DriveShape { Constant, SineSquared };
const char* to_string(DriveShape shape);

struct ExchangePulse {
  IonModel model;
  double duration;
};

/// Model with delta = ratio eta omega and the duration that gives
/// int Omega_eff dt = area (the sin^2 envelope averages sin^4 to 3/8).
ExchangePulse exchange_pulse(double eta, double omega, double ratio, int n_max, DriveShape shape,
                             double area);

struct ReductionConfig {
  /// Qubit state; the mode starts in the vacuum. Default |01>.
  Vector initial_qubits = Vector::Unit(4, 1);
  /// Steps per period 2 pi / delta of the sideband phase.
  double steps_per_period = 50.0;
  /// Largest tolerated population in |n_max>.
  double cutoff_tol = 1e-4;
  /// Cutoff doubling probe on the first `probe_fraction` of the run; 0 skips it.
  double probe_fraction = 0.05;
  double probe_tol = 1e-6;
};

struct ReductionReport {
  /// |<psi_eff|P psi_full>| at the final time, P the vacuum projector.
  double subspace_fidelity = 1.0;
  /// 1 - |P psi_full|^2 at the final time.
  double leakage = 0.0;
  double phase_error = 0.0;
  /// Largest 1 - |<psi_eff|P psi_full>| over the run.
  double worst_infidelity = 0.0;
  /// Largest population of |n_max> over the run.
  double cutoff_population = 0.0;
  /// Change of the final state when n_max is doubled on the probe run.
  double cutoff_change = 0.0;
  int n_steps = 0;
  std::vector<std::string> warnings;
};

/// Propagates the full and effective models from qubits (x) vacuum and
/// compares them on the vacuum sector. Throws CutoffTooSmall if |n_max>
/// gets populated beyond cfg.cutoff_tol or the doubling probe moves the
/// result by more than cfg.probe_tol; DetuningTooSmall per effective_hamiltonian.
ReductionReport reduction_check(const IonModel& model, double duration,
                                const ReductionConfig& cfg = {});

struct ReductionRow {
  double ratio = 0.0;
  double eta = 0.0;
  int n_max = 0;
  DriveShape shape = DriveShape::SineSquared;
  ReductionReport report;
};

/// exchange_pulse for each R, run for exchange area `area`; points are
/// evaluated concurrently and returned in input order. The detuning flag
/// threshold follows the smallest R.
std::vector<ReductionRow> reduction_sweep(double eta, double omega,
                                          const std::vector<double>& ratios, int n_max,
                                          double area, DriveShape shape = DriveShape::SineSquared,
                                          const ReductionConfig& cfg = {});

/// Least-squares slope of log(metric) against log(R).
double loglog_slope(const std::vector<double>& ratios, const std::vector<double>& metric);

/// Effective exchange schedule that drives the {|01>, |10>} block along the
/// curve: Omega_eff(t) = h_x - i h_y. Exchange alone cannot supply the R^z
/// term, so curves with nonzero h_z (beyond 1e-12) raise Domain on evaluation.
HamiltonianSchedule exchange_schedule(const ParamCurve& curve);

}  // namespace geopath
