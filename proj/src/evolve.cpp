#include "geopath/evolve.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "geopath/error.hpp"
#include "geopath/quadrature.hpp"

namespace geopath {

void PropagatorConfig::validate() const {
  if (n_steps < 16) throw Error(ErrorKind::InvalidArgument, "n_steps must be at least 16");
  if (!(unitarity_tol > 0.0) || !(eigentol > 0.0)) {
    throw Error(ErrorKind::InvalidArgument, "tolerances must be positive");
  }
}

std::vector<double> step_grid(const HamiltonianSchedule& schedule, int n_steps) {
  const std::vector<double> knots = schedule.knots();
  const double tau = schedule.tau();
  std::vector<double> grid{0.0};
  for (std::size_t i = 0; i + 1 < knots.size(); ++i) {
    const double a = knots[i], b = knots[i + 1];
    const int n = std::max(1, static_cast<int>(std::lround(n_steps * (b - a) / tau)));
    for (int j = 1; j < n; ++j) grid.push_back(a + (b - a) * j / n);
    grid.push_back(b);
  }
  return grid;
}

namespace {

Matrix rk4_step(const HamiltonianSchedule& s, double t, double dt, const Matrix& u) {
  // The end stages are taken just inside the step: a knot recovered through a
  // rate profile can round onto the neighbouring segment, where H jumps.
  const double inset = 1e-9 * dt;
  const Matrix h0 = s.at(t + inset).matrix();
  const Matrix hm = s.at(t + 0.5 * dt).matrix();
  const Matrix h1 = s.at(t + dt - inset).matrix();
  const Matrix k1 = -kI * h0 * u;
  const Matrix k2 = -kI * hm * (u + 0.5 * dt * k1);
  const Matrix k3 = -kI * hm * (u + 0.5 * dt * k2);
  const Matrix k4 = -kI * h1 * (u + dt * k3);
  return u + (dt / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
}

}  // namespace

UnitaryMatrix propagate(const HamiltonianSchedule& schedule, const PropagatorConfig& cfg,
                        const StepObserver& observer) {
  cfg.validate();
  const std::vector<double> grid = step_grid(schedule, cfg.n_steps);
  Matrix u = Matrix::Identity(schedule.dim(), schedule.dim());
  if (observer) observer(0.0, u);
  for (std::size_t j = 0; j + 1 < grid.size(); ++j) {
    const double t = grid[j];
    const double dt = grid[j + 1] - t;
    if (cfg.method == Method::MidpointExponential) {
      u = expi_hermitian(schedule.at(t + 0.5 * dt).matrix(), dt) * u;
    } else {
      u = rk4_step(schedule, t, dt, u);
    }
    if (observer) observer(grid[j + 1], u);
  }
  return UnitaryMatrix(std::move(u), cfg.unitarity_tol);
}

double geometric_phase_continuous(const AuxiliaryFrame& frame, int k) {
  if (k < 0 || k >= frame.dim) throw Error(ErrorKind::InvalidArgument, "frame index out of range");
  std::vector<double> knots{0.0};
  for (double b : frame.breakpoints) {
    if (b > 0.0 && b < frame.tau) knots.push_back(b);
  }
  knots.push_back(frame.tau);
  std::sort(knots.begin(), knots.end());
  auto integrand = [&](double t) {
    const Vector v = frame.basis(t).col(k);
    const Vector dv = frame_derivative(frame, t).col(k);
    // i <v|dv> is real for a normalized v
    return -v.dot(dv).imag();
  };
  double gamma = integrate_piecewise(integrand, knots, QuadratureOptions{1e-12, 10, 30});
  const Complex overlap = frame.basis(0.0).col(k).dot(frame.basis(frame.tau).col(k));
  if (std::abs(std::abs(overlap) - 1.0) > 1e-8) {
    throw Error(ErrorKind::NonCyclicFrame, "frame vector does not return to its initial ray");
  }
  gamma += std::arg(overlap);
  return gamma;
}

Matrix target_unitary(const GateSpec& target, GateKind kind) {
  const Matrix g = gate_from_spec(target).matrix();
  if (kind == GateKind::OneQubit) return g;
  Matrix m = Matrix::Identity(4, 4);
  m.block(1, 1, 2, 2) = g;
  return m;
}

double parallel_transport_residual(const HamiltonianSchedule& schedule,
                                   const AuxiliaryFrame& frame, const Matrix& chart,
                                   int min_points, int* points_used) {
  const double tau = schedule.tau();
  auto value_at = [&](double t) {
    const Matrix phi = chart * frame.basis(t);
    const Matrix h = schedule.at(t).matrix();
    double worst = 0.0;
    for (Eigen::Index k = 0; k < phi.cols(); ++k) {
      worst = std::max(worst, std::abs(phi.col(k).dot(h * phi.col(k))));
    }
    return worst;
  };
  int n = std::max(min_points, 2);
  double worst = 0.0;
  for (int j = 0; j < n; ++j) worst = std::max(worst, value_at(tau * j / (n - 1)));
  constexpr int kMaxPoints = 1 << 14;
  while (n < kMaxPoints) {
    // Nested refinement: only the new midpoints need evaluating.
    const int m = 2 * n - 1;
    double refined = worst;
    for (int j = 1; j < m; j += 2) refined = std::max(refined, value_at(tau * j / (m - 1)));
    const bool settled = refined - worst <= 0.1 * refined || refined < 1e-14;
    worst = refined;
    n = m;
    if (settled) break;
  }
  if (points_used != nullptr) *points_used = n;
  return worst;
}

namespace {

Matrix lab_chart(const ParamCurve& curve, GateKind kind) {
  const Matrix w = curve.chart_unitary();
  if (kind == GateKind::OneQubit) return w;
  Matrix m = Matrix::Identity(4, 4);
  m.block(1, 1, 2, 2) = w;
  return m;
}

double projector_distance(const Matrix& u, const Vector& v) {
  const Vector uv = u * v;
  return (uv * uv.adjoint() - v * v.adjoint()).norm();
}

}  // namespace

EvolutionReport run_geometric_gate(const ParamCurve& curve, GateKind kind,
                                   const GateSpec& target, const PropagatorConfig& cfg) {
  curve.require_closed();
  cfg.validate();
  const bool two = kind == GateKind::TwoQubit;
  const HamiltonianSchedule schedule = two ? twoqubit_hamiltonian(curve) : onequbit_hamiltonian(curve);
  const AuxiliaryFrame frame = two ? twoqubit_frame(curve) : onequbit_frame(curve);
  const Matrix chart = lab_chart(curve, kind);

  EvolutionReport r;
  r.kind = kind;
  r.n_steps = cfg.n_steps;
  const UnitaryMatrix u = propagate(schedule, cfg);
  r.final_unitary = u.matrix();
  r.unitarity_defect = u.unitarity_defect();

  const Matrix initial = chart * frame.basis(0.0);
  std::vector<StateVector> basis;
  for (Eigen::Index k = 0; k < initial.cols(); ++k) {
    basis.emplace_back(Vector(initial.col(k)), 1e-10);
  }
  if (two) {
    const Matrix& m = r.final_unitary;
    const double moved00 = (m.col(0) - initial.col(0)).norm();
    const double moved11 = (m.col(3) - initial.col(3)).norm();
    if (moved00 > 1e-8 || moved11 > 1e-8) {
      std::ostringstream msg;
      msg << "two-qubit evolution moves |00> or |11> (" << moved00 << ", " << moved11 << ")";
      throw Error(ErrorKind::NonCyclic, msg.str());
    }
  }
  r.phases_principal = holonomy_extract(r.final_unitary, basis, cfg.eigentol);
  for (int k = 0; k < frame.dim; ++k) {
    r.phases_continuous.push_back(geometric_phase_continuous(frame, k));
    r.winding.push_back(static_cast<int>(
        std::lround((r.phases_continuous[k] - r.phases_principal[k]) / (2.0 * kPi))));
    r.cyclicity_defect =
        std::max(r.cyclicity_defect, projector_distance(r.final_unitary, basis[k].amplitudes()));
  }
  r.pt_residual_max = parallel_transport_residual(schedule, frame, chart, 256, &r.pt_grid_points);
  r.fidelity = gate_fidelity(r.final_unitary, target_unitary(target, kind));
  r.solid_angle = solid_angle_phase(curve);
  r.length_spherical = path_length(curve, LengthConvention::Spherical);
  r.length_paramsum = path_length(curve, LengthConvention::ParamSum);
  r.length_note =
      "spherical: arc length on the unit sphere; paramsum: total variation "
      "sum(|dtheta| + |dphi|) of the chart angles. Pole turns count zero in both.";
  r.time_times_cap = envelope_area(curve);
  try {
    r.pulse_areas = pulse_areas(curve);
  } catch (const Error& e) {
    if (e.kind() != ErrorKind::ComplexEnvelope) throw;
    r.pulse_areas.clear();
    r.pulse_areas_real = false;
  }
  return r;
}

std::vector<TrajectoryRow> trajectory(const ParamCurve& curve, GateKind kind,
                                      const PropagatorConfig& cfg, int stride) {
  if (stride < 1) throw Error(ErrorKind::InvalidArgument, "trajectory stride must be >= 1");
  const bool two = kind == GateKind::TwoQubit;
  const HamiltonianSchedule schedule = two ? twoqubit_hamiltonian(curve) : onequbit_hamiltonian(curve);
  const AuxiliaryFrame frame = two ? twoqubit_frame(curve) : onequbit_frame(curve);
  const Matrix initial = lab_chart(curve, kind) * frame.basis(0.0);
  std::vector<TrajectoryRow> rows;
  const std::size_t last = step_grid(schedule, cfg.n_steps).size() - 1;
  std::size_t step = 0;
  propagate(schedule, cfg, [&](double t, const Matrix& u) {
    if (step % stride == 0 || step == last) {
      TrajectoryRow row;
      row.t = t;
      const Matrix h = schedule.at(std::min(t, schedule.tau())).matrix();
      for (Eigen::Index k = 0; k < initial.cols(); ++k) {
        const Vector psi = u * initial.col(k);
        row.energies.push_back(psi.dot(h * psi).real());
        row.states.push_back(psi);
      }
      rows.push_back(std::move(row));
    }
    ++step;
  });
  return rows;
}

}  // namespace geopath
