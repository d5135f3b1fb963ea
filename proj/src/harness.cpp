#include "geopath/harness.hpp"

#include <cmath>
#include <sstream>

#include "geopath/error.hpp"
#include "geopath/parallel.hpp"

namespace geopath {

ErrorModel ErrorModel::amplitude(double eps) {
  ErrorModel e;
  e.kind = Kind::AmplitudeScale;
  e.magnitude = eps;
  e.label = "amplitude";
  return e;
}

ErrorModel ErrorModel::detuning(double d) {
  ErrorModel e;
  e.kind = Kind::DetuningOffset;
  e.magnitude = d;
  e.label = "detuning";
  return e;
}

ErrorModel ErrorModel::time_warp(RateProfile warp, std::string label) {
  ErrorModel e;
  e.kind = Kind::TimeWarp;
  e.warp = std::move(warp);
  e.label = std::move(label);
  return e;
}

void ErrorModel::validate() const {
  if (!std::isfinite(magnitude) || std::abs(magnitude) > 0.2) {
    throw Error(ErrorKind::InvalidArgument, "error magnitude must be finite with |magnitude| <= 0.2");
  }
}

const char* to_string(ErrorModel::Kind kind) {
  switch (kind) {
    case ErrorModel::Kind::AmplitudeScale:
      return "amplitude_scale";
    case ErrorModel::Kind::DetuningOffset:
      return "detuning_offset";
    case ErrorModel::Kind::TimeWarp:
      return "time_warp";
  }
  return "unknown";
}

HamiltonianSchedule apply_error(const HamiltonianSchedule& schedule, const ErrorModel& err) {
  err.validate();
  const auto base = schedule.evaluator();
  const auto controls = schedule.control_evaluator();
  const int dim = schedule.dim();
  const double tau = schedule.tau();
  switch (err.kind) {
    case ErrorModel::Kind::AmplitudeScale: {
      const double scale = 1.0 + err.magnitude;
      auto eval = [base, scale](double t) {
        Matrix m = base(t);
        const Matrix diag = m.diagonal().asDiagonal();
        return Matrix(diag + scale * (m - diag));
      };
      HamiltonianSchedule::ControlEvaluator c;
      if (controls) {
        c = [controls, scale](double t) {
          ControlSignals s = controls(t);
          s.rabi *= scale;
          s.cx *= scale;
          s.cy *= scale;
          return s;
        };
      }
      return HamiltonianSchedule(dim, tau, eval, schedule.breakpoints(), c);
    }
    case ErrorModel::Kind::DetuningOffset: {
      Matrix offset;
      if (dim == 2) {
        offset = 0.5 * err.magnitude * pauli::z();
      } else if (dim == 4) {
        offset = 0.5 * err.magnitude * exchange::rz();
      } else {
        throw Error(ErrorKind::DimensionMismatch, "detuning offset needs a 2- or 4-level schedule");
      }
      auto eval = [base, offset](double t) { return Matrix(base(t) + offset); };
      HamiltonianSchedule::ControlEvaluator c;
      if (controls) {
        const double d = err.magnitude;
        c = [controls, d](double t) {
          ControlSignals s = controls(t);
          s.delta -= 0.5 * d;
          s.cz += 0.5 * d;
          return s;
        };
      }
      return HamiltonianSchedule(dim, tau, eval, schedule.breakpoints(), c);
    }
    case ErrorModel::Kind::TimeWarp: {
      const RateProfile w = err.warp;
      auto eval = [base, w, tau](double t) {
        const double u = t / tau;
        return Matrix(w.derivative(u) * base(tau * w.value(u)));
      };
      std::vector<double> bps;
      for (double b : schedule.breakpoints()) bps.push_back(tau * w.inverse(b / tau));
      HamiltonianSchedule::ControlEvaluator c;
      if (controls) {
        c = [controls, w, tau](double t) {
          const double u = t / tau;
          const double rate = w.derivative(u);
          ControlSignals s = controls(tau * w.value(u));
          s.delta *= rate;
          s.rabi *= rate;
          s.cx *= rate;
          s.cy *= rate;
          s.cz *= rate;
          return s;
        };
      }
      return HamiltonianSchedule(dim, tau, eval, bps, c);
    }
  }
  throw Error(ErrorKind::InvalidArgument, "unknown error model");
}

std::vector<RateProfile> random_warps(std::uint64_t seed, int count, int terms) {
  if (count < 0 || terms < 1) throw Error(ErrorKind::InvalidArgument, "bad warp count");
  SeededUniform rng(seed);
  std::vector<RateProfile> out;
  for (int i = 0; i < count; ++i) {
    std::vector<double> coeffs(terms);
    double total = 0.0;
    for (double& a : coeffs) {
      a = 2.0 * rng.next() - 1.0;
      total += std::abs(a);
    }
    const double budget = 0.9 * rng.next();
    for (double& a : coeffs) a *= budget / total;
    RateProfile warp = RateProfile::sine_series(coeffs);
    if (rng.next() < 0.5) {
      // Integer powers keep the rate smooth at u = 0 so the integrator keeps
      // its order on the warped schedule.
      warp = warp.after(RateProfile::power(rng.next() < 0.5 ? 2.0 : 3.0));
    }
    out.push_back(std::move(warp));
  }
  return out;
}

SweepTable fidelity_sweep(const GateSpec& spec, const std::vector<PathPlan>& plans,
                          const std::vector<ErrorModel>& errors, const PropagatorConfig& cfg) {
  if (plans.empty()) throw Error(ErrorKind::InvalidArgument, "no plans to sweep");
  for (const ErrorModel& e : errors) e.validate();
  cfg.validate();
  std::vector<ErrorModel> grid{ErrorModel::amplitude(0.0)};
  grid.front().label = "none";
  grid.insert(grid.end(), errors.begin(), errors.end());

  const Matrix ideal = gate_from_spec(spec).matrix();
  const std::size_t per_plan = grid.size();
  SweepTable table;
  table.rows.resize(plans.size() * per_plan);
  parallel_for(table.rows.size(), [&](std::size_t i) {
    const PathPlan& plan = plans[i / per_plan];
    const ErrorModel& err = grid[i % per_plan];
    const HamiltonianSchedule s = apply_error(onequbit_hamiltonian(plan.curve), err);
    SweepRow& row = table.rows[i];
    row.family = to_string(plan.family);
    row.gamma = spec.half_angle();
    row.axis = spec.axis();
    row.error_kind = (i % per_plan == 0) ? "none" : to_string(err.kind);
    row.magnitude = err.magnitude;
    row.label = err.label;
    row.fidelity = gate_fidelity(propagate(s, cfg).matrix(), ideal);
  });
  for (std::size_t p = 0; p < plans.size(); ++p) {
    if (table.rows[p * per_plan].fidelity < 1.0 - 1e-6) table.sanity_ok = false;
  }
  return table;
}

}  // namespace geopath
