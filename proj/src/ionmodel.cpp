#include "geopath/ionmodel.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

#include "geopath/error.hpp"
#include "geopath/parallel.hpp"

namespace geopath {

IonModel IonModel::constant(double eta, double omega, double ratio, int n_max) {
  IonModel m;
  m.eta = eta;
  m.delta = ratio * eta * omega;
  m.omega1 = [omega](double) { return Complex(omega, 0.0); };
  m.omega2 = [omega](double) { return Complex(omega, 0.0); };
  m.n_max = n_max;
  m.detuning_ratio = ratio;
  return m;
}

void IonModel::validate() const {
  if (!(std::isfinite(eta) && eta > 0.0)) throw Error(ErrorKind::InvalidArgument, "eta must be positive");
  if (!(std::isfinite(delta) && delta > 0.0)) {
    throw Error(ErrorKind::InvalidArgument, "detuning must be positive");
  }
  if (n_max < 2) throw Error(ErrorKind::InvalidArgument, "Fock cutoff n_max must be >= 2");
  if (!omega1 || !omega2) throw Error(ErrorKind::InvalidArgument, "both Rabi amplitudes are required");
  if (!(std::isfinite(detuning_ratio) && detuning_ratio > 0.0)) {
    throw Error(ErrorKind::InvalidArgument, "detuning ratio must be positive");
  }
}

RegimeCheck check_regime(const IonModel& model, double duration, int samples) {
  model.validate();
  RegimeCheck r;
  r.lamb_dicke = model.eta * model.eta * (model.n_max + 1);
  if (r.lamb_dicke > 0.5) {
    std::ostringstream msg;
    msg << "outside the Lamb-Dicke regime: eta^2 (n_max + 1) = " << r.lamb_dicke << " > 0.5";
    throw Error(ErrorKind::InvalidArgument, msg.str());
  }
  if (r.lamb_dicke > 0.1) {
    std::ostringstream msg;
    msg << "eta^2 (n_max + 1) = " << r.lamb_dicke << " exceeds 0.1";
    r.warnings.push_back(msg.str());
  }
  double peak = 0.0;
  samples = std::max(samples, 2);
  for (int j = 0; j < samples; ++j) {
    const double t = duration * j / (samples - 1);
    peak = std::max({peak, std::abs(model.omega1(t)), std::abs(model.omega2(t))});
  }
  r.detuning_margin = peak > 0.0 ? model.delta / (model.eta * peak)
                                 : std::numeric_limits<double>::infinity();
  r.large_detuning = r.detuning_margin >= model.detuning_ratio * (1.0 - 1e-12);
  if (!r.large_detuning) {
    std::ostringstream msg;
    msg << "delta / (eta max|Omega|) = " << r.detuning_margin << " is below the required "
        << model.detuning_ratio;
    r.warnings.push_back(msg.str());
  }
  return r;
}

namespace {

// Sideband coupling |1 on ion, n + 1> <0 on ion, n|.
struct Coupling {
  int lower;
  int upper;
  int ion;
  double amplitude;  // sqrt(n + 1)
};

std::vector<Coupling> couplings(const IonModel& m) {
  std::vector<Coupling> out;
  for (int other = 0; other < 2; ++other) {
    for (int n = 0; n < m.n_max; ++n) {
      const double a = std::sqrt(static_cast<double>(n + 1));
      out.push_back({m.index(0, other, n), m.index(1, other, n + 1), 1, a});
      out.push_back({m.index(other, 0, n), m.index(other, 1, n + 1), 2, a});
    }
  }
  return out;
}

Complex sideband(const IonModel& m, int ion, double t) {
  const Complex omega = ion == 1 ? m.omega1(t) : m.omega2(t);
  return kI * m.eta * omega * std::exp(Complex(0.0, -m.delta * t));
}

}  // namespace

HermitianMatrix full_hamiltonian(const IonModel& model, double t) {
  model.validate();
  Matrix h = Matrix::Zero(model.dim(), model.dim());
  const Complex g1 = sideband(model, 1, t), g2 = sideband(model, 2, t);
  for (const Coupling& c : couplings(model)) {
    const Complex v = (c.ion == 1 ? g1 : g2) * c.amplitude;
    h(c.upper, c.lower) += v;
    h(c.lower, c.upper) += std::conj(v);
  }
  return HermitianMatrix(h);
}

Complex effective_coupling(const IonModel& model, double t) {
  return model.eta * model.eta * std::conj(model.omega1(t)) * model.omega2(t) / model.delta;
}

HermitianMatrix effective_hamiltonian(const IonModel& model, double t) {
  model.validate();
  const double peak = std::max(std::abs(model.omega1(t)), std::abs(model.omega2(t)));
  if (model.delta < model.detuning_ratio * model.eta * peak * (1.0 - 1e-12)) {
    std::ostringstream msg;
    msg << "large-detuning condition fails: delta = " << model.delta << " < "
        << model.detuning_ratio << " eta max|Omega| = "
        << model.detuning_ratio * model.eta * peak;
    throw Error(ErrorKind::DetuningTooSmall, msg.str());
  }
  Matrix h = Matrix::Zero(4, 4);
  const Complex g = effective_coupling(model, t);
  h(1, 2) = g;
  h(2, 1) = std::conj(g);
  return HermitianMatrix(h);
}

double exchange_duration(const IonModel& model, double area) {
  const double g = std::abs(effective_coupling(model, 0.0));
  if (!(g > 0.0)) throw Error(ErrorKind::Domain, "zero effective coupling never reaches the area");
  return std::abs(area) / g;
}

const char* to_string(DriveShape shape) {
  return shape == DriveShape::Constant ? "constant" : "sine_squared";
}

ExchangePulse exchange_pulse(double eta, double omega, double ratio, int n_max, DriveShape shape,
                             double area) {
  IonModel m = IonModel::constant(eta, omega, ratio, n_max);
  m.validate();
  if (!(omega > 0.0)) throw Error(ErrorKind::InvalidArgument, "drive amplitude must be positive");
  const double rate = std::abs(effective_coupling(m, 0.0));
  if (shape == DriveShape::Constant) return {m, std::abs(area) / rate};
  const double duration = std::abs(area) / (0.375 * rate);
  auto envelope = [omega, duration](double t) {
    const double s = std::sin(kPi * t / duration);
    return Complex(omega * s * s, 0.0);
  };
  m.omega1 = envelope;
  m.omega2 = envelope;
  return {m, duration};
}

namespace {

// States reachable from the support of psi through the sideband couplings.
std::vector<int> reachable(const IonModel& m, const Vector& psi) {
  std::vector<char> seen(m.dim(), 0);
  std::vector<int> stack;
  for (int i = 0; i < m.dim(); ++i) {
    if (psi[i] != Complex(0.0)) {
      seen[i] = 1;
      stack.push_back(i);
    }
  }
  const std::vector<Coupling> cs = couplings(m);
  while (!stack.empty()) {
    const int i = stack.back();
    stack.pop_back();
    for (const Coupling& c : cs) {
      const int j = c.lower == i ? c.upper : (c.upper == i ? c.lower : -1);
      if (j >= 0 && !seen[j]) {
        seen[j] = 1;
        stack.push_back(j);
      }
    }
  }
  std::vector<int> out;
  for (int i = 0; i < m.dim(); ++i) {
    if (seen[i]) out.push_back(i);
  }
  return out;
}

// Full-model propagation restricted to the reachable block.
class BlockPropagator {
 public:
  BlockPropagator(const IonModel& m, const Vector& psi0) : m_(m), idx_(reachable(m, psi0)) {
    std::vector<int> local(m.dim(), -1);
    for (std::size_t k = 0; k < idx_.size(); ++k) local[idx_[k]] = static_cast<int>(k);
    for (const Coupling& c : couplings(m)) {
      if (local[c.lower] >= 0 && local[c.upper] >= 0) {
        links_.push_back({local[c.lower], local[c.upper], c.ion, c.amplitude});
      }
    }
    psi_ = Vector(idx_.size());
    for (std::size_t k = 0; k < idx_.size(); ++k) psi_[k] = psi0[idx_[k]];
  }

  void step(double t, double dt) {
    const int n = static_cast<int>(idx_.size());
    Matrix h = Matrix::Zero(n, n);
    const double tm = t + 0.5 * dt;
    const Complex g1 = sideband(m_, 1, tm), g2 = sideband(m_, 2, tm);
    for (const Coupling& c : links_) {
      const Complex v = (c.ion == 1 ? g1 : g2) * c.amplitude;
      h(c.upper, c.lower) += v;
      h(c.lower, c.upper) += std::conj(v);
    }
    psi_ = expi_hermitian(h, dt) * psi_;
  }

  Vector full_state() const {
    Vector out = Vector::Zero(m_.dim());
    for (std::size_t k = 0; k < idx_.size(); ++k) out[idx_[k]] = psi_[k];
    return out;
  }

  // Qubit amplitudes of the vacuum sector.
  Vector vacuum_part() const {
    Vector out = Vector::Zero(4);
    for (std::size_t k = 0; k < idx_.size(); ++k) {
      if (idx_[k] % (m_.n_max + 1) == 0) out[idx_[k] / (m_.n_max + 1)] = psi_[k];
    }
    return out;
  }

  double top_population() const {
    double p = 0.0;
    for (std::size_t k = 0; k < idx_.size(); ++k) {
      if (idx_[k] % (m_.n_max + 1) == m_.n_max) p += std::norm(psi_[k]);
    }
    return p;
  }

  double norm() const { return psi_.norm(); }

 private:
  const IonModel& m_;
  std::vector<int> idx_;
  std::vector<Coupling> links_;
  Vector psi_;
};

Vector lift_vacuum(const IonModel& m, const Vector& qubits) {
  Vector psi = Vector::Zero(m.dim());
  for (int q = 0; q < 4; ++q) psi[q * (m.n_max + 1)] = qubits[q];
  return psi;
}

int step_count(const IonModel& m, double duration, double steps_per_period) {
  const double periods = duration * m.delta / (2.0 * kPi);
  return std::max(16, static_cast<int>(std::ceil(periods * steps_per_period)));
}

Vector run_full(const IonModel& m, const Vector& qubits, double duration, double steps_per_period) {
  BlockPropagator full(m, lift_vacuum(m, qubits));
  const int n = step_count(m, duration, steps_per_period);
  const double dt = duration / n;
  for (int j = 0; j < n; ++j) full.step(j * dt, dt);
  return full.full_state();
}

}  // namespace

ReductionReport reduction_check(const IonModel& model, double duration,
                                const ReductionConfig& cfg) {
  model.validate();
  if (!(std::isfinite(duration) && duration >= 0.0)) {
    throw Error(ErrorKind::InvalidArgument, "duration must be non-negative");
  }
  if (cfg.initial_qubits.size() != 4) {
    throw Error(ErrorKind::DimensionMismatch, "initial qubit state must have 4 amplitudes");
  }
  const StateVector qubits(cfg.initial_qubits, 1e-12);
  if (!(cfg.steps_per_period >= 1.0)) {
    throw Error(ErrorKind::InvalidArgument, "steps_per_period must be >= 1");
  }
  ReductionReport r;
  const RegimeCheck regime = check_regime(model, duration);
  r.warnings = regime.warnings;

  BlockPropagator full(model, lift_vacuum(model, qubits.amplitudes()));
  Vector eff = qubits.amplitudes();
  const int n = step_count(model, duration, cfg.steps_per_period);
  const double dt = duration / n;
  r.n_steps = n;
  for (int j = 0; j < n; ++j) {
    const double t = j * dt;
    full.step(t, dt);
    eff = expi_hermitian(effective_hamiltonian(model, t + 0.5 * dt).matrix(), dt) * eff;
    const double f = std::abs(eff.dot(full.vacuum_part()));
    r.worst_infidelity = std::max(r.worst_infidelity, 1.0 - f);
    r.cutoff_population = std::max(r.cutoff_population, full.top_population());
  }
  if (std::abs(full.norm() - 1.0) > 1e-9) {
    throw Error(ErrorKind::UnitarityLost, "full-model norm drifted beyond 1e-9");
  }
  if (r.cutoff_population > cfg.cutoff_tol) {
    std::ostringstream msg;
    msg << "population " << r.cutoff_population << " reaches the Fock cutoff n_max = "
        << model.n_max << "; raise n_max";
    throw Error(ErrorKind::CutoffTooSmall, msg.str());
  }
  const Vector p = full.vacuum_part();
  const Complex overlap = eff.dot(p);
  r.subspace_fidelity = std::abs(overlap);
  r.phase_error = std::arg(overlap);
  r.leakage = std::max(0.0, 1.0 - p.squaredNorm());

  if (cfg.probe_fraction > 0.0 && duration > 0.0) {
    const double probe = cfg.probe_fraction * duration;
    IonModel doubled = model;
    doubled.n_max = 2 * model.n_max;
    const Vector a = run_full(model, qubits.amplitudes(), probe, cfg.steps_per_period);
    const Vector b = run_full(doubled, qubits.amplitudes(), probe, cfg.steps_per_period);
    double diff2 = 0.0;
    for (int q = 0; q < 4; ++q) {
      for (int k = 0; k <= 2 * model.n_max; ++k) {
        const Complex bv = b[q * (doubled.n_max + 1) + k];
        const Complex av = k <= model.n_max ? a[q * (model.n_max + 1) + k] : Complex(0.0);
        diff2 += std::norm(av - bv);
      }
    }
    r.cutoff_change = std::sqrt(diff2);
    if (r.cutoff_change > cfg.probe_tol) {
      std::ostringstream msg;
      msg << "doubling n_max changes the probe state by " << r.cutoff_change;
      throw Error(ErrorKind::CutoffTooSmall, msg.str());
    }
  }
  return r;
}

std::vector<ReductionRow> reduction_sweep(double eta, double omega,
                                          const std::vector<double>& ratios, int n_max,
                                          double area, DriveShape shape,
                                          const ReductionConfig& cfg) {
  if (ratios.empty()) throw Error(ErrorKind::InvalidArgument, "ratio list is empty");
  const double threshold = *std::min_element(ratios.begin(), ratios.end());
  std::vector<ReductionRow> rows(ratios.size());
  parallel_for(ratios.size(), [&](std::size_t i) {
    ExchangePulse p = exchange_pulse(eta, omega, ratios[i], n_max, shape, area);
    p.model.detuning_ratio = threshold;
    rows[i] = {ratios[i], eta, n_max, shape, reduction_check(p.model, p.duration, cfg)};
  });
  return rows;
}

double loglog_slope(const std::vector<double>& x, const std::vector<double>& y) {
  if (x.size() != y.size() || x.size() < 2) {
    throw Error(ErrorKind::InvalidArgument, "slope fit needs >= 2 matching points");
  }
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  const double n = static_cast<double>(x.size());
  for (std::size_t i = 0; i < x.size(); ++i) {
    if (!(x[i] > 0.0 && y[i] > 0.0)) {
      throw Error(ErrorKind::Domain, "log-log fit needs positive values");
    }
    const double lx = std::log(x[i]), ly = std::log(y[i]);
    sx += lx;
    sy += ly;
    sxx += lx * lx;
    sxy += lx * ly;
  }
  return (n * sxy - sx * sy) / (n * sxx - sx * sx);
}

HamiltonianSchedule exchange_schedule(const ParamCurve& curve) {
  auto eval = [curve](double t) {
    const Vec3 h = onequbit_field(curve, t);
    if (std::abs(h.z()) > 1e-12) {
      std::ostringstream msg;
      msg << "exchange coupling cannot supply the R^z term " << h.z() << " at t = " << t;
      throw Error(ErrorKind::Domain, msg.str());
    }
    Matrix m = Matrix::Zero(4, 4);
    m(1, 2) = Complex(h.x(), -h.y());
    m(2, 1) = Complex(h.x(), h.y());
    return m;
  };
  const std::vector<double> times = curve.segment_times();
  return HamiltonianSchedule(4, curve.tau(),
                             eval, std::vector<double>(times.begin() + 1, times.end() - 1));
}

}  // namespace geopath
