#include <doctest.h>

#include "geopath/error.hpp"
#include "geopath/evolve.hpp"
#include "oracles.hpp"

using namespace geopath;

namespace {

ParamCurve lune(double dphi) {
  return ParamCurve({Segment(Meridian{0.0, 0.0, kPi}, 0.4995),
                     Segment(LatitudeArc{kPi, 0.0, dphi}, 0.001),
                     Segment(Meridian{dphi, kPi, 0.0}, 0.4995)},
                    1.0);
}

ParamCurve three_segment_curve() {
  return ParamCurve({Segment(Meridian{0.0, 0.0, kPi / 3}, 0.38),
                     Segment(LatitudeArc{kPi / 3, 0.0, kPi / 2}, 0.24),
                     Segment(Meridian{kPi / 2, kPi / 3, 0.0}, 0.38)},
                    1.0);
}

HamiltonianSchedule rotating(double d, double w, double nu, double tau) {
  return HamiltonianSchedule(2, tau, [=](double t) {
    return Matrix(0.5 * d * pauli::z() +
                  0.5 * w * (std::cos(nu * t) * pauli::x() + std::sin(nu * t) * pauli::y()));
  });
}

double error_vs_oracle(const HamiltonianSchedule& s, Method m, int n,
                       const oracle::M2& exact) {
  PropagatorConfig cfg;
  cfg.n_steps = n;
  cfg.method = m;
  cfg.unitarity_tol = 1e-3;
  return (propagate(s, cfg).matrix() - Matrix(exact)).cwiseAbs().maxCoeff();
}

}  // namespace

TEST_SUITE("evolve") {
  TEST_CASE("constant Hamiltonian: midpoint exponential is exact") {
    const Vec3 h(0.3, -0.8, 0.5);
    const HamiltonianSchedule s(2, 2.5, [h](double) { return pauli::dot(h); });
    PropagatorConfig cfg;
    cfg.n_steps = 16;
    const Matrix u = propagate(s, cfg).matrix();
    CHECK((u - Matrix(oracle::su2(h.x(), h.y(), h.z(), 2.5))).cwiseAbs().maxCoeff() < 1e-13);
  }

  TEST_CASE("global error order under step halving") {
    const double d = 1.3, w = 2.1, nu = 3.7, tau = 2.0;
    const HamiltonianSchedule s = rotating(d, w, nu, tau);
    const oracle::M2 exact = oracle::rotating_drive(d, w, nu, tau);
    std::vector<double> ns, mid, rk;
    for (int n = 64; n <= 1024; n *= 2) {
      ns.push_back(n);
      mid.push_back(error_vs_oracle(s, Method::MidpointExponential, n, exact));
      rk.push_back(error_vs_oracle(s, Method::RK4, n, exact));
    }
    CHECK(-oracle::slope(ns, mid) == doctest::Approx(2.0).epsilon(0.05));
    CHECK(-oracle::slope(ns, rk) == doctest::Approx(4.0).epsilon(0.05));
    // RK4 on a constant Hamiltonian is fourth order as well
    const HamiltonianSchedule c(2, 1.0, [](double) { return Matrix(1.5 * pauli::x()); });
    const oracle::M2 cx = oracle::su2(1.5, 0, 0, 1.0);
    const double e1 = error_vs_oracle(c, Method::RK4, 32, cx);
    const double e2 = error_vs_oracle(c, Method::RK4, 64, cx);
    CHECK(std::log2(e1 / e2) == doctest::Approx(4.0).epsilon(0.05));
  }

  TEST_CASE("step grid lands on breakpoints and the observer sees every step") {
    const HamiltonianSchedule s(2, 1.0, [](double t) { return Matrix(t < 0.3 ? pauli::x() : pauli::z()); },
                                {0.3});
    const auto grid = step_grid(s, 100);
    CHECK(std::find(grid.begin(), grid.end(), 0.3) != grid.end());
    CHECK(grid.front() == 0.0);
    CHECK(grid.back() == 1.0);
    PropagatorConfig cfg;
    cfg.n_steps = 100;
    std::vector<double> seen;
    const Matrix u = propagate(s, cfg, [&](double t, const Matrix&) { seen.push_back(t); }).matrix();
    CHECK(seen.size() == grid.size());
    CHECK(std::is_sorted(seen.begin(), seen.end()));
    // Piecewise constant, so exact: exp(-i 0.7 Z) exp(-i 0.3 X)
    const Matrix exact = Matrix(oracle::su2(0, 0, 1, 0.7)) * Matrix(oracle::su2(1, 0, 0, 0.3));
    CHECK((u - exact).cwiseAbs().maxCoeff() < 1e-13);
  }

  TEST_CASE("configuration and unitarity errors") {
    PropagatorConfig cfg;
    cfg.n_steps = 8;
    CHECK_THROWS_AS(cfg.validate(), Error);
    const HamiltonianSchedule big(2, 1.0, [](double) { return Matrix(50.0 * pauli::x()); });
    cfg.n_steps = 16;
    cfg.method = Method::RK4;
    try {
      propagate(big, cfg);
      FAIL("expected UnitarityLost");
    } catch (const Error& e) {
      CHECK(e.kind() == ErrorKind::UnitarityLost);
    }
  }

  TEST_CASE("orange slice report") {
    const GateSpec target(Vec3::UnitZ(), kPi / 8);
    const EvolutionReport r = run_geometric_gate(lune(kPi / 8), GateKind::OneQubit, target);
    CHECK(r.fidelity >= 1 - 1e-8);
    REQUIRE(r.phases_principal.size() == 2);
    CHECK(std::abs(r.phases_principal[0] + kPi / 8) < 1e-8);
    CHECK(std::abs(r.phases_principal[1] - kPi / 8) < 1e-8);
    CHECK(r.pt_residual_max <= 1e-9);
    CHECK(r.pt_grid_points >= 256);
    CHECK(r.cyclicity_defect < 1e-8);
    CHECK(std::abs(r.length_spherical - 2 * kPi) < 1e-12);
    CHECK(r.time_times_cap == doctest::Approx(kPi).epsilon(1e-12));
    CHECK(r.n_steps == 4096);
    const double g0 = geometric_phase_continuous(onequbit_frame(lune(kPi / 8)), 0);
    CHECK(g0 == doctest::Approx(-kPi / 8).epsilon(1e-9));
  }

  TEST_CASE("large enclosed areas keep the continuous phase") {
    const double d = 1.7 * kPi;
    const EvolutionReport r =
        run_geometric_gate(lune(d), GateKind::OneQubit, GateSpec(Vec3::UnitZ(), principal_angle(d)));
    CHECK(r.phases_continuous[0] == doctest::Approx(-d).epsilon(1e-8));
    CHECK(r.phases_principal[0] == doctest::Approx(principal_angle(-d)).epsilon(1e-8));
    CHECK(r.winding[0] == -1);
    CHECK(r.fidelity >= 1 - 1e-8);
  }

  TEST_CASE("two-qubit run keeps |00> and |11> fixed") {
    const GateSpec target(Vec3::UnitZ(), kPi / 8);
    const EvolutionReport r = run_geometric_gate(three_segment_curve(), GateKind::TwoQubit, target);
    CHECK(std::abs(r.final_unitary(0, 0) - 1.0) < 1e-8);
    CHECK(std::abs(r.final_unitary(3, 3) - 1.0) < 1e-8);
    CHECK(r.fidelity >= 1 - 1e-8);
    const Matrix t = target_unitary(target, GateKind::TwoQubit);
    CHECK((t.block(1, 1, 2, 2) - gate_from_spec(target).matrix()).norm() < 1e-15);
  }

  TEST_CASE("open curves are rejected") {
    const ParamCurve open({Segment(Meridian{0, 0, 1}, 1.0)}, 1.0);
    try {
      run_geometric_gate(open, GateKind::OneQubit, GateSpec(Vec3::UnitZ(), 0.1));
      FAIL("expected OpenCurve");
    } catch (const Error& e) {
      CHECK(e.kind() == ErrorKind::OpenCurve);
    }
  }

  TEST_CASE("trajectory rows are normalized and energy free") {
    auto worst_energy = [](int n) {
      PropagatorConfig cfg;
      cfg.n_steps = n;
      const auto rows = trajectory(three_segment_curve(), GateKind::OneQubit, cfg, 32);
      REQUIRE(rows.size() >= 2);
      CHECK(rows.front().t == 0.0);
      CHECK(rows.back().t == doctest::Approx(1.0));
      double worst = 0.0;
      for (const TrajectoryRow& row : rows) {
        for (std::size_t k = 0; k < row.states.size(); ++k) {
          CHECK(row.states[k].norm() == doctest::Approx(1.0).epsilon(1e-12));
          worst = std::max(worst, std::abs(row.energies[k]));
        }
      }
      return worst;
    };
    // the exact states are energy free; what remains is integrator error
    const double coarse = worst_energy(1024);
    const double fine = worst_energy(4096);
    CHECK(fine < 1e-7);
    CHECK(coarse / fine > 12.0);
  }
}
