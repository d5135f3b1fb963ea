#include <doctest.h>

#include "geopath/error.hpp"
#include "geopath/paths.hpp"
#include "geopath/synth.hpp"
#include "oracles.hpp"

using namespace geopath;

namespace {

ParamCurve orange_curve() {
  return ParamCurve({Segment(Meridian{0.0, 0.0, kPi}, 0.4995),
                     Segment(LatitudeArc{kPi, 0.0, kPi / 8}, 0.001),
                     Segment(Meridian{kPi / 8, kPi, 0.0}, 0.4995)},
                    1.0);
}

ParamCurve three_segment_curve() {
  return ParamCurve({Segment(Meridian{0.0, 0.0, kPi / 3}, 0.38),
                     Segment(LatitudeArc{kPi / 3, 0.0, kPi / 2}, 0.24),
                     Segment(Meridian{kPi / 2, kPi / 3, 0.0}, 0.38)},
                    1.0);
}

ParamCurve circle() {
  return ParamCurve({Segment(TiltedCircle{Vec3(0.3, 0.1, 1).normalized(), 0.7, 0.4, 2 * kPi}, 1.0)},
                    1.0);
}

double max_entry(const Matrix& m) { return m.cwiseAbs().maxCoeff(); }

AuxiliaryFrame numeric(AuxiliaryFrame f, double h) {
  f.derivative = nullptr;
  f.fd_step = h;
  return f;
}

}  // namespace

TEST_SUITE("synth") {
  TEST_CASE("meridian field is (theta'/2) sigma_y") {
    const ParamCurve c = orange_curve();
    const double rate = kPi / 0.4995;
    for (double t : {0.05, 0.2, 0.45}) {
      const Matrix h = onequbit_hamiltonian(c).at(t).matrix();
      CHECK(max_entry(h - 0.5 * rate * pauli::y()) < 1e-12);
      const ControlSignals s = onequbit_hamiltonian(c).controls(t);
      CHECK(std::abs(s.delta) < 1e-12);
      CHECK(std::abs(s.rabi - Complex(0, rate / 2)) < 1e-12);
    }
  }

  TEST_CASE("latitude arc field: detuning and drive from h = (r x r')/2") {
    const ParamCurve c = three_segment_curve();
    const double th = kPi / 3, rate = (kPi / 2) / 0.24;
    const double t = 0.38 + 0.1;
    const double phi = rate * 0.1;
    const Vec3 r(std::sin(th) * std::cos(phi), std::sin(th) * std::sin(phi), std::cos(th));
    const Vec3 dr(-std::sin(th) * std::sin(phi) * rate, std::sin(th) * std::cos(phi) * rate, 0.0);
    const Vec3 h = 0.5 * r.cross(dr);
    CHECK((onequbit_field(c, t) - h).norm() < 1e-12);
    const ControlSignals s = onequbit_hamiltonian(c).controls(t);
    CHECK(s.delta == doctest::Approx(-h.z()));
    CHECK(std::abs(s.rabi - Complex(h.x(), h.y())) < 1e-12);
    // envelope = rabi e^{-i phi} = (i theta' - phi' sin cos) / 2
    CHECK(std::abs(s.rabi * std::exp(Complex(0, -s.drive_phase)) -
                   Complex(-0.5 * rate * std::sin(th) * std::cos(th), 0.0)) < 1e-12);
  }

  TEST_CASE("parallel transport: the field is orthogonal to the path") {
    for (const ParamCurve& c : {orange_curve(), three_segment_curve(), circle()}) {
      for (int i = 1; i < 200; ++i) {
        const double t = i / 200.0;
        CHECK(std::abs(onequbit_field(c, t).dot(c.at(t).r)) < 1e-12);
      }
    }
  }

  TEST_CASE("closed form agrees with the frame construction") {
    for (const ParamCurve& c : {orange_curve(), three_segment_curve(), circle()}) {
      const AuxiliaryFrame f = onequbit_frame(c);
      validate_frame(f);
      const HamiltonianSchedule a = frame_to_hamiltonian(f);
      const HamiltonianSchedule b = onequbit_hamiltonian(c);
      for (int i = 1; i < 50; ++i) {
        const double t = (i + 0.37) / 50.0;
        CHECK(max_entry(a.at(t).matrix() - b.at(t).matrix()) < 1e-10);
      }
    }
  }

  TEST_CASE("finite-difference frame Hamiltonian converges at second order") {
    const ParamCurve c = circle();
    const HamiltonianSchedule exact = onequbit_hamiltonian(c);
    std::vector<double> hs, errs;
    for (double h = 1e-2; h > 1e-3; h /= 2) {
      const HamiltonianSchedule fd = frame_to_hamiltonian(numeric(onequbit_frame(c), h));
      double e = 0.0;
      for (double t : {0.13, 0.41, 0.77}) {
        e = std::max(e, max_entry(fd.at(t).matrix() - exact.at(t).matrix()));
      }
      hs.push_back(h);
      errs.push_back(e);
    }
    CHECK(oracle::slope(hs, errs) == doctest::Approx(2.0).epsilon(0.05));
    const RichardsonReport r = richardson_check(numeric(onequbit_frame(c), 0.0), 0.41, 1e-2);
    CHECK(r.order == doctest::Approx(2.0).epsilon(0.05));
  }

  TEST_CASE("one-sided differences next to breakpoints stay accurate") {
    const ParamCurve c = three_segment_curve();
    const HamiltonianSchedule fd = frame_to_hamiltonian(numeric(onequbit_frame(c), 1e-5));
    const HamiltonianSchedule exact = onequbit_hamiltonian(c);
    for (double t : {0.38 - 1e-7, 0.38 + 1e-7, 0.62 - 2e-6, 1e-7, 1.0 - 1e-7}) {
      CHECK(max_entry(fd.at(t).matrix() - exact.at(t).matrix()) < 1e-6);
    }
  }

  TEST_CASE("frame validation") {
    AuxiliaryFrame bad = constant_frame(2, 1.0);
    bad.basis = [](double t) {
      Matrix m = Matrix::Identity(2, 2);
      m(0, 1) = 0.1 * t;
      return m;
    };
    try {
      validate_frame(bad);
      FAIL("expected FrameNotOrthonormal");
    } catch (const Error& e) {
      CHECK(e.kind() == ErrorKind::FrameNotOrthonormal);
    }
    AuxiliaryFrame open = constant_frame(2, 1.0);
    open.basis = [](double t) {
      Matrix m = Matrix::Identity(2, 2);
      m(0, 0) = std::cos(t);
      m(1, 0) = std::sin(t);
      m(0, 1) = -std::sin(t);
      m(1, 1) = std::cos(t);
      return m;
    };
    try {
      validate_frame(open);
      FAIL("expected NonCyclicFrame");
    } catch (const Error& e) {
      CHECK(e.kind() == ErrorKind::NonCyclicFrame);
    }
    // A constant frame gives H = 0.
    const HamiltonianSchedule z = frame_to_hamiltonian(constant_frame(3, 2.0));
    CHECK(max_entry(z.at(0.7).matrix()) == 0.0);
  }

  TEST_CASE("pulse areas of the reference paths") {
    const auto a1 = pulse_areas(orange_curve());
    REQUIRE(a1.size() == 2);
    CHECK(std::abs(a1[0] - kPi / 2) < 1e-10);
    CHECK(std::abs(a1[1] + kPi / 2) < 1e-10);
    const auto a2 = pulse_areas(three_segment_curve());
    REQUIRE(a2.size() == 3);
    CHECK(std::abs(a2[0] - kPi / 6) < 1e-10);
    CHECK(std::abs(a2[1] + std::sqrt(3.0) * kPi / 16) < 1e-10);
    CHECK(std::abs(a2[2] + kPi / 6) < 1e-10);
    CHECK(envelope_area(three_segment_curve()) ==
          doctest::Approx(kPi / 3 + std::sqrt(3.0) * kPi / 16).epsilon(1e-12));
    try {
      pulse_area(circle().segments()[0]);
      FAIL("expected ComplexEnvelope");
    } catch (const Error& e) {
      CHECK(e.kind() == ErrorKind::ComplexEnvelope);
    }
  }

  TEST_CASE("circle envelope area against direct quadrature") {
    // |Omega| = |(h_x, h_y)|
    const ParamCurve c = circle();
    double sum = 0.0;
    const int n = 20000;
    for (int i = 0; i < n; ++i) {
      const double t = (i + 0.5) / n;
      const Vec3 f = onequbit_field(c, t);
      sum += std::hypot(f.x(), f.y()) / n;
    }
    CHECK(envelope_area(c) == doctest::Approx(sum).epsilon(1e-7));
  }

  TEST_CASE("two-qubit schedule: identity on |00>, |11>, one-qubit field on the block") {
    const ParamCurve c = three_segment_curve();
    const HamiltonianSchedule two = twoqubit_hamiltonian(c);
    const HamiltonianSchedule one = onequbit_hamiltonian(c);
    for (double t : {0.1, 0.5, 0.9}) {
      const Matrix h = two.at(t).matrix();
      CHECK(h.row(0).norm() == 0.0);
      CHECK(h.row(3).norm() == 0.0);
      CHECK(max_entry(h.block(1, 1, 2, 2) - one.at(t).matrix()) < 1e-13);
      const ControlSignals s = two.controls(t);
      const Vec3 f = onequbit_field(c, t);
      CHECK(s.cx == doctest::Approx(f.x()));
      CHECK(s.cy == doctest::Approx(-f.y()));
      CHECK(s.cz == doctest::Approx(f.z()));
    }
    // R^y restricted to the block is -sigma_y
    CHECK(max_entry(exchange::ry().block(1, 1, 2, 2) + pauli::y()) == 0.0);
  }

  TEST_CASE("schedule bookkeeping") {
    const HamiltonianSchedule s(2, 1.0, [](double) { return Matrix(pauli::x()); }, {0.7, 0.2});
    const auto k = s.knots();
    REQUIRE(k.size() == 4);
    CHECK(k[1] == 0.2);
    CHECK(k[2] == 0.7);
    // breakpoints outside (0, tau) carry no information and are dropped
    const HamiltonianSchedule t(2, 1.0, [](double) { return Matrix(pauli::x()); }, {1.5, 0.0});
    CHECK(t.breakpoints().empty());
    CHECK_THROWS_AS(HamiltonianSchedule(2, -1.0, [](double) { return Matrix(pauli::x()); }), Error);
  }
}
