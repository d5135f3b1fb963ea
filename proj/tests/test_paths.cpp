#include <doctest.h>

#include <random>

#include "geopath/error.hpp"
#include "geopath/paths.hpp"
#include "oracles.hpp"

using namespace geopath;

namespace {

ParamCurve three_segment(double theta_mid, double dphi) {
  return ParamCurve({Segment(Meridian{0.0, 0.0, theta_mid}, 0.3),
                     Segment(LatitudeArc{theta_mid, 0.0, dphi}, 0.4),
                     Segment(Meridian{dphi, theta_mid, 0.0}, 0.3)},
                    1.0);
}

ParamCurve lune(double dphi) {
  return ParamCurve({Segment(Meridian{0.0, 0.0, kPi}, 0.4995),
                     Segment(LatitudeArc{kPi, 0.0, dphi}, 0.001),
                     Segment(Meridian{dphi, kPi, 0.0}, 0.4995)},
                    1.0);
}

std::vector<Vec3> loop_points(const ParamCurve& c, int n) {
  std::vector<Vec3> pts;
  for (int i = 0; i <= n; ++i) pts.push_back(c.at(c.tau() * i / n).r);
  return pts;
}

ErrorKind kind_of(const std::function<void()>& f) {
  try {
    f();
  } catch (const Error& e) {
    return e.kind();
  }
  FAIL("no geopath::Error thrown");
  return ErrorKind::Io;
}

}  // namespace

TEST_SUITE("paths") {
  TEST_CASE("three-segment loop: solid angle, fan oracle and lengths") {
    const ParamCurve c = three_segment(kPi / 3, kPi / 2);
    CHECK(solid_angle_phase(c) == doctest::Approx(kPi / 8).epsilon(1e-13));
    CHECK(oracle::fan_phase(loop_points(c, 20000)) == doctest::Approx(kPi / 8).epsilon(1e-7));
    CHECK(std::abs(path_length(c, LengthConvention::ParamSum) - 7 * kPi / 6) < 1e-12);
    CHECK(std::abs(path_length(c, LengthConvention::Spherical) -
                   (2 * kPi / 3 + std::sqrt(3.0) * kPi / 4)) < 1e-12);
  }

  TEST_CASE("lune through both poles") {
    for (double d : {kPi / 8, kPi / 4, kPi, 1.7 * kPi}) {
      const ParamCurve c = lune(d);
      CHECK(c.segments()[1].is_pole_turn());
      CHECK(solid_angle_phase(c) == doctest::Approx(d).epsilon(1e-13));
      CHECK(path_length(c, LengthConvention::Spherical) == doctest::Approx(2 * kPi));
    }
  }

  TEST_CASE("tilted circle against the fan oracle") {
    const Vec3 axis = Vec3(0.4, -0.3, 0.8).normalized();
    for (double radius : {0.2, 0.6, 1.0}) {
      for (double sweep : {2 * kPi, -2 * kPi}) {
        const ParamCurve c({Segment(TiltedCircle{axis, radius, 0.3, sweep}, 1.0)}, 1.0);
        REQUIRE(c.is_closed());
        const double fan = oracle::fan_phase(loop_points(c, 20000));
        CHECK(solid_angle_phase(c) == doctest::Approx(fan).epsilon(1e-7));
        CHECK(path_length(c, LengthConvention::Spherical) ==
              doctest::Approx(2 * kPi * std::sin(radius)).epsilon(1e-10));
      }
    }
  }

  TEST_CASE("custom path against the fan oracle") {
    CustomPath p;
    const int n = 41;
    for (int i = 0; i < n; ++i) {
      const double s = static_cast<double>(i) / (n - 1);
      p.s.push_back(s);
      p.theta.push_back(0.9 + 0.3 * std::sin(2 * kPi * s));
      p.phi.push_back(2 * kPi * s);
    }
    p.s.back() = 1.0;
    const ParamCurve c({Segment(p, 1.0)}, 1.0);
    CHECK(solid_angle_phase(c) ==
          doctest::Approx(oracle::fan_phase(loop_points(c, 40000))).epsilon(1e-7));
  }

  TEST_CASE("reversal flips the enclosed phase") {
    const ParamCurve c = three_segment(1.1, 2.0);
    CHECK(solid_angle_phase(c.reversed()) == doctest::Approx(-solid_angle_phase(c)));
    CHECK(path_length(c.reversed(), LengthConvention::Spherical) ==
          doctest::Approx(path_length(c, LengthConvention::Spherical)));
  }

  TEST_CASE("property: random three-segment loops enclose (1 - cos theta) dphi / 2") {
    std::mt19937_64 rng(3);
    std::uniform_real_distribution<double> th(0.05, kPi - 0.05), ph(-2 * kPi, 2 * kPi);
    for (int k = 0; k < 40; ++k) {
      const double t = th(rng), d = ph(rng);
      const ParamCurve c = three_segment(t, d);
      CHECK(solid_angle_phase(c) == doctest::Approx(0.5 * (1 - std::cos(t)) * d).epsilon(1e-12));
      CHECK(path_length(c, LengthConvention::ParamSum) ==
            doctest::Approx(2 * t + std::abs(d)).epsilon(1e-12));
    }
  }

  TEST_CASE("minimal circle") {
    const ParamCurve c = min_circle_curve(GateSpec(Vec3::UnitZ(), kPi / 8));
    CHECK(std::abs(path_length(c, LengthConvention::Spherical) - std::sqrt(15.0) * kPi / 4) < 1e-10);
    CHECK(solid_angle_phase(c) == doctest::Approx(kPi / 8).epsilon(1e-10));
    CHECK((c.start_point() - Vec3::UnitZ()).norm() < 1e-14);
    for (double g : {kPi / 16, kPi / 4, kPi / 2, 3 * kPi / 4, -kPi / 3}) {
      const ParamCurve m = min_circle_curve(GateSpec(Vec3::UnitZ(), g));
      const double rho = std::acos(1 - std::abs(g) / kPi);
      CHECK(path_length(m, LengthConvention::Spherical) ==
            doctest::Approx(2 * kPi * std::sin(rho)).epsilon(1e-10));
      CHECK(solid_angle_phase(m) == doctest::Approx(g).epsilon(1e-9));
    }
    // gamma = pi: the great circle, emitted with a pole turn
    const ParamCurve big = min_circle_curve(GateSpec(Vec3::UnitZ(), kPi));
    CHECK(solid_angle_phase(big) == doctest::Approx(kPi));
    CHECK(path_length(big, LengthConvention::Spherical) == doctest::Approx(2 * kPi));
  }

  TEST_CASE("rate profiles are monotone maps of [0, 1] with exact endpoints") {
    const RateProfile w = RateProfile::sine_series({0.4, -0.3}).after(RateProfile::power(1.7));
    CHECK(w.value(0.0) == 0.0);
    CHECK(w.value(1.0) == doctest::Approx(1.0).epsilon(1e-15));
    double prev = -1.0;
    for (int i = 0; i <= 200; ++i) {
      const double u = i / 200.0;
      const double v = w.value(u);
      CHECK(v > prev);
      prev = v;
      CHECK(w.inverse(v) == doctest::Approx(u).epsilon(1e-10));
      if (i > 0 && i < 200) {
        const double h = 1e-6;
        CHECK(w.derivative(u) == doctest::Approx((w.value(u + h) - w.value(u - h)) / (2 * h))
                                     .epsilon(1e-6));
      }
    }
    CHECK_THROWS_AS(RateProfile::power(0.5), Error);
    CHECK_THROWS_AS(RateProfile::sine_series({0.7, 0.4}), Error);
    CHECK(RateProfile().is_identity());
  }

  TEST_CASE("reparameterized curves trace the same image") {
    const ParamCurve c = three_segment(kPi / 3, kPi / 2);
    const ParamCurve w = c.with_rate_profile(RateProfile::power(2.0));
    for (int i = 0; i <= 50; ++i) {
      const double u = i / 50.0;
      CHECK((w.at(u).r - c.at(u * u).r).norm() < 1e-12);
    }
    CHECK(solid_angle_phase(w) == doctest::Approx(solid_angle_phase(c)));
  }

  TEST_CASE("chart rotations carry the north pole to the chosen axis") {
    for (const Vec3& pole : {Vec3(Vec3::UnitX()), Vec3(-Vec3::UnitZ()),
                             Vec3(Vec3(1, 1, 1).normalized()), Vec3(Vec3::UnitZ())}) {
      const Mat3 r = chart_rotation_for(pole);
      CHECK((r * Vec3::UnitZ() - pole).norm() < 1e-14);
      CHECK(std::abs(r.determinant() - 1.0) < 1e-14);
    }
  }

  TEST_CASE("sample unwraps phi across circles") {
    const ParamCurve c({Segment(TiltedCircle{Vec3(0.2, 0, 1).normalized(), 0.5, 0.0, 2 * kPi}, 1.0)},
                       1.0);
    const auto s = sample(c, 400);
    REQUIRE(s.size() == 401);
    for (std::size_t i = 1; i < s.size(); ++i) CHECK(std::abs(s[i].phi - s[i - 1].phi) < 0.2);
    CHECK(s.back().phi - s.front().phi == doctest::Approx(2 * kPi).epsilon(1e-9));
  }

  TEST_CASE("construction errors") {
    CHECK(kind_of([] { Segment(Meridian{0, 0, 4.0}, 0.5); }) == ErrorKind::InvalidArgument);
    CHECK(kind_of([] { Segment(Meridian{0, 0, 1.0}, 0.0); }) == ErrorKind::InvalidArgument);
    CHECK(kind_of([] { Segment(TiltedCircle{Vec3(1, 1, 0), 0.3, 0, 1}, 1.0); }) ==
          ErrorKind::InvalidArgument);
    // fractions must sum to one
    CHECK(kind_of([] {
            ParamCurve({Segment(Meridian{0, 0, 1}, 0.5), Segment(Meridian{0, 1, 0}, 0.4)}, 1.0);
          }) == ErrorKind::InvalidArgument);
    // segments must chain
    CHECK(kind_of([] {
            ParamCurve({Segment(Meridian{0, 0, 1}, 0.5), Segment(Meridian{0, 1.1, 0}, 0.5)}, 1.0);
          }) == ErrorKind::InvalidArgument);
    CHECK(kind_of([] { ParamCurve({Segment(Meridian{0, 0, 1}, 1.0)}, -1.0); }) ==
          ErrorKind::InvalidArgument);
    // an open curve has no enclosed area
    const ParamCurve open({Segment(Meridian{0, 0, 1}, 1.0)}, 1.0);
    CHECK_FALSE(open.is_closed());
    CHECK(kind_of([&] { solid_angle_phase(open); }) == ErrorKind::OpenCurve);
    CHECK(kind_of([&] { open.require_closed(); }) == ErrorKind::OpenCurve);
  }

  TEST_CASE("segment windows and locate") {
    const ParamCurve c = three_segment(1.0, 1.0).with_tau(2.0);
    const auto times = c.segment_times();
    REQUIRE(times.size() == 4);
    CHECK(times[1] == doctest::Approx(0.6));
    CHECK(times[3] == doctest::Approx(2.0));
    const auto loc = c.locate(0.9);
    CHECK(loc.segment == 1);
    CHECK(loc.s == doctest::Approx(0.375));
    CHECK(loc.ds_dt == doctest::Approx(1.0 / 0.8));
  }
}
