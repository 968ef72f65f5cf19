#include <catch2/catch_amalgamated.hpp>

#include "pegdiff/insertion_teacher.hpp"

using namespace pegdiff;
using Catch::Approx;

TEST_CASE("residual force", "[insertion]") {
  SECTION("identical wrenches cancel") {
    const Wrench6 w{{1, 2, 3, 4, 5, 6}};
    REQUIRE(residual_force(w, w).norm() == 0.0);
  }

  SECTION("componentwise subtraction of the force parts") {
    const Eigen::Vector3d r =
        residual_force(Wrench6{{0, 0, 5, 9, 9, 9}}, Wrench6{{0, 0, 2, -9, -9, -9}});
    REQUIRE(r.x() == 0.0);
    REQUIRE(r.y() == 0.0);
    REQUIRE(r.z() == 3.0);
  }

  SECTION("antisymmetry") {
    Rng rng(3);
    for (int i = 0; i < 100; ++i) {
      Wrench6 a, b;
      for (int k = 0; k < 6; ++k) {
        a.v[k] = rng.normal();
        b.v[k] = rng.normal();
      }
      REQUIRE((residual_force(a, b) + residual_force(b, a)).norm() == Approx(0.0).margin(1e-15));
    }
  }
}

TEST_CASE("stuck detector", "[insertion]") {
  SECTION("monotone residual never arms") {
    StuckDetector det;
    for (int i = 0; i < 100; ++i) {
      update_stuck(det, 0.1 * i, 0.05);
      REQUIRE_FALSE(det.armed);
      REQUIRE_FALSE(det.stuck);
    }
  }

  SECTION("local maximum arms at the peak speed, then threshold applies") {
    StuckDetector det;
    update_stuck(det, 1.0, 0.05);
    update_stuck(det, 2.0, 0.02);  // peak
    REQUIRE_FALSE(det.armed);
    update_stuck(det, 1.5, 0.018);  // peak detected here
    REQUIRE(det.armed);
    REQUIRE(det.ref_speed == Approx(0.02));
    REQUIRE_FALSE(det.stuck);  // 0.018 >= 0.01

    update_stuck(det, 1.4, 0.005);
    REQUIRE(det.stuck);  // 0.005 < 0.5 * 0.02
  }

  SECTION("just above the ratio threshold is not stuck") {
    StuckDetector det;
    update_stuck(det, 1.0, 0.02);
    update_stuck(det, 2.0, 0.02);
    update_stuck(det, 1.5, 0.019);
    REQUIRE(det.armed);
    REQUIRE_FALSE(det.stuck);  // 0.019 > 0.01
  }

  SECTION("prominence filters shallow ripples") {
    StuckDetector det;
    update_stuck(det, 1.00, 0.02);
    update_stuck(det, 1.03, 0.02);  // only 0.03 N above both neighbors
    update_stuck(det, 1.00, 0.02);
    REQUIRE_FALSE(det.armed);
  }

  SECTION("stuck clears as soon as the speed recovers (no latching)") {
    StuckDetector det;
    update_stuck(det, 1.0, 0.02);
    update_stuck(det, 2.0, 0.02);
    update_stuck(det, 1.5, 0.002);
    REQUIRE(det.stuck);
    update_stuck(det, 1.5, 0.03);
    REQUIRE_FALSE(det.stuck);
  }

  SECTION("ref_speed is captured at most once") {
    StuckDetector det;
    update_stuck(det, 1.0, 0.02);
    update_stuck(det, 2.0, 0.02);
    update_stuck(det, 1.5, 0.0);
    const double ref = det.ref_speed;
    update_stuck(det, 5.0, 0.5);
    update_stuck(det, 9.0, 0.5);
    update_stuck(det, 1.0, 0.5);
    REQUIRE(det.ref_speed == ref);
  }
}

TEST_CASE("wiggle feedforward", "[insertion]") {
  WiggleParams p{};
  p.amplitude = {1.0, 0, 0, 0, 0};
  p.freq_hz = {1.0, 1, 1, 1, 1};
  p.phase = {0, 0, 0, 0, 0};

  SECTION("quarter period of a 1 Hz unit sine is 1") {
    REQUIRE(wiggle_ff(0.25, p).fx() == Approx(1.0));
  }

  SECTION("zero phase at t = 0 gives a zero wrench") {
    const Wrench6 w = wiggle_ff(0.0, p);
    for (double x : w.v) REQUIRE(x == Approx(0.0).margin(1e-15));
  }

  SECTION("zero amplitudes give a zero wrench for all t") {
    WiggleParams z{};
    z.freq_hz = {3, 4, 5, 6, 7};
    for (double t : {0.0, 0.1, 0.5, 2.0}) {
      const Wrench6 w = wiggle_ff(t, z);
      for (double x : w.v) REQUIRE(x == 0.0);
    }
  }

  SECTION("per-axis periodicity") {
    Rng rng(11);
    const WiggleParams w = make_wiggle(rng);
    for (int j = 0; j < 5; ++j) {
      const double period = 1.0 / w.freq_hz[j];
      const Wrench6 a = wiggle_ff(0.37, w);
      const Wrench6 b = wiggle_ff(0.37 + period, w);
      const int axis = j < 2 ? j : j + 1;  // skip fz
      REQUIRE(a.v[axis] == Approx(b.v[axis]).margin(1e-12));
    }
  }

  SECTION("the z force channel never wiggles") {
    Rng rng(13);
    const WiggleParams w = make_wiggle(rng);
    for (double t = 0.0; t < 2.0; t += 0.01) REQUIRE(wiggle_ff(t, w).fz() == 0.0);
  }
}

TEST_CASE("insertion step", "[insertion]") {
  Rng rng(17);
  const WiggleParams wiggle = make_wiggle(rng);

  SECTION("not stuck passes through a zero wrench") {
    StuckDetector det;
    const Wrench6 f = insertion_step(det, Wrench6{{0, 0, -8, 0, 0, 0}},
                                     Wrench6{{0, 0, -1, 0, 0, 0}}, 0.05, 0.1, wiggle);
    for (double x : f.v) REQUIRE(x == 0.0);
  }

  SECTION("stuck emits the wiggle evaluated at t") {
    StuckDetector det;
    insertion_step(det, Wrench6{{0, 0, 1, 0, 0, 0}}, Wrench6{}, 0.05, 0.0, wiggle);
    insertion_step(det, Wrench6{{0, 0, 2, 0, 0, 0}}, Wrench6{}, 0.05, 0.001, wiggle);
    const Wrench6 f =
        insertion_step(det, Wrench6{{0, 0, 1, 0, 0, 0}}, Wrench6{}, 0.001, 0.002, wiggle);
    REQUIRE(det.armed);
    REQUIRE(det.stuck);
    const Wrench6 expect = wiggle_ff(0.002, wiggle);
    for (int i = 0; i < 6; ++i) REQUIRE(f.v[i] == expect.v[i]);
    REQUIRE(f.fz() == 0.0);
  }
}
