#include <catch2/catch_amalgamated.hpp>

#include "pegdiff/core.hpp"
#include "pegdiff/rng.hpp"

using namespace pegdiff;
using Catch::Approx;

TEST_CASE("wrench saturation clamps per component and reports it", "[core]") {
  Wrench6 w{{60.0, -3.0, 10.0, 12.0, -15.0, 0.5}};
  bool clipped = false;
  const Wrench6 s = saturate(w, &clipped);
  REQUIRE(clipped);
  REQUIRE(s.fx() == 50.0);
  REQUIRE(s.fy() == -3.0);
  REQUIRE(s.fz() == 10.0);
  REQUIRE(s.tx() == 10.0);
  REQUIRE(s.ty() == -10.0);
  REQUIRE(s.tz() == 0.5);

  clipped = true;
  saturate(Wrench6{{1, 2, 3, 4, 5, 6}}, &clipped);
  REQUIRE_FALSE(clipped);
}

TEST_CASE("wrench arithmetic and finite check", "[core]") {
  Wrench6 a{{1, 2, 3, 4, 5, 6}};
  Wrench6 b{{1, 1, 1, 1, 1, 1}};
  const Wrench6 c = a + b * 2.0;
  REQUIRE(c.fx() == 3.0);
  REQUIRE(c.tz() == 8.0);
  REQUIRE(a.finite());
  a.v[3] = std::nan("");
  REQUIRE_FALSE(a.finite());
}

TEST_CASE("angles wrap to (-pi, pi]", "[core]") {
  REQUIRE(wrap_angle(M_PI) == Approx(M_PI));
  REQUIRE(wrap_angle(-M_PI) == Approx(M_PI));
  REQUIRE(wrap_angle(3 * M_PI / 2) == Approx(-M_PI / 2));
  REQUIRE(wrap_angle(0.25) == Approx(0.25));
  REQUIRE(wrap_angle(2 * M_PI + 0.1) == Approx(0.1));
}

TEST_CASE("pose round trips through rotation matrices", "[core]") {
  Pose6 p;
  p.x() = 0.1;
  p.y() = -0.2;
  p.z() = 0.3;
  p.roll() = 0.02;
  p.pitch() = -0.015;
  p.yaw() = 1.2;
  const Pose6 q = Pose6::from(p.position(), p.rotation());
  for (int i = 0; i < 6; ++i) REQUIRE(q.v[i] == Approx(p.v[i]).margin(1e-12));
}

TEST_CASE("default gains are the paper controller and valid", "[core]") {
  Gains g;
  REQUIRE(g.K(0, 0) == Approx(523.91));
  REQUIRE(g.D(3, 3) == Approx(24.98));
  REQUIRE(g.valid());

  Gains bad;
  bad.K(0, 1) = 5.0;  // asymmetric
  REQUIRE_FALSE(bad.valid());
}

TEST_CASE("rng is deterministic per seed and statistically sane", "[core]") {
  Rng a(42), b(42), c(43);
  for (int i = 0; i < 100; ++i) {
    const double x = a.uniform();
    REQUIRE(x == b.uniform());
    REQUIRE(x >= 0.0);
    REQUIRE(x < 1.0);
  }
  REQUIRE(a.uniform() != c.uniform());

  Rng r(7);
  double sum = 0, sq = 0;
  const int n = 20000;
  for (int i = 0; i < n; ++i) {
    const double z = r.normal();
    sum += z;
    sq += z * z;
  }
  REQUIRE(sum / n == Approx(0.0).margin(0.03));
  REQUIRE(sq / n == Approx(1.0).margin(0.05));
}

TEST_CASE("derived seeds differ across stream ids", "[core]") {
  REQUIRE(derive_seed(1, 2) != derive_seed(1, 3));
  REQUIRE(derive_seed(1, 2, 4) != derive_seed(1, 2, 5));
  REQUIRE(derive_seed(1, 2) == derive_seed(1, 2));
}
