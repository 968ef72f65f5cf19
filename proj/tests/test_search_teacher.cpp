#include <catch2/catch_amalgamated.hpp>
#include <map>

#include "pegdiff/search_teacher.hpp"

using namespace pegdiff;
using Catch::Approx;

TEST_CASE("spiral feedforward follows r sin / r cos", "[search]") {
  SECTION("footnote parameters") {
    const Wrench6 w = spiral_ff(-50.0, -0.15, -0.15, -7.0);
    const double r = -0.15 + (-0.15) * (-50.0);
    REQUIRE(r == Approx(7.35));
    REQUIRE(w.fx() == Approx(r * std::sin(-50.0)));
    REQUIRE(w.fy() == Approx(r * std::cos(-50.0)));
    REQUIRE(w.fx() == Approx(1.929).margin(1e-3));
    REQUIRE(w.fy() == Approx(7.092).margin(1e-3));
    REQUIRE(w.fz() == -7.0);
  }

  SECTION("theta = 0 degenerates to (0, a, c)") {
    const Wrench6 w = spiral_ff(0.0, -0.15, -0.15, -7.0);
    REQUIRE(w.fx() == 0.0);
    REQUIRE(w.fy() == Approx(-0.15));
    REQUIRE(w.fz() == -7.0);
  }

  SECTION("b = 0 keeps a constant force radius |a|") {
    for (double th : {-50.0, -20.0, -5.0}) {
      const Wrench6 w = spiral_ff(th, -0.15, 0.0, -7.0);
      REQUIRE(std::hypot(w.fx(), w.fy()) == Approx(0.15));
    }
  }

  SECTION("torques are always zero") {
    const Wrench6 w = spiral_ff(-43.7, -0.19, -0.11, -8.2);
    REQUIRE(w.tx() == 0.0);
    REQUIRE(w.ty() == 0.0);
    REQUIRE(w.tz() == 0.0);
  }
}

TEST_CASE("search initialization samples the specified distributions", "[search]") {
  SECTION("interval invariants hold for every draw") {
    Rng rng(1);
    for (int i = 0; i < 2000; ++i) {
      const SearchParams p = init_search(rng);
      REQUIRE((p.p_s == 1.0 || p.p_s == -1.0));
      REQUIRE((p.d_x == 1.0 || p.d_x == -1.0));
      REQUIRE((p.d_y == 1.0 || p.d_y == -1.0));
      REQUIRE(p.a >= -0.2);
      REQUIRE(p.a <= -0.1);
      REQUIRE(p.b >= -0.2);
      REQUIRE(p.b <= -0.1);
      REQUIRE(p.c >= -10.0);
      REQUIRE(p.c <= -5.0);
      REQUIRE(p.theta >= -60.0);
      REQUIRE(p.theta <= -40.0);
      REQUIRE(p.delta_theta >= -5.0e-2);
      REQUIRE(p.delta_theta <= -1.0e-2);
      REQUIRE(p.f_z == p.c);
      REQUIRE(p.delta_f_z == 2.0e-3);
      REQUIRE(p.z_max == 3.0e-3);
    }
  }

  SECTION("the eight trajectory families are uniform") {
    Rng rng(7);
    std::map<int, int> counts;
    for (int i = 0; i < 8000; ++i) {
      const SearchParams p = init_search(rng);
      const int key = (p.p_s > 0 ? 4 : 0) + (p.d_x > 0 ? 2 : 0) + (p.d_y > 0 ? 1 : 0);
      counts[key]++;
    }
    REQUIRE(counts.size() == 8);
    for (const auto& [k, n] : counts) {
      REQUIRE(n >= 900);
      REQUIRE(n <= 1100);
    }
  }

  SECTION("same seed gives identical parameters") {
    Rng a(123), b(123);
    const SearchParams pa = init_search(a), pb = init_search(b);
    REQUIRE(pa.a == pb.a);
    REQUIRE(pa.theta == pb.theta);
    REQUIRE(pa.p_s == pb.p_s);
  }
}

TEST_CASE("search control step", "[search]") {
  SECTION("f_z holds inside the deadband") {
    SearchParams p = SearchParams::teacher_d();
    const double fz0 = p.f_z;
    search_step(p, -p.c, 0.0);
    REQUIRE(p.f_z == fz0);
    search_step(p, -p.c + 0.04, 0.0);
    REQUIRE(p.f_z == fz0);
  }

  SECTION("f_z adapts by exactly one increment outside the deadband") {
    SearchParams p = SearchParams::teacher_d();
    const double fz0 = p.f_z;
    search_step(p, -p.c + 0.2, 0.0);  // pressing too hard -> back off
    REQUIRE(p.f_z == Approx(fz0 + p.delta_f_z));
    search_step(p, -p.c - 0.2, 0.0);  // too light -> press harder
    REQUIRE(p.f_z == Approx(fz0));
  }

  SECTION("pattern selector swaps the sin/cos roles") {
    SearchParams a = SearchParams::teacher_d();
    SearchParams b = a;
    b.p_s = -1.0;
    const auto [wa, da] = search_step(a, 7.0, 0.0);
    const auto [wb, db] = search_step(b, 7.0, 0.0);
    const double r = a.a + a.b * (-50.0);
    REQUIRE(wa.fx() == Approx(r * std::sin(-50.0)));
    REQUIRE(wb.fx() == Approx(r * std::cos(-50.0)));
    REQUIRE(wa.fy() == Approx(r * std::cos(-50.0)));
    REQUIRE(wb.fy() == Approx(r * std::sin(-50.0)));
  }

  SECTION("terminates exactly at the 3 mm displacement") {
    SearchParams p = SearchParams::teacher_d();
    REQUIRE_FALSE(search_step(p, 7.0, 2.9e-3).second);
    REQUIRE(search_step(p, 7.0, 3.0e-3).second);
  }

  SECTION("f_z drift is bounded by increments per tick") {
    Rng rng(5);
    SearchParams p = init_search(rng);
    const double c = p.c;
    for (int i = 1; i <= 5000; ++i) {
      const double before = p.f_z;
      search_step(p, rng.uniform(4.0, 11.0), 0.0);
      const double delta = std::abs(p.f_z - before);
      REQUIRE((delta == 0.0 || delta == Approx(p.delta_f_z)));
      REQUIRE(std::abs(p.f_z - c) <= p.delta_f_z * i + 1e-12);
    }
  }

  SECTION("|r| grows monotonically while sweeping") {
    Rng rng(9);
    SearchParams p = init_search(rng);
    double prev_r = std::abs(p.a + p.b * p.theta);
    for (int i = 0; i < 3000; ++i) {
      search_step(p, 7.0, 0.0);
      const double r = std::abs(p.a + p.b * p.theta);
      REQUIRE(r >= prev_r);
      prev_r = r;
    }
  }
}
