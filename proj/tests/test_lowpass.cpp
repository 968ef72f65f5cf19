#include <catch2/catch_amalgamated.hpp>

#include "pegdiff/lowpass.hpp"

using namespace pegdiff;
using Catch::Approx;

TEST_CASE("biquad DC gain is unity", "[lowpass]") {
  Biquad f(20.0, 1000.0);
  f.reset(0.0);
  double y = 0.0;
  for (int i = 0; i < 1000; ++i) y = f.step(3.5);
  REQUIRE(y == Approx(3.5).margin(1e-6 * 3.5));

  // steady state is exact once settled: run much longer and demand 1e-9
  for (int i = 0; i < 20000; ++i) y = f.step(3.5);
  REQUIRE(y == Approx(3.5).margin(1e-9));
}

TEST_CASE("biquad is stable and zero-preserving", "[lowpass]") {
  Biquad f(20.0, 1000.0);
  REQUIRE(f.stable());
  f.reset(0.0);
  for (int i = 0; i < 100; ++i) REQUIRE(f.step(0.0) == 0.0);
}

TEST_CASE("butterworth step response overshoot stays under 5%", "[lowpass]") {
  Biquad f(20.0, 1000.0);
  f.reset(0.0);
  double peak = 0.0;
  for (int i = 0; i < 2000; ++i) peak = std::max(peak, f.step(1.0));
  REQUIRE(peak <= 1.05);
  REQUIRE(peak > 1.0);  // a second-order butterworth does ring slightly
}

TEST_CASE("reset to the first input removes the startup transient", "[lowpass]") {
  Biquad f(20.0, 1000.0);
  f.reset(-7.0);
  for (int i = 0; i < 50; ++i) REQUIRE(f.step(-7.0) == Approx(-7.0).margin(1e-9));
}

TEST_CASE("wrench filter bank runs all six channels", "[lowpass]") {
  LowPassFilter f(20.0, 1000.0);
  const Wrench6 w{{1, -2, 3, 0.1, -0.2, 0.3}};
  f.reset(w);
  REQUIRE(f.stable());
  Wrench6 y;
  for (int i = 0; i < 100; ++i) y = f.step(w);
  for (int i = 0; i < 6; ++i) REQUIRE(y.v[i] == Approx(w.v[i]).margin(1e-7));
}
