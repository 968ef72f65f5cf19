#pragma once

#include <cmath>
#include <utility>

#include "pegdiff/config.hpp"
#include "pegdiff/core.hpp"
#include "pegdiff/rng.hpp"

namespace pegdiff {

// Sampling intervals for the randomized search teacher. The z-up convention
// used throughout: c < 0 is a downward feedforward, the upward surface
// reaction compares against -c.
struct SearchRanges {
  double a_lo = -0.2, a_hi = -0.1;
  double b_lo = -0.2, b_hi = -0.1;
  double c_lo = -10.0, c_hi = -5.0;
  double theta_lo = -60.0, theta_hi = -40.0;
  double dtheta_lo = -5.0e-2, dtheta_hi = -1.0e-2;

  static SearchRanges from_config(const Config& cfg) {
    SearchRanges r;
    r.a_lo = cfg.get_double("search.a_lo", r.a_lo);
    r.a_hi = cfg.get_double("search.a_hi", r.a_hi);
    r.b_lo = cfg.get_double("search.b_lo", r.b_lo);
    r.b_hi = cfg.get_double("search.b_hi", r.b_hi);
    r.c_lo = cfg.get_double("search.c_lo", r.c_lo);
    r.c_hi = cfg.get_double("search.c_hi", r.c_hi);
    r.theta_lo = cfg.get_double("search.theta_lo", r.theta_lo);
    r.theta_hi = cfg.get_double("search.theta_hi", r.theta_hi);
    r.dtheta_lo = cfg.get_double("search.dtheta_lo", r.dtheta_lo);
    r.dtheta_hi = cfg.get_double("search.dtheta_hi", r.dtheta_hi);
    return r;
  }
};

struct SearchParams {
  double p_s = 1.0;  // pattern selector, {-1, +1}
  double d_x = 1.0;  // axis sign selectors, {-1, +1}
  double d_y = 1.0;
  double a = -0.15;  // force-scale coefficients (N)
  double b = -0.15;
  double c = -7.0;   // z feedforward setpoint (N)
  double theta = -50.0;
  double delta_theta = -5.5e-3;  // rad per 1 kHz tick
  double f_z = -7.0;
  double delta_f_z = 2.0e-3;  // N per tick
  double z_max = 3.0e-3;      // m, termination displacement
  double deadband = 0.05;     // N, f_z adaptation deadband

  // The fixed parameterization of the deterministic teacher variant.
  static SearchParams teacher_d() { return SearchParams{}; }
};

// Vanilla spiral feedforward: (r sin, r cos, c, 0, 0, 0) with r = a + b*theta.
inline Wrench6 spiral_ff(double theta, double a, double b, double c) {
  const double r = a + b * theta;
  return Wrench6{{r * std::sin(theta), r * std::cos(theta), c, 0.0, 0.0, 0.0}};
}

inline SearchParams init_search(Rng& rng, const SearchRanges& ranges = SearchRanges{}) {
  SearchParams p;
  p.p_s = rng.sign();
  p.d_x = rng.sign();
  p.d_y = rng.sign();
  p.a = rng.uniform(ranges.a_lo, ranges.a_hi);
  p.b = rng.uniform(ranges.b_lo, ranges.b_hi);
  p.c = rng.uniform(ranges.c_lo, ranges.c_hi);
  p.theta = rng.uniform(ranges.theta_lo, ranges.theta_hi);
  p.delta_theta = rng.uniform(ranges.dtheta_lo, ranges.dtheta_hi);
  p.f_z = p.c;
  return p;
}

// One control tick: emit the spiral wrench for the current phase, adapt f_z
// against the measured surface reaction, advance the phase. done once the
// z displacement reaches z_max; the caller holds the last wrench for 0.25 s.
inline std::pair<Wrench6, bool> search_step(SearchParams& p, double f_ext_z,
                                            double z_displacement) {
  const double r = p.a + p.b * p.theta;
  double fx, fy;
  if (p.p_s > 0) {
    fx = p.d_x * r * std::sin(p.theta);
    fy = p.d_y * r * std::cos(p.theta);
  } else {
    fx = p.d_x * r * std::cos(p.theta);
    fy = p.d_y * r * std::sin(p.theta);
  }
  if (f_ext_z > -p.c + p.deadband) {
    p.f_z += p.delta_f_z;
  } else if (f_ext_z < -p.c - p.deadband) {
    p.f_z -= p.delta_f_z;
  }
  p.theta += p.delta_theta;
  return {Wrench6{{fx, fy, p.f_z, 0.0, 0.0, 0.0}}, z_displacement >= p.z_max};
}

}  // namespace pegdiff
