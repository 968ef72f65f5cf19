#pragma once

#include <Eigen/Dense>
#include <cmath>

#include "pegdiff/config.hpp"
#include "pegdiff/core.hpp"
#include "pegdiff/rng.hpp"

namespace pegdiff {

// F_in - F_ext, the force parts of the internal and external wrenches.
inline Eigen::Vector3d residual_force(const Wrench6& tau_in, const Wrench6& tau_ext) {
  return tau_in.force() - tau_ext.force();
}

// Arms on the first local maximum of f_res,z (previous sample above both
// neighbors by the prominence), recording the reference insertion speed at
// that peak. Once armed, stuck tracks |v_z| against ratio * ref_speed with
// no latching.
struct StuckDetector {
  double prominence = 0.05;   // N
  double speed_ratio = 0.5;
  double ref_speed = 0.0;     // m/s, set at most once
  bool armed = false;
  bool stuck = false;

  double prev_f = 0.0, prev2_f = 0.0;
  double prev_v = 0.0;
  int samples = 0;

  void reset() {
    ref_speed = 0.0;
    armed = stuck = false;
    prev_f = prev2_f = prev_v = 0.0;
    samples = 0;
  }
};

inline void update_stuck(StuckDetector& det, double f_res_z, double v_z) {
  if (!det.armed && det.samples >= 2) {
    const double peak = det.prev_f;
    if (peak - det.prev2_f >= det.prominence && peak - f_res_z >= det.prominence) {
      det.armed = true;
      det.ref_speed = std::abs(det.prev_v);
    }
  }
  det.stuck = det.armed && std::abs(v_z) < det.speed_ratio * det.ref_speed;
  det.prev2_f = det.prev_f;
  det.prev_f = f_res_z;
  det.prev_v = v_z;
  ++det.samples;
}

// Per-axis sinusoid parameters for the escape wiggle. The z force axis never
// wiggles; insertion along z is driven by the impedance error terms.
struct WiggleParams {
  // order: x, y, rx, ry, rz
  std::array<double, 5> amplitude{};  // N or N*m
  std::array<double, 5> freq_hz{};
  std::array<double, 5> phase{};      // rad
};

struct WiggleRanges {
  double force_amp = 2.0;    // N (x, y)
  double torque_amp = 0.3;   // N*m (rx, ry, rz)
  double freq_lo = 3.0, freq_hi = 8.0;  // Hz

  static WiggleRanges from_config(const Config& cfg) {
    WiggleRanges w;
    w.force_amp = cfg.get_double("insert.wiggle_force_amp", w.force_amp);
    w.torque_amp = cfg.get_double("insert.wiggle_torque_amp", w.torque_amp);
    w.freq_lo = cfg.get_double("insert.wiggle_freq_lo", w.freq_lo);
    w.freq_hi = cfg.get_double("insert.wiggle_freq_hi", w.freq_hi);
    return w;
  }
};

inline WiggleParams make_wiggle(Rng& rng, const WiggleRanges& ranges = WiggleRanges{}) {
  WiggleParams p;
  for (int j = 0; j < 5; ++j) {
    p.amplitude[j] = j < 2 ? ranges.force_amp : ranges.torque_amp;
    p.freq_hz[j] = rng.uniform(ranges.freq_lo, ranges.freq_hi);
    p.phase[j] = rng.uniform(0.0, 2.0 * M_PI);
  }
  return p;
}

inline Wrench6 wiggle_ff(double t, const WiggleParams& p) {
  auto s = [&](int j) { return p.amplitude[j] * std::sin(2.0 * M_PI * p.freq_hz[j] * t + p.phase[j]); };
  return Wrench6{{s(0), s(1), 0.0, s(2), s(3), s(4)}};
}

// One insertion tick: update the detector from the residual force and the
// vertical speed, wiggle only while stuck.
inline Wrench6 insertion_step(StuckDetector& det, const Wrench6& tau_in,
                              const Wrench6& tau_ext, double v_z, double t,
                              const WiggleParams& wiggle) {
  update_stuck(det, residual_force(tau_in, tau_ext).z(), v_z);
  return det.stuck ? wiggle_ff(t, wiggle) : Wrench6{};
}

}  // namespace pegdiff
