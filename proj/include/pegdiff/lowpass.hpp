#pragma once

#include <array>
#include <cmath>

#include "pegdiff/core.hpp"

namespace pegdiff {

// Second-order Butterworth low-pass biquad (bilinear transform), Direct Form
// II transposed. Used to upsample ~100 Hz policy commands to the 1 kHz
// control rate.
class Biquad {
 public:
  Biquad(double cutoff_hz = 20.0, double sample_hz = 1000.0) {
    const double K = std::tan(M_PI * cutoff_hz / sample_hz);
    const double q = 1.0 / std::sqrt(2.0);
    const double norm = 1.0 / (1.0 + K / q + K * K);
    b0_ = K * K * norm;
    b1_ = 2.0 * b0_;
    b2_ = b0_;
    a1_ = 2.0 * (K * K - 1.0) * norm;
    a2_ = (1.0 - K / q + K * K) * norm;
  }

  // Seed the delay line so a constant input produces itself from sample one.
  void reset(double x0) {
    s2_ = (b2_ - a2_) * x0;
    s1_ = (b1_ - a1_) * x0 + s2_;
  }

  double step(double x) {
    const double y = b0_ * x + s1_;
    s1_ = b1_ * x - a1_ * y + s2_;
    s2_ = b2_ * x - a2_ * y;
    return y;
  }

  // poles strictly inside the unit circle
  bool stable() const {
    return std::abs(a2_) < 1.0 && std::abs(a1_) < 1.0 + a2_;
  }

 private:
  double b0_, b1_, b2_, a1_, a2_;
  double s1_ = 0.0, s2_ = 0.0;
};

// One biquad per wrench channel.
class LowPassFilter {
 public:
  explicit LowPassFilter(double cutoff_hz = 20.0, double sample_hz = 1000.0) {
    for (auto& b : bank_) b = Biquad(cutoff_hz, sample_hz);
  }

  void reset(const Wrench6& w) {
    for (int i = 0; i < 6; ++i) bank_[i].reset(w.v[i]);
  }

  Wrench6 step(const Wrench6& w) {
    Wrench6 out;
    for (int i = 0; i < 6; ++i) out.v[i] = bank_[i].step(w.v[i]);
    return out;
  }

  bool stable() const {
    for (const auto& b : bank_)
      if (!b.stable()) return false;
    return true;
  }

 private:
  std::array<Biquad, 6> bank_;
};

}  // namespace pegdiff
