#pragma once

#include "pegdiff/insertion_teacher.hpp"
#include "pegdiff/runtime.hpp"
#include "pegdiff/search_teacher.hpp"

namespace pegdiff {

// Rule-based search + insertion pair driving the sim at the full 1 kHz rate.
// randomized=true is the randomized teacher, false the fixed-parameter one.
class TeacherPolicy : public Policy {
 public:
  explicit TeacherPolicy(bool randomized, SearchRanges search_ranges = SearchRanges{},
                         WiggleRanges wiggle_ranges = WiggleRanges{},
                         StuckDetector detector_proto = StuckDetector{})
      : randomized_(randomized),
        search_ranges_(search_ranges),
        wiggle_ranges_(wiggle_ranges),
        detector_proto_(detector_proto) {}

  int period_ticks() const override { return 1; }
  bool use_lowpass() const override { return false; }
  bool hold_after_search() const override { return true; }

  void on_phase_start(Mode mode, Rng& rng) override {
    if (mode == Mode::search) {
      search_ = randomized_ ? init_search(rng, search_ranges_) : SearchParams::teacher_d();
    } else {
      detector_ = detector_proto_;
      detector_.reset();
      wiggle_ = make_wiggle(rng, wiggle_ranges_);
    }
  }

  Wrench6 act(const ObsContext& ctx, Rng&) override {
    if (ctx.mode == Mode::search) {
      return search_step(search_, ctx.now.tau_ext.fz(), ctx.z_disp).first;
    }
    return insertion_step(detector_, ctx.now.tau_in, ctx.now.tau_ext, ctx.now.v.v[2],
                          ctx.t_phase, wiggle_);
  }

  const SearchParams& search_params() const { return search_; }
  const StuckDetector& detector() const { return detector_; }

 private:
  bool randomized_;
  SearchRanges search_ranges_;
  WiggleRanges wiggle_ranges_;
  StuckDetector detector_proto_;
  SearchParams search_;
  StuckDetector detector_;
  WiggleParams wiggle_;
};

// Deterministic vanilla spiral baseline: the fixed spiral wrench with no
// reaction-force adaptation, paired with the insertion teacher after capture.
class SpiralPolicy : public Policy {
 public:
  explicit SpiralPolicy(WiggleRanges wiggle_ranges = WiggleRanges{})
      : wiggle_ranges_(wiggle_ranges) {}

  int period_ticks() const override { return 1; }
  bool use_lowpass() const override { return false; }
  bool hold_after_search() const override { return true; }

  void on_phase_start(Mode mode, Rng& rng) override {
    if (mode == Mode::search) {
      params_ = SearchParams::teacher_d();
      theta_ = params_.theta;
    } else {
      detector_.reset();
      wiggle_ = make_wiggle(rng, wiggle_ranges_);
    }
  }

  Wrench6 act(const ObsContext& ctx, Rng&) override {
    if (ctx.mode == Mode::search) {
      const Wrench6 w = spiral_ff(theta_, params_.a, params_.b, params_.c);
      theta_ += params_.delta_theta;
      return w;
    }
    return insertion_step(detector_, ctx.now.tau_in, ctx.now.tau_ext, ctx.now.v.v[2],
                          ctx.t_phase, wiggle_);
  }

 private:
  WiggleRanges wiggle_ranges_;
  SearchParams params_;
  double theta_ = 0.0;
  StuckDetector detector_;
  WiggleParams wiggle_;
};

}  // namespace pegdiff
