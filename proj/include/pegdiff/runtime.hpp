#pragma once

#include <deque>
#include <string>
#include <vector>

#include "pegdiff/core.hpp"
#include "pegdiff/dataset.hpp"
#include "pegdiff/lowpass.hpp"
#include "pegdiff/rng.hpp"
#include "pegdiff/sim.hpp"

namespace pegdiff {

enum class Mode : int { search = 0, insertion = 1 };

struct PhaseTargets {
  double search = 3.0e-3;     // m
  double insertion = 1.7e-2;  // m
};

// Phase bookkeeping: z displacement is measured downward against the pose at
// phase start.
struct EpisodePhase {
  Mode mode = Mode::search;
  double z_ref = 0.0;
  double elapsed = 0.0;
  PhaseTargets targets;

  double displacement(const Pose6& pose) const { return z_ref - pose.z(); }
  double target() const { return mode == Mode::search ? targets.search : targets.insertion; }

  void begin_insertion(const Pose6& pose) {
    mode = Mode::insertion;
    z_ref = pose.z();
    elapsed = 0.0;
  }
};

enum class PhaseEvent { none, search_done, insertion_done };

// Threshold checks of the mode-switch rule. The caller shifts the desired
// pose by -1.7 cm when the search completes.
inline PhaseEvent update_phase(EpisodePhase& phase, const Pose6& pose) {
  const double disp = phase.displacement(pose);
  if (phase.mode == Mode::search && disp >= phase.targets.search) {
    phase.begin_insertion(pose);
    return PhaseEvent::search_done;
  }
  if (phase.mode == Mode::insertion && disp >= phase.targets.insertion)
    return PhaseEvent::insertion_done;
  return PhaseEvent::none;
}

// What a policy sees at a query: the noisy sensor sample now and 7 ms ago,
// plus phase bookkeeping.
struct ObsContext {
  ObserveSample now;
  ObserveSample prev7;
  double z_disp = 0.0;   // current phase displacement (m)
  double t_phase = 0.0;  // s since phase start
  Mode mode = Mode::search;
};

class Policy {
 public:
  virtual ~Policy() = default;
  virtual int period_ticks() const = 0;    // sim ticks between queries
  virtual bool use_lowpass() const = 0;
  virtual bool hold_after_search() const = 0;
  virtual void on_phase_start(Mode /*mode*/, Rng& /*rng*/) {}
  virtual Wrench6 act(const ObsContext& ctx, Rng& rng) = 0;
};

struct RolloutOptions {
  bool record_demos = false;
  bool trace = false;
  double lowpass_cutoff_hz = 20.0;
  double cutoff_s = 6.0;
  double hold_s = 0.25;
  double stall_window_s = 6.0;
  double stall_eps = 5.0e-5;  // m
  int record_every_ticks = 7;
  PhaseTargets targets;
};

struct TraceRow {
  double t;
  int mode;
  Wrench6 f_ff;
  ObserveSample obs;
  double z_disp;
};

enum class Outcome { success, timeout, stall, abort };

struct EpisodeResult {
  Outcome outcome = Outcome::timeout;
  bool success = false;
  double duration = 0.0;  // s; failures report the 6 s cutoff exactly
  double t_search_end = -1.0;
  double t_insertion_start = -1.0;
  DemoRecord search_record;
  DemoRecord insertion_record;
  std::vector<TraceRow> trace;
  std::string diagnostic;
};

// The 1 kHz episode loop: observe, query the policy at its cadence, low-pass
// the held command when the policy asks for it, step the sim, and run the
// search -> insertion state machine with the 6 s cutoff.
inline EpisodeResult rollout(Policy& policy, SimState st, const SceneGeometry& geom,
                             const Gains& gains, const SimParams& prm, uint64_t seed,
                             const RolloutOptions& opt = RolloutOptions{},
                             const ScenarioMeta& meta = ScenarioMeta{}) {
  Rng policy_rng(derive_seed(seed, 0xA));
  Rng noise_rng(derive_seed(seed, 0xB));

  EpisodeResult res;
  res.search_record.mode = 0;
  res.insertion_record.mode = 1;
  res.search_record.meta = meta;
  res.insertion_record.meta = meta;

  EpisodePhase phase;
  phase.targets = opt.targets;
  phase.z_ref = st.pos.z();

  policy.on_phase_start(Mode::search, policy_rng);

  const int ticks_per_query = policy.period_ticks();
  const int max_ticks = static_cast<int>(opt.cutoff_s / prm.dt + 0.5);
  const int hold_ticks = static_cast<int>(opt.hold_s / prm.dt + 0.5);
  const int stall_ticks = static_cast<int>(opt.stall_window_s / prm.dt + 0.5);

  LowPassFilter filter(opt.lowpass_cutoff_hz, 1.0 / prm.dt);
  bool filter_ready = false;

  std::deque<ObserveSample> ring;
  std::vector<double> z_hist;
  z_hist.reserve(max_ticks + 1);

  Wrench6 f_raw;
  int hold_left = -1;  // >= 0 while holding the terminal search wrench
  int phase_tick = 0;
  int rec_tick = 0;
  double search_done_t = -1.0;

  auto record_frame = [&](DemoRecord& rec, const ObsContext& ctx, const Wrench6& f) {
    Frame fr;
    fr.t = ctx.t_phase;
    fr.tau_ext = ctx.now.tau_ext;
    fr.tau_in = ctx.now.tau_in;
    fr.v = ctx.now.v;
    fr.f_ff = f;
    fr.z_disp = ctx.z_disp;
    rec.frames.push_back(fr);
  };

  for (int tick = 0; tick < max_ticks; ++tick) {
    ObsContext ctx;
    ctx.now = observe(st, st.last_cmd, geom, prm, &noise_rng);
    ring.push_back(ctx.now);
    if (static_cast<int>(ring.size()) > 8) ring.pop_front();
    ctx.prev7 = ring.front();
    ctx.mode = phase.mode;
    ctx.z_disp = phase.displacement(st.pose());
    ctx.t_phase = phase_tick * prm.dt;
    phase.elapsed = ctx.t_phase;

    // search termination / hold / switch
    if (phase.mode == Mode::search && hold_left < 0 && ctx.z_disp >= phase.targets.search) {
      search_done_t = st.t;
      res.t_search_end = st.t;
      res.search_record.success = true;
      res.search_record.duration = st.t;
      if (policy.hold_after_search()) {
        hold_left = hold_ticks;
      } else {
        hold_left = 0;  // switch immediately below
      }
    }
    if (hold_left == 0) {
      phase.begin_insertion(st.pose());
      Pose6 desired = st.pose();
      desired.z() -= phase.targets.insertion;
      st.desired = desired;
      policy.on_phase_start(Mode::insertion, policy_rng);
      res.t_insertion_start = st.t;
      phase_tick = 0;
      rec_tick = 0;
      hold_left = -1;
      ctx.mode = Mode::insertion;
      ctx.z_disp = 0.0;
      ctx.t_phase = 0.0;
    }

    const bool holding = hold_left > 0;
    if (!holding && tick % ticks_per_query == 0) {
      f_raw = policy.act(ctx, policy_rng);
    }
    if (holding) --hold_left;

    Wrench6 f_cmd = f_raw;
    if (policy.use_lowpass()) {
      if (!filter_ready) {
        filter.reset(f_raw);
        filter_ready = true;
      }
      f_cmd = filter.step(f_raw);
    }

    if (opt.record_demos && rec_tick % opt.record_every_ticks == 0) {
      DemoRecord& rec = (phase.mode == Mode::search || holding) ? res.search_record
                                                                : res.insertion_record;
      record_frame(rec, ctx, f_cmd);
    }
    // hold frames still belong to the search record
    if (opt.trace) {
      res.trace.push_back(TraceRow{st.t, static_cast<int>(phase.mode), f_cmd, ctx.now, ctx.z_disp});
    }

    sim_step(st, f_cmd, gains, geom, prm);
    ++phase_tick;
    ++rec_tick;
    z_hist.push_back(st.pos.z());

    if (st.aborted) {
      res.outcome = Outcome::abort;
      res.success = false;
      res.duration = opt.cutoff_s;
      res.diagnostic = "integration blow-up (twist clamp active beyond limit)";
      return res;
    }

    if (phase.mode == Mode::insertion && !holding &&
        phase.displacement(st.pose()) >= phase.targets.insertion) {
      res.outcome = Outcome::success;
      res.success = true;
      res.duration = st.t;
      res.insertion_record.success = true;
      res.insertion_record.duration = st.t - res.t_insertion_start;
      return res;
    }

    if (static_cast<int>(z_hist.size()) >= stall_ticks) {
      const double dz = std::abs(z_hist.back() - z_hist[z_hist.size() - stall_ticks]);
      if (dz < opt.stall_eps) {
        res.outcome = Outcome::stall;
        res.success = false;
        res.duration = opt.cutoff_s;
        res.diagnostic = "z displacement stalled";
        return res;
      }
    }
  }

  res.outcome = Outcome::timeout;
  res.success = false;
  res.duration = opt.cutoff_s;
  if (search_done_t < 0.0) {
    res.search_record.success = false;
    res.search_record.duration = opt.cutoff_s;
  }
  res.insertion_record.success = false;
  res.insertion_record.duration = opt.cutoff_s;
  return res;
}

}  // namespace pegdiff
