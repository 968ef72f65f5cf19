#pragma once

#include <array>
#include <cstdint>
#include <cstring>
#include <filesystem>
#include <fstream>
#include <string>
#include <vector>

#include "pegdiff/config.hpp"
#include "pegdiff/core.hpp"
#include "pegdiff/rng.hpp"

namespace pegdiff {

// One recorded tick at the 7 ms demonstration cadence.
struct Frame {
  double t = 0.0;
  Wrench6 tau_ext;
  Wrench6 tau_in;
  Twist6 v;
  Wrench6 f_ff;  // action ground truth
  double z_disp = 0.0;
};

struct ScenarioMeta {
  double misalign_x = 0.0, misalign_y = 0.0;  // m
  uint64_t seed = 0;
  std::string geometry = "cuboid";
};

struct DemoRecord {
  std::vector<Frame> frames;
  int mode = 0;  // 0 = search, 1 = insertion
  bool success = false;
  double duration = 0.0;  // s
  ScenarioMeta meta;
};

namespace recio {

constexpr uint32_t kMagic = 0x43524450;  // "PDRC"
constexpr uint8_t kVersion = 1;

template <class T>
void put(std::ostream& os, const T& x) {
  os.write(reinterpret_cast<const char*>(&x), sizeof(T));
}
template <class T>
void get(std::istream& is, T& x) {
  is.read(reinterpret_cast<char*>(&x), sizeof(T));
}

}  // namespace recio

inline void save_record(const std::string& path, const DemoRecord& rec) {
  std::ofstream os(path, std::ios::binary);
  if (!os) throw std::runtime_error("cannot write record: " + path);
  recio::put(os, recio::kMagic);
  recio::put(os, recio::kVersion);
  recio::put(os, static_cast<uint8_t>(rec.mode));
  recio::put(os, static_cast<uint8_t>(rec.success ? 1 : 0));
  recio::put(os, rec.duration);
  recio::put(os, rec.meta.misalign_x);
  recio::put(os, rec.meta.misalign_y);
  recio::put(os, rec.meta.seed);
  const uint16_t glen = static_cast<uint16_t>(rec.meta.geometry.size());
  recio::put(os, glen);
  os.write(rec.meta.geometry.data(), glen);
  const uint32_t n = static_cast<uint32_t>(rec.frames.size());
  recio::put(os, n);
  for (const Frame& f : rec.frames) {
    recio::put(os, f.t);
    for (double x : f.tau_ext.v) recio::put(os, x);
    for (double x : f.tau_in.v) recio::put(os, x);
    for (double x : f.v.v) recio::put(os, x);
    for (double x : f.f_ff.v) recio::put(os, x);
    recio::put(os, f.z_disp);
  }
}

inline DemoRecord load_record(const std::string& path) {
  std::ifstream is(path, std::ios::binary);
  if (!is) throw std::runtime_error("cannot open record: " + path);
  uint32_t magic = 0;
  recio::get(is, magic);
  if (magic != recio::kMagic) throw std::runtime_error("not a demo record: " + path);
  uint8_t version = 0;
  recio::get(is, version);
  if (version != recio::kVersion)
    throw std::runtime_error("unsupported record version in " + path);
  DemoRecord rec;
  uint8_t mode = 0, outcome = 0;
  recio::get(is, mode);
  recio::get(is, outcome);
  rec.mode = mode;
  rec.success = outcome != 0;
  recio::get(is, rec.duration);
  recio::get(is, rec.meta.misalign_x);
  recio::get(is, rec.meta.misalign_y);
  recio::get(is, rec.meta.seed);
  uint16_t glen = 0;
  recio::get(is, glen);
  rec.meta.geometry.resize(glen);
  is.read(rec.meta.geometry.data(), glen);
  uint32_t n = 0;
  recio::get(is, n);
  rec.frames.resize(n);
  for (Frame& f : rec.frames) {
    recio::get(is, f.t);
    for (double& x : f.tau_ext.v) recio::get(is, x);
    for (double& x : f.tau_in.v) recio::get(is, x);
    for (double& x : f.v.v) recio::get(is, x);
    for (double& x : f.f_ff.v) recio::get(is, x);
    recio::get(is, f.z_disp);
  }
  if (!is) throw std::runtime_error("truncated record: " + path);
  return rec;
}

// <dir>/demos/<mode>/<seed>.rec plus a tab-separated index.
inline std::vector<std::string> save_dataset(const std::string& dir,
                                             const std::vector<DemoRecord>& records) {
  namespace fs = std::filesystem;
  fs::create_directories(fs::path(dir) / "demos" / "search");
  fs::create_directories(fs::path(dir) / "demos" / "insertion");
  std::ofstream index(fs::path(dir) / "index.tsv");
  index << "path\tmode\toutcome\tduration_s\tmisalignment_mm\tgeometry\n";
  std::vector<std::string> paths;
  for (const auto& rec : records) {
    const std::string rel = std::string("demos/") +
                            (rec.mode == 0 ? "search/" : "insertion/") +
                            std::to_string(rec.meta.seed) + ".rec";
    save_record((fs::path(dir) / rel).string(), rec);
    const double mis_mm =
        std::hypot(rec.meta.misalign_x, rec.meta.misalign_y) * 1e3;
    index << rel << '\t' << rec.mode << '\t' << (rec.success ? "success" : "failure")
          << '\t' << rec.duration << '\t' << mis_mm << '\t' << rec.meta.geometry << '\n';
    paths.push_back(rel);
  }
  return paths;
}

inline std::vector<DemoRecord> load_dataset(const std::string& dir) {
  namespace fs = std::filesystem;
  std::ifstream index(fs::path(dir) / "index.tsv");
  if (!index) throw std::runtime_error("no index.tsv in " + dir);
  std::vector<DemoRecord> out;
  std::string line;
  std::getline(index, line);  // header
  while (std::getline(index, line)) {
    if (line.empty()) continue;
    const std::string rel = line.substr(0, line.find('\t'));
    out.push_back(load_record((fs::path(dir) / rel).string()));
  }
  return out;
}

struct FilterStats {
  int kept = 0;
  int dropped_failure = 0;
  int dropped_slow = 0;  // successful search beyond the efficiency bound
};

// Success filter for both modes plus the 2.5 s efficiency bound for search.
inline std::vector<DemoRecord> filter_demos(const std::vector<DemoRecord>& records,
                                            FilterStats* stats = nullptr,
                                            double max_search_duration = 2.5) {
  std::vector<DemoRecord> kept;
  FilterStats st;
  for (const auto& rec : records) {
    if (!rec.success) {
      ++st.dropped_failure;
      continue;
    }
    if (rec.mode == 0 && rec.duration > max_search_duration) {
      ++st.dropped_slow;
      continue;
    }
    kept.push_back(rec);
    ++st.kept;
  }
  if (stats) *stats = st;
  return kept;
}

// The 36-d conditioning vector: [tau_ext, tau_in, v] now, then the same
// 7 ms earlier.
using Observation = std::array<double, 36>;

inline Observation raw_observation(const Frame& now, const Frame& prev) {
  Observation o;
  for (int i = 0; i < 6; ++i) {
    o[i] = now.tau_ext.v[i];
    o[6 + i] = now.tau_in.v[i];
    o[12 + i] = now.v.v[i];
    o[18 + i] = prev.tau_ext.v[i];
    o[24 + i] = prev.tau_in.v[i];
    o[30 + i] = prev.v.v[i];
  }
  return o;
}

// Per-dimension z-score statistics from the kept training set.
struct NormStats {
  std::array<double, 36> obs_mean{}, obs_std{};
  std::array<double, 6> act_mean{}, act_std{};

  NormStats() {
    obs_std.fill(1.0);
    act_std.fill(1.0);
  }

  Observation standardize(const Observation& raw) const {
    Observation o;
    for (int i = 0; i < 36; ++i) o[i] = (raw[i] - obs_mean[i]) / obs_std[i];
    return o;
  }

  std::array<double, 6> normalize_action(const Wrench6& w) const {
    std::array<double, 6> a;
    for (int i = 0; i < 6; ++i) a[i] = (w.v[i] - act_mean[i]) / act_std[i];
    return a;
  }

  Wrench6 denormalize_action(const std::array<double, 6>& a) const {
    Wrench6 w;
    for (int i = 0; i < 6; ++i) w.v[i] = a[i] * act_std[i] + act_mean[i];
    return w;
  }
};

inline Observation build_observation(const Frame& now, const Frame& prev,
                                     const NormStats& stats) {
  return stats.standardize(raw_observation(now, prev));
}

inline NormStats compute_stats(const std::vector<DemoRecord>& kept) {
  NormStats st;
  std::array<double, 36> osum{}, osq{};
  std::array<double, 6> asum{}, asq{};
  size_t n = 0;
  for (const auto& rec : kept) {
    for (size_t i = 0; i < rec.frames.size(); ++i) {
      const Frame& prev = rec.frames[i == 0 ? 0 : i - 1];
      const Observation o = raw_observation(rec.frames[i], prev);
      for (int k = 0; k < 36; ++k) {
        osum[k] += o[k];
        osq[k] += o[k] * o[k];
      }
      for (int k = 0; k < 6; ++k) {
        asum[k] += rec.frames[i].f_ff.v[k];
        asq[k] += rec.frames[i].f_ff.v[k] * rec.frames[i].f_ff.v[k];
      }
      ++n;
    }
  }
  if (n == 0) throw ConfigError("compute_stats: empty dataset");
  const double dn = static_cast<double>(n);
  for (int k = 0; k < 36; ++k) {
    st.obs_mean[k] = osum[k] / dn;
    st.obs_std[k] = std::max(std::sqrt(std::max(0.0, osq[k] / dn - st.obs_mean[k] * st.obs_mean[k])), 1e-8);
  }
  for (int k = 0; k < 6; ++k) {
    st.act_mean[k] = asum[k] / dn;
    st.act_std[k] = std::max(std::sqrt(std::max(0.0, asq[k] / dn - st.act_mean[k] * st.act_mean[k])), 1e-8);
  }
  return st;
}

// Flat per-mode training pools of standardized observations and normalized
// actions. record_id tracks frame provenance for the filter property.
struct FramePool {
  std::vector<Observation> obs[2];
  std::vector<std::array<double, 6>> act[2];
  std::vector<int> record_id[2];

  size_t size(int mode) const { return obs[mode].size(); }
};

inline FramePool build_frame_pool(const std::vector<DemoRecord>& kept,
                                  const NormStats& stats) {
  FramePool pool;
  int rec_id = 0;
  for (const auto& rec : kept) {
    const int m = rec.mode;
    for (size_t i = 0; i < rec.frames.size(); ++i) {
      const Frame& prev = rec.frames[i == 0 ? 0 : i - 1];
      pool.obs[m].push_back(build_observation(rec.frames[i], prev, stats));
      pool.act[m].push_back(stats.normalize_action(rec.frames[i].f_ff));
      pool.record_id[m].push_back(rec_id);
    }
    ++rec_id;
  }
  return pool;
}

// Balanced Batch Sampling: every batch holds batch/2 frames of each mode.
// The larger pool is visited without replacement per epoch; the smaller pool
// reshuffles and wraps as needed.
class BalancedSampler {
 public:
  BalancedSampler(const FramePool& pool, int batch_size, uint64_t seed)
      : pool_(pool), batch_(batch_size), rng_(seed) {
    if (batch_size < 2 || batch_size % 2 != 0)
      throw ConfigError("balanced sampler: batch size must be even and >= 2");
    if (pool.size(0) == 0 || pool.size(1) == 0)
      throw ConfigError("balanced sampler: both modes must have frames");
    for (int m = 0; m < 2; ++m) {
      order_[m].resize(pool.size(m));
      for (size_t i = 0; i < order_[m].size(); ++i) order_[m][i] = static_cast<int>(i);
    }
  }

  int batches_per_epoch() const {
    const size_t major = std::max(pool_.size(0), pool_.size(1));
    const size_t half = static_cast<size_t>(batch_) / 2;
    return static_cast<int>((major + half - 1) / half);
  }

  void start_epoch() {
    for (int m = 0; m < 2; ++m) {
      shuffle(order_[m]);
      cursor_[m] = 0;
    }
  }

  // Fills index/mode arrays: first half mode 0, second half mode 1.
  void next_batch(std::vector<int>& idx, std::vector<int>& mode) {
    const int half = batch_ / 2;
    idx.resize(batch_);
    mode.resize(batch_);
    for (int m = 0; m < 2; ++m) {
      for (int i = 0; i < half; ++i) {
        if (cursor_[m] >= order_[m].size()) {
          shuffle(order_[m]);
          cursor_[m] = 0;
        }
        idx[m * half + i] = order_[m][cursor_[m]++];
        mode[m * half + i] = m;
      }
    }
  }

 private:
  void shuffle(std::vector<int>& v) {
    for (size_t i = v.size(); i > 1; --i) std::swap(v[i - 1], v[rng_.uniform_int(static_cast<int>(i))]);
  }

  const FramePool& pool_;
  int batch_;
  Rng rng_;
  std::vector<int> order_[2];
  size_t cursor_[2] = {0, 0};
};

}  // namespace pegdiff
