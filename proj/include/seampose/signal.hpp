#pragma once

#include <Eigen/Core>
#include <algorithm>
#include <array>
#include <cstdint>
#include <deque>
#include <optional>
#include <vector>

#include "seampose/errors.hpp"
#include "seampose/rng.hpp"

namespace seampose {

inline constexpr int kChannels = 8;
inline constexpr uint32_t kMaxCode = (1u << 28) - 1;
inline constexpr int kWindowFrames = 96;    // 3 s at 32 Hz
inline constexpr int kHistoryFrames = 180;  // 5.6 s at 32 Hz
inline constexpr double kSampleRateHz = 32.0;
inline constexpr uint64_t kFramePeriodUs = 31250;

/// One timestamped 8-channel raw capacitance reading (sensor codes).
struct CapFrame {
  uint32_t seq = 0;
  uint64_t t_us = 0;
  std::array<uint32_t, kChannels> ch{};
};

/// Fixed channel ordering: left block then right block, each
/// [shoulderTop, shoulderFront, shoulderBack, sleeve].
struct ChannelLayout {
  static constexpr std::array<const char*, kChannels> names = {
      "shoulderTopL", "shoulderFrontL", "shoulderBackL", "sleeveL",
      "shoulderTopR", "shoulderFrontR", "shoulderBackR", "sleeveR"};
};

enum class SeamPair : int { ShoulderTop = 0, ShoulderFront, ShoulderBack, Sleeve };

inline const char* seam_pair_name(SeamPair p) {
  static const char* names[4] = {"shoulderTop", "shoulderFront", "shoulderBack", "sleeve"};
  return names[static_cast<int>(p)];
}

/// Left/right channel indices of a seam pair.
inline std::pair<int, int> seam_pair_channels(SeamPair p) {
  const int i = static_cast<int>(p);
  return {i, i + 4};
}

/// Normalized model input: kWindowFrames rows by `channels()` columns.
struct SignalWindow {
  Eigen::MatrixXd x;  // (96, C)

  int channels() const { return static_cast<int>(x.cols()); }
};

/// Lower median: the element a sorted copy would hold at index (n-1)/2.
/// Even counts take the lower of the two middle elements, which keeps
/// integer inputs exactly representable.
inline double lower_median(std::vector<double> v) {
  if (v.empty()) throw InsufficientHistory("median of empty range");
  const size_t k = (v.size() - 1) / 2;
  std::nth_element(v.begin(), v.begin() + static_cast<long>(k), v.end());
  return v[k];
}

/// Two-step median normalization over the trailing history.
/// `history` holds the last kHistoryFrames raw values per channel
/// (rows = frames, oldest first; the last kWindowFrames rows form the model
/// window). Step 1 divides by the 180-frame channel median; step 2 subtracts
/// 0.98x the 96-frame median of those ratios.
inline SignalWindow normalize_window_values(const Eigen::MatrixXd& history) {
  if (history.rows() < kHistoryFrames)
    throw InsufficientHistory("normalize_window: need 180 frames of history");
  const int channels = static_cast<int>(history.cols());
  const long first = history.rows() - kHistoryFrames;
  const long wfirst = history.rows() - kWindowFrames;
  SignalWindow out;
  out.x.resize(kWindowFrames, channels);
  std::vector<double> scratch;
  for (int c = 0; c < channels; ++c) {
    scratch.assign(history.col(c).data() + first, history.col(c).data() + history.rows());
    const double med180 = lower_median(scratch);
    if (med180 == 0.0) throw ZeroMedian("normalize_window: zero 180-frame median");
    Eigen::VectorXd ratio(kWindowFrames);
    for (int t = 0; t < kWindowFrames; ++t) ratio(t) = history(wfirst + t, c) / med180;
    scratch.assign(ratio.data(), ratio.data() + kWindowFrames);
    const double med96 = lower_median(scratch);
    out.x.col(c) = ratio.array() - 0.98 * med96;
  }
  return out;
}

/// Adapter from raw frames; only the trailing 180 frames are used.
inline SignalWindow normalize_window(const std::vector<CapFrame>& history) {
  if (history.size() < kHistoryFrames)
    throw InsufficientHistory("normalize_window: need 180 frames of history");
  Eigen::MatrixXd values(kHistoryFrames, kChannels);
  const size_t first = history.size() - kHistoryFrames;
  for (int t = 0; t < kHistoryFrames; ++t)
    for (int c = 0; c < kChannels; ++c) values(t, c) = static_cast<double>(history[first + t].ch[c]);
  return normalize_window_values(values);
}

/// Stateful sliding-window extractor. Single consumer, one instance per
/// stream. Emits one window per `hop` frames once 180 frames of history
/// exist; throws GapDetected when the inter-frame interval exceeds twice the
/// nominal period.
class WindowStream {
 public:
  explicit WindowStream(int hop = 1, int channels = kChannels) : hop_(hop), channels_(channels) {
    if (hop < 1) throw ConfigError("window stream: hop must be >= 1");
  }

  /// Feed per-channel raw values for one frame (already channel-selected).
  std::optional<SignalWindow> push_values(uint64_t t_us, const Eigen::VectorXd& values) {
    if (have_last_ && t_us > last_t_us_ && (t_us - last_t_us_) > 2 * kFramePeriodUs) {
      reset();
      throw GapDetected("window stream: frame interval exceeded 2x nominal period");
    }
    last_t_us_ = t_us;
    have_last_ = true;
    history_.push_back(values);
    if (history_.size() > kHistoryFrames) history_.pop_front();
    ++count_;
    if (history_.size() < kHistoryFrames) return std::nullopt;
    if ((count_ - kHistoryFrames) % hop_ != 0) return std::nullopt;
    Eigen::MatrixXd h(kHistoryFrames, channels_);
    for (int t = 0; t < kHistoryFrames; ++t) h.row(t) = history_[t].transpose();
    return normalize_window_values(h);
  }

  std::optional<SignalWindow> push(const CapFrame& f) {
    Eigen::VectorXd v(kChannels);
    for (int c = 0; c < kChannels; ++c) v(c) = static_cast<double>(f.ch[c]);
    return push_values(f.t_us, v);
  }

  void reset() {
    history_.clear();
    count_ = 0;
    have_last_ = false;
  }

  size_t frames_seen() const { return count_; }

 private:
  int hop_;
  int channels_;
  std::deque<Eigen::VectorXd> history_;
  size_t count_ = 0;
  uint64_t last_t_us_ = 0;
  bool have_last_ = false;
};

/// Training-time augmentation: three independently gated transforms in fixed
/// order, each applied with probability 0.8.
struct AugmentParams {
  bool shift = false;
  bool scale_window = false;
  bool scale_entries = false;
  double window_offset = 0.0;
  Eigen::VectorXd channel_offset;  // (C)
  double window_scale = 1.0;
  Eigen::MatrixXd entry_scale;  // (96, C)
};

inline constexpr double kAugmentGate = 0.8;
inline constexpr double kAugmentShiftRange = 0.02;
inline constexpr double kAugmentWindowScaleLo = 0.94;
inline constexpr double kAugmentWindowScaleHi = 1.06;
inline constexpr double kAugmentEntryScaleLo = 0.997;
inline constexpr double kAugmentEntryScaleHi = 1.003;

inline AugmentParams draw_augment(Rng& rng, int channels, int rows = kWindowFrames) {
  AugmentParams p;
  p.shift = rng.uniform() < kAugmentGate;
  if (p.shift) {
    p.window_offset = rng.uniform(-kAugmentShiftRange, kAugmentShiftRange);
    p.channel_offset.resize(channels);
    for (int c = 0; c < channels; ++c)
      p.channel_offset(c) = rng.uniform(-kAugmentShiftRange, kAugmentShiftRange);
  }
  p.scale_window = rng.uniform() < kAugmentGate;
  if (p.scale_window) p.window_scale = rng.uniform(kAugmentWindowScaleLo, kAugmentWindowScaleHi);
  p.scale_entries = rng.uniform() < kAugmentGate;
  if (p.scale_entries) {
    p.entry_scale.resize(rows, channels);
    for (int t = 0; t < rows; ++t)
      for (int c = 0; c < channels; ++c)
        p.entry_scale(t, c) = rng.uniform(kAugmentEntryScaleLo, kAugmentEntryScaleHi);
  }
  return p;
}

inline SignalWindow apply_augment(const SignalWindow& in, const AugmentParams& p) {
  SignalWindow out = in;
  if (p.shift) {
    out.x.array() += p.window_offset;
    out.x.rowwise() += p.channel_offset.transpose();
  }
  if (p.scale_window) out.x *= p.window_scale;
  if (p.scale_entries) out.x = out.x.cwiseProduct(p.entry_scale);
  return out;
}

inline SignalWindow augment(const SignalWindow& in, Rng& rng) {
  return apply_augment(in, draw_augment(rng, in.channels(), static_cast<int>(in.x.rows())));
}

}  // namespace seampose
