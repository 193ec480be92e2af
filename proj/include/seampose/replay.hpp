#pragma once

#include <chrono>
#include <thread>

#include "seampose/session.hpp"
#include "seampose/transport.hpp"
#include "seampose/wire.hpp"

namespace seampose {

struct ReplayStats {
  size_t frames = 0;
  double elapsed_s = 0;
  double achieved_hz = 0;
};

/// Writes a session's frames over the transport, paced by absolute deadlines
/// so the long-run rate error stays well under 1%. `speed` scales real time;
/// 0 disables pacing (as fast as the sink accepts).
inline ReplayStats replay(const std::vector<CapFrame>& frames, ByteSink& sink,
                          double rate_hz = kSampleRateHz, double speed = 1.0) {
  using clock = std::chrono::steady_clock;
  ReplayStats stats;
  if (frames.empty()) return stats;
  const auto start = clock::now();
  const bool paced = speed > 0 && rate_hz > 0;
  const double period_ns = paced ? 1e9 / (rate_hz * speed) : 0;
  for (size_t i = 0; i < frames.size(); ++i) {
    if (paced) {
      const auto deadline =
          start + std::chrono::nanoseconds(static_cast<int64_t>(period_ns * i));
      std::this_thread::sleep_until(deadline);
    }
    const auto bytes = encode_frame(frames[i]);
    sink.write(bytes.data(), bytes.size());
    ++stats.frames;
  }
  sink.flush();
  stats.elapsed_s = std::chrono::duration<double>(clock::now() - start).count();
  stats.achieved_hz = stats.elapsed_s > 0 ? stats.frames / stats.elapsed_s : 0;
  return stats;
}

}  // namespace seampose
