#pragma once

#include <atomic>
#include <chrono>
#include <cstdio>
#include <ostream>
#include <thread>

#include "seampose/evaluation.hpp"
#include "seampose/transport.hpp"
#include "seampose/wire.hpp"

namespace seampose {

struct LatencyRecord {
  uint64_t t_frame_in = 0;
  uint64_t t_window_ready = 0;
  uint64_t t_inference_done = 0;
  uint64_t t_output_written = 0;

  /// Pure inference time, excluding transport wait and output I/O.
  uint64_t inference_us() const { return t_inference_done - t_window_ready; }
};

struct Prediction {
  uint64_t t_us = 0;
  JointPositions<float> joints;
  LatencyRecord latency;
  uint64_t dropped = 0;
};

inline uint64_t steady_now_us() {
  return static_cast<uint64_t>(std::chrono::duration_cast<std::chrono::microseconds>(
                                   std::chrono::steady_clock::now().time_since_epoch())
                                   .count());
}

/// The frame-to-pose chain shared bit-for-bit by offline and live inference:
/// 180-frame history, two-step normalization, network forward, running-median
/// smoothing. Warm-up: exactly 179 frames produce no output.
class InferencePipeline {
 public:
  InferencePipeline(const ModelParams<float>& params, const Skeleton& skel,
                    bool parallel_forward = false)
      : params_(params), skel_(skel), parallel_(parallel_forward), stream_(1) {}

  std::optional<Prediction> push(const CapFrame& f) {
    std::optional<SignalWindow> w;
    try {
      w = stream_.push(f);
    } catch (const GapDetected&) {
      ++gaps_;
      smooth_.reset();
      return std::nullopt;
    }
    if (!w) return std::nullopt;
    Prediction out;
    out.t_us = f.t_us;
    out.latency.t_window_ready = steady_now_us();
    buf_.resize(static_cast<size_t>(w->x.rows()) * w->x.cols());
    for (int t = 0; t < w->x.rows(); ++t)
      for (int c = 0; c < w->x.cols(); ++c)
        buf_[t * w->x.cols() + c] = static_cast<float>(w->x(t, c));
    JointPositions<float> joints;
    forward_window<float>(params_, buf_.data(), skel_, cache_, nullptr, &joints, parallel_);
    out.joints = smooth_.push(joints);
    out.latency.t_inference_done = steady_now_us();
    return out;
  }

  void reset() {
    stream_.reset();
    smooth_.reset();
  }

  size_t gaps() const { return gaps_; }

 private:
  const ModelParams<float>& params_;
  Skeleton skel_;
  bool parallel_;
  WindowStream stream_;
  RunningMedianFilter<float> smooth_{5};
  nn::ForwardCache<float> cache_;
  std::vector<float> buf_;
  size_t gaps_ = 0;
};

/// Offline batch inference over a session: the reference the live path must
/// match bit-for-bit when no frames are dropped.
inline std::vector<Prediction> offline_infer(const Session& session,
                                             const ModelParams<float>& params,
                                             const Skeleton& skel,
                                             bool parallel_forward = false) {
  InferencePipeline pipe(params, skel, parallel_forward);
  std::vector<Prediction> out;
  for (const auto& f : session.frames)
    if (auto p = pipe.push(f)) out.push_back(*p);
  return out;
}

struct LiveOptions {
  bool allow_drops = true;
  size_t queue_capacity = 64;
  bool parallel_forward = false;
  std::ostream* jsonl = nullptr;  // prediction output as JSON lines
};

struct LiveStats {
  size_t predictions = 0;
  size_t dropped = 0;
  size_t gaps = 0;
  size_t decode_errors = 0;
  std::vector<Prediction> kept;  // populated when collect is set
  bool collect = false;
};

inline void write_prediction_jsonl(std::ostream& os, const Prediction& p) {
  char num[32];
  os << "{\"t_us\":" << p.t_us << ",\"joints\":[";
  for (int j = 0; j < kOutJoints; ++j) {
    os << (j ? ",[" : "[");
    for (int c = 0; c < 3; ++c) {
      std::snprintf(num, sizeof(num), "%.9g", static_cast<double>(p.joints.p(3 * j + c)));
      os << (c ? "," : "") << num;
    }
    os << "]";
  }
  os << "],\"latency_us\":" << p.latency.inference_us() << ",\"dropped\":" << p.dropped << "}\n";
}

/// Real-time loop: a producer thread decodes wire frames into a bounded
/// queue; the consumer keeps a 180-frame history and emits one smoothed
/// prediction per frame past warm-up. Under overload the queue drops its
/// oldest frames (keep-latest) and counts them.
inline LiveStats infer_live(ByteSource& source, const ModelParams<float>& params,
                            const Skeleton& skel, const LiveOptions& opt, LiveStats stats = {}) {
  struct Queued {
    CapFrame frame;
    uint64_t t_in;
  };
  std::mutex mu;
  std::condition_variable cv;
  std::deque<Queued> queue;
  std::atomic<bool> done{false};
  std::atomic<uint64_t> dropped{0};

  std::thread producer([&] {
    FrameDecoder decoder;
    uint8_t chunk[4096];
    for (;;) {
      const size_t n = source.read(chunk, sizeof(chunk));
      if (n == 0) break;
      decoder.feed(chunk, n);
      while (auto f = decoder.next()) {
        std::unique_lock<std::mutex> lock(mu);
        if (queue.size() >= opt.queue_capacity) {
          if (opt.allow_drops) {
            queue.pop_front();
            ++dropped;
          } else {
            cv.wait(lock, [&] { return queue.size() < opt.queue_capacity; });
          }
        }
        queue.push_back({*f, steady_now_us()});
        cv.notify_all();
      }
    }
    stats.decode_errors = decoder.bad_magic_bytes() + decoder.bad_version() +
                          decoder.crc_mismatches() + decoder.range_violations();
    done = true;
    cv.notify_all();
  });

  InferencePipeline pipe(params, skel, opt.parallel_forward);
  for (;;) {
    Queued q;
    {
      std::unique_lock<std::mutex> lock(mu);
      cv.wait(lock, [&] { return !queue.empty() || done; });
      if (queue.empty() && done) break;
      q = queue.front();
      queue.pop_front();
      cv.notify_all();
    }
    auto pred = pipe.push(q.frame);
    if (pred) {
      pred->latency.t_frame_in = q.t_in;
      pred->dropped = dropped.load();
      if (opt.jsonl) write_prediction_jsonl(*opt.jsonl, *pred);
      pred->latency.t_output_written = steady_now_us();
      ++stats.predictions;
      if (stats.collect) stats.kept.push_back(*pred);
    }
  }
  producer.join();
  stats.dropped = dropped.load();
  stats.gaps = pipe.gaps();
  if (opt.jsonl) opt.jsonl->flush();
  return stats;
}

}  // namespace seampose
