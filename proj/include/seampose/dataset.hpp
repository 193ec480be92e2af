#pragma once

#include <map>
#include <vector>

#include "seampose/kinematics.hpp"
#include "seampose/session.hpp"

namespace seampose {

/// Normalized windows with aligned labels, flattened for training.
struct WindowSet {
  int window = kWindowFrames;
  int channels = kChannels;
  int hop = 1;
  std::vector<int> channel_index;  // columns taken from the 8-channel stream
  std::vector<float> x;            // N * window * channels, row-major [n][t][c]
  std::vector<float> pose;         // N * 78
  std::vector<float> jpos;         // N * 24
  std::vector<int> subject;        // N
  std::vector<uint8_t> category;   // N
  std::vector<uint64_t> t_us;      // N
  std::vector<int> session_id;     // N
  std::map<int, Skeleton> skeletons;

  size_t size() const { return subject.size(); }
  const float* window_ptr(size_t n) const {
    return x.data() + n * static_cast<size_t>(window) * channels;
  }
  Eigen::Map<const Eigen::Matrix<float, kPoseDim, 1>> pose_label(size_t n) const {
    return Eigen::Map<const Eigen::Matrix<float, kPoseDim, 1>>(pose.data() + n * kPoseDim);
  }
  Eigen::Map<const Eigen::Matrix<float, kJointDim, 1>> joint_label(size_t n) const {
    return Eigen::Map<const Eigen::Matrix<float, kJointDim, 1>>(jpos.data() + n * kJointDim);
  }
};

inline std::vector<int> all_channels() { return {0, 1, 2, 3, 4, 5, 6, 7}; }

/// Channels remaining after removing one symmetric seam pair.
inline std::vector<int> channels_without(SeamPair removed) {
  std::vector<int> keep;
  const auto [l, r] = seam_pair_channels(removed);
  for (int c = 0; c < kChannels; ++c)
    if (c != l && c != r) keep.push_back(c);
  return keep;
}

/// Slide-and-normalize the listed sessions into a window set. Labels pair the
/// pose at the nearest label timestamp to each window's final frame; joint
/// positions come from the subject's skeleton.
inline WindowSet build_window_set(const DatasetManifest& manifest,
                                  const std::vector<int>& session_ids, int hop,
                                  const std::vector<int>& channels = all_channels()) {
  WindowSet out;
  out.hop = hop;
  out.channels = static_cast<int>(channels.size());
  out.channel_index = channels;
  for (const auto& subj : manifest.subjects)
    out.skeletons.emplace(subj.id, Skeleton::with_arm_length(subj.arm_length_m));

  for (int sid : session_ids) {
    const auto it = std::find_if(manifest.sessions.begin(), manifest.sessions.end(),
                                 [sid](const SessionRef& s) { return s.id == sid; });
    if (it == manifest.sessions.end())
      throw ConfigError("window set: unknown session id " + std::to_string(sid));
    const Session session = load_session(it->dir);
    const Skeleton& skel = out.skeletons.at(session.meta.subject);
    WindowStream ws(hop, out.channels);
    Eigen::VectorXd vals(out.channels);
    for (const auto& frame : session.frames) {
      for (int c = 0; c < out.channels; ++c)
        vals(c) = static_cast<double>(frame.ch[channels[c]]);
      std::optional<SignalWindow> w;
      try {
        w = ws.push_values(frame.t_us, vals);
      } catch (const GapDetected&) {
        continue;  // stream restarts its warm-up
      }
      if (!w) continue;
      for (int t = 0; t < out.window; ++t)
        for (int c = 0; c < out.channels; ++c) out.x.push_back(static_cast<float>(w->x(t, c)));
      const size_t li = session.nearest_label(frame.t_us);
      const auto& pose_label = session.poses[li];
      out.pose.insert(out.pose.end(), pose_label.data(), pose_label.data() + kPoseDim);
      PoseVector<double> pd;
      pd.v = pose_label.cast<double>();
      const JointPositions<double> jp = forward_kinematics(pd, skel);
      for (int k = 0; k < kJointDim; ++k) out.jpos.push_back(static_cast<float>(jp.p(k)));
      out.subject.push_back(session.meta.subject);
      out.category.push_back(static_cast<uint8_t>(session.category_at(frame.t_us)));
      out.t_us.push_back(frame.t_us);
      out.session_id.push_back(sid);
    }
  }
  return out;
}

/// Materialize as the binary f32 + JSON sidecar format.
inline WindowTensor to_window_tensor(const WindowSet& set) {
  WindowTensor t;
  t.shape = {static_cast<int>(set.size()), set.window, set.channels};
  for (int c : set.channel_index) t.channel_names.push_back(ChannelLayout::names[c]);
  t.hop = set.hop;
  std::vector<int> seen;
  for (int sid : set.session_id)
    if (std::find(seen.begin(), seen.end(), sid) == seen.end()) seen.push_back(sid);
  for (int sid : seen) t.sources.push_back("session:" + std::to_string(sid));
  t.data = set.x;
  return t;
}

}  // namespace seampose
