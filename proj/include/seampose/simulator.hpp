#pragma once

#include <cmath>
#include <string>
#include <vector>

#include "seampose/kinematics.hpp"
#include "seampose/motion.hpp"
#include "seampose/session.hpp"

namespace seampose {

/// One synthetic wearer. Baselines and coupling follow the anthropometric
/// spread of the study population; seam pairs are left/right symmetric.
using SubjectProfile = SubjectInfo;

inline SubjectProfile generate_subject(int id, Rng& rng) {
  SubjectProfile s;
  s.id = id;
  s.arm_length_m = rng.uniform(0.53, 0.65);
  s.bust_m = rng.uniform(0.78, 0.99);
  s.height_m = rng.uniform(1.53, 1.905);
  for (int p = 0; p < 4; ++p) {
    const double b = rng.uniform(5.5e7, 7.5e7);
    s.baseline[p] = b;
    s.baseline[p + 4] = b;
  }
  s.coupling_gain = rng.uniform(0.8, 1.2);
  return s;
}

inline Skeleton subject_skeleton(const SubjectProfile& s) {
  return Skeleton::with_arm_length(s.arm_length_m);
}

namespace sim {

// Relative amplitude of each seam pair; the ladder fixes the magnitude
// ordering sleeve > front/back > top for any subject and wearing.
inline constexpr double kAmpTop = 0.04;
inline constexpr double kAmpFrontBack = 0.18;
inline constexpr double kAmpSleeve = 0.45;
inline constexpr double kAmpCoupling = 0.003;
inline constexpr double kNoiseFrac = 0.005;       // of per-channel dynamic range
inline constexpr double kDriftFracPerS = 0.0005;  // random-walk growth per second

/// Pose-derived drive signals, one value per channel plus the shared
/// body-coupling term. Built only from joint rotations so they are
/// skeleton-independent, and from mirror-stable components so mirrored poses
/// swap the left/right blocks bit-exactly.
struct DriveSignals {
  std::array<double, kChannels> sig{};
  double coupling = 0;
};

inline DriveSignals drive_signals(const PoseVector<double>& pose) {
  std::array<Mat3<double>, kNodes> world;
  std::array<Mat3<double>, kNodes> local;
  world[0] = Mat3<double>::Identity();
  local[0] = Mat3<double>::Identity();
  for (int n = 1; n < kNodes; ++n) {
    const int pj = kNodePoseJoint[n];
    local[n] = pj >= 0 ? matrix_from_rot6d<double>(pose.rot6(static_cast<PoseJoint>(pj)))
                       : Mat3<double>::Identity();
    world[n] = world[kNodeParent[n]] * local[n];
  }

  DriveSignals out;
  for (int side = 0; side < 2; ++side) {
    const int shoulder = static_cast<int>(side == 0 ? Node::ShoulderL : Node::ShoulderR);
    const int elbow = static_cast<int>(side == 0 ? Node::ElbowL : Node::ElbowR);
    const int collar = static_cast<int>(side == 0 ? Node::CollarL : Node::CollarR);
    const Vec3<double> lateral(side == 0 ? 1.0 : -1.0, 0.0, 0.0);
    const Vec3<double> arm_dir = world[shoulder] * lateral;   // upper-arm axis
    const Vec3<double> fore_dir = world[elbow] * lateral;     // forearm axis
    const double raise = (1.0 + arm_dir.y()) / 2.0;           // 0 down .. 1 up
    const double frontness = (1.0 + arm_dir.z()) / 2.0;       // 0 back .. 1 front
    const double arm_lat = (1.0 + arm_dir.dot(lateral)) / 2.0;   // 0 crossed .. 1 outward
    const double fore_up = (1.0 + fore_dir.y()) / 2.0;
    const double fore_front = (1.0 + fore_dir.z()) / 2.0;
    const double fore_lat = (1.0 + fore_dir.dot(lateral)) / 2.0;
    const double tr_e = clampd((local[elbow].trace() - 1.0) / 2.0, -1.0, 1.0);
    const double flex = std::acos(tr_e) / kPi;                // 0 straight .. 1 folded
    const double lift = (local[collar] * lateral).y();

    const int base = side * 4;
    out.sig[base + 0] =  // shoulderTop: collar motion plus coarse arm posture
        0.45 * (lift / 0.35) + 0.25 * raise + 0.10 * flex + 0.20 * arm_lat;
    out.sig[base + 1] =  // shoulderFront: upper-arm elevation and forward reach
        0.35 * raise + 0.30 * frontness + 0.15 * fore_front + 0.20 * arm_lat;
    out.sig[base + 2] =  // shoulderBack: mirror of front in the reach terms
        0.35 * raise + 0.30 * (1.0 - frontness) + 0.15 * (1.0 - fore_front) + 0.20 * arm_lat;
    out.sig[base + 3] =  // sleeve: wraps the forearm, so forearm geometry dominates
        0.20 * flex + 0.10 * raise + 0.25 * fore_up + 0.25 * fore_front + 0.20 * fore_lat;
  }
  const double head_mag = (3.0 - local[static_cast<int>(Node::Head)].trace()) / 2.0 +
                          (3.0 - local[static_cast<int>(Node::Neck)].trace()) / 2.0;
  const double spine_lean = 1.0 - (world[static_cast<int>(Node::Spine3)] * Vec3<double>(0, 1, 0)).y();
  out.coupling = 0.7 * head_mag + 0.3 * spine_lean;
  return out;
}

inline double pair_amp(int channel) {
  switch (channel % 4) {
    case 0: return kAmpTop;
    case 1: return kAmpFrontBack;
    case 2: return kAmpFrontBack;
    default: return kAmpSleeve;
  }
}

}  // namespace sim

struct SynthOptions {
  bool noise = true;
  bool drift = true;
  bool wear_variation = true;
  uint64_t phase_us = 0;  // sensor clock phase within the first period
};

/// Forward model: pose track at 30 fps to raw 8-channel codes at 32 Hz.
/// Per channel, code = baseline + amplitude * drive + coupling + drift + noise,
/// linearly resampled from the label clock to the sensor clock.
inline std::vector<CapFrame> synth_capacitance(const std::vector<PoseVector<double>>& pose_track,
                                               const SubjectProfile& subject, uint64_t wear_seed,
                                               const SynthOptions& opt = {},
                                               uint64_t label_t0_us = 0) {
  if (pose_track.size() < 2) throw ConfigError("synth_capacitance: need at least 2 label frames");
  Rng wear_rng(derive_seed(wear_seed, 0x3EA8));
  std::array<double, kChannels> baseline{}, amp{}, coupling_amp{};
  for (int p = 0; p < 4; ++p) {
    const double bshift = opt.wear_variation ? wear_rng.uniform(0.99, 1.01) : 1.0;
    const double ashift = opt.wear_variation ? wear_rng.uniform(0.95, 1.05) : 1.0;
    for (int side = 0; side < 2; ++side) {
      const int c = side * 4 + p;
      baseline[c] = subject.baseline[c] * bshift;
      amp[c] = sim::pair_amp(c) * subject.baseline[c] * ashift;
      coupling_amp[c] = sim::kAmpCoupling * subject.coupling_gain * subject.baseline[c];
    }
  }

  // Noiseless per-label-frame channel values.
  const size_t nl = pose_track.size();
  Eigen::MatrixXd clean(nl, kChannels);
  for (size_t k = 0; k < nl; ++k) {
    const sim::DriveSignals d = sim::drive_signals(pose_track[k]);
    for (int c = 0; c < kChannels; ++c)
      clean(static_cast<long>(k), c) = baseline[c] + amp[c] * d.sig[c] + coupling_amp[c] * d.coupling;
  }

  auto label_t = [&](size_t k) {
    return label_t0_us + static_cast<uint64_t>(std::llround(k * 1e6 / kLabelFps));
  };
  const uint64_t t_end = label_t(nl - 1);

  Rng noise_rng(derive_seed(wear_seed, 0x4015E));
  std::array<double, kChannels> drift{};
  std::vector<CapFrame> frames;
  uint32_t seq = 0;
  for (uint64_t t = label_t0_us + opt.phase_us; t <= t_end; t += kFramePeriodUs) {
    // Locate the label interval containing t.
    const double kf = (static_cast<double>(t) - static_cast<double>(label_t0_us)) * kLabelFps / 1e6;
    size_t k0 = static_cast<size_t>(kf);
    if (k0 >= nl - 1) k0 = nl - 2;
    const uint64_t t0 = label_t(k0), t1 = label_t(k0 + 1);
    const double u = clampd((static_cast<double>(t) - static_cast<double>(t0)) /
                                (static_cast<double>(t1) - static_cast<double>(t0)),
                            0.0, 1.0);
    CapFrame f;
    f.seq = seq++;
    f.t_us = t;
    for (int c = 0; c < kChannels; ++c) {
      double v = clean(static_cast<long>(k0), c) +
                 u * (clean(static_cast<long>(k0 + 1), c) - clean(static_cast<long>(k0), c));
      if (opt.drift) {
        drift[c] += noise_rng.normal(0.0, sim::kDriftFracPerS * amp[c] / std::sqrt(kSampleRateHz));
        v += drift[c];
      }
      if (opt.noise) v += noise_rng.normal(0.0, sim::kNoiseFrac * amp[c]);
      v = std::nearbyint(v);
      f.ch[c] = static_cast<uint32_t>(clampd(v, 0.0, static_cast<double>(kMaxCode)));
    }
    frames.push_back(f);
  }
  return frames;
}

// ---- session assembly ----

struct SessionRecipe {
  double duration_s = 226.0;
  double defined_frac = 195.0 / 226.0;
  double dance_frac = 21.0 / 226.0;
  int transition_frames = 12;  // 0.4 s blend between scripts
};

/// Concatenate scripts with short blends, in study proportions:
/// defined movements, then a dance-like segment, then freestyle.
inline MotionScript compose_session_track(uint64_t seed, const SessionRecipe& recipe,
                                          std::vector<ScriptSegment>* segments) {
  const std::vector<MotionScript> lib = script_library();
  Rng rng(derive_seed(seed, 0x5E55));
  MotionScript track;
  track.name = "session";
  auto frames_to_us = [](size_t frames) {
    return static_cast<uint64_t>(std::llround(frames * 1e6 / kLabelFps));
  };
  auto append = [&](const MotionScript& s) {
    size_t start = track.keys.size();
    if (!track.keys.empty()) {
      const BodyAngles from = track.keys.back();
      for (int i = 1; i <= recipe.transition_frames; ++i)
        track.keys.push_back(detail::blend(from, s.keys.front(),
                                           detail::ease(double(i) / recipe.transition_frames)));
    }
    track.keys.insert(track.keys.end(), s.keys.begin(), s.keys.end());
    if (segments)
      segments->push_back({s.name, s.category, frames_to_us(start), frames_to_us(track.keys.size())});
  };

  const size_t defined_budget =
      static_cast<size_t>(recipe.duration_s * recipe.defined_frac * kLabelFps);
  std::vector<size_t> order(lib.size());
  for (size_t i = 0; i < order.size(); ++i) order[i] = i;
  size_t cursor = 0;
  auto next_script = [&]() -> const MotionScript& {
    if (cursor == 0 || cursor >= order.size()) {
      for (size_t i = order.size(); i > 1; --i)
        std::swap(order[i - 1], order[rng.bounded(i)]);
      cursor = 0;
    }
    return lib[order[cursor++]];
  };
  while (track.keys.size() < defined_budget) append(next_script());

  const double dance_s = recipe.duration_s * recipe.dance_frac;
  const double free_s =
      recipe.duration_s * (1.0 - recipe.defined_frac - recipe.dance_frac);
  append(dance_script(derive_seed(seed, 0xDA), std::max(2.0, dance_s)));
  append(freestyle_script(derive_seed(seed, 0xF5), std::max(2.0, free_s)));
  return track;
}

inline Session make_session(const SubjectProfile& subject, int session_index, uint64_t seed,
                            const SessionRecipe& recipe, bool noise = true) {
  Session s;
  s.meta.subject = subject.id;
  s.meta.session_index = session_index;
  s.meta.wear_seed = derive_seed(seed, 0x3EA0, subject.id, session_index);
  s.meta.label_t0_us = 0;

  const uint64_t track_seed = derive_seed(seed, 0x7AC, subject.id, session_index);
  MotionScript track = compose_session_track(track_seed, recipe, &s.meta.segments);
  const auto poses = track.pose_track();
  s.poses.reserve(poses.size());
  for (const auto& p : poses) s.poses.push_back(p.v.cast<float>());

  SynthOptions opt;
  opt.noise = noise;
  opt.drift = noise;
  Rng phase_rng(derive_seed(s.meta.wear_seed, 0x90A5E));
  opt.phase_us = phase_rng.bounded(kFramePeriodUs);
  s.meta.sensor_t0_us = opt.phase_us;
  s.frames = synth_capacitance(poses, subject, s.meta.wear_seed, opt, s.meta.label_t0_us);
  return s;
}

// ---- dataset generation ----

struct SimOptions {
  int subjects = 3;
  double minutes_per_subject = 20.0;
  int sessions_per_subject = 8;
  uint64_t seed = 1;
  bool noise = true;
};

/// Generate subjects, sessions, and the canonical splits: the last subject is
/// the evaluated one (earlier sessions fine-tune, last 2 test); the others
/// train the user-independent model with their last session held out.
inline DatasetManifest build_dataset(const SimOptions& opt, const std::string& out_dir) {
  if (opt.subjects < 2) throw ConfigError("build_dataset: need at least 2 subjects");
  if (opt.sessions_per_subject < 3)
    throw ConfigError("build_dataset: need at least 3 sessions per subject");
  if (opt.minutes_per_subject * 60.0 / opt.sessions_per_subject < 15.0)
    throw ConfigError("build_dataset: sessions shorter than 15 s");

  fs::create_directories(out_dir);
  DatasetManifest m;
  m.seed = opt.seed;
  SessionRecipe recipe;
  recipe.duration_s = opt.minutes_per_subject * 60.0 / opt.sessions_per_subject;

  int session_id = 0;
  for (int subj = 0; subj < opt.subjects; ++subj) {
    Rng srng(derive_seed(opt.seed, 0x5B, subj));
    const SubjectProfile profile = generate_subject(subj, srng);
    m.subjects.push_back(profile);
    subject_skeleton(profile).save(out_dir + "/subject" + std::to_string(subj) +
                                   "_skeleton.json");
    for (int k = 0; k < opt.sessions_per_subject; ++k) {
      Session s = make_session(profile, k, opt.seed, recipe, opt.noise);
      const std::string dir =
          out_dir + "/s" + std::to_string(subj) + "_" + std::to_string(k);
      write_session(dir, s);
      m.sessions.push_back({session_id, subj, dir, s.duration_s()});
      const bool test_subject = subj == opt.subjects - 1;
      if (test_subject) {
        if (k >= opt.sessions_per_subject - 2)
          m.splits.ua_test.push_back(session_id);
        else
          m.splits.ua_finetune.push_back(session_id);
      } else {
        if (k == opt.sessions_per_subject - 1)
          m.splits.ui_val.push_back(session_id);
        else
          m.splits.ui_train.push_back(session_id);
      }
      ++session_id;
    }
  }
  m.save(out_dir + "/dataset.json");
  return m;
}

}  // namespace seampose
