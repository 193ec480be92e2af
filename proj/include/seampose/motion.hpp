#pragma once

#include <cmath>
#include <functional>
#include <string>
#include <vector>

#include "seampose/rng.hpp"
#include "seampose/rotation.hpp"

namespace seampose {

inline constexpr double kLabelFps = 30.0;
inline constexpr double kPi = 3.14159265358979323846;

enum class MotionCategory : int { Defined = 0, Dance, Freestyle };

inline const char* motion_category_name(MotionCategory c) {
  static const char* names[3] = {"defined", "dance", "freestyle"};
  return names[static_cast<int>(c)];
}

/// Named joint-angle parameterization of one upper-body pose, radians.
/// Axes: x lateral-left, y up, z forward. Side angles are expressed in the
/// left-side frame; the right side is conjugated by the sagittal mirror when
/// composing rotations, so equal left/right angles mean a symmetric pose.
struct BodyAngles {
  double spine_pitch = 0, spine_roll = 0, spine_yaw = 0;
  double neck_pitch = 0, neck_yaw = 0, neck_roll = 0;
  double head_pitch = 0, head_yaw = 0, head_roll = 0;
  struct Side {
    double collar_lift = 0, collar_forward = 0;
    double shoulder_abduction = 0;  // 0 = T-pose, negative lowers the arm
    double shoulder_flexion = 0;    // positive brings the arm forward
    double shoulder_twist = 0;
    double elbow_flexion = 0;  // 0 = straight
    double elbow_twist = 0;
    double wrist_flexion = 0;
  } left, right;
};

/// Relaxed stance: arms hanging slightly out from the body.
inline BodyAngles rest_pose() {
  BodyAngles a;
  a.left.shoulder_abduction = a.right.shoulder_abduction = -1.35;
  a.left.shoulder_flexion = a.right.shoulder_flexion = 0.10;
  a.left.elbow_flexion = a.right.elbow_flexion = 0.30;
  return a;
}

inline double clampd(double v, double lo, double hi) { return v < lo ? lo : (v > hi ? hi : v); }

/// Anatomical limits; scripts and generators pass through here.
inline void clamp_anatomical(BodyAngles& a) {
  a.spine_pitch = clampd(a.spine_pitch, -0.45, 0.70);
  a.spine_roll = clampd(a.spine_roll, -0.55, 0.55);
  a.spine_yaw = clampd(a.spine_yaw, -0.95, 0.95);
  a.neck_pitch = clampd(a.neck_pitch, -0.60, 0.70);
  a.neck_yaw = clampd(a.neck_yaw, -0.75, 0.75);
  a.neck_roll = clampd(a.neck_roll, -0.55, 0.55);
  a.head_pitch = clampd(a.head_pitch, -0.60, 0.70);
  a.head_yaw = clampd(a.head_yaw, -0.75, 0.75);
  a.head_roll = clampd(a.head_roll, -0.55, 0.55);
  for (BodyAngles::Side* s : {&a.left, &a.right}) {
    s->collar_lift = clampd(s->collar_lift, -0.20, 0.50);
    s->collar_forward = clampd(s->collar_forward, -0.40, 0.40);
    s->shoulder_abduction = clampd(s->shoulder_abduction, -1.48, 1.70);
    s->shoulder_flexion = clampd(s->shoulder_flexion, -0.85, 1.65);
    s->shoulder_twist = clampd(s->shoulder_twist, -1.40, 1.40);
    s->elbow_flexion = clampd(s->elbow_flexion, 0.0, 2.60);
    s->elbow_twist = clampd(s->elbow_twist, -1.50, 1.50);
    s->wrist_flexion = clampd(s->wrist_flexion, -0.60, 0.60);
  }
}

namespace detail {

template <typename S>
Mat3<S> spine_rot(double pitch, double roll, double yaw) {
  return rot_y<S>(S(yaw)) * rot_x<S>(S(pitch)) * rot_z<S>(S(roll));
}
template <typename S>
Mat3<S> head_rot(double pitch, double yaw, double roll) {
  return rot_y<S>(S(yaw)) * rot_x<S>(S(pitch)) * rot_z<S>(S(roll));
}
template <typename S>
Mat3<S> collar_rot(const BodyAngles::Side& s) {
  return rot_z<S>(S(s.collar_lift)) * rot_y<S>(S(-s.collar_forward));
}
template <typename S>
Mat3<S> shoulder_rot(const BodyAngles::Side& s) {
  return rot_z<S>(S(s.shoulder_abduction)) * rot_y<S>(S(-s.shoulder_flexion)) *
         rot_x<S>(S(s.shoulder_twist));
}
template <typename S>
Mat3<S> elbow_rot(const BodyAngles::Side& s) {
  return rot_x<S>(S(s.elbow_twist)) * rot_z<S>(S(s.elbow_flexion));
}
template <typename S>
Mat3<S> wrist_rot(const BodyAngles::Side& s) {
  return rot_z<S>(S(s.wrist_flexion));
}

}  // namespace detail

/// Compose per-joint rotations and encode as the 78-dim 6D pose vector.
/// Right-side joints are the sagittal conjugates of the left-side formulas,
/// so mirrored angle sets produce exactly mirrored poses.
inline PoseVector<double> to_pose(const BodyAngles& a) {
  using detail::collar_rot;
  using detail::elbow_rot;
  using detail::head_rot;
  using detail::shoulder_rot;
  using detail::spine_rot;
  using detail::wrist_rot;
  PoseVector<double> p;
  auto set = [&p](PoseJoint j, const Mat3<double>& r) { p.rot6(j) = rot6d_from_matrix(r); };
  const Mat3<double> sp = spine_rot<double>(a.spine_pitch / 3, a.spine_roll / 3, a.spine_yaw / 3);
  set(PoseJoint::Spine1, sp);
  set(PoseJoint::Spine2, sp);
  set(PoseJoint::Spine3, sp);
  set(PoseJoint::Neck, head_rot<double>(a.neck_pitch, a.neck_yaw, a.neck_roll));
  set(PoseJoint::Head, head_rot<double>(a.head_pitch, a.head_yaw, a.head_roll));
  set(PoseJoint::CollarL, collar_rot<double>(a.left));
  set(PoseJoint::CollarR, mirror_x(collar_rot<double>(a.right)));
  set(PoseJoint::ShoulderL, shoulder_rot<double>(a.left));
  set(PoseJoint::ShoulderR, mirror_x(shoulder_rot<double>(a.right)));
  set(PoseJoint::ElbowL, elbow_rot<double>(a.left));
  set(PoseJoint::ElbowR, mirror_x(elbow_rot<double>(a.right)));
  set(PoseJoint::WristL, wrist_rot<double>(a.left));
  set(PoseJoint::WristR, mirror_x(wrist_rot<double>(a.right)));
  return p;
}

/// Exact sagittal mirror of an encoded pose: swaps left/right joints and
/// conjugates every rotation by diag(-1,1,1). Pure sign flips, so the result
/// is bit-exact.
inline PoseVector<double> mirror_pose(const PoseVector<double>& p) {
  auto mirror6 = [](Eigen::Matrix<double, 6, 1> v) {
    v(1) = -v(1);
    v(2) = -v(2);
    v(3) = -v(3);
    return v;
  };
  PoseVector<double> out;
  auto assign = [&](PoseJoint dst, PoseJoint src) { out.rot6(dst) = mirror6(p.rot6(src)); };
  for (PoseJoint j : {PoseJoint::Spine1, PoseJoint::Spine2, PoseJoint::Spine3, PoseJoint::Neck,
                      PoseJoint::Head})
    assign(j, j);
  assign(PoseJoint::CollarL, PoseJoint::CollarR);
  assign(PoseJoint::CollarR, PoseJoint::CollarL);
  assign(PoseJoint::ShoulderL, PoseJoint::ShoulderR);
  assign(PoseJoint::ShoulderR, PoseJoint::ShoulderL);
  assign(PoseJoint::ElbowL, PoseJoint::ElbowR);
  assign(PoseJoint::ElbowR, PoseJoint::ElbowL);
  assign(PoseJoint::WristL, PoseJoint::WristR);
  assign(PoseJoint::WristR, PoseJoint::WristL);
  return out;
}

/// Swap left/right angle sets and flip the lateral-sign central angles.
inline BodyAngles mirror_angles(const BodyAngles& a) {
  BodyAngles m = a;
  std::swap(m.left, m.right);
  m.spine_roll = -a.spine_roll;
  m.spine_yaw = -a.spine_yaw;
  m.neck_yaw = -a.neck_yaw;
  m.neck_roll = -a.neck_roll;
  m.head_yaw = -a.head_yaw;
  m.head_roll = -a.head_roll;
  return m;
}

/// One scripted movement: a dense joint-angle track at 30 fps.
struct MotionScript {
  std::string name;
  MotionCategory category = MotionCategory::Defined;
  std::string appendix_tag;  // index range in the movement-instruction list
  std::vector<BodyAngles> keys;  // one per label frame

  double duration_s() const { return static_cast<double>(keys.size()) / kLabelFps; }

  std::vector<PoseVector<double>> pose_track() const {
    std::vector<PoseVector<double>> out;
    out.reserve(keys.size());
    for (const auto& k : keys) out.push_back(to_pose(k));
    return out;
  }
};

namespace detail {

inline MotionScript sample_script(const std::string& name, const std::string& tag, double dur_s,
                                  const std::function<BodyAngles(double)>& fn,
                                  MotionCategory cat = MotionCategory::Defined) {
  MotionScript s;
  s.name = name;
  s.category = cat;
  s.appendix_tag = tag;
  const int frames = static_cast<int>(std::lround(dur_s * kLabelFps));
  s.keys.reserve(frames);
  for (int i = 0; i < frames; ++i) {
    BodyAngles a = fn(static_cast<double>(i) / kLabelFps);
    clamp_anatomical(a);
    s.keys.push_back(a);
  }
  return s;
}

// Smooth 0->1->0 bump over [0, 1].
inline double bump(double u) {
  u = clampd(u, 0.0, 1.0);
  const double s = std::sin(kPi * u);
  return s * s;
}
// Smoothstep 0->1 over [0, 1].
inline double ease(double u) {
  u = clampd(u, 0.0, 1.0);
  return u * u * (3 - 2 * u);
}
// Sine oscillation with `cycles` full periods over [0, 1].
inline double osc(double u, double cycles) { return std::sin(2 * kPi * cycles * u); }
// Trapezoid 0->1, hold, ->0 over [0, 1]; `edge` is the rise/fall fraction.
inline double hold_bump(double u, double edge = 0.2) {
  u = clampd(u, 0.0, 1.0);
  if (u < edge) return ease(u / edge);
  if (u > 1.0 - edge) return ease((1.0 - u) / edge);
  return 1.0;
}
// Steps through `levels` sequentially over [0, 1], holding each and easing
// between neighbours; mirrors the held-track arm sequences.
inline double staircase(double u, const std::vector<double>& levels) {
  u = clampd(u, 0.0, 1.0 - 1e-9);
  const size_t n = levels.size();
  if (n == 1) return levels[0];
  const double seg = u * static_cast<double>(n);
  const size_t i = static_cast<size_t>(seg);
  const double frac = seg - static_cast<double>(i);
  const double transition = 0.35;  // leading fraction of each hold used to blend in
  const double from = i == 0 ? levels[0] : levels[i - 1];
  if (frac < transition && i > 0) return from + (levels[i] - from) * ease(frac / transition);
  return levels[i];
}

}  // namespace detail

/// Deterministic library of defined movements spanning the instruction-video
/// groups: casual gestures, sports, head/shoulder sequences, and arm-track
/// sequences.
inline std::vector<MotionScript> script_library() {
  using detail::bump;
  using detail::ease;
  using detail::hold_bump;
  using detail::osc;
  using detail::sample_script;
  using detail::staircase;
  std::vector<MotionScript> lib;
  auto add = [&lib](const std::string& name, const std::string& tag, double dur,
                    const std::function<BodyAngles(double)>& fn) {
    lib.push_back(sample_script(name, tag, dur, fn));
  };
  const BodyAngles rest = rest_pose();

  // -- casual/daily gestures --
  add("lean_forward", "1", 5.0, [rest](double t) {
    BodyAngles a = rest;
    a.spine_pitch = 0.55 * bump(t / 5.0);
    return a;
  });
  add("lean_backward", "2", 5.0, [rest](double t) {
    BodyAngles a = rest;
    a.spine_pitch = -0.35 * bump(t / 5.0);
    return a;
  });
  add("lean_left", "3", 5.0, [rest](double t) {
    BodyAngles a = rest;
    a.spine_roll = 0.45 * bump(t / 5.0);
    return a;
  });
  add("lean_right", "4", 5.0, [rest](double t) {
    BodyAngles a = rest;
    a.spine_roll = -0.45 * bump(t / 5.0);
    return a;
  });
  add("turn_left", "5", 5.0, [rest](double t) {
    BodyAngles a = rest;
    a.spine_yaw = 0.8 * bump(t / 5.0);
    a.head_yaw = 0.3 * bump(t / 5.0);
    return a;
  });
  add("turn_right", "6", 5.0, [rest](double t) {
    BodyAngles a = rest;
    a.spine_yaw = -0.8 * bump(t / 5.0);
    a.head_yaw = -0.3 * bump(t / 5.0);
    return a;
  });
  add("shrug", "7", 4.0, [rest](double t) {
    BodyAngles a = rest;
    const double v = 0.45 * bump(std::fmod(t, 2.0) / 2.0);
    a.left.collar_lift = a.right.collar_lift = v;
    return a;
  });
  add("open_arms", "10", 5.0, [rest](double t) {
    BodyAngles a = rest;
    const double u = hold_bump(t / 5.0);
    a.left.shoulder_abduction = a.right.shoulder_abduction = rest.left.shoulder_abduction * (1 - u);
    a.left.elbow_flexion = a.right.elbow_flexion = 0.3 * (1 - u);
    return a;
  });
  add("hands_on_head", "11", 6.0, [rest](double t) {
    BodyAngles a = rest;
    const double u = hold_bump(t / 6.0);
    a.left.shoulder_abduction = a.right.shoulder_abduction =
        rest.left.shoulder_abduction + 1.7 * u;
    a.left.elbow_flexion = a.right.elbow_flexion = 0.3 + 1.9 * u;
    a.left.shoulder_twist = a.right.shoulder_twist = 0.5 * u;
    return a;
  });
  add("arms_up", "12", 5.0, [rest](double t) {
    BodyAngles a = rest;
    const double u = hold_bump(t / 5.0);
    a.left.shoulder_abduction = a.right.shoulder_abduction =
        rest.left.shoulder_abduction + 2.8 * u;
    a.left.elbow_flexion = a.right.elbow_flexion = 0.3 * (1 - u);
    return a;
  });
  add("claps", "14", 5.0, [rest](double t) {
    BodyAngles a = rest;
    const double open = 0.5 + 0.45 * osc(t / 5.0, 5);
    a.left.shoulder_abduction = a.right.shoulder_abduction = -1.1 + 0.25 * open;
    a.left.shoulder_flexion = a.right.shoulder_flexion = 0.9;
    a.left.elbow_flexion = a.right.elbow_flexion = 0.9 - 0.5 * open;
    return a;
  });
  add("butterfly_swing", "16", 6.0, [rest](double t) {
    BodyAngles a = rest;
    const double u = osc(t / 6.0, 3);
    a.left.shoulder_abduction = a.right.shoulder_abduction = -0.3 + 0.55 * u;
    a.left.shoulder_flexion = a.right.shoulder_flexion = 0.5 - 0.4 * u;
    a.left.elbow_flexion = a.right.elbow_flexion = 0.5;
    return a;
  });
  add("stop_gesture", "20", 4.0, [rest](double t) {
    BodyAngles a = rest;
    const double u = ease(t / 1.2) * ease((4.0 - t) / 1.2);
    a.right.shoulder_flexion = rest.right.shoulder_flexion + 1.2 * u;
    a.right.shoulder_abduction = -0.9 * (1 - u) - 0.35 * u;
    a.right.elbow_flexion = 0.3 + 0.4 * u;
    a.right.wrist_flexion = 0.5 * u;
    return a;
  });

  // -- sports movements --
  add("golf_swing", "21", 6.0, [rest](double t) {
    BodyAngles a = rest;
    const double u = t / 6.0;
    const double wind = bump(clampd(u * 2, 0.0, 1.0));
    const double swing = bump(clampd((u - 0.5) * 2, 0.0, 1.0));
    a.spine_yaw = 0.7 * wind - 0.9 * swing;
    a.spine_pitch = 0.25;
    a.left.shoulder_abduction = a.right.shoulder_abduction = -1.05;
    a.left.shoulder_flexion = a.right.shoulder_flexion = 0.55 + 0.3 * (wind - swing);
    a.left.elbow_flexion = 0.35 + 0.55 * wind;
    a.right.elbow_flexion = 0.35 + 0.45 * swing;
    return a;
  });
  add("tennis_swing_right", "22", 5.0, [rest](double t) {
    BodyAngles a = rest;
    const double u = bump(t / 5.0);
    a.spine_yaw = -0.55 * u;
    a.right.shoulder_abduction = -0.55 * u - 1.2 * (1 - u);
    a.right.shoulder_flexion = 0.15 + 0.85 * u;
    a.right.elbow_flexion = 0.3 + 0.5 * (1 - u);
    return a;
  });
  add("tennis_swing_left", "23", 5.0, [rest](double t) {
    BodyAngles a = rest;
    const double u = bump(t / 5.0);
    a.spine_yaw = 0.55 * u;
    a.left.shoulder_abduction = -0.55 * u - 1.2 * (1 - u);
    a.left.shoulder_flexion = 0.15 + 0.85 * u;
    a.left.elbow_flexion = 0.3 + 0.5 * (1 - u);
    return a;
  });
  add("basketball_dribble_right", "24", 5.0, [rest](double t) {
    BodyAngles a = rest;
    a.spine_pitch = 0.25;
    a.right.shoulder_abduction = -1.15;
    a.right.shoulder_flexion = 0.45;
    a.right.elbow_flexion = 0.9 + 0.5 * osc(t / 5.0, 6);
    a.right.wrist_flexion = 0.4 * osc(t / 5.0, 6);
    return a;
  });
  add("basketball_shoot", "26", 5.0, [rest](double t) {
    BodyAngles a = rest;
    const double u = bump(t / 5.0);
    a.left.shoulder_abduction = a.right.shoulder_abduction = -1.2 + 2.2 * u;
    a.left.shoulder_flexion = a.right.shoulder_flexion = 0.3 + 0.6 * u;
    a.left.elbow_flexion = 0.4 + 1.5 * u * (1 - ease((t - 3.5) / 1.0));
    a.right.elbow_flexion = 0.4 + 1.7 * u * (1 - ease((t - 3.5) / 1.0));
    return a;
  });
  add("alternate_punches", "27", 6.0, [rest](double t) {
    BodyAngles a = rest;
    const double u = osc(t / 6.0, 4);
    const double l = clampd(u, 0.0, 1.0), r = clampd(-u, 0.0, 1.0);
    a.left.shoulder_flexion = 0.2 + 1.2 * l;
    a.right.shoulder_flexion = 0.2 + 1.2 * r;
    a.left.shoulder_abduction = -1.0 + 0.35 * l;
    a.right.shoulder_abduction = -1.0 + 0.35 * r;
    a.left.elbow_flexion = 1.6 - 1.45 * l;
    a.right.elbow_flexion = 1.6 - 1.45 * r;
    a.spine_yaw = 0.25 * u;
    return a;
  });
  add("arm_swing_side_left", "28", 5.0, [rest](double t) {
    BodyAngles a = rest;
    a.left.shoulder_flexion = 0.1 + 0.7 * osc(t / 5.0, 3);
    a.left.elbow_flexion = 0.35 + 0.15 * osc(t / 5.0, 3);
    return a;
  });
  add("arm_swing_front_right", "31", 5.0, [rest](double t) {
    BodyAngles a = rest;
    a.right.shoulder_flexion = 0.7 + 0.6 * osc(t / 5.0, 3);
    a.right.shoulder_abduction = -1.15;
    a.right.elbow_flexion = 0.25;
    return a;
  });

  // -- head sequences --
  add("head_nod", "32", 4.0, [rest](double t) {
    BodyAngles a = rest;
    a.head_pitch = 0.5 * osc(t / 4.0, 3);
    a.neck_pitch = 0.2 * osc(t / 4.0, 3);
    return a;
  });
  add("head_roll", "33", 5.0, [rest](double t) {
    BodyAngles a = rest;
    const double ph = 2 * kPi * t / 2.5;
    a.head_pitch = 0.4 * std::cos(ph);
    a.head_roll = 0.4 * std::sin(ph);
    a.neck_pitch = 0.15 * std::cos(ph);
    a.neck_roll = 0.15 * std::sin(ph);
    return a;
  });
  add("head_turn", "34", 4.0, [rest](double t) {
    BodyAngles a = rest;
    a.head_yaw = 0.65 * osc(t / 4.0, 2);
    a.neck_yaw = 0.3 * osc(t / 4.0, 2);
    return a;
  });
  add("head_tilt", "35", 4.0, [rest](double t) {
    BodyAngles a = rest;
    a.head_roll = 0.5 * osc(t / 4.0, 2);
    a.neck_roll = 0.2 * osc(t / 4.0, 2);
    return a;
  });

  // -- shoulder sequences --
  add("shoulder_updown", "36", 4.0, [rest](double t) {
    BodyAngles a = rest;
    const double v = 0.45 * (0.5 + 0.5 * osc(t / 4.0, 3));
    a.left.collar_lift = a.right.collar_lift = v;
    return a;
  });
  add("shoulder_fwdback", "37", 4.0, [rest](double t) {
    BodyAngles a = rest;
    const double v = 0.35 * osc(t / 4.0, 3);
    a.left.collar_forward = a.right.collar_forward = v;
    return a;
  });
  add("shoulder_circles", "38", 5.0, [rest](double t) {
    BodyAngles a = rest;
    const double ph = 2 * kPi * t / 2.5;
    a.left.collar_lift = a.right.collar_lift = 0.25 + 0.2 * std::sin(ph);
    a.left.collar_forward = a.right.collar_forward = 0.3 * std::cos(ph);
    return a;
  });

  // -- arm-track sequences: tracks are held terminal poses visited in turn --
  add("side_raise_both", "42-44", 7.0, [rest](double t) {
    BodyAngles a = rest;
    const double u = staircase(t / 7.0, {0.0, 0.45, 0.45, 1.0, 1.0, 1.45, 0.6, 0.0});
    a.left.shoulder_abduction = a.right.shoulder_abduction =
        rest.left.shoulder_abduction + u;
    a.left.elbow_flexion = a.right.elbow_flexion = 0.15;
    return a;
  });
  add("curl_down_both", "39-41", 7.0, [rest](double t) {
    BodyAngles a = rest;
    const double u = t / 7.0;
    a.left.elbow_flexion = a.right.elbow_flexion =
        0.2 + staircase(u, {0.0, 2.1, 0.3, 2.1, 0.2, 1.2, 0.0});
    a.left.elbow_twist = a.right.elbow_twist = staircase(u, {0.0, 0.9, 0.9, 0.0, -0.9, -0.9, 0.0});
    return a;
  });
  add("curl_front_both", "45-47", 7.0, [rest](double t) {
    BodyAngles a = rest;
    a.left.shoulder_flexion = a.right.shoulder_flexion = 1.3;
    a.left.shoulder_abduction = a.right.shoulder_abduction = -0.9;
    const double u = t / 7.0;
    a.left.elbow_flexion = a.right.elbow_flexion =
        0.1 + staircase(u, {0.0, 1.9, 0.4, 1.9, 0.0});
    a.left.elbow_twist = a.right.elbow_twist = staircase(u, {0.5, 0.5, 0.0, -0.5, -0.5});
    return a;
  });
  add("overhead_curl_both", "48-50", 6.0, [rest](double t) {
    BodyAngles a = rest;
    a.left.shoulder_abduction = a.right.shoulder_abduction = 1.35;
    const double u = t / 6.0;
    a.left.elbow_flexion = a.right.elbow_flexion = 0.1 + staircase(u, {0.0, 1.6, 0.2, 1.6, 0.0});
    return a;
  });
  add("asym_raise_mix", "51-54", 7.0, [rest](double t) {
    BodyAngles a = rest;
    const double u = t / 7.0;
    a.left.shoulder_abduction =
        rest.left.shoulder_abduction + staircase(u, {0.0, 1.4, 1.4, 0.6, 0.0});
    a.right.shoulder_abduction =
        rest.right.shoulder_abduction + staircase(u, {0.0, 2.7, 1.2, 2.7, 0.0});
    a.right.elbow_flexion = 0.2 + staircase(u, {0.0, 0.0, 1.3, 1.3, 0.0});
    return a;
  });
  add("reach_front_hold", "45", 6.0, [rest](double t) {
    BodyAngles a = rest;
    const double u = hold_bump(t / 6.0, 0.25);
    a.left.shoulder_flexion = a.right.shoulder_flexion = 0.1 + 1.4 * u;
    a.left.shoulder_abduction = a.right.shoulder_abduction = -1.0 + 0.15 * u;
    a.left.elbow_flexion = a.right.elbow_flexion = 0.3 * (1 - u);
    return a;
  });
  return lib;
}

/// Fluent multi-joint movement with seeded random phases and rates.
inline MotionScript dance_script(uint64_t seed, double dur_s) {
  Rng rng(derive_seed(seed, 0xDA7CE));
  const double f1 = rng.uniform(0.4, 0.9), f2 = rng.uniform(0.5, 1.2), f3 = rng.uniform(0.3, 0.8);
  const double p1 = rng.uniform(0, 2 * kPi), p2 = rng.uniform(0, 2 * kPi),
               p3 = rng.uniform(0, 2 * kPi);
  const double wob = rng.uniform(0.15, 0.4);
  return detail::sample_script(
      "dance_" + std::to_string(seed), "tiktok", dur_s,
      [=](double t) {
        BodyAngles a = rest_pose();
        a.spine_roll = wob * std::sin(2 * kPi * f3 * t + p3);
        a.spine_yaw = 0.3 * std::sin(2 * kPi * f1 * t + p2);
        a.left.shoulder_abduction = -0.9 + 0.8 * std::sin(2 * kPi * f1 * t + p1);
        a.right.shoulder_abduction = -0.9 + 0.8 * std::sin(2 * kPi * f1 * t + p1 + kPi / 2);
        a.left.shoulder_flexion = 0.5 + 0.5 * std::sin(2 * kPi * f2 * t + p2);
        a.right.shoulder_flexion = 0.5 + 0.5 * std::sin(2 * kPi * f2 * t + p2 + kPi);
        a.left.elbow_flexion = 0.9 + 0.7 * std::sin(2 * kPi * f2 * t + p3);
        a.right.elbow_flexion = 0.9 + 0.7 * std::sin(2 * kPi * f2 * t + p3 + kPi);
        a.head_roll = 0.2 * std::sin(2 * kPi * f3 * t + p1);
        return a;
      },
      MotionCategory::Dance);
}

namespace detail {

inline BodyAngles random_anatomical_pose(Rng& rng) {
  BodyAngles a;
  a.spine_pitch = rng.uniform(-0.3, 0.5);
  a.spine_roll = rng.uniform(-0.4, 0.4);
  a.spine_yaw = rng.uniform(-0.7, 0.7);
  a.neck_pitch = rng.uniform(-0.3, 0.3);
  a.neck_yaw = rng.uniform(-0.4, 0.4);
  a.neck_roll = rng.uniform(-0.25, 0.25);
  a.head_pitch = rng.uniform(-0.4, 0.4);
  a.head_yaw = rng.uniform(-0.5, 0.5);
  a.head_roll = rng.uniform(-0.3, 0.3);
  for (BodyAngles::Side* s : {&a.left, &a.right}) {
    s->collar_lift = rng.uniform(-0.1, 0.4);
    s->collar_forward = rng.uniform(-0.3, 0.3);
    s->shoulder_abduction = rng.uniform(-1.45, 1.6);
    s->shoulder_flexion = rng.uniform(-0.5, 1.5);
    s->shoulder_twist = rng.uniform(-1.0, 1.0);
    s->elbow_flexion = rng.uniform(0.0, 2.4);
    s->elbow_twist = rng.uniform(-1.2, 1.2);
    s->wrist_flexion = rng.uniform(-0.5, 0.5);
  }
  return a;
}

inline double lerp(double a, double b, double u) { return a + (b - a) * u; }

inline BodyAngles blend(const BodyAngles& a, const BodyAngles& b, double u) {
  BodyAngles o;
  o.spine_pitch = lerp(a.spine_pitch, b.spine_pitch, u);
  o.spine_roll = lerp(a.spine_roll, b.spine_roll, u);
  o.spine_yaw = lerp(a.spine_yaw, b.spine_yaw, u);
  o.neck_pitch = lerp(a.neck_pitch, b.neck_pitch, u);
  o.neck_yaw = lerp(a.neck_yaw, b.neck_yaw, u);
  o.neck_roll = lerp(a.neck_roll, b.neck_roll, u);
  o.head_pitch = lerp(a.head_pitch, b.head_pitch, u);
  o.head_yaw = lerp(a.head_yaw, b.head_yaw, u);
  o.head_roll = lerp(a.head_roll, b.head_roll, u);
  auto bl = [u](const BodyAngles::Side& x, const BodyAngles::Side& y) {
    BodyAngles::Side s;
    s.collar_lift = lerp(x.collar_lift, y.collar_lift, u);
    s.collar_forward = lerp(x.collar_forward, y.collar_forward, u);
    s.shoulder_abduction = lerp(x.shoulder_abduction, y.shoulder_abduction, u);
    s.shoulder_flexion = lerp(x.shoulder_flexion, y.shoulder_flexion, u);
    s.shoulder_twist = lerp(x.shoulder_twist, y.shoulder_twist, u);
    s.elbow_flexion = lerp(x.elbow_flexion, y.elbow_flexion, u);
    s.elbow_twist = lerp(x.elbow_twist, y.elbow_twist, u);
    s.wrist_flexion = lerp(x.wrist_flexion, y.wrist_flexion, u);
    return s;
  };
  o.left = bl(a.left, b.left);
  o.right = bl(a.right, b.right);
  return o;
}

}  // namespace detail

/// Random movements: smooth spline-like interpolation between sampled
/// anatomical poses.
inline MotionScript freestyle_script(uint64_t seed, double dur_s) {
  Rng rng(derive_seed(seed, 0xF5EE));
  const double knot_s = 1.2;
  const int knots = static_cast<int>(std::ceil(dur_s / knot_s)) + 2;
  std::vector<BodyAngles> anchors;
  anchors.push_back(rest_pose());
  for (int i = 1; i < knots; ++i) anchors.push_back(detail::random_anatomical_pose(rng));
  return detail::sample_script(
      "freestyle_" + std::to_string(seed), "freestyle", dur_s,
      [anchors, knot_s](double t) {
        const double u = t / knot_s;
        const int i = static_cast<int>(u);
        return detail::blend(anchors[i], anchors[i + 1], detail::ease(u - i));
      },
      MotionCategory::Freestyle);
}

}  // namespace seampose
