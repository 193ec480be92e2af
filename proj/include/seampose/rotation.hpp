#pragma once

#include <Eigen/Core>
#include <Eigen/Geometry>
#include <cmath>

#include "seampose/errors.hpp"
#include "seampose/rng.hpp"

namespace seampose {

template <typename S>
using Mat3 = Eigen::Matrix<S, 3, 3>;
template <typename S>
using Vec3 = Eigen::Matrix<S, 3, 1>;
template <typename S>
using Rot6 = Eigen::Matrix<S, 6, 1>;

/// The 13 rotated joints, in the normative order used by the 78-dim decoder
/// output and every file format.
enum class PoseJoint : int {
  Spine1 = 0,
  Spine2,
  Spine3,
  Neck,
  Head,
  CollarL,
  CollarR,
  ShoulderL,
  ShoulderR,
  ElbowL,
  ElbowR,
  WristL,
  WristR,
};
inline constexpr int kPoseJoints = 13;
inline constexpr int kPoseDim = kPoseJoints * 6;  // 78

/// The 8 reported joints, in output order.
enum class OutJoint : int {
  Nose = 0,
  Neck,
  ShoulderR,
  ElbowR,
  WristR,
  ShoulderL,
  ElbowL,
  WristL,
};
inline constexpr int kOutJoints = 8;
inline constexpr int kJointDim = kOutJoints * 3;  // 24

inline const char* pose_joint_name(PoseJoint j) {
  static const char* names[kPoseJoints] = {
      "spine1", "spine2",    "spine3",    "neck",   "head",   "collarL", "collarR",
      "shoulderL", "shoulderR", "elbowL", "elbowR", "wristL", "wristR"};
  return names[static_cast<int>(j)];
}

inline const char* out_joint_name(OutJoint j) {
  static const char* names[kOutJoints] = {"nose",   "neck",      "shoulderR", "elbowR",
                                          "wristR", "shoulderL", "elbowL",    "wristL"};
  return names[static_cast<int>(j)];
}

/// 13 joint rotations in the 6D representation, flattened to 78 entries.
template <typename S>
struct PoseVector {
  Eigen::Matrix<S, kPoseDim, 1> v = Eigen::Matrix<S, kPoseDim, 1>::Zero();

  Eigen::Ref<Rot6<S>> rot6(PoseJoint j) { return v.template segment<6>(6 * static_cast<int>(j)); }
  Eigen::Ref<const Rot6<S>> rot6(PoseJoint j) const {
    return v.template segment<6>(6 * static_cast<int>(j));
  }
};

/// First two columns of R, column-major.
template <typename S>
Rot6<S> rot6d_from_matrix(const Mat3<S>& r) {
  Rot6<S> v;
  v.template head<3>() = r.col(0);
  v.template tail<3>() = r.col(1);
  return v;
}

inline constexpr double kDegenerateAngle = 1e-6;  // radians

/// Gram-Schmidt reconstruction of a rotation matrix from its 6D encoding.
/// Total on any pair of linearly independent 3-vectors; the result is
/// orthonormal with det +1 regardless of input scale.
template <typename S>
Mat3<S> matrix_from_rot6d(const Rot6<S>& v) {
  const Vec3<S> a1 = v.template head<3>();
  const Vec3<S> a2 = v.template tail<3>();
  const S n1 = a1.norm();
  if (!(n1 > S(0)) || !a1.allFinite() || !a2.allFinite())
    throw DegenerateRotation("matrix_from_rot6d: first 3-vector is zero or non-finite");
  const Vec3<S> c0 = a1 / n1;
  const Vec3<S> u = a2 - a2.dot(c0) * c0;
  const S nu = u.norm();
  // sin(angle between a1 and a2) = |u| / |a2|
  if (!(nu > S(kDegenerateAngle) * a2.norm()))
    throw DegenerateRotation("matrix_from_rot6d: columns nearly parallel");
  const Vec3<S> c1 = u / nu;
  Mat3<S> r;
  r.col(0) = c0;
  r.col(1) = c1;
  r.col(2) = c0.cross(c1);
  return r;
}

/// Adjoint of matrix_from_rot6d: maps dL/dR back to dL/dv.
/// Recomputes the forward intermediates from v.
template <typename S>
Rot6<S> matrix_from_rot6d_backward(const Rot6<S>& v, const Mat3<S>& dr) {
  const Vec3<S> a1 = v.template head<3>();
  const Vec3<S> a2 = v.template tail<3>();
  const S n1 = a1.norm();
  const Vec3<S> c0 = a1 / n1;
  const Vec3<S> u = a2 - a2.dot(c0) * c0;
  const S nu = u.norm();
  const Vec3<S> c1 = u / nu;

  Vec3<S> g0 = dr.col(0);
  Vec3<S> g1 = dr.col(1);
  const Vec3<S> g2 = dr.col(2);

  // c2 = c0 x c1
  g0 += c1.cross(g2);
  g1 += g2.cross(c0);

  // c1 = u / |u|
  const Vec3<S> gu = (g1 - c1 * c1.dot(g1)) / nu;

  // u = a2 - (a2.c0) c0
  Vec3<S> ga2 = gu - c0 * c0.dot(gu);
  g0 += -(gu.dot(c0)) * a2 - a2.dot(c0) * gu;

  // c0 = a1 / |a1|
  const Vec3<S> ga1 = (g0 - c0 * c0.dot(g0)) / n1;

  Rot6<S> gv;
  gv.template head<3>() = ga1;
  gv.template tail<3>() = ga2;
  return gv;
}

template <typename S>
bool is_rotation(const Mat3<S>& r, S tol) {
  const Mat3<S> e = r.transpose() * r - Mat3<S>::Identity();
  return e.cwiseAbs().maxCoeff() < tol && std::abs(r.determinant() - S(1)) < tol;
}

/// Uniform random rotation from a normalized quaternion.
template <typename S = double>
Mat3<S> random_rotation(Rng& rng) {
  double q[4];
  double n2 = 0;
  do {
    n2 = 0;
    for (auto& x : q) {
      x = rng.normal();
      n2 += x * x;
    }
  } while (n2 < 1e-12);
  const double n = std::sqrt(n2);
  const double w = q[0] / n, x = q[1] / n, y = q[2] / n, z = q[3] / n;
  Mat3<S> r;
  r << S(1 - 2 * (y * y + z * z)), S(2 * (x * y - z * w)), S(2 * (x * z + y * w)),
      S(2 * (x * y + z * w)), S(1 - 2 * (x * x + z * z)), S(2 * (y * z - x * w)),
      S(2 * (x * z - y * w)), S(2 * (y * z + x * w)), S(1 - 2 * (x * x + y * y));
  return r;
}

/// Elementary rotations about the body axes (x lateral-left, y up, z forward).
template <typename S>
Mat3<S> rot_x(S a) {
  const S c = std::cos(a), s = std::sin(a);
  Mat3<S> r;
  r << 1, 0, 0, 0, c, -s, 0, s, c;
  return r;
}
template <typename S>
Mat3<S> rot_y(S a) {
  const S c = std::cos(a), s = std::sin(a);
  Mat3<S> r;
  r << c, 0, s, 0, 1, 0, -s, 0, c;
  return r;
}
template <typename S>
Mat3<S> rot_z(S a) {
  const S c = std::cos(a), s = std::sin(a);
  Mat3<S> r;
  r << c, -s, 0, s, c, 0, 0, 0, 1;
  return r;
}

/// Conjugation by diag(-1,1,1): the sagittal-plane mirror of a rotation.
template <typename S>
Mat3<S> mirror_x(const Mat3<S>& r) {
  Mat3<S> m = r;
  m(0, 1) = -r(0, 1);
  m(0, 2) = -r(0, 2);
  m(1, 0) = -r(1, 0);
  m(2, 0) = -r(2, 0);
  return m;
}

}  // namespace seampose
