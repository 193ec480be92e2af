#pragma once

#include <array>
#include <cmath>

#include "seampose/skeleton.hpp"

namespace seampose {

/// 8 pelvis-relative joint positions in meters, flattened [x,y,z] per joint
/// in OutJoint order.
template <typename S>
struct JointPositions {
  Eigen::Matrix<S, kJointDim, 1> p = Eigen::Matrix<S, kJointDim, 1>::Zero();

  Eigen::Ref<Vec3<S>> joint(OutJoint j) { return p.template segment<3>(3 * static_cast<int>(j)); }
  Eigen::Ref<const Vec3<S>> joint(OutJoint j) const {
    return p.template segment<3>(3 * static_cast<int>(j));
  }
};

/// Intermediates kept for the backward pass.
template <typename S>
struct FkCache {
  std::array<Mat3<S>, kNodes> world_rot;   // accumulated rotation per node
  std::array<Vec3<S>, kNodes> position;    // pelvis-relative position per node
  std::array<Mat3<S>, kNodes> local_rot;   // reconstructed local rotation (identity for pelvis/nose)
};

/// Accumulates rotations down the tree: a joint's rotation moves its subtree,
/// the pelvis stays pinned at the origin with identity orientation.
template <typename S>
JointPositions<S> forward_kinematics(const PoseVector<S>& pose, const Skeleton& skel,
                                     FkCache<S>* cache = nullptr) {
  std::array<Mat3<S>, kNodes> rot;
  std::array<Vec3<S>, kNodes> pos;
  rot[0] = Mat3<S>::Identity();
  pos[0] = Vec3<S>::Zero();
  for (int n = 1; n < kNodes; ++n) {
    const int parent = kNodeParent[n];
    const Vec3<S> offset = skel.scaled_offset(n).template cast<S>();
    pos[n] = pos[parent] + rot[parent] * offset;
    const int pj = kNodePoseJoint[n];
    if (pj >= 0) {
      const Mat3<S> local = matrix_from_rot6d<S>(pose.rot6(static_cast<PoseJoint>(pj)));
      rot[n] = rot[parent] * local;
      if (cache) cache->local_rot[n] = local;
    } else {
      rot[n] = rot[parent];
      if (cache) cache->local_rot[n] = Mat3<S>::Identity();
    }
  }
  JointPositions<S> out;
  for (int k = 0; k < kOutJoints; ++k)
    out.p.template segment<3>(3 * k) = pos[static_cast<int>(kOutNode[k])];
  if (cache) {
    cache->world_rot = rot;
    cache->position = pos;
  }
  return out;
}

/// Reverse accumulation over the tree: maps dL/d(positions) to dL/d(pose 6D).
template <typename S>
PoseVector<S> fk_backward(const PoseVector<S>& pose, const Skeleton& skel, const FkCache<S>& cache,
                          const Eigen::Matrix<S, kJointDim, 1>& dpos) {
  std::array<Vec3<S>, kNodes> gpos;
  std::array<Mat3<S>, kNodes> grot;
  for (auto& v : gpos) v.setZero();
  for (auto& m : grot) m.setZero();
  for (int k = 0; k < kOutJoints; ++k)
    gpos[static_cast<int>(kOutNode[k])] += dpos.template segment<3>(3 * k);

  PoseVector<S> gpose;
  for (int n = kNodes - 1; n >= 1; --n) {
    const int parent = kNodeParent[n];
    const Vec3<S> offset = skel.scaled_offset(n).template cast<S>();
    // position: pos[n] = pos[parent] + rot[parent] * offset
    gpos[parent] += gpos[n];
    grot[parent] += gpos[n] * offset.transpose();
    // rotation: rot[n] = rot[parent] * local
    const int pj = kNodePoseJoint[n];
    if (pj >= 0) {
      const Mat3<S> glocal = cache.world_rot[parent].transpose() * grot[n];
      grot[parent] += grot[n] * cache.local_rot[n].transpose();
      gpose.rot6(static_cast<PoseJoint>(pj)) =
          matrix_from_rot6d_backward<S>(pose.rot6(static_cast<PoseJoint>(pj)), glocal);
    } else {
      grot[parent] += grot[n];
    }
  }
  return gpose;
}

/// Mean per joint position error in centimeters.
template <typename S>
double mpjpe(const JointPositions<S>& pred, const JointPositions<S>& truth) {
  double sum = 0;
  for (int k = 0; k < kOutJoints; ++k)
    sum += (pred.p.template segment<3>(3 * k) - truth.p.template segment<3>(3 * k))
               .template cast<double>()
               .norm();
  return sum / kOutJoints * 100.0;
}

}  // namespace seampose
