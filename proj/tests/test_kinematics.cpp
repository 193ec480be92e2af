#include <catch2/catch.hpp>

#include <filesystem>

#include "seampose/kinematics.hpp"
#include "seampose/motion.hpp"

using namespace seampose;

namespace {

PoseVector<double> identity_pose() {
  PoseVector<double> p;
  const Rot6<double> id = rot6d_from_matrix<double>(Mat3<double>::Identity());
  for (int j = 0; j < kPoseJoints; ++j) p.rot6(static_cast<PoseJoint>(j)) = id;
  return p;
}

// Independent oracle: walk up the parent chain summing offsets (valid for the
// identity pose only).
Eigen::Vector3d chain_sum(const Skeleton& skel, Node node) {
  Eigen::Vector3d p = Eigen::Vector3d::Zero();
  int n = static_cast<int>(node);
  while (n > 0) {
    p += skel.scaled_offset(n);
    n = kNodeParent[n];
  }
  return p;
}

}  // namespace

TEST_CASE("identity pose positions equal cumulative template offsets") {
  const Skeleton skel = Skeleton::with_arm_length(0.51);  // template scale 1
  const JointPositions<double> jp = forward_kinematics(identity_pose(), skel);
  for (int k = 0; k < kOutJoints; ++k) {
    const Eigen::Vector3d expect = chain_sum(skel, kOutNode[k]);
    REQUIRE((jp.p.segment<3>(3 * k) - expect).cwiseAbs().maxCoeff() < 1e-15);
  }
}

TEST_CASE("doubling arm length doubles shoulder-to-wrist distance") {
  const PoseVector<double> pose = identity_pose();
  const JointPositions<double> a = forward_kinematics(pose, Skeleton::with_arm_length(0.3));
  const JointPositions<double> b = forward_kinematics(pose, Skeleton::with_arm_length(0.6));
  const double da = (a.joint(OutJoint::WristL) - a.joint(OutJoint::ShoulderL)).norm();
  const double db = (b.joint(OutJoint::WristL) - b.joint(OutJoint::ShoulderL)).norm();
  REQUIRE(db == Approx(2 * da).epsilon(1e-12));
  REQUIRE(da == Approx(0.3).epsilon(1e-12));
}

TEST_CASE("single 90-degree elbow flexion matches analytic rotation of the forearm") {
  const Skeleton skel = Skeleton::with_arm_length(0.51);
  PoseVector<double> pose = identity_pose();
  const Mat3<double> flex = rot_z(kPi / 2);
  pose.rot6(PoseJoint::ElbowL) = rot6d_from_matrix(flex);
  const JointPositions<double> jp = forward_kinematics(pose, skel);

  // Oracle: elbow position from the straight chain, forearm offset rotated.
  const Eigen::Vector3d elbow = chain_sum(skel, Node::ElbowL);
  const Eigen::Vector3d wrist =
      elbow + flex * skel.scaled_offset(static_cast<int>(Node::WristL));
  REQUIRE((jp.joint(OutJoint::ElbowL) - elbow).cwiseAbs().maxCoeff() < 1e-14);
  REQUIRE((jp.joint(OutJoint::WristL) - wrist).cwiseAbs().maxCoeff() < 1e-14);
}

TEST_CASE("root never moves and positions stay bounded") {
  Rng rng(321);
  const Skeleton skel = Skeleton::with_arm_length(0.67);
  for (int trial = 0; trial < 30; ++trial) {
    PoseVector<double> pose;
    for (int j = 0; j < kPoseJoints; ++j)
      pose.rot6(static_cast<PoseJoint>(j)) = rot6d_from_matrix(random_rotation(rng));
    FkCache<double> cache;
    const JointPositions<double> jp = forward_kinematics(pose, skel, &cache);
    REQUIRE(cache.position[0].norm() == 0.0);
    for (int k = 0; k < kOutJoints; ++k) REQUIRE(jp.p.segment<3>(3 * k).norm() < 1.5);
  }
}

TEST_CASE("fk backward matches finite differences") {
  Rng rng(777);
  const Skeleton skel = Skeleton::with_arm_length(0.57);
  PoseVector<double> pose;
  for (int j = 0; j < kPoseJoints; ++j)
    pose.rot6(static_cast<PoseJoint>(j)) = rot6d_from_matrix(random_rotation(rng));
  Eigen::Matrix<double, kJointDim, 1> gout;
  for (int k = 0; k < kJointDim; ++k) gout(k) = rng.uniform(-1.0, 1.0);

  FkCache<double> cache;
  forward_kinematics(pose, skel, &cache);
  const PoseVector<double> grad = fk_backward(pose, skel, cache, gout);

  const double h = 1e-6;
  for (int k = 0; k < kPoseDim; k += 7) {  // sample of coordinates
    PoseVector<double> pp = pose, pm = pose;
    pp.v(k) += h;
    pm.v(k) -= h;
    const double fp = forward_kinematics(pp, skel).p.dot(gout);
    const double fm = forward_kinematics(pm, skel).p.dot(gout);
    REQUIRE(grad.v(k) == Approx((fp - fm) / (2 * h)).margin(1e-6).epsilon(1e-5));
  }
}

TEST_CASE("mpjpe examples and naive oracle") {
  Rng rng(12);
  JointPositions<double> a, b;
  for (int k = 0; k < kJointDim; ++k) a.p(k) = rng.uniform(-1.0, 1.0);
  b = a;
  REQUIRE(mpjpe(a, b) == 0.0);

  for (int k = 0; k < kOutJoints; ++k) b.p(3 * k) += 0.03;
  REQUIRE(mpjpe(a, b) == Approx(3.0).epsilon(1e-12));

  for (int k = 0; k < kJointDim; ++k) b.p(k) = rng.uniform(-1.0, 1.0);
  double oracle = 0;
  for (int j = 0; j < kOutJoints; ++j) {
    double d2 = 0;
    for (int c = 0; c < 3; ++c) d2 += (a.p(3 * j + c) - b.p(3 * j + c)) * (a.p(3 * j + c) - b.p(3 * j + c));
    oracle += std::sqrt(d2);
  }
  oracle = oracle / kOutJoints * 100.0;
  REQUIRE(mpjpe(a, b) == Approx(oracle).margin(1e-10));

  // Symmetry, non-negativity, translation invariance.
  REQUIRE(mpjpe(a, b) == mpjpe(b, a));
  REQUIRE(mpjpe(a, b) > 0.0);
  JointPositions<double> at = a, bt = b;
  for (int j = 0; j < kOutJoints; ++j) {
    at.p.segment<3>(3 * j) += Eigen::Vector3d(0.4, -0.2, 0.9);
    bt.p.segment<3>(3 * j) += Eigen::Vector3d(0.4, -0.2, 0.9);
  }
  REQUIRE(mpjpe(at, bt) == Approx(mpjpe(a, b)).epsilon(1e-12));
}

TEST_CASE("skeleton json round trip") {
  const Skeleton s = Skeleton::with_arm_length(0.6123);
  const auto dir = std::filesystem::temp_directory_path() / "seampose_skel_test";
  std::filesystem::create_directories(dir);
  const std::string path = (dir / "skel.json").string();
  s.save(path);
  const Skeleton back = Skeleton::load(path);
  REQUIRE(back.arm_length == s.arm_length);
  for (int n = 0; n < kNodes; ++n)
    REQUIRE((back.template_offset[n] - s.template_offset[n]).cwiseAbs().maxCoeff() == 0.0);

  // arm invariant: scaled upper-arm + forearm magnitudes sum to arm_length
  const double sum = s.scaled_offset(static_cast<int>(Node::ElbowL)).norm() +
                     s.scaled_offset(static_cast<int>(Node::WristL)).norm();
  REQUIRE(sum == Approx(s.arm_length).epsilon(1e-12));
}

TEST_CASE("mirrored pose yields mirrored positions") {
  Rng rng(404);
  const Skeleton skel = Skeleton::with_arm_length(0.58);
  for (int trial = 0; trial < 10; ++trial) {
    PoseVector<double> pose;
    for (int j = 0; j < kPoseJoints; ++j)
      pose.rot6(static_cast<PoseJoint>(j)) = rot6d_from_matrix(random_rotation(rng));
    const JointPositions<double> jp = forward_kinematics(pose, skel);
    const JointPositions<double> jm = forward_kinematics(mirror_pose(pose), skel);
    auto flip = [](Eigen::Vector3d v) {
      v.x() = -v.x();
      return v;
    };
    REQUIRE((jm.joint(OutJoint::ShoulderL) - flip(jp.joint(OutJoint::ShoulderR))).norm() < 1e-12);
    REQUIRE((jm.joint(OutJoint::WristL) - flip(jp.joint(OutJoint::WristR))).norm() < 1e-12);
    REQUIRE((jm.joint(OutJoint::ElbowR) - flip(jp.joint(OutJoint::ElbowL))).norm() < 1e-12);
    REQUIRE((jm.joint(OutJoint::Neck) - flip(jp.joint(OutJoint::Neck))).norm() < 1e-12);
  }
}
