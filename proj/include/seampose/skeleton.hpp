#pragma once

#include <array>
#include <fstream>
#include <string>

#include <nlohmann/json.hpp>

#include "seampose/errors.hpp"
#include "seampose/rotation.hpp"

namespace seampose {

/// Nodes of the upper-body chain, topologically ordered (parents precede
/// children). Pelvis is the fixed root; Nose carries no rotation of its own.
enum class Node : int {
  Pelvis = 0,
  Spine1,
  Spine2,
  Spine3,
  Neck,
  Head,
  Nose,
  CollarL,
  ShoulderL,
  ElbowL,
  WristL,
  CollarR,
  ShoulderR,
  ElbowR,
  WristR,
};
inline constexpr int kNodes = 15;

inline constexpr std::array<int, kNodes> kNodeParent = {
    -1,                                            // Pelvis
    0,  1, 2,                                      // Spine1..3
    3,  4, 5,                                      // Neck, Head, Nose
    3,  7, 8, 9,                                   // CollarL..WristL
    3,  11, 12, 13,                                // CollarR..WristR
};

inline const char* node_name(Node n) {
  static const char* names[kNodes] = {"pelvis",  "spine1", "spine2",    "spine3", "neck",
                                      "head",    "nose",   "collarL",   "shoulderL", "elbowL",
                                      "wristL",  "collarR", "shoulderR", "elbowR", "wristR"};
  return names[static_cast<int>(n)];
}

/// Pose-joint index carried by a node, or -1 (Pelvis, Nose).
inline constexpr std::array<int, kNodes> kNodePoseJoint = {
    -1,
    static_cast<int>(PoseJoint::Spine1),
    static_cast<int>(PoseJoint::Spine2),
    static_cast<int>(PoseJoint::Spine3),
    static_cast<int>(PoseJoint::Neck),
    static_cast<int>(PoseJoint::Head),
    -1,
    static_cast<int>(PoseJoint::CollarL),
    static_cast<int>(PoseJoint::ShoulderL),
    static_cast<int>(PoseJoint::ElbowL),
    static_cast<int>(PoseJoint::WristL),
    static_cast<int>(PoseJoint::CollarR),
    static_cast<int>(PoseJoint::ShoulderR),
    static_cast<int>(PoseJoint::ElbowR),
    static_cast<int>(PoseJoint::WristR),
};

/// Reported node per output slot.
inline constexpr std::array<Node, kOutJoints> kOutNode = {
    Node::Nose,   Node::Neck,   Node::ShoulderR, Node::ElbowR,
    Node::WristR, Node::ShoulderL, Node::ElbowL, Node::WristL,
};

/// Kinematic tree with template bone offsets, scaled per subject so that
/// shoulder-to-wrist distance equals the measured arm length. Only the two
/// arm-bone offsets scale; torso proportions stay at the template.
struct Skeleton {
  double arm_length = 0.57;  // meters
  std::array<Eigen::Vector3d, kNodes> template_offset;

  Skeleton() {
    for (auto& o : template_offset) o.setZero();
  }

  static Skeleton with_arm_length(double arm_length_m) {
    Skeleton s;
    s.arm_length = arm_length_m;
    auto& o = s.template_offset;
    o[static_cast<int>(Node::Pelvis)] = {0, 0, 0};
    o[static_cast<int>(Node::Spine1)] = {0, 0.10, 0};
    o[static_cast<int>(Node::Spine2)] = {0, 0.10, 0};
    o[static_cast<int>(Node::Spine3)] = {0, 0.10, 0};
    o[static_cast<int>(Node::Neck)] = {0, 0.10, 0};
    o[static_cast<int>(Node::Head)] = {0, 0.06, 0};
    o[static_cast<int>(Node::Nose)] = {0, 0.03, 0.09};
    o[static_cast<int>(Node::CollarL)] = {0.04, 0.08, 0};
    o[static_cast<int>(Node::ShoulderL)] = {0.17, 0, 0};
    o[static_cast<int>(Node::ElbowL)] = {0.26, 0, 0};
    o[static_cast<int>(Node::WristL)] = {0.25, 0, 0};
    for (int n = static_cast<int>(Node::CollarR); n < kNodes; ++n) {
      const Eigen::Vector3d& left = o[n - 4];
      o[n] = {-left.x(), left.y(), left.z()};
    }
    s.validate();
    return s;
  }

  double template_arm_span() const {
    return template_offset[static_cast<int>(Node::ElbowL)].norm() +
           template_offset[static_cast<int>(Node::WristL)].norm();
  }

  /// Offset of `node` from its parent after per-subject arm scaling.
  Eigen::Vector3d scaled_offset(int node) const {
    Eigen::Vector3d o = template_offset[node];
    const Node n = static_cast<Node>(node);
    if (n == Node::ElbowL || n == Node::WristL || n == Node::ElbowR || n == Node::WristR)
      o *= arm_length / template_arm_span();
    return o;
  }

  void validate() const {
    if (!(arm_length > 0)) throw ConfigError("skeleton: arm_length must be positive");
    for (const auto& o : template_offset)
      if (!o.allFinite()) throw ConfigError("skeleton: non-finite template offset");
    if (!(template_arm_span() > 0)) throw ConfigError("skeleton: degenerate arm chain");
  }

  nlohmann::json to_json() const {
    nlohmann::json edges = nlohmann::json::array();
    for (int n = 1; n < kNodes; ++n) {
      const auto& o = template_offset[n];
      edges.push_back({{"from", node_name(static_cast<Node>(kNodeParent[n]))},
                       {"to", node_name(static_cast<Node>(n))},
                       {"offset_m", {o.x(), o.y(), o.z()}}});
    }
    return {{"arm_length_m", arm_length}, {"edges", edges}};
  }

  static Skeleton from_json(const nlohmann::json& j) {
    Skeleton s;
    s.arm_length = j.at("arm_length_m").get<double>();
    std::array<bool, kNodes> seen{};
    seen[0] = true;
    for (const auto& e : j.at("edges")) {
      const int to = node_index(e.at("to").get<std::string>());
      const int from = node_index(e.at("from").get<std::string>());
      if (to <= 0 || from < 0 || kNodeParent[to] != from)
        throw DataError("skeleton: edge does not match the upper-body tree");
      if (seen[to]) throw DataError("skeleton: duplicate edge");
      seen[to] = true;
      const auto& o = e.at("offset_m");
      s.template_offset[to] = {o.at(0).get<double>(), o.at(1).get<double>(),
                               o.at(2).get<double>()};
    }
    for (bool b : seen)
      if (!b) throw DataError("skeleton: tree not connected");
    s.validate();
    return s;
  }

  void save(const std::string& path) const {
    std::ofstream f(path);
    if (!f) throw DataError("skeleton: cannot write " + path);
    f << to_json().dump(2) << "\n";
  }

  static Skeleton load(const std::string& path) {
    std::ifstream f(path);
    if (!f) throw DataError("skeleton: cannot read " + path);
    nlohmann::json j;
    f >> j;
    return from_json(j);
  }

 private:
  static int node_index(const std::string& name) {
    for (int n = 0; n < kNodes; ++n)
      if (name == node_name(static_cast<Node>(n))) return n;
    return -1;
  }
};

}  // namespace seampose
