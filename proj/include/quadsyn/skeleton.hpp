#pragma once

#include <array>
#include <cstddef>
#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

#include "quadsyn/geometry.hpp"

#include <json.hpp>

namespace quadsyn {

inline constexpr std::size_t kKeypointCount = 17;
inline constexpr std::size_t kPriorJointCount = 12;
inline constexpr std::size_t kAngleCount = 3 * kPriorJointCount;

// 36 joint angles in radians: one intrinsic XYZ rotation triple per prior
// joint, in skeleton prior-joint order.
struct AngleVector {
  std::array<double, kAngleCount> values{};

  bool in_domain() const {
    for (double v : values) {
      if (!(v >= -kPi && v <= kPi)) return false;
    }
    return true;
  }

  // Clamps components into [-pi, pi]. Applied at dataset boundaries only,
  // never inside the training loss.
  void clamp_to_domain() {
    for (double& v : values) {
      if (v < -kPi) v = -kPi;
      if (v > kPi) v = kPi;
    }
  }

  bool operator==(const AngleVector& o) const = default;
};

enum class Attach { head, tail };

struct Bone {
  std::string name;
  int parent = -1;       // index into bones; -1 for the root
  Vec3 rest_offset;      // head -> tail in the parent frame, meters
};

struct KeypointBinding {
  int bone = -1;
  Attach attach = Attach::tail;
};

// Quadruped kinematic model: a topologically ordered bone tree, the 12 joints
// the pose prior controls (3 per leg), and the mapping from the 17 canonical
// keypoint names to bone endpoints. Immutable after construction.
struct Skeleton {
  std::vector<Bone> bones;
  std::array<int, kPriorJointCount> prior_joints{};
  std::array<KeypointBinding, kKeypointCount> keypoints{};

  static const std::array<std::string_view, kKeypointCount>& keypoint_names();

  int bone_index(std::string_view name) const;  // -1 if absent
  double bone_length(std::size_t i) const { return bones[i].rest_offset.norm(); }
  bool is_prior_joint(int bone) const;
};

// Throws ValidationError naming the offending field on any invariant violation.
Skeleton parse_skeleton(const nlohmann::json& doc);
Skeleton load_skeleton(const std::filesystem::path& path);
nlohmann::json skeleton_to_json(const Skeleton& s);
void write_skeleton(const Skeleton& s, const std::filesystem::path& path);

// The bundled horse-proportioned quadruped, compiled into the library.
const Skeleton& default_skeleton();
const char* default_skeleton_json();

// World-space bone segments, indexed like Skeleton::bones.
struct JointPositions {
  std::vector<Vec3> head;
  std::vector<Vec3> tail;
};

// Composes per-bone transforms down the tree: the root sits at the origin in
// rest orientation, prior joints apply the rotation decoded from their angle
// triple, all other bones keep rest orientation. Bone lengths are preserved
// exactly (rotations are orthonormal).
JointPositions forward_kinematics(const Skeleton& skeleton, const AngleVector& pose);

Vec3 keypoint_position(const Skeleton& skeleton, const JointPositions& joints, std::size_t k);

struct Camera {
  Vec3 position;
  Vec3 look_at;
  double focal_length = 300.0;  // pixels
  int width = 256;
  int height = 256;
};

struct Keypoint2D {
  double x = 0.0;
  double y = 0.0;
  int visibility = 0;  // 0 absent, 1 labeled occluded, 2 labeled visible
};

struct Keypoints2D {
  std::array<Keypoint2D, kKeypointCount> points{};
  std::array<double, 4> bbox{};  // x, y, w, h
};

// Pinhole projection of a world point. Returns pixel (x, y) and the camera-space
// depth. Throws ValidationError for a degenerate camera, PipelineError when the
// point is not strictly in front of the camera.
struct Projected {
  double x, y, depth;
};
Projected project_point(const Camera& camera, const Vec3& p);

// Projects all mapped keypoints; visibility 2 everywhere (the all-visible
// fallback used when projecting without a render). The renderer provides the
// occlusion-aware variant. bbox pads each side by margin * max projected extent.
Keypoints2D project_keypoints(const Skeleton& skeleton, const JointPositions& joints,
                              const Camera& camera, double bbox_margin = 0.05);

// Tight bbox over points with visibility > 0, padded by margin * max extent.
std::array<double, 4> keypoint_bbox(const std::array<Keypoint2D, kKeypointCount>& pts,
                                    double margin);

}  // namespace quadsyn
