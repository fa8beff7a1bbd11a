#include "quadsyn/skeleton.hpp"

namespace quadsyn {

// Horse-proportioned default armature, meters. The pelvis is a zero-length
// root joint at the hip center; chest-level structure branches from the torso
// tail, rear legs from the pelvis. Leg chains are upper -> lower -> cannon
// with the paw at the cannon tail; those 12 bones are the prior joints.
static const char kDefaultSkeletonJson[] = R"json({
  "bones": [
    {"name": "pelvis",     "parent": null,       "offset": [0.0, 0.0, 0.0]},
    {"name": "torso",      "parent": "pelvis",   "offset": [1.1, 0.0, 0.0]},
    {"name": "neck",       "parent": "torso",    "offset": [0.30, 0.0, 0.28]},
    {"name": "head",       "parent": "neck",     "offset": [0.32, 0.0, 0.02]},
    {"name": "eye_l",      "parent": "head",     "offset": [-0.12, 0.06, 0.10]},
    {"name": "eye_r",      "parent": "head",     "offset": [-0.12, -0.06, 0.10]},
    {"name": "shoulder_l", "parent": "torso",    "offset": [0.05, 0.17, -0.12]},
    {"name": "upper_fl",   "parent": "shoulder_l", "offset": [0.0, 0.0, -0.35]},
    {"name": "lower_fl",   "parent": "upper_fl", "offset": [0.0, 0.0, -0.33]},
    {"name": "cannon_fl",  "parent": "lower_fl", "offset": [0.0, 0.0, -0.32]},
    {"name": "shoulder_r", "parent": "torso",    "offset": [0.05, -0.17, -0.12]},
    {"name": "upper_fr",   "parent": "shoulder_r", "offset": [0.0, 0.0, -0.35]},
    {"name": "lower_fr",   "parent": "upper_fr", "offset": [0.0, 0.0, -0.33]},
    {"name": "cannon_fr",  "parent": "lower_fr", "offset": [0.0, 0.0, -0.32]},
    {"name": "hip_l",      "parent": "pelvis",   "offset": [0.02, 0.16, -0.10]},
    {"name": "upper_hl",   "parent": "hip_l",    "offset": [0.0, 0.0, -0.38]},
    {"name": "lower_hl",   "parent": "upper_hl", "offset": [0.0, 0.0, -0.33]},
    {"name": "cannon_hl",  "parent": "lower_hl", "offset": [0.0, 0.0, -0.30]},
    {"name": "hip_r",      "parent": "pelvis",   "offset": [0.02, -0.16, -0.10]},
    {"name": "upper_hr",   "parent": "hip_r",    "offset": [0.0, 0.0, -0.38]},
    {"name": "lower_hr",   "parent": "upper_hr", "offset": [0.0, 0.0, -0.33]},
    {"name": "cannon_hr",  "parent": "lower_hr", "offset": [0.0, 0.0, -0.30]}
  ],
  "prior_joints": [
    "upper_fl", "lower_fl", "cannon_fl",
    "upper_fr", "lower_fr", "cannon_fr",
    "upper_hl", "lower_hl", "cannon_hl",
    "upper_hr", "lower_hr", "cannon_hr"
  ],
  "keypoints": {
    "nose":            {"bone": "head",      "attach": "tail"},
    "left_eye":        {"bone": "eye_l",     "attach": "tail"},
    "right_eye":       {"bone": "eye_r",     "attach": "tail"},
    "neck":            {"bone": "neck",      "attach": "tail"},
    "left_shoulder":   {"bone": "upper_fl",  "attach": "head"},
    "right_shoulder":  {"bone": "upper_fr",  "attach": "head"},
    "left_elbow":      {"bone": "upper_fl",  "attach": "tail"},
    "right_elbow":     {"bone": "upper_fr",  "attach": "tail"},
    "left_front_paw":  {"bone": "cannon_fl", "attach": "tail"},
    "right_front_paw": {"bone": "cannon_fr", "attach": "tail"},
    "left_hip":        {"bone": "upper_hl",  "attach": "head"},
    "right_hip":       {"bone": "upper_hr",  "attach": "head"},
    "left_knee":       {"bone": "upper_hl",  "attach": "tail"},
    "right_knee":      {"bone": "upper_hr",  "attach": "tail"},
    "left_back_paw":   {"bone": "cannon_hl", "attach": "tail"},
    "right_back_paw":  {"bone": "cannon_hr", "attach": "tail"},
    "tail_root":       {"bone": "pelvis",    "attach": "tail"}
  }
})json";

const Skeleton& default_skeleton() {
  static const Skeleton s = parse_skeleton(nlohmann::json::parse(kDefaultSkeletonJson));
  return s;
}

const char* default_skeleton_json() { return kDefaultSkeletonJson; }

}  // namespace quadsyn
