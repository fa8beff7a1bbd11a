#include "quadsyn/skeleton.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <map>
#include <set>
#include <sstream>

#include "quadsyn/error.hpp"

namespace quadsyn {

const std::array<std::string_view, kKeypointCount>& Skeleton::keypoint_names() {
  static const std::array<std::string_view, kKeypointCount> names = {
      "nose",          "left_eye",       "right_eye",      "neck",
      "left_shoulder", "right_shoulder", "left_elbow",     "right_elbow",
      "left_front_paw", "right_front_paw", "left_hip",     "right_hip",
      "left_knee",     "right_knee",     "left_back_paw",  "right_back_paw",
      "tail_root"};
  return names;
}

int Skeleton::bone_index(std::string_view name) const {
  for (std::size_t i = 0; i < bones.size(); ++i) {
    if (bones[i].name == name) return static_cast<int>(i);
  }
  return -1;
}

bool Skeleton::is_prior_joint(int bone) const {
  return std::find(prior_joints.begin(), prior_joints.end(), bone) != prior_joints.end();
}

namespace {

void validate(const Skeleton& s) {
  if (s.bones.empty()) throw ValidationError("skeleton: bones array is empty");
  int roots = 0;
  for (std::size_t i = 0; i < s.bones.size(); ++i) {
    const Bone& b = s.bones[i];
    if (b.parent < 0) {
      ++roots;
      continue;
    }
    if (b.parent >= static_cast<int>(i)) {
      throw ValidationError("skeleton: bone '" + b.name +
                            "' violates topological order (parent index " +
                            std::to_string(b.parent) + " does not precede index " +
                            std::to_string(i) + ")");
    }
    if (!(b.rest_offset.norm() > 0.0)) {
      throw ValidationError("skeleton: bone '" + b.name + "' has zero-length rest_offset");
    }
  }
  if (roots != 1) {
    throw ValidationError("skeleton: expected exactly one root bone, found " +
                          std::to_string(roots));
  }
  for (int j : s.prior_joints) {
    if (j < 0 || j >= static_cast<int>(s.bones.size())) {
      throw ValidationError("skeleton: prior_joints references a missing bone");
    }
  }
  for (const KeypointBinding& kb : s.keypoints) {
    if (kb.bone < 0 || kb.bone >= static_cast<int>(s.bones.size())) {
      throw ValidationError("skeleton: keypoints reference a missing bone");
    }
  }
}

}  // namespace

Skeleton parse_skeleton(const nlohmann::json& doc) {
  Skeleton s;
  if (!doc.contains("bones") || !doc["bones"].is_array()) {
    throw ValidationError("skeleton: missing 'bones' array");
  }
  std::map<std::string, int> index_of;
  for (const auto& jb : doc["bones"]) {
    Bone b;
    b.name = jb.at("name").get<std::string>();
    if (index_of.count(b.name)) {
      throw ValidationError("skeleton: duplicate bone name '" + b.name + "'");
    }
    const auto& off = jb.at("offset");
    if (!off.is_array() || off.size() != 3) {
      throw ValidationError("skeleton: bone '" + b.name + "' offset must be [x, y, z]");
    }
    b.rest_offset = {off[0].get<double>(), off[1].get<double>(), off[2].get<double>()};
    if (jb.at("parent").is_null()) {
      b.parent = -1;
    } else {
      const std::string parent = jb["parent"].get<std::string>();
      auto it = index_of.find(parent);
      if (it == index_of.end()) {
        // Either a forward reference (topological-order violation) or a typo.
        bool later = false;
        for (const auto& other : doc["bones"]) {
          if (other.at("name").get<std::string>() == parent) later = true;
        }
        if (later) {
          throw ValidationError("skeleton: bone '" + b.name + "' violates topological order (parent '" +
                                parent + "' is listed after it)");
        }
        throw ValidationError("skeleton: bone '" + b.name + "' references unknown parent '" + parent + "'");
      }
      b.parent = it->second;
    }
    index_of[b.name] = static_cast<int>(s.bones.size());
    s.bones.push_back(std::move(b));
  }

  if (!doc.contains("prior_joints") || !doc["prior_joints"].is_array()) {
    throw ValidationError("skeleton: missing 'prior_joints' array");
  }
  if (doc["prior_joints"].size() != kPriorJointCount) {
    throw ValidationError("skeleton: prior_joints must list exactly 12 bones, found " +
                          std::to_string(doc["prior_joints"].size()));
  }
  for (std::size_t i = 0; i < kPriorJointCount; ++i) {
    const std::string name = doc["prior_joints"][i].get<std::string>();
    auto it = index_of.find(name);
    if (it == index_of.end()) {
      throw ValidationError("skeleton: prior_joints references unknown bone '" + name + "'");
    }
    s.prior_joints[i] = it->second;
  }

  if (!doc.contains("keypoints") || !doc["keypoints"].is_object()) {
    throw ValidationError("skeleton: missing 'keypoints' map");
  }
  const auto& names = Skeleton::keypoint_names();
  for (std::size_t k = 0; k < kKeypointCount; ++k) {
    const std::string key(names[k]);
    if (!doc["keypoints"].contains(key)) {
      throw ValidationError("skeleton: keypoints map is missing '" + key + "'");
    }
    const auto& jk = doc["keypoints"][key];
    KeypointBinding kb;
    const std::string bone = jk.at("bone").get<std::string>();
    auto it = index_of.find(bone);
    if (it == index_of.end()) {
      throw ValidationError("skeleton: keypoint '" + key + "' references unknown bone '" + bone + "'");
    }
    kb.bone = it->second;
    const std::string attach = jk.at("attach").get<std::string>();
    if (attach == "head") {
      kb.attach = Attach::head;
    } else if (attach == "tail") {
      kb.attach = Attach::tail;
    } else {
      throw ValidationError("skeleton: keypoint '" + key + "' attach must be \"head\" or \"tail\"");
    }
    s.keypoints[k] = kb;
  }
  if (doc["keypoints"].size() != kKeypointCount) {
    std::set<std::string> extra;
    for (auto it = doc["keypoints"].begin(); it != doc["keypoints"].end(); ++it) {
      extra.insert(it.key());
    }
    for (const auto& n : names) extra.erase(std::string(n));
    throw ValidationError("skeleton: keypoints map has unknown entries (e.g. '" + *extra.begin() + "')");
  }

  validate(s);
  return s;
}

Skeleton load_skeleton(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ValidationError("skeleton: cannot open '" + path.string() + "'");
  nlohmann::json doc;
  try {
    in >> doc;
  } catch (const nlohmann::json::exception& e) {
    throw ValidationError("skeleton: parse failure in '" + path.string() + "': " + e.what());
  }
  return parse_skeleton(doc);
}

nlohmann::json skeleton_to_json(const Skeleton& s) {
  nlohmann::json doc;
  doc["bones"] = nlohmann::json::array();
  for (const Bone& b : s.bones) {
    nlohmann::json jb;
    jb["name"] = b.name;
    jb["parent"] = b.parent < 0 ? nlohmann::json() : nlohmann::json(s.bones[b.parent].name);
    jb["offset"] = {b.rest_offset.x, b.rest_offset.y, b.rest_offset.z};
    doc["bones"].push_back(jb);
  }
  doc["prior_joints"] = nlohmann::json::array();
  for (int j : s.prior_joints) doc["prior_joints"].push_back(s.bones[j].name);
  doc["keypoints"] = nlohmann::json::object();
  const auto& names = Skeleton::keypoint_names();
  for (std::size_t k = 0; k < kKeypointCount; ++k) {
    doc["keypoints"][std::string(names[k])] = {
        {"bone", s.bones[s.keypoints[k].bone].name},
        {"attach", s.keypoints[k].attach == Attach::head ? "head" : "tail"}};
  }
  return doc;
}

void write_skeleton(const Skeleton& s, const std::filesystem::path& path) {
  std::ofstream out(path);
  if (!out) throw ValidationError("skeleton: cannot write '" + path.string() + "'");
  out << skeleton_to_json(s).dump(2) << "\n";
}

JointPositions forward_kinematics(const Skeleton& skeleton, const AngleVector& pose) {
  const std::size_t n = skeleton.bones.size();
  JointPositions out;
  out.head.resize(n);
  out.tail.resize(n);
  std::vector<Mat3> world_rot(n);

  // Angle triple index per bone, -1 for bones the prior does not control.
  std::vector<int> triple_of(n, -1);
  for (std::size_t j = 0; j < kPriorJointCount; ++j) {
    triple_of[skeleton.prior_joints[j]] = static_cast<int>(j);
  }

  for (std::size_t i = 0; i < n; ++i) {
    const Bone& b = skeleton.bones[i];
    const Mat3 parent_rot = b.parent < 0 ? Mat3::identity() : world_rot[b.parent];
    Mat3 local = Mat3::identity();
    if (triple_of[i] >= 0) {
      const std::size_t base = 3 * static_cast<std::size_t>(triple_of[i]);
      local = Mat3::euler_xyz(pose.values[base], pose.values[base + 1], pose.values[base + 2]);
    }
    world_rot[i] = parent_rot * local;
    out.head[i] = b.parent < 0 ? Vec3{} : out.tail[b.parent];
    out.tail[i] = out.head[i] + world_rot[i] * b.rest_offset;
  }
  return out;
}

Vec3 keypoint_position(const Skeleton& skeleton, const JointPositions& joints, std::size_t k) {
  const KeypointBinding& kb = skeleton.keypoints[k];
  return kb.attach == Attach::head ? joints.head[kb.bone] : joints.tail[kb.bone];
}

Projected project_point(const Camera& camera, const Vec3& p) {
  if (camera.focal_length <= 0.0 || camera.width <= 0 || camera.height <= 0) {
    throw ValidationError("camera: focal_length and image size must be positive");
  }
  const Vec3 forward = (camera.look_at - camera.position);
  if (!(forward.norm() > 0.0)) {
    throw ValidationError("camera: position equals look_at");
  }
  const Vec3 f = forward.normalized();
  Vec3 up{0.0, 0.0, 1.0};
  if (std::abs(f.dot(up)) > 0.999) up = {1.0, 0.0, 0.0};
  const Vec3 right = f.cross(up).normalized();
  const Vec3 down = f.cross(right).normalized();

  const Vec3 rel = p - camera.position;
  const double depth = rel.dot(f);
  if (!(depth > 1e-9)) {
    throw PipelineError("projection: point behind camera");
  }
  const double u = camera.width / 2.0 + camera.focal_length * rel.dot(right) / depth;
  const double v = camera.height / 2.0 + camera.focal_length * rel.dot(down) / depth;
  return {u, v, depth};
}

std::array<double, 4> keypoint_bbox(const std::array<Keypoint2D, kKeypointCount>& pts,
                                    double margin) {
  double minx = 0, miny = 0, maxx = 0, maxy = 0;
  bool any = false;
  for (const Keypoint2D& p : pts) {
    if (p.visibility <= 0) continue;
    if (!any) {
      minx = maxx = p.x;
      miny = maxy = p.y;
      any = true;
    } else {
      minx = std::min(minx, p.x);
      maxx = std::max(maxx, p.x);
      miny = std::min(miny, p.y);
      maxy = std::max(maxy, p.y);
    }
  }
  if (!any) return {0, 0, 0, 0};
  const double pad = margin * std::max(maxx - minx, maxy - miny);
  return {minx - pad, miny - pad, (maxx - minx) + 2 * pad, (maxy - miny) + 2 * pad};
}

Keypoints2D project_keypoints(const Skeleton& skeleton, const JointPositions& joints,
                              const Camera& camera, double bbox_margin) {
  Keypoints2D out;
  std::string behind;
  for (std::size_t k = 0; k < kKeypointCount; ++k) {
    const Vec3 p = keypoint_position(skeleton, joints, k);
    try {
      const Projected pr = project_point(camera, p);
      out.points[k] = {pr.x, pr.y, 2};
    } catch (const PipelineError&) {
      if (!behind.empty()) behind += ", ";
      behind += std::string(Skeleton::keypoint_names()[k]);
    }
  }
  if (!behind.empty()) {
    throw PipelineError("projection: keypoints behind camera: " + behind);
  }
  out.bbox = keypoint_bbox(out.points, bbox_margin);
  return out;
}

}  // namespace quadsyn
