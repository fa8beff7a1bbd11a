#include "quadsyn/render.hpp"

#include <algorithm>
#include <cmath>
#include <string>
#include <vector>

#include "quadsyn/error.hpp"
#include "quadsyn/rng.hpp"

namespace quadsyn {

namespace {

bool interval_ok(const Interval& iv) {
  return std::isfinite(iv.lo) && std::isfinite(iv.hi) && iv.lo <= iv.hi;
}

struct Rgb {
  std::uint8_t r, g, b;
};

constexpr Rgb kBodyColor{152, 120, 88};
constexpr Rgb kLegColor{132, 102, 76};
constexpr Rgb kStripeLight{235, 233, 228};
constexpr Rgb kStripeDark{42, 40, 38};

bool starts_with(std::string_view s, std::string_view prefix) {
  return s.substr(0, prefix.size()) == prefix;
}

}  // namespace

double bone_radius(std::string_view name) {
  if (name == "pelvis" || starts_with(name, "eye")) return 0.0;
  if (name == "torso") return 0.21;
  if (name == "neck") return 0.09;
  if (name == "head") return 0.085;
  if (starts_with(name, "shoulder") || starts_with(name, "hip")) return 0.07;
  if (starts_with(name, "upper")) return 0.055;
  if (starts_with(name, "lower")) return 0.045;
  if (starts_with(name, "cannon")) return 0.035;
  return 0.05;
}

void RenderConfig::validate() const {
  if (!interval_ok(azimuth) || !interval_ok(elevation) || !interval_ok(distance) ||
      !interval_ok(brightness)) {
    throw ValidationError("render config: every interval must be finite with lo <= hi");
  }
  if (!(brightness.lo > 0.0 && brightness.hi <= 4.0)) {
    throw ValidationError("render config: brightness interval must lie within (0, 4]");
  }
  if (!(distance.lo > 0.0)) throw ValidationError("render config: distance must be positive");
  if (width <= 0 || height <= 0) throw ValidationError("render config: image size must be positive");
  if (!(focal_length > 0.0)) throw ValidationError("render config: focal_length must be positive");
  if (!(stripe_period > 0.0)) throw ValidationError("render config: stripe_period must be positive");
  if (!(bbox_margin >= 0.0)) throw ValidationError("render config: bbox_margin must be >= 0");
}

CameraLightDraw randomize_camera_light(const RenderConfig& config, std::uint64_t draw_index) {
  config.validate();
  Rng rng = substream(config.rng_seed, draw_index);
  const double az = rng.uniform(config.azimuth.lo, config.azimuth.hi);
  const double el = rng.uniform(config.elevation.lo, config.elevation.hi);
  const double dist = rng.uniform(config.distance.lo, config.distance.hi);
  const double bright = rng.uniform(config.brightness.lo, config.brightness.hi);

  CameraLightDraw out;
  out.camera.position = config.orbit_target +
                        Vec3{dist * std::cos(el) * std::cos(az),
                             dist * std::cos(el) * std::sin(az),
                             dist * std::sin(el)};
  out.camera.look_at = config.orbit_target;
  out.camera.focal_length = config.focal_length;
  out.camera.width = config.width;
  out.camera.height = config.height;
  out.brightness = bright;
  return out;
}

namespace {

struct DrawShape {
  int bone = -1;
  bool ellipse = false;
  double x0, y0, z0;  // projected head
  double x1, y1, z1;  // projected tail
  double radius_px;
  double world_length;
  double mid_depth;
};

Rgb shade(const RenderConfig& config, const Skeleton& skeleton, int bone, double t_world) {
  if (config.stripes) {
    const long band = static_cast<long>(std::floor(t_world / config.stripe_period));
    return (band % 2 == 0) ? kStripeLight : kStripeDark;
  }
  const std::string_view name = skeleton.bones[bone].name;
  if (starts_with(name, "upper") || starts_with(name, "lower") || starts_with(name, "cannon")) {
    return kLegColor;
  }
  return kBodyColor;
}

std::uint8_t apply_brightness(std::uint8_t c, double brightness) {
  const double v = std::floor(static_cast<double>(c) * brightness + 0.5);
  return static_cast<std::uint8_t>(std::clamp(v, 0.0, 255.0));
}

}  // namespace

RenderResult render_pose(const Skeleton& skeleton, const AngleVector& pose, const Camera& camera,
                         const RenderConfig& config, double brightness, int shift_x, int shift_y) {
  config.validate();
  if (!(brightness > 0.0 && brightness <= 4.0)) {
    throw ValidationError("render: brightness must lie within (0, 4]");
  }
  const JointPositions joints = forward_kinematics(skeleton, pose);

  // Fail early (and with keypoint names) if any mapped keypoint sits behind the camera.
  (void)project_keypoints(skeleton, joints, camera, config.bbox_margin);

  std::vector<DrawShape> shapes;
  for (std::size_t b = 0; b < skeleton.bones.size(); ++b) {
    const double r_world = bone_radius(skeleton.bones[b].name);
    if (r_world <= 0.0) continue;
    const Projected p0 = project_point(camera, joints.head[b]);
    const Projected p1 = project_point(camera, joints.tail[b]);
    DrawShape s;
    s.bone = static_cast<int>(b);
    s.ellipse = skeleton.bones[b].name == "torso";
    s.x0 = p0.x + shift_x;
    s.y0 = p0.y + shift_y;
    s.z0 = p0.depth;
    s.x1 = p1.x + shift_x;
    s.y1 = p1.y + shift_y;
    s.z1 = p1.depth;
    s.mid_depth = 0.5 * (p0.depth + p1.depth);
    s.radius_px = std::max(1.0, camera.focal_length * r_world / s.mid_depth);
    s.world_length = skeleton.bone_length(b);
    shapes.push_back(s);
  }

  // Painter's order: far shapes first, nearer midpoints overwrite.
  std::stable_sort(shapes.begin(), shapes.end(),
                   [](const DrawShape& a, const DrawShape& b) { return a.mid_depth > b.mid_depth; });

  RenderResult out;
  out.image = RasterImage(camera.width, camera.height);
  out.mask = AnimalMask(camera.width, camera.height);

  for (const DrawShape& s : shapes) {
    const double dx = s.x1 - s.x0;
    const double dy = s.y1 - s.y0;
    const double len2 = dx * dx + dy * dy;
    const double seg_len = std::sqrt(len2);

    double margin = s.radius_px + 1.0;
    double semi_major = 0.0, semi_minor = 0.0, cx = 0.0, cy = 0.0, ux = 1.0, uy = 0.0;
    if (s.ellipse) {
      cx = 0.5 * (s.x0 + s.x1);
      cy = 0.5 * (s.y0 + s.y1);
      semi_major = 0.5 * seg_len + s.radius_px;
      semi_minor = s.radius_px * 1.15;
      if (seg_len > 0.0) {
        ux = dx / seg_len;
        uy = dy / seg_len;
      }
      margin = semi_major + 1.0;
    }

    const int min_x = std::max(0, static_cast<int>(std::floor(std::min(s.x0, s.x1) - margin)));
    const int max_x = std::min(camera.width - 1, static_cast<int>(std::ceil(std::max(s.x0, s.x1) + margin)));
    const int min_y = std::max(0, static_cast<int>(std::floor(std::min(s.y0, s.y1) - margin)));
    const int max_y = std::min(camera.height - 1, static_cast<int>(std::ceil(std::max(s.y0, s.y1) + margin)));

    for (int y = min_y; y <= max_y; ++y) {
      for (int x = min_x; x <= max_x; ++x) {
        const double px = x + 0.5;
        const double py = y + 0.5;
        double t;  // normalized parameter along the segment, 0 at head
        bool inside;
        if (s.ellipse) {
          const double rx = px - cx;
          const double ry = py - cy;
          const double along = rx * ux + ry * uy;
          const double across = -rx * uy + ry * ux;
          inside = (along * along) / (semi_major * semi_major) +
                       (across * across) / (semi_minor * semi_minor) <=
                   1.0;
          t = seg_len > 0.0 ? std::clamp((along + 0.5 * seg_len) / seg_len, 0.0, 1.0) : 0.0;
        } else {
          const double rx = px - s.x0;
          const double ry = py - s.y0;
          t = len2 > 0.0 ? std::clamp((rx * dx + ry * dy) / len2, 0.0, 1.0) : 0.0;
          const double qx = rx - t * dx;
          const double qy = ry - t * dy;
          inside = qx * qx + qy * qy <= s.radius_px * s.radius_px;
        }
        if (!inside) continue;

        const double depth = s.z0 + t * (s.z1 - s.z0);
        const Rgb c = shade(config, skeleton, s.bone, t * s.world_length);
        std::uint8_t* px_out = out.image.at(x, y);
        px_out[0] = apply_brightness(c.r, brightness);
        px_out[1] = apply_brightness(c.g, brightness);
        px_out[2] = apply_brightness(c.b, brightness);
        px_out[3] = 0xff;
        const std::size_t mi = out.mask.idx(x, y);
        out.mask.mask[mi] = 1;
        out.mask.depth[mi] = static_cast<float>(depth);
      }
    }
  }

  if (out.mask.coverage() == 0) {
    throw PipelineError("render: animal is fully outside the frame");
  }
  return out;
}

Keypoints2D annotate_keypoints(const Skeleton& skeleton, const JointPositions& joints,
                               const Camera& camera, const AnimalMask& mask,
                               double bbox_margin) {
  Keypoints2D out;
  for (std::size_t k = 0; k < kKeypointCount; ++k) {
    const Vec3 p = keypoint_position(skeleton, joints, k);
    const Projected pr = project_point(camera, p);
    Keypoint2D kp{pr.x, pr.y, 2};
    const int ix = static_cast<int>(std::lround(pr.x));
    const int iy = static_cast<int>(std::lround(pr.y));
    if (!mask.in_bounds(ix, iy)) {
      kp.visibility = 0;  // out of frame
    } else if (mask.mask[mask.idx(ix, iy)]) {
      // Slack past the keypoint's own capsule surface keeps a bone from
      // occluding its own endpoints.
      const double own_r = bone_radius(skeleton.bones[skeleton.keypoints[k].bone].name);
      const double slack = own_r * 1.5 + 1e-3;
      if (mask.depth[mask.idx(ix, iy)] < pr.depth - slack) kp.visibility = 1;
    }
    out.points[k] = kp;
  }
  out.bbox = keypoint_bbox(out.points, bbox_margin);
  return out;
}

RasterImage draw_overlay(const RasterImage& base, const Keypoints2D& keypoints) {
  RasterImage out = base;
  auto put = [&](int x, int y, std::uint8_t r, std::uint8_t g, std::uint8_t b) {
    if (!out.in_bounds(x, y)) return;
    std::uint8_t* px = out.at(x, y);
    px[0] = r;
    px[1] = g;
    px[2] = b;
    px[3] = 0xff;
  };
  auto line = [&](const Keypoint2D& a, const Keypoint2D& b) {
    if (a.visibility == 0 || b.visibility == 0) return;
    const int steps = static_cast<int>(std::ceil(std::hypot(b.x - a.x, b.y - a.y))) + 1;
    for (int s = 0; s <= steps; ++s) {
      const double t = static_cast<double>(s) / steps;
      put(static_cast<int>(std::lround(a.x + t * (b.x - a.x))),
          static_cast<int>(std::lround(a.y + t * (b.y - a.y))), 70, 130, 240);
    }
  };

  // Limb and spine connections, indices into the canonical keypoint order.
  static constexpr int kEdges[][2] = {
      {0, 1}, {0, 2}, {0, 3},                  // nose-eyes, nose-neck
      {3, 4}, {4, 6}, {6, 8},                  // left front leg
      {3, 5}, {5, 7}, {7, 9},                  // right front leg
      {16, 10}, {10, 12}, {12, 14},            // left back leg
      {16, 11}, {11, 13}, {13, 15},            // right back leg
      {3, 16}};                                // spine
  for (const auto& e : kEdges) line(keypoints.points[e[0]], keypoints.points[e[1]]);

  for (const Keypoint2D& kp : keypoints.points) {
    if (kp.visibility == 0) continue;
    const int cx = static_cast<int>(std::lround(kp.x));
    const int cy = static_cast<int>(std::lround(kp.y));
    for (int dy = -2; dy <= 2; ++dy) {
      for (int dx = -2; dx <= 2; ++dx) {
        if (dx * dx + dy * dy > 5) continue;
        if (kp.visibility == 2) {
          put(cx + dx, cy + dy, 60, 220, 60);
        } else {
          put(cx + dx, cy + dy, 245, 150, 40);
        }
      }
    }
  }
  return out;
}

}  // namespace quadsyn
