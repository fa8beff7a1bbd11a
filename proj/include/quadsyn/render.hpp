#pragma once

#include <cstdint>
#include <string_view>

#include "quadsyn/geometry.hpp"
#include "quadsyn/image.hpp"
#include "quadsyn/skeleton.hpp"

namespace quadsyn {

struct Interval {
  double lo = 0.0;
  double hi = 0.0;
};

struct RenderConfig {
  Interval azimuth{0.0, 2.0 * kPi};   // radians around the animal
  Interval elevation{-0.25, 0.55};    // radians above the horizon
  Interval distance{3.2, 5.2};        // meters from orbit_target
  Interval brightness{0.85, 1.2};     // color multiplier, must stay within (0, 4]
  double focal_length = 300.0;        // pixels
  int width = 256;
  int height = 256;
  bool stripes = true;                // procedural bands perpendicular to each bone axis
  double stripe_period = 0.12;        // meters
  Vec3 orbit_target{0.55, 0.0, -0.2};
  std::uint64_t rng_seed = 0;
  double bbox_margin = 0.05;

  void validate() const;
};

struct CameraLightDraw {
  Camera camera;
  double brightness = 1.0;
};

// Uniform camera/light draw from the configured intervals, on the substream
// derived from (rng_seed, draw_index); the same pair always reproduces the
// same draw.
CameraLightDraw randomize_camera_light(const RenderConfig& config, std::uint64_t draw_index);

struct RenderResult {
  RasterImage image;
  AnimalMask mask;
};

// Software rasterizer: each bone becomes a screen-space capsule (the torso an
// ellipse), painter-ordered by midpoint depth with per-pixel depth interpolated
// along the segment. The brightness multiplier scales color channels with
// clamping. Alpha is binary and equals the mask; pixels outside the mask are
// fully transparent. shift_x/shift_y translate the principal point.
// Throws PipelineError when the animal covers no pixel.
RenderResult render_pose(const Skeleton& skeleton, const AngleVector& pose, const Camera& camera,
                         const RenderConfig& config, double brightness = 1.0,
                         int shift_x = 0, int shift_y = 0);

// Occlusion-aware keypoint annotation against a rendered depth buffer:
// visibility 2 when the keypoint's own surface is frontmost at its pixel,
// 1 when something nearer covers it, 0 when it projects outside the frame.
Keypoints2D annotate_keypoints(const Skeleton& skeleton, const JointPositions& joints,
                               const Camera& camera, const AnimalMask& mask,
                               double bbox_margin = 0.05);

// Drawn radius of a bone in meters (0 = not drawn). Keyed on name prefixes of
// the bundled armature; unknown bones get a thin default so custom skeletons
// still render.
double bone_radius(std::string_view bone_name);

// Diagnostic overlay: keypoint dots (green = visible, orange = occluded) and
// limb segments drawn onto a copy of the input.
RasterImage draw_overlay(const RasterImage& base, const Keypoints2D& keypoints);

}  // namespace quadsyn
