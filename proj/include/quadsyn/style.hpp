#pragma once

#include <array>
#include <filesystem>

#include "quadsyn/image.hpp"

namespace quadsyn {

// Per-channel mean and standard deviation (population) of a pixel region.
struct StyleStats {
  std::array<double, 3> mean{};
  std::array<double, 3> stddev{};
};

StyleStats masked_stats(const RasterImage& img, const AnimalMask& mask);
StyleStats region_stats(const RasterImage& img);

enum class StylizerMode { stats, external };

struct FusionConfig {
  double alpha = 0.5;  // fusion rate in [0, 1]
  StylizerMode mode = StylizerMode::stats;
  std::filesystem::path external_dir;  // holds {stem}_sty.png when mode == external

  void validate() const;
};

// Hard composite: background pixels replaced by foreground wherever the mask
// is set, foreground placed at (offset_x, offset_y), out-of-bounds parts clipped.
RasterImage composite(const RasterImage& foreground, const AnimalMask& mask,
                      const RasterImage& background, int offset_x, int offset_y);

// The mask re-expressed in the coordinates of a width x height canvas with the
// same offset used for composite.
AnimalMask shift_mask(const AnimalMask& mask, int offset_x, int offset_y, int width, int height);

// Statistics-matching stylization: inside the mask each channel is remapped
//   x -> sigma_style * (x - mu_content) / sigma_content + mu_style
// and clamped; a zero content sigma degrades to a pure mean shift. Pixels
// outside the mask are untouched.
RasterImage transfer_stats(const RasterImage& content, const AnimalMask& mask,
                           const RasterImage& style_region);

// Per-pixel convex combination (1 - alpha) * content + alpha * stylized,
// rounded half-up and clamped. Alpha endpoints reproduce the inputs exactly.
RasterImage fuse(const RasterImage& content, const RasterImage& stylized, double alpha);

}  // namespace quadsyn
