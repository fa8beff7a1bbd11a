#include "quadsyn/style.hpp"

#include <algorithm>
#include <cmath>

#include "quadsyn/error.hpp"
#include "quadsyn/kernels.hpp"

namespace quadsyn {

void FusionConfig::validate() const {
  if (!(alpha >= 0.0 && alpha <= 1.0)) {
    throw ValidationError("fusion config: alpha must lie in [0, 1]");
  }
  if (mode == StylizerMode::external && external_dir.empty()) {
    throw ValidationError("fusion config: external stylizer needs a directory");
  }
}

namespace {

StyleStats stats_from_sums(const double sum[3], const double sumsq[3], std::size_t n) {
  StyleStats s;
  for (int c = 0; c < 3; ++c) {
    s.mean[c] = sum[c] / static_cast<double>(n);
    const double var = sumsq[c] / static_cast<double>(n) - s.mean[c] * s.mean[c];
    s.stddev[c] = var > 0.0 ? std::sqrt(var) : 0.0;
  }
  return s;
}

}  // namespace

StyleStats masked_stats(const RasterImage& img, const AnimalMask& mask) {
  if (img.width != mask.width || img.height != mask.height) {
    throw ValidationError("masked_stats: image and mask dimensions differ");
  }
  double sum[3] = {0, 0, 0}, sumsq[3] = {0, 0, 0};
  std::size_t n = 0;
  for (int y = 0; y < img.height; ++y) {
    for (int x = 0; x < img.width; ++x) {
      if (!mask.mask[mask.idx(x, y)]) continue;
      const std::uint8_t* px = img.at(x, y);
      for (int c = 0; c < 3; ++c) {
        sum[c] += px[c];
        sumsq[c] += static_cast<double>(px[c]) * px[c];
      }
      ++n;
    }
  }
  if (n == 0) throw ValidationError("masked_stats: mask is empty");
  return stats_from_sums(sum, sumsq, n);
}

StyleStats region_stats(const RasterImage& img) {
  if (img.width <= 0 || img.height <= 0) throw ValidationError("region_stats: empty image");
  double sum[3] = {0, 0, 0}, sumsq[3] = {0, 0, 0};
  for (int y = 0; y < img.height; ++y) {
    for (int x = 0; x < img.width; ++x) {
      const std::uint8_t* px = img.at(x, y);
      for (int c = 0; c < 3; ++c) {
        sum[c] += px[c];
        sumsq[c] += static_cast<double>(px[c]) * px[c];
      }
    }
  }
  return stats_from_sums(sum, sumsq, static_cast<std::size_t>(img.width) * img.height);
}

RasterImage composite(const RasterImage& foreground, const AnimalMask& mask,
                      const RasterImage& background, int offset_x, int offset_y) {
  if (foreground.width != mask.width || foreground.height != mask.height) {
    throw ValidationError("composite: foreground and mask dimensions differ");
  }
  RasterImage out = background;
  for (int y = 0; y < foreground.height; ++y) {
    const int by = y + offset_y;
    if (by < 0 || by >= background.height) continue;
    for (int x = 0; x < foreground.width; ++x) {
      const int bx = x + offset_x;
      if (bx < 0 || bx >= background.width) continue;
      if (!mask.mask[mask.idx(x, y)]) continue;
      const std::uint8_t* src = foreground.at(x, y);
      std::uint8_t* dst = out.at(bx, by);
      dst[0] = src[0];
      dst[1] = src[1];
      dst[2] = src[2];
      dst[3] = 0xff;
    }
  }
  return out;
}

AnimalMask shift_mask(const AnimalMask& mask, int offset_x, int offset_y, int width, int height) {
  AnimalMask out(width, height);
  for (int y = 0; y < mask.height; ++y) {
    const int by = y + offset_y;
    if (by < 0 || by >= height) continue;
    for (int x = 0; x < mask.width; ++x) {
      const int bx = x + offset_x;
      if (bx < 0 || bx >= width) continue;
      if (!mask.mask[mask.idx(x, y)]) continue;
      out.mask[out.idx(bx, by)] = 1;
      out.depth[out.idx(bx, by)] = mask.depth[mask.idx(x, y)];
    }
  }
  return out;
}

RasterImage transfer_stats(const RasterImage& content, const AnimalMask& mask,
                           const RasterImage& style_region) {
  const StyleStats cont = masked_stats(content, mask);  // throws on empty mask
  const StyleStats style = region_stats(style_region);

  RasterImage out = content;
  for (int y = 0; y < content.height; ++y) {
    for (int x = 0; x < content.width; ++x) {
      if (!mask.mask[mask.idx(x, y)]) continue;
      std::uint8_t* px = out.at(x, y);
      for (int c = 0; c < 3; ++c) {
        const double v = px[c];
        double mapped;
        if (cont.stddev[c] > 0.0) {
          mapped = style.stddev[c] * (v - cont.mean[c]) / cont.stddev[c] + style.mean[c];
        } else {
          mapped = v - cont.mean[c] + style.mean[c];  // degenerate channel: mean shift only
        }
        mapped = std::floor(mapped + 0.5);
        px[c] = static_cast<std::uint8_t>(std::clamp(mapped, 0.0, 255.0));
      }
    }
  }
  return out;
}

RasterImage fuse(const RasterImage& content, const RasterImage& stylized, double alpha) {
  if (content.width != stylized.width || content.height != stylized.height) {
    throw ValidationError("fuse: image dimensions differ");
  }
  if (!(alpha >= 0.0 && alpha <= 1.0)) throw ValidationError("fuse: alpha must lie in [0, 1]");
  if (alpha == 0.0) return content;
  if (alpha == 1.0) return stylized;

  RasterImage out(content.width, content.height);
  // RGBA interleaved; blending the alpha channel is a no-op for opaque inputs
  // and keeps the kernel a single flat pass.
  kernels::blend_u8(content.pixels.size(), content.pixels.data(), stylized.pixels.data(),
                    alpha, out.pixels.data());
  return out;
}

}  // namespace quadsyn
