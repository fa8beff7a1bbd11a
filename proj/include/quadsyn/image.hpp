#pragma once

#include <cstdint>
#include <filesystem>
#include <vector>

namespace quadsyn {

// 8-bit RGBA raster, row-major, tightly packed.
struct RasterImage {
  int width = 0;
  int height = 0;
  std::vector<std::uint8_t> pixels;  // width * height * 4

  RasterImage() = default;
  RasterImage(int w, int h) : width(w), height(h), pixels(static_cast<std::size_t>(w) * h * 4, 0) {}

  std::uint8_t* at(int x, int y) {
    return pixels.data() + (static_cast<std::size_t>(y) * width + x) * 4;
  }
  const std::uint8_t* at(int x, int y) const {
    return pixels.data() + (static_cast<std::size_t>(y) * width + x) * 4;
  }
  bool in_bounds(int x, int y) const { return x >= 0 && x < width && y >= 0 && y < height; }
  void fill(std::uint8_t r, std::uint8_t g, std::uint8_t b, std::uint8_t a);
};

// Binary foreground bitmap with per-pixel camera-space depth for covered pixels.
struct AnimalMask {
  int width = 0;
  int height = 0;
  std::vector<std::uint8_t> mask;  // 0 or 1
  std::vector<float> depth;        // valid where mask = 1

  AnimalMask() = default;
  AnimalMask(int w, int h)
      : width(w), height(h), mask(static_cast<std::size_t>(w) * h, 0),
        depth(static_cast<std::size_t>(w) * h, 0.0f) {}

  std::size_t idx(int x, int y) const { return static_cast<std::size_t>(y) * width + x; }
  bool in_bounds(int x, int y) const { return x >= 0 && x < width && y >= 0 && y < height; }
  std::size_t coverage() const;
};

void save_png(const RasterImage& img, const std::filesystem::path& path);
RasterImage load_png(const std::filesystem::path& path);

// 8-bit grayscale, 0 background / 255 foreground.
void save_mask_png(const AnimalMask& mask, const std::filesystem::path& path);

// Inverse of save_mask_png; any channel value > 127 marks foreground. Depth
// values are not stored in PNG form and come back as zero.
AnimalMask load_mask_png(const std::filesystem::path& path);

// PNG or JPEG, sniffed from the file's magic bytes; always returns RGBA.
RasterImage load_image(const std::filesystem::path& path);

// Low-frequency gradient plus band noise; stands in for a real background
// photograph in tests and demos.
RasterImage make_procedural_background(int width, int height, std::uint64_t seed);

}  // namespace quadsyn
