#include "quadsyn/image.hpp"

#include <png.h>

#include <cmath>
#include <csetjmp>
#include <cstdio>
#include <cstring>
#include <memory>

#include <jpeglib.h>

#include "quadsyn/error.hpp"
#include "quadsyn/rng.hpp"

namespace quadsyn {

void RasterImage::fill(std::uint8_t r, std::uint8_t g, std::uint8_t b, std::uint8_t a) {
  for (std::size_t i = 0; i + 3 < pixels.size(); i += 4) {
    pixels[i] = r;
    pixels[i + 1] = g;
    pixels[i + 2] = b;
    pixels[i + 3] = a;
  }
}

std::size_t AnimalMask::coverage() const {
  std::size_t n = 0;
  for (std::uint8_t m : mask) n += m != 0;
  return n;
}

namespace {

struct FileCloser {
  void operator()(std::FILE* f) const {
    if (f) std::fclose(f);
  }
};
using FilePtr = std::unique_ptr<std::FILE, FileCloser>;

void write_png_impl(const std::filesystem::path& path, int width, int height, int color_type,
                    const std::uint8_t* data, std::size_t stride) {
  FilePtr fp(std::fopen(path.string().c_str(), "wb"));
  if (!fp) throw PipelineError("png: cannot open '" + path.string() + "' for writing");

  png_structp png = png_create_write_struct(PNG_LIBPNG_VER_STRING, nullptr, nullptr, nullptr);
  if (!png) throw PipelineError("png: write struct allocation failed");
  png_infop info = png_create_info_struct(png);
  if (!info) {
    png_destroy_write_struct(&png, nullptr);
    throw PipelineError("png: info struct allocation failed");
  }
  if (setjmp(png_jmpbuf(png))) {
    png_destroy_write_struct(&png, &info);
    throw PipelineError("png: write failure for '" + path.string() + "'");
  }
  png_init_io(png, fp.get());
  // Fixed settings so repeated runs emit byte-identical files.
  png_set_compression_level(png, 6);
  png_set_filter(png, 0, PNG_FILTER_NONE);
  png_set_IHDR(png, info, width, height, 8, color_type, PNG_INTERLACE_NONE,
               PNG_COMPRESSION_TYPE_DEFAULT, PNG_FILTER_TYPE_DEFAULT);
  png_write_info(png, info);
  std::vector<png_bytep> rows(height);
  for (int y = 0; y < height; ++y) {
    rows[y] = const_cast<png_bytep>(data + static_cast<std::size_t>(y) * stride);
  }
  png_write_image(png, rows.data());
  png_write_end(png, nullptr);
  png_destroy_write_struct(&png, &info);
}

RasterImage read_png_impl(const std::filesystem::path& path) {
  FilePtr fp(std::fopen(path.string().c_str(), "rb"));
  if (!fp) throw ValidationError("png: cannot open '" + path.string() + "'");

  png_structp png = png_create_read_struct(PNG_LIBPNG_VER_STRING, nullptr, nullptr, nullptr);
  if (!png) throw PipelineError("png: read struct allocation failed");
  png_infop info = png_create_info_struct(png);
  if (!info) {
    png_destroy_read_struct(&png, nullptr, nullptr);
    throw PipelineError("png: info struct allocation failed");
  }
  if (setjmp(png_jmpbuf(png))) {
    png_destroy_read_struct(&png, &info, nullptr);
    throw ValidationError("png: decode failure for '" + path.string() + "'");
  }
  png_init_io(png, fp.get());
  png_read_info(png, info);

  // Normalize everything to 8-bit RGBA.
  png_set_expand(png);
  png_set_strip_16(png);
  png_set_gray_to_rgb(png);
  png_set_add_alpha(png, 0xff, PNG_FILLER_AFTER);
  png_read_update_info(png, info);

  RasterImage img(static_cast<int>(png_get_image_width(png, info)),
                  static_cast<int>(png_get_image_height(png, info)));
  std::vector<png_bytep> rows(img.height);
  for (int y = 0; y < img.height; ++y) rows[y] = img.at(0, y);
  png_read_image(png, rows.data());
  png_read_end(png, nullptr);
  png_destroy_read_struct(&png, &info, nullptr);
  return img;
}

struct JpegErrorMgr {
  jpeg_error_mgr pub;
  std::jmp_buf jump;
};

void jpeg_error_exit(j_common_ptr cinfo) {
  auto* mgr = reinterpret_cast<JpegErrorMgr*>(cinfo->err);
  std::longjmp(mgr->jump, 1);
}

RasterImage read_jpeg_impl(const std::filesystem::path& path) {
  FilePtr fp(std::fopen(path.string().c_str(), "rb"));
  if (!fp) throw ValidationError("jpeg: cannot open '" + path.string() + "'");

  jpeg_decompress_struct cinfo;
  JpegErrorMgr err;
  cinfo.err = jpeg_std_error(&err.pub);
  err.pub.error_exit = jpeg_error_exit;
  if (setjmp(err.jump)) {
    jpeg_destroy_decompress(&cinfo);
    throw ValidationError("jpeg: decode failure for '" + path.string() + "'");
  }
  jpeg_create_decompress(&cinfo);
  jpeg_stdio_src(&cinfo, fp.get());
  jpeg_read_header(&cinfo, TRUE);
  cinfo.out_color_space = JCS_RGB;
  jpeg_start_decompress(&cinfo);

  RasterImage img(static_cast<int>(cinfo.output_width), static_cast<int>(cinfo.output_height));
  std::vector<std::uint8_t> row(static_cast<std::size_t>(img.width) * 3);
  while (cinfo.output_scanline < cinfo.output_height) {
    std::uint8_t* rowptr = row.data();
    jpeg_read_scanlines(&cinfo, &rowptr, 1);
    std::uint8_t* dst = img.at(0, static_cast<int>(cinfo.output_scanline) - 1);
    for (int x = 0; x < img.width; ++x) {
      dst[x * 4 + 0] = row[x * 3 + 0];
      dst[x * 4 + 1] = row[x * 3 + 1];
      dst[x * 4 + 2] = row[x * 3 + 2];
      dst[x * 4 + 3] = 0xff;
    }
  }
  jpeg_finish_decompress(&cinfo);
  jpeg_destroy_decompress(&cinfo);
  return img;
}

}  // namespace

void save_png(const RasterImage& img, const std::filesystem::path& path) {
  if (img.width <= 0 || img.height <= 0) throw ValidationError("png: empty image");
  write_png_impl(path, img.width, img.height, PNG_COLOR_TYPE_RGBA, img.pixels.data(),
                 static_cast<std::size_t>(img.width) * 4);
}

RasterImage load_png(const std::filesystem::path& path) { return read_png_impl(path); }

void save_mask_png(const AnimalMask& mask, const std::filesystem::path& path) {
  if (mask.width <= 0 || mask.height <= 0) throw ValidationError("png: empty mask");
  std::vector<std::uint8_t> gray(mask.mask.size());
  for (std::size_t i = 0; i < gray.size(); ++i) gray[i] = mask.mask[i] ? 255 : 0;
  write_png_impl(path, mask.width, mask.height, PNG_COLOR_TYPE_GRAY, gray.data(),
                 static_cast<std::size_t>(mask.width));
}

AnimalMask load_mask_png(const std::filesystem::path& path) {
  const RasterImage img = read_png_impl(path);
  AnimalMask mask(img.width, img.height);
  for (int y = 0; y < img.height; ++y) {
    for (int x = 0; x < img.width; ++x) {
      mask.mask[mask.idx(x, y)] = img.at(x, y)[0] > 127 ? 1 : 0;
    }
  }
  return mask;
}

RasterImage load_image(const std::filesystem::path& path) {
  FilePtr fp(std::fopen(path.string().c_str(), "rb"));
  if (!fp) throw ValidationError("image: cannot open '" + path.string() + "'");
  unsigned char magic[4] = {0, 0, 0, 0};
  const std::size_t got = std::fread(magic, 1, sizeof(magic), fp.get());
  fp.reset();
  if (got >= 4 && magic[0] == 0x89 && magic[1] == 'P' && magic[2] == 'N' && magic[3] == 'G') {
    return read_png_impl(path);
  }
  if (got >= 2 && magic[0] == 0xff && magic[1] == 0xd8) {
    return read_jpeg_impl(path);
  }
  throw ValidationError("image: '" + path.string() + "' is neither PNG nor JPEG");
}

RasterImage make_procedural_background(int width, int height, std::uint64_t seed) {
  if (width <= 0 || height <= 0) throw ValidationError("background: size must be positive");
  Rng rng(seed);
  // Two corner colors blended across the diagonal, plus horizontal grass-like bands.
  const double top[3] = {rng.uniform(60, 140), rng.uniform(110, 190), rng.uniform(150, 230)};
  const double bot[3] = {rng.uniform(40, 110), rng.uniform(90, 160), rng.uniform(30, 90)};
  const double band_period = rng.uniform(6.0, 18.0);
  const double band_amp = rng.uniform(4.0, 14.0);
  const double phase = rng.uniform(0.0, 6.28318);

  RasterImage img(width, height);
  for (int y = 0; y < height; ++y) {
    const double t = height > 1 ? static_cast<double>(y) / (height - 1) : 0.0;
    const double band = band_amp * std::sin(phase + y / band_period);
    for (int x = 0; x < width; ++x) {
      std::uint8_t* px = img.at(x, y);
      const double sway = 0.06 * std::sin(phase * 0.7 + x / (band_period * 1.7));
      for (int c = 0; c < 3; ++c) {
        double v = top[c] + (bot[c] - top[c]) * std::min(1.0, std::max(0.0, t + sway)) + band;
        if (v < 0) v = 0;
        if (v > 255) v = 255;
        px[c] = static_cast<std::uint8_t>(v);
      }
      px[3] = 0xff;
    }
  }
  return img;
}

}  // namespace quadsyn
