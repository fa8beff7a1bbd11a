#pragma once

#include <array>
#include <cstdint>
#include <filesystem>
#include <string>
#include <utility>
#include <vector>

#include <json.hpp>

#include "quadsyn/filter.hpp"
#include "quadsyn/render.hpp"
#include "quadsyn/style.hpp"

namespace quadsyn {

struct SpeciesSpec {
  std::string name;
  std::filesystem::path skeleton;
  std::filesystem::path prior_model;
  std::filesystem::path filter_ranges;
};

struct GenerationConfig {
  std::size_t n_images = 0;
  std::vector<SpeciesSpec> species;  // images are assigned round-robin
  RenderConfig render;
  SamplerConfig sampler;
  FusionConfig fusion;
  std::filesystem::path background_dir;
  std::filesystem::path output_dir;
  std::pair<int, int> split_ratio{7, 1};  // train : val
  std::uint64_t master_seed = 0;
  int workers = 1;
  std::size_t per_image_retry_cap = 8;

  void validate() const;
};

// JSON config file; relative paths resolve against the file's directory.
GenerationConfig load_generation_config(const std::filesystem::path& path);
nlohmann::json generation_config_to_json(const GenerationConfig& config);

struct PoseProvenance {
  std::uint64_t latent_seed = 0;      // seed of the rejection-sampling stream
  std::size_t filter_attempts = 0;    // draws until the filter accepted
};

struct AnnotationRecord {
  int image_id = 0;
  std::string file_name;
  int width = 0, height = 0;
  std::array<Keypoint2D, kKeypointCount> keypoints{};
  std::array<double, 4> bbox{};
  int category_id = 1;
  std::string category;
  std::string split;  // "train" or "val"
  PoseProvenance provenance;
  AngleVector pose;
};

struct DatasetManifest {
  std::string generator_version;
  nlohmann::json config_echo;
  std::size_t train_count = 0;
  std::size_t val_count = 0;
  std::vector<AnnotationRecord> records;  // ordered by image_id
};

// Runs sampling -> filtering -> kinematics -> rendering -> stylization ->
// annotation for every image. Image i derives all randomness from
// (master_seed, i), so output bytes are independent of worker count and
// execution order. Writes images/, masks/, annotations/, then manifest.json
// last (atomic rename over any partial file), and returns the manifest.
DatasetManifest build_dataset(const GenerationConfig& config);

// Deterministic sinusoidal gait-cycle poses: per leg, phase-offset flexion
// curves with amplitudes bounded inside [-pi/2, pi/2]. Doubles as VAE training
// data and as a brute-force corpus for tests.
std::vector<AngleVector> procedural_gait_corpus(std::size_t n, std::uint64_t seed);

// COCO keypoint annotation files, one per split, under out_dir.
void write_coco(const DatasetManifest& manifest, const std::filesystem::path& out_dir);

void save_manifest(const DatasetManifest& manifest, const std::filesystem::path& path);
DatasetManifest load_manifest(const std::filesystem::path& path);

// Minimal COCO reader covering the fields write_coco emits.
struct CocoImage {
  int id = 0;
  std::string file_name;
  int width = 0, height = 0;
};
struct CocoAnnotation {
  int id = 0;
  int image_id = 0;
  int category_id = 0;
  std::vector<double> keypoints;  // flat 51
  int num_keypoints = 0;
  std::array<double, 4> bbox{};
};
struct CocoFile {
  std::vector<CocoImage> images;
  std::vector<CocoAnnotation> annotations;
  std::vector<std::string> keypoint_names;
};
CocoFile load_coco(const std::filesystem::path& path);

// train/val sizes under the configured ratio; the val share rounds half-up,
// so 8 -> (7, 1), 1 -> (1, 0), 100 at 7:1 -> (87, 13).
std::pair<std::size_t, std::size_t> split_counts(std::size_t n, std::pair<int, int> ratio);

inline constexpr const char* kGeneratorVersion = "quadsyn-0.1.0";

}  // namespace quadsyn
