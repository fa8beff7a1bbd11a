#include "quadsyn/dataset.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <mutex>
#include <optional>
#include <thread>

#include "quadsyn/error.hpp"
#include "quadsyn/rng.hpp"

namespace quadsyn {

namespace {

// Substream labels hung off (master_seed, image_index, attempt).
enum StreamTag : std::uint64_t {
  kStreamPose = 1,
  kStreamCamera = 2,
  kStreamBackground = 3,
  kStreamSplit = 0x59117,  // hangs off master_seed directly, clear of image indices
};

}  // namespace

void GenerationConfig::validate() const {
  if (n_images < 1) throw ValidationError("generation config: n_images must be >= 1");
  if (species.empty()) throw ValidationError("generation config: at least one species required");
  for (const auto& s : species) {
    if (s.name.empty()) throw ValidationError("generation config: species name must be non-empty");
  }
  if (split_ratio.first <= 0 || split_ratio.second <= 0) {
    throw ValidationError("generation config: split ratio parts must be positive");
  }
  if (workers < 1) throw ValidationError("generation config: workers must be >= 1");
  if (per_image_retry_cap < 1) {
    throw ValidationError("generation config: per_image_retry_cap must be >= 1");
  }
  render.validate();
  sampler.validate();
  fusion.validate();
  if (background_dir.empty()) throw ValidationError("generation config: background_dir required");
  if (output_dir.empty()) throw ValidationError("generation config: output_dir required");
}

namespace {

Interval interval_from_json(const nlohmann::json& j, const char* field) {
  if (!j.is_array() || j.size() != 2) {
    throw ValidationError(std::string("generation config: '") + field + "' must be [lo, hi]");
  }
  return {j[0].get<double>(), j[1].get<double>()};
}

nlohmann::json interval_to_json(const Interval& iv) { return {iv.lo, iv.hi}; }

std::filesystem::path resolve(const std::filesystem::path& base, const std::string& p) {
  const std::filesystem::path path(p);
  return path.is_absolute() ? path : base / path;
}

}  // namespace

GenerationConfig load_generation_config(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ValidationError("generation config: cannot open '" + path.string() + "'");
  nlohmann::json doc;
  try {
    in >> doc;
  } catch (const nlohmann::json::exception& e) {
    throw ValidationError("generation config: parse failure: " + std::string(e.what()));
  }
  const std::filesystem::path base = path.parent_path();

  GenerationConfig c;
  try {
    c.n_images = doc.at("n_images").get<std::size_t>();
    if (doc.contains("species")) {
      for (const auto& js : doc["species"]) {
        SpeciesSpec s;
        s.name = js.at("name").get<std::string>();
        s.skeleton = resolve(base, js.at("skeleton").get<std::string>());
        s.prior_model = resolve(base, js.at("prior_model").get<std::string>());
        s.filter_ranges = resolve(base, js.at("filter_ranges").get<std::string>());
        c.species.push_back(s);
      }
    } else {
      SpeciesSpec s;
      s.name = doc.value("category", "zebra");
      s.skeleton = resolve(base, doc.at("skeleton").get<std::string>());
      s.prior_model = resolve(base, doc.at("prior_model").get<std::string>());
      s.filter_ranges = resolve(base, doc.at("filter_ranges").get<std::string>());
      c.species.push_back(s);
    }
    c.background_dir = resolve(base, doc.at("background_dir").get<std::string>());
    c.output_dir = resolve(base, doc.at("output_dir").get<std::string>());
    c.master_seed = doc.value("master_seed", std::uint64_t{0});
    if (doc.contains("split_ratio")) {
      c.split_ratio = {doc["split_ratio"][0].get<int>(), doc["split_ratio"][1].get<int>()};
    }
    c.workers = doc.value("workers", 1);
    c.per_image_retry_cap = doc.value("retry_cap", std::size_t{8});

    if (doc.contains("render")) {
      const auto& jr = doc["render"];
      if (jr.contains("azimuth")) c.render.azimuth = interval_from_json(jr["azimuth"], "azimuth");
      if (jr.contains("elevation")) c.render.elevation = interval_from_json(jr["elevation"], "elevation");
      if (jr.contains("distance")) c.render.distance = interval_from_json(jr["distance"], "distance");
      if (jr.contains("brightness")) c.render.brightness = interval_from_json(jr["brightness"], "brightness");
      c.render.focal_length = jr.value("focal_length", c.render.focal_length);
      c.render.width = jr.value("width", c.render.width);
      c.render.height = jr.value("height", c.render.height);
      c.render.stripes = jr.value("stripes", c.render.stripes);
      c.render.stripe_period = jr.value("stripe_period", c.render.stripe_period);
      c.render.bbox_margin = jr.value("bbox_margin", c.render.bbox_margin);
    }
    if (doc.contains("sampler")) {
      const auto& js = doc["sampler"];
      c.sampler.variance = js.value("variance", c.sampler.variance);
      c.sampler.max_attempts_per_pose = js.value("max_attempts", c.sampler.max_attempts_per_pose);
    }
    if (doc.contains("fusion")) {
      const auto& jf = doc["fusion"];
      c.fusion.alpha = jf.value("alpha", c.fusion.alpha);
      const std::string mode = jf.value("mode", "stats");
      if (mode == "stats") {
        c.fusion.mode = StylizerMode::stats;
      } else if (mode == "external") {
        c.fusion.mode = StylizerMode::external;
        c.fusion.external_dir = resolve(base, jf.at("external_dir").get<std::string>());
      } else {
        throw ValidationError("generation config: fusion mode must be 'stats' or 'external'");
      }
    }
  } catch (const nlohmann::json::exception& e) {
    throw ValidationError("generation config: " + std::string(e.what()));
  }
  c.validate();
  return c;
}

nlohmann::json generation_config_to_json(const GenerationConfig& c) {
  nlohmann::json species = nlohmann::json::array();
  for (const auto& s : c.species) {
    species.push_back({{"name", s.name},
                       {"skeleton", s.skeleton.string()},
                       {"prior_model", s.prior_model.string()},
                       {"filter_ranges", s.filter_ranges.string()}});
  }
  return {{"n_images", c.n_images},
          {"species", species},
          {"background_dir", c.background_dir.string()},
          {"output_dir", c.output_dir.string()},
          {"master_seed", c.master_seed},
          {"split_ratio", {c.split_ratio.first, c.split_ratio.second}},
          {"workers", c.workers},
          {"retry_cap", c.per_image_retry_cap},
          {"render",
           {{"azimuth", interval_to_json(c.render.azimuth)},
            {"elevation", interval_to_json(c.render.elevation)},
            {"distance", interval_to_json(c.render.distance)},
            {"brightness", interval_to_json(c.render.brightness)},
            {"focal_length", c.render.focal_length},
            {"width", c.render.width},
            {"height", c.render.height},
            {"stripes", c.render.stripes},
            {"stripe_period", c.render.stripe_period},
            {"bbox_margin", c.render.bbox_margin}}},
          {"sampler",
           {{"variance", c.sampler.variance},
            {"max_attempts", c.sampler.max_attempts_per_pose}}},
          {"fusion",
           {{"alpha", c.fusion.alpha},
            {"mode", c.fusion.mode == StylizerMode::stats ? "stats" : "external"},
            {"external_dir", c.fusion.external_dir.string()}}}};
}

std::pair<std::size_t, std::size_t> split_counts(std::size_t n, std::pair<int, int> ratio) {
  if (ratio.first <= 0 || ratio.second <= 0) {
    throw ValidationError("split ratio parts must be positive");
  }
  const double val_share = static_cast<double>(ratio.second) /
                           static_cast<double>(ratio.first + ratio.second);
  std::size_t val = static_cast<std::size_t>(std::floor(static_cast<double>(n) * val_share + 0.5));
  if (val > n) val = n;
  return {n - val, val};
}

std::vector<AngleVector> procedural_gait_corpus(std::size_t n, std::uint64_t seed) {
  if (n < 1) throw ValidationError("gait corpus: n must be >= 1");
  Rng rng(seed);
  std::vector<AngleVector> corpus(n);

  // Trot: diagonal leg pairs move in phase. Leg order matches the default
  // skeleton's prior joints: fl, fr, hl, hr with joints upper, lower, cannon.
  constexpr double kLegPhase[4] = {0.0, kPi, kPi, 0.0};
  constexpr double kLowerLag = 0.55;
  constexpr double kCannonLag = 1.05;

  for (std::size_t i = 0; i < n; ++i) {
    const double theta = 2.0 * kPi * static_cast<double>(i) / static_cast<double>(n);
    const double amp_upper = 0.50 * (0.8 + 0.4 * rng.uniform());
    const double amp_lower = 0.55 * (0.8 + 0.4 * rng.uniform());
    const double amp_cannon = 0.35 * (0.8 + 0.4 * rng.uniform());
    AngleVector& a = corpus[i];
    for (int leg = 0; leg < 4; ++leg) {
      const double ph = theta + kLegPhase[leg];
      const double pitch[3] = {amp_upper * std::sin(ph),
                               amp_lower * std::sin(ph + kLowerLag),
                               amp_cannon * std::sin(ph + kCannonLag)};
      for (int j = 0; j < 3; ++j) {
        const std::size_t base = static_cast<std::size_t>(leg * 3 + j) * 3;
        a.values[base + 0] = rng.uniform(-0.08, 0.08);  // roll jitter
        a.values[base + 1] = pitch[j];                  // flexion plane
        a.values[base + 2] = rng.uniform(-0.08, 0.08);  // yaw jitter
      }
    }
  }
  return corpus;
}

namespace {

struct SpeciesAssets {
  std::string name;
  Skeleton skeleton;
  PriorModel prior;
  FilterRanges ranges;
};

struct PreparedInputs {
  std::vector<SpeciesAssets> species;
  std::vector<std::filesystem::path> background_paths;  // sorted for determinism
  std::vector<RasterImage> backgrounds;
};

PreparedInputs prepare_inputs(const GenerationConfig& config) {
  PreparedInputs in;
  for (const auto& spec : config.species) {
    SpeciesAssets a;
    a.name = spec.name;
    a.skeleton = load_skeleton(spec.skeleton);
    a.prior = load_prior(spec.prior_model).model;
    a.ranges = load_ranges(spec.filter_ranges);
    in.species.push_back(std::move(a));
  }

  if (!std::filesystem::is_directory(config.background_dir)) {
    throw ValidationError("generation: background_dir '" + config.background_dir.string() +
                          "' is not a directory");
  }
  for (const auto& entry : std::filesystem::directory_iterator(config.background_dir)) {
    if (!entry.is_regular_file()) continue;
    const auto ext = entry.path().extension().string();
    if (ext == ".png" || ext == ".jpg" || ext == ".jpeg" || ext == ".PNG" || ext == ".JPG") {
      in.background_paths.push_back(entry.path());
    }
  }
  std::sort(in.background_paths.begin(), in.background_paths.end());
  if (in.background_paths.empty()) {
    throw ValidationError("generation: no PNG/JPEG backgrounds in '" +
                          config.background_dir.string() + "'");
  }
  for (const auto& p : in.background_paths) {
    RasterImage bg = load_image(p);
    if (bg.width < config.render.width || bg.height < config.render.height) {
      throw ValidationError("generation: background '" + p.string() +
                            "' is smaller than the render frame");
    }
    in.backgrounds.push_back(std::move(bg));
  }
  return in;
}

std::string image_stem(const std::string& category, int image_id) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "_%06d", image_id);
  return category + buf;
}

AnnotationRecord generate_one(const GenerationConfig& config, const PreparedInputs& in,
                              std::size_t index) {
  const SpeciesAssets& species = in.species[index % in.species.size()];
  const std::uint64_t image_seed = mix_seed(config.master_seed, index);
  std::string last_error = "no attempts made";

  for (std::size_t attempt = 0; attempt < config.per_image_retry_cap; ++attempt) {
    const std::uint64_t attempt_seed = mix_seed(image_seed, attempt);
    try {
      // Pose: rejection-sample one filtered pose on this attempt's stream.
      SamplerConfig sampler = config.sampler;
      sampler.rng_seed = mix_seed(attempt_seed, kStreamPose);
      const SampleResult sample = sample_valid_poses(species.prior, species.ranges, sampler, 1);
      if (!sample.complete) {
        throw PipelineError("pose filter budget exhausted (acceptance rate " +
                            std::to_string(sample.acceptance_rate) + ")");
      }
      const AngleVector& pose = sample.poses.front();

      RenderConfig render_cfg = config.render;
      render_cfg.rng_seed = config.master_seed;
      const CameraLightDraw draw =
          randomize_camera_light(render_cfg, mix_seed(attempt_seed, kStreamCamera));

      const RenderResult rendered =
          render_pose(species.skeleton, pose, draw.camera, render_cfg, draw.brightness);
      const JointPositions joints = forward_kinematics(species.skeleton, pose);
      Keypoints2D kps = annotate_keypoints(species.skeleton, joints, draw.camera, rendered.mask,
                                           render_cfg.bbox_margin);

      // Background, placement offset, composite, stylize, fuse.
      Rng bg_rng(mix_seed(attempt_seed, kStreamBackground));
      const std::size_t bg_index = static_cast<std::size_t>(bg_rng.index(in.backgrounds.size()));
      const RasterImage& bg = in.backgrounds[bg_index];
      const int max_ox = bg.width - rendered.image.width;
      const int max_oy = bg.height - rendered.image.height;
      const int ox = max_ox > 0 ? static_cast<int>(bg_rng.index(max_ox + 1)) : 0;
      const int oy = max_oy > 0 ? static_cast<int>(bg_rng.index(max_oy + 1)) : 0;

      const RasterImage content = composite(rendered.image, rendered.mask, bg, ox, oy);
      const AnimalMask placed_mask = shift_mask(rendered.mask, ox, oy, bg.width, bg.height);

      const std::string stem = image_stem(species.name, static_cast<int>(index) + 1);
      RasterImage stylized;
      if (config.fusion.mode == StylizerMode::stats) {
        stylized = transfer_stats(content, placed_mask, bg);
      } else {
        const auto sty_path = config.fusion.external_dir / (stem + "_sty.png");
        if (!std::filesystem::exists(sty_path)) {
          throw ValidationError("generation: external stylized image missing: " +
                                sty_path.string());
        }
        stylized = load_image(sty_path);
        if (stylized.width != content.width || stylized.height != content.height) {
          throw ValidationError("generation: external stylized image size mismatch: " +
                                sty_path.string());
        }
      }
      const RasterImage fused = fuse(content, stylized, config.fusion.alpha);

      // Keypoints move with the placement offset.
      for (auto& kp : kps.points) {
        if (kp.visibility > 0) {
          kp.x += ox;
          kp.y += oy;
        } else {
          kp.x = 0.0;
          kp.y = 0.0;
        }
      }
      kps.bbox = keypoint_bbox(kps.points, render_cfg.bbox_margin);

      save_png(fused, config.output_dir / "images" / (stem + ".png"));
      save_mask_png(placed_mask, config.output_dir / "masks" / (stem + "_mask.png"));

      AnnotationRecord rec;
      rec.image_id = static_cast<int>(index) + 1;
      rec.file_name = stem + ".png";
      rec.width = fused.width;
      rec.height = fused.height;
      rec.keypoints = kps.points;
      rec.bbox = kps.bbox;
      rec.category_id = static_cast<int>(index % in.species.size()) + 1;
      rec.category = species.name;
      rec.provenance = {sampler.rng_seed, sample.attempts};
      rec.pose = pose;
      return rec;
    } catch (const ValidationError&) {
      throw;  // configuration problems do not improve with retries
    } catch (const std::exception& e) {
      last_error = e.what();
    }
  }
  throw PipelineError("generation: image " + std::to_string(index) + " failed after " +
                      std::to_string(config.per_image_retry_cap) + " attempts; last error: " +
                      last_error);
}

}  // namespace

DatasetManifest build_dataset(const GenerationConfig& config) {
  config.validate();
  const PreparedInputs inputs = prepare_inputs(config);

  std::filesystem::create_directories(config.output_dir / "images");
  std::filesystem::create_directories(config.output_dir / "masks");
  std::filesystem::create_directories(config.output_dir / "annotations");

  std::vector<AnnotationRecord> records(config.n_images);
  std::atomic<std::size_t> next{0};
  std::mutex error_mutex;
  std::optional<std::pair<std::size_t, std::string>> first_error;

  auto worker = [&]() {
    while (true) {
      const std::size_t i = next.fetch_add(1);
      if (i >= config.n_images) return;
      {
        std::lock_guard<std::mutex> lock(error_mutex);
        if (first_error) return;
      }
      try {
        records[i] = generate_one(config, inputs, i);
      } catch (const std::exception& e) {
        std::lock_guard<std::mutex> lock(error_mutex);
        if (!first_error || i < first_error->first) first_error = {i, e.what()};
        return;
      }
    }
  };

  const int nworkers = std::max(1, std::min<int>(config.workers, static_cast<int>(config.n_images)));
  if (nworkers == 1) {
    worker();
  } else {
    std::vector<std::thread> pool;
    pool.reserve(nworkers);
    for (int w = 0; w < nworkers; ++w) pool.emplace_back(worker);
    for (auto& t : pool) t.join();
  }
  if (first_error) {
    throw PipelineError(first_error->second);
  }

  // Seeded shuffle; the tail becomes the validation split.
  const auto [train_count, val_count] = split_counts(config.n_images, config.split_ratio);
  std::vector<std::size_t> order(config.n_images);
  for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
  Rng split_rng(mix_seed(config.master_seed, kStreamSplit));
  split_rng.shuffle(order);
  for (std::size_t pos = 0; pos < order.size(); ++pos) {
    records[order[pos]].split = pos < train_count ? "train" : "val";
  }

  DatasetManifest manifest;
  manifest.generator_version = kGeneratorVersion;
  manifest.config_echo = generation_config_to_json(config);
  manifest.train_count = train_count;
  manifest.val_count = val_count;
  manifest.records = std::move(records);

  write_coco(manifest, config.output_dir / "annotations");
  save_manifest(manifest, config.output_dir / "manifest.json");
  return manifest;
}

namespace {

nlohmann::json record_to_json(const AnnotationRecord& r) {
  nlohmann::json kps = nlohmann::json::array();
  for (const auto& kp : r.keypoints) {
    kps.push_back(kp.x);
    kps.push_back(kp.y);
    kps.push_back(kp.visibility);
  }
  return {{"image_id", r.image_id},
          {"file_name", r.file_name},
          {"width", r.width},
          {"height", r.height},
          {"keypoints", kps},
          {"bbox", r.bbox},
          {"category_id", r.category_id},
          {"category", r.category},
          {"split", r.split},
          {"provenance",
           {{"latent_seed", r.provenance.latent_seed},
            {"filter_attempts", r.provenance.filter_attempts}}},
          {"pose", r.pose.values}};
}

AnnotationRecord record_from_json(const nlohmann::json& j) {
  AnnotationRecord r;
  r.image_id = j.at("image_id").get<int>();
  r.file_name = j.at("file_name").get<std::string>();
  r.width = j.at("width").get<int>();
  r.height = j.at("height").get<int>();
  const auto kps = j.at("keypoints").get<std::vector<double>>();
  if (kps.size() != kKeypointCount * 3) {
    throw ValidationError("manifest: keypoints array must have 51 values");
  }
  for (std::size_t k = 0; k < kKeypointCount; ++k) {
    r.keypoints[k] = {kps[3 * k], kps[3 * k + 1], static_cast<int>(kps[3 * k + 2])};
  }
  const auto bbox = j.at("bbox").get<std::vector<double>>();
  std::copy(bbox.begin(), bbox.end(), r.bbox.begin());
  r.category_id = j.at("category_id").get<int>();
  r.category = j.at("category").get<std::string>();
  r.split = j.at("split").get<std::string>();
  r.provenance.latent_seed = j.at("provenance").at("latent_seed").get<std::uint64_t>();
  r.provenance.filter_attempts = j.at("provenance").at("filter_attempts").get<std::size_t>();
  const auto pose = j.at("pose").get<std::vector<double>>();
  if (pose.size() != kAngleCount) throw ValidationError("manifest: pose must have 36 values");
  std::copy(pose.begin(), pose.end(), r.pose.values.begin());
  return r;
}

}  // namespace

void save_manifest(const DatasetManifest& manifest, const std::filesystem::path& path) {
  nlohmann::json doc;
  doc["format"] = "quadsyn-manifest";
  doc["generator_version"] = manifest.generator_version;
  doc["config"] = manifest.config_echo;
  doc["counts"] = {{"train", manifest.train_count}, {"val", manifest.val_count}};
  doc["records"] = nlohmann::json::array();
  for (const auto& r : manifest.records) doc["records"].push_back(record_to_json(r));

  const std::filesystem::path tmp = path.string() + ".tmp";
  {
    std::ofstream out(tmp);
    if (!out) throw PipelineError("manifest: cannot write '" + tmp.string() + "'");
    out << doc.dump(2) << "\n";
  }
  std::filesystem::rename(tmp, path);
}

DatasetManifest load_manifest(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ValidationError("manifest: cannot open '" + path.string() + "'");
  nlohmann::json doc;
  try {
    in >> doc;
  } catch (const nlohmann::json::exception& e) {
    throw ValidationError("manifest: parse failure: " + std::string(e.what()));
  }
  if (doc.value("format", "") != "quadsyn-manifest") {
    throw ValidationError("manifest: not a manifest file");
  }
  DatasetManifest m;
  m.generator_version = doc.value("generator_version", "");
  m.config_echo = doc.value("config", nlohmann::json::object());
  m.train_count = doc.at("counts").at("train").get<std::size_t>();
  m.val_count = doc.at("counts").at("val").get<std::size_t>();
  for (const auto& jr : doc.at("records")) m.records.push_back(record_from_json(jr));
  return m;
}

namespace {

// Limb connectivity for the COCO "skeleton" field, 1-based keypoint indices.
const std::vector<std::array<int, 2>>& coco_skeleton_edges() {
  static const std::vector<std::array<int, 2>> edges = {
      {1, 2},  {1, 3},  {1, 4},   {4, 5},   {5, 7},   {7, 9},  {4, 6},  {6, 8},
      {8, 10}, {17, 11}, {11, 13}, {13, 15}, {17, 12}, {12, 14}, {14, 16}, {4, 17}};
  return edges;
}

nlohmann::json coco_for_split(const DatasetManifest& manifest, const std::string& split) {
  nlohmann::json images = nlohmann::json::array();
  nlohmann::json annotations = nlohmann::json::array();

  for (const auto& r : manifest.records) {
    if (r.split != split) continue;
    images.push_back({{"id", r.image_id},
                      {"file_name", r.file_name},
                      {"width", r.width},
                      {"height", r.height}});
    nlohmann::json kps = nlohmann::json::array();
    int labeled = 0;
    for (const auto& kp : r.keypoints) {
      kps.push_back(kp.visibility > 0 ? kp.x : 0.0);
      kps.push_back(kp.visibility > 0 ? kp.y : 0.0);
      kps.push_back(kp.visibility);
      if (kp.visibility > 0) ++labeled;
    }
    annotations.push_back({{"id", r.image_id},
                           {"image_id", r.image_id},
                           {"category_id", r.category_id},
                           {"keypoints", kps},
                           {"num_keypoints", labeled},
                           {"bbox", r.bbox},
                           {"area", r.bbox[2] * r.bbox[3]},
                           {"iscrowd", 0}});
  }

  // Categories: every species in the config, even when a split lacks one.
  nlohmann::json categories = nlohmann::json::array();
  std::vector<std::string> names;
  for (const auto& n : Skeleton::keypoint_names()) names.emplace_back(n);
  std::vector<std::pair<int, std::string>> cats;
  for (const auto& r : manifest.records) {
    if (std::find_if(cats.begin(), cats.end(), [&](const auto& c) {
          return c.first == r.category_id;
        }) == cats.end()) {
      cats.emplace_back(r.category_id, r.category);
    }
  }
  std::sort(cats.begin(), cats.end());
  for (const auto& [cid, cname] : cats) {
    categories.push_back({{"id", cid},
                          {"name", cname},
                          {"supercategory", "quadruped"},
                          {"keypoints", names},
                          {"skeleton", coco_skeleton_edges()}});
  }

  return {{"images", images}, {"annotations", annotations}, {"categories", categories}};
}

}  // namespace

void write_coco(const DatasetManifest& manifest, const std::filesystem::path& out_dir) {
  std::filesystem::create_directories(out_dir);
  for (const char* split : {"train", "val"}) {
    const nlohmann::json doc = coco_for_split(manifest, split);
    const auto path = out_dir / (std::string(split) + ".json");
    std::ofstream out(path);
    if (!out) throw PipelineError("write_coco: cannot write '" + path.string() + "'");
    out << doc.dump(2) << "\n";
  }
}

CocoFile load_coco(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ValidationError("coco: cannot open '" + path.string() + "'");
  nlohmann::json doc;
  try {
    in >> doc;
  } catch (const nlohmann::json::exception& e) {
    throw ValidationError("coco: parse failure: " + std::string(e.what()));
  }
  CocoFile f;
  for (const auto& ji : doc.at("images")) {
    f.images.push_back({ji.at("id").get<int>(), ji.at("file_name").get<std::string>(),
                        ji.at("width").get<int>(), ji.at("height").get<int>()});
  }
  for (const auto& ja : doc.at("annotations")) {
    CocoAnnotation a;
    a.id = ja.at("id").get<int>();
    a.image_id = ja.at("image_id").get<int>();
    a.category_id = ja.at("category_id").get<int>();
    a.keypoints = ja.at("keypoints").get<std::vector<double>>();
    a.num_keypoints = ja.at("num_keypoints").get<int>();
    const auto bbox = ja.at("bbox").get<std::vector<double>>();
    if (bbox.size() != 4) throw ValidationError("coco: bbox must have 4 values");
    std::copy(bbox.begin(), bbox.end(), a.bbox.begin());
    f.annotations.push_back(std::move(a));
  }
  if (doc.contains("categories") && !doc["categories"].empty()) {
    f.keypoint_names = doc["categories"][0].at("keypoints").get<std::vector<std::string>>();
  }
  return f;
}

}  // namespace quadsyn
