// quadsyn command-line tool: wires the pose-prior pipeline end to end.
// Subcommand layout: gait-corpus, train-prior, calibrate-filter, sample-poses,
// generate, stylize, eval-pck, compare, overlay.
//
// Exit codes: 0 success, 1 validation/usage, 2 runtime failure.
// Progress and rate logs go to stderr; machine-readable output goes to files
// or stdout only.

#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "quadsyn/dataset.hpp"
#include "quadsyn/error.hpp"
#include "quadsyn/evaluate.hpp"
#include "quadsyn/kernels.hpp"

namespace fs = std::filesystem;
using namespace quadsyn;

namespace {

fs::path default_out_dir() {
  if (const char* env = std::getenv("QUADSYN_OUTPUT_DIR")) return fs::path(env);
  return fs::path(".");
}

Keypoints2D keypoints_from_coco(const CocoAnnotation& ann) {
  Keypoints2D kps;
  for (std::size_t k = 0; k < kKeypointCount; ++k) {
    kps.points[k] = {ann.keypoints[3 * k], ann.keypoints[3 * k + 1],
                     static_cast<int>(ann.keypoints[3 * k + 2])};
  }
  kps.bbox = ann.bbox;
  return kps;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"quadsyn: synthetic quadruped pose dataset toolkit"};
  app.require_subcommand(1);

  // gait-corpus
  auto* gait = app.add_subcommand("gait-corpus", "Write a procedural gait pose corpus CSV");
  std::size_t gait_n = 600;
  std::uint64_t gait_seed = 1;
  std::string gait_out = (default_out_dir() / "poses.csv").string();
  gait->add_option("--n", gait_n, "Number of poses");
  gait->add_option("--seed", gait_seed, "RNG seed");
  gait->add_option("--out", gait_out, "Output CSV path");

  // train-prior
  auto* train = app.add_subcommand("train-prior", "Train the pose prior on a corpus CSV");
  std::string train_corpus;
  TrainConfig tc;
  std::string train_out = (default_out_dir() / "model.json").string();
  std::vector<std::size_t> hidden = {256, 128};
  train->add_option("--corpus", train_corpus, "Pose corpus CSV")->required();
  train->add_option("--epochs", tc.epochs, "Training epochs");
  train->add_option("--batch", tc.batch_size, "Mini-batch size");
  train->add_option("--lr", tc.learning_rate, "Adam learning rate");
  train->add_option("--w-kl", tc.w_kl, "KL term weight");
  train->add_option("--w-rec", tc.w_rec, "Reconstruction term weight");
  train->add_option("--seed", tc.rng_seed, "RNG seed");
  train->add_option("--hidden", hidden, "Encoder hidden widths");
  train->add_option("--out", train_out, "Output model path");

  // calibrate-filter
  auto* calib = app.add_subcommand("calibrate-filter", "Calibrate per-angle acceptance ranges");
  std::string calib_model;
  std::size_t calib_samples = 10000;
  double calib_exclude = 0.05;
  std::uint64_t calib_seed = 0;
  std::string calib_out = (default_out_dir() / "ranges.json").string();
  calib->add_option("--model", calib_model, "Trained prior model")->required();
  calib->add_option("--samples", calib_samples, "Decoded sample count (>= 1000)");
  calib->add_option("--exclude", calib_exclude, "Total excluded fraction, split per tail");
  calib->add_option("--seed", calib_seed, "RNG seed");
  calib->add_option("--out", calib_out, "Output ranges path");

  // sample-poses
  auto* sample = app.add_subcommand("sample-poses", "Rejection-sample filtered poses to CSV");
  std::string sample_model, sample_ranges;
  std::size_t sample_n = 100;
  SamplerConfig sampler_cfg;
  std::string sample_out = (default_out_dir() / "sampled_poses.csv").string();
  sample->add_option("--model", sample_model, "Trained prior model")->required();
  sample->add_option("--ranges", sample_ranges, "Calibrated filter ranges")->required();
  sample->add_option("--n", sample_n, "Poses to collect");
  sample->add_option("--variance", sampler_cfg.variance, "Latent sampling variance");
  sample->add_option("--max-attempts", sampler_cfg.max_attempts_per_pose,
                     "Attempt budget per requested pose");
  sample->add_option("--seed", sampler_cfg.rng_seed, "RNG seed");
  sample->add_option("--out", sample_out, "Output CSV path");

  // generate
  auto* gen = app.add_subcommand("generate", "Build a full synthetic dataset");
  std::string gen_config;
  std::uint64_t gen_seed = 0;
  bool gen_seed_set = false;
  int gen_workers = 0;
  std::string gen_out;
  gen->add_option("--config", gen_config, "Generation config JSON")->required();
  gen->add_option("--seed", gen_seed, "Override master seed")->each([&](const std::string&) {
    gen_seed_set = true;
  });
  gen->add_option("--workers", gen_workers, "Worker thread count");
  gen->add_option("--out", gen_out, "Override output directory");

  // stylize
  auto* sty = app.add_subcommand("stylize", "Composite, stylize and fuse one image");
  std::string sty_content, sty_mask, sty_background, sty_external, sty_out;
  double sty_alpha = 0.5;
  int sty_ox = 0, sty_oy = 0;
  sty->add_option("--content", sty_content, "Foreground render PNG")->required();
  sty->add_option("--mask", sty_mask, "Foreground mask PNG")->required();
  sty->add_option("--background", sty_background, "Background PNG/JPEG")->required();
  sty->add_option("--alpha", sty_alpha, "Fusion rate in [0, 1]");
  sty->add_option("--offset-x", sty_ox, "Placement offset x");
  sty->add_option("--offset-y", sty_oy, "Placement offset y");
  sty->add_option("--stylized", sty_external, "Pre-stylized image (skips the stats stylizer)");
  sty->add_option("--out", sty_out, "Output PNG")->required();

  // eval-pck
  auto* eval = app.add_subcommand("eval-pck", "Score predictions with PCK");
  std::string eval_gt, eval_pred, eval_json;
  double eval_threshold = 0.05;
  eval->add_option("--gt", eval_gt, "Ground-truth COCO annotation file")->required();
  eval->add_option("--pred", eval_pred, "Prediction JSON file")->required();
  eval->add_option("--threshold", eval_threshold, "PCK threshold ratio");
  eval->add_option("--json", eval_json, "Also write the report as JSON");

  // compare
  auto* cmp = app.add_subcommand("compare", "Diff two PCK reports");
  std::string cmp_a, cmp_b;
  cmp->add_option("--a", cmp_a, "Baseline report JSON")->required();
  cmp->add_option("--b", cmp_b, "Candidate report JSON")->required();

  // overlay
  auto* ov = app.add_subcommand("overlay", "Draw keypoints and limbs over a dataset image");
  std::string ov_ann, ov_images, ov_out;
  int ov_id = 1;
  ov->add_option("--annotations", ov_ann, "COCO annotation file")->required();
  ov->add_option("--images-dir", ov_images, "Directory holding the split's images")->required();
  ov->add_option("--id", ov_id, "Image id to draw");
  ov->add_option("--out", ov_out, "Output PNG")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 1;
  }

  try {
    if (*gait) {
      const auto corpus = procedural_gait_corpus(gait_n, gait_seed);
      save_corpus_csv(corpus, gait_out);
      std::cerr << "wrote " << corpus.size() << " poses to " << gait_out << "\n";
    } else if (*train) {
      tc.hidden_widths = hidden;
      const auto corpus = load_corpus_csv(train_corpus);
      std::cerr << "training on " << corpus.size() << " poses ("
                << kernels::isa_name(kernels::active_isa()) << " kernels)\n";
      TrainReport report;
      const PriorModel model = train_prior(corpus, tc, &report);
      save_prior(model, tc, train_out);
      std::cerr << "epoch 1 loss " << report.epoch_total.front() << ", final loss "
                << report.epoch_total.back() << "; model written to " << train_out << "\n";
    } else if (*calib) {
      const auto lp = load_prior(calib_model);
      const FilterRanges ranges =
          calibrate_filter(lp.model, calib_samples, calib_exclude, calib_seed);
      save_ranges(ranges, calib_out);
      std::cerr << "calibrated " << calib_samples << " samples, excluded fraction "
                << calib_exclude << "; ranges written to " << calib_out << "\n";
    } else if (*sample) {
      const auto lp = load_prior(sample_model);
      const FilterRanges ranges = load_ranges(sample_ranges);
      const SampleResult result = sample_valid_poses(lp.model, ranges, sampler_cfg, sample_n);
      std::cerr << "acceptance rate " << result.acceptance_rate << " (" << result.poses.size()
                << "/" << result.attempts << " attempts)\n";
      if (!result.poses.empty()) save_corpus_csv(result.poses, sample_out);
      if (!result.complete) {
        std::cerr << "attempt budget exhausted: collected " << result.poses.size() << " of "
                  << sample_n << " poses\n";
        return 2;
      }
      std::cerr << "wrote " << result.poses.size() << " poses to " << sample_out << "\n";
    } else if (*gen) {
      GenerationConfig config = load_generation_config(gen_config);
      if (gen_seed_set) config.master_seed = gen_seed;
      if (gen_workers > 0) config.workers = gen_workers;
      if (!gen_out.empty()) config.output_dir = gen_out;
      const DatasetManifest manifest = build_dataset(config);
      std::cerr << "generated " << manifest.records.size() << " images (" << manifest.train_count
                << " train / " << manifest.val_count << " val) into "
                << config.output_dir.string() << "\n";
    } else if (*sty) {
      const RasterImage content = load_png(sty_content);
      const AnimalMask mask = load_mask_png(sty_mask);
      const RasterImage background = load_image(sty_background);
      const RasterImage composited = composite(content, mask, background, sty_ox, sty_oy);
      const AnimalMask placed = shift_mask(mask, sty_ox, sty_oy, background.width, background.height);
      RasterImage stylized;
      if (!sty_external.empty()) {
        stylized = load_image(sty_external);
      } else {
        stylized = transfer_stats(composited, placed, background);
      }
      save_png(fuse(composited, stylized, sty_alpha), sty_out);
      std::cerr << "stylized image written to " << sty_out << "\n";
    } else if (*eval) {
      const GroundTruth gt = load_ground_truth(eval_gt);
      const auto preds = load_predictions(eval_pred);
      const PckReport report = compute_pck(gt, preds, eval_threshold);
      std::cout << format_report(report);
      std::printf("mean PCK %.3f\n", report.mean_pck);
      if (!eval_json.empty()) save_report(report, eval_json);
    } else if (*cmp) {
      const PckReport a = load_report(cmp_a);
      const PckReport b = load_report(cmp_b);
      std::cout << format_diff(compare_reports(a, b));
    } else if (*ov) {
      const CocoFile coco = load_coco(ov_ann);
      const CocoAnnotation* ann = nullptr;
      const CocoImage* img_entry = nullptr;
      for (const auto& a : coco.annotations) {
        if (a.image_id == ov_id) ann = &a;
      }
      for (const auto& i : coco.images) {
        if (i.id == ov_id) img_entry = &i;
      }
      if (!ann || !img_entry) {
        throw ValidationError("overlay: image id " + std::to_string(ov_id) +
                              " not present in " + ov_ann);
      }
      const RasterImage base = load_image(fs::path(ov_images) / img_entry->file_name);
      save_png(draw_overlay(base, keypoints_from_coco(*ann)), ov_out);
      std::cerr << "overlay written to " << ov_out << "\n";
    }
  } catch (const ValidationError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  } catch (const PipelineError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
  return 0;
}
