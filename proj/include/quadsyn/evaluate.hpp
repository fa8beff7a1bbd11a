#pragma once

#include <array>
#include <filesystem>
#include <string>
#include <vector>

#include <json.hpp>

#include "quadsyn/skeleton.hpp"

namespace quadsyn {

struct GroundTruthInstance {
  int image_id = 0;
  std::array<Keypoint2D, kKeypointCount> keypoints{};
  std::array<double, 4> bbox{};
};

struct GroundTruth {
  std::vector<GroundTruthInstance> instances;
  std::vector<std::string> keypoint_names;
};

// COCO-layout keypoint annotations (images / annotations / categories).
GroundTruth load_ground_truth(const std::filesystem::path& path);

struct Prediction {
  int image_id = 0;
  // x, y, confidence per canonical keypoint
  std::array<std::array<double, 3>, kKeypointCount> keypoints{};
};

// JSON array of {image_id, keypoints: flat 51-array}.
std::vector<Prediction> load_predictions(const std::filesystem::path& path);

struct PckReport {
  double threshold_ratio = 0.05;
  std::string normalization;  // human-readable rule echoed into every report
  std::vector<std::string> keypoint_names;
  std::vector<std::size_t> evaluated;  // per keypoint
  std::vector<std::size_t> correct;    // per keypoint
  std::vector<double> rates;           // correct / evaluated
  std::size_t total_evaluated = 0;
  std::size_t total_correct = 0;
  double mean_pck = 0.0;  // micro-average: total_correct / total_evaluated
  std::size_t instances_evaluated = 0;
  std::size_t instances_skipped = 0;  // zero-area bbox or no matching prediction
};

// A keypoint counts as correct when its Euclidean pixel error is at most
// threshold_ratio * max(bbox_w, bbox_h) of its instance (boundary inclusive).
// Only keypoints with visibility > 0 are evaluated.
PckReport compute_pck(const GroundTruth& gt, const std::vector<Prediction>& predictions,
                      double threshold_ratio = 0.05);

std::string format_report(const PckReport& report);
nlohmann::json report_to_json(const PckReport& report);
PckReport report_from_json(const nlohmann::json& doc);
PckReport load_report(const std::filesystem::path& path);
void save_report(const PckReport& report, const std::filesystem::path& path);

struct ReportDiff {
  std::vector<std::string> keypoint_names;
  std::vector<double> delta;  // b - a per keypoint rate
  double mean_delta = 0.0;    // average of the per-keypoint deltas
};

ReportDiff compare_reports(const PckReport& a, const PckReport& b);
std::string format_diff(const ReportDiff& diff);

}  // namespace quadsyn
