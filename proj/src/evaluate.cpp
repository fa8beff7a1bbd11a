#include "quadsyn/evaluate.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <map>
#include <set>
#include <sstream>

#include "quadsyn/error.hpp"

namespace quadsyn {

namespace {

nlohmann::json parse_file(const std::filesystem::path& path, const char* what) {
  std::ifstream in(path);
  if (!in) throw ValidationError(std::string(what) + ": cannot open '" + path.string() + "'");
  try {
    nlohmann::json doc;
    in >> doc;
    return doc;
  } catch (const nlohmann::json::exception& e) {
    throw ValidationError(std::string(what) + ": parse failure in '" + path.string() + "': " + e.what());
  }
}

}  // namespace

GroundTruth load_ground_truth(const std::filesystem::path& path) {
  const nlohmann::json doc = parse_file(path, "ground truth");
  GroundTruth gt;
  if (doc.contains("categories") && doc["categories"].is_array() && !doc["categories"].empty() &&
      doc["categories"][0].contains("keypoints")) {
    gt.keypoint_names = doc["categories"][0]["keypoints"].get<std::vector<std::string>>();
  } else {
    for (auto n : Skeleton::keypoint_names()) gt.keypoint_names.emplace_back(n);
  }
  if (gt.keypoint_names.size() != kKeypointCount) {
    throw ValidationError("ground truth: expected 17 keypoint names");
  }
  if (!doc.contains("annotations") || !doc["annotations"].is_array()) {
    throw ValidationError("ground truth: missing 'annotations' array");
  }
  for (const auto& ja : doc["annotations"]) {
    GroundTruthInstance inst;
    inst.image_id = ja.at("image_id").get<int>();
    const auto kps = ja.at("keypoints").get<std::vector<double>>();
    if (kps.size() != kKeypointCount * 3) {
      throw ValidationError("ground truth: keypoints array must have 51 values");
    }
    for (std::size_t k = 0; k < kKeypointCount; ++k) {
      inst.keypoints[k] = {kps[3 * k], kps[3 * k + 1], static_cast<int>(kps[3 * k + 2])};
    }
    const auto bbox = ja.at("bbox").get<std::vector<double>>();
    if (bbox.size() != 4) throw ValidationError("ground truth: bbox must be [x, y, w, h]");
    std::copy(bbox.begin(), bbox.end(), inst.bbox.begin());
    gt.instances.push_back(inst);
  }
  return gt;
}

std::vector<Prediction> load_predictions(const std::filesystem::path& path) {
  const nlohmann::json doc = parse_file(path, "predictions");
  if (!doc.is_array()) throw ValidationError("predictions: expected a JSON array");
  std::vector<Prediction> preds;
  std::set<int> seen;
  for (const auto& jp : doc) {
    Prediction p;
    p.image_id = jp.at("image_id").get<int>();
    if (!seen.insert(p.image_id).second) {
      throw ValidationError("predictions: duplicate image_id " + std::to_string(p.image_id));
    }
    const auto kps = jp.at("keypoints").get<std::vector<double>>();
    if (kps.size() != kKeypointCount * 3) {
      throw ValidationError("predictions: keypoints array must have 51 values (image_id " +
                            std::to_string(p.image_id) + ")");
    }
    for (std::size_t k = 0; k < kKeypointCount; ++k) {
      p.keypoints[k] = {kps[3 * k], kps[3 * k + 1], kps[3 * k + 2]};
      if (!std::isfinite(p.keypoints[k][0]) || !std::isfinite(p.keypoints[k][1])) {
        throw ValidationError("predictions: non-finite coordinate (image_id " +
                              std::to_string(p.image_id) + ")");
      }
    }
    preds.push_back(p);
  }
  return preds;
}

PckReport compute_pck(const GroundTruth& gt, const std::vector<Prediction>& predictions,
                      double threshold_ratio) {
  if (!(threshold_ratio > 0.0)) throw ValidationError("compute_pck: threshold_ratio must be > 0");

  std::set<int> gt_ids;
  for (const auto& inst : gt.instances) {
    if (!gt_ids.insert(inst.image_id).second) {
      throw ValidationError("compute_pck: multiple instances for image_id " +
                            std::to_string(inst.image_id) + " are not supported");
    }
  }
  std::map<int, const Prediction*> by_id;
  for (const auto& p : predictions) {
    if (!gt_ids.count(p.image_id)) {
      throw ValidationError("compute_pck: prediction image_id " + std::to_string(p.image_id) +
                            " has no ground-truth instance");
    }
    by_id[p.image_id] = &p;
  }

  PckReport r;
  r.threshold_ratio = threshold_ratio;
  {
    std::ostringstream norm;
    norm << "error <= " << threshold_ratio << " * max(bbox_w, bbox_h), boundary inclusive";
    r.normalization = norm.str();
  }
  r.keypoint_names = gt.keypoint_names;
  r.evaluated.assign(kKeypointCount, 0);
  r.correct.assign(kKeypointCount, 0);

  for (const auto& inst : gt.instances) {
    auto it = by_id.find(inst.image_id);
    if (it == by_id.end()) {
      ++r.instances_skipped;
      continue;
    }
    const double norm = threshold_ratio * std::max(inst.bbox[2], inst.bbox[3]);
    if (!(norm > 0.0)) {
      ++r.instances_skipped;  // zero-area bbox
      continue;
    }
    ++r.instances_evaluated;
    for (std::size_t k = 0; k < kKeypointCount; ++k) {
      if (inst.keypoints[k].visibility <= 0) continue;
      ++r.evaluated[k];
      const double dx = it->second->keypoints[k][0] - inst.keypoints[k].x;
      const double dy = it->second->keypoints[k][1] - inst.keypoints[k].y;
      if (std::sqrt(dx * dx + dy * dy) <= norm) ++r.correct[k];
    }
  }

  r.rates.assign(kKeypointCount, 0.0);
  for (std::size_t k = 0; k < kKeypointCount; ++k) {
    r.total_evaluated += r.evaluated[k];
    r.total_correct += r.correct[k];
    r.rates[k] = r.evaluated[k] ? static_cast<double>(r.correct[k]) / r.evaluated[k] : 0.0;
  }
  r.mean_pck = r.total_evaluated
                   ? static_cast<double>(r.total_correct) / static_cast<double>(r.total_evaluated)
                   : 0.0;
  return r;
}

std::string format_report(const PckReport& r) {
  std::ostringstream out;
  char line[128];
  out << "PCK@" << r.threshold_ratio << "  (" << r.normalization << ")\n";
  out << "keypoint            evaluated  correct    rate\n";
  for (std::size_t k = 0; k < r.keypoint_names.size(); ++k) {
    std::snprintf(line, sizeof(line), "%-18s %9zu %8zu  %6.4f\n", r.keypoint_names[k].c_str(),
                  r.evaluated[k], r.correct[k], r.rates[k]);
    out << line;
  }
  std::snprintf(line, sizeof(line), "%-18s %9zu %8zu  %6.4f\n", "mean (micro)",
                r.total_evaluated, r.total_correct, r.mean_pck);
  out << line;
  out << "instances evaluated: " << r.instances_evaluated
      << ", skipped: " << r.instances_skipped << "\n";
  return out.str();
}

nlohmann::json report_to_json(const PckReport& r) {
  return {{"format", "quadsyn-pck-report"},
          {"threshold_ratio", r.threshold_ratio},
          {"normalization", r.normalization},
          {"keypoint_names", r.keypoint_names},
          {"evaluated", r.evaluated},
          {"correct", r.correct},
          {"rates", r.rates},
          {"total_evaluated", r.total_evaluated},
          {"total_correct", r.total_correct},
          {"mean_pck", r.mean_pck},
          {"instances_evaluated", r.instances_evaluated},
          {"instances_skipped", r.instances_skipped}};
}

PckReport report_from_json(const nlohmann::json& doc) {
  if (doc.value("format", "") != "quadsyn-pck-report") {
    throw ValidationError("report: not a PCK report file");
  }
  PckReport r;
  r.threshold_ratio = doc.at("threshold_ratio").get<double>();
  r.normalization = doc.at("normalization").get<std::string>();
  r.keypoint_names = doc.at("keypoint_names").get<std::vector<std::string>>();
  r.evaluated = doc.at("evaluated").get<std::vector<std::size_t>>();
  r.correct = doc.at("correct").get<std::vector<std::size_t>>();
  r.rates = doc.at("rates").get<std::vector<double>>();
  r.total_evaluated = doc.at("total_evaluated").get<std::size_t>();
  r.total_correct = doc.at("total_correct").get<std::size_t>();
  r.mean_pck = doc.at("mean_pck").get<double>();
  r.instances_evaluated = doc.at("instances_evaluated").get<std::size_t>();
  r.instances_skipped = doc.at("instances_skipped").get<std::size_t>();
  return r;
}

PckReport load_report(const std::filesystem::path& path) {
  return report_from_json(parse_file(path, "report"));
}

void save_report(const PckReport& report, const std::filesystem::path& path) {
  std::ofstream out(path);
  if (!out) throw PipelineError("report: cannot write '" + path.string() + "'");
  out << report_to_json(report).dump(2) << "\n";
}

ReportDiff compare_reports(const PckReport& a, const PckReport& b) {
  if (a.keypoint_names != b.keypoint_names) {
    std::set<std::string> sa(a.keypoint_names.begin(), a.keypoint_names.end());
    std::set<std::string> sb(b.keypoint_names.begin(), b.keypoint_names.end());
    std::vector<std::string> diff;
    std::set_symmetric_difference(sa.begin(), sa.end(), sb.begin(), sb.end(),
                                  std::back_inserter(diff));
    std::string msg = "compare_reports: keypoint sets differ:";
    if (diff.empty()) {
      msg += " same names, different order";
    } else {
      for (const auto& d : diff) msg += " " + d;
    }
    throw ValidationError(msg);
  }
  ReportDiff d;
  d.keypoint_names = a.keypoint_names;
  d.delta.resize(a.rates.size());
  double sum = 0.0;
  for (std::size_t k = 0; k < a.rates.size(); ++k) {
    d.delta[k] = b.rates[k] - a.rates[k];
    sum += d.delta[k];
  }
  d.mean_delta = a.rates.empty() ? 0.0 : sum / static_cast<double>(a.rates.size());
  return d;
}

std::string format_diff(const ReportDiff& diff) {
  std::ostringstream out;
  char line[96];
  out << "keypoint              delta (b - a)\n";
  for (std::size_t k = 0; k < diff.keypoint_names.size(); ++k) {
    std::snprintf(line, sizeof(line), "%-18s %+12.4f\n", diff.keypoint_names[k].c_str(),
                  diff.delta[k]);
    out << line;
  }
  std::snprintf(line, sizeof(line), "%-18s %+12.4f\n", "mean delta", diff.mean_delta);
  out << line;
  return out.str();
}

}  // namespace quadsyn
