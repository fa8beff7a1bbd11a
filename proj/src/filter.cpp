#include "quadsyn/filter.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>

#include <json.hpp>

#include "quadsyn/error.hpp"
#include "quadsyn/rng.hpp"

namespace quadsyn {

double empirical_quantile(std::span<const double> sorted, double p) {
  if (sorted.empty()) throw ValidationError("empirical_quantile: empty sample");
  if (!(p >= 0.0 && p <= 1.0)) throw ValidationError("empirical_quantile: p outside [0, 1]");
  const double h = p * static_cast<double>(sorted.size() - 1);
  const std::size_t lo = static_cast<std::size_t>(h);
  if (lo + 1 >= sorted.size()) return sorted.back();
  const double frac = h - static_cast<double>(lo);
  return sorted[lo] + frac * (sorted[lo + 1] - sorted[lo]);
}

FilterRanges calibrate_filter(const PriorModel& model, std::size_t sample_count,
                              double exclusion_fraction, std::uint64_t rng_seed) {
  if (sample_count < 1000) {
    throw ValidationError("calibrate_filter: sample_count must be >= 1000");
  }
  if (!(exclusion_fraction > 0.0 && exclusion_fraction < 1.0)) {
    throw ValidationError("calibrate_filter: exclusion_fraction must lie in (0, 1)");
  }

  Rng rng(rng_seed);
  std::vector<std::vector<double>> per_angle(kAngleCount);
  for (auto& v : per_angle) v.reserve(sample_count);

  LatentCode z;
  for (std::size_t s = 0; s < sample_count; ++s) {
    for (double& v : z.values) v = rng.normal();
    const AngleVector pose = decode(model, z);
    for (std::size_t j = 0; j < kAngleCount; ++j) {
      if (!std::isfinite(pose.values[j])) {
        throw PipelineError("calibrate_filter: decoder produced a non-finite angle");
      }
      per_angle[j].push_back(pose.values[j]);
    }
  }

  FilterRanges out;
  out.calibration = {sample_count, exclusion_fraction, 1.0, rng_seed};
  const double tail = exclusion_fraction / 2.0;
  for (std::size_t j = 0; j < kAngleCount; ++j) {
    std::sort(per_angle[j].begin(), per_angle[j].end());
    out.ranges[j] = {empirical_quantile(per_angle[j], tail),
                     empirical_quantile(per_angle[j], 1.0 - tail)};
  }
  return out;
}

bool accept(const FilterRanges& ranges, const AngleVector& pose) {
  for (std::size_t j = 0; j < kAngleCount; ++j) {
    const auto& [lo, hi] = ranges.ranges[j];
    if (pose.values[j] < lo || pose.values[j] > hi) return false;
  }
  return true;
}

void SamplerConfig::validate() const {
  if (!(variance > 0.0)) throw ValidationError("sampler config: variance must be > 0");
  if (max_attempts_per_pose < 1) {
    throw ValidationError("sampler config: max_attempts_per_pose must be >= 1");
  }
}

SampleResult sample_valid_poses(const PriorModel& model, const FilterRanges& ranges,
                                const SamplerConfig& config, std::size_t n) {
  if (n < 1) throw ValidationError("sample_valid_poses: n must be >= 1");
  config.validate();

  Rng rng(config.rng_seed);
  const double sigma = std::sqrt(config.variance);
  const std::size_t budget = n * config.max_attempts_per_pose;

  SampleResult result;
  result.poses.reserve(n);
  LatentCode z;
  while (result.poses.size() < n && result.attempts < budget) {
    ++result.attempts;
    for (double& v : z.values) v = rng.normal() * sigma;
    AngleVector pose = decode(model, z);
    if (accept(ranges, pose)) {
      result.poses.push_back(pose);
    }
  }
  result.acceptance_rate =
      result.attempts == 0 ? 0.0
                           : static_cast<double>(result.poses.size()) / static_cast<double>(result.attempts);
  result.complete = result.poses.size() == n;
  return result;
}

void save_ranges(const FilterRanges& ranges, const std::filesystem::path& path) {
  nlohmann::json doc;
  doc["format"] = "quadsyn-filter-ranges";
  doc["version"] = 1;
  doc["ranges"] = nlohmann::json::array();
  for (const auto& [lo, hi] : ranges.ranges) doc["ranges"].push_back({lo, hi});
  doc["calibration"] = {{"sample_count", ranges.calibration.sample_count},
                        {"exclusion_fraction", ranges.calibration.exclusion_fraction},
                        {"sampling_variance", ranges.calibration.sampling_variance},
                        {"rng_seed", ranges.calibration.rng_seed}};
  std::ofstream out(path);
  if (!out) throw ValidationError("save_ranges: cannot write '" + path.string() + "'");
  out << doc.dump(2) << "\n";
}

FilterRanges load_ranges(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ValidationError("load_ranges: cannot open '" + path.string() + "'");
  nlohmann::json doc;
  try {
    in >> doc;
  } catch (const nlohmann::json::exception& e) {
    throw ValidationError("load_ranges: parse failure: " + std::string(e.what()));
  }
  if (doc.value("format", "") != "quadsyn-filter-ranges") {
    throw ValidationError("load_ranges: not a filter ranges file");
  }
  FilterRanges out;
  const auto& jr = doc.at("ranges");
  if (!jr.is_array() || jr.size() != kAngleCount) {
    throw ValidationError("load_ranges: expected 36 [low, high] pairs");
  }
  for (std::size_t j = 0; j < kAngleCount; ++j) {
    const double lo = jr[j].at(0).get<double>();
    const double hi = jr[j].at(1).get<double>();
    if (!(lo <= hi)) throw ValidationError("load_ranges: low > high at index " + std::to_string(j));
    out.ranges[j] = {lo, hi};
  }
  const auto& jc = doc.at("calibration");
  out.calibration.sample_count = jc.at("sample_count").get<std::size_t>();
  out.calibration.exclusion_fraction = jc.at("exclusion_fraction").get<double>();
  out.calibration.sampling_variance = jc.at("sampling_variance").get<double>();
  out.calibration.rng_seed = jc.at("rng_seed").get<std::uint64_t>();
  return out;
}

}  // namespace quadsyn
