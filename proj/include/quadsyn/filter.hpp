#pragma once

#include <array>
#include <cstdint>
#include <filesystem>
#include <span>
#include <utility>
#include <vector>

#include "quadsyn/prior.hpp"

namespace quadsyn {

struct CalibrationMeta {
  std::size_t sample_count = 0;
  double exclusion_fraction = 0.05;
  double sampling_variance = 1.0;
  std::uint64_t rng_seed = 0;
};

// Per-angle closed acceptance intervals, calibrated by tail-trimming decoded
// samples. A pose is rejected as soon as any single angle leaves its interval.
struct FilterRanges {
  std::array<std::pair<double, double>, kAngleCount> ranges{};
  CalibrationMeta calibration;
};

// Empirical quantile of an ascending-sorted sample with linear interpolation
// between closest ranks: for p in [0, 1], h = p * (n - 1), the result is
// v[floor(h)] + frac(h) * (v[floor(h) + 1] - v[floor(h)]).
double empirical_quantile(std::span<const double> sorted, double p);

// Decodes sample_count latents drawn from N(0, I) and records, per angle, the
// [f/2, 1 - f/2] quantile interval where f = exclusion_fraction (the trimmed
// tails are "far from the mean"). Deterministic for a fixed seed.
FilterRanges calibrate_filter(const PriorModel& model, std::size_t sample_count,
                              double exclusion_fraction, std::uint64_t rng_seed);

// True iff every component lies inside its closed interval.
bool accept(const FilterRanges& ranges, const AngleVector& pose);

struct SamplerConfig {
  double variance = 2.0;  // latent sampling variance (sigma^2), N(0, variance*I)
  std::size_t max_attempts_per_pose = 100;
  std::uint64_t rng_seed = 0;

  void validate() const;
};

struct SampleResult {
  std::vector<AngleVector> poses;
  std::size_t attempts = 0;
  double acceptance_rate = 0.0;
  bool complete = false;  // false when the attempt budget ran out first
};

// Rejection-samples decoded poses until n are accepted or the attempt budget
// (n * max_attempts_per_pose) is exhausted; an incomplete result carries the
// poses collected so far and the observed acceptance rate.
SampleResult sample_valid_poses(const PriorModel& model, const FilterRanges& ranges,
                                const SamplerConfig& config, std::size_t n);

void save_ranges(const FilterRanges& ranges, const std::filesystem::path& path);
FilterRanges load_ranges(const std::filesystem::path& path);

}  // namespace quadsyn
