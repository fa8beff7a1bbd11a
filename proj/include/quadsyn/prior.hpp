#pragma once

#include <array>
#include <cstdint>
#include <filesystem>
#include <span>
#include <vector>

#include "quadsyn/skeleton.hpp"

namespace quadsyn {

inline constexpr std::size_t kLatentDim = 16;

// Dense layer, weights out x in row-major.
struct DenseLayer {
  std::size_t in = 0, out = 0;
  std::vector<double> w;
  std::vector<double> b;
};

// Dense variational autoencoder over 36-angle pose vectors. The encoder is a
// ReLU stack ending in linear mu / log-variance heads; the decoder mirrors the
// encoder widths back out to 36. Log-variance (not sigma) keeps the head
// unconstrained; sigma = exp(logvar / 2).
struct PriorModel {
  std::size_t input_dim = kAngleCount;
  std::size_t latent_dim = kLatentDim;
  std::vector<DenseLayer> encoder;   // ReLU after every layer
  DenseLayer mu_head, logvar_head;   // linear
  std::vector<DenseLayer> decoder;   // ReLU after all but the last (linear) layer
  std::uint64_t seed = 0;            // training seed echo
};

struct TrainConfig {
  double learning_rate = 0.001;
  double w_kl = 0.005;   // weight of the KL term
  double w_rec = 0.01;   // weight of the reconstruction term
  std::size_t epochs = 200;
  std::size_t batch_size = 128;
  std::uint64_t rng_seed = 0;
  double adam_beta1 = 0.9;
  double adam_beta2 = 0.999;
  double adam_epsilon = 1e-8;
  std::vector<std::size_t> hidden_widths = {256, 128};

  void validate(std::size_t corpus_size) const;  // throws ValidationError
};

struct LatentCode {
  std::array<double, kLatentDim> values{};
};

struct LossTerms {
  double total = 0.0;
  double kl = 0.0;
  double rec = 0.0;
};

// Gradient (or Adam moment) storage shaped like the trainable layers.
struct LayerGrads {
  std::vector<double> w, b;
};
struct PriorGradients {
  std::vector<LayerGrads> encoder;
  LayerGrads mu_head, logvar_head;
  std::vector<LayerGrads> decoder;
};

// Fresh model with He-uniform fan-in init drawn from the seeded generator.
PriorModel init_prior(const TrainConfig& config, std::uint64_t seed);

// Weighted ELBO-style loss over a batch:
//   rec   = mean_i ||A_i - Ahat_i||^2
//   kl    = mean_i -1/2 sum_j (1 + logvar - mu^2 - exp(logvar))
//   total = w_kl * kl + w_rec * rec
// with Ahat decoded from z = mu + eps * sigma, eps supplied per sample.
LossTerms elbo_loss(const PriorModel& model, std::span<const AngleVector> batch,
                    const TrainConfig& config,
                    const std::vector<std::array<double, kLatentDim>>& noise);

// Same loss, also filling analytic parameter gradients (backpropagation).
LossTerms elbo_loss_with_gradients(const PriorModel& model, std::span<const AngleVector> batch,
                                   const TrainConfig& config,
                                   const std::vector<std::array<double, kLatentDim>>& noise,
                                   PriorGradients& grads);

struct TrainReport {
  std::vector<double> epoch_total;  // mean total loss per epoch
  std::vector<double> epoch_rec;    // mean reconstruction loss per epoch
};

// Full training run: `epochs` passes of seeded-shuffle mini-batches with Adam
// updates. The last short batch is used as-is. Bit-reproducible for a fixed
// (corpus, config) and kernel selection.
PriorModel train_prior(std::span<const AngleVector> corpus, const TrainConfig& config,
                       TrainReport* report = nullptr);

struct Moments {
  std::array<double, kLatentDim> mu{};
  std::array<double, kLatentDim> logvar{};
};

Moments encode(const PriorModel& model, const AngleVector& pose);

// Decoder forward pass without the angle-domain clamp.
std::array<double, kAngleCount> decode_raw(const PriorModel& model, const LatentCode& z);

// Decoder output clamped into [-pi, pi] (the dataset boundary).
AngleVector decode(const PriorModel& model, const LatentCode& z);

// JSON weight dump with layer shapes, seed, and config echo; loader validates
// the shape chain and the encoder/decoder mirror structure.
void save_prior(const PriorModel& model, const TrainConfig& config, const std::filesystem::path& path);
struct LoadedPrior {
  PriorModel model;
  TrainConfig config;
};
LoadedPrior load_prior(const std::filesystem::path& path);

// Pose corpus CSV: one row per pose, 36 comma-separated radians, optional header.
std::vector<AngleVector> load_corpus_csv(const std::filesystem::path& path);
void save_corpus_csv(std::span<const AngleVector> corpus, const std::filesystem::path& path);

}  // namespace quadsyn
