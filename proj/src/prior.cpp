#include "quadsyn/prior.hpp"

#include <cmath>
#include <charconv>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <string>

#include <json.hpp>

#include "quadsyn/error.hpp"
#include "quadsyn/kernels.hpp"
#include "quadsyn/rng.hpp"

namespace quadsyn {

namespace {

using kernels::add_row_vector;
using kernels::col_sums;
using kernels::gemm_nn;
using kernels::gemm_nt;
using kernels::gemm_tn;
using kernels::relu_backward;
using kernels::relu_forward;

void validate_model(const PriorModel& m) {
  if (m.encoder.empty() || m.decoder.empty()) {
    throw ValidationError("prior model: empty encoder or decoder stack");
  }
  auto check_layer = [](const DenseLayer& l, const char* name) {
    if (l.w.size() != l.in * l.out || l.b.size() != l.out) {
      throw ValidationError(std::string("prior model: layer '") + name + "' has inconsistent shapes");
    }
  };
  std::size_t width = m.input_dim;
  for (const DenseLayer& l : m.encoder) {
    if (l.in != width) throw ValidationError("prior model: encoder shape chain broken");
    check_layer(l, "encoder");
    width = l.out;
  }
  if (m.mu_head.in != width || m.logvar_head.in != width ||
      m.mu_head.out != m.latent_dim || m.logvar_head.out != m.latent_dim) {
    throw ValidationError("prior model: head shapes do not match encoder/latent dims");
  }
  check_layer(m.mu_head, "mu_head");
  check_layer(m.logvar_head, "logvar_head");
  // Mirror structure: decoder hidden widths are the encoder's reversed.
  if (m.decoder.size() != m.encoder.size() + 1) {
    throw ValidationError("prior model: decoder must mirror encoder widths");
  }
  width = m.latent_dim;
  for (std::size_t i = 0; i < m.decoder.size(); ++i) {
    const DenseLayer& l = m.decoder[i];
    if (l.in != width) throw ValidationError("prior model: decoder shape chain broken");
    check_layer(l, "decoder");
    const std::size_t expected =
        i + 1 < m.decoder.size() ? m.encoder[m.encoder.size() - 1 - i].out : m.input_dim;
    if (l.out != expected) {
      throw ValidationError("prior model: decoder widths are not the mirror of the encoder");
    }
    width = l.out;
  }
}

// Y[batch x out] = X[batch x in] * W^T + b
void dense_forward(const DenseLayer& l, const std::vector<double>& x, std::size_t batch,
                   std::vector<double>& y) {
  y.resize(batch * l.out);
  gemm_nt(batch, l.out, l.in, x.data(), l.w.data(), y.data());
  add_row_vector(batch, l.out, y.data(), l.b.data());
}

struct ForwardPass {
  std::size_t batch = 0;
  std::vector<double> x;                       // batch x input_dim
  std::vector<std::vector<double>> enc_pre;    // per encoder layer
  std::vector<std::vector<double>> enc_act;
  std::vector<double> mu, logvar, sigma, eps, z;  // batch x latent
  std::vector<std::vector<double>> dec_pre;    // per decoder layer (last = xhat)
  std::vector<std::vector<double>> dec_act;    // ReLU outputs, all but last layer
};

void run_forward(const PriorModel& m, std::span<const AngleVector> batch,
                 const std::vector<std::array<double, kLatentDim>>& noise, ForwardPass& f) {
  const std::size_t b = batch.size();
  f.batch = b;
  f.x.resize(b * m.input_dim);
  for (std::size_t i = 0; i < b; ++i) {
    for (std::size_t j = 0; j < m.input_dim; ++j) f.x[i * m.input_dim + j] = batch[i].values[j];
  }

  f.enc_pre.resize(m.encoder.size());
  f.enc_act.resize(m.encoder.size());
  const std::vector<double>* cur = &f.x;
  for (std::size_t e = 0; e < m.encoder.size(); ++e) {
    dense_forward(m.encoder[e], *cur, b, f.enc_pre[e]);
    f.enc_act[e].resize(f.enc_pre[e].size());
    relu_forward(f.enc_pre[e].size(), f.enc_pre[e].data(), f.enc_act[e].data());
    cur = &f.enc_act[e];
  }

  dense_forward(m.mu_head, *cur, b, f.mu);
  dense_forward(m.logvar_head, *cur, b, f.logvar);

  const std::size_t nz = b * m.latent_dim;
  f.sigma.resize(nz);
  f.eps.resize(nz);
  f.z.resize(nz);
  for (std::size_t i = 0; i < b; ++i) {
    for (std::size_t j = 0; j < m.latent_dim; ++j) {
      const std::size_t idx = i * m.latent_dim + j;
      f.eps[idx] = noise[i][j];
      f.sigma[idx] = std::exp(0.5 * f.logvar[idx]);
      f.z[idx] = f.mu[idx] + f.eps[idx] * f.sigma[idx];
    }
  }

  f.dec_pre.resize(m.decoder.size());
  f.dec_act.resize(m.decoder.size());
  cur = &f.z;
  for (std::size_t d = 0; d < m.decoder.size(); ++d) {
    dense_forward(m.decoder[d], *cur, b, f.dec_pre[d]);
    if (d + 1 < m.decoder.size()) {
      f.dec_act[d].resize(f.dec_pre[d].size());
      relu_forward(f.dec_pre[d].size(), f.dec_pre[d].data(), f.dec_act[d].data());
      cur = &f.dec_act[d];
    }
  }
}

LossTerms loss_from_forward(const PriorModel& m, const ForwardPass& f, const TrainConfig& cfg) {
  const std::size_t b = f.batch;
  const std::vector<double>& xhat = f.dec_pre.back();
  LossTerms t;
  t.rec = kernels::squared_distance(b * m.input_dim, f.x.data(), xhat.data()) / static_cast<double>(b);
  double kl = 0.0;
  for (std::size_t idx = 0; idx < b * m.latent_dim; ++idx) {
    const double lv = f.logvar[idx];
    const double mu = f.mu[idx];
    kl += -0.5 * (1.0 + lv - mu * mu - std::exp(lv));
  }
  t.kl = kl / static_cast<double>(b);
  t.total = cfg.w_kl * t.kl + cfg.w_rec * t.rec;
  return t;
}

LayerGrads make_grads(const DenseLayer& l) {
  return {std::vector<double>(l.w.size(), 0.0), std::vector<double>(l.b.size(), 0.0)};
}

PriorGradients make_gradients(const PriorModel& m) {
  PriorGradients g;
  for (const auto& l : m.encoder) g.encoder.push_back(make_grads(l));
  g.mu_head = make_grads(m.mu_head);
  g.logvar_head = make_grads(m.logvar_head);
  for (const auto& l : m.decoder) g.decoder.push_back(make_grads(l));
  return g;
}

// delta [batch x out] flows back through layer l whose input was `input`
// [batch x in]: accumulates dW = delta^T * input, db = column sums, and
// returns d(input) when requested.
void dense_backward(const DenseLayer& l, const std::vector<double>& delta,
                    const std::vector<double>& input, std::size_t batch, LayerGrads& g,
                    std::vector<double>* dinput) {
  gemm_tn(l.out, l.in, batch, delta.data(), input.data(), g.w.data());
  col_sums(batch, l.out, delta.data(), g.b.data());
  if (dinput) {
    dinput->resize(batch * l.in);
    gemm_nn(batch, l.in, l.out, delta.data(), l.w.data(), dinput->data());
  }
}

void run_backward(const PriorModel& m, const ForwardPass& f, const TrainConfig& cfg,
                  PriorGradients& g) {
  const std::size_t b = f.batch;
  const double inv_b = 1.0 / static_cast<double>(b);

  // d total / d xhat
  const std::vector<double>& xhat = f.dec_pre.back();
  std::vector<double> delta(b * m.input_dim);
  for (std::size_t i = 0; i < delta.size(); ++i) {
    delta[i] = 2.0 * cfg.w_rec * inv_b * (xhat[i] - f.x[i]);
  }

  // Decoder stack.
  std::vector<double> dprev;
  for (std::size_t d = m.decoder.size(); d-- > 0;) {
    const std::vector<double>& input = d == 0 ? f.z : f.dec_act[d - 1];
    dense_backward(m.decoder[d], delta, input, b, g.decoder[d], &dprev);
    if (d > 0) {
      delta.resize(dprev.size());
      relu_backward(dprev.size(), f.dec_pre[d - 1].data(), dprev.data(), delta.data());
    }
  }
  std::vector<double>& dz = dprev;  // batch x latent

  // Reparameterization and the closed-form KL term.
  const std::size_t nz = b * m.latent_dim;
  std::vector<double> dmu(nz), dlogvar(nz);
  for (std::size_t i = 0; i < nz; ++i) {
    const double explv = f.sigma[i] * f.sigma[i];
    dmu[i] = dz[i] + cfg.w_kl * inv_b * f.mu[i];
    dlogvar[i] = dz[i] * f.eps[i] * 0.5 * f.sigma[i] + cfg.w_kl * 0.5 * inv_b * (explv - 1.0);
  }

  const std::vector<double>& hidden = f.enc_act.back();
  std::vector<double> dh_mu, dh_lv;
  dense_backward(m.mu_head, dmu, hidden, b, g.mu_head, &dh_mu);
  dense_backward(m.logvar_head, dlogvar, hidden, b, g.logvar_head, &dh_lv);
  for (std::size_t i = 0; i < dh_mu.size(); ++i) dh_mu[i] += dh_lv[i];

  // Encoder stack.
  delta.resize(dh_mu.size());
  relu_backward(dh_mu.size(), f.enc_pre.back().data(), dh_mu.data(), delta.data());
  for (std::size_t e = m.encoder.size(); e-- > 0;) {
    const std::vector<double>& input = e == 0 ? f.x : f.enc_act[e - 1];
    dense_backward(m.encoder[e], delta, input, b, g.encoder[e],
                   e > 0 ? &dprev : nullptr);
    if (e > 0) {
      delta.resize(dprev.size());
      relu_backward(dprev.size(), f.enc_pre[e - 1].data(), dprev.data(), delta.data());
    }
  }
}

void check_batch(const PriorModel& m, std::span<const AngleVector> batch,
                 const std::vector<std::array<double, kLatentDim>>& noise) {
  validate_model(m);
  if (batch.empty()) throw ValidationError("elbo_loss: empty batch");
  if (noise.size() != batch.size()) {
    throw ValidationError("elbo_loss: need one noise vector per batch element");
  }
  if (m.input_dim != kAngleCount || m.latent_dim != kLatentDim) {
    throw ValidationError("elbo_loss: model dims do not match the 36-angle / 16-latent layout");
  }
}

DenseLayer init_layer(std::size_t in, std::size_t out, Rng& rng) {
  DenseLayer l;
  l.in = in;
  l.out = out;
  l.w.resize(in * out);
  l.b.assign(out, 0.0);
  const double limit = std::sqrt(6.0 / static_cast<double>(in));
  for (double& w : l.w) w = rng.uniform(-limit, limit);
  return l;
}

PriorModel init_with(const TrainConfig& cfg, Rng& rng) {
  PriorModel m;
  m.input_dim = kAngleCount;
  m.latent_dim = kLatentDim;
  std::size_t width = m.input_dim;
  for (std::size_t h : cfg.hidden_widths) {
    m.encoder.push_back(init_layer(width, h, rng));
    width = h;
  }
  m.mu_head = init_layer(width, m.latent_dim, rng);
  m.logvar_head = init_layer(width, m.latent_dim, rng);
  width = m.latent_dim;
  for (std::size_t i = cfg.hidden_widths.size(); i-- > 0;) {
    m.decoder.push_back(init_layer(width, cfg.hidden_widths[i], rng));
    width = cfg.hidden_widths[i];
  }
  m.decoder.push_back(init_layer(width, m.input_dim, rng));
  return m;
}

}  // namespace

void TrainConfig::validate(std::size_t corpus_size) const {
  if (!(learning_rate > 0.0)) throw ValidationError("train config: learning_rate must be > 0");
  if (epochs < 1) throw ValidationError("train config: epochs must be >= 1");
  if (batch_size < 1 || batch_size > corpus_size) {
    throw ValidationError("train config: batch_size must be in [1, corpus size]");
  }
  if (hidden_widths.empty()) throw ValidationError("train config: hidden_widths must be non-empty");
  for (std::size_t h : hidden_widths) {
    if (h == 0) throw ValidationError("train config: hidden widths must be positive");
  }
  if (!(w_kl >= 0.0) || !(w_rec >= 0.0)) {
    throw ValidationError("train config: loss weights must be non-negative");
  }
}

PriorModel init_prior(const TrainConfig& config, std::uint64_t seed) {
  Rng rng(seed);
  PriorModel m = init_with(config, rng);
  m.seed = seed;
  return m;
}

LossTerms elbo_loss(const PriorModel& model, std::span<const AngleVector> batch,
                    const TrainConfig& config,
                    const std::vector<std::array<double, kLatentDim>>& noise) {
  check_batch(model, batch, noise);
  ForwardPass f;
  run_forward(model, batch, noise, f);
  return loss_from_forward(model, f, config);
}

LossTerms elbo_loss_with_gradients(const PriorModel& model, std::span<const AngleVector> batch,
                                   const TrainConfig& config,
                                   const std::vector<std::array<double, kLatentDim>>& noise,
                                   PriorGradients& grads) {
  check_batch(model, batch, noise);
  ForwardPass f;
  run_forward(model, batch, noise, f);
  grads = make_gradients(model);
  run_backward(model, f, config, grads);
  return loss_from_forward(model, f, config);
}

PriorModel train_prior(std::span<const AngleVector> corpus, const TrainConfig& config,
                       TrainReport* report) {
  if (corpus.empty()) throw ValidationError("train_prior: empty corpus");
  config.validate(corpus.size());

  Rng rng(config.rng_seed);
  PriorModel model = init_with(config, rng);
  model.seed = config.rng_seed;

  PriorGradients grads = make_gradients(model);
  PriorGradients adam_m = make_gradients(model);
  PriorGradients adam_v = make_gradients(model);

  auto blocks = [&](auto&& fn) {
    for (std::size_t i = 0; i < model.encoder.size(); ++i) {
      fn(model.encoder[i].w, grads.encoder[i].w, adam_m.encoder[i].w, adam_v.encoder[i].w);
      fn(model.encoder[i].b, grads.encoder[i].b, adam_m.encoder[i].b, adam_v.encoder[i].b);
    }
    fn(model.mu_head.w, grads.mu_head.w, adam_m.mu_head.w, adam_v.mu_head.w);
    fn(model.mu_head.b, grads.mu_head.b, adam_m.mu_head.b, adam_v.mu_head.b);
    fn(model.logvar_head.w, grads.logvar_head.w, adam_m.logvar_head.w, adam_v.logvar_head.w);
    fn(model.logvar_head.b, grads.logvar_head.b, adam_m.logvar_head.b, adam_v.logvar_head.b);
    for (std::size_t i = 0; i < model.decoder.size(); ++i) {
      fn(model.decoder[i].w, grads.decoder[i].w, adam_m.decoder[i].w, adam_v.decoder[i].w);
      fn(model.decoder[i].b, grads.decoder[i].b, adam_m.decoder[i].b, adam_v.decoder[i].b);
    }
  };

  std::vector<std::size_t> order(corpus.size());
  for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;

  ForwardPass f;
  std::vector<AngleVector> batch;
  std::vector<std::array<double, kLatentDim>> noise;
  std::size_t step = 0;

  for (std::size_t epoch = 0; epoch < config.epochs; ++epoch) {
    rng.shuffle(order);
    double epoch_total = 0.0, epoch_rec = 0.0;

    for (std::size_t start = 0; start < corpus.size(); start += config.batch_size) {
      const std::size_t bsize = std::min(config.batch_size, corpus.size() - start);
      batch.assign(bsize, AngleVector{});
      for (std::size_t i = 0; i < bsize; ++i) batch[i] = corpus[order[start + i]];
      noise.assign(bsize, {});
      for (auto& nv : noise) {
        for (double& e : nv) e = rng.normal();
      }

      run_forward(model, batch, noise, f);
      const LossTerms terms = loss_from_forward(model, f, config);
      if (!std::isfinite(terms.total)) {
        throw PipelineError("train_prior: non-finite loss at epoch " + std::to_string(epoch + 1) +
                            ", batch " + std::to_string(start / config.batch_size + 1));
      }
      run_backward(model, f, config, grads);

      ++step;
      const double bc1 = 1.0 - std::pow(config.adam_beta1, static_cast<double>(step));
      const double bc2 = 1.0 - std::pow(config.adam_beta2, static_cast<double>(step));
      blocks([&](std::vector<double>& p, std::vector<double>& g, std::vector<double>& mm,
                 std::vector<double>& vv) {
        kernels::adam_step(p.size(), p.data(), g.data(), mm.data(), vv.data(),
                           config.learning_rate, config.adam_beta1, config.adam_beta2,
                           config.adam_epsilon, bc1, bc2);
        std::fill(g.begin(), g.end(), 0.0);
      });

      epoch_total += terms.total * static_cast<double>(bsize);
      epoch_rec += terms.rec * static_cast<double>(bsize);
    }

    if (report) {
      report->epoch_total.push_back(epoch_total / static_cast<double>(corpus.size()));
      report->epoch_rec.push_back(epoch_rec / static_cast<double>(corpus.size()));
    }
  }
  return model;
}

Moments encode(const PriorModel& model, const AngleVector& pose) {
  validate_model(model);
  if (model.input_dim != kAngleCount || model.latent_dim != kLatentDim) {
    throw ValidationError("encode: model dims do not match the 36-angle / 16-latent layout");
  }
  std::vector<double> cur(pose.values.begin(), pose.values.end());
  std::vector<double> next;
  for (const DenseLayer& l : model.encoder) {
    dense_forward(l, cur, 1, next);
    relu_forward(next.size(), next.data(), next.data());
    cur = next;
  }
  Moments out;
  dense_forward(model.mu_head, cur, 1, next);
  std::copy(next.begin(), next.end(), out.mu.begin());
  dense_forward(model.logvar_head, cur, 1, next);
  std::copy(next.begin(), next.end(), out.logvar.begin());
  return out;
}

std::array<double, kAngleCount> decode_raw(const PriorModel& model, const LatentCode& z) {
  validate_model(model);
  if (model.input_dim != kAngleCount || model.latent_dim != kLatentDim) {
    throw ValidationError("decode: model dims do not match the 36-angle / 16-latent layout");
  }
  std::vector<double> cur(z.values.begin(), z.values.end());
  std::vector<double> next;
  for (std::size_t d = 0; d < model.decoder.size(); ++d) {
    dense_forward(model.decoder[d], cur, 1, next);
    if (d + 1 < model.decoder.size()) {
      relu_forward(next.size(), next.data(), next.data());
    }
    cur = next;
  }
  std::array<double, kAngleCount> out{};
  std::copy(cur.begin(), cur.end(), out.begin());
  return out;
}

AngleVector decode(const PriorModel& model, const LatentCode& z) {
  AngleVector pose;
  pose.values = decode_raw(model, z);
  pose.clamp_to_domain();
  return pose;
}

namespace {

nlohmann::json layer_to_json(const DenseLayer& l) {
  return {{"in", l.in}, {"out", l.out}, {"w", l.w}, {"b", l.b}};
}

DenseLayer layer_from_json(const nlohmann::json& j) {
  DenseLayer l;
  l.in = j.at("in").get<std::size_t>();
  l.out = j.at("out").get<std::size_t>();
  l.w = j.at("w").get<std::vector<double>>();
  l.b = j.at("b").get<std::vector<double>>();
  return l;
}

}  // namespace

void save_prior(const PriorModel& model, const TrainConfig& config,
                const std::filesystem::path& path) {
  validate_model(model);
  nlohmann::json doc;
  doc["format"] = "quadsyn-prior-model";
  doc["version"] = 1;
  doc["input_dim"] = model.input_dim;
  doc["latent_dim"] = model.latent_dim;
  doc["seed"] = model.seed;
  doc["encoder"] = nlohmann::json::array();
  for (const auto& l : model.encoder) doc["encoder"].push_back(layer_to_json(l));
  doc["mu_head"] = layer_to_json(model.mu_head);
  doc["logvar_head"] = layer_to_json(model.logvar_head);
  doc["decoder"] = nlohmann::json::array();
  for (const auto& l : model.decoder) doc["decoder"].push_back(layer_to_json(l));
  doc["config"] = {{"learning_rate", config.learning_rate},
                   {"w_kl", config.w_kl},
                   {"w_rec", config.w_rec},
                   {"epochs", config.epochs},
                   {"batch_size", config.batch_size},
                   {"rng_seed", config.rng_seed},
                   {"adam_beta1", config.adam_beta1},
                   {"adam_beta2", config.adam_beta2},
                   {"adam_epsilon", config.adam_epsilon},
                   {"hidden_widths", config.hidden_widths}};
  std::ofstream out(path);
  if (!out) throw ValidationError("save_prior: cannot write '" + path.string() + "'");
  out << doc.dump() << "\n";
}

LoadedPrior load_prior(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ValidationError("load_prior: cannot open '" + path.string() + "'");
  nlohmann::json doc;
  try {
    in >> doc;
  } catch (const nlohmann::json::exception& e) {
    throw ValidationError("load_prior: parse failure: " + std::string(e.what()));
  }
  if (doc.value("format", "") != "quadsyn-prior-model") {
    throw ValidationError("load_prior: not a prior model file");
  }
  LoadedPrior lp;
  PriorModel& m = lp.model;
  m.input_dim = doc.at("input_dim").get<std::size_t>();
  m.latent_dim = doc.at("latent_dim").get<std::size_t>();
  m.seed = doc.value("seed", std::uint64_t{0});
  for (const auto& jl : doc.at("encoder")) m.encoder.push_back(layer_from_json(jl));
  m.mu_head = layer_from_json(doc.at("mu_head"));
  m.logvar_head = layer_from_json(doc.at("logvar_head"));
  for (const auto& jl : doc.at("decoder")) m.decoder.push_back(layer_from_json(jl));
  validate_model(m);

  const auto& jc = doc.at("config");
  TrainConfig& c = lp.config;
  c.learning_rate = jc.value("learning_rate", c.learning_rate);
  c.w_kl = jc.value("w_kl", c.w_kl);
  c.w_rec = jc.value("w_rec", c.w_rec);
  c.epochs = jc.value("epochs", c.epochs);
  c.batch_size = jc.value("batch_size", c.batch_size);
  c.rng_seed = jc.value("rng_seed", c.rng_seed);
  c.adam_beta1 = jc.value("adam_beta1", c.adam_beta1);
  c.adam_beta2 = jc.value("adam_beta2", c.adam_beta2);
  c.adam_epsilon = jc.value("adam_epsilon", c.adam_epsilon);
  c.hidden_widths = jc.value("hidden_widths", c.hidden_widths);
  return lp;
}

std::vector<AngleVector> load_corpus_csv(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ValidationError("corpus: cannot open '" + path.string() + "'");
  std::vector<AngleVector> corpus;
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.empty() || line[0] == '#') continue;
    std::vector<double> vals;
    vals.reserve(kAngleCount);
    std::stringstream ss(line);
    std::string cell;
    bool numeric = true;
    while (std::getline(ss, cell, ',')) {
      try {
        std::size_t pos = 0;
        const double v = std::stod(cell, &pos);
        while (pos < cell.size() && std::isspace(static_cast<unsigned char>(cell[pos]))) ++pos;
        if (pos != cell.size()) {
          numeric = false;
          break;
        }
        vals.push_back(v);
      } catch (const std::exception&) {
        numeric = false;
        break;
      }
    }
    if (!numeric) {
      if (lineno == 1) continue;  // header row
      throw ValidationError("corpus: non-numeric cell at line " + std::to_string(lineno));
    }
    if (vals.size() != kAngleCount) {
      throw ValidationError("corpus: line " + std::to_string(lineno) + " has " +
                            std::to_string(vals.size()) + " values, expected 36");
    }
    AngleVector a;
    std::copy(vals.begin(), vals.end(), a.values.begin());
    if (!a.in_domain()) {
      throw ValidationError("corpus: line " + std::to_string(lineno) +
                            " has an angle outside [-pi, pi]");
    }
    corpus.push_back(a);
  }
  if (corpus.empty()) throw ValidationError("corpus: no poses in '" + path.string() + "'");
  return corpus;
}

void save_corpus_csv(std::span<const AngleVector> corpus, const std::filesystem::path& path) {
  std::ofstream out(path);
  if (!out) throw ValidationError("corpus: cannot write '" + path.string() + "'");
  for (std::size_t j = 0; j < kPriorJointCount; ++j) {
    for (const char* axis : {"x", "y", "z"}) {
      out << "j" << (j < 10 ? "0" : "") << j << "_" << axis
          << (j + 1 == kPriorJointCount && axis[0] == 'z' ? "" : ",");
    }
  }
  out << "\n";
  char buf[32];
  for (const AngleVector& a : corpus) {
    for (std::size_t i = 0; i < kAngleCount; ++i) {
      std::snprintf(buf, sizeof(buf), "%.17g", a.values[i]);
      out << buf << (i + 1 == kAngleCount ? "" : ",");
    }
    out << "\n";
  }
}

}  // namespace quadsyn
