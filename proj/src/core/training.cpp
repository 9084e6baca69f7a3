#include "core/training.hpp"

#include <algorithm>
#include <cmath>

#include <nlohmann/json.hpp>

#include "core/errors.hpp"

namespace vc {

OptimizerState OptimizerState::create(size_t param_count,
                                      const AdamConfig& hp) {
  OptimizerState st;
  st.m.assign(param_count, 0.0);
  st.v.assign(param_count, 0.0);
  st.hp = hp;
  return st;
}

double effective_learning_rate(const AdamConfig& hp, long step) {
  if (!hp.noam_schedule) return hp.learning_rate;
  double w = static_cast<double>(hp.noam_warmup);
  double s = static_cast<double>(step);
  return hp.learning_rate * std::sqrt(w) *
         std::min(s * std::pow(w, -1.5), 1.0 / std::sqrt(s));
}

void adam_step(std::vector<double>& params, const std::vector<double>& grads,
               OptimizerState& state) {
  require(params.size() == grads.size() && params.size() == state.m.size(),
          ErrorCode::ShapeMismatch, "adam_step: size mismatch");
  state.step += 1;
  const AdamConfig& hp = state.hp;
  double lr = effective_learning_rate(hp, state.step);
  double bc1 = 1.0 - std::pow(hp.beta1, static_cast<double>(state.step));
  double bc2 = 1.0 - std::pow(hp.beta2, static_cast<double>(state.step));
  for (size_t i = 0; i < params.size(); ++i) {
    state.m[i] = hp.beta1 * state.m[i] + (1.0 - hp.beta1) * grads[i];
    state.v[i] = hp.beta2 * state.v[i] + (1.0 - hp.beta2) * grads[i] * grads[i];
    double m_hat = state.m[i] / bc1;
    double v_hat = state.v[i] / bc2;
    params[i] -= lr * m_hat / (std::sqrt(v_hat) + hp.epsilon);
  }
}

ClassifierResult classifier_loss(std::span<const double> embedding, int label,
                                 const Matrix& head) {
  size_t classes = head.cols();
  require(embedding.size() == head.rows(), ErrorCode::ShapeMismatch,
          "classifier_loss: embedding length != head rows");
  require(label >= 0 && static_cast<size_t>(label) < classes,
          ErrorCode::LabelOutOfRange,
          "classifier_loss: label " + std::to_string(label) + " out of range");

  std::vector<double> logits(classes, 0.0);
  for (size_t d = 0; d < embedding.size(); ++d)
    for (size_t s = 0; s < classes; ++s) logits[s] += embedding[d] * head(d, s);

  double m = *std::max_element(logits.begin(), logits.end());
  double sum = 0.0;
  std::vector<double> p(classes);
  for (size_t s = 0; s < classes; ++s) {
    p[s] = std::exp(logits[s] - m);
    sum += p[s];
  }
  for (auto& v : p) v /= sum;

  ClassifierResult r;
  r.loss = -std::log(std::max(p[static_cast<size_t>(label)], 1e-300));
  std::vector<double> grad_logits = p;
  grad_logits[static_cast<size_t>(label)] -= 1.0;

  r.grad_embedding.assign(embedding.size(), 0.0);
  r.grad_head = Matrix(head.rows(), head.cols());
  for (size_t d = 0; d < embedding.size(); ++d) {
    for (size_t s = 0; s < classes; ++s) {
      r.grad_embedding[d] += head(d, s) * grad_logits[s];
      r.grad_head(d, s) = embedding[d] * grad_logits[s];
    }
  }
  return r;
}

namespace {

double cosine(std::span<const double> a, std::span<const double> b) {
  double na = std::sqrt(dot(a, a));
  double nb = std::sqrt(dot(b, b));
  return dot(a, b) / (na * nb);
}

// dst += scale * src over every gradient tensor.
void accumulate_grads(EncoderGrads& dst, const EncoderGrads& src,
                      double scale) {
  std::vector<std::pair<double*, size_t>> d, s;
  visit_encoder_tensors(dst, [&](const std::string&, double* p, size_t n) {
    d.emplace_back(p, n);
  });
  visit_encoder_tensors(const_cast<EncoderGrads&>(src),
                        [&](const std::string&, double* p, size_t n) {
                          s.emplace_back(p, n);
                        });
  for (size_t i = 0; i < d.size(); ++i)
    for (size_t k = 0; k < d[i].second; ++k)
      d[i].first[k] += s[i].first[k] * scale;
}

}  // namespace

ToyTrainResult train_toy(const ToyDataset& dataset, const EncoderConfig& cfg,
                         const DspConfig& dsp_cfg, int epochs, uint64_t seed,
                         const AdamConfig& adam) {
  cfg.validate();
  dsp_cfg.validate();
  require(epochs >= 1, ErrorCode::ConfigInvalid,
          "train_toy: epochs must be >= 1");
  size_t n_speakers = dataset.speakers.size();
  require(n_speakers >= 2, ErrorCode::DatasetTooSmall,
          "train_toy: need at least 2 speakers");
  size_t train_clips = cfg.max_cloning_samples;
  for (const auto& spk : dataset.speakers)
    require(spk.clips.size() >= train_clips, ErrorCode::DatasetTooSmall,
            "train_toy: speaker " + spk.id + " has fewer than " +
                std::to_string(train_clips) + " clips");

  // Features never change, so extract them once.
  std::vector<std::vector<Matrix>> train_mels(n_speakers);
  std::vector<Matrix> heldout_mels;
  for (size_t s = 0; s < n_speakers; ++s) {
    const auto& clips = dataset.speakers[s].clips;
    for (size_t j = 0; j < train_clips; ++j) {
      AudioClip trimmed = trim_silence(clips[j], dsp_cfg.vad_threshold_db);
      train_mels[s].push_back(melspectrogram(trimmed, dsp_cfg).values);
    }
    const AudioClip& held =
        clips.size() > train_clips ? clips[train_clips] : clips.back();
    AudioClip trimmed = trim_silence(held, dsp_cfg.vad_threshold_db);
    heldout_mels.push_back(melspectrogram(trimmed, dsp_cfg).values);
  }

  Rng rng(seed);
  EncoderParams params = EncoderParams::init(cfg, rng);
  Matrix head(cfg.d_embedding, n_speakers);
  double head_bound = 1.0 / std::sqrt(static_cast<double>(cfg.d_embedding));
  for (size_t i = 0; i < head.size(); ++i)
    head.data()[i] = rng.uniform(-head_bound, head_bound);

  size_t encoder_n = encoder_param_count(cfg);
  std::vector<double> flat = flatten_encoder(params);
  flat.insert(flat.end(), head.data(), head.data() + head.size());
  OptimizerState opt = OptimizerState::create(flat.size(), adam);

  ToyTrainResult result;
  for (int epoch = 1; epoch <= epochs; ++epoch) {
    params = unflatten_encoder({flat.data(), encoder_n}, cfg);
    std::copy(flat.begin() + static_cast<ptrdiff_t>(encoder_n), flat.end(),
              head.data());

    EncoderGrads acc = EncoderGrads::zeros(cfg);
    Matrix head_grad(head.rows(), head.cols());
    double loss = 0.0;
    double inv = 1.0 / static_cast<double>(n_speakers);
    for (size_t s = 0; s < n_speakers; ++s) {
      EncoderForward fwd = encode_features(train_mels[s], params, cfg);
      ClassifierResult cl =
          classifier_loss(fwd.embedding, static_cast<int>(s), head);
      loss += cl.loss * inv;
      for (auto& g : cl.grad_embedding) g *= inv;
      EncoderGrads g = encoder_backward(fwd, params, cfg, cl.grad_embedding);
      accumulate_grads(acc, g, 1.0);
      for (size_t i = 0; i < head_grad.size(); ++i)
        head_grad.data()[i] += cl.grad_head.data()[i] * inv;
    }

    std::vector<double> grad_flat = flatten_encoder(acc);
    grad_flat.insert(grad_flat.end(), head_grad.data(),
                     head_grad.data() + head_grad.size());
    adam_step(flat, grad_flat, opt);

    for (double vparam : flat)
      require(std::isfinite(vparam), ErrorCode::Internal,
              "train_toy: non-finite parameter after epoch " +
                  std::to_string(epoch));

    // Metrics on the updated weights.
    params = unflatten_encoder({flat.data(), encoder_n}, cfg);
    std::vector<SpeakerEmbedding> enrolled(n_speakers), held(n_speakers);
    for (size_t s = 0; s < n_speakers; ++s) {
      enrolled[s] = encode_features(train_mels[s], params, cfg).embedding;
      held[s] = encode_features({heldout_mels[s]}, params, cfg).embedding;
    }
    double intra = 0.0, inter = 0.0;
    size_t inter_n = 0;
    for (size_t s = 0; s < n_speakers; ++s) {
      intra += cosine(held[s], enrolled[s]) * inv;
      for (size_t o = 0; o < n_speakers; ++o) {
        if (o == s) continue;
        inter += cosine(held[s], enrolled[o]);
        ++inter_n;
      }
    }
    inter /= static_cast<double>(inter_n);
    result.metrics.push_back(EpochMetrics{epoch, loss, intra, inter});
  }

  result.params = unflatten_encoder({flat.data(), encoder_n}, cfg);
  std::copy(flat.begin() + static_cast<ptrdiff_t>(encoder_n), flat.end(),
            head.data());
  result.head = head;
  return result;
}

EncoderConfig gradcheck_config(EncoderVariant variant) {
  EncoderConfig cfg;
  cfg.d_mel = 4;
  cfg.f_mapped = 3;
  cfg.temporal = AttentionConfig{3, 4, 2};
  cfg.cross = AttentionConfig{3, 4, 2};
  cfg.d_embedding = 3;
  cfg.max_cloning_samples = 2;
  cfg.variant = variant;
  return cfg;
}

namespace {

// Mixed absolute/relative disagreement; the 1e-5 floor keeps finite
// difference noise on near-zero gradients from registering.
double grad_rel_err(double analytic, double numeric) {
  return std::abs(analytic - numeric) /
         std::max(1e-5, std::abs(analytic) + std::abs(numeric));
}

std::vector<GradCheckGroup> gradcheck_variant(EncoderVariant variant,
                                              uint64_t seed) {
  EncoderConfig cfg = gradcheck_config(variant);
  Rng rng(seed);
  EncoderParams params = EncoderParams::init(cfg, rng);

  std::vector<Matrix> mels;
  for (int j = 0; j < 2; ++j) {
    Matrix mel(4, cfg.d_mel);
    for (size_t i = 0; i < mel.size(); ++i) mel.data()[i] = rng.uniform();
    mels.push_back(std::move(mel));
  }
  std::vector<double> upstream(cfg.d_embedding);
  for (auto& u : upstream) u = rng.uniform(-1.0, 1.0);

  auto objective = [&](const std::vector<double>& flat) {
    EncoderParams p = unflatten_encoder(flat, cfg);
    EncoderForward fwd = encode_features(mels, p, cfg);
    return dot(fwd.embedding, upstream);
  };

  EncoderForward fwd = encode_features(mels, params, cfg);
  EncoderGrads grads = encoder_backward(fwd, params, cfg, upstream);
  std::vector<double> analytic = flatten_encoder(grads);
  std::vector<double> flat = flatten_encoder(params);

  const double eps = 1e-5;
  std::vector<GradCheckGroup> groups;
  size_t off = 0;
  visit_encoder_tensors(grads, [&](const std::string& name, double*,
                                   size_t len) {
    GradCheckGroup group;
    group.name = name;
    for (size_t i = off; i < off + len; ++i) {
      double saved = flat[i];
      flat[i] = saved + eps;
      double fp = objective(flat);
      flat[i] = saved - eps;
      double fm = objective(flat);
      flat[i] = saved;
      double numeric = (fp - fm) / (2.0 * eps);
      group.max_rel_err =
          std::max(group.max_rel_err, grad_rel_err(analytic[i], numeric));
      group.max_abs_grad = std::max(group.max_abs_grad, std::abs(analytic[i]));
    }
    off += len;
    groups.push_back(group);
  });
  return groups;
}

}  // namespace

double GradCheckReport::worst() const {
  double w = 0.0;
  for (const auto& g : t1) w = std::max(w, g.max_rel_err);
  for (const auto& g : t2) w = std::max(w, g.max_rel_err);
  return w;
}

std::string GradCheckReport::to_json() const {
  nlohmann::json j;
  j["seed"] = seed;
  auto emit = [](const std::vector<GradCheckGroup>& gs) {
    nlohmann::json arr = nlohmann::json::array();
    for (const auto& g : gs)
      arr.push_back({{"group", g.name},
                     {"max_rel_err", g.max_rel_err},
                     {"max_abs_grad", g.max_abs_grad}});
    return arr;
  };
  j["t1"] = emit(t1);
  j["t2"] = emit(t2);
  j["worst"] = worst();
  return j.dump(2);
}

GradCheckReport gradient_check_suite(uint64_t seed) {
  GradCheckReport report;
  report.seed = seed;
  report.t1 = gradcheck_variant(EncoderVariant::AveragePool, seed);
  report.t2 = gradcheck_variant(EncoderVariant::SelfAttention, seed);
  return report;
}

}  // namespace vc
