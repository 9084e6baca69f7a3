#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "core/speaker_encoder.hpp"

namespace vc {

struct AdamConfig {
  double learning_rate = 0.0005;
  double beta1 = 0.5;
  double beta2 = 0.9;
  double epsilon = 1e-6;
  bool noam_schedule = false;
  int noam_warmup = 4000;
};

struct OptimizerState {
  std::vector<double> m;  // first moment
  std::vector<double> v;  // second moment
  long step = 0;
  AdamConfig hp;

  static OptimizerState create(size_t param_count, const AdamConfig& hp);
};

// Effective learning rate at a (1-based) step, including the optional noam
// warmup multiplier.
double effective_learning_rate(const AdamConfig& hp, long step);

// Bias-corrected Adam update, in place.
void adam_step(std::vector<double>& params, const std::vector<double>& grads,
               OptimizerState& state);

struct ClassifierResult {
  double loss = 0.0;
  std::vector<double> grad_embedding;  // d_embedding
  Matrix grad_head;                    // d_embedding x num_classes
};

// Softmax cross-entropy over head-projected logits.
ClassifierResult classifier_loss(std::span<const double> embedding, int label,
                                 const Matrix& head);

struct SpeakerRecord {
  std::string id;
  std::vector<AudioClip> clips;
};

struct ToyDataset {
  std::vector<SpeakerRecord> speakers;
};

struct EpochMetrics {
  int epoch = 0;
  double loss = 0.0;
  double intra_cos = 0.0;  // held-out vs own enrolled embedding
  double inter_cos = 0.0;  // held-out vs other speakers' embeddings
};

struct ToyTrainResult {
  EncoderParams params;
  Matrix head;
  std::vector<EpochMetrics> metrics;
};

// Full-batch training of the encoder plus a classifier head on a small
// dataset. Each speaker contributes one example per epoch: its first J clips
// encoded together. Deterministic for a given seed.
ToyTrainResult train_toy(const ToyDataset& dataset, const EncoderConfig& cfg,
                         const DspConfig& dsp_cfg, int epochs, uint64_t seed,
                         const AdamConfig& adam = AdamConfig{});

struct GradCheckGroup {
  std::string name;
  double max_rel_err = 0.0;
  double max_abs_grad = 0.0;
};

struct GradCheckReport {
  uint64_t seed = 0;
  std::vector<GradCheckGroup> t1;
  std::vector<GradCheckGroup> t2;

  double worst() const;
  bool passes(double tolerance) const { return worst() <= tolerance; }
  std::string to_json() const;
};

// Central finite differences over every parameter group of the encoder on a
// small instance (2 samples, T=4, f_mapped=3, 2 heads), both variants.
GradCheckReport gradient_check_suite(uint64_t seed);

// The small instance the suite uses, exposed for tests.
EncoderConfig gradcheck_config(EncoderVariant variant);

}  // namespace vc
