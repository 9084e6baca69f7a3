#pragma once

#include <string>
#include <vector>

#include "core/attention.hpp"
#include "core/dsp.hpp"

namespace vc {

// t1 averages frames over time; t2 uses self-attention. Both aggregate
// across cloning samples with attention.
enum class EncoderVariant { AveragePool, SelfAttention };

EncoderVariant variant_from_string(const std::string& name);
std::string variant_name(EncoderVariant v);

struct EncoderConfig {
  size_t d_mel = 80;
  size_t f_mapped = 30;
  AttentionConfig temporal;  // d_in = f_mapped
  AttentionConfig cross;     // d_in = f_mapped
  size_t d_embedding = 256;
  size_t max_cloning_samples = 6;  // J
  EncoderVariant variant = EncoderVariant::SelfAttention;

  void validate() const;
};

struct EncoderParams {
  Matrix w_spec;   // d_mel x f_mapped, spectral processing unit
  AttentionParams temporal;
  AttentionParams cross;
  Matrix w_embed;  // f_mapped x d_embedding, per-sample embedding projection

  static EncoderParams init(const EncoderConfig& cfg, Rng& rng);
};

struct EncoderGrads {
  Matrix w_spec;
  AttentionGrads temporal;
  AttentionGrads cross;
  Matrix w_embed;

  static EncoderGrads zeros(const EncoderConfig& cfg);
};

using SpeakerEmbedding = std::vector<double>;

// Per-frame linear map d_mel -> f_mapped followed by an ELU.
Matrix spectral_process(const MelSpectrogram& mel, const EncoderParams& params,
                        const EncoderConfig& cfg);

// Collapses T frames to one f_mapped vector according to cfg.variant.
std::vector<double> temporal_aggregate(const Matrix& mapped,
                                       const EncoderParams& params,
                                       const EncoderConfig& cfg);

// Attention over per-sample embeddings (J' x f_mapped) followed by the
// projection to d_embedding; returns sum_j a_j * (E w_embed)_j.
SpeakerEmbedding cross_sample_aggregate(const Matrix& sample_embeddings,
                                        const EncoderParams& params,
                                        const EncoderConfig& cfg,
                                        std::vector<double>* weights_out =
                                            nullptr);

// Forward state kept for the backward pass.
struct EncoderForward {
  std::vector<Matrix> mels;       // inputs, T_j x d_mel
  std::vector<Matrix> spec_pre;   // T_j x f_mapped before the ELU
  std::vector<Matrix> mapped;     // T_j x f_mapped
  std::vector<AttentionCache> temporal_caches;  // t2 only
  Matrix sample_embeddings;       // J' x f_mapped
  AttentionCache cross_cache;
  Matrix projected;               // J' x d_embedding
  SpeakerEmbedding embedding;
};

EncoderForward encode_features(const std::vector<Matrix>& mels,
                               const EncoderParams& params,
                               const EncoderConfig& cfg);

// Gradients of the embedding contracted against upstream, for every
// parameter matrix of the encoder.
EncoderGrads encoder_backward(const EncoderForward& fwd,
                              const EncoderParams& params,
                              const EncoderConfig& cfg,
                              std::span<const double> upstream);

// Full pipeline: VAD trim, mel features, spectral processing, temporal
// aggregation per sample, cross-sample aggregation.
SpeakerEmbedding encode_speaker(const std::vector<AudioClip>& samples,
                                const DspConfig& dsp_cfg,
                                const EncoderConfig& cfg,
                                const EncoderParams& params);

// Uniform traversal of all parameter (or gradient) matrices in a fixed
// order, used by the optimizer and the finite-difference checks.
template <typename ParamsLike, typename Fn>
void visit_attention_tensors(ParamsLike& p, const std::string& prefix,
                             Fn&& fn) {
  fn(prefix + ".w_pre_k", p.w_pre_k.data(), p.w_pre_k.size());
  fn(prefix + ".w_pre_q", p.w_pre_q.data(), p.w_pre_q.size());
  fn(prefix + ".w_pre_v", p.w_pre_v.data(), p.w_pre_v.size());
  for (size_t i = 0; i < p.w_head_k.size(); ++i) {
    std::string n = prefix + ".head" + std::to_string(i);
    fn(n + ".w_k", p.w_head_k[i].data(), p.w_head_k[i].size());
    fn(n + ".w_q", p.w_head_q[i].data(), p.w_head_q[i].size());
    fn(n + ".w_v", p.w_head_v[i].data(), p.w_head_v[i].size());
  }
  fn(prefix + ".w_out", p.w_out.data(), p.w_out.size());
}

template <typename ParamsLike, typename Fn>
void visit_encoder_tensors(ParamsLike& p, Fn&& fn) {
  fn("w_spec", p.w_spec.data(), p.w_spec.size());
  visit_attention_tensors(p.temporal, "temporal", fn);
  visit_attention_tensors(p.cross, "cross", fn);
  fn("w_embed", p.w_embed.data(), p.w_embed.size());
}

size_t encoder_param_count(const EncoderConfig& cfg);
std::vector<double> flatten_encoder(const EncoderParams& params);
std::vector<double> flatten_encoder(const EncoderGrads& grads);
EncoderParams unflatten_encoder(std::span<const double> flat,
                                const EncoderConfig& cfg);

// Serialization of trained weights (binary, little-endian doubles).
void save_params(const EncoderParams& params, const std::string& path);
EncoderParams load_params(const std::string& path, const EncoderConfig& cfg);

}  // namespace vc
