#include "core/speaker_encoder.hpp"

#include <cmath>
#include <cstdint>
#include <cstring>
#include <fstream>

#include "core/errors.hpp"

namespace vc {

EncoderVariant variant_from_string(const std::string& name) {
  if (name == "t1") return EncoderVariant::AveragePool;
  if (name == "t2") return EncoderVariant::SelfAttention;
  fail(ErrorCode::ConfigInvalid, "unknown encoder variant '" + name +
                                     "' (expected t1 or t2)");
}

std::string variant_name(EncoderVariant v) {
  return v == EncoderVariant::AveragePool ? "t1" : "t2";
}

void EncoderConfig::validate() const {
  require(d_mel >= 1 && f_mapped >= 1, ErrorCode::ConfigInvalid,
          "d_mel and f_mapped must be >= 1");
  require(d_embedding >= 1, ErrorCode::ConfigInvalid,
          "d_embedding must be >= 1");
  require(max_cloning_samples >= 1, ErrorCode::ConfigInvalid,
          "max_cloning_samples must be >= 1");
  require(temporal.d_in == f_mapped && cross.d_in == f_mapped,
          ErrorCode::ConfigInvalid,
          "attention input dimension must equal f_mapped");
  temporal.validate();
  cross.validate();
}

EncoderParams EncoderParams::init(const EncoderConfig& cfg, Rng& rng) {
  cfg.validate();
  EncoderParams p;
  double spec_bound = 1.0 / std::sqrt(static_cast<double>(cfg.d_mel));
  p.w_spec = Matrix(cfg.d_mel, cfg.f_mapped);
  for (size_t i = 0; i < p.w_spec.size(); ++i)
    p.w_spec.data()[i] = rng.uniform(-spec_bound, spec_bound);
  p.temporal = AttentionParams::init(cfg.temporal, rng);
  p.cross = AttentionParams::init(cfg.cross, rng);
  double embed_bound = 1.0 / std::sqrt(static_cast<double>(cfg.f_mapped));
  p.w_embed = Matrix(cfg.f_mapped, cfg.d_embedding);
  for (size_t i = 0; i < p.w_embed.size(); ++i)
    p.w_embed.data()[i] = rng.uniform(-embed_bound, embed_bound);
  return p;
}

EncoderGrads EncoderGrads::zeros(const EncoderConfig& cfg) {
  EncoderGrads g;
  g.w_spec = Matrix(cfg.d_mel, cfg.f_mapped);
  g.temporal = AttentionGrads::zeros(cfg.temporal);
  g.cross = AttentionGrads::zeros(cfg.cross);
  g.w_embed = Matrix(cfg.f_mapped, cfg.d_embedding);
  return g;
}

namespace {

Matrix spectral_pre(const Matrix& mel, const EncoderParams& params,
                    const EncoderConfig& cfg) {
  require(mel.rows() >= 1, ErrorCode::EmptyInput,
          "spectral_process: zero frames");
  require(mel.cols() == cfg.d_mel, ErrorCode::ShapeMismatch,
          "spectral_process: mel width " + std::to_string(mel.cols()) +
              " != d_mel " + std::to_string(cfg.d_mel));
  return matmul(mel, params.w_spec);
}

Matrix elu_matrix(const Matrix& m) {
  Matrix out(m.rows(), m.cols());
  for (size_t i = 0; i < m.size(); ++i) out.data()[i] = elu(m.data()[i]);
  return out;
}

std::vector<double> row_mean(const Matrix& m) {
  std::vector<double> out(m.cols(), 0.0);
  for (size_t r = 0; r < m.rows(); ++r)
    for (size_t c = 0; c < m.cols(); ++c) out[c] += m(r, c);
  for (auto& v : out) v /= static_cast<double>(m.rows());
  return out;
}

std::vector<double> pool_with_weights(const Matrix& m,
                                      std::span<const double> w) {
  std::vector<double> out(m.cols(), 0.0);
  for (size_t r = 0; r < m.rows(); ++r)
    for (size_t c = 0; c < m.cols(); ++c) out[c] += w[r] * m(r, c);
  return out;
}

}  // namespace

Matrix spectral_process(const MelSpectrogram& mel, const EncoderParams& params,
                        const EncoderConfig& cfg) {
  return elu_matrix(spectral_pre(mel.values, params, cfg));
}

std::vector<double> temporal_aggregate(const Matrix& mapped,
                                       const EncoderParams& params,
                                       const EncoderConfig& cfg) {
  require(mapped.rows() >= 1, ErrorCode::EmptyInput,
          "temporal_aggregate: zero frames");
  require(mapped.cols() == cfg.f_mapped, ErrorCode::ShapeMismatch,
          "temporal_aggregate: width != f_mapped");
  if (cfg.variant == EncoderVariant::AveragePool) return row_mean(mapped);
  return attention_pool(mapped, params.temporal, cfg.temporal).pooled;
}

SpeakerEmbedding cross_sample_aggregate(const Matrix& sample_embeddings,
                                        const EncoderParams& params,
                                        const EncoderConfig& cfg,
                                        std::vector<double>* weights_out) {
  require(sample_embeddings.rows() >= 1, ErrorCode::EmptyInput,
          "cross_sample_aggregate: no samples");
  require(sample_embeddings.rows() <= cfg.max_cloning_samples,
          ErrorCode::TooManySamples,
          "cross_sample_aggregate: more samples than max_cloning_samples");
  require(sample_embeddings.cols() == cfg.f_mapped, ErrorCode::ShapeMismatch,
          "cross_sample_aggregate: width != f_mapped");

  AttentionCache cache =
      attention_forward(sample_embeddings, params.cross, cfg.cross);
  Matrix projected = matmul(sample_embeddings, params.w_embed);
  if (weights_out) *weights_out = cache.weights;
  return pool_with_weights(projected, cache.weights);
}

EncoderForward encode_features(const std::vector<Matrix>& mels,
                               const EncoderParams& params,
                               const EncoderConfig& cfg) {
  cfg.validate();
  require(!mels.empty(), ErrorCode::EmptyInput,
          "encode_features: no cloning samples");
  require(mels.size() <= cfg.max_cloning_samples, ErrorCode::TooManySamples,
          "encode_features: " + std::to_string(mels.size()) +
              " samples exceed the limit of " +
              std::to_string(cfg.max_cloning_samples));

  EncoderForward f;
  f.mels = mels;
  f.sample_embeddings = Matrix(mels.size(), cfg.f_mapped);
  for (size_t j = 0; j < mels.size(); ++j) {
    Matrix pre = spectral_pre(mels[j], params, cfg);
    Matrix mapped = elu_matrix(pre);
    std::vector<double> pooled;
    if (cfg.variant == EncoderVariant::AveragePool) {
      pooled = row_mean(mapped);
    } else {
      AttentionCache cache =
          attention_forward(mapped, params.temporal, cfg.temporal);
      pooled = pool_with_weights(mapped, cache.weights);
      f.temporal_caches.push_back(std::move(cache));
    }
    for (size_t c = 0; c < cfg.f_mapped; ++c)
      f.sample_embeddings(j, c) = pooled[c];
    f.spec_pre.push_back(std::move(pre));
    f.mapped.push_back(std::move(mapped));
  }

  f.cross_cache =
      attention_forward(f.sample_embeddings, params.cross, cfg.cross);
  f.projected = matmul(f.sample_embeddings, params.w_embed);
  f.embedding = pool_with_weights(f.projected, f.cross_cache.weights);
  return f;
}

EncoderGrads encoder_backward(const EncoderForward& fwd,
                              const EncoderParams& params,
                              const EncoderConfig& cfg,
                              std::span<const double> upstream) {
  require(upstream.size() == cfg.d_embedding, ErrorCode::ShapeMismatch,
          "encoder_backward: upstream length != d_embedding");
  EncoderGrads grads = EncoderGrads::zeros(cfg);
  size_t n_samples = fwd.sample_embeddings.rows();
  const std::vector<double>& cross_w = fwd.cross_cache.weights;

  // embedding = sum_j a_j * projected[j], projected = E * w_embed
  Matrix grad_projected(n_samples, cfg.d_embedding);
  std::vector<double> grad_cross_w(n_samples);
  for (size_t j = 0; j < n_samples; ++j) {
    grad_cross_w[j] = dot(fwd.projected.row(j), upstream);
    for (size_t d = 0; d < cfg.d_embedding; ++d)
      grad_projected(j, d) = cross_w[j] * upstream[d];
  }
  add_inplace(grads.w_embed,
              matmul_tn(fwd.sample_embeddings, grad_projected));
  Matrix grad_samples = matmul_nt(grad_projected, params.w_embed);

  attention_backward(fwd.cross_cache, params.cross, cfg.cross, grad_cross_w,
                     grads.cross, grad_samples);

  for (size_t j = 0; j < n_samples; ++j) {
    std::span<const double> grad_e = grad_samples.row(j);
    const Matrix& mapped = fwd.mapped[j];
    size_t frames = mapped.rows();

    Matrix grad_mapped(frames, cfg.f_mapped);
    if (cfg.variant == EncoderVariant::AveragePool) {
      double inv = 1.0 / static_cast<double>(frames);
      for (size_t t = 0; t < frames; ++t)
        for (size_t c = 0; c < cfg.f_mapped; ++c)
          grad_mapped(t, c) = grad_e[c] * inv;
    } else {
      const AttentionCache& cache = fwd.temporal_caches[j];
      std::vector<double> grad_w(frames);
      for (size_t t = 0; t < frames; ++t) {
        grad_w[t] = dot(mapped.row(t), grad_e);
        for (size_t c = 0; c < cfg.f_mapped; ++c)
          grad_mapped(t, c) = cache.weights[t] * grad_e[c];
      }
      attention_backward(cache, params.temporal, cfg.temporal, grad_w,
                         grads.temporal, grad_mapped);
    }

    const Matrix& pre = fwd.spec_pre[j];
    Matrix grad_pre(frames, cfg.f_mapped);
    for (size_t i = 0; i < pre.size(); ++i)
      grad_pre.data()[i] =
          grad_mapped.data()[i] * elu_derivative(pre.data()[i]);
    add_inplace(grads.w_spec, matmul_tn(fwd.mels[j], grad_pre));
  }
  return grads;
}

SpeakerEmbedding encode_speaker(const std::vector<AudioClip>& samples,
                                const DspConfig& dsp_cfg,
                                const EncoderConfig& cfg,
                                const EncoderParams& params) {
  cfg.validate();
  require(!samples.empty(), ErrorCode::EmptyInput,
          "encode_speaker: no cloning samples");
  require(samples.size() <= cfg.max_cloning_samples,
          ErrorCode::TooManySamples,
          "encode_speaker: " + std::to_string(samples.size()) +
              " samples exceed the limit of " +
              std::to_string(cfg.max_cloning_samples));

  std::vector<Matrix> mels;
  for (size_t i = 0; i < samples.size(); ++i) {
    require(samples[i].sample_rate == dsp_cfg.sample_rate,
            ErrorCode::SampleRateMismatch,
            "encode_speaker: sample " + std::to_string(i) + " has rate " +
                std::to_string(samples[i].sample_rate));
    AudioClip trimmed = trim_silence(samples[i], dsp_cfg.vad_threshold_db);
    require(trimmed.samples.size() >= static_cast<size_t>(dsp_cfg.fft_size),
            ErrorCode::SampleTooShort,
            "encode_speaker: sample " + std::to_string(i) +
                " is too short after VAD trimming");
    mels.push_back(melspectrogram(trimmed, dsp_cfg).values);
  }
  return encode_features(mels, params, cfg).embedding;
}

size_t encoder_param_count(const EncoderConfig& cfg) {
  size_t n = 0;
  EncoderGrads g = EncoderGrads::zeros(cfg);
  visit_encoder_tensors(g, [&](const std::string&, double*, size_t len) {
    n += len;
  });
  return n;
}

std::vector<double> flatten_encoder(const EncoderParams& params) {
  std::vector<double> flat;
  visit_encoder_tensors(const_cast<EncoderParams&>(params),
                        [&](const std::string&, double* p, size_t len) {
                          flat.insert(flat.end(), p, p + len);
                        });
  return flat;
}

std::vector<double> flatten_encoder(const EncoderGrads& grads) {
  std::vector<double> flat;
  visit_encoder_tensors(const_cast<EncoderGrads&>(grads),
                        [&](const std::string&, double* p, size_t len) {
                          flat.insert(flat.end(), p, p + len);
                        });
  return flat;
}

EncoderParams unflatten_encoder(std::span<const double> flat,
                                const EncoderConfig& cfg) {
  Rng throwaway(0);
  EncoderParams p = EncoderParams::init(cfg, throwaway);
  size_t off = 0;
  visit_encoder_tensors(p, [&](const std::string&, double* dst, size_t len) {
    require(off + len <= flat.size(), ErrorCode::ShapeMismatch,
            "unflatten_encoder: buffer too small");
    std::memcpy(dst, flat.data() + off, len * sizeof(double));
    off += len;
  });
  require(off == flat.size(), ErrorCode::ShapeMismatch,
          "unflatten_encoder: buffer size mismatch");
  return p;
}

namespace {
constexpr char kParamsMagic[8] = {'V', 'C', 'P', 'A', 'R', 'A', 'M', '1'};
}

void save_params(const EncoderParams& params, const std::string& path) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  require(out.good(), ErrorCode::IoError, "cannot write " + path);
  out.write(kParamsMagic, sizeof(kParamsMagic));
  std::vector<double> flat = flatten_encoder(params);
  uint64_t n = flat.size();
  out.write(reinterpret_cast<const char*>(&n), sizeof(n));
  out.write(reinterpret_cast<const char*>(flat.data()),
            static_cast<std::streamsize>(flat.size() * sizeof(double)));
  require(out.good(), ErrorCode::IoError, "write failed for " + path);
}

EncoderParams load_params(const std::string& path, const EncoderConfig& cfg) {
  std::ifstream in(path, std::ios::binary);
  require(in.good(), ErrorCode::FileNotFound, "cannot open " + path);
  char magic[8];
  in.read(magic, sizeof(magic));
  require(in.good() && std::memcmp(magic, kParamsMagic, 8) == 0,
          ErrorCode::CorruptHeader, path + ": not a parameter file");
  uint64_t n = 0;
  in.read(reinterpret_cast<char*>(&n), sizeof(n));
  require(in.good() && n == encoder_param_count(cfg), ErrorCode::ShapeMismatch,
          path + ": parameter count does not match the configuration");
  std::vector<double> flat(n);
  in.read(reinterpret_cast<char*>(flat.data()),
          static_cast<std::streamsize>(n * sizeof(double)));
  require(in.good(), ErrorCode::CorruptHeader, path + ": truncated file");
  return unflatten_encoder(flat, cfg);
}

}  // namespace vc
