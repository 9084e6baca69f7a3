#include "voclone.h"

#include <algorithm>
#include <cstdio>
#include <cstdlib>
#include <cstring>
#include <fstream>
#include <iostream>
#include <string>
#include <vector>

#include "core/enhancement.hpp"
#include "core/enrollment.hpp"
#include "core/errors.hpp"
#include "core/hyperparams.hpp"
#include "core/melfile.hpp"
#include "core/speaker_encoder.hpp"
#include "core/toy_corpus.hpp"
#include "core/training.hpp"
#include "core/vocoder.hpp"

struct vc_config {
  vc::Hyperparams hp;
  std::string ignored_joined;
};

struct vc_audio {
  vc::AudioClip clip;
};

struct vc_mel {
  vc::MelFile mf;
};

struct vc_params {
  vc::EncoderParams params;
};

struct vc_store {
  vc::EmbeddingStore store;
};

namespace {

thread_local std::string g_last_error;

vc_status map_code(vc::ErrorCode code) {
  using vc::ErrorCode;
  switch (code) {
    case ErrorCode::FileNotFound: return VC_ERR_FILE_NOT_FOUND;
    case ErrorCode::UnsupportedFormat: return VC_ERR_UNSUPPORTED_FORMAT;
    case ErrorCode::CorruptHeader: return VC_ERR_CORRUPT_HEADER;
    case ErrorCode::IoError: return VC_ERR_IO;
    case ErrorCode::EmptyClip: return VC_ERR_EMPTY_CLIP;
    case ErrorCode::EmptyInput: return VC_ERR_EMPTY_INPUT;
    case ErrorCode::SignalTooShort: return VC_ERR_SIGNAL_TOO_SHORT;
    case ErrorCode::SampleRateMismatch: return VC_ERR_SAMPLE_RATE_MISMATCH;
    case ErrorCode::DegenerateFilter: return VC_ERR_DEGENERATE_FILTER;
    case ErrorCode::ShapeMismatch: return VC_ERR_SHAPE_MISMATCH;
    case ErrorCode::ConfigInvalid: return VC_ERR_CONFIG_INVALID;
    case ErrorCode::TooManySamples: return VC_ERR_TOO_MANY_SAMPLES;
    case ErrorCode::SampleTooShort: return VC_ERR_SAMPLE_TOO_SHORT;
    case ErrorCode::LabelOutOfRange: return VC_ERR_LABEL_OUT_OF_RANGE;
    case ErrorCode::DatasetTooSmall: return VC_ERR_DATASET_TOO_SMALL;
    case ErrorCode::DuplicateSpeaker: return VC_ERR_DUPLICATE_SPEAKER;
    case ErrorCode::ZeroVector: return VC_ERR_ZERO_VECTOR;
    case ErrorCode::LengthMismatch: return VC_ERR_LENGTH_MISMATCH;
    case ErrorCode::EmptyStore: return VC_ERR_EMPTY_STORE;
    case ErrorCode::StoreMismatch: return VC_ERR_STORE_MISMATCH;
    case ErrorCode::Internal: return VC_ERR_INTERNAL;
  }
  return VC_ERR_INTERNAL;
}

template <typename Fn>
vc_status guarded(Fn&& fn) {
  try {
    fn();
    return VC_OK;
  } catch (const vc::Error& e) {
    g_last_error = e.what();
    return map_code(e.code());
  } catch (const std::exception& e) {
    g_last_error = e.what();
    return VC_ERR_INTERNAL;
  }
}

vc_status invalid_argument(const char* what) {
  g_last_error = std::string("invalid argument: ") + what;
  return VC_ERR_INVALID_ARGUMENT;
}

char* dup_string(const std::string& s) {
  char* out = static_cast<char*>(std::malloc(s.size() + 1));
  std::memcpy(out, s.c_str(), s.size() + 1);
  return out;
}

vc_config* make_config(vc::Hyperparams hp) {
  auto* cfg = new vc_config{std::move(hp), {}};
  for (size_t i = 0; i < cfg->hp.ignored_keys.size(); ++i) {
    if (i) cfg->ignored_joined += ',';
    cfg->ignored_joined += cfg->hp.ignored_keys[i];
  }
  return cfg;
}

vc::EnhancementMethod enhance_method(const char* name) {
  vc::EnhancementMethod method;
  method.selector = vc::enhance_from_string(name ? name : "none");
  return method;
}

}  // namespace

extern "C" {

const char* vc_last_error(void) { return g_last_error.c_str(); }

const char* vc_status_name(vc_status status) {
  switch (status) {
    case VC_OK: return "ok";
    case VC_ERR_INTERNAL: return "internal";
    case VC_ERR_FILE_NOT_FOUND: return "file_not_found";
    case VC_ERR_UNSUPPORTED_FORMAT: return "unsupported_format";
    case VC_ERR_CORRUPT_HEADER: return "corrupt_header";
    case VC_ERR_IO: return "io";
    case VC_ERR_EMPTY_CLIP: return "empty_clip";
    case VC_ERR_EMPTY_INPUT: return "empty_input";
    case VC_ERR_SIGNAL_TOO_SHORT: return "signal_too_short";
    case VC_ERR_SAMPLE_RATE_MISMATCH: return "sample_rate_mismatch";
    case VC_ERR_DEGENERATE_FILTER: return "degenerate_filter";
    case VC_ERR_SHAPE_MISMATCH: return "shape_mismatch";
    case VC_ERR_CONFIG_INVALID: return "config_invalid";
    case VC_ERR_TOO_MANY_SAMPLES: return "too_many_samples";
    case VC_ERR_SAMPLE_TOO_SHORT: return "sample_too_short";
    case VC_ERR_LABEL_OUT_OF_RANGE: return "label_out_of_range";
    case VC_ERR_DATASET_TOO_SMALL: return "dataset_too_small";
    case VC_ERR_DUPLICATE_SPEAKER: return "duplicate_speaker";
    case VC_ERR_ZERO_VECTOR: return "zero_vector";
    case VC_ERR_LENGTH_MISMATCH: return "length_mismatch";
    case VC_ERR_EMPTY_STORE: return "empty_store";
    case VC_ERR_STORE_MISMATCH: return "store_mismatch";
    case VC_ERR_INVALID_ARGUMENT: return "invalid_argument";
  }
  return "unknown";
}

void vc_string_free(char* s) { std::free(s); }

/* -------------------------------- config ------------------------------- */

vc_status vc_config_default(vc_config** out) {
  if (!out) return invalid_argument("out is null");
  return guarded([&] { *out = make_config(vc::default_hyperparams()); });
}

vc_status vc_config_toy(vc_config** out) {
  if (!out) return invalid_argument("out is null");
  return guarded([&] {
    vc::Hyperparams hp;
    hp.dsp = vc::toy_dsp_config();
    hp.encoder = vc::toy_encoder_config(vc::EncoderVariant::SelfAttention);
    *out = make_config(std::move(hp));
  });
}

vc_status vc_config_load_file(const char* path, vc_config** out) {
  if (!path || !out) return invalid_argument("path/out is null");
  return guarded([&] { *out = make_config(vc::load_hyperparams_file(path)); });
}

vc_status vc_config_parse(const char* text, vc_config** out) {
  if (!text || !out) return invalid_argument("text/out is null");
  return guarded([&] { *out = make_config(vc::parse_hyperparams(text)); });
}

void vc_config_free(vc_config* cfg) { delete cfg; }

vc_status vc_config_set_variant(vc_config* cfg, const char* variant) {
  if (!cfg || !variant) return invalid_argument("cfg/variant is null");
  return guarded(
      [&] { cfg->hp.encoder.variant = vc::variant_from_string(variant); });
}

int vc_config_sample_rate(const vc_config* cfg) {
  return cfg ? cfg->hp.dsp.sample_rate : 0;
}

int vc_config_embedding_dim(const vc_config* cfg) {
  return cfg ? static_cast<int>(cfg->hp.encoder.d_embedding) : 0;
}

int vc_config_max_cloning_samples(const vc_config* cfg) {
  return cfg ? static_cast<int>(cfg->hp.encoder.max_cloning_samples) : 0;
}

int vc_config_num_mels(const vc_config* cfg) {
  return cfg ? cfg->hp.dsp.num_mels : 0;
}

double vc_config_vocoder_power(const vc_config* cfg) {
  return cfg ? cfg->hp.vocoder_power : 0.0;
}

const char* vc_config_ignored_keys(const vc_config* cfg) {
  return cfg ? cfg->ignored_joined.c_str() : "";
}

/* -------------------------------- audio -------------------------------- */

vc_status vc_audio_load_wav(const char* path, vc_audio** out) {
  if (!path || !out) return invalid_argument("path/out is null");
  return guarded([&] { *out = new vc_audio{vc::load_wav(path)}; });
}

vc_status vc_audio_save_wav(const vc_audio* audio, const char* path) {
  if (!audio || !path) return invalid_argument("audio/path is null");
  return guarded([&] { vc::save_wav(audio->clip, path); });
}

vc_status vc_audio_from_samples(const double* samples, size_t count,
                                int sample_rate, vc_audio** out) {
  if (!samples || !out) return invalid_argument("samples/out is null");
  return guarded([&] {
    vc::require(sample_rate > 0, vc::ErrorCode::ConfigInvalid,
                "sample rate must be positive");
    vc::AudioClip clip;
    clip.sample_rate = sample_rate;
    clip.samples.assign(samples, samples + count);
    for (auto& s : clip.samples) s = std::clamp(s, -1.0, 1.0);
    *out = new vc_audio{std::move(clip)};
  });
}

vc_status vc_audio_resample(const vc_audio* audio, int target_rate,
                            vc_audio** out) {
  if (!audio || !out) return invalid_argument("audio/out is null");
  return guarded(
      [&] { *out = new vc_audio{vc::resample(audio->clip, target_rate)}; });
}

vc_status vc_audio_trim_silence(const vc_audio* audio, const vc_config* cfg,
                                vc_audio** out) {
  if (!audio || !cfg || !out) return invalid_argument("audio/cfg/out is null");
  return guarded([&] {
    *out = new vc_audio{
        vc::trim_silence(audio->clip, cfg->hp.dsp.vad_threshold_db)};
  });
}

vc_status vc_audio_enhance(const vc_audio* audio, const vc_config* cfg,
                           const char* method, vc_audio** out) {
  if (!audio || !cfg || !out) return invalid_argument("audio/cfg/out is null");
  return guarded([&] {
    *out = new vc_audio{
        vc::enhance(audio->clip, enhance_method(method), cfg->hp.dsp)};
  });
}

size_t vc_audio_length(const vc_audio* audio) {
  return audio ? audio->clip.samples.size() : 0;
}

int vc_audio_sample_rate(const vc_audio* audio) {
  return audio ? audio->clip.sample_rate : 0;
}

const double* vc_audio_samples(const vc_audio* audio) {
  return audio ? audio->clip.samples.data() : nullptr;
}

void vc_audio_free(vc_audio* audio) { delete audio; }

/* --------------------------------- mel --------------------------------- */

vc_status vc_mel_compute(const vc_audio* audio, const vc_config* cfg,
                         vc_mel** out) {
  if (!audio || !cfg || !out) return invalid_argument("audio/cfg/out is null");
  return guarded([&] {
    vc::MelFile mf;
    mf.mel = vc::melspectrogram(audio->clip, cfg->hp.dsp);
    mf.fft_size = cfg->hp.dsp.fft_size;
    mf.hop_size = cfg->hp.dsp.hop_size;
    mf.sample_rate = cfg->hp.dsp.sample_rate;
    *out = new vc_mel{std::move(mf)};
  });
}

size_t vc_mel_frames(const vc_mel* mel) {
  return mel ? mel->mf.mel.frame_count() : 0;
}

size_t vc_mel_bands(const vc_mel* mel) {
  return mel ? mel->mf.mel.num_mels() : 0;
}

const double* vc_mel_data(const vc_mel* mel) {
  return mel ? mel->mf.mel.values.data() : nullptr;
}

vc_status vc_mel_save(const vc_mel* mel, const char* path) {
  if (!mel || !path) return invalid_argument("mel/path is null");
  return guarded([&] { vc::save_mel_file(mel->mf, path); });
}

vc_status vc_mel_load(const char* path, vc_mel** out) {
  if (!path || !out) return invalid_argument("path/out is null");
  return guarded([&] { *out = new vc_mel{vc::load_mel_file(path)}; });
}

void vc_mel_free(vc_mel* mel) { delete mel; }

vc_status vc_vocode_mel(const vc_mel* mel, const vc_config* cfg,
                        int iterations, double power, vc_audio** out) {
  if (!mel || !cfg || !out) return invalid_argument("mel/cfg/out is null");
  return guarded([&] {
    const vc::DspConfig& dsp = cfg->hp.dsp;
    vc::require(mel->mf.fft_size == dsp.fft_size &&
                    mel->mf.hop_size == dsp.hop_size &&
                    mel->mf.sample_rate == dsp.sample_rate,
                vc::ErrorCode::ShapeMismatch,
                "mel file STFT geometry does not match the configuration");
    double p = power > 0.0 ? power : cfg->hp.vocoder_power;
    *out = new vc_audio{vc::vocode_mel(mel->mf.mel, dsp, iterations, p)};
  });
}

/* ------------------------------- params -------------------------------- */

vc_status vc_params_init(const vc_config* cfg, uint64_t seed,
                         vc_params** out) {
  if (!cfg || !out) return invalid_argument("cfg/out is null");
  return guarded([&] {
    vc::Rng rng(seed);
    *out = new vc_params{vc::EncoderParams::init(cfg->hp.encoder, rng)};
  });
}

vc_status vc_params_load(const char* path, const vc_config* cfg,
                         vc_params** out) {
  if (!path || !cfg || !out) return invalid_argument("path/cfg/out is null");
  return guarded(
      [&] { *out = new vc_params{vc::load_params(path, cfg->hp.encoder)}; });
}

vc_status vc_params_save(const vc_params* params, const char* path) {
  if (!params || !path) return invalid_argument("params/path is null");
  return guarded([&] { vc::save_params(params->params, path); });
}

void vc_params_free(vc_params* params) { delete params; }

vc_status vc_embed_clips(const vc_config* cfg, const vc_params* params,
                         const vc_audio* const* clips, size_t count,
                         double* out) {
  if (!cfg || !params || !clips || !out)
    return invalid_argument("cfg/params/clips/out is null");
  return guarded([&] {
    std::vector<vc::AudioClip> samples;
    for (size_t i = 0; i < count; ++i) {
      vc::require(clips[i] != nullptr, vc::ErrorCode::EmptyInput,
                  "clip " + std::to_string(i) + " is null");
      samples.push_back(clips[i]->clip);
    }
    vc::SpeakerEmbedding emb = vc::encode_speaker(
        samples, cfg->hp.dsp, cfg->hp.encoder, params->params);
    std::copy(emb.begin(), emb.end(), out);
  });
}

vc_status vc_embed_files(const vc_config* cfg, const vc_params* params,
                         const char* const* paths, size_t count,
                         const char* enhance, double* out) {
  if (!cfg || !params || !paths || !out)
    return invalid_argument("cfg/params/paths/out is null");
  return guarded([&] {
    std::vector<std::string> files(paths, paths + count);
    vc::SpeakerEmbedding emb =
        vc::embed_paths(files, cfg->hp.encoder, cfg->hp.dsp, params->params,
                        enhance_method(enhance));
    std::copy(emb.begin(), emb.end(), out);
  });
}

vc_status vc_cosine_similarity(const double* a, const double* b, size_t count,
                               double* out) {
  if (!a || !b || !out) return invalid_argument("a/b/out is null");
  return guarded([&] {
    *out = vc::cosine_similarity({a, count}, {b, count});
  });
}

/* -------------------------------- store -------------------------------- */

vc_status vc_store_open(const char* path, const vc_config* cfg,
                        vc_store** out) {
  if (!path || !cfg || !out) return invalid_argument("path/cfg/out is null");
  return guarded([&] {
    *out = new vc_store{vc::EmbeddingStore::open(
        path, cfg->hp.encoder.d_embedding,
        vc::config_digest(cfg->hp.dsp, cfg->hp.encoder))};
  });
}

size_t vc_store_size(const vc_store* store) {
  return store ? store->store.records().size() : 0;
}

vc_status vc_store_enroll(vc_store* store, const char* speaker_id,
                          const char* const* wav_paths, size_t count,
                          const vc_config* cfg, const vc_params* params,
                          const char* enhance) {
  if (!store || !speaker_id || !wav_paths || !cfg || !params)
    return invalid_argument("store/speaker_id/wav_paths/cfg/params is null");
  return guarded([&] {
    std::vector<std::string> files(wav_paths, wav_paths + count);
    vc::enroll(store->store, speaker_id, files, cfg->hp.encoder, cfg->hp.dsp,
               params->params, enhance_method(enhance));
  });
}

vc_status vc_store_nearest(const vc_store* store, const double* query,
                           size_t query_len, size_t k, char*** ids,
                           double** sims, size_t* result_count) {
  if (!store || !query || !ids || !sims || !result_count)
    return invalid_argument("store/query/ids/sims/result_count is null");
  return guarded([&] {
    std::vector<vc::Neighbor> found =
        vc::nearest(store->store, {query, query_len}, k);
    *result_count = found.size();
    *ids = static_cast<char**>(std::malloc(found.size() * sizeof(char*)));
    *sims = static_cast<double*>(std::malloc(found.size() * sizeof(double)));
    for (size_t i = 0; i < found.size(); ++i) {
      (*ids)[i] = dup_string(found[i].speaker_id);
      (*sims)[i] = found[i].similarity;
    }
  });
}

void vc_store_results_free(char** ids, double* sims, size_t count) {
  if (ids) {
    for (size_t i = 0; i < count; ++i) std::free(ids[i]);
    std::free(ids);
  }
  std::free(sims);
}

void vc_store_free(vc_store* store) { delete store; }

/* ------------------------- training / verification --------------------- */

vc_status vc_train_toy(const vc_config* cfg, uint64_t seed, int epochs,
                       const char* metrics_path, vc_params** out_params) {
  if (!cfg) return invalid_argument("cfg is null");
  return guarded([&] {
    const vc::EncoderConfig& enc = cfg->hp.encoder;
    vc::ToyDataset dataset = vc::make_toy_corpus(
        8, enc.max_cloning_samples + 1, 0.5, cfg->hp.dsp.sample_rate, seed);
    vc::ToyTrainResult result = vc::train_toy(dataset, enc, cfg->hp.dsp,
                                              epochs, seed, cfg->hp.adam);

    std::ofstream file;
    std::ostream* sink = &std::cout;
    if (metrics_path) {
      file.open(metrics_path, std::ios::trunc);
      vc::require(file.good(), vc::ErrorCode::IoError,
                  std::string("cannot write ") + metrics_path);
      sink = &file;
    }
    for (const auto& m : result.metrics) {
      char line[256];
      std::snprintf(line, sizeof(line),
                    "{\"epoch\":%d,\"loss\":%.10g,\"intra_cos\":%.10g,"
                    "\"inter_cos\":%.10g}",
                    m.epoch, m.loss, m.intra_cos, m.inter_cos);
      (*sink) << line << '\n';
    }
    if (out_params) *out_params = new vc_params{std::move(result.params)};
  });
}

vc_status vc_gradcheck(uint64_t seed, char** report_json, int* passed) {
  return guarded([&] {
    vc::GradCheckReport report = vc::gradient_check_suite(seed);
    if (report_json) *report_json = dup_string(report.to_json());
    if (passed) *passed = report.passes(1e-4) ? 1 : 0;
  });
}

vc_status vc_bench_enroll(const vc_config* cfg, const vc_params* params,
                          const char* const* wav_paths, size_t count,
                          const char* enhance, int repetitions,
                          char** report_json) {
  if (!cfg || !params || !wav_paths || !report_json)
    return invalid_argument("cfg/params/wav_paths/report_json is null");
  return guarded([&] {
    std::vector<std::string> files(wav_paths, wav_paths + count);
    vc::BenchReport report =
        vc::bench_enroll(files, cfg->hp.encoder, cfg->hp.dsp, params->params,
                         enhance_method(enhance), repetitions);
    *report_json = dup_string(report.to_json());
  });
}

} /* extern "C" */
