/* voclone - few-shot speaker embedding toolkit.
 *
 * C API for the shared library. All objects are opaque handles created and
 * released through these functions; every fallible call returns a vc_status
 * and reports detail through vc_last_error(). Handles are not thread-safe
 * for concurrent mutation, but distinct handles may be used from distinct
 * threads freely.
 */

#ifndef VOCLONE_H
#define VOCLONE_H

#include <stddef.h>
#include <stdint.h>

#ifdef __cplusplus
extern "C" {
#endif

typedef enum vc_status {
  VC_OK = 0,
  VC_ERR_INTERNAL = 1,
  VC_ERR_FILE_NOT_FOUND = 2,
  VC_ERR_UNSUPPORTED_FORMAT = 3,
  VC_ERR_CORRUPT_HEADER = 4,
  VC_ERR_IO = 5,
  VC_ERR_EMPTY_CLIP = 6,
  VC_ERR_EMPTY_INPUT = 7,
  VC_ERR_SIGNAL_TOO_SHORT = 8,
  VC_ERR_SAMPLE_RATE_MISMATCH = 9,
  VC_ERR_DEGENERATE_FILTER = 10,
  VC_ERR_SHAPE_MISMATCH = 11,
  VC_ERR_CONFIG_INVALID = 12,
  VC_ERR_TOO_MANY_SAMPLES = 13,
  VC_ERR_SAMPLE_TOO_SHORT = 14,
  VC_ERR_LABEL_OUT_OF_RANGE = 15,
  VC_ERR_DATASET_TOO_SMALL = 16,
  VC_ERR_DUPLICATE_SPEAKER = 17,
  VC_ERR_ZERO_VECTOR = 18,
  VC_ERR_LENGTH_MISMATCH = 19,
  VC_ERR_EMPTY_STORE = 20,
  VC_ERR_STORE_MISMATCH = 21,
  VC_ERR_INVALID_ARGUMENT = 22
} vc_status;

/* Message for the most recent failing call on this thread. */
const char* vc_last_error(void);
const char* vc_status_name(vc_status status);

/* Frees strings returned through char** out-parameters. */
void vc_string_free(char* s);

/* ------------------------------------------------------------------ */
/* Configuration                                                       */

typedef struct vc_config vc_config;

/* Default settings (the 22.05 kHz / 80-mel / 256-dim preset). */
vc_status vc_config_default(vc_config** out);

/* Small preset sized for the synthetic training demo. */
vc_status vc_config_toy(vc_config** out);

/* Loads a hyperparameter JSON file. Unrecognized keys are collected and
 * readable via vc_config_ignored_keys(). */
vc_status vc_config_load_file(const char* path, vc_config** out);
vc_status vc_config_parse(const char* text, vc_config** out);
void vc_config_free(vc_config* cfg);

/* "t1" (average pooling) or "t2" (self-attention). */
vc_status vc_config_set_variant(vc_config* cfg, const char* variant);

int vc_config_sample_rate(const vc_config* cfg);
int vc_config_embedding_dim(const vc_config* cfg);
int vc_config_max_cloning_samples(const vc_config* cfg);
int vc_config_num_mels(const vc_config* cfg);
double vc_config_vocoder_power(const vc_config* cfg);

/* Comma-separated list of keys the loader ignored; empty string if none.
 * Owned by the handle. */
const char* vc_config_ignored_keys(const vc_config* cfg);

/* ------------------------------------------------------------------ */
/* Audio                                                               */

typedef struct vc_audio vc_audio;

vc_status vc_audio_load_wav(const char* path, vc_audio** out);
vc_status vc_audio_save_wav(const vc_audio* audio, const char* path);
vc_status vc_audio_from_samples(const double* samples, size_t count,
                                int sample_rate, vc_audio** out);
vc_status vc_audio_resample(const vc_audio* audio, int target_rate,
                            vc_audio** out);
/* VAD trim at the configured threshold; may yield an empty clip. */
vc_status vc_audio_trim_silence(const vc_audio* audio, const vc_config* cfg,
                                vc_audio** out);
/* method: "none" or "gate". */
vc_status vc_audio_enhance(const vc_audio* audio, const vc_config* cfg,
                           const char* method, vc_audio** out);
size_t vc_audio_length(const vc_audio* audio);
int vc_audio_sample_rate(const vc_audio* audio);
const double* vc_audio_samples(const vc_audio* audio);
void vc_audio_free(vc_audio* audio);

/* ------------------------------------------------------------------ */
/* Mel spectrograms                                                    */

typedef struct vc_mel vc_mel;

vc_status vc_mel_compute(const vc_audio* audio, const vc_config* cfg,
                         vc_mel** out);
size_t vc_mel_frames(const vc_mel* mel);
size_t vc_mel_bands(const vc_mel* mel);
/* Row-major frames x bands. Owned by the handle. */
const double* vc_mel_data(const vc_mel* mel);
vc_status vc_mel_save(const vc_mel* mel, const char* path);
vc_status vc_mel_load(const char* path, vc_mel** out);
void vc_mel_free(vc_mel* mel);

/* Griffin-Lim resynthesis of a mel spectrogram. power <= 0 selects the
 * configured sharpening exponent. */
vc_status vc_vocode_mel(const vc_mel* mel, const vc_config* cfg,
                        int iterations, double power, vc_audio** out);

/* ------------------------------------------------------------------ */
/* Encoder parameters and embeddings                                   */

typedef struct vc_params vc_params;

vc_status vc_params_init(const vc_config* cfg, uint64_t seed,
                         vc_params** out);
vc_status vc_params_load(const char* path, const vc_config* cfg,
                         vc_params** out);
vc_status vc_params_save(const vc_params* params, const char* path);
void vc_params_free(vc_params* params);

/* Embedding of up to J clips; out must hold vc_config_embedding_dim(cfg)
 * doubles. */
vc_status vc_embed_clips(const vc_config* cfg, const vc_params* params,
                         const vc_audio* const* clips, size_t count,
                         double* out);
/* Convenience wrapper: load WAVs (resampling if needed), enhance, encode. */
vc_status vc_embed_files(const vc_config* cfg, const vc_params* params,
                         const char* const* paths, size_t count,
                         const char* enhance_method, double* out);

vc_status vc_cosine_similarity(const double* a, const double* b, size_t count,
                               double* out);

/* ------------------------------------------------------------------ */
/* Enrollment store                                                    */

typedef struct vc_store vc_store;

/* Opens (creating on first save) the JSON store at path. The store is bound
 * to the configuration's embedding dimension and digest. */
vc_status vc_store_open(const char* path, const vc_config* cfg,
                        vc_store** out);
size_t vc_store_size(const vc_store* store);
vc_status vc_store_enroll(vc_store* store, const char* speaker_id,
                          const char* const* wav_paths, size_t count,
                          const vc_config* cfg, const vc_params* params,
                          const char* enhance_method);
/* Top-k by cosine similarity. ids/sims receive arrays of *result_count
 * entries; release with vc_store_results_free. */
vc_status vc_store_nearest(const vc_store* store, const double* query,
                           size_t query_len, size_t k, char*** ids,
                           double** sims, size_t* result_count);
void vc_store_results_free(char** ids, double* sims, size_t count);
void vc_store_free(vc_store* store);

/* ------------------------------------------------------------------ */
/* Training, verification, benchmarking                                */

/* Trains the toy classifier objective on the built-in synthetic corpus and
 * returns the trained parameters. Per-epoch metrics are written as JSON
 * lines to metrics_path (NULL for stdout). */
vc_status vc_train_toy(const vc_config* cfg, uint64_t seed, int epochs,
                       const char* metrics_path, vc_params** out_params);

/* Finite-difference check of every parameter group, both variants. The JSON
 * report goes to *report_json (free with vc_string_free); *passed is set to
 * 1 when the worst relative error is within 1e-4. */
vc_status vc_gradcheck(uint64_t seed, char** report_json, int* passed);

/* Times the enrollment pipeline over the given clips. The JSON report
 * includes min/median/max seconds and the published reference costs. */
vc_status vc_bench_enroll(const vc_config* cfg, const vc_params* params,
                          const char* const* wav_paths, size_t count,
                          const char* enhance_method, int repetitions,
                          char** report_json);

#ifdef __cplusplus
} /* extern "C" */
#endif

#endif /* VOCLONE_H */
