#pragma once

#include <optional>
#include <string>
#include <vector>

#include "core/enhancement.hpp"
#include "core/speaker_encoder.hpp"

namespace vc {

struct EnrollmentRecord {
  std::string speaker_id;
  SpeakerEmbedding embedding;
  int sample_count = 0;
  std::string created_at;     // ISO 8601 UTC
  std::string config_digest;
};

// On-disk speaker registry: one JSON document, replaced atomically on save.
class EmbeddingStore {
public:
  static constexpr int kFormatVersion = 1;

  // Loads the store at path, or prepares an empty one if the file does not
  // exist yet.
  static EmbeddingStore open(const std::string& path, size_t d_embedding,
                             const std::string& config_digest);

  const std::string& path() const { return path_; }
  size_t d_embedding() const { return d_embedding_; }
  const std::string& config_digest() const { return digest_; }
  const std::vector<EnrollmentRecord>& records() const { return records_; }
  bool contains(const std::string& speaker_id) const;

  // Validates the record against the store invariants and persists
  // atomically (write to a temp file, then rename).
  void add(EnrollmentRecord record);

private:
  std::string path_;
  size_t d_embedding_ = 0;
  std::string digest_;
  std::vector<EnrollmentRecord> records_;

  void save() const;
};

double cosine_similarity(std::span<const double> a, std::span<const double> b);

struct Neighbor {
  std::string speaker_id;
  double similarity = 0.0;
};

// Top-k records by cosine similarity, descending; ties broken by id.
std::vector<Neighbor> nearest(const EmbeddingStore& store,
                              std::span<const double> query, size_t k);

// Load, optionally enhance, encode, persist.
EnrollmentRecord enroll(EmbeddingStore& store, const std::string& speaker_id,
                        const std::vector<std::string>& sample_paths,
                        const EncoderConfig& enc_cfg, const DspConfig& dsp_cfg,
                        const EncoderParams& params,
                        const EnhancementMethod& enhance_method);

// Embedding for a set of clips outside any store (the `embed` and `similar`
// entry points).
SpeakerEmbedding embed_paths(const std::vector<std::string>& sample_paths,
                             const EncoderConfig& enc_cfg,
                             const DspConfig& dsp_cfg,
                             const EncoderParams& params,
                             const EnhancementMethod& enhance_method);

struct BenchReport {
  int repetitions = 0;
  double min_seconds = 0.0;
  double median_seconds = 0.0;
  double max_seconds = 0.0;
  // Published reference costs for the two enrollment routes; the adaptation
  // route is out of scope here and reported for context only.
  double reference_encoder_seconds = 11.0;
  double reference_adaptation_minutes = 15.0;

  std::string to_json() const;
};

// Times the full enrollment pipeline (load, enhance, encode) without store
// persistence.
BenchReport bench_enroll(const std::vector<std::string>& sample_paths,
                         const EncoderConfig& enc_cfg,
                         const DspConfig& dsp_cfg,
                         const EncoderParams& params,
                         const EnhancementMethod& enhance_method,
                         int repetitions);

}  // namespace vc
