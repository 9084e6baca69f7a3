#include "core/enrollment.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <ctime>
#include <filesystem>
#include <fstream>

#include <nlohmann/json.hpp>

#include "core/audio_io.hpp"
#include "core/errors.hpp"

namespace vc {

using nlohmann::json;

namespace {

std::string utc_now_iso8601() {
  auto now = std::chrono::system_clock::now();
  std::time_t t = std::chrono::system_clock::to_time_t(now);
  std::tm tm{};
  gmtime_r(&t, &tm);
  char buf[32];
  std::strftime(buf, sizeof(buf), "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

}  // namespace

EmbeddingStore EmbeddingStore::open(const std::string& path,
                                    size_t d_embedding,
                                    const std::string& config_digest) {
  EmbeddingStore store;
  store.path_ = path;
  store.d_embedding_ = d_embedding;
  store.digest_ = config_digest;

  std::ifstream in(path);
  if (!in.good()) return store;  // fresh store

  json doc;
  try {
    in >> doc;
  } catch (const json::exception& e) {
    fail(ErrorCode::CorruptHeader,
         path + ": store is not valid JSON: " + e.what());
  }
  require(doc.value("format_version", -1) == kFormatVersion,
          ErrorCode::CorruptHeader, path + ": unsupported store version");
  require(doc.value("d_embedding", size_t{0}) == d_embedding,
          ErrorCode::StoreMismatch,
          path + ": store embedding dimension differs from the configuration");
  require(doc.value("config_digest", std::string{}) == config_digest,
          ErrorCode::StoreMismatch,
          path + ": store was built with a different configuration");

  for (const auto& rec : doc.at("records")) {
    EnrollmentRecord r;
    r.speaker_id = rec.at("speaker_id").get<std::string>();
    r.embedding = rec.at("embedding").get<std::vector<double>>();
    r.sample_count = rec.at("sample_count").get<int>();
    r.created_at = rec.at("created_at").get<std::string>();
    r.config_digest = config_digest;
    require(r.embedding.size() == d_embedding, ErrorCode::CorruptHeader,
            path + ": record " + r.speaker_id + " has a malformed embedding");
    store.records_.push_back(std::move(r));
  }
  return store;
}

bool EmbeddingStore::contains(const std::string& speaker_id) const {
  for (const auto& r : records_)
    if (r.speaker_id == speaker_id) return true;
  return false;
}

void EmbeddingStore::add(EnrollmentRecord record) {
  require(!record.speaker_id.empty(), ErrorCode::ConfigInvalid,
          "enroll: empty speaker id");
  require(!contains(record.speaker_id), ErrorCode::DuplicateSpeaker,
          "speaker '" + record.speaker_id + "' is already enrolled");
  require(record.embedding.size() == d_embedding_, ErrorCode::ShapeMismatch,
          "enroll: embedding length does not match the store");
  require(record.config_digest == digest_, ErrorCode::StoreMismatch,
          "enroll: record configuration differs from the store");
  records_.push_back(std::move(record));
  try {
    save();
  } catch (...) {
    records_.pop_back();  // keep memory consistent with disk
    throw;
  }
}

void EmbeddingStore::save() const {
  json doc;
  doc["format_version"] = kFormatVersion;
  doc["d_embedding"] = d_embedding_;
  doc["config_digest"] = digest_;
  json recs = json::array();
  for (const auto& r : records_) {
    recs.push_back({{"speaker_id", r.speaker_id},
                    {"embedding", r.embedding},
                    {"sample_count", r.sample_count},
                    {"created_at", r.created_at}});
  }
  doc["records"] = std::move(recs);

  std::string tmp = path_ + ".tmp";
  {
    std::ofstream out(tmp, std::ios::trunc);
    require(out.good(), ErrorCode::IoError, "cannot write " + tmp);
    out << doc.dump(2) << '\n';
    require(out.good(), ErrorCode::IoError, "write failed for " + tmp);
  }
  std::error_code ec;
  std::filesystem::rename(tmp, path_, ec);
  require(!ec, ErrorCode::IoError,
          "rename failed for " + path_ + ": " + ec.message());
}

double cosine_similarity(std::span<const double> a,
                         std::span<const double> b) {
  require(a.size() == b.size(), ErrorCode::LengthMismatch,
          "cosine_similarity: length mismatch");
  double na = std::sqrt(dot(a, a));
  double nb = std::sqrt(dot(b, b));
  require(na > 0.0 && nb > 0.0, ErrorCode::ZeroVector,
          "cosine_similarity: zero vector");
  return dot(a, b) / (na * nb);
}

std::vector<Neighbor> nearest(const EmbeddingStore& store,
                              std::span<const double> query, size_t k) {
  require(!store.records().empty(), ErrorCode::EmptyStore,
          "nearest: store is empty");
  require(k >= 1, ErrorCode::ConfigInvalid, "nearest: k must be >= 1");

  std::vector<Neighbor> out;
  for (const auto& r : store.records())
    out.push_back({r.speaker_id, cosine_similarity(query, r.embedding)});
  std::sort(out.begin(), out.end(), [](const Neighbor& a, const Neighbor& b) {
    if (a.similarity != b.similarity) return a.similarity > b.similarity;
    return a.speaker_id < b.speaker_id;
  });
  if (out.size() > k) out.resize(k);
  return out;
}

SpeakerEmbedding embed_paths(const std::vector<std::string>& sample_paths,
                             const EncoderConfig& enc_cfg,
                             const DspConfig& dsp_cfg,
                             const EncoderParams& params,
                             const EnhancementMethod& enhance_method) {
  require(!sample_paths.empty(), ErrorCode::EmptyInput,
          "embed: no sample paths");
  std::vector<AudioClip> clips;
  for (const auto& path : sample_paths) {
    try {
      AudioClip clip = load_wav(path);
      if (clip.sample_rate != dsp_cfg.sample_rate)
        clip = resample(clip, dsp_cfg.sample_rate);
      clips.push_back(enhance(clip, enhance_method, dsp_cfg));
    } catch (const Error& e) {
      throw Error(e.code(), path + ": " + e.what());
    }
  }
  return encode_speaker(clips, dsp_cfg, enc_cfg, params);
}

EnrollmentRecord enroll(EmbeddingStore& store, const std::string& speaker_id,
                        const std::vector<std::string>& sample_paths,
                        const EncoderConfig& enc_cfg, const DspConfig& dsp_cfg,
                        const EncoderParams& params,
                        const EnhancementMethod& enhance_method) {
  require(!store.contains(speaker_id), ErrorCode::DuplicateSpeaker,
          "speaker '" + speaker_id + "' is already enrolled");

  EnrollmentRecord record;
  record.speaker_id = speaker_id;
  record.embedding =
      embed_paths(sample_paths, enc_cfg, dsp_cfg, params, enhance_method);
  record.sample_count = static_cast<int>(sample_paths.size());
  record.created_at = utc_now_iso8601();
  record.config_digest = store.config_digest();
  store.add(record);
  return record;
}

std::string BenchReport::to_json() const {
  json j;
  j["repetitions"] = repetitions;
  j["min_seconds"] = min_seconds;
  j["median_seconds"] = median_seconds;
  j["max_seconds"] = max_seconds;
  j["reference"] = {{"speaker_encoder_seconds", reference_encoder_seconds},
                    {"adaptation_minutes", reference_adaptation_minutes},
                    {"note",
                     "published route costs; adaptation-based enrollment is "
                     "out of scope and listed for comparison only"}};
  return j.dump(2);
}

BenchReport bench_enroll(const std::vector<std::string>& sample_paths,
                         const EncoderConfig& enc_cfg,
                         const DspConfig& dsp_cfg,
                         const EncoderParams& params,
                         const EnhancementMethod& enhance_method,
                         int repetitions) {
  require(repetitions >= 3, ErrorCode::ConfigInvalid,
          "bench_enroll: need at least 3 repetitions");

  std::vector<double> times;
  for (int rep = 0; rep < repetitions; ++rep) {
    auto begin = std::chrono::steady_clock::now();
    embed_paths(sample_paths, enc_cfg, dsp_cfg, params, enhance_method);
    auto end = std::chrono::steady_clock::now();
    times.push_back(std::chrono::duration<double>(end - begin).count());
  }
  std::sort(times.begin(), times.end());

  BenchReport report;
  report.repetitions = repetitions;
  report.min_seconds = times.front();
  report.max_seconds = times.back();
  report.median_seconds = times[times.size() / 2];
  return report;
}

}  // namespace vc
