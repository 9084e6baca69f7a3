#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <fstream>
#include <sstream>

#include "core/enrollment.hpp"
#include "core/errors.hpp"
#include "core/hyperparams.hpp"
#include "core/toy_corpus.hpp"
#include "testutil.hpp"

using namespace vc;
using testutil::TempPath;

namespace {

struct Setup {
  DspConfig dsp = toy_dsp_config();
  EncoderConfig enc = toy_encoder_config(EncoderVariant::SelfAttention);
  EncoderParams params;
  std::string digest;

  Setup() {
    Rng rng(2024);
    params = EncoderParams::init(enc, rng);
    digest = config_digest(dsp, enc);
  }
};

std::vector<std::string> write_speaker_wavs(const std::string& stem,
                                            std::vector<TempPath>& keep,
                                            double f0, size_t count) {
  ToyDataset ds = make_toy_corpus(1, count, 0.4, 22050,
                                  static_cast<uint64_t>(f0));
  std::vector<std::string> paths;
  for (size_t i = 0; i < count; ++i) {
    keep.emplace_back(stem + std::to_string(i) + ".wav");
    save_wav(ds.speakers[0].clips[i], keep.back().str());
    paths.push_back(keep.back().str());
  }
  return paths;
}

std::string slurp(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

}  // namespace

TEST_CASE("cosine similarity basics") {
  std::vector<double> v{1.0, -2.0, 3.0};
  std::vector<double> neg{-1.0, 2.0, -3.0};
  std::vector<double> scaled{2.5, -5.0, 7.5};
  CHECK(cosine_similarity(v, v) == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(cosine_similarity(v, neg) == doctest::Approx(-1.0).epsilon(1e-12));
  CHECK(cosine_similarity(v, scaled) == doctest::Approx(1.0).epsilon(1e-12));

  std::vector<double> zero(3, 0.0);
  CHECK_THROWS_AS(cosine_similarity(v, zero), Error);
  std::vector<double> shorter{1.0, 2.0};
  CHECK_THROWS_AS(cosine_similarity(v, shorter), Error);
}

TEST_CASE("enroll persists and reloads bit-exactly") {
  Setup s;
  std::vector<TempPath> keep;
  auto paths = write_speaker_wavs("enr_a", keep, 42, 5);

  TempPath store_path("store.json");
  EmbeddingStore store =
      EmbeddingStore::open(store_path.str(), s.enc.d_embedding, s.digest);
  EnrollmentRecord rec = enroll(store, "alice", paths, s.enc, s.dsp, s.params,
                                EnhancementMethod{});
  CHECK(rec.sample_count == 5);
  CHECK(rec.embedding.size() == s.enc.d_embedding);
  CHECK(!rec.created_at.empty());

  EmbeddingStore reloaded =
      EmbeddingStore::open(store_path.str(), s.enc.d_embedding, s.digest);
  REQUIRE(reloaded.records().size() == 1);
  CHECK(reloaded.records()[0].speaker_id == "alice");
  CHECK(reloaded.records()[0].embedding == rec.embedding);
  CHECK(reloaded.records()[0].sample_count == 5);
}

TEST_CASE("duplicate enrollment is rejected and leaves the file untouched") {
  Setup s;
  std::vector<TempPath> keep;
  auto paths = write_speaker_wavs("enr_b", keep, 7, 3);

  TempPath store_path("store.json");
  EmbeddingStore store =
      EmbeddingStore::open(store_path.str(), s.enc.d_embedding, s.digest);
  enroll(store, "bob", paths, s.enc, s.dsp, s.params, EnhancementMethod{});
  std::string before = slurp(store_path.str());

  try {
    enroll(store, "bob", paths, s.enc, s.dsp, s.params, EnhancementMethod{});
    FAIL("expected DuplicateSpeaker");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::DuplicateSpeaker);
  }
  CHECK(slurp(store_path.str()) == before);
  CHECK(store.records().size() == 1);
}

TEST_CASE("a failed enroll leaves the on-disk store byte-identical") {
  Setup s;
  std::vector<TempPath> keep;
  auto paths = write_speaker_wavs("enr_c", keep, 9, 3);

  TempPath store_path("store.json");
  EmbeddingStore store =
      EmbeddingStore::open(store_path.str(), s.enc.d_embedding, s.digest);
  enroll(store, "carol", paths, s.enc, s.dsp, s.params, EnhancementMethod{});
  std::string before = slurp(store_path.str());

  std::vector<std::string> bad = paths;
  bad.push_back("/nonexistent/missing.wav");
  CHECK_THROWS_AS(
      enroll(store, "dave", bad, s.enc, s.dsp, s.params, EnhancementMethod{}),
      Error);
  CHECK(slurp(store_path.str()) == before);
  CHECK(store.records().size() == 1);
}

TEST_CASE("embedding errors carry the offending path") {
  Setup s;
  std::vector<std::string> bad{"/nonexistent/missing.wav"};
  try {
    embed_paths(bad, s.enc, s.dsp, s.params, EnhancementMethod{});
    FAIL("expected FileNotFound");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::FileNotFound);
    CHECK(std::string(e.what()).find("missing.wav") != std::string::npos);
  }
}

TEST_CASE("a store built with one configuration rejects another") {
  Setup s;
  TempPath store_path("store.json");
  {
    EmbeddingStore store =
        EmbeddingStore::open(store_path.str(), s.enc.d_embedding, s.digest);
    std::vector<TempPath> keep;
    auto paths = write_speaker_wavs("enr_d", keep, 11, 3);
    enroll(store, "erin", paths, s.enc, s.dsp, s.params, EnhancementMethod{});
  }
  try {
    EmbeddingStore::open(store_path.str(), s.enc.d_embedding, "deadbeef");
    FAIL("expected StoreMismatch");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::StoreMismatch);
  }
  CHECK_THROWS_AS(
      EmbeddingStore::open(store_path.str(), 99, s.digest), Error);
}

TEST_CASE("nearest ranks by similarity with lexicographic ties") {
  Setup s;
  TempPath store_path("store.json");
  EmbeddingStore store =
      EmbeddingStore::open(store_path.str(), s.enc.d_embedding, s.digest);

  auto record = [&](const std::string& id, std::vector<double> e) {
    EnrollmentRecord r;
    r.speaker_id = id;
    e.resize(s.enc.d_embedding, 0.0);
    r.embedding = e;
    r.sample_count = 1;
    r.created_at = "2026-01-01T00:00:00Z";
    r.config_digest = s.digest;
    store.add(r);
  };
  record("zoe", {1.0, 0.0});
  record("amy", {1.0, 0.0});   // identical to zoe: tie broken by id
  record("mia", {0.0, 1.0});
  record("sam", {-1.0, 0.0});

  std::vector<double> query(s.enc.d_embedding, 0.0);
  query[0] = 2.0;  // same direction as zoe/amy

  auto top = nearest(store, query, 3);
  REQUIRE(top.size() == 3);
  CHECK(top[0].speaker_id == "amy");
  CHECK(top[1].speaker_id == "zoe");
  CHECK(top[0].similarity == doctest::Approx(1.0));
  CHECK(top[1].similarity == doctest::Approx(1.0));
  CHECK(top[2].speaker_id == "mia");
  for (size_t i = 1; i < top.size(); ++i)
    CHECK(top[i].similarity <= top[i - 1].similarity);

  // k beyond the store size returns everything.
  auto all = nearest(store, query, 99);
  CHECK(all.size() == 4);
  CHECK(all.back().speaker_id == "sam");
  CHECK(all.back().similarity == doctest::Approx(-1.0));

  EmbeddingStore empty = EmbeddingStore::open(
      store_path.str() + ".other", s.enc.d_embedding, s.digest);
  CHECK_THROWS_AS(nearest(empty, query, 1), Error);
}

TEST_CASE("bench_enroll reports ordered timings and the reference anchors") {
  Setup s;
  std::vector<TempPath> keep;
  auto paths = write_speaker_wavs("bench", keep, 21, 3);

  CHECK_THROWS_AS(bench_enroll(paths, s.enc, s.dsp, s.params,
                               EnhancementMethod{}, 2),
                  Error);

  BenchReport report =
      bench_enroll(paths, s.enc, s.dsp, s.params, EnhancementMethod{}, 3);
  CHECK(report.repetitions == 3);
  CHECK(report.min_seconds <= report.median_seconds);
  CHECK(report.median_seconds <= report.max_seconds);
  CHECK(report.reference_encoder_seconds == 11.0);
  CHECK(report.reference_adaptation_minutes == 15.0);

  std::string json = report.to_json();
  CHECK(json.find("\"speaker_encoder_seconds\": 11.0") != std::string::npos);
  CHECK(json.find("\"adaptation_minutes\": 15.0") != std::string::npos);
}
