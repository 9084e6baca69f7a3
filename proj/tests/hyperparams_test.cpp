#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>

#include "core/errors.hpp"
#include "core/hyperparams.hpp"
#include "hparams_fixtures.hpp"

using namespace vc;

TEST_CASE("relaxed normalizer handles trailing commas and split blocks") {
  CHECK(normalize_relaxed_json("{\"a\": 1,}") == "{\"a\": 1}");
  CHECK(normalize_relaxed_json("{\"a\": [1, 2,],}") == "{\"a\": [1, 2]}");
  // Object continued in a second block without a brace.
  std::string merged = normalize_relaxed_json("{\"a\": 1,}\n\"b\": 2\n}");
  CHECK(merged.find("\"a\": 1,") != std::string::npos);
  CHECK(merged.find("\"b\": 2") != std::string::npos);
  CHECK(std::count(merged.begin(), merged.end(), '}') == 1);
  // Two complete blocks.
  std::string two = normalize_relaxed_json("{\"a\": 1}{\"b\": 2}");
  CHECK(std::count(two.begin(), two.end(), '{') == 1);
  // Braces inside strings are untouched.
  CHECK(normalize_relaxed_json("{\"a\": \"x}y{\"}") == "{\"a\": \"x}y{\"}");
  // Plain valid JSON passes through unchanged.
  CHECK(normalize_relaxed_json("{\"a\": [1, 2], \"b\": {}}") ==
        "{\"a\": [1, 2], \"b\": {}}");
}

TEST_CASE("the raw 80-mel dump parses with the expected derived values") {
  Hyperparams hp = parse_hyperparams(fixtures::kVctkHparamsRaw);
  CHECK(hp.dsp.num_mels == 80);
  CHECK(hp.dsp.fmin == 125.0);
  CHECK(hp.dsp.fmax == 7600.0);
  CHECK(hp.dsp.fft_size == 1024);
  CHECK(hp.dsp.hop_size == 256);
  CHECK(hp.dsp.sample_rate == 22050);
  CHECK(hp.dsp.preemphasis == 0.97);
  CHECK(hp.dsp.min_level_db == -100.0);
  CHECK(hp.dsp.ref_level_db == 20.0);

  CHECK(hp.encoder.d_embedding == 256);
  CHECK(hp.encoder.max_cloning_samples == 6);
  CHECK(hp.encoder.f_mapped == 30);
  CHECK(hp.encoder.temporal.num_heads == 8);
  CHECK(hp.encoder.temporal.d_attn == 16);
  CHECK(hp.encoder.temporal.head_dim() == 2);

  CHECK(hp.adam.beta1 == 0.5);
  CHECK(hp.adam.beta2 == 0.9);
  CHECK(hp.adam.epsilon == 1e-6);
  CHECK(hp.adam.learning_rate == 0.0005);
  CHECK(hp.vocoder_power == 1.4);

  // The filterbank this config derives.
  Matrix fb = mel_filterbank(hp.dsp);
  CHECK(fb.rows() == 80);
  CHECK(fb.cols() == 513);

  // TTS-only keys are reported, not consumed.
  CHECK(!hp.ignored_keys.empty());
  auto ignored = [&](const char* key) {
    return std::find(hp.ignored_keys.begin(), hp.ignored_keys.end(), key) !=
           hp.ignored_keys.end();
  };
  CHECK(ignored("query_position_rate"));
  CHECK(ignored("dropout"));
  CHECK(ignored("converter_dim"));
  CHECK(!ignored("num_mels"));
  CHECK(!ignored("f_mapped"));
}

TEST_CASE("the raw 128-dim encoder dump parses with d_t = 64") {
  Hyperparams hp = parse_hyperparams(fixtures::kLibriTtsEncoderHparamsRaw);
  CHECK(hp.dsp.fft_size == 1600);
  CHECK(hp.dsp.hop_size == 400);
  CHECK(hp.encoder.f_mapped == 128);
  CHECK(hp.encoder.temporal.num_heads == 2);
  CHECK(hp.encoder.temporal.d_attn == 128);
  CHECK(hp.encoder.temporal.head_dim() == 64);
  CHECK(hp.encoder.d_embedding == 256);
  CHECK(hp.encoder.max_cloning_samples == 6);
}

TEST_CASE("an attention dim not divisible by the head count is rejected") {
  std::string text = R"({
    "num_mels": 80,
    "speaker_encoder_attention_dim": 15,
    "speaker_encoder_attention_num_heads": 2
  })";
  CHECK_THROWS_AS(parse_hyperparams(text), Error);
}

TEST_CASE("shipped preset files load") {
  for (const char* name :
       {"vctk.json", "libritts_tts.json", "libritts_encoder.json"}) {
    Hyperparams hp = load_hyperparams_file(std::string(VC_SOURCE_DIR) +
                                           "/configs/" + name);
    CHECK(hp.encoder.d_embedding == 256);
    CHECK(hp.encoder.max_cloning_samples == 6);
    CHECK(hp.dsp.num_mels == 80);
  }
}

TEST_CASE("defaults mirror the 22.05 kHz preset") {
  Hyperparams hp = default_hyperparams();
  CHECK(hp.dsp.sample_rate == 22050);
  CHECK(hp.encoder.temporal.d_attn == 16);
  CHECK(hp.encoder.temporal.num_heads == 8);
  CHECK_NOTHROW(hp.dsp.validate());
  CHECK_NOTHROW(hp.encoder.validate());
}

TEST_CASE("config digest tracks every relevant field") {
  Hyperparams a = default_hyperparams();
  Hyperparams b = default_hyperparams();
  CHECK(config_digest(a.dsp, a.encoder) == config_digest(b.dsp, b.encoder));

  b.encoder.d_embedding = 128;
  CHECK(config_digest(a.dsp, a.encoder) != config_digest(b.dsp, b.encoder));

  Hyperparams c = default_hyperparams();
  c.dsp.hop_size = 128;
  CHECK(config_digest(a.dsp, a.encoder) != config_digest(c.dsp, c.encoder));

  Hyperparams d = default_hyperparams();
  d.encoder.variant = EncoderVariant::AveragePool;
  CHECK(config_digest(a.dsp, a.encoder) != config_digest(d.dsp, d.encoder));
}

TEST_CASE("type errors and broken text are rejected") {
  CHECK_THROWS_AS(parse_hyperparams("{\"num_mels\": \"eighty\"}"), Error);
  CHECK_THROWS_AS(parse_hyperparams("not json at all"), Error);
  CHECK_THROWS_AS(parse_hyperparams("[1, 2, 3]"), Error);
  CHECK_THROWS_AS(load_hyperparams_file("/nonexistent.json"), Error);
}
