#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <cstdint>
#include <cstring>
#include <fstream>
#include <vector>

#include "core/audio_io.hpp"
#include "core/errors.hpp"
#include "testutil.hpp"

using namespace vc;
using testutil::TempPath;

namespace {

void put_u32(std::vector<uint8_t>& v, uint32_t x) {
  v.push_back(x & 0xff);
  v.push_back((x >> 8) & 0xff);
  v.push_back((x >> 16) & 0xff);
  v.push_back((x >> 24) & 0xff);
}

void put_u16(std::vector<uint8_t>& v, uint16_t x) {
  v.push_back(x & 0xff);
  v.push_back((x >> 8) & 0xff);
}

// Hand-assembled WAV with explicit format code, for exercising the reader.
void write_wav_bytes(const std::string& path, uint16_t format,
                     uint16_t channels, uint32_t rate,
                     const std::vector<uint8_t>& payload, uint16_t bits) {
  std::vector<uint8_t> v;
  v.insert(v.end(), {'R', 'I', 'F', 'F'});
  put_u32(v, 36 + static_cast<uint32_t>(payload.size()));
  v.insert(v.end(), {'W', 'A', 'V', 'E', 'f', 'm', 't', ' '});
  put_u32(v, 16);
  put_u16(v, format);
  put_u16(v, channels);
  put_u32(v, rate);
  put_u32(v, rate * channels * bits / 8);
  put_u16(v, channels * bits / 8);
  put_u16(v, bits);
  v.insert(v.end(), {'d', 'a', 't', 'a'});
  put_u32(v, static_cast<uint32_t>(payload.size()));
  v.insert(v.end(), payload.begin(), payload.end());

  std::ofstream out(path, std::ios::binary);
  out.write(reinterpret_cast<const char*>(v.data()),
            static_cast<std::streamsize>(v.size()));
}

std::vector<uint8_t> pcm16_payload(const std::vector<int16_t>& samples) {
  std::vector<uint8_t> v;
  for (int16_t s : samples) put_u16(v, static_cast<uint16_t>(s));
  return v;
}

std::vector<uint8_t> float32_payload(const std::vector<float>& samples) {
  std::vector<uint8_t> v;
  for (float s : samples) {
    uint32_t u;
    std::memcpy(&u, &s, 4);
    put_u32(v, u);
  }
  return v;
}

}  // namespace

TEST_CASE("pcm16 scaling") {
  TempPath wav("pcm16.wav");
  write_wav_bytes(wav.str(), 1, 1, 22050, pcm16_payload({0, 16384, -32768}),
                  16);
  AudioClip clip = load_wav(wav.str());
  CHECK(clip.sample_rate == 22050);
  REQUIRE(clip.samples.size() == 3);
  CHECK(clip.samples[0] == 0.0);
  CHECK(clip.samples[1] == 0.5);
  CHECK(clip.samples[2] == -1.0);
}

TEST_CASE("stereo averages to mono") {
  TempPath wav("stereo.wav");
  write_wav_bytes(wav.str(), 3, 2, 16000, float32_payload({1.0f, 0.0f}), 32);
  AudioClip clip = load_wav(wav.str());
  REQUIRE(clip.samples.size() == 1);
  CHECK(clip.samples[0] == 0.5);
}

TEST_CASE("identical channels mix down to a single channel") {
  std::vector<float> frames;
  std::vector<float> mono;
  Rng rng(3);
  for (int i = 0; i < 64; ++i) {
    float s = static_cast<float>(rng.uniform(-0.9, 0.9));
    mono.push_back(s);
    for (int ch = 0; ch < 3; ++ch) frames.push_back(s);
  }
  TempPath wav("multi.wav");
  write_wav_bytes(wav.str(), 3, 3, 8000, float32_payload(frames), 32);
  AudioClip clip = load_wav(wav.str());
  REQUIRE(clip.samples.size() == mono.size());
  for (size_t i = 0; i < mono.size(); ++i)
    CHECK(clip.samples[i] ==
          doctest::Approx(static_cast<double>(mono[i])).epsilon(1e-12));
}

TEST_CASE("five seconds at 22050 Hz is 110250 samples") {
  AudioClip clip = testutil::sine_clip(440.0, 5.0, 22050);
  TempPath wav("five.wav");
  save_wav(clip, wav.str());
  AudioClip loaded = load_wav(wav.str());
  CHECK(loaded.samples.size() == 110250);
}

TEST_CASE("out-of-range float samples are clipped on load") {
  TempPath wav("hot.wav");
  write_wav_bytes(wav.str(), 3, 1, 8000, float32_payload({1.5f, -2.0f, 0.25f}),
                  32);
  AudioClip clip = load_wav(wav.str());
  CHECK(clip.samples[0] == 1.0);
  CHECK(clip.samples[1] == -1.0);
  CHECK(clip.samples[2] == 0.25);
}

TEST_CASE("save/load round trip stays within one quantization step") {
  AudioClip clip;
  clip.sample_rate = 22050;
  clip.samples = {0.0, 0.5, -1.0};
  TempPath wav("rt.wav");
  save_wav(clip, wav.str());
  AudioClip loaded = load_wav(wav.str());
  CHECK(loaded.sample_rate == 22050);
  REQUIRE(loaded.samples.size() == 3);
  for (size_t i = 0; i < 3; ++i)
    CHECK(std::abs(loaded.samples[i] - clip.samples[i]) <= 1.0 / 32768.0);

  Rng rng(5);
  AudioClip noisy = testutil::noise_clip(0.25, 16000, rng, 0.999);
  TempPath wav2("rt2.wav");
  save_wav(noisy, wav2.str());
  AudioClip loaded2 = load_wav(wav2.str());
  REQUIRE(loaded2.samples.size() == noisy.samples.size());
  for (size_t i = 0; i < noisy.samples.size(); ++i)
    CHECK(std::abs(loaded2.samples[i] - noisy.samples[i]) <= 1.0 / 32768.0);
}

TEST_CASE("empty clip cannot be saved") {
  AudioClip empty;
  empty.sample_rate = 22050;
  TempPath wav("empty.wav");
  CHECK_THROWS_AS(save_wav(empty, wav.str()), Error);
}

TEST_CASE("sample rate survives the header") {
  AudioClip clip = testutil::sine_clip(100.0, 0.05, 48000);
  TempPath wav("sr.wav");
  save_wav(clip, wav.str());
  CHECK(load_wav(wav.str()).sample_rate == 48000);
}

TEST_CASE("reader error paths") {
  CHECK_THROWS_WITH_AS(load_wav("/nonexistent/file.wav"),
                       doctest::Contains("cannot open"), Error);

  TempPath bad("bad.wav");
  {
    std::ofstream out(bad.str(), std::ios::binary);
    out << "JUNKJUNKJUNKJUNK";
  }
  CHECK_THROWS_AS(load_wav(bad.str()), Error);

  TempPath adpcm("adpcm.wav");
  write_wav_bytes(adpcm.str(), 2, 1, 8000, pcm16_payload({0, 0}), 16);
  try {
    load_wav(adpcm.str());
    FAIL("expected UnsupportedFormat");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::UnsupportedFormat);
  }
}

TEST_CASE("resample identity when rates match") {
  AudioClip clip = testutil::sine_clip(440.0, 0.1, 22050);
  AudioClip same = resample(clip, 22050);
  CHECK(same.samples == clip.samples);
}

TEST_CASE("resample keeps a constant signal constant") {
  AudioClip clip;
  clip.sample_rate = 44100;
  clip.samples.assign(4410, 1.0);
  AudioClip down = resample(clip, 22050);
  CHECK(down.samples.size() == 2205);
  for (double s : down.samples) CHECK(s == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("resampled sinusoid tracks the analytic target") {
  AudioClip src = testutil::sine_clip(1000.0, 0.5, 44100);
  AudioClip down = resample(src, 22050);
  CHECK(down.samples.size() ==
        static_cast<size_t>(std::llround(src.samples.size() * 22050.0 /
                                         44100.0)));

  AudioClip target = testutil::sine_clip(1000.0, 0.5, 22050);
  size_t n = std::min(down.samples.size(), target.samples.size());
  double num = 0.0, da = 0.0, db = 0.0;
  for (size_t i = 0; i < n; ++i) {
    num += down.samples[i] * target.samples[i];
    da += down.samples[i] * down.samples[i];
    db += target.samples[i] * target.samples[i];
  }
  CHECK(num / std::sqrt(da * db) > 0.99);
}
