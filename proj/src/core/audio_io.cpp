#include "core/audio_io.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <cstring>
#include <fstream>

#include "core/errors.hpp"

namespace vc {

namespace {

constexpr uint16_t kFormatPcm = 1;
constexpr uint16_t kFormatFloat = 3;

uint32_t read_u32(const uint8_t* p) {
  return static_cast<uint32_t>(p[0]) | (static_cast<uint32_t>(p[1]) << 8) |
         (static_cast<uint32_t>(p[2]) << 16) |
         (static_cast<uint32_t>(p[3]) << 24);
}

uint16_t read_u16(const uint8_t* p) {
  return static_cast<uint16_t>(p[0] | (p[1] << 8));
}

void write_u32(std::ofstream& out, uint32_t v) {
  uint8_t b[4] = {static_cast<uint8_t>(v), static_cast<uint8_t>(v >> 8),
                  static_cast<uint8_t>(v >> 16), static_cast<uint8_t>(v >> 24)};
  out.write(reinterpret_cast<const char*>(b), 4);
}

void write_u16(std::ofstream& out, uint16_t v) {
  uint8_t b[2] = {static_cast<uint8_t>(v), static_cast<uint8_t>(v >> 8)};
  out.write(reinterpret_cast<const char*>(b), 2);
}

double clip_sample(double s) { return std::clamp(s, -1.0, 1.0); }

}  // namespace

AudioClip load_wav(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  require(in.good(), ErrorCode::FileNotFound, "cannot open " + path);

  std::vector<uint8_t> bytes((std::istreambuf_iterator<char>(in)),
                             std::istreambuf_iterator<char>());
  require(bytes.size() >= 12, ErrorCode::CorruptHeader,
          path + ": truncated RIFF header");
  require(std::memcmp(bytes.data(), "RIFF", 4) == 0 &&
              std::memcmp(bytes.data() + 8, "WAVE", 4) == 0,
          ErrorCode::CorruptHeader, path + ": not a RIFF/WAVE file");

  uint16_t format = 0;
  uint16_t channels = 0;
  uint32_t sample_rate = 0;
  uint16_t bits = 0;
  bool have_fmt = false;
  const uint8_t* data = nullptr;
  size_t data_len = 0;

  size_t pos = 12;
  while (pos + 8 <= bytes.size()) {
    const uint8_t* hdr = bytes.data() + pos;
    uint32_t chunk_len = read_u32(hdr + 4);
    size_t body = pos + 8;
    if (body + chunk_len > bytes.size()) {
      // Tolerate a short final data chunk; anything else is corrupt.
      require(std::memcmp(hdr, "data", 4) == 0, ErrorCode::CorruptHeader,
              path + ": chunk overruns file");
      chunk_len = static_cast<uint32_t>(bytes.size() - body);
    }
    if (std::memcmp(hdr, "fmt ", 4) == 0) {
      require(chunk_len >= 16, ErrorCode::CorruptHeader,
              path + ": fmt chunk too small");
      format = read_u16(bytes.data() + body);
      channels = read_u16(bytes.data() + body + 2);
      sample_rate = read_u32(bytes.data() + body + 4);
      bits = read_u16(bytes.data() + body + 14);
      have_fmt = true;
    } else if (std::memcmp(hdr, "data", 4) == 0) {
      data = bytes.data() + body;
      data_len = chunk_len;
    }
    pos = body + chunk_len + (chunk_len & 1);  // chunks are word-aligned
  }

  require(have_fmt, ErrorCode::CorruptHeader, path + ": missing fmt chunk");
  require(data != nullptr, ErrorCode::CorruptHeader,
          path + ": missing data chunk");
  require(channels >= 1, ErrorCode::CorruptHeader, path + ": zero channels");
  require(sample_rate >= 1, ErrorCode::CorruptHeader,
          path + ": zero sample rate");
  require(format == kFormatPcm || format == kFormatFloat,
          ErrorCode::UnsupportedFormat,
          path + ": unsupported format code " + std::to_string(format));
  if (format == kFormatPcm)
    require(bits == 16, ErrorCode::UnsupportedFormat,
            path + ": only 16-bit PCM supported, got " + std::to_string(bits));
  else
    require(bits == 32, ErrorCode::UnsupportedFormat,
            path + ": only 32-bit float supported, got " + std::to_string(bits));

  size_t bytes_per_sample = bits / 8;
  size_t frame_bytes = bytes_per_sample * channels;
  size_t frames = data_len / frame_bytes;

  AudioClip clip;
  clip.sample_rate = static_cast<int>(sample_rate);
  clip.samples.resize(frames);
  for (size_t f = 0; f < frames; ++f) {
    double acc = 0.0;
    for (size_t ch = 0; ch < channels; ++ch) {
      const uint8_t* p = data + f * frame_bytes + ch * bytes_per_sample;
      if (format == kFormatPcm) {
        int16_t v = static_cast<int16_t>(p[0] | (p[1] << 8));
        acc += static_cast<double>(v) / 32768.0;
      } else {
        uint32_t u = read_u32(p);
        float v;
        std::memcpy(&v, &u, 4);
        acc += static_cast<double>(v);
      }
    }
    clip.samples[f] = clip_sample(acc / channels);
  }
  return clip;
}

void save_wav(const AudioClip& clip, const std::string& path) {
  require(!clip.samples.empty(), ErrorCode::EmptyClip,
          "save_wav: empty clip");
  require(clip.sample_rate > 0, ErrorCode::EmptyClip,
          "save_wav: non-positive sample rate");

  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  require(out.good(), ErrorCode::IoError, "cannot write " + path);

  uint32_t data_len = static_cast<uint32_t>(clip.samples.size() * 2);
  out.write("RIFF", 4);
  write_u32(out, 36 + data_len);
  out.write("WAVE", 4);
  out.write("fmt ", 4);
  write_u32(out, 16);
  write_u16(out, kFormatPcm);
  write_u16(out, 1);  // mono
  write_u32(out, static_cast<uint32_t>(clip.sample_rate));
  write_u32(out, static_cast<uint32_t>(clip.sample_rate) * 2);
  write_u16(out, 2);   // block align
  write_u16(out, 16);  // bits per sample
  out.write("data", 4);
  write_u32(out, data_len);

  for (double s : clip.samples) {
    long q = std::lrint(clip_sample(s) * 32768.0);
    q = std::clamp(q, -32768L, 32767L);
    write_u16(out, static_cast<uint16_t>(static_cast<int16_t>(q)));
  }
  require(out.good(), ErrorCode::IoError, "write failed for " + path);
}

AudioClip resample(const AudioClip& clip, int target_sr) {
  require(target_sr > 0, ErrorCode::ConfigInvalid,
          "resample: target rate must be positive");
  if (target_sr == clip.sample_rate) return clip;

  AudioClip out;
  out.sample_rate = target_sr;
  if (clip.samples.empty()) return out;

  size_t n = clip.samples.size();
  size_t out_len = static_cast<size_t>(std::llround(
      static_cast<double>(n) * target_sr / clip.sample_rate));
  out.samples.resize(out_len);
  double step = static_cast<double>(clip.sample_rate) / target_sr;
  for (size_t i = 0; i < out_len; ++i) {
    double x = i * step;
    size_t i0 = static_cast<size_t>(x);
    if (i0 >= n - 1) {
      out.samples[i] = clip.samples[n - 1];
    } else {
      double frac = x - i0;
      out.samples[i] =
          clip.samples[i0] * (1.0 - frac) + clip.samples[i0 + 1] * frac;
    }
  }
  return out;
}

}  // namespace vc
