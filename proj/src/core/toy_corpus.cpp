#include "core/toy_corpus.hpp"

#include <cmath>

#include "core/rng.hpp"

namespace vc {

namespace {

// Two-pole resonator centered at freq_hz.
std::vector<double> resonate(const std::vector<double>& x, double freq_hz,
                             double bandwidth_hz, int sample_rate) {
  double r = std::exp(-M_PI * bandwidth_hz / sample_rate);
  double omega = 2.0 * M_PI * freq_hz / sample_rate;
  double a1 = 2.0 * r * std::cos(omega);
  double a2 = -r * r;
  std::vector<double> y(x.size(), 0.0);
  double y1 = 0.0, y2 = 0.0;
  for (size_t n = 0; n < x.size(); ++n) {
    y[n] = x[n] + a1 * y1 + a2 * y2;
    y2 = y1;
    y1 = y[n];
  }
  return y;
}

double rms(const std::vector<double>& x) {
  double acc = 0.0;
  for (double v : x) acc += v * v;
  return std::sqrt(acc / static_cast<double>(x.size()));
}

AudioClip synth_clip(double f0, double formant_hz, int sample_rate,
                     size_t n_samples, Rng& rng) {
  const int harmonics = 10;
  double jitter = 1.0 + rng.uniform(-0.01, 0.01);

  std::vector<double> voiced(n_samples, 0.0);
  for (int h = 1; h <= harmonics; ++h) {
    double amp = 1.0 / h;
    double phase = rng.uniform(0.0, 2.0 * M_PI);
    double w = 2.0 * M_PI * f0 * jitter * h / sample_rate;
    if (f0 * jitter * h >= sample_rate / 2.0) break;
    for (size_t n = 0; n < n_samples; ++n)
      voiced[n] += amp * std::sin(w * static_cast<double>(n) + phase);
  }

  std::vector<double> noise(n_samples);
  for (auto& v : noise) v = rng.gaussian();
  std::vector<double> colored =
      resonate(noise, formant_hz, 120.0, sample_rate);

  double voiced_rms = rms(voiced);
  double colored_rms = rms(colored);
  std::vector<double> mix(n_samples);
  double peak = 0.0;
  for (size_t n = 0; n < n_samples; ++n) {
    mix[n] = 0.65 * voiced[n] / voiced_rms + 0.35 * colored[n] / colored_rms;
    peak = std::max(peak, std::abs(mix[n]));
  }
  for (auto& v : mix) v *= 0.7 / peak;

  AudioClip clip;
  clip.sample_rate = sample_rate;
  clip.samples = std::move(mix);
  return clip;
}

}  // namespace

ToyDataset make_toy_corpus(size_t n_speakers, size_t clips_per_speaker,
                           double seconds, int sample_rate, uint64_t seed) {
  Rng rng(seed);
  size_t n_samples = static_cast<size_t>(seconds * sample_rate);
  ToyDataset ds;
  for (size_t s = 0; s < n_speakers; ++s) {
    SpeakerRecord rec;
    rec.id = "spk" + std::to_string(s);
    double f0 = 95.0 + 22.0 * static_cast<double>(s);
    double formant = 450.0 + 320.0 * static_cast<double>(s);
    for (size_t c = 0; c < clips_per_speaker; ++c)
      rec.clips.push_back(synth_clip(f0, formant, sample_rate, n_samples, rng));
    ds.speakers.push_back(std::move(rec));
  }
  return ds;
}

DspConfig toy_dsp_config() {
  DspConfig cfg;
  cfg.num_mels = 24;
  cfg.fmin = 60.0;
  cfg.fmax = 7600.0;
  cfg.fft_size = 512;
  cfg.hop_size = 128;
  cfg.sample_rate = 22050;
  return cfg;
}

EncoderConfig toy_encoder_config(EncoderVariant variant) {
  EncoderConfig cfg;
  cfg.d_mel = 24;
  cfg.f_mapped = 12;
  cfg.temporal = AttentionConfig{12, 8, 2};
  cfg.cross = AttentionConfig{12, 8, 2};
  cfg.d_embedding = 16;
  cfg.max_cloning_samples = 5;
  cfg.variant = variant;
  return cfg;
}

}  // namespace vc
