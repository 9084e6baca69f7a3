#include "core/dsp.hpp"

#include <algorithm>
#include <cmath>

#include "core/errors.hpp"
#include "core/fft.hpp"

namespace vc {

void DspConfig::validate() const {
  require(num_mels >= 1, ErrorCode::ConfigInvalid, "num_mels must be >= 1");
  require(sample_rate >= 1, ErrorCode::ConfigInvalid,
          "sample_rate must be >= 1");
  require(fmin >= 0.0 && fmin < fmax, ErrorCode::ConfigInvalid,
          "need 0 <= fmin < fmax");
  require(fmax <= sample_rate / 2.0, ErrorCode::ConfigInvalid,
          "fmax must not exceed the Nyquist frequency");
  require(fft_size >= 2, ErrorCode::ConfigInvalid, "fft_size must be >= 2");
  require(hop_size >= 1 && hop_size <= fft_size, ErrorCode::ConfigInvalid,
          "need 1 <= hop_size <= fft_size");
  require(min_level_db < 0.0, ErrorCode::ConfigInvalid,
          "min_level_db must be negative");
  require(vad_threshold_db > 0.0, ErrorCode::ConfigInvalid,
          "vad_threshold_db must be positive");
}

std::vector<double> preemphasize(std::span<const double> x, double coeff) {
  std::vector<double> y(x.size());
  if (x.empty()) return y;
  y[0] = x[0];
  for (size_t n = 1; n < x.size(); ++n) y[n] = x[n] - coeff * x[n - 1];
  return y;
}

std::vector<double> deemphasize(std::span<const double> y, double coeff) {
  std::vector<double> x(y.size());
  if (y.empty()) return x;
  x[0] = y[0];
  for (size_t n = 1; n < y.size(); ++n) x[n] = y[n] + coeff * x[n - 1];
  return x;
}

namespace {

double frame_rms(std::span<const double> s) {
  double acc = 0.0;
  for (double v : s) acc += v * v;
  return std::sqrt(acc / static_cast<double>(s.size()));
}

}  // namespace

AudioClip trim_silence(const AudioClip& clip, double threshold_db) {
  require(!clip.samples.empty(), ErrorCode::EmptyClip,
          "trim_silence: empty clip");

  size_t len = clip.samples.size();
  std::vector<double> rms;
  for (size_t start = 0; start < len; start += kVadHopSize) {
    size_t end = std::min(start + kVadFrameSize, len);
    rms.push_back(frame_rms({clip.samples.data() + start, end - start}));
  }

  double peak = *std::max_element(rms.begin(), rms.end());
  AudioClip out;
  out.sample_rate = clip.sample_rate;
  if (peak <= 0.0) return out;  // all-silent

  double cutoff = peak * std::pow(10.0, -threshold_db / 20.0);
  size_t first = 0;
  while (first < rms.size() && rms[first] < cutoff) ++first;
  size_t last = rms.size() - 1;
  while (last > first && rms[last] < cutoff) --last;

  size_t begin = first * kVadHopSize;
  size_t end = std::min(last * kVadHopSize + kVadFrameSize, len);
  out.samples.assign(clip.samples.begin() + static_cast<ptrdiff_t>(begin),
                     clip.samples.begin() + static_cast<ptrdiff_t>(end));
  return out;
}

double hz_to_mel(double hz) { return 2595.0 * std::log10(1.0 + hz / 700.0); }

double mel_to_hz(double mel) {
  return 700.0 * (std::pow(10.0, mel / 2595.0) - 1.0);
}

std::vector<double> hann_window(size_t n) {
  std::vector<double> w(n);
  for (size_t i = 0; i < n; ++i)
    w[i] = 0.5 - 0.5 * std::cos(2.0 * M_PI * static_cast<double>(i) /
                                static_cast<double>(n));
  return w;
}

ComplexSpectrogram stft_complex(std::span<const double> signal,
                                size_t fft_size, size_t hop_size) {
  require(signal.size() >= fft_size, ErrorCode::SignalTooShort,
          "stft: signal shorter than one frame");
  size_t frames = 1 + (signal.size() - fft_size) / hop_size;
  size_t bins = fft_size / 2 + 1;
  std::vector<double> window = hann_window(fft_size);

  ComplexSpectrogram spec(frames, bins);
  std::vector<std::complex<double>> buf(fft_size);
  for (size_t t = 0; t < frames; ++t) {
    const double* frame = signal.data() + t * hop_size;
    for (size_t i = 0; i < fft_size; ++i)
      buf[i] = {frame[i] * window[i], 0.0};
    fft(buf, false);
    for (size_t k = 0; k < bins; ++k) spec.at(t, k) = buf[k];
  }
  return spec;
}

Matrix stft_magnitude(std::span<const double> signal, size_t fft_size,
                      size_t hop_size) {
  ComplexSpectrogram spec = stft_complex(signal, fft_size, hop_size);
  Matrix mag(spec.frames, spec.bins);
  for (size_t t = 0; t < spec.frames; ++t)
    for (size_t k = 0; k < spec.bins; ++k) mag(t, k) = std::abs(spec.at(t, k));
  return mag;
}

std::vector<double> istft_ls(const ComplexSpectrogram& spec, size_t fft_size,
                             size_t hop_size) {
  require(spec.bins == fft_size / 2 + 1, ErrorCode::ShapeMismatch,
          "istft: bin count does not match fft_size");
  require(spec.frames >= 1, ErrorCode::EmptyInput, "istft: no frames");

  size_t out_len = (spec.frames - 1) * hop_size + fft_size;
  std::vector<double> window = hann_window(fft_size);
  std::vector<double> num(out_len, 0.0), den(out_len, 0.0);

  std::vector<std::complex<double>> buf(fft_size);
  for (size_t t = 0; t < spec.frames; ++t) {
    for (size_t k = 0; k < spec.bins; ++k) buf[k] = spec.at(t, k);
    for (size_t k = 1; k + 1 < spec.bins; ++k)
      buf[fft_size - k] = std::conj(spec.at(t, k));
    fft(buf, true);
    size_t base = t * hop_size;
    for (size_t i = 0; i < fft_size; ++i) {
      num[base + i] += window[i] * buf[i].real();
      den[base + i] += window[i] * window[i];
    }
  }
  for (size_t i = 0; i < out_len; ++i)
    num[i] = den[i] > 1e-12 ? num[i] / den[i] : 0.0;
  return num;
}

Matrix mel_filterbank(const DspConfig& cfg) {
  cfg.validate();
  size_t bins = static_cast<size_t>(cfg.fft_size) / 2 + 1;
  size_t mels = static_cast<size_t>(cfg.num_mels);

  double mel_lo = hz_to_mel(cfg.fmin);
  double mel_hi = hz_to_mel(cfg.fmax);
  std::vector<double> edges(mels + 2);
  for (size_t i = 0; i < edges.size(); ++i)
    edges[i] = mel_to_hz(mel_lo + (mel_hi - mel_lo) * static_cast<double>(i) /
                                      static_cast<double>(mels + 1));

  double hz_per_bin =
      static_cast<double>(cfg.sample_rate) / static_cast<double>(cfg.fft_size);
  Matrix fb(mels, bins);
  for (size_t m = 0; m < mels; ++m) {
    double lo = edges[m], center = edges[m + 1], hi = edges[m + 2];
    bool any = false;
    for (size_t k = 0; k < bins; ++k) {
      double f = static_cast<double>(k) * hz_per_bin;
      double rising = (f - lo) / (center - lo);
      double falling = (hi - f) / (hi - center);
      double w = std::max(0.0, std::min(rising, falling));
      fb(m, k) = w;
      any = any || w > 0.0;
    }
    require(any, ErrorCode::DegenerateFilter,
            "mel filter " + std::to_string(m) +
                " has no nonzero bin at this FFT resolution");
  }
  return fb;
}

Matrix apply_filterbank(const Matrix& mag, const Matrix& fb) {
  return matmul_nt(mag, fb);
}

Matrix amplitude_to_norm_db(const Matrix& amp, const DspConfig& cfg) {
  Matrix out(amp.rows(), amp.cols());
  for (size_t i = 0; i < amp.size(); ++i) {
    double db = 20.0 * std::log10(std::max(kAmplitudeFloor, amp.data()[i]));
    double v = (db - cfg.ref_level_db - cfg.min_level_db) / -cfg.min_level_db;
    out.data()[i] = std::clamp(v, 0.0, 1.0);
  }
  return out;
}

Matrix norm_db_to_amplitude(const Matrix& norm, const DspConfig& cfg) {
  Matrix out(norm.rows(), norm.cols());
  for (size_t i = 0; i < norm.size(); ++i) {
    double v = std::clamp(norm.data()[i], 0.0, 1.0);
    double db = v * -cfg.min_level_db + cfg.min_level_db + cfg.ref_level_db;
    out.data()[i] = std::pow(10.0, db / 20.0);
  }
  return out;
}

MelSpectrogram melspectrogram(const AudioClip& clip, const DspConfig& cfg) {
  cfg.validate();
  require(clip.sample_rate == cfg.sample_rate, ErrorCode::SampleRateMismatch,
          "melspectrogram: clip rate " + std::to_string(clip.sample_rate) +
              " != config rate " + std::to_string(cfg.sample_rate));

  std::vector<double> emphasized =
      preemphasize(clip.samples, cfg.preemphasis);
  Matrix mag = stft_magnitude(emphasized, static_cast<size_t>(cfg.fft_size),
                              static_cast<size_t>(cfg.hop_size));
  Matrix fb = mel_filterbank(cfg);
  Matrix mel = apply_filterbank(mag, fb);
  return MelSpectrogram{amplitude_to_norm_db(mel, cfg)};
}

}  // namespace vc
