#pragma once

#include <complex>
#include <span>
#include <vector>

#include "core/audio_io.hpp"
#include "core/matrix.hpp"

namespace vc {

struct DspConfig {
  int num_mels = 80;
  double fmin = 125.0;
  double fmax = 7600.0;
  int fft_size = 1024;
  int hop_size = 256;
  int sample_rate = 22050;
  double preemphasis = 0.97;
  double min_level_db = -100.0;
  double ref_level_db = 20.0;
  double vad_threshold_db = 60.0;

  void validate() const;
};

// T x num_mels, entries normalized to [0, 1].
struct MelSpectrogram {
  Matrix values;

  size_t frame_count() const { return values.rows(); }
  size_t num_mels() const { return values.cols(); }
};

// Amplitude floor applied before dB conversion.
inline constexpr double kAmplitudeFloor = 1e-5;

// Frame geometry for energy-based VAD; coarse to avoid chattering.
inline constexpr size_t kVadFrameSize = 2048;
inline constexpr size_t kVadHopSize = 512;

// y[0] = x[0]; y[n] = x[n] - coeff * x[n-1]
std::vector<double> preemphasize(std::span<const double> x, double coeff);

// Exact inverse of preemphasize.
std::vector<double> deemphasize(std::span<const double> y, double coeff);

// Removes leading and trailing frames whose 20*log10(RMS) falls more than
// threshold_db below the loudest frame. All-silent input yields an empty clip.
AudioClip trim_silence(const AudioClip& clip, double threshold_db);

double hz_to_mel(double hz);
double mel_to_hz(double mel);

std::vector<double> hann_window(size_t n);

// Hann-windowed STFT magnitude, T x (fft_size/2 + 1). Frame t covers samples
// [t*hop, t*hop + fft_size); the final partial frame is dropped.
Matrix stft_magnitude(std::span<const double> signal, size_t fft_size,
                      size_t hop_size);

struct ComplexSpectrogram {
  size_t frames = 0;
  size_t bins = 0;
  std::vector<std::complex<double>> data;

  ComplexSpectrogram() = default;
  ComplexSpectrogram(size_t t, size_t k)
      : frames(t), bins(k), data(t * k, {0.0, 0.0}) {}

  std::complex<double>& at(size_t t, size_t k) { return data[t * bins + k]; }
  const std::complex<double>& at(size_t t, size_t k) const {
    return data[t * bins + k];
  }
};

ComplexSpectrogram stft_complex(std::span<const double> signal,
                                size_t fft_size, size_t hop_size);

// Least-squares inverse STFT (windowed overlap-add normalized by the summed
// squared window). Output length is (T-1)*hop + fft_size.
std::vector<double> istft_ls(const ComplexSpectrogram& spec, size_t fft_size,
                             size_t hop_size);

// Triangular filters with centers equally spaced on the mel scale between
// fmin and fmax; num_mels x (fft_size/2 + 1).
Matrix mel_filterbank(const DspConfig& cfg);

// mag (T x bins) -> mel amplitudes (T x num_mels)
Matrix apply_filterbank(const Matrix& mag, const Matrix& fb);

// 20*log10(max(floor, amp)), then ((db - ref - min) / -min) clipped to [0,1].
Matrix amplitude_to_norm_db(const Matrix& amp, const DspConfig& cfg);

// Inverse of the normalization above: db = norm * -min + min + ref.
Matrix norm_db_to_amplitude(const Matrix& norm, const DspConfig& cfg);

// Full feature pipeline: preemphasis, STFT, mel projection, dB normalization.
MelSpectrogram melspectrogram(const AudioClip& clip, const DspConfig& cfg);

}  // namespace vc
