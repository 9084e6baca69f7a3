#include "core/vocoder.hpp"

#include <algorithm>
#include <cmath>

#include "core/errors.hpp"

namespace vc {

namespace {

// Cholesky solve of the SPD system G z = b, used for the filterbank
// pseudo-inverse. G is num_mels x num_mels so this stays cheap.
class SpdSolver {
public:
  explicit SpdSolver(const Matrix& g) : n_(g.rows()), chol_(g) {
    require(g.rows() == g.cols(), ErrorCode::ShapeMismatch,
            "SpdSolver: matrix not square");
    for (size_t j = 0; j < n_; ++j) {
      double d = chol_(j, j);
      for (size_t k = 0; k < j; ++k) d -= chol_(j, k) * chol_(j, k);
      require(d > 0.0, ErrorCode::DegenerateFilter,
              "SpdSolver: matrix not positive definite");
      chol_(j, j) = std::sqrt(d);
      for (size_t i = j + 1; i < n_; ++i) {
        double s = chol_(i, j);
        for (size_t k = 0; k < j; ++k) s -= chol_(i, k) * chol_(j, k);
        chol_(i, j) = s / chol_(j, j);
      }
    }
  }

  std::vector<double> solve(std::span<const double> b) const {
    std::vector<double> y(n_);
    for (size_t i = 0; i < n_; ++i) {
      double s = b[i];
      for (size_t k = 0; k < i; ++k) s -= chol_(i, k) * y[k];
      y[i] = s / chol_(i, i);
    }
    std::vector<double> x(n_);
    for (size_t ii = n_; ii-- > 0;) {
      double s = y[ii];
      for (size_t k = ii + 1; k < n_; ++k) s -= chol_(k, ii) * x[k];
      x[ii] = s / chol_(ii, ii);
    }
    return x;
  }

private:
  size_t n_;
  Matrix chol_;
};

}  // namespace

AudioClip griffin_lim(const LinearSpectrogram& mag, int iterations,
                      double power, std::vector<double>* consistency_trace) {
  require(iterations >= 1, ErrorCode::ConfigInvalid,
          "griffin_lim: iterations must be >= 1");
  require(mag.values.rows() >= 1, ErrorCode::EmptyInput,
          "griffin_lim: no frames");
  require(mag.values.cols() == static_cast<size_t>(mag.fft_size) / 2 + 1,
          ErrorCode::ShapeMismatch,
          "griffin_lim: bin count does not match fft_size");

  size_t frames = mag.values.rows();
  size_t bins = mag.values.cols();
  size_t fft_size = static_cast<size_t>(mag.fft_size);
  size_t hop = static_cast<size_t>(mag.hop_size);

  Matrix target(frames, bins);
  double peak = 0.0;
  for (size_t i = 0; i < mag.values.size(); ++i) {
    double v = mag.values.data()[i];
    require(v >= 0.0, ErrorCode::ConfigInvalid,
            "griffin_lim: negative magnitude");
    target.data()[i] = power == 1.0 ? v : std::pow(v, power);
    peak = std::max(peak, v);
  }

  AudioClip out;
  out.sample_rate = mag.sample_rate;
  size_t out_len = (frames - 1) * hop + fft_size;
  if (peak == 0.0) {  // degenerate input: silence, no iteration
    out.samples.assign(out_len, 0.0);
    return out;
  }

  // Zero phase start, then alternate between the consistent-spectrogram and
  // target-magnitude sets.
  ComplexSpectrogram spec(frames, bins);
  for (size_t t = 0; t < frames; ++t)
    for (size_t k = 0; k < bins; ++k) spec.at(t, k) = {target(t, k), 0.0};

  std::vector<double> signal;
  for (int it = 0; it < iterations; ++it) {
    signal = istft_ls(spec, fft_size, hop);
    ComplexSpectrogram est = stft_complex(signal, fft_size, hop);
    double err = 0.0;
    for (size_t t = 0; t < frames; ++t) {
      for (size_t k = 0; k < bins; ++k) {
        double a = std::abs(est.at(t, k));
        double d = a - target(t, k);
        err += d * d;
        spec.at(t, k) =
            a > 0.0 ? est.at(t, k) * (target(t, k) / a)
                    : std::complex<double>(target(t, k), 0.0);
      }
    }
    if (consistency_trace) consistency_trace->push_back(std::sqrt(err));
  }

  out.samples = std::move(signal);
  return out;
}

LinearSpectrogram mel_to_linear(const MelSpectrogram& mel,
                                const DspConfig& cfg) {
  cfg.validate();
  require(mel.num_mels() == static_cast<size_t>(cfg.num_mels),
          ErrorCode::ShapeMismatch,
          "mel_to_linear: mel band count does not match the configuration");
  require(mel.frame_count() >= 1, ErrorCode::EmptyInput,
          "mel_to_linear: no frames");

  Matrix amp = norm_db_to_amplitude(mel.values, cfg);
  Matrix fb = mel_filterbank(cfg);
  SpdSolver solver(matmul_nt(fb, fb));  // fb fb^T, num_mels x num_mels

  size_t bins = fb.cols();
  LinearSpectrogram out;
  out.fft_size = cfg.fft_size;
  out.hop_size = cfg.hop_size;
  out.sample_rate = cfg.sample_rate;
  out.values = Matrix(mel.frame_count(), bins);
  for (size_t t = 0; t < mel.frame_count(); ++t) {
    std::vector<double> z = solver.solve(amp.row(t));
    for (size_t k = 0; k < bins; ++k) {
      double v = 0.0;
      for (size_t m = 0; m < fb.rows(); ++m) v += fb(m, k) * z[m];
      out.values(t, k) = std::max(0.0, v);
    }
  }
  return out;
}

AudioClip vocode_mel(const MelSpectrogram& mel, const DspConfig& cfg,
                     int iterations, double power) {
  LinearSpectrogram linear = mel_to_linear(mel, cfg);
  AudioClip clip = griffin_lim(linear, iterations, power);
  clip.samples = deemphasize(clip.samples, cfg.preemphasis);
  for (auto& s : clip.samples) s = std::clamp(s, -1.0, 1.0);
  return clip;
}

}  // namespace vc
