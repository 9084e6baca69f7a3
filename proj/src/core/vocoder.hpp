#pragma once

#include <vector>

#include "core/dsp.hpp"

namespace vc {

// STFT magnitudes, T x (fft_size/2 + 1), all entries >= 0.
struct LinearSpectrogram {
  Matrix values;
  int fft_size = 0;
  int hop_size = 0;
  int sample_rate = 0;
};

// Iterative phase reconstruction. Magnitudes are raised to `power` before
// iterating; the initial phase is zero so output is deterministic. When
// consistency_trace is given it receives ||| STFT(x_k) | - target||_F after
// each iteration, which is non-increasing for this plain alternating
// projection.
AudioClip griffin_lim(const LinearSpectrogram& mag, int iterations,
                      double power = 1.0,
                      std::vector<double>* consistency_trace = nullptr);

// Undoes the dB normalization and projects back through the pseudo-inverse
// of the mel filterbank, clipped at zero.
LinearSpectrogram mel_to_linear(const MelSpectrogram& mel,
                                const DspConfig& cfg);

// mel -> linear -> Griffin-Lim -> de-emphasis.
AudioClip vocode_mel(const MelSpectrogram& mel, const DspConfig& cfg,
                     int iterations, double power);

}  // namespace vc
