#pragma once

#include <string>

#include "core/dsp.hpp"

namespace vc {

// Mel features plus the STFT geometry they were computed with, so a file can
// be resynthesized later without guessing.
struct MelFile {
  MelSpectrogram mel;
  int fft_size = 0;
  int hop_size = 0;
  int sample_rate = 0;
};

// Binary container: magic, dimensions, then row-major float64 samples.
void save_mel_file(const MelFile& mf, const std::string& path);
MelFile load_mel_file(const std::string& path);

}  // namespace vc
