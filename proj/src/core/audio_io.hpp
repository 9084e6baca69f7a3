#pragma once

#include <string>
#include <vector>

namespace vc {

// Mono waveform. Samples are clipped to [-1, 1] on ingest.
struct AudioClip {
  std::vector<double> samples;
  int sample_rate = 0;

  double duration_seconds() const {
    return sample_rate > 0 ? static_cast<double>(samples.size()) / sample_rate
                           : 0.0;
  }
};

// Reads a RIFF/WAVE file. Accepts 16-bit PCM and 32-bit IEEE float, any
// channel count; channels are averaged down to mono.
AudioClip load_wav(const std::string& path);

// Writes mono 16-bit PCM. Round-trips within one quantization step.
void save_wav(const AudioClip& clip, const std::string& path);

// Linear-interpolation resampling. Output length is
// round(len * target_sr / source_sr).
AudioClip resample(const AudioClip& clip, int target_sr);

}  // namespace vc
