#include "core/enhancement.hpp"

#include <algorithm>
#include <cmath>

#include "core/errors.hpp"

namespace vc {

EnhanceSelector enhance_from_string(const std::string& name) {
  if (name == "none" || name == "passthrough")
    return EnhanceSelector::Passthrough;
  if (name == "gate" || name == "spectral_gate")
    return EnhanceSelector::SpectralGate;
  fail(ErrorCode::ConfigInvalid, "unknown enhancement '" + name +
                                     "' (expected none or gate)");
}

void EnhancementMethod::validate() const {
  require(noise_profile_frames >= 1, ErrorCode::ConfigInvalid,
          "noise_profile_frames must be >= 1");
}

AudioClip enhance(const AudioClip& clip, const EnhancementMethod& method,
                  const DspConfig& cfg) {
  method.validate();
  if (method.selector == EnhanceSelector::Passthrough) return clip;

  size_t fft_size = static_cast<size_t>(cfg.fft_size);
  size_t hop = static_cast<size_t>(cfg.hop_size);
  size_t len = clip.samples.size();
  size_t full_frames = len >= fft_size ? 1 + (len - fft_size) / hop : 0;
  require(full_frames >= method.noise_profile_frames,
          ErrorCode::SignalTooShort,
          "spectral_gate: clip yields " + std::to_string(full_frames) +
              " frames, need " + std::to_string(method.noise_profile_frames) +
              " for the noise profile");

  // Zero-pad at least one FFT length on both sides so every input sample has
  // full window coverage, keeping the resynthesis bounded after the spectrum
  // is modified. The padded lead is a whole number of hops, so padded frame
  // (lead/hop + t) lines up exactly with original frame t.
  size_t lead = ((fft_size + hop - 1) / hop) * hop;
  std::vector<double> padded(lead + len + fft_size, 0.0);
  std::copy(clip.samples.begin(), clip.samples.end(), padded.begin() + lead);

  ComplexSpectrogram spec = stft_complex(padded, fft_size, hop);

  // Broadband floor: mean magnitude over all bins of the leading profile
  // frames of the original signal.
  size_t first = lead / hop;
  double floor_acc = 0.0;
  for (size_t t = first; t < first + method.noise_profile_frames; ++t)
    for (size_t k = 0; k < spec.bins; ++k)
      floor_acc += std::abs(spec.at(t, k));
  double floor =
      floor_acc / static_cast<double>(method.noise_profile_frames * spec.bins);
  double cutoff = floor * std::pow(10.0, method.gate_threshold_db / 20.0);

  for (size_t t = 0; t < spec.frames; ++t)
    for (size_t k = 0; k < spec.bins; ++k)
      if (std::abs(spec.at(t, k)) < cutoff)
        spec.at(t, k) *= kGateAttenuation;

  std::vector<double> resynth = istft_ls(spec, fft_size, hop);
  AudioClip out;
  out.sample_rate = clip.sample_rate;
  out.samples.assign(resynth.begin() + static_cast<ptrdiff_t>(lead),
                     resynth.begin() + static_cast<ptrdiff_t>(lead + len));
  return out;
}

}  // namespace vc
