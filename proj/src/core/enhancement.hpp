#pragma once

#include "core/dsp.hpp"

namespace vc {

enum class EnhanceSelector { Passthrough, SpectralGate };

EnhanceSelector enhance_from_string(const std::string& name);

struct EnhancementMethod {
  EnhanceSelector selector = EnhanceSelector::Passthrough;
  double gate_threshold_db = 6.0;   // margin above the estimated noise floor
  size_t noise_profile_frames = 8;  // leading frames used for the estimate

  void validate() const;
};

// Gated bins are scaled by this factor (-40 dB) rather than zeroed.
inline constexpr double kGateAttenuation = 0.01;

// Pre-encoding cleanup stage. Passthrough returns the clip unchanged;
// spectral_gate attenuates STFT bins below the noise floor estimated from
// the leading frames, keeping the original phase. Output length equals
// input length.
AudioClip enhance(const AudioClip& clip, const EnhancementMethod& method,
                  const DspConfig& cfg);

}  // namespace vc
