#pragma once

#include <string>
#include <vector>

#include "core/dsp.hpp"
#include "core/speaker_encoder.hpp"
#include "core/training.hpp"

namespace vc {

// Everything a hyperparameter file configures, plus the list of keys that
// were present but not consumed (the files carry many TTS-only settings).
struct Hyperparams {
  DspConfig dsp;
  EncoderConfig encoder;
  AdamConfig adam;
  double vocoder_power = 1.4;
  std::vector<std::string> ignored_keys;
};

// Accepts plain JSON and the relaxed form hyperparameter dumps come in:
// trailing commas and an object split across blocks are tolerated.
std::string normalize_relaxed_json(const std::string& text);

Hyperparams parse_hyperparams(const std::string& text);
Hyperparams load_hyperparams_file(const std::string& path);
Hyperparams default_hyperparams();

// Stable fingerprint of the feature and encoder settings, stored with
// enrollment records so stores reject embeddings from other configurations.
std::string config_digest(const DspConfig& dsp, const EncoderConfig& enc);

}  // namespace vc
