#pragma once

#include <cstdint>

#include "core/training.hpp"

namespace vc {

// Deterministic synthetic speakers: a harmonic stack at a per-speaker
// fundamental plus resonator-filtered noise at a per-speaker formant. Clips
// of the same speaker share those traits and differ in phase, jitter and
// noise realization.
ToyDataset make_toy_corpus(size_t n_speakers, size_t clips_per_speaker,
                           double seconds, int sample_rate, uint64_t seed);

// Small feature/encoder settings used by the toy training loop.
DspConfig toy_dsp_config();
EncoderConfig toy_encoder_config(EncoderVariant variant);

}  // namespace vc
