#pragma once

// Hyperparameter dumps exactly as they circulate: the object split across
// two blocks, trailing comma at the first block's close. The loader must
// take these as-is.

namespace fixtures {

inline const char* kVctkHparamsRaw = R"({
  "name": "deepvoice3",
  "frontend": "en",
  "replace_pronunciation_prob": 0.5,
  "builder": "deepvoice3_multispeaker",
  "n_speakers": 108,
  "speaker_embed_dim": 256,
  "num_mels": 80,
  "fmin": 125,
  "fmax": 7600,
  "fft_size": 1024,
  "hop_size": 256,
  "sample_rate": 22050,
  "preemphasis": 0.97,
  "min_level_db": -100,
  "ref_level_db": 20,
  "rescaling": false,
  "rescaling_max": 0.999,
  "allow_clipping_in_normalization": true,
  "downsample_step": 4,
  "outputs_per_step": 1,
  "embedding_weight_std": 0.1,
  "speaker_embedding_weight_std": 0.05,
  "padding_idx": 0,
  "max_positions": 1024,
  "dropout": 0.0500000000000000044,
  "kernel_size": 3,
  "text_embed_dim": 256,
  "encoder_channels": 512,
  "decoder_channels": 256,
  "converter_channels": 256,
  "query_position_rate": 2.0,
  "key_position_rate": 7.6,
  "key_projection": true,
  "value_projection": true,
  "use_memory_mask": true,
  "trainable_positional_encodings": false,
  "freeze_embedding": false,
  "use_decoder_state_for_postnet_input": true,
  "pin_memory": true,
  "num_workers": 12,
  "masked_loss_weight": 0.5,
  "priority_freq": 3000,
  "priority_freq_weight": 0.0,
  "binary_divergence_weight": 0.1,
  "use_guided_attention": true,
  "guided_attention_sigma": 0.4,
  "batch_size": 6,
  "adam_beta1": 0.5,
  "adam_beta2": 0.9,
  "adam_eps": 1e-06,
  "initial_learning_rate": 0.0005,
  "lr_schedule": "noam_learning_rate_decay",
  "lr_schedule_kwargs": {},
  "nepochs": 2000,
}
"weight_decay": 0.0,
"clip_thresh": 0.1,
"checkpoint_interval": 10000,
"eval_interval": 10000,
"save_optimizer_state": true,
"force_monotonic_attention": true,
"window_ahead": 3,
"window_backward": 1,
"power": 1.4,
"not_for_train_speaker": "300, 301, 302, 303, 304, 305",
"vocoder": "world",
"converter_dim": 187,
"cloning_sample_size": 6,
"f_mapped": 30,
"speaker_encoder_attention_num_heads": 8,
"speaker_encoder_attention_dim": 16,
"speaker_encoder_checkpoint_interval": 1000,
"vuv_weight_postnet": 0.4,
"spec_cmp_separator": "--"
}
)";

inline const char* kLibriTtsEncoderHparamsRaw = R"({
  "name": "deepvoice3",
  "frontend": "en",
  "replace_pronunciation_prob": 0.5,
  "builder": "deepvoice3_multispeaker",
  "n_speakers": 1151,
  "speaker_embed_dim": 256,
  "num_mels": 80,
  "fmin": 125,
  "fmax": 7600,
  "fft_size": 1600,
  "hop_size": 400,
  "sample_rate": 22050,
  "preemphasis": 0.97,
  "min_level_db": -100,
  "ref_level_db": 20,
  "rescaling": false,
  "rescaling_max": 0.999,
  "allow_clipping_in_normalization": true,
  "downsample_step": 4,
  "outputs_per_step": 1,
  "embedding_weight_std": 0.1,
  "speaker_embedding_weight_std": 0.05,
  "padding_idx": 0,
  "max_positions": 1024,
  "dropout": 0.0500000000000000044,
  "kernel_size": 3,
  "text_embed_dim": 256,
  "encoder_channels": 512,
  "decoder_channels": 256,
  "converter_channels": 256,
  "query_position_rate": 2.0,
  "key_position_rate": 7.6,
  "key_projection": true,
  "value_projection": true,
  "use_memory_mask": true,
  "trainable_positional_encodings": false,
  "freeze_embedding": false,
  "use_decoder_state_for_postnet_input": true,
  "pin_memory": true,
  "num_workers": 12,
  "masked_loss_weight": 0.5,
  "priority_freq": 3000,
  "priority_freq_weight": 0.0,
  "binary_divergence_weight": 0.0,
  "use_guided_attention": true,
  "guided_attention_sigma": 0.4,
  "batch_size": 2,
  "adam_beta1": 0.5,
  "adam_beta2": 0.9,
  "adam_eps": 1e-06,
  "initial_learning_rate": 0.0005,
  "lr_schedule": "noam_learning_rate_decay",
  "lr_schedule_kwargs": {},
  "nepochs": 2000,
}
"weight_decay": 0.0,
"clip_thresh": 0.1,
"checkpoint_interval": 10000,
"eval_interval": 10000,
"save_optimizer_state": true,
"force_monotonic_attention": true,
"window_ahead": 3,
"window_backward": 1,
"power": 1.4,
"not_for_train_speaker": "",
"vocoder": "",
"converter_dim": 513,
"cloning_sample_size": 6,
"f_mapped": 128,
"speaker_encoder_attention_num_heads": 2,
"speaker_encoder_attention_dim": 128,
"speaker_encoder_checkpoint_interval": 1000,
"vuv_weight_postnet": 0.4,
"spec_cmp_separator": "--",
"save_preprocessed_wav": "/home/admin/Music/preprocessed_libri_tts"
}
)";

}  // namespace fixtures
