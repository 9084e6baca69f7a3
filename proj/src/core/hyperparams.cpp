#include "core/hyperparams.hpp"

#include <cctype>
#include <cstdint>
#include <fstream>
#include <sstream>

#include <nlohmann/json.hpp>

#include "core/errors.hpp"

namespace vc {

using nlohmann::json;

std::string normalize_relaxed_json(const std::string& text) {
  std::string out;
  out.reserve(text.size());
  bool in_string = false;
  bool escaped = false;
  int depth = 0;

  auto next_nonspace = [&](size_t from) -> size_t {
    while (from < text.size() &&
           std::isspace(static_cast<unsigned char>(text[from])))
      ++from;
    return from;
  };

  for (size_t i = 0; i < text.size(); ++i) {
    char c = text[i];
    if (in_string) {
      out.push_back(c);
      if (escaped)
        escaped = false;
      else if (c == '\\')
        escaped = true;
      else if (c == '"')
        in_string = false;
      continue;
    }
    switch (c) {
      case '"':
        in_string = true;
        out.push_back(c);
        break;
      case '{':
      case '[':
        ++depth;
        out.push_back(c);
        break;
      case ']':
        --depth;
        out.push_back(c);
        break;
      case '}': {
        size_t next = next_nonspace(i + 1);
        if (depth == 1 && next < text.size()) {
          // More content after the top-level close: the object continues in
          // another block. Splice the blocks together.
          if (text[next] == '"') {
            out.push_back(',');
            continue;
          }
          if (text[next] == '{') {
            out.push_back(',');
            i = next;  // also swallow the reopening brace
            continue;
          }
        }
        --depth;
        out.push_back(c);
        break;
      }
      case ',': {
        size_t next = next_nonspace(i + 1);
        if (next < text.size() && (text[next] == '}' || text[next] == ']'))
          continue;  // trailing comma
        if (next >= text.size()) continue;
        out.push_back(c);
        break;
      }
      default:
        out.push_back(c);
        break;
    }
  }
  return out;
}

namespace {

struct KeyReader {
  const json& doc;
  std::vector<std::string> consumed;

  bool has(const std::string& key) const { return doc.contains(key); }

  template <typename T>
  void take(const std::string& key, T& dst) {
    if (!doc.contains(key)) return;
    try {
      dst = doc.at(key).get<T>();
    } catch (const json::exception&) {
      fail(ErrorCode::ConfigInvalid,
           "hyperparameters: key '" + key + "' has the wrong type");
    }
    consumed.push_back(key);
  }
};

}  // namespace

Hyperparams parse_hyperparams(const std::string& text) {
  json doc;
  try {
    doc = json::parse(normalize_relaxed_json(text));
  } catch (const json::exception& e) {
    fail(ErrorCode::ConfigInvalid,
         std::string("hyperparameters: parse error: ") + e.what());
  }
  require(doc.is_object(), ErrorCode::ConfigInvalid,
          "hyperparameters: top level must be an object");

  Hyperparams hp = default_hyperparams();
  KeyReader r{doc, {}};

  int num_mels = hp.dsp.num_mels;
  r.take("num_mels", num_mels);
  r.take("fmin", hp.dsp.fmin);
  r.take("fmax", hp.dsp.fmax);
  r.take("fft_size", hp.dsp.fft_size);
  r.take("hop_size", hp.dsp.hop_size);
  r.take("sample_rate", hp.dsp.sample_rate);
  r.take("preemphasis", hp.dsp.preemphasis);
  r.take("min_level_db", hp.dsp.min_level_db);
  r.take("ref_level_db", hp.dsp.ref_level_db);
  hp.dsp.num_mels = num_mels;

  size_t d_embedding = hp.encoder.d_embedding;
  size_t cloning = hp.encoder.max_cloning_samples;
  size_t f_mapped = hp.encoder.f_mapped;
  size_t heads = hp.encoder.temporal.num_heads;
  size_t d_attn = hp.encoder.temporal.d_attn;
  r.take("speaker_embed_dim", d_embedding);
  r.take("cloning_sample_size", cloning);
  r.take("f_mapped", f_mapped);
  r.take("speaker_encoder_attention_num_heads", heads);
  r.take("speaker_encoder_attention_dim", d_attn);

  hp.encoder.d_mel = static_cast<size_t>(num_mels);
  hp.encoder.f_mapped = f_mapped;
  hp.encoder.d_embedding = d_embedding;
  hp.encoder.max_cloning_samples = cloning;
  hp.encoder.temporal = AttentionConfig{f_mapped, d_attn, heads};
  hp.encoder.cross = AttentionConfig{f_mapped, d_attn, heads};

  r.take("adam_beta1", hp.adam.beta1);
  r.take("adam_beta2", hp.adam.beta2);
  r.take("adam_eps", hp.adam.epsilon);
  r.take("initial_learning_rate", hp.adam.learning_rate);
  r.take("power", hp.vocoder_power);

  for (auto it = doc.begin(); it != doc.end(); ++it) {
    bool used = false;
    for (const auto& k : r.consumed)
      if (k == it.key()) {
        used = true;
        break;
      }
    if (!used) hp.ignored_keys.push_back(it.key());
  }

  hp.dsp.validate();
  hp.encoder.validate();
  return hp;
}

Hyperparams load_hyperparams_file(const std::string& path) {
  std::ifstream in(path);
  require(in.good(), ErrorCode::FileNotFound, "cannot open " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return parse_hyperparams(ss.str());
}

Hyperparams default_hyperparams() {
  Hyperparams hp;
  hp.dsp = DspConfig{};
  hp.encoder = EncoderConfig{};
  hp.encoder.d_mel = 80;
  hp.encoder.f_mapped = 30;
  hp.encoder.temporal = AttentionConfig{30, 16, 8};
  hp.encoder.cross = AttentionConfig{30, 16, 8};
  hp.encoder.d_embedding = 256;
  hp.encoder.max_cloning_samples = 6;
  hp.adam = AdamConfig{};
  hp.vocoder_power = 1.4;
  return hp;
}

std::string config_digest(const DspConfig& dsp, const EncoderConfig& enc) {
  std::ostringstream ss;
  ss << dsp.num_mels << '|' << dsp.fmin << '|' << dsp.fmax << '|'
     << dsp.fft_size << '|' << dsp.hop_size << '|' << dsp.sample_rate << '|'
     << dsp.preemphasis << '|' << dsp.min_level_db << '|' << dsp.ref_level_db
     << '|' << dsp.vad_threshold_db << '|' << enc.d_mel << '|' << enc.f_mapped
     << '|' << enc.temporal.d_attn << '|' << enc.temporal.num_heads << '|'
     << enc.cross.d_attn << '|' << enc.cross.num_heads << '|'
     << enc.d_embedding << '|' << enc.max_cloning_samples << '|'
     << variant_name(enc.variant);
  std::string s = ss.str();
  uint64_t h = 0xcbf29ce484222325ull;  // FNV-1a
  for (unsigned char c : s) {
    h ^= c;
    h *= 0x100000001b3ull;
  }
  char buf[17];
  std::snprintf(buf, sizeof(buf), "%016llx",
                static_cast<unsigned long long>(h));
  return std::string(buf);
}

}  // namespace vc
