#pragma once

// Straight-line reference evaluation of the attention aggregation math,
// written with plain nested loops and kept independent of the library's
// matrix helpers. Tests compare library output against this.

#include <cmath>
#include <vector>

#include "core/attention.hpp"
#include "core/speaker_encoder.hpp"

namespace oracle {

using Table = std::vector<std::vector<double>>;

inline Table to_table(const vc::Matrix& m) {
  Table t(m.rows(), std::vector<double>(m.cols()));
  for (size_t r = 0; r < m.rows(); ++r)
    for (size_t c = 0; c < m.cols(); ++c) t[r][c] = m(r, c);
  return t;
}

inline double ref_elu(double x) { return x >= 0.0 ? x : std::exp(x) - 1.0; }

inline Table mul(const Table& a, const Table& b) {
  size_t n = a.size(), k = b.size(), m = b[0].size();
  Table c(n, std::vector<double>(m, 0.0));
  for (size_t i = 0; i < n; ++i)
    for (size_t j = 0; j < m; ++j)
      for (size_t p = 0; p < k; ++p) c[i][j] += a[i][p] * b[p][j];
  return c;
}

inline std::vector<double> ref_softmax(const std::vector<double>& s) {
  double mx = s[0];
  for (double v : s) mx = std::max(mx, v);
  std::vector<double> e(s.size());
  double sum = 0.0;
  for (size_t i = 0; i < s.size(); ++i) {
    e[i] = std::exp(s[i] - mx);
    sum += e[i];
  }
  for (auto& v : e) v /= sum;
  return e;
}

struct AttentionWeightsResult {
  std::vector<double> weights;
};

// The scores path: pre-projections through ELU, per-head scaled dot-product
// attention, concatenation, scalar projection, softmax over rows.
inline std::vector<double> attention_weights(
    const Table& y, const vc::AttentionParams& params,
    const vc::AttentionConfig& cfg) {
  size_t t_len = y.size();
  size_t d_t = cfg.head_dim();

  Table wk = to_table(params.w_pre_k);
  Table wq = to_table(params.w_pre_q);
  Table wv = to_table(params.w_pre_v);
  Table kp = mul(y, wk), qp = mul(y, wq), vp = mul(y, wv);
  for (auto& row : kp)
    for (auto& v : row) v = ref_elu(v);
  for (auto& row : qp)
    for (auto& v : row) v = ref_elu(v);
  for (auto& row : vp)
    for (auto& v : row) v = ref_elu(v);

  Table heads(t_len, std::vector<double>(cfg.d_attn, 0.0));
  for (size_t i = 0; i < cfg.num_heads; ++i) {
    Table ki = mul(kp, to_table(params.w_head_k[i]));
    Table qi = mul(qp, to_table(params.w_head_q[i]));
    Table vi = mul(vp, to_table(params.w_head_v[i]));

    // softmax(Q K^T / sqrt(d_t)) V, row by row
    for (size_t r = 0; r < t_len; ++r) {
      std::vector<double> sim(t_len, 0.0);
      for (size_t c = 0; c < t_len; ++c)
        for (size_t d = 0; d < d_t; ++d) sim[c] += qi[r][d] * ki[c][d];
      for (auto& v : sim) v /= std::sqrt(static_cast<double>(d_t));
      std::vector<double> attn = ref_softmax(sim);
      for (size_t d = 0; d < d_t; ++d) {
        double acc = 0.0;
        for (size_t c = 0; c < t_len; ++c) acc += attn[c] * vi[c][d];
        heads[r][i * d_t + d] = acc;
      }
    }
  }

  std::vector<double> scores(t_len, 0.0);
  for (size_t r = 0; r < t_len; ++r)
    for (size_t c = 0; c < cfg.d_attn; ++c)
      scores[r] += heads[r][c] * params.w_out[c];
  return ref_softmax(scores);
}

// pooled = sum_t a_t y_t
inline std::vector<double> attention_pool(const Table& y,
                                          const vc::AttentionParams& params,
                                          const vc::AttentionConfig& cfg) {
  std::vector<double> a = attention_weights(y, params, cfg);
  std::vector<double> pooled(y[0].size(), 0.0);
  for (size_t t = 0; t < y.size(); ++t)
    for (size_t c = 0; c < pooled.size(); ++c) pooled[c] += a[t] * y[t][c];
  return pooled;
}

// Cross-sample route: attention weights over sample rows, per-sample
// projection to the embedding dimension, weighted sum.
inline std::vector<double> cross_sample_aggregate(
    const Table& samples, const vc::EncoderParams& params,
    const vc::EncoderConfig& cfg) {
  std::vector<double> a = attention_weights(samples, params.cross, cfg.cross);
  Table projected = mul(samples, to_table(params.w_embed));
  std::vector<double> out(cfg.d_embedding, 0.0);
  for (size_t j = 0; j < samples.size(); ++j)
    for (size_t d = 0; d < cfg.d_embedding; ++d)
      out[d] += a[j] * projected[j][d];
  return out;
}

}  // namespace oracle
