#pragma once

#include <span>
#include <vector>

#include "core/matrix.hpp"
#include "core/rng.hpp"

namespace vc {

class Rng;

struct AttentionConfig {
  size_t d_in = 0;       // feature dimension of the input rows
  size_t d_attn = 0;     // shared projection dimension
  size_t num_heads = 1;  // I

  size_t head_dim() const { return d_attn / num_heads; }  // d_t
  void validate() const;
};

// Weights of one attention pooling block. The pre-projections lift rows to
// d_attn through an ELU; each head then projects that representation down to
// d_t. Per-row scores come from the concatenated heads through w_out.
struct AttentionParams {
  Matrix w_pre_k, w_pre_q, w_pre_v;             // d_in x d_attn
  std::vector<Matrix> w_head_k, w_head_q, w_head_v;  // per head, d_attn x d_t
  std::vector<double> w_out;                    // d_attn

  static AttentionParams init(const AttentionConfig& cfg, Rng& rng);
  static AttentionParams zeros(const AttentionConfig& cfg);
};

struct AttentionGrads {
  Matrix w_pre_k, w_pre_q, w_pre_v;
  std::vector<Matrix> w_head_k, w_head_q, w_head_v;
  std::vector<double> w_out;

  static AttentionGrads zeros(const AttentionConfig& cfg);
};

double elu(double x);
double elu_derivative(double x);

// Numerically stable (max-subtracted) softmax.
std::vector<double> softmax(std::span<const double> scores);

// Everything the backward pass needs from a forward evaluation.
struct AttentionCache {
  Matrix input;                       // T x d_in
  Matrix pre_k, pre_q, pre_v;         // T x d_attn, before the ELU
  Matrix act_k, act_q, act_v;         // T x d_attn, after the ELU
  std::vector<Matrix> head_k, head_q, head_v;  // per head, T x d_t
  std::vector<Matrix> attn;           // per head, T x T row-softmax weights
  Matrix heads_concat;                // T x d_attn
  std::vector<double> scores;         // T
  std::vector<double> weights;        // T, softmax of scores
};

// Computes the per-row attention weights (the scores path shared by temporal
// and cross-sample aggregation).
AttentionCache attention_forward(const Matrix& input,
                                 const AttentionParams& params,
                                 const AttentionConfig& cfg);

// Accumulates gradients of the attention weights contracted against
// grad_weights into grads and grad_input.
void attention_backward(const AttentionCache& cache,
                        const AttentionParams& params,
                        const AttentionConfig& cfg,
                        std::span<const double> grad_weights,
                        AttentionGrads& grads, Matrix& grad_input);

struct AttentionPoolResult {
  std::vector<double> weights;  // length T, sums to 1
  std::vector<double> pooled;   // length d_in, convex combination of rows
};

// pooled = sum_t weights[t] * input[t]
AttentionPoolResult attention_pool(const Matrix& input,
                                   const AttentionParams& params,
                                   const AttentionConfig& cfg);

// Reverse-mode gradients of attention_pool's pooled output contracted
// against upstream. Returns parameter gradients; grad_input gets the input
// gradient.
AttentionGrads attention_pool_backward(const Matrix& input,
                                       const AttentionParams& params,
                                       const AttentionConfig& cfg,
                                       std::span<const double> upstream,
                                       Matrix& grad_input);

}  // namespace vc
