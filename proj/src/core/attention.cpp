#include "core/attention.hpp"

#include <algorithm>
#include <cmath>

#include "core/errors.hpp"

namespace vc {

void AttentionConfig::validate() const {
  require(d_in >= 1 && d_attn >= 1 && num_heads >= 1,
          ErrorCode::ConfigInvalid, "attention dimensions must be >= 1");
  require(d_attn % num_heads == 0, ErrorCode::ConfigInvalid,
          "d_attn (" + std::to_string(d_attn) +
              ") must be divisible by the head count (" +
              std::to_string(num_heads) + ")");
}

namespace {

Matrix init_matrix(size_t rows, size_t cols, Rng& rng) {
  double bound = 1.0 / std::sqrt(static_cast<double>(rows));
  Matrix m(rows, cols);
  for (size_t i = 0; i < m.size(); ++i)
    m.data()[i] = rng.uniform(-bound, bound);
  return m;
}

}  // namespace

AttentionParams AttentionParams::init(const AttentionConfig& cfg, Rng& rng) {
  cfg.validate();
  AttentionParams p;
  p.w_pre_k = init_matrix(cfg.d_in, cfg.d_attn, rng);
  p.w_pre_q = init_matrix(cfg.d_in, cfg.d_attn, rng);
  p.w_pre_v = init_matrix(cfg.d_in, cfg.d_attn, rng);
  for (size_t i = 0; i < cfg.num_heads; ++i) {
    p.w_head_k.push_back(init_matrix(cfg.d_attn, cfg.head_dim(), rng));
    p.w_head_q.push_back(init_matrix(cfg.d_attn, cfg.head_dim(), rng));
    p.w_head_v.push_back(init_matrix(cfg.d_attn, cfg.head_dim(), rng));
  }
  double bound = 1.0 / std::sqrt(static_cast<double>(cfg.d_attn));
  p.w_out.resize(cfg.d_attn);
  for (auto& v : p.w_out) v = rng.uniform(-bound, bound);
  return p;
}

AttentionParams AttentionParams::zeros(const AttentionConfig& cfg) {
  cfg.validate();
  AttentionParams p;
  p.w_pre_k = Matrix(cfg.d_in, cfg.d_attn);
  p.w_pre_q = Matrix(cfg.d_in, cfg.d_attn);
  p.w_pre_v = Matrix(cfg.d_in, cfg.d_attn);
  for (size_t i = 0; i < cfg.num_heads; ++i) {
    p.w_head_k.emplace_back(cfg.d_attn, cfg.head_dim());
    p.w_head_q.emplace_back(cfg.d_attn, cfg.head_dim());
    p.w_head_v.emplace_back(cfg.d_attn, cfg.head_dim());
  }
  p.w_out.assign(cfg.d_attn, 0.0);
  return p;
}

AttentionGrads AttentionGrads::zeros(const AttentionConfig& cfg) {
  AttentionGrads g;
  g.w_pre_k = Matrix(cfg.d_in, cfg.d_attn);
  g.w_pre_q = Matrix(cfg.d_in, cfg.d_attn);
  g.w_pre_v = Matrix(cfg.d_in, cfg.d_attn);
  for (size_t i = 0; i < cfg.num_heads; ++i) {
    g.w_head_k.emplace_back(cfg.d_attn, cfg.head_dim());
    g.w_head_q.emplace_back(cfg.d_attn, cfg.head_dim());
    g.w_head_v.emplace_back(cfg.d_attn, cfg.head_dim());
  }
  g.w_out.assign(cfg.d_attn, 0.0);
  return g;
}

double elu(double x) { return x >= 0.0 ? x : std::expm1(x); }

double elu_derivative(double x) { return x >= 0.0 ? 1.0 : std::exp(x); }

std::vector<double> softmax(std::span<const double> scores) {
  require(!scores.empty(), ErrorCode::EmptyInput, "softmax: empty input");
  double m = *std::max_element(scores.begin(), scores.end());
  std::vector<double> out(scores.size());
  double sum = 0.0;
  for (size_t i = 0; i < scores.size(); ++i) {
    out[i] = std::exp(scores[i] - m);
    sum += out[i];
  }
  for (auto& v : out) v /= sum;
  return out;
}

namespace {

Matrix elu_matrix(const Matrix& m) {
  Matrix out(m.rows(), m.cols());
  for (size_t i = 0; i < m.size(); ++i) out.data()[i] = elu(m.data()[i]);
  return out;
}

// Row-wise softmax of scores scaled by 1/sqrt(d_t).
Matrix scaled_row_softmax(const Matrix& scores, double scale) {
  Matrix out(scores.rows(), scores.cols());
  std::vector<double> row(scores.cols());
  for (size_t r = 0; r < scores.rows(); ++r) {
    for (size_t c = 0; c < scores.cols(); ++c) row[c] = scores(r, c) * scale;
    std::vector<double> sm = softmax(row);
    for (size_t c = 0; c < scores.cols(); ++c) out(r, c) = sm[c];
  }
  return out;
}

// grad_scores = p * (grad_p - sum(p * grad_p)), the softmax Jacobian applied
// row by row.
void row_softmax_backward(const Matrix& probs, const Matrix& grad_probs,
                          double scale, Matrix& grad_scores) {
  for (size_t r = 0; r < probs.rows(); ++r) {
    double inner = 0.0;
    for (size_t c = 0; c < probs.cols(); ++c)
      inner += probs(r, c) * grad_probs(r, c);
    for (size_t c = 0; c < probs.cols(); ++c)
      grad_scores(r, c) = probs(r, c) * (grad_probs(r, c) - inner) * scale;
  }
}

}  // namespace

AttentionCache attention_forward(const Matrix& input,
                                 const AttentionParams& params,
                                 const AttentionConfig& cfg) {
  cfg.validate();
  require(input.rows() >= 1, ErrorCode::EmptyInput,
          "attention: no input rows");
  require(input.cols() == cfg.d_in, ErrorCode::ShapeMismatch,
          "attention: input width != d_in");

  AttentionCache c;
  c.input = input;
  c.pre_k = matmul(input, params.w_pre_k);
  c.pre_q = matmul(input, params.w_pre_q);
  c.pre_v = matmul(input, params.w_pre_v);
  c.act_k = elu_matrix(c.pre_k);
  c.act_q = elu_matrix(c.pre_q);
  c.act_v = elu_matrix(c.pre_v);

  size_t t = input.rows();
  size_t d_t = cfg.head_dim();
  double scale = 1.0 / std::sqrt(static_cast<double>(d_t));
  c.heads_concat = Matrix(t, cfg.d_attn);
  for (size_t i = 0; i < cfg.num_heads; ++i) {
    Matrix k = matmul(c.act_k, params.w_head_k[i]);
    Matrix q = matmul(c.act_q, params.w_head_q[i]);
    Matrix v = matmul(c.act_v, params.w_head_v[i]);
    Matrix attn = scaled_row_softmax(matmul_nt(q, k), scale);
    Matrix head = matmul(attn, v);
    for (size_t r = 0; r < t; ++r)
      for (size_t col = 0; col < d_t; ++col)
        c.heads_concat(r, i * d_t + col) = head(r, col);
    c.head_k.push_back(std::move(k));
    c.head_q.push_back(std::move(q));
    c.head_v.push_back(std::move(v));
    c.attn.push_back(std::move(attn));
  }

  c.scores.resize(t);
  for (size_t r = 0; r < t; ++r)
    c.scores[r] = dot(c.heads_concat.row(r), params.w_out);
  c.weights = softmax(c.scores);
  return c;
}

void attention_backward(const AttentionCache& cache,
                        const AttentionParams& params,
                        const AttentionConfig& cfg,
                        std::span<const double> grad_weights,
                        AttentionGrads& grads, Matrix& grad_input) {
  size_t t = cache.input.rows();
  size_t d_t = cfg.head_dim();
  double scale = 1.0 / std::sqrt(static_cast<double>(d_t));
  require(grad_weights.size() == t, ErrorCode::ShapeMismatch,
          "attention_backward: grad length != frame count");

  // weights = softmax(scores)
  double inner = 0.0;
  for (size_t r = 0; r < t; ++r) inner += cache.weights[r] * grad_weights[r];
  std::vector<double> grad_scores(t);
  for (size_t r = 0; r < t; ++r)
    grad_scores[r] = cache.weights[r] * (grad_weights[r] - inner);

  // scores = heads_concat * w_out
  Matrix grad_heads(t, cfg.d_attn);
  for (size_t r = 0; r < t; ++r)
    for (size_t c = 0; c < cfg.d_attn; ++c) {
      grad_heads(r, c) = grad_scores[r] * params.w_out[c];
      grads.w_out[c] += cache.heads_concat(r, c) * grad_scores[r];
    }

  Matrix grad_act_k(t, cfg.d_attn), grad_act_q(t, cfg.d_attn),
      grad_act_v(t, cfg.d_attn);
  for (size_t i = 0; i < cfg.num_heads; ++i) {
    Matrix grad_head(t, d_t);
    for (size_t r = 0; r < t; ++r)
      for (size_t c = 0; c < d_t; ++c)
        grad_head(r, c) = grad_heads(r, i * d_t + c);

    // head = attn * v
    Matrix grad_attn = matmul_nt(grad_head, cache.head_v[i]);
    Matrix grad_v = matmul_tn(cache.attn[i], grad_head);

    // attn = row_softmax(q k^T / sqrt(d_t))
    Matrix grad_sim(t, t);
    row_softmax_backward(cache.attn[i], grad_attn, scale, grad_sim);
    Matrix grad_q = matmul(grad_sim, cache.head_k[i]);
    Matrix grad_k = matmul_tn(grad_sim, cache.head_q[i]);

    // k = act_k * w_head_k[i] (likewise q, v)
    add_inplace(grads.w_head_k[i], matmul_tn(cache.act_k, grad_k));
    add_inplace(grads.w_head_q[i], matmul_tn(cache.act_q, grad_q));
    add_inplace(grads.w_head_v[i], matmul_tn(cache.act_v, grad_v));
    add_inplace(grad_act_k, matmul_nt(grad_k, params.w_head_k[i]));
    add_inplace(grad_act_q, matmul_nt(grad_q, params.w_head_q[i]));
    add_inplace(grad_act_v, matmul_nt(grad_v, params.w_head_v[i]));
  }

  // act = ELU(pre), pre = input * w_pre
  auto through_elu = [&](const Matrix& pre, const Matrix& grad_act,
                         const Matrix& w_pre, Matrix& grad_w_pre) {
    Matrix grad_pre(t, cfg.d_attn);
    for (size_t idx = 0; idx < pre.size(); ++idx)
      grad_pre.data()[idx] =
          grad_act.data()[idx] * elu_derivative(pre.data()[idx]);
    add_inplace(grad_w_pre, matmul_tn(cache.input, grad_pre));
    add_inplace(grad_input, matmul_nt(grad_pre, w_pre));
  };
  through_elu(cache.pre_k, grad_act_k, params.w_pre_k, grads.w_pre_k);
  through_elu(cache.pre_q, grad_act_q, params.w_pre_q, grads.w_pre_q);
  through_elu(cache.pre_v, grad_act_v, params.w_pre_v, grads.w_pre_v);
}

AttentionPoolResult attention_pool(const Matrix& input,
                                   const AttentionParams& params,
                                   const AttentionConfig& cfg) {
  AttentionCache cache = attention_forward(input, params, cfg);
  AttentionPoolResult r;
  r.weights = cache.weights;
  r.pooled.assign(cfg.d_in, 0.0);
  for (size_t t = 0; t < input.rows(); ++t)
    for (size_t c = 0; c < cfg.d_in; ++c)
      r.pooled[c] += r.weights[t] * input(t, c);
  return r;
}

AttentionGrads attention_pool_backward(const Matrix& input,
                                       const AttentionParams& params,
                                       const AttentionConfig& cfg,
                                       std::span<const double> upstream,
                                       Matrix& grad_input) {
  require(upstream.size() == cfg.d_in, ErrorCode::ShapeMismatch,
          "attention_pool_backward: upstream length != d_in");
  AttentionCache cache = attention_forward(input, params, cfg);
  AttentionGrads grads = AttentionGrads::zeros(cfg);
  grad_input = Matrix(input.rows(), input.cols());

  // pooled = sum_t weights[t] * input[t]
  std::vector<double> grad_weights(input.rows());
  for (size_t t = 0; t < input.rows(); ++t) {
    grad_weights[t] = dot(input.row(t), upstream);
    for (size_t c = 0; c < cfg.d_in; ++c)
      grad_input(t, c) += cache.weights[t] * upstream[c];
  }

  attention_backward(cache, params, cfg, grad_weights, grads, grad_input);
  return grads;
}

}  // namespace vc
