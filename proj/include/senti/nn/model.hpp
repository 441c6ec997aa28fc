#pragma once

// Embedding -> single-layer LSTM -> dropout -> dense -> softmax classifier
// with hand-written backpropagation through time.

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "senti/error.hpp"
#include "senti/nn/layers.hpp"
#include "senti/nn/tensor.hpp"
#include "senti/random.hpp"

namespace senti::nn {

struct ModelConfig {
  std::size_t vocab_size = 2;
  std::size_t embed_dim = 128;
  std::size_t hidden_dim = 128;
  std::size_t num_classes = 2;
  std::size_t max_len = 100;
  double lstm_dropout = 0.3;  // applied to the final hidden state only when enabled
  bool lstm_dropout_enabled = false;
  double fc_dropout = 0.5;

  bool operator==(const ModelConfig&) const = default;
};

inline std::uint64_t count_parameters(std::uint64_t V, std::uint64_t E, std::uint64_t H, std::uint64_t C) {
  return V * E + 4 * (E * H + H * H + 2 * H) + (H * C + C);
}

inline constexpr std::size_t kNumArrays = 7;
inline constexpr std::array<const char*, kNumArrays> kArrayNames{"embedding", "lstm.w_ih", "lstm.w_hh", "lstm.b_ih",
                                                                 "lstm.b_hh", "fc.w",      "fc.b"};

template <class T>
struct ModelParams {
  ModelConfig config;
  EmbeddingLayer<T> embedding;
  LstmCell<T> lstm;
  DenseLayer<T> dense;

  // Zero-filled parameters with the shapes implied by cfg.
  static ModelParams zeros(const ModelConfig& cfg) {
    const std::size_t V = cfg.vocab_size, E = cfg.embed_dim, H = cfg.hidden_dim, C = cfg.num_classes;
    if (V < 1 || E < 1 || H < 1 || C < 1) throw InputError("model dimensions must all be >= 1");
    ModelParams p;
    p.config = cfg;
    p.embedding.weights = Tensor2<T>(V, E);
    p.lstm.w_ih = Tensor2<T>(4 * H, E);
    p.lstm.w_hh = Tensor2<T>(4 * H, H);
    p.lstm.b_ih.assign(4 * H, T(0));
    p.lstm.b_hh.assign(4 * H, T(0));
    p.dense.w = Tensor2<T>(C, H);
    p.dense.b.assign(C, T(0));
    return p;
  }

  // Fixed order: embedding, w_ih, w_hh, b_ih, b_hh, fc.w, fc.b.
  std::array<std::span<T>, kNumArrays> arrays() {
    return {embedding.weights.data, lstm.w_ih.data, lstm.w_hh.data, lstm.b_ih, lstm.b_hh, dense.w.data, dense.b};
  }
  std::array<std::span<const T>, kNumArrays> arrays() const {
    return {embedding.weights.data, lstm.w_ih.data, lstm.w_hh.data, lstm.b_ih, lstm.b_hh, dense.w.data, dense.b};
  }

  std::uint64_t parameter_count() const {
    std::uint64_t n = 0;
    for (auto a : arrays()) n += a.size();
    return n;
  }
};

template <class U, class T>
ModelParams<U> cast(const ModelParams<T>& p) {
  auto out = ModelParams<U>::zeros(p.config);
  auto dst = out.arrays();
  auto src = p.arrays();
  for (std::size_t a = 0; a < kNumArrays; ++a)
    for (std::size_t k = 0; k < src[a].size(); ++k) dst[a][k] = static_cast<U>(src[a][k]);
  return out;
}

// Weights uniform in +-1/sqrt(H), embedding uniform in +-1/sqrt(E) with the
// PAD row zeroed, biases zero.
template <class T>
ModelParams<T> init_params(const ModelConfig& cfg, std::uint64_t seed) {
  auto p = ModelParams<T>::zeros(cfg);
  Rng rng(seed);
  auto fill = [&](Tensor2<T>& m, double bound) {
    for (auto& x : m.data) x = static_cast<T>(uniform(rng, -bound, bound));
  };
  fill(p.embedding.weights, 1.0 / std::sqrt(static_cast<double>(cfg.embed_dim)));
  for (auto& x : p.embedding.weights.row(0)) x = T(0);
  const double k = 1.0 / std::sqrt(static_cast<double>(cfg.hidden_dim));
  fill(p.lstm.w_ih, k);
  fill(p.lstm.w_hh, k);
  fill(p.dense.w, k);
  return p;
}

struct Example {
  std::vector<std::int32_t> indices;  // padded to max_len
  std::size_t true_length = 0;
  std::size_t label = 0;
};

// Everything the backward pass needs from one forward pass.
template <class T>
struct ForwardCache {
  std::vector<std::int32_t> tokens;  // the true_length real positions
  std::vector<T> gates;              // L x 4H activated [i, f, g, o]
  std::vector<T> c;                  // (L+1) x H, row 0 is the zero state
  std::vector<T> h;                  // (L+1) x H
  Tensor1<T> lstm_mask;              // H multipliers on the final hidden state
  Tensor1<T> fc_mask;                // H multipliers before the dense layer
  Tensor1<T> dense_in;               // H
  Tensor1<T> logits;                 // C
};

template <class T>
ForwardCache<T> forward(const ModelParams<T>& p, std::span<const std::int32_t> indices, std::size_t true_length,
                        bool training, Rng& rng) {
  const auto& cfg = p.config;
  const std::size_t H = cfg.hidden_dim, E = cfg.embed_dim;
  if (true_length > indices.size()) throw InputError("forward: true_length exceeds sequence length");
  ForwardCache<T> fc;
  fc.tokens.assign(indices.begin(), indices.begin() + static_cast<std::ptrdiff_t>(true_length));
  const auto vecs = embed_forward(std::span<const std::int32_t>(fc.tokens), p.embedding);
  fc.gates.resize(true_length * 4 * H);
  fc.c.assign((true_length + 1) * H, T(0));
  fc.h.assign((true_length + 1) * H, T(0));
  auto s = LstmState<T>::zeros(H);
  for (std::size_t t = 0; t < true_length; ++t) {
    if (vecs[t].size() != E) throw InputError("forward: embedding width mismatch");
    s = lstm_step(std::span<const T>(vecs[t]), s, p.lstm, fc.gates.data() + t * 4 * H);
    std::copy(s.c.begin(), s.c.end(), fc.c.begin() + static_cast<std::ptrdiff_t>((t + 1) * H));
    std::copy(s.h.begin(), s.h.end(), fc.h.begin() + static_cast<std::ptrdiff_t>((t + 1) * H));
  }
  auto last = std::span<const T>(fc.h).subspan(true_length * H, H);
  const bool lstm_drop = training && cfg.lstm_dropout_enabled;
  const auto after_lstm = dropout(last, lstm_drop ? cfg.lstm_dropout : 0.0, lstm_drop, rng, &fc.lstm_mask);
  fc.dense_in = dropout(std::span<const T>(after_lstm), cfg.fc_dropout, training, rng, &fc.fc_mask);
  fc.logits = dense_forward(std::span<const T>(fc.dense_in), p.dense);
  return fc;
}

// Inference-mode logits (no dropout, no randomness consumed).
template <class T>
Tensor1<T> infer_logits(const ModelParams<T>& p, std::span<const std::int32_t> indices, std::size_t true_length) {
  Rng unused(0);
  return forward(p, indices, true_length, false, unused).logits;
}

// Accumulates d(scale * loss)/d(params) for one cached example into g.
template <class T>
void backward(const ModelParams<T>& p, const ForwardCache<T>& fc, std::span<const double> dlogits, double scale,
              ModelParams<double>& g) {
  const std::size_t H = p.config.hidden_dim;
  const std::size_t L = fc.tokens.size();
  std::vector<double> dz(dlogits.size());
  for (std::size_t k = 0; k < dz.size(); ++k) dz[k] = scale * dlogits[k];

  outer_add(g.dense.w, std::span<const double>(dz), std::span<const T>(fc.dense_in));
  for (std::size_t k = 0; k < dz.size(); ++k) g.dense.b[k] += dz[k];
  std::vector<double> dh(H, 0.0);
  matvec_t(p.dense.w, std::span<const double>(dz), std::span<double>(dh));
  for (std::size_t j = 0; j < H; ++j)
    dh[j] *= static_cast<double>(fc.fc_mask[j]) * static_cast<double>(fc.lstm_mask[j]);

  std::vector<double> dc(H, 0.0), da(4 * H), dh_prev(H);
  for (std::size_t t = L; t-- > 0;) {
    const T* gt = fc.gates.data() + t * 4 * H;
    const T* c_t = fc.c.data() + (t + 1) * H;
    const T* c_prev = fc.c.data() + t * H;
    for (std::size_t j = 0; j < H; ++j) {
      const double i = gt[j], f = gt[H + j], gg = gt[2 * H + j], o = gt[3 * H + j];
      const double tc = std::tanh(static_cast<double>(c_t[j]));
      const double d_o = dh[j] * tc;
      dc[j] += dh[j] * o * (1.0 - tc * tc);
      const double d_i = dc[j] * gg;
      const double d_g = dc[j] * i;
      const double d_f = dc[j] * static_cast<double>(c_prev[j]);
      da[j] = d_i * i * (1.0 - i);
      da[H + j] = d_f * f * (1.0 - f);
      da[2 * H + j] = d_g * (1.0 - gg * gg);
      da[3 * H + j] = d_o * o * (1.0 - o);
      dc[j] *= f;
    }
    const auto tok = static_cast<std::size_t>(fc.tokens[t]);
    const auto x = p.embedding.weights.row(tok);
    const auto h_prev = std::span<const T>(fc.h).subspan(t * H, H);
    const auto dav = std::span<const double>(da);
    outer_add(g.lstm.w_ih, dav, x);
    outer_add(g.lstm.w_hh, dav, h_prev);
    for (std::size_t k = 0; k < 4 * H; ++k) {
      g.lstm.b_ih[k] += da[k];
      g.lstm.b_hh[k] += da[k];
    }
    if (tok != 0) matvec_t(p.lstm.w_ih, dav, g.embedding.weights.row(tok));  // PAD row stays frozen
    std::fill(dh_prev.begin(), dh_prev.end(), 0.0);
    matvec_t(p.lstm.w_hh, dav, std::span<double>(dh_prev));
    dh.swap(dh_prev);
  }
}

struct BatchResult {
  double loss = 0.0;         // weight-normalized mean
  std::size_t correct = 0;   // argmax hits under the forward pass used
  ModelParams<double> grad;  // averaged gradients (empty when not requested)
};

inline std::size_t argmax_tie_low(std::span<const double> p) {
  std::size_t best = 0;
  for (std::size_t k = 1; k < p.size(); ++k)
    if (p[k] > p[best]) best = k;
  return best;
}

template <class T>
std::size_t predicted_class(const Tensor1<T>& logits) {
  std::vector<double> z(logits.begin(), logits.end());
  return argmax_tie_low(z);
}

inline double class_weight(const std::optional<std::vector<double>>& w, std::size_t label) {
  if (!w) return 1.0;
  if (label >= w->size()) throw InputError("class weight missing for class " + std::to_string(label));
  return (*w)[label];
}

// Forward every example (consuming rng in example order for dropout masks),
// then optionally backpropagate. Loss and gradients are
//   sum_i w_{y_i} * CE_i / sum_i w_{y_i}.
template <class T>
BatchResult run_batch(const ModelParams<T>& p, std::span<const Example> batch,
                      const std::optional<std::vector<double>>& class_weights, bool training, Rng& rng,
                      bool want_grad = true) {
  if (batch.empty()) throw InputError("batch is empty");
  BatchResult r;
  if (want_grad) r.grad = ModelParams<double>::zeros(p.config);
  double wsum = 0.0;
  std::vector<ForwardCache<T>> caches;
  std::vector<LossGrad> losses;
  caches.reserve(batch.size());
  losses.reserve(batch.size());
  for (const auto& ex : batch) {
    if (ex.label >= p.config.num_classes) throw InputError("label out of range");
    caches.push_back(forward(p, std::span<const std::int32_t>(ex.indices), ex.true_length, training, rng));
    losses.push_back(cross_entropy(std::span<const T>(caches.back().logits), ex.label));
    if (predicted_class(caches.back().logits) == ex.label) ++r.correct;
    const double w = class_weight(class_weights, ex.label);
    r.loss += w * losses.back().loss;
    wsum += w;
  }
  r.loss /= wsum;
  if (want_grad) {
    for (std::size_t i = 0; i < batch.size(); ++i)
      backward(p, caches[i], std::span<const double>(losses[i].grad), class_weight(class_weights, batch[i].label) / wsum,
               r.grad);
    const auto arrs = std::as_const(r.grad).arrays();
    for (std::size_t a = 0; a < kNumArrays; ++a)
      if (!all_finite(arrs[a])) throw NumericError(std::string("non-finite gradient in ") + kArrayNames[a]);
  }
  return r;
}

}  // namespace senti::nn
