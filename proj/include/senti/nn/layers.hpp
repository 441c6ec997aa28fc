#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <span>
#include <vector>

#include "senti/error.hpp"
#include "senti/nn/tensor.hpp"
#include "senti/random.hpp"

namespace senti::nn {

template <class T>
struct EmbeddingLayer {
  Tensor2<T> weights;  // V x E, row 0 is PAD
};

// Gate blocks in rows [i, f, g, o], each H rows tall.
template <class T>
struct LstmCell {
  Tensor2<T> w_ih;  // 4H x E
  Tensor2<T> w_hh;  // 4H x H
  Tensor1<T> b_ih;  // 4H
  Tensor1<T> b_hh;  // 4H

  std::size_t hidden() const { return w_hh.cols; }
  std::size_t input() const { return w_ih.cols; }
};

template <class T>
struct LstmState {
  Tensor1<T> h;
  Tensor1<T> c;

  static LstmState zeros(std::size_t hidden) { return {Tensor1<T>(hidden, T(0)), Tensor1<T>(hidden, T(0))}; }
};

template <class T>
struct DenseLayer {
  Tensor2<T> w;  // C x H
  Tensor1<T> b;  // C
};

inline double sigmoid(double x) {
  if (x >= 0.0) return 1.0 / (1.0 + std::exp(-x));
  const double e = std::exp(x);
  return e / (1.0 + e);
}

template <class T>
std::vector<Tensor1<T>> embed_forward(std::span<const std::int32_t> seq, const EmbeddingLayer<T>& emb) {
  std::vector<Tensor1<T>> out;
  out.reserve(seq.size());
  for (auto idx : seq) {
    if (idx < 0 || static_cast<std::size_t>(idx) >= emb.weights.rows)
      throw InputError("embedding index " + std::to_string(idx) + " outside vocabulary of size " +
                       std::to_string(emb.weights.rows));
    auto r = emb.weights.row(static_cast<std::size_t>(idx));
    out.emplace_back(r.begin(), r.end());
  }
  return out;
}

// One step of the cell. When `gates` is given it receives the 4H activated
// gate values [i, f, g, o] for use in backpropagation.
template <class T>
LstmState<T> lstm_step(std::span<const T> x, const LstmState<T>& s, const LstmCell<T>& cell, T* gates = nullptr) {
  const std::size_t H = cell.hidden();
  require_shape(x.size() == cell.input(), "lstm_step input width");
  require_shape(s.h.size() == H && s.c.size() == H, "lstm_step state width");
  require_shape(cell.w_ih.rows == 4 * H && cell.b_ih.size() == 4 * H && cell.b_hh.size() == 4 * H,
                "lstm_step gate rows");
  std::vector<double> a(4 * H);
  for (std::size_t k = 0; k < 4 * H; ++k) a[k] = static_cast<double>(cell.b_ih[k]) + static_cast<double>(cell.b_hh[k]);
  matvec(cell.w_ih, x, std::span<double>(a));
  matvec(cell.w_hh, std::span<const T>(s.h), std::span<double>(a));

  LstmState<T> out{Tensor1<T>(H), Tensor1<T>(H)};
  for (std::size_t j = 0; j < H; ++j) {
    const double i = sigmoid(a[j]);
    const double f = sigmoid(a[H + j]);
    const double g = std::tanh(a[2 * H + j]);
    const double o = sigmoid(a[3 * H + j]);
    const double c = f * static_cast<double>(s.c[j]) + i * g;
    out.c[j] = static_cast<T>(c);
    out.h[j] = static_cast<T>(o * std::tanh(c));
    if (gates) {
      gates[j] = static_cast<T>(i);
      gates[H + j] = static_cast<T>(f);
      gates[2 * H + j] = static_cast<T>(g);
      gates[3 * H + j] = static_cast<T>(o);
    }
  }
  return out;
}

// Runs positions [0, true_length) from the zero state and returns the state
// after the last real token. true_length 0 yields the zero state.
template <class T>
LstmState<T> lstm_forward(const std::vector<Tensor1<T>>& vecs, std::size_t true_length, const LstmCell<T>& cell) {
  if (true_length > vecs.size()) throw InputError("lstm_forward: true_length exceeds sequence length");
  auto s = LstmState<T>::zeros(cell.hidden());
  for (std::size_t t = 0; t < true_length; ++t) s = lstm_step(std::span<const T>(vecs[t]), s, cell);
  return s;
}

// Inverted dropout. The applied multipliers (0 or 1/(1-rate)) are written to
// `mask` when given; in inference mode the mask is all ones.
template <class T>
Tensor1<T> dropout(std::span<const T> x, double rate, bool training, Rng& rng, Tensor1<T>* mask = nullptr) {
  if (!(rate >= 0.0 && rate < 1.0)) throw InputError("dropout rate must lie in [0, 1)");
  Tensor1<T> out(x.begin(), x.end());
  if (mask) mask->assign(x.size(), T(1));
  if (!training || rate == 0.0) return out;
  const T keep = static_cast<T>(1.0 / (1.0 - rate));
  for (std::size_t k = 0; k < x.size(); ++k) {
    const T m = uniform01(rng) < rate ? T(0) : keep;
    out[k] = x[k] * m;
    if (mask) (*mask)[k] = m;
  }
  return out;
}

template <class T>
Tensor1<T> dense_forward(std::span<const T> h, const DenseLayer<T>& d) {
  require_shape(h.size() == d.w.cols && d.b.size() == d.w.rows, "dense_forward");
  std::vector<double> acc(d.w.rows);
  for (std::size_t k = 0; k < acc.size(); ++k) acc[k] = static_cast<double>(d.b[k]);
  matvec(d.w, h, std::span<double>(acc));
  return Tensor1<T>(acc.begin(), acc.end());
}

template <class T>
std::vector<double> softmax(std::span<const T> logits) {
  if (logits.empty()) throw InputError("softmax: no logits");
  double mx = -std::numeric_limits<double>::infinity();
  for (T z : logits) mx = std::max(mx, static_cast<double>(z));
  std::vector<double> p(logits.size());
  double sum = 0.0;
  for (std::size_t k = 0; k < p.size(); ++k) sum += p[k] = std::exp(static_cast<double>(logits[k]) - mx);
  for (auto& x : p) x /= sum;
  return p;
}

struct LossGrad {
  double loss = 0.0;
  std::vector<double> grad;  // d loss / d logits = softmax - onehot
};

// Fused softmax cross-entropy: log-sum-exp minus the label logit.
template <class T>
LossGrad cross_entropy(std::span<const T> logits, std::size_t label) {
  if (label >= logits.size()) throw InputError("cross_entropy: label " + std::to_string(label) + " out of range");
  double mx = -std::numeric_limits<double>::infinity();
  for (T z : logits) mx = std::max(mx, static_cast<double>(z));
  double sum = 0.0;
  for (T z : logits) sum += std::exp(static_cast<double>(z) - mx);
  LossGrad out;
  out.loss = mx + std::log(sum) - static_cast<double>(logits[label]);
  out.grad = softmax(logits);
  out.grad[label] -= 1.0;
  return out;
}

}  // namespace senti::nn
