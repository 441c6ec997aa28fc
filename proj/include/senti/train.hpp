#pragma once

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdint>
#include <functional>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "senti/csv.hpp"
#include "senti/error.hpp"
#include "senti/nn/adam.hpp"
#include "senti/nn/model.hpp"
#include "senti/random.hpp"

namespace senti::train {

using nn::Example;

struct TrainConfig {
  std::size_t batch_size = 16;
  double learning_rate = 0.0005;
  std::size_t epochs = 20;
  std::uint64_t seed = 42;
  std::optional<std::vector<double>> class_weights;
  bool shuffle = true;
};

inline void validate(const TrainConfig& c) {
  if (c.batch_size < 1) throw InputError("batch_size must be >= 1");
  if (!(c.learning_rate > 0.0) || !std::isfinite(c.learning_rate)) throw InputError("learning_rate must be > 0");
  if (c.class_weights)
    for (double w : *c.class_weights)
      if (!(w > 0.0) || !std::isfinite(w)) throw InputError("class weights must be positive");
}

struct EpochStats {
  std::size_t epoch = 0;  // 1-based
  double train_loss = 0.0;
  double train_accuracy = 0.0;
  double val_loss = 0.0;
  double val_accuracy = 0.0;
};

// Streams for shuffling and dropout are derived from (seed, 2*epoch) and
// (seed, 2*epoch + 1) so each epoch is reproducible on its own.
inline Rng shuffle_rng(std::uint64_t seed, std::size_t epoch) { return derive_rng(seed, 2 * epoch); }
inline Rng dropout_rng(std::uint64_t seed, std::size_t epoch) { return derive_rng(seed, 2 * epoch + 1); }

// Index batches over n examples; the final short batch is kept.
inline std::vector<std::vector<std::size_t>> batch_iter(std::size_t n, std::size_t batch_size, bool shuffle,
                                                        std::uint64_t seed, std::size_t epoch) {
  if (batch_size < 1) throw InputError("batch_size must be >= 1");
  std::vector<std::size_t> order(n);
  for (std::size_t i = 0; i < n; ++i) order[i] = i;
  if (shuffle) {
    auto rng = shuffle_rng(seed, epoch);
    senti::shuffle(std::span<std::size_t>(order), rng);
  }
  std::vector<std::vector<std::size_t>> out;
  for (std::size_t i = 0; i < n; i += batch_size)
    out.emplace_back(order.begin() + static_cast<std::ptrdiff_t>(i),
                     order.begin() + static_cast<std::ptrdiff_t>(std::min(n, i + batch_size)));
  return out;
}

// w_k = N / (C * n_k). Classes with no examples get weight 1.
inline std::vector<double> inverse_frequency_weights(std::span<const std::size_t> class_counts) {
  std::size_t n = 0;
  for (auto c : class_counts) n += c;
  std::vector<double> w(class_counts.size(), 1.0);
  for (std::size_t k = 0; k < w.size(); ++k)
    if (class_counts[k] > 0)
      w[k] = static_cast<double>(n) / (static_cast<double>(class_counts.size()) * static_cast<double>(class_counts[k]));
  return w;
}

// Cross-entropy scaled by the label's weight.
template <class T>
double weighted_loss(std::span<const T> logits, std::size_t label, std::span<const double> class_weights) {
  if (label >= class_weights.size()) throw InputError("weighted_loss: no weight for label");
  return class_weights[label] * nn::cross_entropy(logits, label).loss;
}

struct SplitScore {
  double loss = 0.0;
  double accuracy = 0.0;
};

// Inference-mode mean cross-entropy and accuracy.
template <class T>
SplitScore evaluate_split(const nn::ModelParams<T>& p, std::span<const Example> ds) {
  if (ds.empty()) throw InputError("evaluate_split: dataset is empty");
  double loss = 0.0;
  std::size_t correct = 0;
  for (const auto& ex : ds) {
    const auto logits = nn::infer_logits(p, std::span<const std::int32_t>(ex.indices), ex.true_length);
    loss += nn::cross_entropy(std::span<const T>(logits), ex.label).loss;
    if (nn::predicted_class(logits) == ex.label) ++correct;
  }
  const auto n = static_cast<double>(ds.size());
  return {loss / n, static_cast<double>(correct) / n};
}

template <class T>
struct TrainResult {
  std::vector<EpochStats> history;
  nn::ModelParams<T> best;     // parameters after the best epoch
  std::size_t best_epoch = 0;  // 0 when no epoch ran
  nn::AdamState adam;
};

using EpochCallback = std::function<void(const EpochStats&)>;

// Trains `p` in place. Each epoch runs one pass of mini-batch Adam, then scores
// the validation set in inference mode. The best epoch is the one with the
// highest validation accuracy, earliest on ties.
template <class T>
TrainResult<T> train(nn::ModelParams<T>& p, std::span<const Example> train_set, std::span<const Example> val_set,
                     const TrainConfig& cfg, const EpochCallback& on_epoch = {}) {
  validate(cfg);
  if (train_set.empty()) throw InputError("training set is empty");
  if (val_set.empty()) throw InputError("validation set is empty");
  TrainResult<T> out;
  out.best = p;
  out.adam = nn::AdamState::for_params(p);
  double best_acc = -1.0;
  std::vector<Example> batch;
  for (std::size_t e = 1; e <= cfg.epochs; ++e) {
    auto rng = dropout_rng(cfg.seed, e);
    double loss_sum = 0.0;
    std::size_t correct = 0;
    const auto batches = batch_iter(train_set.size(), cfg.batch_size, cfg.shuffle, cfg.seed, e);
    for (std::size_t b = 0; b < batches.size(); ++b) {
      batch.clear();
      for (auto i : batches[b]) batch.push_back(train_set[i]);
      auto r = nn::run_batch(p, std::span<const Example>(batch), cfg.class_weights, true, rng);
      if (!std::isfinite(r.loss))
        throw NumericError("non-finite loss at epoch " + std::to_string(e) + ", batch " + std::to_string(b + 1));
      nn::adam_step(p, r.grad, out.adam, cfg.learning_rate);
      loss_sum += r.loss * static_cast<double>(batch.size());
      correct += r.correct;
    }
    const auto n = static_cast<double>(train_set.size());
    const auto val = evaluate_split(p, val_set);
    EpochStats st{e, loss_sum / n, static_cast<double>(correct) / n, val.loss, val.accuracy};
    out.history.push_back(st);
    if (st.val_accuracy > best_acc) {
      best_acc = st.val_accuracy;
      out.best = p;
      out.best_epoch = e;
    }
    if (on_epoch) on_epoch(st);
  }
  return out;
}

// Shortest round-trip decimal form, so equal doubles print identically.
inline std::string format_real(double x) {
  char buf[32];
  const auto r = std::to_chars(buf, buf + sizeof buf, x);
  return std::string(buf, r.ptr);
}

inline csv::Table history_table(std::span<const EpochStats> history) {
  csv::Table t;
  t.header = {"epoch", "train_loss", "train_acc", "val_loss", "val_acc"};
  for (const auto& s : history)
    t.rows.push_back({{std::to_string(s.epoch), format_real(s.train_loss), format_real(s.train_accuracy),
                       format_real(s.val_loss), format_real(s.val_accuracy)}});
  return t;
}

inline void write_history(const std::string& path, std::span<const EpochStats> history) {
  csv::write_table(path, history_table(history));
}

}  // namespace senti::train
