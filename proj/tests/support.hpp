#pragma once

// Shared helpers and independent oracles for the unit and acceptance tests.

#include <algorithm>
#include <array>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <optional>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "senti/label.hpp"
#include "senti/nn/model.hpp"
#include "senti/random.hpp"

#ifndef SENTI_FIXTURE_DIR
#define SENTI_FIXTURE_DIR "tests/fixtures"
#endif

namespace senti::testing {

namespace fs = std::filesystem;

inline std::string data_file(const std::string& name) { return std::string(SENTI_DATA_DIR) + "/" + name; }
inline std::string fixture(const std::string& name) { return std::string(SENTI_FIXTURE_DIR) + "/" + name; }

class TempDir {
 public:
  TempDir() {
    static int counter = 0;
    std::random_device rd;
    path_ = fs::temp_directory_path() / ("senti-test-" + std::to_string(rd()) + "-" + std::to_string(counter++));
    fs::create_directories(path_);
  }
  ~TempDir() {
    std::error_code ec;
    fs::remove_all(path_, ec);
  }
  TempDir(const TempDir&) = delete;
  TempDir& operator=(const TempDir&) = delete;

  const fs::path& path() const { return path_; }
  std::string file(const std::string& name) const { return (path_ / name).string(); }

 private:
  fs::path path_;
};

inline std::string slurp(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

inline void spit(const std::string& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary);
  out << content;
}

// ---- gradient oracle ----

struct GradCase {
  nn::ModelParams<double> params;
  std::vector<nn::Example> batch;
  std::optional<std::vector<double>> weights;
  std::uint64_t dropout_seed = 0;
};

// Random small model (V<=8, E,H<=4, sequences<=5) with weights spread over
// [-1, 1] so gates leave their linear regime, plus a random padded batch.
inline GradCase random_grad_case(std::uint64_t seed, bool with_dropout = true) {
  Rng r(seed);
  nn::ModelConfig c;
  c.vocab_size = 3 + uniform_index(r, 6);
  c.embed_dim = 1 + uniform_index(r, 4);
  c.hidden_dim = 1 + uniform_index(r, 4);
  c.num_classes = 2;
  c.max_len = 5;
  c.fc_dropout = with_dropout ? 0.5 : 0.0;
  c.lstm_dropout_enabled = with_dropout && uniform01(r) < 0.5;
  GradCase g;
  g.params = nn::ModelParams<double>::zeros(c);
  for (auto a : g.params.arrays())
    for (auto& x : a) x = uniform(r, -1.0, 1.0);
  for (auto& x : g.params.embedding.weights.row(0)) x = 0.0;
  const std::size_t n = 1 + uniform_index(r, 3);
  for (std::size_t i = 0; i < n; ++i) {
    nn::Example e;
    e.true_length = 1 + uniform_index(r, 5);
    e.indices.assign(c.max_len, 0);
    for (std::size_t t = 0; t < e.true_length; ++t) e.indices[t] = static_cast<std::int32_t>(1 + uniform_index(r, c.vocab_size - 1));
    e.label = uniform_index(r, 2);
    g.batch.push_back(e);
  }
  if (uniform01(r) < 0.5) g.weights = std::vector<double>{uniform(r, 0.5, 2.0), uniform(r, 0.5, 2.0)};
  g.dropout_seed = r();
  return g;
}

struct GradCheckResult {
  double max_rel_error = 0.0;
  std::size_t checked = 0;
  std::string worst_array;
};

// Central differences with step h at every parameter except the frozen PAD
// embedding row. Relative error |a - n| / max(|a|, |n|, 1e-6); the floor keeps
// entries whose true gradient is ~0 from dividing by rounding noise.
inline GradCheckResult finite_difference_check(GradCase g, double h = 1e-5) {
  auto loss_at = [&]() {
    Rng rng(g.dropout_seed);
    return nn::run_batch(g.params, std::span<const nn::Example>(g.batch), g.weights, true, rng, false).loss;
  };
  Rng rng(g.dropout_seed);
  const auto analytic = nn::run_batch(g.params, std::span<const nn::Example>(g.batch), g.weights, true, rng, true).grad;
  GradCheckResult res;
  auto params = g.params.arrays();
  const auto grads = analytic.arrays();
  const std::size_t E = g.params.config.embed_dim;
  for (std::size_t a = 0; a < nn::kNumArrays; ++a)
    for (std::size_t k = 0; k < params[a].size(); ++k) {
      if (a == 0 && k < E) continue;
      const double orig = params[a][k];
      params[a][k] = orig + h;
      const double up = loss_at();
      params[a][k] = orig - h;
      const double down = loss_at();
      params[a][k] = orig;
      const double numeric = (up - down) / (2 * h);
      const double err = std::abs(grads[a][k] - numeric) / std::max({std::abs(grads[a][k]), std::abs(numeric), 1e-6});
      ++res.checked;
      if (err > res.max_rel_error) {
        res.max_rel_error = err;
        res.worst_array = nn::kArrayNames[a];
      }
    }
  return res;
}

// ---- toy training sets ----

// 32 short sequences, half positive. Positive sequences draw from tokens
// 2..9 and negative ones from 10..17, with shared filler 18..21 mixed in.
inline std::vector<nn::Example> overfit_set(std::size_t max_len = 8, std::uint64_t seed = 7) {
  Rng r(seed);
  std::vector<nn::Example> out;
  for (std::size_t i = 0; i < 32; ++i) {
    nn::Example e;
    e.label = i % 2;
    e.true_length = 2 + uniform_index(r, max_len - 1);
    e.indices.assign(max_len, 0);
    for (std::size_t t = 0; t < e.true_length; ++t) {
      const bool filler = uniform01(r) < 0.3;
      const std::size_t base = filler ? 18 : (e.label ? 2 : 10);
      e.indices[t] = static_cast<std::int32_t>(base + uniform_index(r, filler ? 4 : 8));
    }
    out.push_back(e);
  }
  return out;
}

// Balanced random tokens with random labels: nothing to learn.
inline std::vector<nn::Example> random_balanced_set(std::size_t n, std::size_t vocab_size, std::size_t max_len,
                                                    std::uint64_t seed) {
  Rng r(seed);
  std::vector<nn::Example> out;
  for (std::size_t i = 0; i < n; ++i) {
    nn::Example e;
    e.label = i % 2;
    e.true_length = 1 + uniform_index(r, max_len);
    e.indices.assign(max_len, 0);
    for (std::size_t t = 0; t < e.true_length; ++t) e.indices[t] = static_cast<std::int32_t>(1 + uniform_index(r, vocab_size - 1));
    out.push_back(e);
  }
  return out;
}

// ---- scalar LSTM oracle ----

// Direct transcription of the gate equations, one scalar at a time.
inline void scalar_lstm_step(const nn::LstmCell<double>& cell, const std::vector<double>& x, std::vector<double>& h,
                             std::vector<double>& c) {
  const std::size_t H = h.size(), E = x.size();
  auto pre = [&](std::size_t gate, std::size_t j) {
    const std::size_t row = gate * H + j;
    double s = cell.b_ih[row] + cell.b_hh[row];
    for (std::size_t e = 0; e < E; ++e) s += cell.w_ih(row, e) * x[e];
    for (std::size_t k = 0; k < H; ++k) s += cell.w_hh(row, k) * h[k];
    return s;
  };
  auto sig = [](double v) { return 1.0 / (1.0 + std::exp(-v)); };
  std::vector<double> hn(H), cn(H);
  for (std::size_t j = 0; j < H; ++j) {
    const double i = sig(pre(0, j)), f = sig(pre(1, j)), g = std::tanh(pre(2, j)), o = sig(pre(3, j));
    cn[j] = f * c[j] + i * g;
    hn[j] = o * std::tanh(cn[j]);
  }
  h = hn;
  c = cn;
}

// ---- evaluation oracle ----

struct RecountRow {
  double precision = 0, recall = 0, f1 = 0;
  std::size_t support = 0;
};

struct Recount {
  std::array<RecountRow, 2> rows;  // by class index
  double accuracy = 0;
  RecountRow macro, weighted;
};

// Recomputes every report cell by walking the samples once per class, with no
// confusion-matrix intermediate.
inline Recount recount(const std::vector<Label>& preds, const std::vector<Label>& truth) {
  Recount r;
  std::size_t hits = 0;
  for (std::size_t i = 0; i < truth.size(); ++i) hits += preds[i] == truth[i];
  r.accuracy = static_cast<double>(hits) / static_cast<double>(truth.size());
  for (std::size_t k = 0; k < 2; ++k) {
    const Label cls = label_from_index(k);
    std::size_t predicted = 0, actual = 0, both = 0;
    for (std::size_t i = 0; i < truth.size(); ++i) {
      predicted += preds[i] == cls;
      actual += truth[i] == cls;
      both += preds[i] == cls && truth[i] == cls;
    }
    auto& row = r.rows[k];
    row.support = actual;
    row.precision = predicted ? static_cast<double>(both) / static_cast<double>(predicted) : 0.0;
    row.recall = actual ? static_cast<double>(both) / static_cast<double>(actual) : 0.0;
    row.f1 = row.precision + row.recall > 0 ? 2 * row.precision * row.recall / (row.precision + row.recall) : 0.0;
  }
  const double n = static_cast<double>(truth.size());
  for (std::size_t k = 0; k < 2; ++k) {
    const auto& row = r.rows[k];
    const double w = static_cast<double>(row.support) / n;
    r.macro.precision += row.precision / 2;
    r.macro.recall += row.recall / 2;
    r.macro.f1 += row.f1 / 2;
    r.weighted.precision += w * row.precision;
    r.weighted.recall += w * row.recall;
    r.weighted.f1 += w * row.f1;
  }
  return r;
}

}  // namespace senti::testing
