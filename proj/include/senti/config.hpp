#pragma once

// Flat "key = value" run configuration shared by every subcommand. Lines
// starting with '#' are comments; unknown keys are errors.

#include <charconv>
#include <cmath>
#include <cstdint>
#include <cstdlib>
#include <fstream>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <type_traits>
#include <vector>

#include "senti/error.hpp"

#ifndef SENTI_DATA_DIR
#define SENTI_DATA_DIR "data"
#endif

namespace senti::config {

inline std::string default_data_dir() {
  if (const char* env = std::getenv("SENTI_DATA_DIR"); env && *env) return env;
  return SENTI_DATA_DIR;
}

struct RunConfig {
  std::uint64_t seed = 42;
  std::string out_dir = "out";
  bool quiet = false;

  std::string roots = default_data_dir() + "/kata-dasar.txt";
  std::string stopwords = default_data_dir() + "/stopwords-id.txt";
  std::string slang = default_data_dir() + "/slang-id.tsv";

  bool case_fold = true;
  bool clean = true;
  bool normalize = true;
  bool remove_stopwords = true;
  bool stem = true;

  double train_fraction = 0.70;
  double val_fraction = 0.15;
  double test_fraction = 0.15;

  std::size_t min_freq = 1;
  std::size_t max_len = 0;  // 0 = 95th percentile of training lengths, capped at 100

  std::size_t embed_dim = 128;
  std::size_t hidden_dim = 128;
  double lstm_dropout = 0.3;
  bool lstm_dropout_enabled = false;
  double fc_dropout = 0.5;

  std::size_t batch_size = 16;
  double learning_rate = 0.0005;
  std::size_t epochs = 20;
  bool shuffle = true;
  std::string class_weights = "none";  // none | inverse | "w_neg,w_pos"

  bool naive_bayes = true;
  bool logistic = true;
  bool svm = true;
  double logistic_lambda = 1e-4;
  double logistic_lr = 0.5;
  std::size_t logistic_epochs = 200;
  double svm_lambda = 1e-4;
  std::size_t svm_epochs = 20;
};

namespace detail {

inline std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return {};
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

template <class N>
N parse_number(const std::string& key, const std::string& v) {
  N out{};
  const auto r = std::from_chars(v.data(), v.data() + v.size(), out);
  if (r.ec != std::errc() || r.ptr != v.data() + v.size())
    throw InputError("config: '" + key + "' expects a number, got '" + v + "'");
  return out;
}

inline bool parse_bool(const std::string& key, const std::string& v) {
  if (v == "true" || v == "1" || v == "yes" || v == "on") return true;
  if (v == "false" || v == "0" || v == "no" || v == "off") return false;
  throw InputError("config: '" + key + "' expects true or false, got '" + v + "'");
}

inline std::string show(double x) {
  char buf[32];
  const auto r = std::to_chars(buf, buf + sizeof buf, x);
  return std::string(buf, r.ptr);
}

inline std::string show(bool b) { return b ? "true" : "false"; }

}  // namespace detail

// Visits every key with a reference to its field. F is called as
// f(key, field&) for each entry in a fixed order.
template <class Cfg, class F>
void for_each_field(Cfg& c, F&& f) {
  f("seed", c.seed);
  f("out_dir", c.out_dir);
  f("quiet", c.quiet);
  f("data.roots", c.roots);
  f("data.stopwords", c.stopwords);
  f("data.slang", c.slang);
  f("preprocess.case_fold", c.case_fold);
  f("preprocess.clean", c.clean);
  f("preprocess.normalize", c.normalize);
  f("preprocess.stopwords", c.remove_stopwords);
  f("preprocess.stem", c.stem);
  f("split.train", c.train_fraction);
  f("split.val", c.val_fraction);
  f("split.test", c.test_fraction);
  f("vocab.min_freq", c.min_freq);
  f("vocab.max_len", c.max_len);
  f("model.embed_dim", c.embed_dim);
  f("model.hidden_dim", c.hidden_dim);
  f("model.lstm_dropout", c.lstm_dropout);
  f("model.lstm_dropout_enabled", c.lstm_dropout_enabled);
  f("model.fc_dropout", c.fc_dropout);
  f("train.batch_size", c.batch_size);
  f("train.learning_rate", c.learning_rate);
  f("train.epochs", c.epochs);
  f("train.shuffle", c.shuffle);
  f("train.class_weights", c.class_weights);
  f("baselines.naive_bayes", c.naive_bayes);
  f("baselines.logistic", c.logistic);
  f("baselines.svm", c.svm);
  f("baselines.logistic_lambda", c.logistic_lambda);
  f("baselines.logistic_lr", c.logistic_lr);
  f("baselines.logistic_epochs", c.logistic_epochs);
  f("baselines.svm_lambda", c.svm_lambda);
  f("baselines.svm_epochs", c.svm_epochs);
}

inline void set(RunConfig& c, const std::string& key, const std::string& value) {
  bool found = false;
  for_each_field(c, [&](const char* k, auto& field) {
    if (key != k) return;
    found = true;
    using F = std::decay_t<decltype(field)>;
    if constexpr (std::is_same_v<F, std::string>) field = value;
    else if constexpr (std::is_same_v<F, bool>) field = detail::parse_bool(key, value);
    else field = detail::parse_number<F>(key, value);
  });
  if (!found) throw InputError("config: unknown key '" + key + "'");
}

// Applies "key = value" lines from text.
inline void apply_text(RunConfig& c, const std::string& text, const std::string& origin = "config") {
  std::istringstream in(text);
  std::string line;
  std::size_t n = 0;
  while (std::getline(in, line)) {
    ++n;
    const auto t = detail::trim(line);
    if (t.empty() || t[0] == '#') continue;
    const auto eq = t.find('=');
    if (eq == std::string::npos)
      throw InputError(origin + ":" + std::to_string(n) + ": expected 'key = value'");
    set(c, detail::trim(t.substr(0, eq)), detail::trim(t.substr(eq + 1)));
  }
}

inline void apply_file(RunConfig& c, const std::string& path) {
  std::ifstream in(path);
  if (!in) throw InputError("cannot open config file: " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  apply_text(c, ss.str(), path);
}

inline std::string to_text(const RunConfig& c) {
  std::string out;
  for_each_field(c, [&](const char* k, const auto& field) {
    using F = std::decay_t<decltype(field)>;
    out += k;
    out += " = ";
    if constexpr (std::is_same_v<F, std::string>) out += field;
    else if constexpr (std::is_same_v<F, bool> || std::is_same_v<F, double>) out += detail::show(field);
    else out += std::to_string(field);
    out += "\n";
  });
  return out;
}

// Explicit train.class_weights; nullopt for "none" and "inverse" (the caller
// derives inverse-frequency weights from training counts).
inline std::optional<std::vector<double>> explicit_class_weights(const RunConfig& c) {
  if (c.class_weights == "none" || c.class_weights == "inverse") return std::nullopt;
  std::vector<double> w;
  std::istringstream in(c.class_weights);
  std::string part;
  while (std::getline(in, part, ',')) w.push_back(detail::parse_number<double>("train.class_weights", detail::trim(part)));
  if (w.size() != 2) throw InputError("config: train.class_weights needs 'none', 'inverse' or two numbers");
  return w;
}

inline void validate(const RunConfig& c) {
  if (c.min_freq < 1) throw InputError("config: vocab.min_freq must be >= 1");
  if (c.embed_dim < 1 || c.hidden_dim < 1) throw InputError("config: model dimensions must be >= 1");
  if (!(c.fc_dropout >= 0.0 && c.fc_dropout < 1.0) || !(c.lstm_dropout >= 0.0 && c.lstm_dropout < 1.0))
    throw InputError("config: dropout rates must lie in [0, 1)");
  if (c.batch_size < 1) throw InputError("config: train.batch_size must be >= 1");
  if (!(c.learning_rate > 0.0)) throw InputError("config: train.learning_rate must be > 0");
  for (double f : {c.train_fraction, c.val_fraction, c.test_fraction})
    if (!(f >= 0.0 && f <= 1.0)) throw InputError("config: split fractions must lie in [0, 1]");
  if (std::abs(c.train_fraction + c.val_fraction + c.test_fraction - 1.0) > 1e-9)
    throw InputError("config: split fractions must sum to 1");
  if (const auto w = explicit_class_weights(c))
    for (double x : *w)
      if (!(x > 0.0)) throw InputError("config: train.class_weights must be positive");
}

}  // namespace senti::config
