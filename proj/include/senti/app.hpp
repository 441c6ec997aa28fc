#pragma once

// Subcommand implementations behind the senti CLI. Each cmd_* writes its
// artifacts under cfg.out_dir and reports through the given streams; errors
// surface as senti::Error subclasses and map to exit codes in run_guarded.

#include <cstdlib>
#include <filesystem>
#include <functional>
#include <iostream>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include <fmt/core.h>

#include "senti/baselines.hpp"
#include "senti/config.hpp"
#include "senti/csv.hpp"
#include "senti/error.hpp"
#include "senti/eval.hpp"
#include "senti/fetch.hpp"
#include "senti/ingest.hpp"
#include "senti/nn/checkpoint.hpp"
#include "senti/nn/predict.hpp"
#include "senti/plot.hpp"
#include "senti/preprocess.hpp"
#include "senti/train.hpp"
#include "senti/vocab.hpp"

namespace senti::app {

namespace fs = std::filesystem;
using Scalar = float;  // training precision

enum ExitCode : int { kOk = 0, kInternal = 1, kBadInput = 2, kExternal = 3 };

// Runs fn and maps exceptions to exit codes, printing the message to err.
inline int run_guarded(const std::function<void()>& fn, std::ostream& err = std::cerr) {
  try {
    fn();
    return kOk;
  } catch (const InputError& e) {
    err << "error: " << e.what() << "\n";
    return kBadInput;
  } catch (const ExternalError& e) {
    err << "error: " << e.what() << "\n";
    return kExternal;
  } catch (const std::exception& e) {
    err << "internal error: " << e.what() << "\n";
    return kInternal;
  }
}

struct Streams {
  std::ostream& out = std::cout;
  std::ostream& err = std::cerr;
};

inline void ensure_out_dir(const config::RunConfig& cfg) {
  std::error_code ec;
  fs::create_directories(cfg.out_dir, ec);
  if (ec) throw InputError("cannot create output directory " + cfg.out_dir + ": " + ec.message());
}

inline fs::path out_path(const config::RunConfig& cfg, const std::string& name) { return fs::path(cfg.out_dir) / name; }

inline void echo_config(const config::RunConfig& cfg) {
  ensure_out_dir(cfg);
  plot::write_file(out_path(cfg, "config.resolved").string(), config::to_text(cfg));
}

inline preprocess::PreprocessConfig preprocess_config(const config::RunConfig& cfg) {
  using preprocess::Step;
  auto pc = preprocess::load_config({cfg.roots, cfg.stopwords, cfg.slang});
  pc.set(Step::CaseFold, cfg.case_fold);
  pc.set(Step::Clean, cfg.clean);
  pc.set(Step::Normalize, cfg.normalize);
  pc.set(Step::Stopwords, cfg.remove_stopwords);
  pc.set(Step::Stem, cfg.stem);
  return pc;
}

inline std::vector<std::string> split_tokens(const std::string& s) { return preprocess::tokenize(s); }

// Corpus rows plus their token lists. A "tokens" column, when present, is
// used as is; otherwise the text is run through the pipeline.
struct Corpus {
  ingest::Dataset data;
  std::vector<preprocess::TokenList> tokens;
};

inline Corpus load_corpus(const std::string& path, const std::function<const preprocess::PreprocessConfig&()>& pc) {
  const auto table = csv::read_table(path);
  Corpus c;
  c.data = ingest::from_table(table);
  const auto col = table.column("tokens");
  for (std::size_t i = 0; i < c.data.size(); ++i) {
    if (col) c.tokens.push_back(split_tokens(table.rows[i].fields[*col]));
    else c.tokens.push_back(preprocess::run_pipeline(c.data[i].text, pc()));
  }
  return c;
}

// Keeps labeled rows only.
inline Corpus labeled(const Corpus& c) {
  Corpus out;
  for (std::size_t i = 0; i < c.data.size(); ++i)
    if (c.data[i].label != Label::Unlabeled) {
      out.data.add(c.data[i]);
      out.tokens.push_back(c.tokens[i]);
    }
  return out;
}

inline csv::Table corpus_table(const Corpus& c) {
  auto t = ingest::to_table(c.data);
  t.header.push_back("tokens");
  for (std::size_t i = 0; i < t.rows.size(); ++i) t.rows[i].fields.push_back(preprocess::join(c.tokens[i]));
  return t;
}

// ---- fetch ----

inline std::size_t cmd_fetch(const config::RunConfig& cfg, const std::string& video_id, int max_pages,
                             const std::string& out_csv, const ingest::FetchOptions& opt = {}) {
  const char* key = std::getenv(ingest::kApiKeyEnv);
  if (!key || !*key)
    throw ingest::FetchError(ingest::FetchErrorKind::Auth,
                             std::string("fetch: set the ") + ingest::kApiKeyEnv + " environment variable");
  echo_config(cfg);
  const auto comments = ingest::fetch_comments(video_id, key, max_pages, opt);
  ingest::save_csv(out_csv, ingest::Dataset(comments));
  return comments.size();
}

// ---- preprocess ----

inline std::size_t cmd_preprocess(const config::RunConfig& cfg, const std::string& in_csv, const std::string& out_csv) {
  echo_config(cfg);
  const auto pc = preprocess_config(cfg);
  const auto data = ingest::load_csv(in_csv);
  Corpus c;
  c.data = data;
  for (const auto& r : data.records()) c.tokens.push_back(preprocess::run_pipeline(r.text, pc));
  csv::write_table(out_csv, corpus_table(c));
  return data.size();
}

// ---- shared model plumbing ----

inline std::vector<nn::Example> encode_examples(const Corpus& c, const vocab::Vocabulary& v) {
  std::vector<nn::Example> out;
  out.reserve(c.tokens.size());
  for (std::size_t i = 0; i < c.tokens.size(); ++i) {
    auto seq = vocab::encode(c.tokens[i], v);
    out.push_back({std::move(seq.indices), seq.true_length, class_index(c.data[i].label)});
  }
  return out;
}

inline Corpus subset(const Corpus& all, std::span<const std::size_t> rows) {
  Corpus out;
  for (auto i : rows) {
    out.data.add(all.data[i]);
    out.tokens.push_back(all.tokens[i]);
  }
  return out;
}

struct Splits {
  Corpus train, val, test;
};

inline Splits split_corpus(const Corpus& c, const config::RunConfig& cfg) {
  ingest::SplitSpec spec{cfg.train_fraction, cfg.val_fraction, cfg.test_fraction, cfg.seed};
  const auto idx = ingest::stratified_split_indices(c.data, spec);
  return {subset(c, idx[0]), subset(c, idx[1]), subset(c, idx[2])};
}

inline nn::ModelConfig model_config(const config::RunConfig& cfg, const vocab::Vocabulary& v) {
  nn::ModelConfig m;
  m.vocab_size = v.size();
  m.embed_dim = cfg.embed_dim;
  m.hidden_dim = cfg.hidden_dim;
  m.num_classes = kNumClasses;
  m.max_len = v.max_len();
  m.lstm_dropout = cfg.lstm_dropout;
  m.lstm_dropout_enabled = cfg.lstm_dropout_enabled;
  m.fc_dropout = cfg.fc_dropout;
  return m;
}

inline train::TrainConfig train_config(const config::RunConfig& cfg, const Corpus& train_part) {
  train::TrainConfig t;
  t.batch_size = cfg.batch_size;
  t.learning_rate = cfg.learning_rate;
  t.epochs = cfg.epochs;
  t.seed = cfg.seed;
  t.shuffle = cfg.shuffle;
  if (cfg.class_weights == "inverse") {
    const std::array<std::size_t, kNumClasses> counts{train_part.data.count(Label::Negative),
                                                      train_part.data.count(Label::Positive)};
    t.class_weights = train::inverse_frequency_weights(counts);
  } else {
    t.class_weights = config::explicit_class_weights(cfg);
  }
  return t;
}

struct TrainedModel {
  vocab::Vocabulary vocab;
  nn::ModelParams<Scalar> final_params;
  train::TrainResult<Scalar> result;
};

// Builds the vocabulary on the training part and fits the LSTM.
inline TrainedModel fit_lstm(const config::RunConfig& cfg, const Splits& sp, std::ostream* progress) {
  TrainedModel tm;
  tm.vocab = vocab::build_vocab(sp.train.tokens, cfg.min_freq, cfg.max_len);
  const auto train_ex = encode_examples(sp.train, tm.vocab);
  const auto val_ex = encode_examples(sp.val.data.empty() ? sp.train : sp.val, tm.vocab);
  tm.final_params = nn::init_params<Scalar>(model_config(cfg, tm.vocab), cfg.seed);
  if (cfg.lstm_dropout_enabled && progress)
    *progress << "warning: LSTM-output dropout is enabled; this departs from the single-layer reference behaviour\n";
  const auto tc = train_config(cfg, sp.train);
  tm.result = train::train<Scalar>(tm.final_params, train_ex, val_ex, tc, [&](const train::EpochStats& s) {
    if (progress)
      *progress << fmt::format("epoch {:>3}/{}  train_loss {:.4f}  train_acc {:.4f}  val_loss {:.4f}  val_acc {:.4f}\n",
                               s.epoch, tc.epochs, s.train_loss, s.train_accuracy, s.val_loss, s.val_accuracy);
  });
  return tm;
}

inline nn::Checkpoint<Scalar> make_checkpoint(const nn::ModelParams<Scalar>& p, std::optional<nn::AdamState> adam,
                                              const vocab::Vocabulary& v, const config::RunConfig& cfg) {
  return {p, std::move(adam), vocab::serialize(v), vocab::serialize_meta(v), config::to_text(cfg)};
}

// ---- train ----

struct TrainSummary {
  std::vector<train::EpochStats> history;
  std::size_t best_epoch = 0;
  std::size_t vocab_size = 0;
  std::uint64_t parameters = 0;
  std::size_t train_size = 0, val_size = 0, test_size = 0;
};

inline TrainSummary cmd_train(const config::RunConfig& cfg, const std::string& corpus_csv, Streams io = {}) {
  config::validate(cfg);
  echo_config(cfg);
  std::optional<preprocess::PreprocessConfig> pc;
  auto lazy_pc = [&]() -> const preprocess::PreprocessConfig& {
    if (!pc) pc = preprocess_config(cfg);
    return *pc;
  };
  const auto corpus = labeled(load_corpus(corpus_csv, lazy_pc));
  if (corpus.data.empty()) throw InputError("train: corpus has no labeled rows: " + corpus_csv);
  const auto sp = split_corpus(corpus, cfg);
  csv::write_table(out_path(cfg, "train.csv").string(), corpus_table(sp.train));
  csv::write_table(out_path(cfg, "val.csv").string(), corpus_table(sp.val));
  csv::write_table(out_path(cfg, "test.csv").string(), corpus_table(sp.test));
  if (cfg.epochs == 0) io.err << "warning: epochs = 0, the model is saved untrained\n";

  auto tm = fit_lstm(cfg, sp, cfg.quiet ? nullptr : &io.err);
  vocab::save(out_path(cfg, "vocab.txt").string(), tm.vocab);
  train::write_history(out_path(cfg, "history.csv").string(), tm.result.history);

  std::vector<double> tl, vl, ta, va;
  for (const auto& s : tm.result.history) {
    tl.push_back(s.train_loss);
    vl.push_back(s.val_loss);
    ta.push_back(s.train_accuracy);
    va.push_back(s.val_accuracy);
  }
  const std::vector<plot::Series> loss{{"train", tl, "#1f77b4"}, {"validation", vl, "#ff7f0e"}};
  const std::vector<plot::Series> acc{{"train", ta, "#1f77b4"}, {"validation", va, "#ff7f0e"}};
  plot::write_file(out_path(cfg, "loss.svg").string(), plot::line_chart("Training and validation loss", "loss", loss));
  plot::write_file(out_path(cfg, "accuracy.svg").string(),
                   plot::line_chart("Training and validation accuracy", "accuracy", acc));

  nn::checkpoint_save(out_path(cfg, "model_best.ckpt").string(),
                      make_checkpoint(tm.result.best, std::nullopt, tm.vocab, cfg));
  nn::checkpoint_save(out_path(cfg, "model_final.ckpt").string(),
                      make_checkpoint(tm.final_params, tm.result.adam, tm.vocab, cfg));

  TrainSummary s;
  s.history = tm.result.history;
  s.best_epoch = tm.result.best_epoch;
  s.vocab_size = tm.vocab.size();
  s.parameters = tm.final_params.parameter_count();
  s.train_size = sp.train.data.size();
  s.val_size = sp.val.data.size();
  s.test_size = sp.test.data.size();
  if (!cfg.quiet)
    io.err << fmt::format("trained on {} examples ({} validation, {} test); vocabulary {}; {} parameters; best epoch {}\n",
                          s.train_size, s.val_size, s.test_size, s.vocab_size, s.parameters, s.best_epoch);
  return s;
}

// ---- loaded model ----

struct LoadedModel {
  nn::Checkpoint<Scalar> ckpt;
  vocab::Vocabulary vocab;
  config::RunConfig trained_with;
};

inline LoadedModel load_model(const std::string& path) {
  LoadedModel m;
  m.ckpt = nn::checkpoint_load<Scalar>(path);
  m.vocab = vocab::deserialize(m.ckpt.vocab, m.ckpt.vocab_meta);
  if (m.vocab.size() != m.ckpt.params.config.vocab_size)
    throw nn::CheckpointError("checkpoint vocabulary has " + std::to_string(m.vocab.size()) +
                              " entries but the model expects " + std::to_string(m.ckpt.params.config.vocab_size));
  config::apply_text(m.trained_with, m.ckpt.config, path + " (embedded config)");
  return m;
}

// Preprocessing as the model was trained, with dictionaries from the current run.
inline preprocess::PreprocessConfig preprocess_for(const LoadedModel& m, const config::RunConfig& cfg) {
  auto mixed = m.trained_with;
  mixed.roots = cfg.roots;
  mixed.stopwords = cfg.stopwords;
  mixed.slang = cfg.slang;
  return preprocess_config(mixed);
}

// ---- evaluate ----

inline eval::ClassificationReport write_report(const config::RunConfig& cfg, const eval::ClassificationReport& r,
                                               std::ostream& out) {
  const auto text = eval::render_text(r);
  plot::write_file(out_path(cfg, "report.txt").string(), text);
  csv::write_table(out_path(cfg, "report.csv").string(), eval::report_table(r));
  csv::write_table(out_path(cfg, "confusion.csv").string(), eval::confusion_table(r.cm));
  plot::write_file(out_path(cfg, "confusion.svg").string(), plot::confusion_heatmap(r.cm));
  out << text;
  return r;
}

inline Label parse_required_label(const std::string& s, std::size_t line) {
  const auto l = parse_label(s);
  if (!l || *l == Label::Unlabeled) throw InputError("line " + std::to_string(line) + ": invalid label '" + s + "'");
  return *l;
}

// Scores a fixed truth,prediction CSV (columns "truth" and "pred").
inline eval::ClassificationReport cmd_evaluate_predictions(const config::RunConfig& cfg, const std::string& csv_path,
                                                           Streams io = {}) {
  echo_config(cfg);
  const auto t = csv::read_table(csv_path);
  const auto tc = t.column("truth"), pc = t.column("pred");
  if (!tc || !pc) throw InputError("predictions file needs 'truth' and 'pred' columns: " + csv_path);
  std::vector<Label> truth, preds;
  for (const auto& r : t.rows) {
    if (r.fields.size() != t.header.size()) throw InputError("line " + std::to_string(r.line) + ": wrong field count");
    truth.push_back(parse_required_label(r.fields[*tc], r.line));
    preds.push_back(parse_required_label(r.fields[*pc], r.line));
  }
  if (truth.empty()) throw InputError("predictions file has no rows: " + csv_path);
  return write_report(cfg, eval::report(preds, truth), io.out);
}

inline eval::ClassificationReport cmd_evaluate(const config::RunConfig& cfg, const std::string& checkpoint,
                                               const std::string& test_csv, Streams io = {}) {
  echo_config(cfg);
  const auto m = load_model(checkpoint);
  std::optional<preprocess::PreprocessConfig> pc;
  auto lazy_pc = [&]() -> const preprocess::PreprocessConfig& {
    if (!pc) pc = preprocess_for(m, cfg);
    return *pc;
  };
  const auto corpus = labeled(load_corpus(test_csv, lazy_pc));
  if (corpus.data.empty()) throw InputError("evaluate: no labeled rows in " + test_csv);
  std::vector<Label> truth, preds;
  for (std::size_t i = 0; i < corpus.data.size(); ++i) {
    truth.push_back(corpus.data[i].label);
    preds.push_back(nn::predict_tokens(corpus.tokens[i], m.ckpt.params, m.vocab).label);
  }
  return write_report(cfg, eval::report(preds, truth), io.out);
}

// ---- predict ----

inline std::string format_prediction(const nn::Prediction& p) {
  auto line = fmt::format("{} {:.4f}", to_string(p.label), p.confidence());
  if (p.low_confidence) line += " (low-confidence: empty after preprocessing)";
  return line;
}

inline std::vector<nn::Prediction> cmd_predict(const config::RunConfig& cfg, const std::string& checkpoint,
                                               std::span<const std::string> lines, Streams io = {}) {
  const auto m = load_model(checkpoint);
  const auto pc = preprocess_for(m, cfg);
  std::vector<nn::Prediction> out;
  for (const auto& l : lines) {
    out.push_back(nn::predict(l, m.ckpt.params, m.vocab, pc));
    io.out << format_prediction(out.back()) << "\n";
  }
  return out;
}

// ---- compare ----

inline std::vector<baselines::ComparisonRow> cmd_compare(const config::RunConfig& cfg, const std::string& corpus_csv,
                                                         Streams io = {}) {
  config::validate(cfg);
  echo_config(cfg);
  std::optional<preprocess::PreprocessConfig> pc;
  auto lazy_pc = [&]() -> const preprocess::PreprocessConfig& {
    if (!pc) pc = preprocess_config(cfg);
    return *pc;
  };
  const auto corpus = labeled(load_corpus(corpus_csv, lazy_pc));
  if (corpus.data.empty()) throw InputError("compare: corpus has no labeled rows: " + corpus_csv);
  const auto sp = split_corpus(corpus, cfg);
  if (sp.test.data.empty()) throw InputError("compare: test split is empty");

  auto labels_of = [](const Corpus& c) {
    std::vector<Label> l;
    for (const auto& r : c.data.records()) l.push_back(r.label);
    return l;
  };
  const auto ytr = labels_of(sp.train), yte = labels_of(sp.test);
  const auto tm = fit_lstm(cfg, sp, cfg.quiet ? nullptr : &io.err);

  baselines::CompareOptions opt;
  opt.naive_bayes = cfg.naive_bayes;
  opt.logistic = cfg.logistic;
  opt.svm = cfg.svm;
  opt.logistic_opts = {baselines::Objective::Logistic, cfg.logistic_lambda, cfg.logistic_lr, cfg.logistic_epochs, cfg.seed};
  opt.svm_opts = {baselines::Objective::Hinge, cfg.svm_lambda, 0.1, cfg.svm_epochs, cfg.seed};
  auto rows = baselines::compare_baselines(sp.train.tokens, ytr, sp.test.tokens, yte, tm.vocab, opt);

  std::vector<Label> preds;
  for (const auto& toks : sp.test.tokens) preds.push_back(nn::predict_tokens(toks, tm.result.best, tm.vocab).label);
  rows.push_back(baselines::score_row("lstm", preds, yte));

  csv::write_table(out_path(cfg, "comparison.csv").string(), baselines::comparison_table(rows));
  const auto text = baselines::render_comparison(rows);
  plot::write_file(out_path(cfg, "comparison.txt").string(), text);
  io.out << text;
  return rows;
}

}  // namespace senti::app
