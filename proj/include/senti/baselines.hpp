#pragma once

// Classical comparison models over bag-of-words features: multinomial Naive
// Bayes on raw counts, and logistic regression / linear SVM on TF-IDF.

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdint>
#include <limits>
#include <map>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "senti/error.hpp"
#include "senti/eval.hpp"
#include "senti/label.hpp"
#include "senti/random.hpp"
#include "senti/vocab.hpp"

namespace senti::baselines {

using vocab::TokenList;

// Sorted (feature, value) pairs; features are vocabulary indices minus 2.
using SparseVector = std::vector<std::pair<std::uint32_t, double>>;

inline SparseVector term_counts(const TokenList& doc, const vocab::Vocabulary& v) {
  std::map<std::uint32_t, double> counts;
  for (const auto& t : doc) {
    const auto idx = v.index_of(t);
    if (idx >= vocab::kFirstReal) counts[static_cast<std::uint32_t>(idx - vocab::kFirstReal)] += 1.0;
  }
  return {counts.begin(), counts.end()};
}

inline double dot(const SparseVector& x, std::span<const double> w) {
  double s = 0.0;
  for (auto [j, val] : x) s += val * w[j];
  return s;
}

struct TfidfVectorizer {
  const vocab::Vocabulary* vocab = nullptr;
  std::size_t num_docs = 0;
  std::vector<std::size_t> df;
  std::vector<double> idf;  // ln((1 + N) / (1 + df)) + 1

  std::size_t dim() const { return idf.size(); }

  // Raw term counts times idf, L2-normalized when nonzero; unknown tokens are ignored.
  SparseVector transform(const TokenList& doc) const {
    auto x = term_counts(doc, *vocab);
    double norm = 0.0;
    for (auto& [j, val] : x) {
      val *= idf[j];
      norm += val * val;
    }
    if (norm > 0.0) {
      norm = std::sqrt(norm);
      for (auto& [j, val] : x) val /= norm;
    }
    return x;
  }
};

inline TfidfVectorizer fit_tfidf(const std::vector<TokenList>& corpus, const vocab::Vocabulary& v) {
  TfidfVectorizer t;
  t.vocab = &v;
  t.num_docs = corpus.size();
  const std::size_t dim = v.size() - vocab::kFirstReal;
  t.df.assign(dim, 0);
  for (const auto& doc : corpus)
    for (auto [j, val] : term_counts(doc, v)) ++t.df[j];
  t.idf.resize(dim);
  const double n = static_cast<double>(t.num_docs);
  for (std::size_t j = 0; j < dim; ++j) t.idf[j] = std::log((1.0 + n) / (1.0 + static_cast<double>(t.df[j]))) + 1.0;
  return t;
}

struct NaiveBayesModel {
  const vocab::Vocabulary* vocab = nullptr;
  std::array<double, kNumClasses> log_prior{};
  std::array<std::vector<double>, kNumClasses> log_likelihood;  // per feature

  // Posterior over classes; a class absent from training gets probability 0.
  std::array<double, kNumClasses> posterior(const TokenList& doc) const {
    const auto x = term_counts(doc, *vocab);
    std::array<double, kNumClasses> s{};
    double mx = -std::numeric_limits<double>::infinity();
    for (std::size_t k = 0; k < kNumClasses; ++k) {
      s[k] = log_prior[k];
      if (std::isfinite(s[k]))
        for (auto [j, c] : x) s[k] += c * log_likelihood[k][j];
      mx = std::max(mx, s[k]);
    }
    double z = 0.0;
    for (auto& v : s) z += v = std::isfinite(v) ? std::exp(v - mx) : 0.0;
    for (auto& v : s) v /= z;
    return s;
  }

  Label predict(const TokenList& doc) const {
    const auto p = posterior(doc);
    return p[class_index(Label::Positive)] > p[class_index(Label::Negative)] ? Label::Positive : Label::Negative;
  }
};

// Multinomial NB with Laplace smoothing alpha. Priors come from class document
// counts; a class with no documents is never predicted.
inline NaiveBayesModel nb_fit(const std::vector<TokenList>& docs, std::span<const Label> labels,
                              const vocab::Vocabulary& v, double alpha = 1.0) {
  if (docs.size() != labels.size()) throw InputError("nb_fit: documents and labels differ in length");
  if (docs.empty()) throw InputError("nb_fit: empty training set");
  if (!(alpha > 0.0)) throw InputError("nb_fit: alpha must be > 0");
  const std::size_t dim = v.size() - vocab::kFirstReal;
  NaiveBayesModel m;
  m.vocab = &v;
  std::array<std::size_t, kNumClasses> ndocs{};
  std::array<std::vector<double>, kNumClasses> counts;
  for (auto& c : counts) c.assign(dim, 0.0);
  for (std::size_t i = 0; i < docs.size(); ++i) {
    if (labels[i] == Label::Unlabeled) throw InputError("nb_fit: unlabeled training document");
    const auto k = class_index(labels[i]);
    ++ndocs[k];
    for (auto [j, c] : term_counts(docs[i], v)) counts[k][j] += c;
  }
  for (std::size_t k = 0; k < kNumClasses; ++k) {
    m.log_prior[k] = ndocs[k] == 0 ? -std::numeric_limits<double>::infinity()
                                   : std::log(static_cast<double>(ndocs[k]) / static_cast<double>(docs.size()));
    double total = 0.0;
    for (double c : counts[k]) total += c;
    const double denom = total + alpha * static_cast<double>(dim);
    m.log_likelihood[k].resize(dim);
    for (std::size_t j = 0; j < dim; ++j) m.log_likelihood[k][j] = std::log((counts[k][j] + alpha) / denom);
  }
  return m;
}

enum class Objective { Logistic, Hinge };

struct LinearModel {
  std::vector<double> w;
  double b = 0.0;
  Objective objective = Objective::Logistic;
  double lambda = 0.0;

  double score(const SparseVector& x) const { return dot(x, w) + b; }
  Label predict(const SparseVector& x) const { return score(x) > 0.0 ? Label::Positive : Label::Negative; }
};

struct LinearFitOptions {
  Objective objective = Objective::Logistic;
  double lambda = 1e-4;
  double learning_rate = 0.5;
  std::size_t epochs = 200;
  std::uint64_t seed = 42;
};

inline double sign_of(Label l) { return l == Label::Positive ? 1.0 : -1.0; }

struct LogisticObjective {
  double loss = 0.0;
  std::vector<double> grad_w;
  double grad_b = 0.0;
};

// Mean log loss plus (lambda/2)||w||^2; the bias is not regularized.
inline LogisticObjective logistic_objective(const LinearModel& m, std::span<const SparseVector> xs,
                                            std::span<const Label> ys) {
  LogisticObjective o;
  o.grad_w.assign(m.w.size(), 0.0);
  const double n = static_cast<double>(xs.size());
  for (std::size_t i = 0; i < xs.size(); ++i) {
    const double y = sign_of(ys[i]);
    const double z = y * m.score(xs[i]);
    o.loss += (z > 0 ? std::log1p(std::exp(-z)) : -z + std::log1p(std::exp(z))) / n;
    const double coef = -y / (1.0 + std::exp(z)) / n;  // d loss_i / d score
    for (auto [j, v] : xs[i]) o.grad_w[j] += coef * v;
    o.grad_b += coef;
  }
  double sq = 0.0;
  for (std::size_t j = 0; j < m.w.size(); ++j) {
    sq += m.w[j] * m.w[j];
    o.grad_w[j] += m.lambda * m.w[j];
  }
  o.loss += 0.5 * m.lambda * sq;
  return o;
}

// Logistic: full-batch gradient descent. Hinge: Pegasos stochastic
// subgradient steps with eta_t = 1 / (lambda t) (constant learning_rate when
// lambda is 0), the bias treated as a weight on a constant feature.
inline LinearModel linear_fit(std::span<const SparseVector> xs, std::span<const Label> ys, std::size_t dim,
                              const LinearFitOptions& opt = {}) {
  if (xs.size() != ys.size()) throw InputError("linear_fit: features and labels differ in length");
  if (xs.empty()) throw InputError("linear_fit: empty training set");
  if (!(opt.lambda >= 0.0)) throw InputError("linear_fit: lambda must be >= 0");
  LinearModel m;
  m.w.assign(dim, 0.0);
  m.objective = opt.objective;
  m.lambda = opt.lambda;
  if (opt.objective == Objective::Logistic) {
    for (std::size_t e = 0; e < opt.epochs; ++e) {
      const auto o = logistic_objective(m, xs, ys);
      for (std::size_t j = 0; j < dim; ++j) m.w[j] -= opt.learning_rate * o.grad_w[j];
      m.b -= opt.learning_rate * o.grad_b;
    }
  } else {
    Rng rng(opt.seed);
    const std::size_t steps = opt.epochs * xs.size();
    double scale = 1.0;  // w and b are stored divided by scale to make the shrink step O(1)
    for (std::size_t t = 1; t <= steps; ++t) {
      const auto i = static_cast<std::size_t>(uniform_index(rng, xs.size()));
      const double y = sign_of(ys[i]);
      const double eta = opt.lambda > 0.0 ? 1.0 / (opt.lambda * static_cast<double>(t)) : opt.learning_rate;
      const double margin = y * scale * m.score(xs[i]);
      const double shrink = 1.0 - eta * opt.lambda;
      if (shrink <= 0.0) {
        std::fill(m.w.begin(), m.w.end(), 0.0);
        m.b = 0.0;
        scale = 1.0;
      } else {
        scale *= shrink;
      }
      if (margin < 1.0) {
        for (auto [j, v] : xs[i]) m.w[j] += eta * y * v / scale;
        m.b += eta * y / scale;
      }
      if (scale < 1e-100) {
        for (auto& w : m.w) w *= scale;
        m.b *= scale;
        scale = 1.0;
      }
    }
    for (auto& w : m.w) w *= scale;
    m.b *= scale;
  }
  for (double w : m.w)
    if (!std::isfinite(w)) throw NumericError("linear_fit: weights diverged");
  if (!std::isfinite(m.b)) throw NumericError("linear_fit: bias diverged");
  return m;
}

struct ComparisonRow {
  std::string model;
  double accuracy = 0.0;
  double macro_f1 = 0.0;
};

inline ComparisonRow score_row(std::string name, std::span<const Label> preds, std::span<const Label> truth) {
  const auto r = eval::report(preds, truth);
  return {std::move(name), r.accuracy, r.macro.f1};
}

struct CompareOptions {
  bool naive_bayes = true;
  bool logistic = true;
  bool svm = true;
  LinearFitOptions logistic_opts{Objective::Logistic, 1e-4, 0.5, 200, 42};
  LinearFitOptions svm_opts{Objective::Hinge, 1e-4, 0.1, 20, 42};
};

// Fits each enabled baseline on the training documents and scores it on the
// test documents. The majority-class floor always comes first.
inline std::vector<ComparisonRow> compare_baselines(const std::vector<TokenList>& train_docs,
                                                    std::span<const Label> train_labels,
                                                    const std::vector<TokenList>& test_docs,
                                                    std::span<const Label> test_labels, const vocab::Vocabulary& v,
                                                    const CompareOptions& opt = {}) {
  std::vector<ComparisonRow> rows;
  std::size_t pos = 0;
  for (auto l : train_labels) pos += l == Label::Positive;
  const Label majority = 2 * pos > train_labels.size() ? Label::Positive : Label::Negative;
  rows.push_back(score_row("majority", std::vector<Label>(test_labels.size(), majority), test_labels));

  std::vector<Label> preds(test_docs.size());
  if (opt.naive_bayes) {
    const auto nb = nb_fit(train_docs, train_labels, v);
    for (std::size_t i = 0; i < test_docs.size(); ++i) preds[i] = nb.predict(test_docs[i]);
    rows.push_back(score_row("naive_bayes", preds, test_labels));
  }
  if (opt.logistic || opt.svm) {
    const auto tf = fit_tfidf(train_docs, v);
    std::vector<SparseVector> xtr, xte;
    for (const auto& d : train_docs) xtr.push_back(tf.transform(d));
    for (const auto& d : test_docs) xte.push_back(tf.transform(d));
    auto run = [&](const char* name, const LinearFitOptions& o) {
      const auto m = linear_fit(xtr, train_labels, tf.dim(), o);
      for (std::size_t i = 0; i < xte.size(); ++i) preds[i] = m.predict(xte[i]);
      rows.push_back(score_row(name, preds, test_labels));
    };
    if (opt.logistic) run("logistic_regression", opt.logistic_opts);
    if (opt.svm) run("linear_svm", opt.svm_opts);
  }
  return rows;
}

inline csv::Table comparison_table(std::span<const ComparisonRow> rows) {
  csv::Table t;
  t.header = {"model", "accuracy", "macro_f1"};
  for (const auto& r : rows) t.rows.push_back({{r.model, eval::round_fixed(r.accuracy, 4), eval::round_fixed(r.macro_f1, 4)}});
  return t;
}

inline std::string render_comparison(std::span<const ComparisonRow> rows) {
  std::size_t w = 5;
  for (const auto& r : rows) w = std::max(w, r.model.size());
  auto pad = [](std::string s, std::size_t n) { return s + std::string(n > s.size() ? n - s.size() : 0, ' '); };
  std::string out = pad("model", w) + "  accuracy  macro_f1\n";
  for (const auto& r : rows)
    out += pad(r.model, w) + "    " + eval::round_fixed(r.accuracy, 4) + "    " + eval::round_fixed(r.macro_f1, 4) + "\n";
  return out;
}

}  // namespace senti::baselines
