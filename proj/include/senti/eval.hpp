#pragma once

#include <array>
#include <charconv>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <span>
#include <sstream>
#include <string>
#include <vector>

#include "senti/csv.hpp"
#include "senti/error.hpp"
#include "senti/label.hpp"

namespace senti::eval {

// Positive is the reference class of the raw counts.
struct ConfusionMatrix {
  std::uint64_t tp = 0;
  std::uint64_t fp = 0;
  std::uint64_t tn = 0;
  std::uint64_t fn = 0;

  std::uint64_t total() const { return tp + fp + tn + fn; }
  // Same matrix seen with Negative as the reference class.
  ConfusionMatrix relabeled() const { return {tn, fn, tp, fp}; }
  bool operator==(const ConfusionMatrix&) const = default;
};

inline ConfusionMatrix confusion(std::span<const Label> preds, std::span<const Label> truth) {
  if (preds.size() != truth.size())
    throw InputError("confusion: " + std::to_string(preds.size()) + " predictions for " +
                     std::to_string(truth.size()) + " labels");
  if (truth.empty()) throw InputError("confusion: no samples");
  ConfusionMatrix cm;
  for (std::size_t i = 0; i < truth.size(); ++i) {
    if (preds[i] == Label::Unlabeled || truth[i] == Label::Unlabeled)
      throw InputError("confusion: sample " + std::to_string(i) + " is unlabeled");
    const bool p = preds[i] == Label::Positive, t = truth[i] == Label::Positive;
    if (p && t) ++cm.tp;
    else if (p) ++cm.fp;
    else if (t) ++cm.fn;
    else ++cm.tn;
  }
  return cm;
}

struct ClassMetrics {
  double precision = 0.0;
  double recall = 0.0;
  double f1 = 0.0;
  std::uint64_t support = 0;
  bool zero_division = false;  // some ratio had a zero denominator and was set to 0
};

inline ClassMetrics metrics_for_class(const ConfusionMatrix& raw, Label reference) {
  if (reference == Label::Unlabeled) throw InputError("metrics_for_class: reference must be a class");
  const auto cm = reference == Label::Positive ? raw : raw.relabeled();
  ClassMetrics m;
  m.support = cm.tp + cm.fn;
  auto ratio = [&](std::uint64_t num, std::uint64_t den) {
    if (den == 0) {
      m.zero_division = true;
      return 0.0;
    }
    return static_cast<double>(num) / static_cast<double>(den);
  };
  m.precision = ratio(cm.tp, cm.tp + cm.fp);
  m.recall = ratio(cm.tp, cm.tp + cm.fn);
  const double pr = m.precision + m.recall;
  if (pr == 0.0) m.zero_division = true;
  m.f1 = pr == 0.0 ? 0.0 : 2.0 * m.precision * m.recall / pr;
  return m;
}

struct Averages {
  double precision = 0.0;
  double recall = 0.0;
  double f1 = 0.0;
};

struct ClassificationReport {
  ConfusionMatrix cm;
  ClassMetrics negative;
  ClassMetrics positive;
  double accuracy = 0.0;
  Averages macro;
  Averages weighted;
  std::uint64_t total = 0;

  const ClassMetrics& of(Label l) const { return l == Label::Positive ? positive : negative; }
  bool zero_division() const { return negative.zero_division || positive.zero_division; }
};

inline ClassificationReport report(const ConfusionMatrix& cm) {
  if (cm.total() == 0) throw InputError("report: no samples");
  ClassificationReport r;
  r.cm = cm;
  r.total = cm.total();
  r.negative = metrics_for_class(cm, Label::Negative);
  r.positive = metrics_for_class(cm, Label::Positive);
  r.accuracy = static_cast<double>(cm.tp + cm.tn) / static_cast<double>(r.total);
  const auto& n = r.negative;
  const auto& p = r.positive;
  r.macro = {(n.precision + p.precision) / 2.0, (n.recall + p.recall) / 2.0, (n.f1 + p.f1) / 2.0};
  const double wn = static_cast<double>(n.support) / static_cast<double>(r.total);
  const double wp = static_cast<double>(p.support) / static_cast<double>(r.total);
  r.weighted = {wn * n.precision + wp * p.precision, wn * n.recall + wp * p.recall, wn * n.f1 + wp * p.f1};
  return r;
}

inline ClassificationReport report(std::span<const Label> preds, std::span<const Label> truth) {
  return report(confusion(preds, truth));
}

// Fixed-point text rounded half away from zero. Values within 1e-9 of a
// rounding midpoint count as the midpoint, so 0.545 renders as 0.55 even
// though its binary value sits slightly below.
inline std::string round_fixed(double x, int decimals = 2) {
  const double scale = std::pow(10.0, decimals);
  const double y = std::abs(x) * scale;
  double r = std::floor(y);
  if (y - r >= 0.5 - 1e-9) r += 1.0;
  if (x < 0 && r != 0.0) r = -r;
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.*f", decimals, r / scale);
  return buf;
}

inline std::string full_precision(double x) {
  char buf[32];
  const auto res = std::to_chars(buf, buf + sizeof buf, x);
  return std::string(buf, res.ptr);
}

// Aligned text in the familiar precision/recall/f1/support layout.
inline std::string render_text(const ClassificationReport& r, int decimals = 2) {
  std::ostringstream os;
  auto cell = [&](double v) {
    std::string s = round_fixed(v, decimals);
    return std::string(s.size() < 10 ? 10 - s.size() : 0, ' ') + s;
  };
  auto count = [](std::uint64_t v) {
    std::string s = std::to_string(v);
    return std::string(s.size() < 10 ? 10 - s.size() : 0, ' ') + s;
  };
  auto name = [](const std::string& s) { return std::string(s.size() < 12 ? 12 - s.size() : 0, ' ') + s; };
  os << name("") << "  precision    recall  f1-score   support\n\n";
  os << name("Negative") << cell(r.negative.precision) << cell(r.negative.recall) << cell(r.negative.f1)
     << count(r.negative.support) << "\n";
  os << name("Positive") << cell(r.positive.precision) << cell(r.positive.recall) << cell(r.positive.f1)
     << count(r.positive.support) << "\n\n";
  os << name("accuracy") << std::string(20, ' ') << cell(r.accuracy) << count(r.total) << "\n";
  os << name("macro avg") << cell(r.macro.precision) << cell(r.macro.recall) << cell(r.macro.f1) << count(r.total)
     << "\n";
  os << name("weighted avg") << cell(r.weighted.precision) << cell(r.weighted.recall) << cell(r.weighted.f1)
     << count(r.total) << "\n";
  if (r.zero_division()) os << "\nnote: some metrics had a zero denominator and were reported as 0\n";
  return os.str();
}

// Full-precision CSV: row,precision,recall,f1,support.
inline csv::Table report_table(const ClassificationReport& r) {
  csv::Table t;
  t.header = {"row", "precision", "recall", "f1", "support"};
  auto fp = full_precision;
  auto add_class = [&](const char* n, const ClassMetrics& m) {
    t.rows.push_back({{n, fp(m.precision), fp(m.recall), fp(m.f1), std::to_string(m.support)}});
  };
  add_class("negative", r.negative);
  add_class("positive", r.positive);
  t.rows.push_back({{"accuracy", "", "", fp(r.accuracy), std::to_string(r.total)}});
  t.rows.push_back({{"macro_avg", fp(r.macro.precision), fp(r.macro.recall), fp(r.macro.f1), std::to_string(r.total)}});
  t.rows.push_back({{"weighted_avg", fp(r.weighted.precision), fp(r.weighted.recall), fp(r.weighted.f1),
                     std::to_string(r.total)}});
  return t;
}

inline csv::Table confusion_table(const ConfusionMatrix& cm) {
  csv::Table t;
  t.header = {"actual", "predicted_negative", "predicted_positive"};
  t.rows.push_back({{"negative", std::to_string(cm.tn), std::to_string(cm.fp)}});
  t.rows.push_back({{"positive", std::to_string(cm.fn), std::to_string(cm.tp)}});
  return t;
}

}  // namespace senti::eval
