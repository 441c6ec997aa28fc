#include <gtest/gtest.h>

#include "senti/eval.hpp"
#include "support.hpp"

using namespace senti;
using namespace senti::eval;
namespace st = senti::testing;

namespace {

const ConfusionMatrix kReference{67, 58, 787, 51};  // tp, fp, tn, fn

std::vector<Label> labels_of(std::initializer_list<int> xs) {
  std::vector<Label> out;
  for (int x : xs) out.push_back(label_from_index(static_cast<std::size_t>(x)));
  return out;
}

void expect_matches_recount(const ClassificationReport& r, const st::Recount& o) {
  EXPECT_DOUBLE_EQ(r.accuracy, o.accuracy);
  for (std::size_t k = 0; k < 2; ++k) {
    const auto& m = r.of(label_from_index(k));
    EXPECT_NEAR(m.precision, o.rows[k].precision, 1e-15);
    EXPECT_NEAR(m.recall, o.rows[k].recall, 1e-15);
    EXPECT_NEAR(m.f1, o.rows[k].f1, 1e-15);
    EXPECT_EQ(m.support, o.rows[k].support);
  }
  EXPECT_NEAR(r.macro.precision, o.macro.precision, 1e-15);
  EXPECT_NEAR(r.macro.recall, o.macro.recall, 1e-15);
  EXPECT_NEAR(r.macro.f1, o.macro.f1, 1e-15);
  EXPECT_NEAR(r.weighted.precision, o.weighted.precision, 1e-15);
  EXPECT_NEAR(r.weighted.recall, o.weighted.recall, 1e-15);
  EXPECT_NEAR(r.weighted.f1, o.weighted.f1, 1e-15);
}

}  // namespace

TEST(Confusion, CountsPerReferenceClass) {
  const auto all_pos = labels_of({1, 1, 1});
  EXPECT_EQ(confusion(all_pos, all_pos), (ConfusionMatrix{3, 0, 0, 0}));
  const auto truth = labels_of({1, 1, 0, 0, 0});
  EXPECT_EQ(confusion(labels_of({0, 0, 0, 0, 0}), truth), (ConfusionMatrix{0, 0, 3, 2}));
  EXPECT_THROW(confusion(labels_of({0}), truth), InputError);
  EXPECT_THROW(confusion(std::vector<Label>{}, std::vector<Label>{}), InputError);
}

TEST(Confusion, ReferenceShapeFromSamples) {
  std::vector<Label> preds, truth;
  auto add = [&](std::size_t n, int p, int t) {
    for (std::size_t i = 0; i < n; ++i) {
      preds.push_back(label_from_index(static_cast<std::size_t>(p)));
      truth.push_back(label_from_index(static_cast<std::size_t>(t)));
    }
  };
  add(67, 1, 1);
  add(51, 0, 1);
  add(58, 1, 0);
  add(787, 0, 0);
  EXPECT_EQ(confusion(preds, truth), kReference);
}

TEST(Metrics, ReferenceRowsAtTwoDecimals) {
  const auto pos = metrics_for_class(kReference, Label::Positive);
  EXPECT_NEAR(pos.precision, 0.536, 1e-12);
  EXPECT_NEAR(pos.recall, 67.0 / 118, 1e-15);
  EXPECT_EQ(round_fixed(pos.precision), "0.54");
  EXPECT_EQ(round_fixed(pos.recall), "0.57");
  EXPECT_EQ(round_fixed(pos.f1), "0.55");
  const auto neg = metrics_for_class(kReference, Label::Negative);
  EXPECT_NEAR(neg.precision, 787.0 / 838, 1e-15);
  EXPECT_NEAR(neg.recall, 787.0 / 845, 1e-15);
  EXPECT_EQ(round_fixed(neg.precision), "0.94");
  EXPECT_EQ(round_fixed(neg.recall), "0.93");
  EXPECT_EQ(round_fixed(neg.f1), "0.94");
  EXPECT_EQ(neg.support, 845u);
  EXPECT_EQ(pos.support, 118u);
}

TEST(Metrics, ZeroDenominatorsGiveZeroAndAreFlagged) {
  const auto m = metrics_for_class(ConfusionMatrix{0, 0, 5, 0}, Label::Positive);
  EXPECT_EQ(m.precision, 0.0);
  EXPECT_EQ(m.recall, 0.0);
  EXPECT_EQ(m.f1, 0.0);
  EXPECT_TRUE(m.zero_division);
  EXPECT_FALSE(metrics_for_class(kReference, Label::Positive).zero_division);
}

TEST(Report, ReferenceTable) {
  const auto r = report(kReference);
  EXPECT_EQ(r.total, 963u);
  EXPECT_NEAR(r.accuracy, 854.0 / 963, 1e-15);
  EXPECT_EQ(round_fixed(r.accuracy), "0.89");
  EXPECT_EQ(round_fixed(r.macro.precision), "0.74");
  EXPECT_EQ(round_fixed(r.macro.recall), "0.75");
  EXPECT_EQ(round_fixed(r.macro.f1), "0.74");
  EXPECT_EQ(round_fixed(r.weighted.precision), "0.89");
  EXPECT_EQ(round_fixed(r.weighted.recall), "0.89");
  EXPECT_EQ(round_fixed(r.weighted.f1), "0.89");
}

TEST(Report, RenderedTextLayout) {
  EXPECT_EQ(render_text(report(kReference)),
            "              precision    recall  f1-score   support\n"
            "\n"
            "    Negative      0.94      0.93      0.94       845\n"
            "    Positive      0.54      0.57      0.55       118\n"
            "\n"
            "    accuracy                          0.89       963\n"
            "   macro avg      0.74      0.75      0.74       963\n"
            "weighted avg      0.89      0.89      0.89       963\n");
  EXPECT_NE(render_text(report(ConfusionMatrix{0, 0, 5, 0})).find("zero denominator"), std::string::npos);
}

TEST(Report, PerfectPredictions) {
  const auto truth = labels_of({0, 1, 1, 0, 1});
  const auto r = report(truth, truth);
  for (double v : {r.accuracy, r.macro.precision, r.macro.recall, r.macro.f1, r.weighted.f1}) EXPECT_EQ(round_fixed(v), "1.00");
}

TEST(Report, CsvIsFullPrecisionAndParsesBack) {
  st::TempDir dir;
  const auto r = report(kReference);
  csv::write_table(dir.file("r.csv"), report_table(r));
  const auto t = csv::read_table(dir.file("r.csv"));
  ASSERT_EQ(t.rows.size(), 5u);
  EXPECT_EQ(t.rows[1].fields[0], "positive");
  EXPECT_EQ(std::stod(t.rows[1].fields[1]), r.positive.precision);
  EXPECT_EQ(std::stod(t.rows[1].fields[3]), r.positive.f1);
  EXPECT_EQ(std::stod(t.rows[2].fields[3]), r.accuracy);
  EXPECT_EQ(std::stod(t.rows[4].fields[2]), r.weighted.recall);
  EXPECT_EQ(t.rows[4].fields[4], "963");
  const auto cm = confusion_table(kReference);
  EXPECT_EQ(cm.rows[0].fields, (csv::Row{"negative", "787", "58"}));
  EXPECT_EQ(cm.rows[1].fields, (csv::Row{"positive", "51", "67"}));
}

TEST(Report, MatchesRecountOracleOnRandomVectors) {
  Rng r(2025);
  for (int trial = 0; trial < 1000; ++trial) {
    const std::size_t n = 1 + uniform_index(r, trial == 0 ? 20 : 60);
    std::vector<Label> preds(n), truth(n);
    const double bias = uniform01(r);
    for (std::size_t i = 0; i < n; ++i) {
      truth[i] = uniform01(r) < bias ? Label::Positive : Label::Negative;
      preds[i] = uniform01(r) < 0.5 ? Label::Positive : Label::Negative;
    }
    expect_matches_recount(report(preds, truth), st::recount(preds, truth));
  }
}

TEST(Report, RelabelingSwapsRowsAndKeepsAccuracy) {
  Rng r(9);
  for (int trial = 0; trial < 100; ++trial) {
    const ConfusionMatrix cm{uniform_index(r, 50), uniform_index(r, 50), uniform_index(r, 50), 1 + uniform_index(r, 50)};
    const auto a = report(cm), b = report(cm.relabeled());
    EXPECT_EQ(a.accuracy, b.accuracy);
    EXPECT_EQ(a.positive.f1, b.negative.f1);
    EXPECT_EQ(a.negative.precision, b.positive.precision);
    EXPECT_EQ(a.positive.support, b.negative.support);
    EXPECT_LE(a.macro.f1, std::max(a.negative.f1, a.positive.f1) + 1e-15);
    EXPECT_GE(a.macro.f1, std::min(a.negative.f1, a.positive.f1) - 1e-15);
  }
}

TEST(Rounding, HalfAwayFromZero) {
  EXPECT_EQ(round_fixed(0.545), "0.55");
  EXPECT_EQ(round_fixed(0.125), "0.13");
  EXPECT_EQ(round_fixed(0.5449), "0.54");
  EXPECT_EQ(round_fixed(-0.125), "-0.13");
  EXPECT_EQ(round_fixed(0.0), "0.00");
  EXPECT_EQ(round_fixed(0.99999), "1.00");
  EXPECT_EQ(round_fixed(0.87745, 4), "0.8775");
}
