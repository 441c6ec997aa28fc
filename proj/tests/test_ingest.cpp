#include <gtest/gtest.h>

#include <set>

#include "senti/csv.hpp"
#include "senti/ingest.hpp"
#include "support.hpp"

using namespace senti;
using namespace senti::ingest;
using senti::testing::TempDir;
namespace st = senti::testing;

namespace {

Dataset synthetic(std::size_t neg, std::size_t pos) {
  Dataset ds;
  for (std::size_t i = 0; i < neg + pos; ++i)
    ds.add({"r" + std::to_string(i), "", "text " + std::to_string(i), i < neg ? Label::Negative : Label::Positive});
  return ds;
}

}  // namespace

TEST(Csv, ParsesQuotedFieldsAndEmbeddedNewlines) {
  const auto recs = csv::parse_records("a,b\r\n\"x,1\",\"say \"\"hi\"\"\nthere\"\n\nlast,\n");
  ASSERT_EQ(recs.size(), 3u);
  EXPECT_EQ(recs[1].fields[0], "x,1");
  EXPECT_EQ(recs[1].fields[1], "say \"hi\"\nthere");
  EXPECT_EQ(recs[1].line, 2u);
  EXPECT_EQ(recs[2].fields, (csv::Row{"last", ""}));
  EXPECT_EQ(recs[2].line, 5u);
}

TEST(Csv, UnterminatedQuoteThrows) { EXPECT_THROW(csv::parse_records("a\n\"open"), InputError); }

TEST(Csv, EscapeRoundTrips) {
  TempDir dir;
  csv::Table t;
  t.header = {"id", "text"};
  t.rows.push_back({{"1", "koma, \"kutip\"\nbaris"}});
  csv::write_table(dir.file("t.csv"), t);
  const auto back = csv::read_table(dir.file("t.csv"));
  EXPECT_EQ(back.rows[0].fields, t.rows[0].fields);
}

TEST(Ingest, LoadsCanonicalCsvAndCountsClasses) {
  TempDir dir;
  st::spit(dir.file("c.csv"),
                "id,source,text,label\n1,v,bagus,positive\n2,v,jelek,negative\n3,v,biasa,\n4,v,buruk,negative\n");
  const auto ds = load_csv(dir.file("c.csv"));
  EXPECT_EQ(ds.size(), 4u);
  EXPECT_EQ(ds.count(Label::Positive), 1u);
  EXPECT_EQ(ds.count(Label::Negative), 2u);
  EXPECT_EQ(ds.count(Label::Unlabeled), 1u);
  EXPECT_EQ(ds.labeled_only().size(), 3u);
  EXPECT_EQ(ds[0].source, "v");
}

TEST(Ingest, SourceColumnIsOptional) {
  TempDir dir;
  st::spit(dir.file("c.csv"), "id,text,label\n1,bagus,positive\n");
  EXPECT_EQ(load_csv(dir.file("c.csv"))[0].source, "");
}

TEST(Ingest, StrictModeRejectsBadRowsWithLineNumber) {
  TempDir dir;
  st::spit(dir.file("c.csv"), "id,text,label\n1,bagus,positive\n2,hmm,neutral\n");
  try {
    load_csv(dir.file("c.csv"));
    FAIL() << "expected InputError";
  } catch (const InputError& e) {
    EXPECT_NE(std::string(e.what()).find("line 3"), std::string::npos);
  }
}

TEST(Ingest, LenientModeSkipsAndReports) {
  TempDir dir;
  st::spit(dir.file("c.csv"), "id,text,label\n1,bagus,positive\n2,hmm,neutral\n3,,negative\n4,x\n5,ok,negative\n");
  std::vector<RowIssue> skipped;
  const auto ds = load_csv(dir.file("c.csv"), {}, ParseMode::Lenient, &skipped);
  EXPECT_EQ(ds.size(), 2u);
  ASSERT_EQ(skipped.size(), 3u);
  EXPECT_EQ(skipped[0].line, 3u);
  EXPECT_EQ(skipped[1].line, 4u);
  EXPECT_EQ(skipped[2].line, 5u);
}

TEST(Ingest, MissingColumnThrows) {
  TempDir dir;
  st::spit(dir.file("c.csv"), "id,body,label\n1,x,positive\n");
  EXPECT_THROW(load_csv(dir.file("c.csv")), InputError);
}

TEST(Ingest, SaveLoadRoundTrip) {
  TempDir dir;
  Dataset ds;
  ds.add({"a", "vid", "teks, dengan \"kutip\"", Label::Positive});
  ds.add({"b", "vid", "", Label::Unlabeled});
  save_csv(dir.file("o.csv"), ds);
  const auto back = load_csv(dir.file("o.csv"));
  ASSERT_EQ(back.size(), 2u);
  EXPECT_EQ(back[0].text, ds[0].text);
  EXPECT_EQ(back[1].label, Label::Unlabeled);
}

TEST(Ingest, ClassDistributionMatchesCorpusShares) {
  const auto d = class_distribution(synthetic(5629, 790));
  EXPECT_NEAR(d.negative, 0.877, 5e-4);
  EXPECT_NEAR(d.positive, 0.123, 5e-4);
  EXPECT_THROW(class_distribution(Dataset{}), InputError);
}

TEST(Split, ApportionIsLargestRemainder) {
  EXPECT_EQ(apportion(6419, {0.7, 0.15, 0.15}), (std::array<std::size_t, 3>{4493, 963, 963}));
  EXPECT_EQ(apportion(10, {0.7, 0.15, 0.15}), (std::array<std::size_t, 3>{7, 1, 2}));
  EXPECT_EQ(apportion(3, {1.0 / 3, 1.0 / 3, 1.0 / 3}), (std::array<std::size_t, 3>{1, 1, 1}));
}

TEST(Split, ReferenceShapedCorpusGivesReferenceTestSupports) {
  const auto s = stratified_split(synthetic(5629, 790), {});
  EXPECT_EQ(s.train.size(), 4493u);
  EXPECT_EQ(s.val.size(), 963u);
  EXPECT_EQ(s.test.size(), 963u);
  EXPECT_EQ(s.test.count(Label::Negative), 845u);
  EXPECT_EQ(s.test.count(Label::Positive), 118u);
}

TEST(Split, PartitionIsExactAndOrderPreserving) {
  const auto ds = synthetic(37, 11);
  const auto idx = stratified_split_indices(ds, {0.6, 0.2, 0.2, 9});
  std::set<std::size_t> seen;
  for (const auto& part : idx) {
    EXPECT_TRUE(std::is_sorted(part.begin(), part.end()));
    for (auto i : part) EXPECT_TRUE(seen.insert(i).second);
  }
  EXPECT_EQ(seen.size(), ds.size());
}

TEST(Split, PerClassCountsWithinOneOfQuota) {
  for (std::uint64_t seed = 0; seed < 30; ++seed) {
    Rng r(seed);
    const std::size_t neg = 3 + uniform_index(r, 300), pos = 3 + uniform_index(r, 100);
    const SplitSpec spec{0.7, 0.15, 0.15, seed};
    const auto s = stratified_split(synthetic(neg, pos), spec);
    const std::array<const Dataset*, 3> parts{&s.train, &s.val, &s.test};
    for (std::size_t p = 0; p < 3; ++p) {
      const double f = spec.fractions()[p];
      EXPECT_LE(std::abs(static_cast<double>(parts[p]->count(Label::Negative)) - f * neg), 1.0);
      EXPECT_LE(std::abs(static_cast<double>(parts[p]->count(Label::Positive)) - f * pos), 1.0);
    }
  }
}

TEST(Split, SameSeedSameSplitDifferentSeedDifferentSplit) {
  const auto ds = synthetic(100, 40);
  const auto a = stratified_split_indices(ds, {0.7, 0.15, 0.15, 1});
  const auto b = stratified_split_indices(ds, {0.7, 0.15, 0.15, 1});
  const auto c = stratified_split_indices(ds, {0.7, 0.15, 0.15, 2});
  EXPECT_EQ(a, b);
  EXPECT_NE(a, c);
}

TEST(Split, RejectsBadInput) {
  EXPECT_THROW(stratified_split(synthetic(10, 10), {0.7, 0.2, 0.2, 1}), InputError);
  EXPECT_THROW(stratified_split(synthetic(10, 2), {}), InputError);
  Dataset unl = synthetic(10, 10);
  unl.add({"u", "", "x", Label::Unlabeled});
  EXPECT_THROW(stratified_split(unl, {}), InputError);
}
