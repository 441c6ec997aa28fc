#include <gtest/gtest.h>

#include "senti/vocab.hpp"
#include "support.hpp"

using namespace senti;
using namespace senti::vocab;
namespace st = senti::testing;

TEST(Vocab, BuildAssignsReservedThenFrequencyOrder) {
  const auto v = build_vocab({{"a", "b", "a"}}, 1);
  EXPECT_EQ(v.size(), 4u);
  EXPECT_EQ(v.index_of("a"), 2);
  EXPECT_EQ(v.index_of("b"), 3);
  EXPECT_EQ(v.index_of("zzz"), kOov);
}

TEST(Vocab, MinFreqFilters) {
  const auto v = build_vocab({{"a", "b", "a"}}, 2);
  EXPECT_EQ(v.size(), 3u);
  EXPECT_EQ(v.index_of("a"), 2);
  EXPECT_FALSE(v.contains("b"));
}

TEST(Vocab, TiesBrokenLexicographically) {
  const auto v = build_vocab({{"zeta", "alpha", "mid", "mid"}, {"beta"}});
  EXPECT_EQ(v.tokens(), (std::vector<std::string>{"mid", "alpha", "beta", "zeta"}));
  EXPECT_EQ(build_vocab({{"beta"}, {"zeta", "alpha", "mid", "mid"}}), v);
}

TEST(Vocab, EmptyCorpusThrows) { EXPECT_THROW(build_vocab({}), InputError); }

TEST(Vocab, DefaultMaxLenIsNearestRankP95Capped) {
  std::vector<TokenList> corpus;
  for (std::size_t n = 1; n <= 20; ++n) corpus.emplace_back(n, "w");
  EXPECT_EQ(default_max_len(corpus), 19u);  // rank ceil(0.95*20) = 19
  corpus.assign(3, TokenList(250, "w"));
  EXPECT_EQ(default_max_len(corpus), kMaxLenCap);
  EXPECT_EQ(default_max_len({{}}), 1u);
}

TEST(Encode, PostPadsAndTruncatesKeepingTheFirstTokens) {
  const Vocabulary v({"a", "b"}, 4);
  auto s = encode({"a", "b"}, v, 4);
  EXPECT_EQ(s.indices, (std::vector<std::int32_t>{2, 3, 0, 0}));
  EXPECT_EQ(s.true_length, 2u);
  s = encode({"z"}, v, 2);
  EXPECT_EQ(s.indices, (std::vector<std::int32_t>{1, 0}));
  EXPECT_EQ(s.true_length, 1u);
  s = encode({}, v, 3);
  EXPECT_EQ(s.indices, (std::vector<std::int32_t>{0, 0, 0}));
  EXPECT_EQ(s.true_length, 0u);
  s = encode({"b", "a", "b", "a"}, v, 3);
  EXPECT_EQ(s.indices, (std::vector<std::int32_t>{3, 2, 3}));
  EXPECT_EQ(s.true_length, 3u);
  EXPECT_THROW(encode({"a"}, v, 0), InputError);
}

TEST(Decode, InvertsEncodingAndMarksUnknowns) {
  const Vocabulary v({"a", "b"});
  EXPECT_EQ(decode({{2, 3, 0, 0}, 2}, v), (TokenList{"a", "b"}));
  EXPECT_EQ(decode({{1, 0}, 1}, v), (TokenList{kUnkToken}));
  EXPECT_TRUE(decode({{0, 0, 0}, 0}, v).empty());
  EXPECT_THROW(decode({{4}, 1}, v), InputError);
}

TEST(Encode, RoundTripAndFixedLengthProperty) {
  Rng r(5);
  std::vector<TokenList> corpus;
  for (int d = 0; d < 50; ++d) {
    TokenList doc;
    for (std::size_t k = uniform_index(r, 12); k > 0; --k) doc.push_back("t" + std::to_string(uniform_index(r, 30)));
    corpus.push_back(doc);
  }
  const auto v = build_vocab(corpus, 1, 12);
  for (const auto& doc : corpus) {
    const auto s = encode(doc, v);
    EXPECT_EQ(s.indices.size(), 12u);
    for (std::size_t i = s.true_length; i < s.indices.size(); ++i) EXPECT_EQ(s.indices[i], kPad);
    EXPECT_EQ(decode(s, v), doc);
  }
}

TEST(Vocab, SaveLoadRoundTripWithSidecar) {
  st::TempDir dir;
  const auto v = build_vocab({{"makan", "gratis", "makan"}, {"enak"}}, 1, 7);
  save(dir.file("vocab.txt"), v);
  EXPECT_EQ(st::slurp(dir.file("vocab.txt")), "makan\nenak\ngratis\n");
  EXPECT_EQ(st::slurp(dir.file("vocab.txt.meta")), "max_len=7 min_freq=1\n");
  EXPECT_EQ(load(dir.file("vocab.txt")), v);
}

TEST(Vocab, MalformedFilesAreRejected) {
  EXPECT_THROW(deserialize("a\nb\n", ""), InputError);
  EXPECT_THROW(deserialize("a\nb\n", "max_len=x min_freq=1"), InputError);
  EXPECT_THROW(deserialize("a\na\n", "max_len=3 min_freq=1"), InputError);
  EXPECT_THROW(load("/nonexistent/vocab.txt"), InputError);
}
