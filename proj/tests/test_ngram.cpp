#include <gtest/gtest.h>

#include <sstream>

#include "oracles.hpp"
#include "sentiscope/ngram.hpp"
#include "sentiscope/synth.hpp"

using namespace sentiscope;

namespace {

TokenStream stream(std::vector<std::string> tokens, std::vector<std::size_t> starts) {
  return TokenStream{std::move(tokens), std::move(starts)};
}

std::vector<TokenStream> synthetic_streams(std::uint64_t seed, std::size_t n) {
  const auto sc = synth::generate(seed, n);
  std::vector<TokenStream> out;
  for (const auto& r : sc.corpus.records) out.push_back(prepare_text(r.text));
  return out;
}

void expect_matches_oracle(const std::vector<TokenStream>& streams, int n) {
  const NgramTable t = build_table(streams, n);
  const auto expected = oracle::rank(oracle::ngram_counts(streams, n));
  ASSERT_EQ(t.entries.size(), expected.size()) << "n=" << n;
  std::uint64_t total = 0;
  for (std::size_t i = 0; i < expected.size(); ++i) {
    EXPECT_EQ(join_gram(t.entries[i].gram), expected[i].first);
    EXPECT_EQ(t.entries[i].count, expected[i].second);
    EXPECT_EQ(t.entries[i].gram.size(), static_cast<std::size_t>(n));
    total += expected[i].second;
  }
  EXPECT_EQ(t.total_grams, total);
}

}  // namespace

TEST(ExtractNgrams, SlidingWindow) {
  EXPECT_EQ(extract_ngrams(stream({"a", "b", "c"}, {0}), 2), (std::vector<Gram>{{"a", "b"}, {"b", "c"}}));
}

TEST(ExtractNgrams, NoGramCrossesASentenceBoundary) {
  EXPECT_EQ(extract_ngrams(stream({"a", "b", "c", "d"}, {0, 2}), 2), (std::vector<Gram>{{"a", "b"}, {"c", "d"}}));
}

TEST(ExtractNgrams, ShortStreamGivesNothing) { EXPECT_TRUE(extract_ngrams(stream({"a"}, {0}), 3).empty()); }

TEST(ExtractNgrams, OrderOutsideRangeThrows) {
  const TokenStream ts = stream({"a"}, {0});
  EXPECT_THROW(extract_ngrams(ts, 0), InvalidN);
  EXPECT_THROW(extract_ngrams(ts, 5), InvalidN);
  EXPECT_THROW(NgramCounter(7), InvalidN);
}

TEST(ExtractNgrams, PerSentenceCountIsLengthMinusNPlusOne) {
  for (const auto& ts : synthetic_streams(3, 300)) {
    for (int n = 1; n <= 4; ++n) {
      std::size_t expected = 0;
      for (std::size_t s = 0; s < ts.sentence_count(); ++s) {
        const std::size_t len = ts.sentence(s).size();
        if (len >= static_cast<std::size_t>(n)) expected += len - n + 1;
      }
      EXPECT_EQ(extract_ngrams(ts, n).size(), expected);
    }
  }
}

TEST(BuildTable, CountsRepeatedGram) {
  const std::vector<TokenStream> s = {stream({"a", "b"}, {0}), stream({"a", "b"}, {0})};
  const NgramTable t = build_table(s, 2);
  ASSERT_EQ(t.entries.size(), 1u);
  EXPECT_EQ(t.entries[0], (NgramEntry{{"a", "b"}, 2}));
  EXPECT_EQ(t.total_grams, 2u);
}

TEST(BuildTable, TiesBreakLexicographically) {
  const std::vector<TokenStream> s = {stream({"a", "b"}, {0}), stream({"a", "a"}, {0})};
  const NgramTable t = build_table(s, 2);
  ASSERT_EQ(t.entries.size(), 2u);
  EXPECT_EQ(t.entries[0].gram, (Gram{"a", "a"}));
  EXPECT_EQ(t.entries[1].gram, (Gram{"a", "b"}));
}

TEST(BuildTable, MatchesBruteForceCounter) {
  const auto streams = synthetic_streams(42, 1000);
  for (int n = 1; n <= 4; ++n) expect_matches_oracle(streams, n);
}

TEST(BuildTable, MatchesBruteForceCounterAtTenThousandStreams) {
  const auto streams = synthetic_streams(17, 10000);
  for (int n = 1; n <= 4; ++n) expect_matches_oracle(streams, n);
}

TEST(BuildTable, UnigramTotalEqualsTokenCount) {
  const auto streams = synthetic_streams(8, 500);
  std::uint64_t tokens = 0;
  for (const auto& ts : streams) tokens += ts.tokens.size();
  EXPECT_EQ(build_table(streams, 1).total_grams, tokens);
}

TEST(BuildTable, DeterministicAndShardMergeable) {
  const auto streams = synthetic_streams(8, 500);
  for (int n = 1; n <= 4; ++n) {
    const NgramTable whole = build_table(streams, n);
    EXPECT_EQ(build_table(streams, n), whole);
    NgramCounter a(n), b(n);
    for (std::size_t i = 0; i < streams.size(); ++i) (i % 3 == 0 ? a : b).add(streams[i]);
    b.merge(a);
    EXPECT_EQ(b.table(), whole);
  }
}

TEST(WordCloud, NormalisesByMaximum) {
  const std::vector<TokenStream> s = {stream({"reopen", "reopen", "economy"}, {0}), stream({"reopen", "economy"}, {0}),
                                      stream({"reopen", "reopen", "reopen", "reopen", "reopen", "economy", "economy"}, {0})};
  const auto w = word_cloud_weights(build_table(s, 1), 2);
  ASSERT_EQ(w.size(), 2u);
  EXPECT_EQ(w[0], (std::pair<std::string, double>{"reopen", 1.0}));
  EXPECT_EQ(w[1], (std::pair<std::string, double>{"economy", 0.5}));
}

TEST(WordCloud, LargeKReturnsWholeVocabulary) {
  const std::vector<TokenStream> s = {stream({"a", "b", "c", "a"}, {0})};
  EXPECT_EQ(word_cloud_weights(build_table(s, 1), 100).size(), 3u);
}

TEST(WordCloud, SingleWord) {
  const std::vector<TokenStream> s = {stream({"reopen"}, {0})};
  const auto w = word_cloud_weights(build_table(s, 1), 5);
  ASSERT_EQ(w.size(), 1u);
  EXPECT_EQ(w[0], (std::pair<std::string, double>{"reopen", 1.0}));
}

TEST(WordCloud, RequiresUnigrams) {
  const std::vector<TokenStream> s = {stream({"a", "b"}, {0})};
  EXPECT_THROW(word_cloud_weights(build_table(s, 2), 3), InvalidN);
}

TEST(NgramExport, CsvAndJson) {
  const std::vector<TokenStream> s = {stream({"can't", "happen", "forever"}, {0}), stream({"can't", "happen"}, {0})};
  const NgramTable t = build_table(s, 2);
  std::ostringstream out;
  write_csv(out, t);
  EXPECT_EQ(out.str(), "rank,gram,count\r\n1,can't happen,2\r\n2,happen forever,1\r\n");
  std::ostringstream top;
  write_csv(top, t, 1);
  EXPECT_EQ(top.str(), "rank,gram,count\r\n1,can't happen,2\r\n");
  const auto j = to_json(t);
  EXPECT_EQ(j["total_grams"], 3);
  EXPECT_EQ(j["entries"][0]["gram"], "can't happen");
}
