#include <gtest/gtest.h>

#include <cmath>
#include <filesystem>
#include <fstream>
#include <random>

#include "oracles.hpp"
#include "sentiscope/polarity.hpp"

using namespace sentiscope;
namespace fs = std::filesystem;

namespace {

using Tokens = std::vector<std::string>;

PolarityLexicon small_lexicon() {
  PolarityLexicon lex;
  lex.add_term("good", 1.0);
  lex.add_term("bad", -1.0);
  lex.add_term("hope", 0.5);
  lex.add_shifter("not", ShifterKind::negator);
  lex.add_shifter("never", ShifterKind::negator);
  lex.add_shifter("really", ShifterKind::amplifier);
  lex.add_shifter("very", ShifterKind::amplifier);
  lex.add_shifter("barely", ShifterKind::deamplifier);
  lex.add_shifter("but", ShifterKind::adversative);
  return lex;
}

double score(const Tokens& t, const PolarityLexicon& lex, const ScoringParams& p = {}) {
  return score_sentence(t, lex, p);
}

// Random lexicon shared between the library and the oracle.
struct RandomWorld {
  PolarityLexicon lex;
  oracle::PolarityLex ref;
  std::vector<std::string> vocab;

  explicit RandomWorld(std::mt19937_64& rng) {
    for (int i = 0; i < 20; ++i) {
      const std::string w = "p" + std::to_string(i);
      double v = static_cast<double>(rng() % 2001) / 1000.0 - 1.0;
      if (v == 0.0) v = 0.25;
      lex.add_term(w, v);
      ref.polarity[w] = v;
      vocab.push_back(w);
    }
    for (int i = 0; i < 16; ++i) {
      const std::string w = "s" + std::to_string(i);
      const int kind = 1 + i % 4;
      lex.add_shifter(w, static_cast<ShifterKind>(kind));
      ref.shifter[w] = kind;
      vocab.push_back(w);
    }
    for (int i = 0; i < 20; ++i) vocab.push_back("n" + std::to_string(i));
  }

  Tokens sentence(std::mt19937_64& rng, std::size_t max_len = 30) const {
    Tokens t(rng() % (max_len + 1));
    for (auto& w : t) w = vocab[rng() % vocab.size()];
    return t;
  }
};

}  // namespace

TEST(ScoreSentence, HandTraces) {
  const PolarityLexicon lex = small_lexicon();
  EXPECT_DOUBLE_EQ(score({"good"}, lex), 1.0);
  EXPECT_NEAR(score({"not", "good"}, lex), -0.7071, 5e-5);
  EXPECT_NEAR(score({"really", "good"}, lex), 1.2728, 5e-5);
  EXPECT_EQ(score({}, lex), 0.0);
  EXPECT_DOUBLE_EQ(score({"not", "good"}, lex), -1.0 / std::sqrt(2.0));
  EXPECT_DOUBLE_EQ(score({"really", "good"}, lex), 1.8 / std::sqrt(2.0));
}

TEST(ScoreSentence, OddNegationDemotesAmplifiers) {
  const PolarityLexicon lex = small_lexicon();
  // c = 1 turns "really" into a de-amplifier: (1 - 0.8) * 1 * -1.
  EXPECT_DOUBLE_EQ(score({"not", "really", "good"}, lex), -0.2 / std::sqrt(3.0));
  // c = 2 keeps it an amplifier.
  EXPECT_DOUBLE_EQ(score({"not", "never", "really", "good"}, lex), 1.8 / 2.0);
}

TEST(ScoreSentence, DeamplificationFloorsAtMinusOne) {
  const PolarityLexicon lex = small_lexicon();
  EXPECT_DOUBLE_EQ(score({"barely", "good"}, lex), 0.2 / std::sqrt(2.0));
  EXPECT_DOUBLE_EQ(score({"barely", "barely", "good"}, lex), 0.0);
}

TEST(ScoreSentence, AdversativeBeforeAndAfter) {
  const PolarityLexicon lex = small_lexicon();
  const double up = 1.0 + 0.25 * 0.85, down = 1.0 - 0.25 * 0.85;
  EXPECT_DOUBLE_EQ(score({"but", "good"}, lex), up / std::sqrt(2.0));
  EXPECT_DOUBLE_EQ(score({"good", "but"}, lex), down / std::sqrt(2.0));
  EXPECT_DOUBLE_EQ(score({"but", "good", "but"}, lex), up * down / std::sqrt(3.0));
}

TEST(ScoreSentence, WindowIsFourBeforeTwoAfter) {
  const PolarityLexicon lex = small_lexicon();
  EXPECT_DOUBLE_EQ(score({"not", "x", "x", "x", "good"}, lex), -1.0 / std::sqrt(5.0));
  EXPECT_DOUBLE_EQ(score({"not", "x", "x", "x", "x", "good"}, lex), 1.0 / std::sqrt(6.0));
  EXPECT_DOUBLE_EQ(score({"good", "x", "not"}, lex), -1.0 / std::sqrt(3.0));
  EXPECT_DOUBLE_EQ(score({"good", "x", "x", "not"}, lex), 1.0 / 2.0);
  ScoringParams wide;
  wide.window_before = 10;
  EXPECT_DOUBLE_EQ(score({"not", "x", "x", "x", "x", "good"}, lex, wide), -1.0 / std::sqrt(6.0));
}

TEST(ScoreSentence, ShiftersAreSharedByNeighbouringPolarWords) {
  const PolarityLexicon lex = small_lexicon();
  // Both "good" and "bad" see the negator.
  EXPECT_DOUBLE_EQ(score({"not", "good", "bad"}, lex), (-1.0 + 1.0) / std::sqrt(3.0));
  EXPECT_DOUBLE_EQ(score({"not", "good", "hope"}, lex), (-1.0 - 0.5) / std::sqrt(3.0));
}

TEST(ScoreSentence, NeutralTokensOnlyRenormalise) {
  const PolarityLexicon lex = small_lexicon();
  EXPECT_EQ(score({"reopen", "the", "state"}, lex), 0.0);
  EXPECT_DOUBLE_EQ(score({"good", "reopen"}, lex) * std::sqrt(2.0), score({"good"}, lex));
}

TEST(ScoreSentence, NegationFlipAndDoubleNegationOnGeneratedSuite) {
  const PolarityLexicon lex = small_lexicon();
  const std::vector<std::string> fillers = {"reopen", "the", "state", "now", "people", "x", "y", "z"};
  const std::vector<std::string> polar = {"good", "bad", "hope"};
  std::mt19937_64 rng(2020);
  for (int k = 0; k < 200; ++k) {
    Tokens base(1 + rng() % 12);
    for (auto& w : base) w = fillers[rng() % fillers.size()];
    const std::size_t pos = rng() % base.size();
    base[pos] = polar[rng() % polar.size()];
    const double s0 = score(base, lex);
    const double len = static_cast<double>(base.size());
    ASSERT_NE(s0, 0.0);

    Tokens once = base;
    once.insert(once.begin() + static_cast<long>(pos), "not");
    const double s1 = score(once, lex);
    EXPECT_EQ(std::signbit(s1), !std::signbit(s0));
    EXPECT_DOUBLE_EQ(s1, -s0 * std::sqrt(len) / std::sqrt(len + 1.0));

    Tokens twice = once;
    twice.insert(twice.begin() + static_cast<long>(pos), "never");
    const double s2 = score(twice, lex);
    EXPECT_EQ(std::signbit(s2), std::signbit(s0));
    EXPECT_DOUBLE_EQ(s2, s0 * std::sqrt(len) / std::sqrt(len + 2.0));
  }
}

TEST(ScoreSentence, AppendingPositiveWordNeverLowersNumerator) {
  const PolarityLexicon lex = small_lexicon();
  std::mt19937_64 rng(5);
  const std::vector<std::string> vocab = {"good", "bad", "hope", "x", "y", "reopen"};
  for (int k = 0; k < 300; ++k) {
    Tokens t(rng() % 10);
    for (auto& w : t) w = vocab[rng() % vocab.size()];
    const double before = score(t, lex) * std::sqrt(static_cast<double>(t.size()));
    t.insert(t.end(), {"x", "x", "x", "x", "good"});
    const double after = score(t, lex) * std::sqrt(static_cast<double>(t.size()));
    EXPECT_GE(after, before - 1e-12);
  }
}

TEST(ScoreSentence, MatchesFormulaOracleOnRandomSentences) {
  std::mt19937_64 rng(77);
  const RandomWorld world(rng);
  double worst = 0.0;
  for (int k = 0; k < 1000; ++k) {
    const Tokens t = world.sentence(rng);
    worst = std::max(worst, std::abs(score_sentence(t, world.lex) - oracle::sentence_score(t, world.ref)));
  }
  EXPECT_LT(worst, 1e-12);
}

TEST(ScoreSentence, MatchesFormulaOracleWithRandomParameters) {
  std::mt19937_64 rng(78);
  const RandomWorld world(rng);
  for (int k = 0; k < 500; ++k) {
    ScoringParams p;
    p.window_before = rng() % 8;
    p.window_after = rng() % 8;
    p.amplifier_weight = static_cast<double>(rng() % 200) / 100.0;
    p.adversative_weight = static_cast<double>(rng() % 400) / 100.0;
    const Tokens t = world.sentence(rng);
    const double expected = oracle::sentence_score(t, world.ref, static_cast<long>(p.window_before),
                                                   static_cast<long>(p.window_after), p.amplifier_weight,
                                                   p.adversative_weight);
    EXPECT_NEAR(score_sentence(t, world.lex, p), expected, 1e-12);
  }
}

TEST(ScoreText, SumsSentenceScores) {
  PolarityLexicon lex;
  lex.add_term("great", 0.9);
  lex.add_term("fine", 0.8);
  TokenStream ts{{"great", "fine"}, {0, 1}};
  const PolarityScore s = score_text(ts, lex);
  EXPECT_EQ(s.n_sentences, 2u);
  EXPECT_EQ(s.per_sentence, (std::vector<double>{0.9, 0.8}));
  EXPECT_DOUBLE_EQ(s.value, 1.7);
  EXPECT_GT(s.value, 1.0);
}

TEST(ScoreText, SingleSentenceAndNeutralText) {
  const PolarityLexicon lex = small_lexicon();
  EXPECT_DOUBLE_EQ(score_text(TokenStream{{"not", "good"}, {0}}, lex).value, -1.0 / std::sqrt(2.0));
  EXPECT_EQ(score_text(TokenStream{{"reopen", "now"}, {0}}, lex).value, 0.0);
  EXPECT_EQ(score_text(TokenStream{}, lex).value, 0.0);
}

TEST(ScoreText, SentenceBoundaryClipsWindow) {
  const PolarityLexicon lex = small_lexicon();
  const PolarityScore s = score_text(prepare_text("Not now. Good."), lex);
  EXPECT_EQ(s.per_sentence, (std::vector<double>{0.0, 1.0}));
}

TEST(ClassifyPolarity, ZeroIsNeutral) {
  EXPECT_EQ(classify_polarity(0.5), Polarity::positive);
  EXPECT_EQ(classify_polarity(-0.1), Polarity::negative);
  EXPECT_EQ(classify_polarity(0.0), Polarity::neutral);
  EXPECT_EQ(classify_polarity(-0.0), Polarity::neutral);
  EXPECT_EQ(classify_polarity(1e-300), Polarity::positive);
}

TEST(Extremes, MinAndMax) {
  const std::vector<PolarityScore> s = {{-1.5, 1, {}}, {0.2, 1, {}}, {1.3, 1, {}}};
  const Extremes e = extremes(s);
  EXPECT_EQ(e.min_value, -1.5);
  EXPECT_EQ(e.max_value, 1.3);
  EXPECT_EQ(e.min_index, 0u);
  EXPECT_EQ(e.max_index, 2u);
}

TEST(Extremes, SingleElementIsBoth) {
  const std::vector<PolarityScore> s = {{0.4, 1, {}}};
  const Extremes e = extremes(s);
  EXPECT_EQ(e.min_index, 0u);
  EXPECT_EQ(e.max_index, 0u);
  EXPECT_EQ(e.min_value, 0.4);
  EXPECT_EQ(e.max_value, 0.4);
}

TEST(Extremes, TiesGoToFirstAndMatchLinearScan) {
  std::mt19937_64 rng(500);
  std::vector<PolarityScore> s(500);
  for (auto& x : s) x.value = static_cast<double>(static_cast<long>(rng() % 41) - 20) / 10.0;
  std::size_t lo = 0, hi = 0;
  for (std::size_t i = 0; i < s.size(); ++i) {
    if (s[i].value < s[lo].value) lo = i;
    if (s[i].value > s[hi].value) hi = i;
  }
  const Extremes e = extremes(s);
  EXPECT_EQ(e.min_index, lo);
  EXPECT_EQ(e.max_index, hi);
  EXPECT_THROW(extremes({}), EmptyInput);
}

TEST(PolarityLexiconFile, LoadsBundledTables) {
  const fs::path data = SENTISCOPE_DATA_DIR;
  const PolarityLexicon lex = load_polarity_lexicon(data / "polarity.csv", data / "shifters.csv");
  EXPECT_GE(lex.term_count(), 100u);
  EXPECT_EQ(lex.shifter_count(), 48u);
  EXPECT_EQ(lex.shifter("not"), ShifterKind::negator);
  EXPECT_EQ(lex.shifter("but"), ShifterKind::adversative);
  EXPECT_GT(*lex.polarity("good"), 0.0);
}

TEST(PolarityLexiconFile, RejectsInvalidEntries) {
  const auto tmp = [](const std::string& name, const std::string& body) {
    const fs::path p = fs::temp_directory_path() / ("sentiscope_polarity_" + name);
    std::ofstream(p) << body;
    return p;
  };
  EXPECT_THROW(load_polarity_lexicon(tmp("a.csv", "term,score\ngood,0\n")), SchemaError);
  EXPECT_THROW(load_polarity_lexicon(tmp("b.csv", "good,abc\n")), SchemaError);
  EXPECT_THROW(load_polarity_lexicon(tmp("c.csv", "good,1\n"), tmp("c_s.csv", "good,1\n")), SchemaError);
  EXPECT_THROW(load_polarity_lexicon(tmp("d.csv", "good,1\n"), tmp("d_s.csv", "not,7\n")), SchemaError);
  EXPECT_THROW(load_polarity_lexicon("/nonexistent.csv"), FileNotFound);
  PolarityLexicon lex;
  EXPECT_THROW(lex.add_term("x", std::nan("")), SchemaError);
}

TEST(ScoringParams, RangesAreValidated) {
  ScoringParams p;
  EXPECT_NO_THROW(p.validate());
  p.window_before = 51;
  EXPECT_THROW(p.validate(), ConfigError);
  p = {};
  p.amplifier_weight = -0.1;
  EXPECT_THROW(p.validate(), ConfigError);
  p = {};
  p.adversative_weight = 4.5;
  EXPECT_THROW(p.validate(), ConfigError);
}
