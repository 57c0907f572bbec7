#pragma once

#include <algorithm>
#include <array>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <utility>
#include <vector>

#include "json.hpp"
#include "sentiscope/error.hpp"
#include "sentiscope/textprep.hpp"

namespace sentiscope {

/// NRC category order. The first eight are the emotion classes; the last
/// two are the valence sums.
enum class Emotion : std::uint8_t {
  anger,
  anticipation,
  disgust,
  fear,
  joy,
  sadness,
  surprise,
  trust,
  negative,
  positive,
};

inline constexpr std::size_t kCategoryCount = 10;
inline constexpr std::size_t kEmotionClassCount = 8;

inline constexpr std::array<std::string_view, kCategoryCount> kCategoryNames = {
    "anger", "anticipation", "disgust", "fear",     "joy",
    "sadness", "surprise",   "trust",   "negative", "positive"};

inline std::string_view to_string(Emotion e) { return kCategoryNames[static_cast<std::size_t>(e)]; }

inline std::optional<Emotion> parse_emotion(std::string_view name) {
  for (std::size_t i = 0; i < kCategoryCount; ++i) {
    if (kCategoryNames[i] == name) return static_cast<Emotion>(i);
  }
  return std::nullopt;
}

using CategoryMask = std::uint16_t;

inline constexpr CategoryMask bit(Emotion e) {
  return static_cast<CategoryMask>(1u << static_cast<unsigned>(e));
}

class EmotionLexicon {
 public:
  void add(std::string term, Emotion category) { entries_[std::move(term)] |= bit(category); }

  /// Category bits of `term`, 0 when absent.
  CategoryMask lookup(const std::string& term) const {
    auto it = entries_.find(term);
    return it == entries_.end() ? CategoryMask{0} : it->second;
  }

  bool contains(const std::string& term) const { return entries_.contains(term); }
  std::size_t size() const { return entries_.size(); }
  const std::unordered_map<std::string, CategoryMask>& entries() const { return entries_; }

 private:
  std::unordered_map<std::string, CategoryMask> entries_;
};

/// Reads an NRC-layout TSV: term <TAB> category <TAB> 0|1. Only flag=1 rows
/// create membership, so terms whose rows are all 0 are absent. Lines
/// starting with '#' are comments.
inline EmotionLexicon load_emotion_lexicon(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw FileNotFound(path.string());
  EmotionLexicon lex;
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (ascii::trim(line).empty() || line.front() == '#') continue;
    const std::size_t t1 = line.find('\t');
    const std::size_t t2 = t1 == std::string::npos ? t1 : line.find('\t', t1 + 1);
    const auto where = [&] { return path.string() + ":" + std::to_string(lineno); };
    if (t2 == std::string::npos) throw SchemaError(where() + ": expected three tab-separated columns");
    const std::string term = ascii::lower(ascii::trim(std::string_view(line).substr(0, t1)));
    const std::string_view cat = ascii::trim(std::string_view(line).substr(t1 + 1, t2 - t1 - 1));
    const std::string_view flag = ascii::trim(std::string_view(line).substr(t2 + 1));
    if (term.empty() || term.find(' ') != std::string::npos) {
      throw SchemaError(where() + ": term must be a single word");
    }
    const auto category = parse_emotion(ascii::lower(cat));
    if (!category) throw SchemaError(where() + ": unknown category '" + std::string(cat) + "'");
    if (flag == "1") {
      lex.add(term, *category);
    } else if (flag != "0") {
      throw SchemaError(where() + ": flag must be 0 or 1");
    }
  }
  return lex;
}

/// Unit-sum counts over the ten NRC categories for one text or an
/// aggregate of texts.
struct EmotionProfile {
  std::array<std::uint64_t, kCategoryCount> counts{};
  std::uint64_t token_total = 0;

  std::uint64_t operator[](Emotion e) const { return counts[static_cast<std::size_t>(e)]; }
  std::uint64_t& operator[](Emotion e) { return counts[static_cast<std::size_t>(e)]; }

  std::uint64_t emotion_hits() const {
    std::uint64_t n = 0;
    for (std::size_t i = 0; i < kEmotionClassCount; ++i) n += counts[i];
    return n;
  }

  EmotionProfile& operator+=(const EmotionProfile& o) {
    for (std::size_t i = 0; i < kCategoryCount; ++i) counts[i] += o.counts[i];
    token_total += o.token_total;
    return *this;
  }

  bool operator==(const EmotionProfile&) const = default;
};

inline EmotionProfile operator+(EmotionProfile a, const EmotionProfile& b) { return a += b; }

/// Each token occurrence found in the lexicon adds 1 to every category the
/// term carries. Sentence boundaries play no part.
inline EmotionProfile classify(const TokenStream& ts, const EmotionLexicon& lex) {
  EmotionProfile p;
  p.token_total = ts.tokens.size();
  for (const auto& tok : ts.tokens) {
    const CategoryMask mask = lex.lookup(tok);
    if (!mask) continue;
    for (std::size_t c = 0; c < kCategoryCount; ++c) {
      if (mask & (1u << c)) ++p.counts[c];
    }
  }
  return p;
}

inline EmotionProfile aggregate_profiles(std::span<const EmotionProfile> profiles) {
  EmotionProfile total;
  for (const auto& p : profiles) total += p;
  return total;
}

/// Top-k of the eight emotion classes (valence sums excluded). Equal counts
/// keep category order.
inline std::vector<std::pair<Emotion, std::uint64_t>> dominant_classes(const EmotionProfile& p,
                                                                        std::size_t k) {
  if (k < 1 || k > kCategoryCount) throw ConfigError("k must be in [1,10]");
  std::vector<std::pair<Emotion, std::uint64_t>> classes;
  for (std::size_t i = 0; i < kEmotionClassCount; ++i) {
    classes.emplace_back(static_cast<Emotion>(i), p.counts[i]);
  }
  std::stable_sort(classes.begin(), classes.end(),
                   [](const auto& a, const auto& b) { return a.second > b.second; });
  classes.resize(std::min(k, classes.size()));
  return classes;
}

inline nlohmann::json to_json(const EmotionProfile& p) {
  nlohmann::json counts = nlohmann::json::object();
  for (std::size_t i = 0; i < kCategoryCount; ++i) counts[std::string(kCategoryNames[i])] = p.counts[i];
  return {{"counts", counts}, {"token_total", p.token_total}};
}

inline EmotionProfile profile_from_json(const nlohmann::json& j) {
  EmotionProfile p;
  const auto& counts = j.at("counts");
  for (std::size_t i = 0; i < kCategoryCount; ++i) {
    p.counts[i] = counts.value(std::string(kCategoryNames[i]), std::uint64_t{0});
  }
  p.token_total = j.value("token_total", std::uint64_t{0});
  return p;
}

}  // namespace sentiscope
