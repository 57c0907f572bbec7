#pragma once

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "sentiscope/csv.hpp"
#include "sentiscope/error.hpp"
#include "sentiscope/textprep.hpp"

namespace sentiscope {

// Numeric codes follow the sentimentr valence-shifter table.
enum class ShifterKind : int { negator = 1, amplifier = 2, deamplifier = 3, adversative = 4 };

/// Polarized terms and valence shifters. A term is in at most one of the
/// two maps; polarities are finite and non-zero.
class PolarityLexicon {
 public:
  void add_term(const std::string& term, double polarity) {
    if (!std::isfinite(polarity) || polarity == 0.0) {
      throw SchemaError("polarity of '" + term + "' must be finite and non-zero");
    }
    if (shifters_.contains(term)) throw SchemaError("'" + term + "' is already a valence shifter");
    polarity_[term] = polarity;
  }

  void add_shifter(const std::string& term, ShifterKind kind) {
    if (polarity_.contains(term)) throw SchemaError("'" + term + "' is already a polarized term");
    shifters_[term] = kind;
  }

  std::optional<double> polarity(const std::string& term) const {
    auto it = polarity_.find(term);
    if (it == polarity_.end()) return std::nullopt;
    return it->second;
  }

  std::optional<ShifterKind> shifter(const std::string& term) const {
    auto it = shifters_.find(term);
    if (it == shifters_.end()) return std::nullopt;
    return it->second;
  }

  std::size_t term_count() const { return polarity_.size(); }
  std::size_t shifter_count() const { return shifters_.size(); }

 private:
  std::unordered_map<std::string, double> polarity_;
  std::unordered_map<std::string, ShifterKind> shifters_;
};

namespace detail {

// Two-column CSV rows; a first row whose first field is "term" is a header.
template <typename OnRow>
void read_two_column_csv(const std::filesystem::path& path, OnRow on_row) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw FileNotFound(path.string());
  csv::Reader reader(in);
  bool first = true;
  std::size_t lineno = 0;
  while (auto row = reader.next()) {
    ++lineno;
    if (row->fields.size() == 1 && ascii::trim(row->fields[0]).empty()) continue;
    const std::string where = path.string() + ": row " + std::to_string(lineno);
    if (!row->well_formed || row->fields.size() != 2) throw SchemaError(where + ": expected two columns");
    const std::string term = ascii::lower(ascii::trim(row->fields[0]));
    if (first && term == "term") {
      first = false;
      continue;
    }
    first = false;
    if (term.empty() || term.find(' ') != std::string::npos) {
      throw SchemaError(where + ": term must be a single word");
    }
    on_row(term, std::string(ascii::trim(row->fields[1])), where);
  }
}

inline std::optional<double> parse_double(const std::string& s) {
  if (s.empty()) return std::nullopt;
  char* end = nullptr;
  const double v = std::strtod(s.c_str(), &end);
  if (end != s.c_str() + s.size()) return std::nullopt;
  return v;
}

}  // namespace detail

/// Polarity CSV: term,score. Shifter CSV: term,kind with kind 1..4
/// (negator, amplifier, de-amplifier, adversative). The shifter path may be
/// empty.
inline PolarityLexicon load_polarity_lexicon(const std::filesystem::path& polarity_csv,
                                             const std::filesystem::path& shifter_csv = {}) {
  PolarityLexicon lex;
  detail::read_two_column_csv(polarity_csv, [&](const std::string& term, const std::string& value,
                                                const std::string& where) {
    const auto v = detail::parse_double(value);
    if (!v) throw SchemaError(where + ": score is not a number");
    lex.add_term(term, *v);
  });
  if (shifter_csv.empty()) return lex;
  detail::read_two_column_csv(shifter_csv, [&](const std::string& term, const std::string& value,
                                               const std::string& where) {
    if (value.size() != 1 || value[0] < '1' || value[0] > '4') {
      throw SchemaError(where + ": shifter kind must be 1, 2, 3 or 4");
    }
    lex.add_shifter(term, static_cast<ShifterKind>(value[0] - '0'));
  });
  return lex;
}

struct ScoringParams {
  std::size_t window_before = 4;
  std::size_t window_after = 2;
  double amplifier_weight = 0.8;
  double adversative_weight = 0.85;

  /// Windows in [0,50], amplifier weight in [0,2], adversative weight in
  /// [0,4] (keeps the post-adversative factor non-negative).
  void validate() const {
    if (window_before > 50 || window_after > 50) throw ConfigError("scoring windows must be in [0,50]");
    if (!(amplifier_weight >= 0.0 && amplifier_weight <= 2.0)) {
      throw ConfigError("amplifier_weight must be in [0,2]");
    }
    if (!(adversative_weight >= 0.0 && adversative_weight <= 4.0)) {
      throw ConfigError("adversative_weight must be in [0,4]");
    }
  }
};

/// Signed score of one sentence.
///
/// Every polarized token p at position i looks at the cluster
/// [i - window_before, i + window_after] clipped to the sentence. With c
/// negators, A amplifiers and D de-amplifiers in the cluster (amplifiers
/// count as de-amplifiers when c is odd), its contribution is
///
///   (1 + z*A + max(-1, -z*D)) * p * (-1)^c
///
/// scaled by (1 + 0.25*adversative_weight) if an adversative precedes it in
/// the cluster and by (1 - 0.25*adversative_weight) if one follows it. The
/// sentence score is the sum of contributions over sqrt(sentence length).
inline double score_sentence(std::span<const std::string> tokens, const PolarityLexicon& lex,
                             const ScoringParams& params = {}) {
  const std::size_t len = tokens.size();
  if (len == 0) return 0.0;

  std::vector<std::optional<ShifterKind>> kinds(len);
  for (std::size_t j = 0; j < len; ++j) kinds[j] = lex.shifter(tokens[j]);

  const double z = params.amplifier_weight;
  const double adv = 0.25 * params.adversative_weight;
  double sum = 0.0;
  for (std::size_t i = 0; i < len; ++i) {
    const auto p = lex.polarity(tokens[i]);
    if (!p) continue;
    const std::size_t lo = i >= params.window_before ? i - params.window_before : 0;
    const std::size_t hi = std::min(len - 1, i + params.window_after);

    int negators = 0, amplifiers = 0, deamplifiers = 0;
    bool adversative_before = false, adversative_after = false;
    for (std::size_t j = lo; j <= hi; ++j) {
      if (j == i || !kinds[j]) continue;
      switch (*kinds[j]) {
        case ShifterKind::negator: ++negators; break;
        case ShifterKind::amplifier: ++amplifiers; break;
        case ShifterKind::deamplifier: ++deamplifiers; break;
        case ShifterKind::adversative: (j < i ? adversative_before : adversative_after) = true; break;
      }
    }
    const bool flipped = negators % 2 == 1;
    if (flipped) {
      deamplifiers += amplifiers;
      amplifiers = 0;
    }
    const double amp = z * amplifiers;
    const double deamp = std::max(-1.0, -z * deamplifiers);
    double w = (1.0 + amp + deamp) * *p * (flipped ? -1.0 : 1.0);
    if (adversative_before) w *= 1.0 + adv;
    if (adversative_after) w *= 1.0 - adv;
    sum += w;
  }
  return sum / std::sqrt(static_cast<double>(len));
}

struct PolarityScore {
  double value = 0.0;
  std::size_t n_sentences = 0;
  std::vector<double> per_sentence;

  bool operator==(const PolarityScore&) const = default;
};

/// Sum of sentence scores; may leave [-1, 1].
inline PolarityScore score_text(const TokenStream& ts, const PolarityLexicon& lex,
                                const ScoringParams& params = {}) {
  PolarityScore s;
  s.n_sentences = ts.sentence_count();
  s.per_sentence.reserve(s.n_sentences);
  for (std::size_t i = 0; i < s.n_sentences; ++i) {
    s.per_sentence.push_back(score_sentence(ts.sentence(i), lex, params));
    s.value += s.per_sentence.back();
  }
  return s;
}

enum class Polarity { positive, negative, neutral };

inline std::string_view to_string(Polarity p) {
  switch (p) {
    case Polarity::positive: return "positive";
    case Polarity::negative: return "negative";
    case Polarity::neutral: return "neutral";
  }
  return "?";
}

/// Exactly zero is neutral; there is no tolerance band.
inline Polarity classify_polarity(double value) {
  if (value > 0.0) return Polarity::positive;
  if (value < 0.0) return Polarity::negative;
  return Polarity::neutral;
}

inline Polarity classify_polarity(const PolarityScore& s) { return classify_polarity(s.value); }

struct Extremes {
  std::size_t min_index = 0;
  double min_value = 0.0;
  std::size_t max_index = 0;
  double max_value = 0.0;
};

/// Most negative and most positive scores; ties go to the first occurrence.
inline Extremes extremes(std::span<const PolarityScore> scores) {
  if (scores.empty()) throw EmptyInput("extremes of an empty score list");
  Extremes e{0, scores[0].value, 0, scores[0].value};
  for (std::size_t i = 1; i < scores.size(); ++i) {
    if (scores[i].value < e.min_value) e = {i, scores[i].value, e.max_index, e.max_value};
    if (scores[i].value > e.max_value) e = {e.min_index, e.min_value, i, scores[i].value};
  }
  return e;
}

}  // namespace sentiscope
