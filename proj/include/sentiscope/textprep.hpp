#pragma once

#include <cstddef>
#include <filesystem>
#include <fstream>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <unordered_set>
#include <utility>
#include <vector>

#include "sentiscope/error.hpp"

namespace sentiscope {

using WordSet = std::unordered_set<std::string>;

namespace ascii {

inline bool is_alnum(char c) {
  return (c >= 'a' && c <= 'z') || (c >= 'A' && c <= 'Z') || (c >= '0' && c <= '9');
}
inline bool is_word(char c) { return is_alnum(c) || c == '_'; }
inline bool is_space(char c) {
  return c == ' ' || c == '\t' || c == '\n' || c == '\r' || c == '\f' || c == '\v';
}
inline char to_lower(char c) { return (c >= 'A' && c <= 'Z') ? char(c - 'A' + 'a') : c; }

inline std::string lower(std::string_view s) {
  std::string out(s);
  for (char& c : out) c = to_lower(c);
  return out;
}

inline bool iequals(std::string_view a, std::string_view b) {
  if (a.size() != b.size()) return false;
  for (std::size_t i = 0; i < a.size(); ++i) {
    if (to_lower(a[i]) != to_lower(b[i])) return false;
  }
  return true;
}

inline bool istarts_with(std::string_view s, std::size_t pos, std::string_view prefix) {
  return pos + prefix.size() <= s.size() && iequals(s.substr(pos, prefix.size()), prefix);
}

inline std::string_view trim(std::string_view s) {
  while (!s.empty() && is_space(s.front())) s.remove_prefix(1);
  while (!s.empty() && is_space(s.back())) s.remove_suffix(1);
  return s;
}

}  // namespace ascii

// ---------------------------------------------------------------------------
// Token streams
// ---------------------------------------------------------------------------

/// Tokens of one text plus the indices at which its sentences start.
/// Invariants: no token contains whitespace; `sentence_starts` is strictly
/// increasing and begins with 0 whenever `tokens` is non-empty.
struct TokenStream {
  std::vector<std::string> tokens;
  std::vector<std::size_t> sentence_starts;

  std::size_t sentence_count() const { return sentence_starts.size(); }

  std::span<const std::string> sentence(std::size_t i) const {
    const std::size_t begin = sentence_starts[i];
    const std::size_t end =
        i + 1 < sentence_starts.size() ? sentence_starts[i + 1] : tokens.size();
    return std::span<const std::string>(tokens).subspan(begin, end - begin);
  }

  bool operator==(const TokenStream&) const = default;
};

struct CleanOptions {
  bool strip_urls = true;
  bool strip_mentions = true;
};

namespace detail {

// Typographic single quotes become ASCII apostrophes so "can’t" survives
// as one token.
inline std::string fold_quotes(std::string_view raw) {
  std::string out;
  out.reserve(raw.size());
  for (std::size_t i = 0; i < raw.size(); ++i) {
    if (i + 2 < raw.size() && static_cast<unsigned char>(raw[i]) == 0xE2 &&
        static_cast<unsigned char>(raw[i + 1]) == 0x80 &&
        (static_cast<unsigned char>(raw[i + 2]) == 0x98 ||
         static_cast<unsigned char>(raw[i + 2]) == 0x99)) {
      out.push_back('\'');
      i += 2;
    } else {
      out.push_back(raw[i]);
    }
  }
  return out;
}

inline std::string strip_urls(std::string_view s) {
  std::string out;
  out.reserve(s.size());
  std::size_t i = 0;
  while (i < s.size()) {
    const bool at_word_start = i == 0 || !ascii::is_alnum(s[i - 1]);
    if (ascii::istarts_with(s, i, "http://") || ascii::istarts_with(s, i, "https://") ||
        (at_word_start && ascii::istarts_with(s, i, "www."))) {
      while (i < s.size() && !ascii::is_space(s[i])) ++i;
      out.push_back(' ');
      continue;
    }
    out.push_back(s[i++]);
  }
  return out;
}

inline std::string strip_mentions(std::string_view s) {
  std::string out;
  out.reserve(s.size());
  std::size_t i = 0;
  while (i < s.size()) {
    if (s[i] == '@' && (i == 0 || !ascii::is_word(s[i - 1])) && i + 1 < s.size() &&
        ascii::is_word(s[i + 1])) {
      ++i;
      while (i < s.size() && ascii::is_word(s[i])) ++i;
      out.push_back(' ');
      continue;
    }
    out.push_back(s[i++]);
  }
  return out;
}

}  // namespace detail

/// Normalises raw post text: URLs and (optionally) @mentions removed, '#'
/// dropped from hashtags, punctuation and non-ASCII bytes replaced by
/// spaces except apostrophes between two alphanumerics, lowercased,
/// whitespace collapsed. Idempotent.
inline std::string clean_text(std::string_view raw, const CleanOptions& options = {}) {
  std::string s = detail::fold_quotes(raw);
  if (options.strip_urls) s = detail::strip_urls(s);
  if (options.strip_mentions) s = detail::strip_mentions(s);

  std::string out;
  out.reserve(s.size());
  bool pending_space = false;
  for (std::size_t i = 0; i < s.size(); ++i) {
    const char c = s[i];
    char emit = 0;
    if (ascii::is_alnum(c)) {
      emit = ascii::to_lower(c);
    } else if (c == '\'' && i > 0 && i + 1 < s.size() && ascii::is_alnum(s[i - 1]) &&
               ascii::is_alnum(s[i + 1])) {
      emit = '\'';
    }
    if (emit == 0) {
      pending_space = true;
      continue;
    }
    if (pending_space && !out.empty()) out.push_back(' ');
    pending_space = false;
    out.push_back(emit);
  }
  return out;
}

namespace detail {

inline bool is_terminal(char c) { return c == '.' || c == '!' || c == '?'; }
inline bool is_closer(char c) { return c == '"' || c == '\'' || c == ')' || c == ']'; }

}  // namespace detail

/// Splits raw text into sentences at runs of '.', '!' or '?' that are
/// followed (optionally after closing quotes/brackets) by whitespace or the
/// end of the text. Text without terminal punctuation is one sentence.
inline std::vector<std::string_view> split_sentences(std::string_view raw) {
  std::vector<std::string_view> out;
  std::size_t begin = 0;
  std::size_t i = 0;
  while (i < raw.size()) {
    if (!detail::is_terminal(raw[i])) {
      ++i;
      continue;
    }
    std::size_t j = i;
    while (j < raw.size() && detail::is_terminal(raw[j])) ++j;
    while (j < raw.size() && detail::is_closer(raw[j])) ++j;
    if (j == raw.size() || ascii::is_space(raw[j])) {
      out.push_back(raw.substr(begin, j - begin));
      begin = j;
    }
    i = j;
  }
  if (begin < raw.size()) out.push_back(raw.substr(begin));
  return out;
}

/// Whitespace tokenizer. A token ending in terminal punctuation closes its
/// sentence; that punctuation is not part of the token.
inline TokenStream tokenize(std::string_view text) {
  TokenStream ts;
  bool sentence_open = false;
  std::size_t i = 0;
  while (i < text.size()) {
    while (i < text.size() && ascii::is_space(text[i])) ++i;
    const std::size_t start = i;
    while (i < text.size() && !ascii::is_space(text[i])) ++i;
    if (start == i) break;
    std::string_view tok = text.substr(start, i - start);
    bool closes = false;
    while (!tok.empty() && detail::is_terminal(tok.back())) {
      tok.remove_suffix(1);
      closes = true;
    }
    if (!tok.empty()) {
      if (!sentence_open) {
        ts.sentence_starts.push_back(ts.tokens.size());
        sentence_open = true;
      }
      ts.tokens.emplace_back(tok);
    }
    if (closes) sentence_open = false;
  }
  return ts;
}

/// Raw text to token stream: sentence segmentation on the raw text, then
/// clean_text per sentence, then whitespace tokenization.
inline TokenStream prepare_text(std::string_view raw, const CleanOptions& options = {}) {
  TokenStream ts;
  for (std::string_view sentence : split_sentences(raw)) {
    const std::string cleaned = clean_text(sentence, options);
    std::size_t i = 0;
    bool first = true;
    while (i < cleaned.size()) {
      std::size_t j = cleaned.find(' ', i);
      if (j == std::string::npos) j = cleaned.size();
      if (first) {
        ts.sentence_starts.push_back(ts.tokens.size());
        first = false;
      }
      ts.tokens.emplace_back(cleaned.substr(i, j - i));
      i = j + 1;
    }
  }
  return ts;
}

inline TokenStream remove_stopwords(const TokenStream& ts, const WordSet& stoplist) {
  if (stoplist.empty()) return ts;
  TokenStream out;
  out.tokens.reserve(ts.tokens.size());
  for (std::size_t s = 0; s < ts.sentence_count(); ++s) {
    bool first = true;
    for (const std::string& tok : ts.sentence(s)) {
      if (stoplist.contains(tok)) continue;
      if (first) {
        out.sentence_starts.push_back(out.tokens.size());
        first = false;
      }
      out.tokens.push_back(tok);
    }
  }
  return out;
}

// ---------------------------------------------------------------------------
// Abusive-word masking
// ---------------------------------------------------------------------------

inline constexpr std::string_view kMaskPrefix = "abuvs";

/// Maps each distinct abusive word to "abuvs<N>", N counting from 1 in order
/// of first appearance across a run.
class MaskLedger {
 public:
  const std::string& mask_for(const std::string& word) {
    auto it = index_.find(word);
    if (it != index_.end()) return replacements_[it->second].second;
    index_.emplace(word, replacements_.size());
    replacements_.emplace_back(word, std::string(kMaskPrefix) + std::to_string(counter_++));
    return replacements_.back().second;
  }

  const std::vector<std::pair<std::string, std::string>>& replacements() const {
    return replacements_;
  }
  std::size_t counter() const { return counter_; }
  std::size_t size() const { return replacements_.size(); }

 private:
  std::vector<std::pair<std::string, std::string>> replacements_;
  std::unordered_map<std::string, std::size_t> index_;
  std::size_t counter_ = 1;
};

/// Replaces every whole-word, case-insensitive occurrence of a lexicon entry
/// with its mask token. Words are maximal runs of [A-Za-z0-9_].
inline std::string mask_abusive(std::string_view raw, const WordSet& lexicon, MaskLedger& ledger) {
  if (lexicon.empty()) return std::string(raw);
  std::string out;
  out.reserve(raw.size());
  std::size_t i = 0;
  while (i < raw.size()) {
    if (!ascii::is_word(raw[i])) {
      out.push_back(raw[i++]);
      continue;
    }
    const std::size_t start = i;
    while (i < raw.size() && ascii::is_word(raw[i])) ++i;
    const std::string_view word = raw.substr(start, i - start);
    const std::string folded = ascii::lower(word);
    if (lexicon.contains(folded)) {
      out += ledger.mask_for(folded);
    } else {
      out += word;
    }
  }
  return out;
}

// ---------------------------------------------------------------------------
// Word-list files
// ---------------------------------------------------------------------------

/// One word per line, UTF-8. Blank lines and lines starting with '#' are
/// ignored; entries are lowercased.
inline WordSet load_word_list(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw FileNotFound(path.string());
  WordSet words;
  std::string line;
  while (std::getline(in, line)) {
    const std::string_view w = ascii::trim(line);
    if (w.empty() || w.front() == '#') continue;
    words.insert(ascii::lower(w));
  }
  return words;
}

}  // namespace sentiscope
