#pragma once

#include <algorithm>
#include <cstdint>
#include <ostream>
#include <span>
#include <string>
#include <unordered_map>
#include <utility>
#include <vector>

#include "json.hpp"
#include "sentiscope/csv.hpp"
#include "sentiscope/error.hpp"
#include "sentiscope/textprep.hpp"

namespace sentiscope {

inline constexpr int kMinNgram = 1;
inline constexpr int kMaxNgram = 4;

using Gram = std::vector<std::string>;

struct NgramEntry {
  Gram gram;
  std::uint64_t count = 0;

  bool operator==(const NgramEntry&) const = default;
};

/// Frequency table of n-token sequences, sorted by count descending with
/// ties broken by the space-joined gram in ascending byte order.
struct NgramTable {
  int n = 1;
  std::vector<NgramEntry> entries;
  std::uint64_t total_grams = 0;

  bool operator==(const NgramTable&) const = default;
};

inline void check_ngram_order(int n) {
  if (n < kMinNgram || n > kMaxNgram) {
    throw InvalidN("n-gram order must be in [1,4], got " + std::to_string(n));
  }
}

inline std::string join_gram(const Gram& g) {
  std::string out;
  for (std::size_t i = 0; i < g.size(); ++i) {
    if (i) out.push_back(' ');
    out += g[i];
  }
  return out;
}

/// Sliding window of width n inside each sentence; windows never straddle
/// a sentence boundary.
inline std::vector<Gram> extract_ngrams(const TokenStream& ts, int n) {
  check_ngram_order(n);
  std::vector<Gram> grams;
  const auto width = static_cast<std::size_t>(n);
  for (std::size_t s = 0; s < ts.sentence_count(); ++s) {
    const auto sent = ts.sentence(s);
    if (sent.size() < width) continue;
    for (std::size_t i = 0; i + width <= sent.size(); ++i) {
      grams.emplace_back(sent.begin() + i, sent.begin() + i + width);
    }
  }
  return grams;
}

/// Incremental counter; `table()` produces the ranked result. Merging two
/// counters is a plain count sum, so shards can be combined in any order.
class NgramCounter {
 public:
  explicit NgramCounter(int n) : n_(n) { check_ngram_order(n); }

  int order() const { return n_; }

  void add(const TokenStream& ts) {
    const auto width = static_cast<std::size_t>(n_);
    std::string key;
    for (std::size_t s = 0; s < ts.sentence_count(); ++s) {
      const auto sent = ts.sentence(s);
      for (std::size_t i = 0; i + width <= sent.size(); ++i) {
        key.clear();
        for (std::size_t k = 0; k < width; ++k) {
          if (k) key.push_back(' ');
          key += sent[i + k];
        }
        ++counts_[key];
        ++total_;
      }
    }
  }

  void merge(const NgramCounter& other) {
    if (other.n_ != n_) throw InvalidN("cannot merge counters of different order");
    for (const auto& [k, v] : other.counts_) counts_[k] += v;
    total_ += other.total_;
  }

  NgramTable table() const {
    std::vector<std::pair<std::string, std::uint64_t>> rows(counts_.begin(), counts_.end());
    std::sort(rows.begin(), rows.end(), [](const auto& a, const auto& b) {
      return a.second != b.second ? a.second > b.second : a.first < b.first;
    });
    NgramTable t;
    t.n = n_;
    t.total_grams = total_;
    t.entries.reserve(rows.size());
    for (auto& [key, count] : rows) {
      Gram g;
      std::size_t p = 0;
      while (true) {
        const std::size_t q = key.find(' ', p);
        g.push_back(key.substr(p, q == std::string::npos ? std::string::npos : q - p));
        if (q == std::string::npos) break;
        p = q + 1;
      }
      t.entries.push_back({std::move(g), count});
    }
    return t;
  }

 private:
  int n_;
  std::unordered_map<std::string, std::uint64_t> counts_;
  std::uint64_t total_ = 0;
};

inline NgramTable build_table(std::span<const TokenStream> streams, int n) {
  NgramCounter counter(n);
  for (const auto& ts : streams) counter.add(ts);
  return counter.table();
}

/// Top-k unigrams weighted by count / max count, heaviest first.
inline std::vector<std::pair<std::string, double>> word_cloud_weights(const NgramTable& table,
                                                                      std::size_t k) {
  if (table.n != 1) throw InvalidN("word cloud needs a unigram table, got n=" + std::to_string(table.n));
  if (k < 1) throw ConfigError("word cloud size must be at least 1");
  std::vector<std::pair<std::string, double>> out;
  if (table.entries.empty()) return out;
  const double max_count = static_cast<double>(table.entries.front().count);
  const std::size_t m = std::min(k, table.entries.size());
  out.reserve(m);
  for (std::size_t i = 0; i < m; ++i) {
    out.emplace_back(table.entries[i].gram.front(),
                     static_cast<double>(table.entries[i].count) / max_count);
  }
  return out;
}

// Export --------------------------------------------------------------------

inline void write_csv(std::ostream& out, const NgramTable& t, std::size_t top = 0) {
  csv::write_row(out, {"rank", "gram", "count"});
  const std::size_t m = top ? std::min(top, t.entries.size()) : t.entries.size();
  for (std::size_t i = 0; i < m; ++i) {
    csv::write_row(out, {std::to_string(i + 1), join_gram(t.entries[i].gram),
                         std::to_string(t.entries[i].count)});
  }
}

inline nlohmann::json to_json(const NgramTable& t, std::size_t top = 0) {
  nlohmann::json rows = nlohmann::json::array();
  const std::size_t m = top ? std::min(top, t.entries.size()) : t.entries.size();
  for (std::size_t i = 0; i < m; ++i) {
    rows.push_back({{"rank", i + 1}, {"gram", join_gram(t.entries[i].gram)}, {"count", t.entries[i].count}});
  }
  return {{"n", t.n}, {"total_grams", t.total_grams}, {"entries", rows}};
}

}  // namespace sentiscope
