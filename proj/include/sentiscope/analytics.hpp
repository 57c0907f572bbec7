#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdint>
#include <map>
#include <ostream>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <unordered_map>
#include <utility>
#include <vector>

#include "json.hpp"
#include "sentiscope/corpus.hpp"
#include "sentiscope/csv.hpp"
#include "sentiscope/emotion.hpp"
#include "sentiscope/error.hpp"
#include "sentiscope/polarity.hpp"
#include "sentiscope/textprep.hpp"
#include "sentiscope/timestamp.hpp"

namespace sentiscope {

// ---------------------------------------------------------------------------
// Rankings
// ---------------------------------------------------------------------------

struct RankedRow {
  std::string key;
  std::uint64_t count = 0;
  std::size_t rank = 0;

  bool operator==(const RankedRow&) const = default;
};

/// Ranks are 1..|rows|; counts are non-increasing and equal counts are
/// ordered by key.
struct RankedTable {
  std::string label;
  std::vector<RankedRow> rows;

  bool operator==(const RankedTable&) const = default;
};

inline RankedTable rank_counts(std::string label,
                               const std::unordered_map<std::string, std::uint64_t>& counts,
                               std::size_t k) {
  if (k < 1) throw ConfigError("top-k must be at least 1");
  std::vector<std::pair<std::string, std::uint64_t>> rows(counts.begin(), counts.end());
  std::sort(rows.begin(), rows.end(), [](const auto& a, const auto& b) {
    return a.second != b.second ? a.second > b.second : a.first < b.first;
  });
  RankedTable t{std::move(label), {}};
  const std::size_t m = std::min(k, rows.size());
  for (std::size_t i = 0; i < m; ++i) t.rows.push_back({rows[i].first, rows[i].second, i + 1});
  return t;
}

inline RankedTable rank_mentions(const Corpus& c, std::size_t k) {
  std::unordered_map<std::string, std::uint64_t> counts;
  for (const auto& r : c.records) {
    for (const auto& m : r.mentions) ++counts[m];
  }
  return rank_counts("mentions", counts, k);
}

inline RankedTable rank_hashtags(const Corpus& c, std::size_t k) {
  std::unordered_map<std::string, std::uint64_t> counts;
  for (const auto& r : c.records) {
    for (const auto& h : r.hashtags) ++counts[h];
  }
  return rank_counts("hashtags", counts, k);
}

/// `stated` is the free-text user location; `tagged` is the country tag.
enum class LocationField { tagged, stated };

/// Values are ranked verbatim, with no canonicalisation.
inline RankedTable rank_locations(const Corpus& c, std::size_t k, LocationField field) {
  std::unordered_map<std::string, std::uint64_t> counts;
  for (const auto& r : c.records) {
    const auto& v = field == LocationField::stated ? r.user_location : r.country_code;
    if (v) ++counts[*v];
  }
  return rank_counts(field == LocationField::stated ? "locations_stated" : "locations_tagged", counts, k);
}

// ---------------------------------------------------------------------------
// Device groups
// ---------------------------------------------------------------------------

inline constexpr std::string_view kIphone = "Twitter for iPhone";
inline constexpr std::string_view kAndroid = "Twitter for Android";

struct KeywordCategory {
  std::string name;
  std::vector<std::string> keywords;
};

inline std::vector<KeywordCategory> default_device_categories() {
  return {
      {"reopen", {"reopen"}},
      {"business", {"business", "store", "shop", "restaurant"}},
      {"time", {"time", "now", "soon", "today", "week"}},
      {"work", {"work", "job"}},
      {"trump", {"trump", "realdonaldtrump"}},
      {"politics", {"politic", "governor", "democrat", "republican", "president", "vote"}},
      {"covid", {"covid", "coronavirus", "virus", "pandemic"}},
      {"economy", {"economy", "economic"}},
      {"abusive", {std::string(kMaskPrefix)}},
  };
}

struct CategoryRatio {
  std::string name;
  std::uint64_t matched = 0;
  double ratio = 0.0;
};

struct DeviceGroup {
  std::string device;
  std::uint64_t n_records = 0;
  std::vector<CategoryRatio> categories;
};

/// One group per device class (iPhone, Android); other clients are left out.
struct DeviceGroupReport {
  std::vector<DeviceGroup> groups;
};

/// True when some token of `cleaned` starts with `keyword`.
inline bool contains_keyword_prefix(std::string_view cleaned, std::string_view keyword) {
  std::size_t pos = 0;
  while ((pos = cleaned.find(keyword, pos)) != std::string_view::npos) {
    if (pos == 0 || cleaned[pos - 1] == ' ') return true;
    ++pos;
  }
  return false;
}

/// Within-group share of records whose cleaned text has a token beginning
/// with any keyword of the category.
inline DeviceGroupReport device_group_report(const Corpus& c,
                                             const std::vector<KeywordCategory>& categories) {
  if (categories.empty()) throw ConfigError("at least one keyword category is required");
  for (const auto& cat : categories) {
    for (const auto& kw : cat.keywords) {
      if (kw.empty() || kw != ascii::lower(kw) || kw.find(' ') != std::string::npos) {
        throw ConfigError("keyword '" + kw + "' must be a non-empty lowercase word");
      }
    }
  }
  DeviceGroupReport report;
  for (std::string_view device : {kIphone, kAndroid}) {
    DeviceGroup g{std::string(device), 0, {}};
    for (const auto& cat : categories) g.categories.push_back({cat.name, 0, 0.0});
    report.groups.push_back(std::move(g));
  }
  for (const auto& r : c.records) {
    DeviceGroup* g = r.source_device == kIphone    ? &report.groups[0]
                     : r.source_device == kAndroid ? &report.groups[1]
                                                   : nullptr;
    if (!g) continue;
    ++g->n_records;
    const std::string cleaned = clean_text(r.text);
    for (std::size_t i = 0; i < categories.size(); ++i) {
      const auto& kws = categories[i].keywords;
      if (std::any_of(kws.begin(), kws.end(),
                      [&](const std::string& kw) { return contains_keyword_prefix(cleaned, kw); })) {
        ++g->categories[i].matched;
      }
    }
  }
  for (auto& g : report.groups) {
    for (auto& cat : g.categories) {
      cat.ratio = g.n_records ? static_cast<double>(cat.matched) / static_cast<double>(g.n_records) : 0.0;
    }
  }
  return report;
}

// ---------------------------------------------------------------------------
// Daily emotion series
// ---------------------------------------------------------------------------

/// Per UTC day, the share of each emotion class among that day's emotion
/// hits. Days with no hits hold zeros.
struct DailySeries {
  std::vector<Date> days;
  std::vector<std::array<std::uint64_t, kEmotionClassCount>> counts;  // aligned to days
  std::array<std::vector<double>, kEmotionClassCount> values;         // [class][day]
};

inline DailySeries daily_emotion_series(const Corpus& c, std::span<const EmotionProfile> profiles) {
  if (profiles.size() != c.records.size()) {
    throw std::invalid_argument("daily_emotion_series: profiles must align with records");
  }
  std::map<Date, std::array<std::uint64_t, kEmotionClassCount>> by_day;
  for (std::size_t i = 0; i < profiles.size(); ++i) {
    auto& day = by_day[utc_date(c.records[i].created_at)];
    for (std::size_t k = 0; k < kEmotionClassCount; ++k) day[k] += profiles[i].counts[k];
  }
  DailySeries s;
  for (const auto& [day, counts] : by_day) {
    s.days.push_back(day);
    s.counts.push_back(counts);
    std::uint64_t total = 0;
    for (auto v : counts) total += v;
    for (std::size_t k = 0; k < kEmotionClassCount; ++k) {
      s.values[k].push_back(total ? static_cast<double>(counts[k]) / static_cast<double>(total) : 0.0);
    }
  }
  return s;
}

// ---------------------------------------------------------------------------
// Polarity distribution
// ---------------------------------------------------------------------------

inline constexpr double kHistogramBinWidth = 0.25;

struct Histogram {
  double lo = 0.0;
  double bin_width = kHistogramBinWidth;
  std::vector<std::uint64_t> counts;

  double bin_start(std::size_t i) const { return lo + bin_width * static_cast<double>(i); }
};

struct PolarityDistribution {
  std::uint64_t n_positive = 0, n_negative = 0, n_neutral = 0;
  double pos_share = 0.0, neg_share = 0.0, neu_share = 0.0;
  Histogram histogram;
};

/// Shares per classify_polarity and a histogram with 0.25-wide bins over
/// [floor(min), ceil(max)]; the last bin is closed on the right.
inline PolarityDistribution polarity_distribution(std::span<const PolarityScore> scores) {
  if (scores.empty()) throw EmptyInput("polarity distribution of an empty score list");
  PolarityDistribution d;
  double lo = scores[0].value, hi = scores[0].value;
  for (const auto& s : scores) {
    switch (classify_polarity(s)) {
      case Polarity::positive: ++d.n_positive; break;
      case Polarity::negative: ++d.n_negative; break;
      case Polarity::neutral: ++d.n_neutral; break;
    }
    lo = std::min(lo, s.value);
    hi = std::max(hi, s.value);
  }
  const double n = static_cast<double>(scores.size());
  d.pos_share = static_cast<double>(d.n_positive) / n;
  d.neg_share = static_cast<double>(d.n_negative) / n;
  d.neu_share = static_cast<double>(d.n_neutral) / n;

  d.histogram.lo = std::floor(lo);
  const double span = std::ceil(hi) - d.histogram.lo;
  const auto bins = std::max<std::size_t>(1, static_cast<std::size_t>(std::llround(span / kHistogramBinWidth)));
  d.histogram.counts.assign(bins, 0);
  for (const auto& s : scores) {
    const auto idx = static_cast<std::size_t>(std::floor((s.value - d.histogram.lo) / kHistogramBinWidth));
    ++d.histogram.counts[std::min(idx, bins - 1)];
  }
  return d;
}

// ---------------------------------------------------------------------------
// Export
// ---------------------------------------------------------------------------

inline void write_csv(std::ostream& out, const RankedTable& t) {
  csv::write_row(out, {"rank", "key", "count"});
  for (const auto& r : t.rows) csv::write_row(out, {std::to_string(r.rank), r.key, std::to_string(r.count)});
}

inline nlohmann::json to_json(const RankedTable& t) {
  nlohmann::json rows = nlohmann::json::array();
  for (const auto& r : t.rows) rows.push_back({{"rank", r.rank}, {"key", r.key}, {"count", r.count}});
  return {{"label", t.label}, {"rows", rows}};
}

inline void write_csv(std::ostream& out, const DeviceGroupReport& r) {
  csv::write_row(out, {"device", "n_records", "category", "matched", "ratio"});
  for (const auto& g : r.groups) {
    for (const auto& c : g.categories) {
      csv::write_row(out, {g.device, std::to_string(g.n_records), c.name, std::to_string(c.matched),
                           csv::number(c.ratio)});
    }
  }
}

inline nlohmann::json to_json(const DeviceGroupReport& r) {
  nlohmann::json groups = nlohmann::json::array();
  for (const auto& g : r.groups) {
    nlohmann::json cats = nlohmann::json::array();
    for (const auto& c : g.categories) {
      cats.push_back({{"category", c.name}, {"matched", c.matched}, {"ratio", c.ratio}});
    }
    groups.push_back({{"device", g.device}, {"n_records", g.n_records}, {"categories", cats}});
  }
  return {{"groups", groups}};
}

inline void write_csv(std::ostream& out, const DailySeries& s) {
  std::vector<std::string> header{"date"};
  for (std::size_t k = 0; k < kEmotionClassCount; ++k) header.emplace_back(kCategoryNames[k]);
  csv::write_row(out, header);
  for (std::size_t d = 0; d < s.days.size(); ++d) {
    std::vector<std::string> row{format_date(s.days[d])};
    for (std::size_t k = 0; k < kEmotionClassCount; ++k) row.push_back(csv::number(s.values[k][d]));
    csv::write_row(out, row);
  }
}

inline nlohmann::json to_json(const DailySeries& s) {
  nlohmann::json days = nlohmann::json::array();
  for (std::size_t d = 0; d < s.days.size(); ++d) {
    nlohmann::json shares = nlohmann::json::object(), counts = nlohmann::json::object();
    for (std::size_t k = 0; k < kEmotionClassCount; ++k) {
      shares[std::string(kCategoryNames[k])] = s.values[k][d];
      counts[std::string(kCategoryNames[k])] = s.counts[d][k];
    }
    days.push_back({{"date", format_date(s.days[d])}, {"shares", shares}, {"counts", counts}});
  }
  return {{"days", days}};
}

inline void write_csv(std::ostream& out, const PolarityDistribution& d) {
  csv::write_row(out, {"bin_start", "bin_end", "count"});
  const auto& h = d.histogram;
  for (std::size_t i = 0; i < h.counts.size(); ++i) {
    csv::write_row(out, {csv::number(h.bin_start(i)), csv::number(h.bin_start(i + 1)), std::to_string(h.counts[i])});
  }
}

inline nlohmann::json to_json(const PolarityDistribution& d) {
  nlohmann::json bins = nlohmann::json::array();
  const auto& h = d.histogram;
  for (std::size_t i = 0; i < h.counts.size(); ++i) {
    bins.push_back({{"start", h.bin_start(i)}, {"end", h.bin_start(i + 1)}, {"count", h.counts[i]}});
  }
  return {{"counts", {{"positive", d.n_positive}, {"negative", d.n_negative}, {"neutral", d.n_neutral}}},
          {"shares", {{"positive", d.pos_share}, {"negative", d.neg_share}, {"neutral", d.neu_share}}},
          {"histogram", {{"bin_width", h.bin_width}, {"bins", bins}}}};
}

}  // namespace sentiscope
