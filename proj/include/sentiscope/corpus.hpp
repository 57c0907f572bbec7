#pragma once

#include <algorithm>
#include <chrono>
#include <cstddef>
#include <filesystem>
#include <fstream>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <unordered_map>
#include <unordered_set>
#include <vector>

#include "json.hpp"
#include "sentiscope/csv.hpp"
#include "sentiscope/error.hpp"
#include "sentiscope/textprep.hpp"
#include "sentiscope/timestamp.hpp"

namespace sentiscope {

struct TweetRecord {
  std::string id;
  Timestamp created_at{};
  std::string text;
  std::string source_device;
  std::optional<std::string> user_location;
  std::optional<std::string> country_code;
  std::vector<std::string> hashtags;
  std::vector<std::string> mentions;
  std::string user_id;
  bool is_retweet = false;

  bool operator==(const TweetRecord&) const = default;
};

struct StageCount {
  std::string stage;
  std::size_t removed = 0;

  bool operator==(const StageCount&) const = default;
};

/// Row accounting for one corpus. `parsed` counts every data row read, so
/// parsed == |records| + skipped + sum(stages[].removed) at all times.
struct Provenance {
  std::string source;
  std::size_t parsed = 0;
  std::size_t skipped = 0;
  std::map<std::string, std::size_t> skip_reasons;
  std::vector<StageCount> stages;

  std::size_t filtered_total() const {
    std::size_t n = 0;
    for (const auto& s : stages) n += s.removed;
    return n;
  }

  bool operator==(const Provenance&) const = default;
};

struct Corpus {
  std::vector<TweetRecord> records;
  Provenance provenance;

  std::size_t size() const { return records.size(); }
  bool empty() const { return records.empty(); }

  bool reconciles() const {
    return provenance.parsed == records.size() + provenance.skipped + provenance.filtered_total();
  }
};

enum class CorpusFormat { csv, jsonl };

inline std::optional<CorpusFormat> parse_corpus_format(std::string_view s) {
  if (s == "csv") return CorpusFormat::csv;
  if (s == "jsonl") return CorpusFormat::jsonl;
  return std::nullopt;
}

inline CorpusFormat format_from_extension(const std::filesystem::path& p) {
  return p.extension() == ".csv" ? CorpusFormat::csv : CorpusFormat::jsonl;
}

// ---------------------------------------------------------------------------
// Schema
// ---------------------------------------------------------------------------

namespace schema {

inline constexpr std::string_view kStatusId = "status_id";
inline constexpr std::string_view kCreatedAt = "created_at";
inline constexpr std::string_view kText = "text";
inline constexpr std::string_view kSource = "source";
inline constexpr std::string_view kLocation = "location";
inline constexpr std::string_view kCountryCode = "country_code";
inline constexpr std::string_view kHashtags = "hashtags";
inline constexpr std::string_view kMentions = "mentions";
inline constexpr std::string_view kUserId = "user_id";
inline constexpr std::string_view kIsRetweet = "is_retweet";

inline constexpr std::string_view kColumns[] = {kStatusId, kCreatedAt,   kText,
                                                kSource,   kLocation,    kCountryCode,
                                                kHashtags, kMentions,    kUserId,
                                                kIsRetweet};
inline constexpr std::string_view kRequired[] = {kStatusId, kCreatedAt, kText, kUserId};

}  // namespace schema

namespace detail {

inline std::vector<std::string> split_pipe(std::string_view s) {
  std::vector<std::string> out;
  std::size_t i = 0;
  while (i <= s.size()) {
    std::size_t j = s.find('|', i);
    if (j == std::string_view::npos) j = s.size();
    const std::string_view part = ascii::trim(s.substr(i, j - i));
    if (!part.empty()) out.emplace_back(part);
    i = j + 1;
  }
  return out;
}

inline std::string join_pipe(const std::vector<std::string>& v) {
  std::string out;
  for (std::size_t i = 0; i < v.size(); ++i) {
    if (i) out.push_back('|');
    out += v[i];
  }
  return out;
}

inline std::optional<bool> parse_bool(std::string_view s) {
  s = ascii::trim(s);
  if (s.empty() || ascii::iequals(s, "false") || s == "0" || ascii::iequals(s, "f")) return false;
  if (ascii::iequals(s, "true") || s == "1" || ascii::iequals(s, "t")) return true;
  return std::nullopt;
}

inline std::optional<std::string> non_empty(std::string_view s) {
  s = ascii::trim(s);
  if (s.empty()) return std::nullopt;
  return std::string(s);
}

// Raw textual fields of one input row before validation.
struct RawRow {
  std::string id, created_at, text, source, location, country_code, user_id, is_retweet;
  std::vector<std::string> hashtags, mentions;
};

// Returns the skip reason, or empty on success.
inline std::string validate_row(const RawRow& raw, TweetRecord& out) {
  const std::string_view id = ascii::trim(raw.id);
  if (id.empty()) return "missing_status_id";
  if (ascii::trim(raw.text).empty()) return "missing_text";
  if (ascii::trim(raw.user_id).empty()) return "missing_user_id";
  const auto ts = parse_rfc3339(ascii::trim(raw.created_at));
  if (!ts) return "bad_created_at";
  const auto rt = parse_bool(raw.is_retweet);
  if (!rt) return "bad_is_retweet";

  out.id = std::string(id);
  out.created_at = *ts;
  out.text = raw.text;
  out.source_device = std::string(ascii::trim(raw.source));
  out.user_location = non_empty(raw.location);
  out.country_code = non_empty(raw.country_code);
  out.hashtags = raw.hashtags;
  out.mentions = raw.mentions;
  out.user_id = std::string(ascii::trim(raw.user_id));
  out.is_retweet = *rt;
  return {};
}

class CorpusBuilder {
 public:
  explicit CorpusBuilder(std::string source) { corpus_.provenance.source = std::move(source); }

  void skip(const std::string& reason) {
    ++corpus_.provenance.parsed;
    ++corpus_.provenance.skipped;
    ++corpus_.provenance.skip_reasons[reason];
  }

  void add(const RawRow& raw) {
    TweetRecord rec;
    std::string reason = validate_row(raw, rec);
    if (reason.empty() && !seen_.insert(rec.id).second) reason = "duplicate_status_id";
    if (!reason.empty()) {
      skip(reason);
      return;
    }
    ++corpus_.provenance.parsed;
    corpus_.records.push_back(std::move(rec));
  }

  Corpus finish() && {
    if (corpus_.records.empty()) {
      throw EmptyCorpus("no well-formed rows in " + corpus_.provenance.source);
    }
    return std::move(corpus_);
  }

 private:
  Corpus corpus_;
  std::unordered_set<std::string> seen_;
};

inline Corpus load_csv(std::istream& in, const std::string& source) {
  csv::Reader reader(in);
  const auto header = reader.next();
  if (!header) throw EmptyCorpus("empty file " + source);

  std::unordered_map<std::string, std::size_t> column;
  for (std::size_t i = 0; i < header->fields.size(); ++i) {
    std::string name(ascii::trim(header->fields[i]));
    if (i == 0 && name.starts_with("\xEF\xBB\xBF")) name.erase(0, 3);  // UTF-8 BOM
    column.emplace(std::move(name), i);
  }
  for (std::string_view req : schema::kRequired) {
    if (!column.contains(std::string(req))) {
      throw SchemaError(source + ": missing required column '" + std::string(req) + "'");
    }
  }
  auto col = [&](std::string_view name) -> std::optional<std::size_t> {
    auto it = column.find(std::string(name));
    if (it == column.end()) return std::nullopt;
    return it->second;
  };
  const auto c_id = col(schema::kStatusId), c_ts = col(schema::kCreatedAt), c_text = col(schema::kText),
             c_src = col(schema::kSource), c_loc = col(schema::kLocation),
             c_cc = col(schema::kCountryCode), c_tags = col(schema::kHashtags),
             c_ment = col(schema::kMentions), c_user = col(schema::kUserId),
             c_rt = col(schema::kIsRetweet);

  CorpusBuilder builder(source);
  while (auto row = reader.next()) {
    // A bare line terminator is not a row.
    if (row->fields.size() == 1 && row->fields[0].empty()) continue;
    if (!row->well_formed) {
      builder.skip("malformed_quoting");
      continue;
    }
    if (row->fields.size() != header->fields.size()) {
      builder.skip("field_count");
      continue;
    }
    auto get = [&](const std::optional<std::size_t>& c) -> std::string {
      return c ? row->fields[*c] : std::string();
    };
    RawRow raw;
    raw.id = get(c_id);
    raw.created_at = get(c_ts);
    raw.text = get(c_text);
    raw.source = get(c_src);
    raw.location = get(c_loc);
    raw.country_code = get(c_cc);
    raw.hashtags = split_pipe(get(c_tags));
    raw.mentions = split_pipe(get(c_ment));
    raw.user_id = get(c_user);
    raw.is_retweet = get(c_rt);
    builder.add(raw);
  }
  return std::move(builder).finish();
}

// Accepts strings, numbers (ids), booleans; null and absent become "".
inline std::optional<std::string> json_scalar(const nlohmann::json& obj, std::string_view key) {
  auto it = obj.find(std::string(key));
  if (it == obj.end() || it->is_null()) return std::string();
  if (it->is_string()) return it->get<std::string>();
  if (it->is_number_integer()) return std::to_string(it->get<long long>());
  if (it->is_number_unsigned()) return std::to_string(it->get<unsigned long long>());
  if (it->is_boolean()) return std::string(it->get<bool>() ? "true" : "false");
  return std::nullopt;
}

inline std::optional<std::vector<std::string>> json_list(const nlohmann::json& obj,
                                                         std::string_view key) {
  auto it = obj.find(std::string(key));
  if (it == obj.end() || it->is_null()) return std::vector<std::string>{};
  if (it->is_string()) return split_pipe(it->get<std::string>());
  if (!it->is_array()) return std::nullopt;
  std::vector<std::string> out;
  for (const auto& v : *it) {
    if (!v.is_string()) return std::nullopt;
    out.push_back(v.get<std::string>());
  }
  return out;
}

inline Corpus load_jsonl(std::istream& in, const std::string& source) {
  CorpusBuilder builder(source);
  std::string line;
  while (std::getline(in, line)) {
    if (ascii::trim(line).empty()) continue;
    const auto obj = nlohmann::json::parse(line, nullptr, /*allow_exceptions=*/false);
    if (obj.is_discarded() || !obj.is_object()) {
      builder.skip("malformed_json");
      continue;
    }
    RawRow raw;
    bool ok = true;
    auto scalar = [&](std::string_view key, std::string& dst) {
      auto v = json_scalar(obj, key);
      if (!v) ok = false;
      else dst = std::move(*v);
    };
    scalar(schema::kStatusId, raw.id);
    scalar(schema::kCreatedAt, raw.created_at);
    scalar(schema::kText, raw.text);
    scalar(schema::kSource, raw.source);
    scalar(schema::kLocation, raw.location);
    scalar(schema::kCountryCode, raw.country_code);
    scalar(schema::kUserId, raw.user_id);
    scalar(schema::kIsRetweet, raw.is_retweet);
    auto tags = json_list(obj, schema::kHashtags);
    auto ment = json_list(obj, schema::kMentions);
    if (!ok || !tags || !ment) {
      builder.skip("bad_field_type");
      continue;
    }
    raw.hashtags = std::move(*tags);
    raw.mentions = std::move(*ment);
    builder.add(raw);
  }
  return std::move(builder).finish();
}

}  // namespace detail

/// Reads a CSV (header required) or JSON-lines file. Malformed rows are
/// skipped and counted in the provenance, never dropped silently.
inline Corpus load_corpus(const std::filesystem::path& path, CorpusFormat format) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw FileNotFound(path.string());
  return format == CorpusFormat::csv ? detail::load_csv(in, path.string())
                                     : detail::load_jsonl(in, path.string());
}

// ---------------------------------------------------------------------------
// Serialisation
// ---------------------------------------------------------------------------

inline nlohmann::json to_json(const TweetRecord& r) {
  nlohmann::json j;
  j[schema::kStatusId] = r.id;
  j[schema::kCreatedAt] = format_rfc3339(r.created_at);
  j[schema::kText] = r.text;
  j[schema::kSource] = r.source_device;
  j[schema::kLocation] = r.user_location ? nlohmann::json(*r.user_location) : nlohmann::json();
  j[schema::kCountryCode] = r.country_code ? nlohmann::json(*r.country_code) : nlohmann::json();
  j[schema::kHashtags] = r.hashtags;
  j[schema::kMentions] = r.mentions;
  j[schema::kUserId] = r.user_id;
  j[schema::kIsRetweet] = r.is_retweet;
  return j;
}

inline nlohmann::json to_json(const Provenance& p) {
  nlohmann::json stages = nlohmann::json::array();
  for (const auto& s : p.stages) stages.push_back({{"stage", s.stage}, {"removed", s.removed}});
  return {{"source", p.source},
          {"parsed", p.parsed},
          {"skipped", p.skipped},
          {"skip_reasons", p.skip_reasons},
          {"stages", stages}};
}

inline void write_corpus(std::ostream& out, const Corpus& c, CorpusFormat format) {
  if (format == CorpusFormat::jsonl) {
    for (const auto& r : c.records) out << to_json(r).dump() << '\n';
    return;
  }
  csv::write_row(out, std::vector<std::string>(std::begin(schema::kColumns), std::end(schema::kColumns)));
  for (const auto& r : c.records) {
    csv::write_row(out, {r.id, format_rfc3339(r.created_at), r.text, r.source_device,
                         r.user_location.value_or(""), r.country_code.value_or(""),
                         detail::join_pipe(r.hashtags), detail::join_pipe(r.mentions), r.user_id,
                         r.is_retweet ? "true" : "false"});
  }
}

inline void save_corpus(const std::filesystem::path& path, const Corpus& c, CorpusFormat format) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw FileNotFound("cannot write " + path.string());
  write_corpus(out, c, format);
}

// ---------------------------------------------------------------------------
// Filters. All are pure, order-preserving and idempotent.
// ---------------------------------------------------------------------------

template <typename Pred>
Corpus retain_if(const Corpus& c, std::string stage, Pred keep) {
  Corpus out;
  out.provenance = c.provenance;
  out.records.reserve(c.records.size());
  for (const auto& r : c.records) {
    if (keep(r)) out.records.push_back(r);
  }
  out.provenance.stages.push_back({std::move(stage), c.records.size() - out.records.size()});
  return out;
}

/// Keeps records whose UTC calendar date lies in [start, end], both ends
/// inclusive.
inline Corpus filter_date_range(const Corpus& c, Date start, Date end) {
  if (start > end) {
    throw InvalidRange(format_date(start) + " is after " + format_date(end));
  }
  return retain_if(c, "date_range", [&](const TweetRecord& r) {
    const Date d = utc_date(r.created_at);
    return start <= d && d <= end;
  });
}

/// Case-insensitive substring match of `keyword` against the record text.
inline Corpus filter_keyword(const Corpus& c, std::string_view keyword) {
  if (keyword.empty()) throw ConfigError("keyword must be non-empty");
  const std::string needle = ascii::lower(keyword);
  return retain_if(c, "keyword", [&](const TweetRecord& r) {
    return ascii::lower(r.text).find(needle) != std::string::npos;
  });
}

/// Keeps records tagged with `code` (case-insensitive). Untagged records are
/// dropped.
inline Corpus filter_country(const Corpus& c, std::string_view code) {
  if (code.size() != 2) throw ConfigError("country code must have two letters: '" + std::string(code) + "'");
  return retain_if(c, "country", [&](const TweetRecord& r) {
    return r.country_code && ascii::iequals(*r.country_code, code);
  });
}

struct BotPolicy {
  std::chrono::seconds duplicate_window{3600};
  std::size_t burst_per_minute = 10;
  std::size_t min_distinct_tokens = 3;
};

enum class BotVerdict { keep, burst, few_tokens, duplicate };

inline std::string_view to_string(BotVerdict v) {
  switch (v) {
    case BotVerdict::keep: return "keep";
    case BotVerdict::burst: return "bot_burst";
    case BotVerdict::few_tokens: return "bot_min_tokens";
    case BotVerdict::duplicate: return "bot_duplicate";
  }
  return "?";
}

/// Per-record bot verdicts. Rules apply in this order and each record gets
/// the first rule that removes it:
///  1. burst: every record of a user with more than `burst_per_minute`
///     posts inside some 60 s window;
///  2. few_tokens: fewer than `min_distinct_tokens` distinct tokens in the
///     normalised text;
///  3. duplicate: normalised text equal to an earlier retained record's
///     whose timestamp is within `duplicate_window`.
inline std::vector<BotVerdict> bot_verdicts(const Corpus& c, const BotPolicy& policy) {
  using namespace std::chrono;
  const std::size_t n = c.records.size();
  std::vector<BotVerdict> verdict(n, BotVerdict::keep);

  std::unordered_map<std::string, std::vector<std::size_t>> by_user;
  for (std::size_t i = 0; i < n; ++i) by_user[c.records[i].user_id].push_back(i);
  for (auto& [user, idx] : by_user) {
    if (idx.size() <= policy.burst_per_minute) continue;
    std::vector<Timestamp> times;
    times.reserve(idx.size());
    for (std::size_t i : idx) times.push_back(c.records[i].created_at);
    std::sort(times.begin(), times.end());
    bool bursts = false;
    for (std::size_t lo = 0, hi = 0; hi < times.size() && !bursts; ++hi) {
      while (times[hi] - times[lo] >= minutes{1}) ++lo;
      bursts = hi - lo + 1 > policy.burst_per_minute;
    }
    if (bursts) {
      for (std::size_t i : idx) verdict[i] = BotVerdict::burst;
    }
  }

  std::unordered_map<std::string, std::vector<Timestamp>> retained_by_text;
  for (std::size_t i = 0; i < n; ++i) {
    if (verdict[i] != BotVerdict::keep) continue;
    const auto& rec = c.records[i];
    std::string norm = clean_text(rec.text);
    std::unordered_set<std::string_view> distinct;
    for (std::size_t p = 0; p < norm.size();) {
      std::size_t q = norm.find(' ', p);
      if (q == std::string::npos) q = norm.size();
      distinct.insert(std::string_view(norm).substr(p, q - p));
      p = q + 1;
    }
    if (distinct.size() < policy.min_distinct_tokens) {
      verdict[i] = BotVerdict::few_tokens;
      continue;
    }
    auto& anchors = retained_by_text[norm];
    const bool dup = std::any_of(anchors.begin(), anchors.end(), [&](Timestamp t) {
      const auto dt = rec.created_at > t ? rec.created_at - t : t - rec.created_at;
      return dt <= policy.duplicate_window;
    });
    if (dup) {
      verdict[i] = BotVerdict::duplicate;
    } else {
      anchors.push_back(rec.created_at);
    }
  }
  return verdict;
}

inline Corpus filter_bots_and_duplicates(const Corpus& c, const BotPolicy& policy = {}) {
  const auto verdict = bot_verdicts(c, policy);
  Corpus out;
  out.provenance = c.provenance;
  std::size_t removed[4] = {0, 0, 0, 0};
  for (std::size_t i = 0; i < c.records.size(); ++i) {
    ++removed[static_cast<int>(verdict[i])];
    if (verdict[i] == BotVerdict::keep) out.records.push_back(c.records[i]);
  }
  for (BotVerdict v : {BotVerdict::burst, BotVerdict::few_tokens, BotVerdict::duplicate}) {
    out.provenance.stages.push_back({std::string(to_string(v)), removed[static_cast<int>(v)]});
  }
  return out;
}

}  // namespace sentiscope
