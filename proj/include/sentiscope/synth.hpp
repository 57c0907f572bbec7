#pragma once

// Deterministic synthetic corpus with a planting ledger. Used as test data
// because real platform data cannot be redistributed.
//
// Composition for n records (floors; remainder is `regular`):
//   duplicate   5%  byte-identical copy of an earlier regular record,
//                   10..1800 s later
//   burst       3%  bots posting 15 records within 42 s (whole bots only)
//   few_tokens  1%  fewer than 3 distinct tokens
//   off_topic   5%  US-tagged, no "reopen" anywhere in the text
//   foreign     4%  tagged CA or GB
//   untagged    4%  no country tag
// Devices: 70.3% iPhone, 24.7% Android, 5% web client (about 74/26 between
// the two phone classes). Every timestamp falls in 2020-04-30..2020-05-08
// UTC. Every regular user owns at most four regular records plus the
// duplicates of those records, so no regular user can burst.

#include <algorithm>
#include <array>
#include <chrono>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <random>
#include <string>
#include <string_view>
#include <unordered_set>
#include <vector>

#include "sentiscope/corpus.hpp"
#include "sentiscope/csv.hpp"
#include "sentiscope/textprep.hpp"
#include "sentiscope/timestamp.hpp"

namespace sentiscope::synth {

enum class PlantKind { regular, duplicate, burst, few_tokens, off_topic, foreign, untagged };

inline std::string_view to_string(PlantKind k) {
  constexpr std::string_view names[] = {"regular", "duplicate", "burst", "few_tokens",
                                        "off_topic", "foreign", "untagged"};
  return names[static_cast<int>(k)];
}

struct Rates {
  double duplicate = 0.05;
  double burst = 0.03;
  double few_tokens = 0.01;
  double off_topic = 0.05;
  double foreign = 0.04;
  double untagged = 0.04;
};

inline constexpr std::size_t kBurstSize = 15;
inline constexpr int kBurstSpacingSeconds = 3;
inline constexpr double kAbusiveRate = 0.05;

struct LedgerEntry {
  std::string id;
  PlantKind kind = PlantKind::regular;
  std::string source_device;
  std::string country_code;  // empty when untagged
  std::string duplicate_of;  // id of the copied record, duplicates only
};

struct SyntheticCorpus {
  Corpus corpus;
  std::vector<LedgerEntry> ledger;  // aligned with corpus.records
};

namespace detail {

class Rng {
 public:
  explicit Rng(std::uint64_t seed) : eng_(seed) {}
  std::uint64_t below(std::uint64_t n) { return eng_() % n; }
  bool chance(double p) { return static_cast<double>(eng_() >> 11) * 0x1.0p-53 < p; }
  template <typename C>
  const auto& pick(const C& c) { return c[below(std::size(c))]; }

 private:
  std::mt19937_64 eng_;
};

inline constexpr std::string_view kReopenPhrases[] = {
    "time to reopen",          "reopen the economy",        "reopen now",
    "we need to reopen",       "reopening is coming",       "ready to reopen",
    "reopen america",          "reopen the country",        "reopen businesses",
    "too early to reopen",     "don't reopen yet",          "the reopening plan",
    "reopen safely",           "we can't reopen like this", "reopen schools",
    "reopen the state",        "open economy now, reopen",  "reopening is a risk",
};
inline constexpr std::string_view kPrefixes[] = {"", "honestly", "i think", "the governor says", "folks",
                                                 "ok", "so", "listen", "look"};
inline constexpr std::string_view kSuffixes[] = {"", "today", "this week", "in may", "soon", "already"};
inline constexpr std::string_view kSubjects[] = {"people",  "i",       "we",     "everyone",
                                                 "my family", "small business owners", "workers",
                                                 "the governor", "nurses", "parents"};
inline constexpr std::string_view kVerbs[] = {"are", "feel", "seem", "am", "were", "stay"};
inline constexpr std::string_view kShifts[] = {"",      "",       "not",      "really",  "very",
                                               "never", "hardly", "extremely", "totally", "but"};
inline constexpr std::string_view kAdjectives[] = {
    "happy",   "scared",  "hopeful", "angry", "ready",  "worried",    "excited", "confident",
    "afraid",  "tired",   "glad",    "sick",  "safe",   "nervous",    "proud",   "frustrated",
    "thankful", "upset",  "calm",    "sad",   "eager",  "desperate"};
inline constexpr std::string_view kPreps[] = {"about", "of", "for", "with"};
inline constexpr std::string_view kTopics[] = {
    "the economy", "the virus",  "work",       "our jobs",   "the lockdown", "the future",
    "business",    "covid",      "the pandemic", "the president", "politics", "trump",
    "time",        "school",     "church",     "restaurants", "unemployment", "the governor",
    "social distancing", "the stores", "debt", "the hospital"};
inline constexpr std::string_view kCodas[] = {
    "we are all going to die",  "it can't happen forever",    "trust the plan",
    "time to get back to work", "social distancing still matters", "this is a disaster",
    "hope is coming",           "stay home stay safe",        "thank you essential workers",
    "we will win this together", "the economy will collapse", "money is running out",
    "pray for our nurses",      "the future looks good",      "freedom is essential",
    "this lockdown is terrible", "what a mess",               "finally some progress",
    "we need a cure",           "support local business"};
inline constexpr std::string_view kTerminals[] = {".", "!", "?", "!!", "..."};
inline constexpr std::string_view kMentions[] = {"realDonaldTrump", "GovNewsom", "NYGovCuomo",
                                                 "GovAbbott", "CDCgov", "WHO", "POTUS"};
inline constexpr std::string_view kTagsOnTopic[] = {"reopen", "ReopenAmerica", "COVID19", "coronavirus",
                                                    "Reopen", "covid19", "economy"};
inline constexpr std::string_view kTagsOffTopic[] = {"COVID19", "coronavirus", "StayHome", "covid19",
                                                     "economy", "lockdown"};
inline constexpr std::string_view kLocations[] = {
    "Los Angeles, CA", "Los Angeles, CA", "New York, NY", "Chicago, IL", "Houston, TX",
    "Phoenix, AZ",     "San Diego, CA",   "Dallas, TX",   "Atlanta, GA", "Miami, FL",
    "Seattle, WA",     "USA",             "California, USA", "Texas"};
inline constexpr std::string_view kFewTokenTexts[] = {"Reopen!!", "reopen reopen", "#reopen", "REOPEN NOW",
                                                      "reopen now now!", "Reopen.", "reopen?? reopen"};

inline std::string capitalize(std::string s) {
  if (!s.empty() && s[0] >= 'a' && s[0] <= 'z') s[0] = char(s[0] - 'a' + 'A');
  return s;
}

inline void append_word(std::string& s, std::string_view w) {
  if (w.empty()) return;
  if (!s.empty()) s.push_back(' ');
  s += w;
}

struct Draft {
  std::string text;
  std::vector<std::string> hashtags, mentions;
};

class TextFactory {
 public:
  TextFactory(Rng& rng, const std::vector<std::string>& abusive) : rng_(rng), abusive_(abusive) {}

  Draft make(bool on_topic) {
    Draft d;
    std::string body;
    if (on_topic) {
      std::string s1;
      append_word(s1, rng_.pick(kPrefixes));
      append_word(s1, rng_.pick(kReopenPhrases));
      append_word(s1, rng_.pick(kSuffixes));
      body = capitalize(s1) + std::string(rng_.pick(kTerminals));
    }
    std::string s2;
    append_word(s2, rng_.pick(kSubjects));
    append_word(s2, rng_.pick(kVerbs));
    append_word(s2, rng_.pick(kShifts));
    append_word(s2, rng_.pick(kAdjectives));
    append_word(s2, rng_.pick(kPreps));
    append_word(s2, rng_.pick(kTopics));
    if (!abusive_.empty() && rng_.chance(kAbusiveRate)) insert_abusive(s2);
    append_word(body, capitalize(s2) + std::string(rng_.pick(kTerminals)));
    if (rng_.chance(0.5)) append_word(body, capitalize(std::string(rng_.pick(kCodas))) + std::string(rng_.pick(kTerminals)));

    if (rng_.chance(0.35)) {
      const std::string m(rng_.pick(kMentions));
      d.mentions.push_back(m);
      body = rng_.chance(0.5) ? "@" + m + " " + body : body + " @" + m;
    }
    const int tags = static_cast<int>(rng_.below(3));
    for (int i = 0; i < tags; ++i) {
      const std::string t(on_topic ? rng_.pick(kTagsOnTopic) : rng_.pick(kTagsOffTopic));
      if (std::find(d.hashtags.begin(), d.hashtags.end(), t) != d.hashtags.end()) continue;
      d.hashtags.push_back(t);
      body += " #" + t;
    }
    if (rng_.chance(0.3)) body += " https://t.co/" + token(10);
    d.text = std::move(body);
    return d;
  }

 private:
  void insert_abusive(std::string& s) {
    std::string w = rng_.pick(abusive_);
    switch (rng_.below(3)) {
      case 0: w = capitalize(w); break;
      case 1:
        for (char& c : w) {
          if (c >= 'a' && c <= 'z') c = char(c - 'a' + 'A');
        }
        break;
      default: break;
    }
    s = rng_.chance(0.5) ? s + ", " + w : "these " + w + " " + s;
  }

  std::string token(std::size_t len) {
    static constexpr std::string_view alphabet = "abcdefghijklmnopqrstuvwxyzABCDEFGHIJKLMNOPQRSTUVWXYZ0123456789";
    std::string s;
    for (std::size_t i = 0; i < len; ++i) s.push_back(alphabet[rng_.below(alphabet.size())]);
    return s;
  }

  Rng& rng_;
  const std::vector<std::string>& abusive_;
};

inline std::string draw_device(Rng& rng) {
  const auto r = rng.below(1000);
  if (r < 703) return "Twitter for iPhone";
  if (r < 950) return "Twitter for Android";
  return "Twitter Web App";
}

}  // namespace detail

inline const Date kWindowStart = Date{std::chrono::year{2020} / std::chrono::April / 30};
inline constexpr int kWindowDays = 9;

/// Generates `n` records from `seed`. `abusive` words, when given, are
/// planted into about 5% of texts with varied casing.
inline SyntheticCorpus generate(std::uint64_t seed, std::size_t n,
                                const std::vector<std::string>& abusive = {},
                                const Rates& rates = {}) {
  using namespace std::chrono;
  if (n < 1) throw ConfigError("synthetic corpus size must be at least 1");
  detail::Rng rng(seed);
  detail::TextFactory factory(rng, abusive);

  const auto count = [n](double rate) { return static_cast<std::size_t>(static_cast<double>(n) * rate); };
  const std::size_t n_bots = count(rates.burst) / kBurstSize;
  const std::size_t n_burst = n_bots * kBurstSize;
  const std::size_t n_dup = count(rates.duplicate);
  const std::size_t n_few = count(rates.few_tokens);
  const std::size_t n_off = count(rates.off_topic);
  const std::size_t n_foreign = count(rates.foreign);
  const std::size_t n_untagged = count(rates.untagged);
  const std::size_t planted = n_burst + n_dup + n_few + n_off + n_foreign + n_untagged;
  if (planted >= n && planted > 0) throw ConfigError("planting rates leave no regular records");
  const std::size_t n_regular = n - planted;

  const seconds window = days{kWindowDays};
  const Timestamp start{kWindowStart};
  constexpr seconds kDupMaxOffset{1800};

  struct Item {
    TweetRecord rec;
    LedgerEntry plant;
    std::size_t seq = 0;
  };
  std::vector<Item> items;
  items.reserve(n);
  std::unordered_set<std::string> seen;  // normalised texts of unique-kind records

  const std::size_t pool = std::max<std::size_t>(1, (n_regular + n_off + n_foreign + n_untagged + 3) / 4);
  std::size_t next_pool_user = 0;

  auto unique_draft = [&](bool on_topic) {
    for (;;) {
      detail::Draft d = factory.make(on_topic);
      if (seen.insert(clean_text(d.text)).second) return d;
    }
  };
  auto add = [&](PlantKind kind, detail::Draft d, Timestamp t, std::string user,
                 std::optional<std::string> country) {
    Item it;
    it.rec.created_at = t;
    it.rec.text = std::move(d.text);
    it.rec.hashtags = std::move(d.hashtags);
    it.rec.mentions = std::move(d.mentions);
    it.rec.source_device = detail::draw_device(rng);
    it.rec.user_id = std::move(user);
    it.rec.country_code = std::move(country);
    if (rng.chance(0.7)) it.rec.user_location = std::string(rng.pick(detail::kLocations));
    it.rec.is_retweet = rng.chance(0.1);
    it.plant.kind = kind;
    it.seq = items.size();
    items.push_back(std::move(it));
  };
  auto random_time = [&](seconds span) { return start + seconds{rng.below(static_cast<std::uint64_t>(span.count()))}; };
  auto pool_user = [&] { return "u" + std::to_string(next_pool_user++ % pool); };

  for (std::size_t i = 0; i < n_regular; ++i) {
    add(PlantKind::regular, unique_draft(true), random_time(window), pool_user(),
        std::string(rng.chance(0.02) ? "us" : "US"));
  }
  for (std::size_t i = 0; i < n_off; ++i) add(PlantKind::off_topic, unique_draft(false), random_time(window), pool_user(), "US");
  for (std::size_t i = 0; i < n_foreign; ++i) {
    add(PlantKind::foreign, unique_draft(true), random_time(window), pool_user(), std::string(rng.chance(0.5) ? "CA" : "GB"));
  }
  for (std::size_t i = 0; i < n_untagged; ++i) add(PlantKind::untagged, unique_draft(true), random_time(window), pool_user(), std::nullopt);

  for (std::size_t i = 0; i < n_few; ++i) {
    detail::Draft d;
    d.text = std::string(rng.pick(detail::kFewTokenTexts));
    add(PlantKind::few_tokens, std::move(d), random_time(window), "p" + std::to_string(i), "US");
  }

  for (std::size_t b = 0; b < n_bots; ++b) {
    const Timestamp t0 = random_time(window - seconds{kBurstSize * kBurstSpacingSeconds});
    for (std::size_t k = 0; k < kBurstSize; ++k) {
      add(PlantKind::burst, unique_draft(true), t0 + seconds{k * kBurstSpacingSeconds}, "bot" + std::to_string(b), "US");
    }
  }

  // Duplicates copy distinct regular records early enough that the copy
  // still falls inside the window.
  std::vector<std::size_t> candidates;
  for (std::size_t i = 0; i < n_regular; ++i) {
    if (items[i].rec.created_at < start + window - kDupMaxOffset) candidates.push_back(i);
  }
  for (std::size_t i = 0; i < n_dup && !candidates.empty(); ++i) {
    const std::size_t slot = rng.below(candidates.size());
    const std::size_t orig = candidates[slot];
    candidates[slot] = candidates.back();
    candidates.pop_back();
    detail::Draft d{items[orig].rec.text, items[orig].rec.hashtags, items[orig].rec.mentions};
    const seconds offset{10 + rng.below(static_cast<std::uint64_t>(kDupMaxOffset.count()) - 9)};
    const std::string user = items[orig].rec.user_id;
    add(PlantKind::duplicate, std::move(d), items[orig].rec.created_at + offset, user, "US");
    items.back().plant.duplicate_of = std::to_string(orig);  // resolved to an id below
  }

  std::stable_sort(items.begin(), items.end(), [](const Item& a, const Item& b) {
    return a.rec.created_at != b.rec.created_at ? a.rec.created_at < b.rec.created_at : a.seq < b.seq;
  });
  std::vector<std::string> id_of_seq(items.size());
  for (std::size_t i = 0; i < items.size(); ++i) {
    items[i].rec.id = std::to_string(1255800000000000000ULL + i * 7919ULL);
    id_of_seq[items[i].seq] = items[i].rec.id;
  }

  SyntheticCorpus out;
  out.corpus.provenance.source = "synthetic:seed=" + std::to_string(seed) + ",n=" + std::to_string(n);
  out.corpus.provenance.parsed = items.size();
  for (auto& it : items) {
    it.plant.id = it.rec.id;
    it.plant.source_device = it.rec.source_device;
    it.plant.country_code = it.rec.country_code.value_or("");
    if (it.plant.kind == PlantKind::duplicate) it.plant.duplicate_of = id_of_seq[std::stoull(it.plant.duplicate_of)];
    out.ledger.push_back(std::move(it.plant));
    out.corpus.records.push_back(std::move(it.rec));
  }
  return out;
}

inline void write_ledger(std::ostream& out, const std::vector<LedgerEntry>& ledger) {
  csv::write_row(out, {"status_id", "kind", "source", "country_code", "duplicate_of"});
  for (const auto& e : ledger) {
    csv::write_row(out, {e.id, std::string(to_string(e.kind)), e.source_device, e.country_code, e.duplicate_of});
  }
}

inline std::vector<LedgerEntry> read_ledger(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw FileNotFound(path.string());
  csv::Reader reader(in);
  std::vector<LedgerEntry> out;
  if (!reader.next()) return out;
  while (auto row = reader.next()) {
    if (row->fields.size() != 5) continue;
    LedgerEntry e;
    e.id = row->fields[0];
    for (int k = 0; k <= static_cast<int>(PlantKind::untagged); ++k) {
      if (to_string(static_cast<PlantKind>(k)) == row->fields[1]) e.kind = static_cast<PlantKind>(k);
    }
    e.source_device = row->fields[2];
    e.country_code = row->fields[3];
    e.duplicate_of = row->fields[4];
    out.push_back(std::move(e));
  }
  return out;
}

}  // namespace sentiscope::synth
