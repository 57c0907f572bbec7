#pragma once

#include <openssl/evp.h>

#include <array>
#include <charconv>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <functional>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <string_view>
#include <system_error>
#include <utility>
#include <vector>

#include "json.hpp"
#include "sentiscope/analytics.hpp"
#include "sentiscope/corpus.hpp"
#include "sentiscope/emotion.hpp"
#include "sentiscope/error.hpp"
#include "sentiscope/ngram.hpp"
#include "sentiscope/polarity.hpp"
#include "sentiscope/scenario.hpp"
#include "sentiscope/textprep.hpp"
#include "sentiscope/timestamp.hpp"

namespace sentiscope {

namespace fs = std::filesystem;

// ---------------------------------------------------------------------------
// Hashing
// ---------------------------------------------------------------------------

inline std::string sha256_hex(std::string_view data) {
  std::array<unsigned char, EVP_MAX_MD_SIZE> md{};
  unsigned int len = 0;
  if (EVP_Digest(data.data(), data.size(), md.data(), &len, EVP_sha256(), nullptr) != 1) {
    throw std::runtime_error("EVP_Digest failed");
  }
  static constexpr char hex[] = "0123456789abcdef";
  std::string out;
  out.reserve(len * 2);
  for (unsigned int i = 0; i < len; ++i) {
    out.push_back(hex[md[i] >> 4]);
    out.push_back(hex[md[i] & 0xF]);
  }
  return out;
}

inline std::string read_file(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw FileNotFound(path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

inline std::string sha256_file(const fs::path& path) { return sha256_hex(read_file(path)); }

// ---------------------------------------------------------------------------
// Run configuration
// ---------------------------------------------------------------------------

struct RunConfig {
  fs::path input;
  std::optional<CorpusFormat> format;  // inferred from the extension when unset
  Date start_date = Date{std::chrono::year{2020} / std::chrono::April / 30};
  Date end_date = Date{std::chrono::year{2020} / std::chrono::May / 8};
  std::string keyword = "reopen";
  std::string country = "US";
  fs::path stopwords;
  fs::path abusive;  // empty: no masking
  fs::path emotion_lexicon;
  fs::path polarity_lexicon;
  fs::path shifters;  // empty: no valence shifters
  ScoringParams scoring;
  BotPolicy bot;
  fs::path output_dir;
  std::uint64_t seed = 42;
  std::size_t top_k = 25;
  std::size_t ngram_top = 100;  // rows per exported n-gram table; 0 = all
  std::size_t cloud_k = 100;

  CorpusFormat input_format() const { return format.value_or(format_from_extension(input)); }
};

namespace detail {

inline std::size_t parse_size(std::string_view key, std::string_view v) {
  std::size_t out = 0;
  const auto res = std::from_chars(v.data(), v.data() + v.size(), out);
  if (res.ec != std::errc{} || res.ptr != v.data() + v.size()) {
    throw ConfigError(std::string(key) + ": expected a non-negative integer, got '" + std::string(v) + "'");
  }
  return out;
}

inline double parse_real(std::string_view key, std::string_view v) {
  const auto d = parse_double(std::string(v));
  if (!d) throw ConfigError(std::string(key) + ": expected a number, got '" + std::string(v) + "'");
  return *d;
}

inline Date parse_config_date(std::string_view key, std::string_view v) {
  const auto d = parse_date(v);
  if (!d) throw ConfigError(std::string(key) + ": expected YYYY-MM-DD, got '" + std::string(v) + "'");
  return *d;
}

}  // namespace detail

/// Applies one `key = value` setting. Relative paths are resolved against
/// `base`.
inline void apply_setting(RunConfig& cfg, std::string_view key, std::string_view value,
                          const fs::path& base = {}) {
  const auto path = [&] {
    fs::path p{std::string(value)};
    return (p.empty() || p.is_absolute() || base.empty()) ? p : base / p;
  };
  if (key == "input") cfg.input = path();
  else if (key == "format") {
    const auto f = parse_corpus_format(value);
    if (!f) throw ConfigError("format must be csv or jsonl");
    cfg.format = f;
  }
  else if (key == "start_date") cfg.start_date = detail::parse_config_date(key, value);
  else if (key == "end_date") cfg.end_date = detail::parse_config_date(key, value);
  else if (key == "keyword") cfg.keyword = std::string(value);
  else if (key == "country") cfg.country = std::string(value);
  else if (key == "stopwords") cfg.stopwords = path();
  else if (key == "abusive") cfg.abusive = path();
  else if (key == "emotion_lexicon") cfg.emotion_lexicon = path();
  else if (key == "polarity_lexicon") cfg.polarity_lexicon = path();
  else if (key == "shifters") cfg.shifters = path();
  else if (key == "window_before") cfg.scoring.window_before = detail::parse_size(key, value);
  else if (key == "window_after") cfg.scoring.window_after = detail::parse_size(key, value);
  else if (key == "amplifier_weight") cfg.scoring.amplifier_weight = detail::parse_real(key, value);
  else if (key == "adversative_weight") cfg.scoring.adversative_weight = detail::parse_real(key, value);
  else if (key == "dup_window_seconds") cfg.bot.duplicate_window = std::chrono::seconds(detail::parse_size(key, value));
  else if (key == "burst_per_minute") cfg.bot.burst_per_minute = detail::parse_size(key, value);
  else if (key == "min_distinct_tokens") cfg.bot.min_distinct_tokens = detail::parse_size(key, value);
  else if (key == "output_dir") cfg.output_dir = path();
  else if (key == "seed") cfg.seed = detail::parse_size(key, value);
  else if (key == "top_k") cfg.top_k = detail::parse_size(key, value);
  else if (key == "ngram_top") cfg.ngram_top = detail::parse_size(key, value);
  else if (key == "cloud_k") cfg.cloud_k = detail::parse_size(key, value);
  else throw ConfigError("unknown setting '" + std::string(key) + "'");
}

/// Flat `key = value` document; '#' starts a comment line.
inline void apply_config_text(RunConfig& cfg, std::string_view text, const fs::path& base = {}) {
  std::size_t lineno = 0;
  std::size_t pos = 0;
  while (pos <= text.size()) {
    std::size_t end = text.find('\n', pos);
    if (end == std::string_view::npos) end = text.size();
    const std::string_view line = ascii::trim(text.substr(pos, end - pos));
    pos = end + 1;
    ++lineno;
    if (line.empty() || line.front() == '#') continue;
    const std::size_t eq = line.find('=');
    if (eq == std::string_view::npos) {
      throw ConfigError("line " + std::to_string(lineno) + ": expected key = value");
    }
    apply_setting(cfg, ascii::trim(line.substr(0, eq)), ascii::trim(line.substr(eq + 1)), base);
  }
}

inline RunConfig load_run_config(const fs::path& path, RunConfig cfg = {}) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot read config file " + path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  apply_config_text(cfg, ss.str(), path.parent_path());
  return cfg;
}

/// Checks everything except the output directory.
inline void validate_inputs(const RunConfig& cfg) {
  const auto require = [](const fs::path& p, std::string_view what, bool optional) {
    if (p.empty()) {
      if (optional) return;
      throw ConfigError(std::string(what) + " path is not set");
    }
    if (!fs::is_regular_file(p)) throw FileNotFound(std::string(what) + " not found: " + p.string());
  };
  require(cfg.input, "input", false);
  require(cfg.stopwords, "stopwords", false);
  require(cfg.abusive, "abusive lexicon", true);
  require(cfg.emotion_lexicon, "emotion lexicon", false);
  require(cfg.polarity_lexicon, "polarity lexicon", false);
  require(cfg.shifters, "shifter lexicon", true);
  if (cfg.start_date > cfg.end_date) throw ConfigError("start_date is after end_date");
  if (cfg.keyword.empty()) throw ConfigError("keyword must be non-empty");
  if (cfg.country.size() != 2) throw ConfigError("country must be a two-letter code");
  if (cfg.top_k < 1 || cfg.cloud_k < 1) throw ConfigError("top_k and cloud_k must be at least 1");
  cfg.scoring.validate();
}

inline void validate(const RunConfig& cfg) {
  validate_inputs(cfg);
  if (cfg.output_dir.empty()) throw ConfigError("output_dir is not set");
}

namespace detail {

template <typename F>
auto in_stage(std::string_view stage, F&& f) -> decltype(f()) {
  try {
    return f();
  } catch (const StageError&) {
    throw;
  } catch (const Error& e) {
    throw StageError(std::string(stage), e);
  }
}

}  // namespace detail

struct StageSize {
  std::string stage;
  std::size_t records = 0;  // records remaining after the stage
};

/// Loads cfg.input and applies the date, keyword, country and bot filters.
/// The filtered corpus may be empty.
inline Corpus load_and_filter(const RunConfig& cfg, std::vector<StageSize>* sizes = nullptr) {
  const auto note = [&](std::string_view stage, const Corpus& c) {
    if (sizes) sizes->push_back({std::string(stage), c.size()});
  };
  Corpus corpus = detail::in_stage("load", [&] { return load_corpus(cfg.input, cfg.input_format()); });
  note("load", corpus);
  return detail::in_stage("filter", [&] {
    corpus = filter_date_range(corpus, cfg.start_date, cfg.end_date);
    note("date_range", corpus);
    corpus = filter_keyword(corpus, cfg.keyword);
    note("keyword", corpus);
    corpus = filter_country(corpus, cfg.country);
    note("country", corpus);
    corpus = filter_bots_and_duplicates(corpus, cfg.bot);
    note("bots", corpus);
    return corpus;
  });
}

// ---------------------------------------------------------------------------
// Shared analysis
// ---------------------------------------------------------------------------

struct Resources {
  WordSet stopwords;
  WordSet abusive;
  EmotionLexicon emotions;
  PolarityLexicon polarity;
};

inline Resources load_resources(const RunConfig& cfg) {
  Resources r;
  r.stopwords = load_word_list(cfg.stopwords);
  if (!cfg.abusive.empty()) r.abusive = load_word_list(cfg.abusive);
  r.emotions = load_emotion_lexicon(cfg.emotion_lexicon);
  r.polarity = load_polarity_lexicon(cfg.polarity_lexicon, cfg.shifters);
  return r;
}

/// Per-record products of the text stages, aligned with `masked.records`.
struct Analysis {
  Corpus masked;                      // record texts after abusive-word masking
  MaskLedger mask_ledger;
  std::vector<TokenStream> full;      // stopwords kept: polarity, n = 3, 4
  std::vector<TokenStream> content;   // stopwords removed: emotion, n = 1, 2
  std::vector<EmotionProfile> profiles;
  std::vector<PolarityScore> scores;
};

inline Analysis analyze(const Corpus& corpus, const Resources& res, const ScoringParams& params) {
  Analysis a;
  a.masked = corpus;
  const std::size_t n = corpus.records.size();
  a.full.reserve(n);
  a.content.reserve(n);
  a.profiles.reserve(n);
  a.scores.reserve(n);
  for (auto& rec : a.masked.records) {
    rec.text = mask_abusive(rec.text, res.abusive, a.mask_ledger);
    a.full.push_back(prepare_text(rec.text));
    a.content.push_back(remove_stopwords(a.full.back(), res.stopwords));
    a.profiles.push_back(classify(a.content.back(), res.emotions));
    a.scores.push_back(score_text(a.full.back(), res.polarity, params));
  }
  return a;
}

/// Stopwords are dropped for n <= 2 and kept for n >= 3.
inline NgramTable ngram_table(const Analysis& a, int n) {
  check_ngram_order(n);
  return build_table(n <= 2 ? a.content : a.full, n);
}

/// Scenario-ready aggregate: polarity shares plus corpus emotion totals.
inline nlohmann::json summary_json(const Analysis& a) {
  const auto dist = polarity_distribution(a.scores);
  const auto total = aggregate_profiles(a.profiles);
  const auto ext = extremes(a.scores);
  nlohmann::json dominant = nlohmann::json::array();
  for (const auto& [e, c] : dominant_classes(total, 3)) dominant.push_back({{"class", std::string(to_string(e))}, {"count", c}});
  nlohmann::json trend = nullptr;
  if (dist.pos_share != dist.neg_share) trend = std::string(to_string(derive_trend(dist, total).direction));
  return {{"records", a.scores.size()},
          {"shares", {{"positive", dist.pos_share}, {"negative", dist.neg_share}, {"neutral", dist.neu_share}}},
          {"emotions", to_json(total)},
          {"dominant_emotions", dominant},
          {"extremes",
           {{"min", {{"status_id", a.masked.records[ext.min_index].id}, {"value", ext.min_value}}},
            {"max", {{"status_id", a.masked.records[ext.max_index].id}, {"value", ext.max_value}}}}},
          {"trend", trend},
          {"masked_terms", a.mask_ledger.size()}};
}

/// Reads the `shares` and `emotions` blocks of a summary or distribution
/// report and derives the trend.
inline SentimentTrend trend_from_report(const nlohmann::json& report) {
  if (!report.contains("shares") || !report.contains("emotions")) {
    throw SchemaError("report lacks 'shares' or 'emotions'");
  }
  const auto& shares = report.at("shares");
  return derive_trend(shares.at("positive").get<double>(), shares.at("negative").get<double>(),
                      profile_from_json(report.at("emotions")));
}

// ---------------------------------------------------------------------------
// Full run
// ---------------------------------------------------------------------------

struct RunManifest {
  std::vector<StageSize> stage_counts;
  std::map<std::string, std::string> outputs;  // file name -> sha256
  std::string manifest_json;
  std::string manifest_sha256;
};

inline constexpr std::string_view kManifestFile = "manifest.json";

namespace detail {

inline void write_text(const fs::path& path, std::string_view content) {
  std::ofstream out(path, std::ios::binary);
  out << content;
  if (!out) throw std::runtime_error("write failed: " + path.string());
}

template <typename Writer>
std::string render(Writer&& w) {
  std::ostringstream ss;
  w(ss);
  return ss.str();
}

inline nlohmann::json file_echo(const fs::path& p) {
  if (p.empty()) return nullptr;
  return {{"file", p.filename().string()}, {"sha256", sha256_file(p)}};
}

inline nlohmann::json config_echo(const RunConfig& cfg) {
  return {{"input", file_echo(cfg.input)},
          {"format", cfg.input_format() == CorpusFormat::csv ? "csv" : "jsonl"},
          {"start_date", format_date(cfg.start_date)},
          {"end_date", format_date(cfg.end_date)},
          {"keyword", cfg.keyword},
          {"country", cfg.country},
          {"stopwords", file_echo(cfg.stopwords)},
          {"abusive", file_echo(cfg.abusive)},
          {"emotion_lexicon", file_echo(cfg.emotion_lexicon)},
          {"polarity_lexicon", file_echo(cfg.polarity_lexicon)},
          {"shifters", file_echo(cfg.shifters)},
          {"scoring",
           {{"window_before", cfg.scoring.window_before},
            {"window_after", cfg.scoring.window_after},
            {"amplifier_weight", cfg.scoring.amplifier_weight},
            {"adversative_weight", cfg.scoring.adversative_weight}}},
          {"bot_policy",
           {{"dup_window_seconds", cfg.bot.duplicate_window.count()},
            {"burst_per_minute", cfg.bot.burst_per_minute},
            {"min_distinct_tokens", cfg.bot.min_distinct_tokens}}},
          {"top_k", cfg.top_k},
          {"ngram_top", cfg.ngram_top},
          {"cloud_k", cfg.cloud_k}};
}

// Moves a finished staging directory into place.
inline void publish(const fs::path& staging, const fs::path& target) {
  if (!fs::exists(target)) {
    if (target.has_parent_path()) fs::create_directories(target.parent_path());
    fs::rename(staging, target);
    return;
  }
  for (const auto& entry : fs::directory_iterator(staging)) {
    fs::rename(entry.path(), target / entry.path().filename());
  }
  fs::remove_all(staging);
}

}  // namespace detail

/// load -> date -> keyword -> country -> bots -> mask -> tokenize ->
/// stopwords -> {n-grams, emotion, polarity, analytics}; writes every
/// report plus manifest.json into cfg.output_dir. Output is staged in a
/// sibling directory and only moved into place once complete, so a failed
/// run leaves no partial reports.
inline RunManifest run_pipeline(const RunConfig& cfg) {
  detail::in_stage("config", [&] { validate(cfg); });
  const Resources res = detail::in_stage("resources", [&] { return load_resources(cfg); });

  RunManifest manifest;
  Corpus corpus = load_and_filter(cfg, &manifest.stage_counts);
  if (corpus.empty()) throw StageError("filter", EmptyCorpus("no records survive filtering"));

  // Outputs name the input by file name only so runs from different
  // checkouts hash the same.
  Provenance provenance = corpus.provenance;
  provenance.source = cfg.input.filename().string();

  const Analysis a = detail::in_stage("analyze", [&] { return analyze(corpus, res, cfg.scoring); });

  std::map<std::string, std::string> files;
  detail::in_stage("report", [&] {
    files["provenance.json"] = to_json(provenance).dump(2) + "\n";
    files["final_corpus.jsonl"] = detail::render([&](std::ostream& o) { write_corpus(o, a.masked, CorpusFormat::jsonl); });

    NgramTable unigrams;
    for (int n = kMinNgram; n <= kMaxNgram; ++n) {
      NgramTable t = ngram_table(a, n);
      files["ngrams_" + std::to_string(n) + ".csv"] = detail::render([&](std::ostream& o) { write_csv(o, t, cfg.ngram_top); });
      if (n == 1) unigrams = std::move(t);
    }
    files["wordcloud.csv"] = detail::render([&](std::ostream& o) {
      csv::write_row(o, {"word", "weight"});
      for (const auto& [w, weight] : word_cloud_weights(unigrams, cfg.cloud_k)) csv::write_row(o, {w, csv::number(weight)});
    });

    files["emotions.csv"] = detail::render([&](std::ostream& o) {
      std::vector<std::string> header{"status_id"};
      for (auto name : kCategoryNames) header.emplace_back(name);
      header.emplace_back("token_total");
      csv::write_row(o, header);
      for (std::size_t i = 0; i < a.profiles.size(); ++i) {
        std::vector<std::string> row{a.masked.records[i].id};
        for (auto v : a.profiles[i].counts) row.push_back(std::to_string(v));
        row.push_back(std::to_string(a.profiles[i].token_total));
        csv::write_row(o, row);
      }
    });
    files["polarity.csv"] = detail::render([&](std::ostream& o) {
      csv::write_row(o, {"status_id", "score", "class", "n_sentences"});
      for (std::size_t i = 0; i < a.scores.size(); ++i) {
        csv::write_row(o, {a.masked.records[i].id, csv::number(a.scores[i].value),
                           std::string(to_string(classify_polarity(a.scores[i]))),
                           std::to_string(a.scores[i].n_sentences)});
      }
    });

    const auto ranked = [&](const RankedTable& t) { return detail::render([&](std::ostream& o) { write_csv(o, t); }); };
    files["mentions.csv"] = ranked(rank_mentions(a.masked, cfg.top_k));
    files["hashtags.csv"] = ranked(rank_hashtags(a.masked, cfg.top_k));
    files["locations_stated.csv"] = ranked(rank_locations(a.masked, cfg.top_k, LocationField::stated));
    files["locations_tagged.csv"] = ranked(rank_locations(a.masked, cfg.top_k, LocationField::tagged));

    const auto devices = device_group_report(a.masked, default_device_categories());
    files["devices.csv"] = detail::render([&](std::ostream& o) { write_csv(o, devices); });
    const auto daily = daily_emotion_series(a.masked, a.profiles);
    files["daily.csv"] = detail::render([&](std::ostream& o) { write_csv(o, daily); });
    const auto dist = polarity_distribution(a.scores);
    files["distribution.csv"] = detail::render([&](std::ostream& o) { write_csv(o, dist); });
    files["distribution.json"] = to_json(dist).dump(2) + "\n";
    files["summary.json"] = summary_json(a).dump(2) + "\n";
  });

  nlohmann::json stages = nlohmann::json::array();
  for (const auto& s : manifest.stage_counts) stages.push_back({{"stage", s.stage}, {"records", s.records}});
  nlohmann::json outputs = nlohmann::json::object();
  for (const auto& [name, content] : files) {
    manifest.outputs[name] = sha256_hex(content);
    outputs[name] = manifest.outputs[name];
  }
  const nlohmann::json doc = {{"stages", stages},
                              {"provenance", to_json(provenance)},
                              {"config", detail::config_echo(cfg)},
                              {"outputs", outputs}};
  manifest.manifest_json = doc.dump(2) + "\n";
  manifest.manifest_sha256 = sha256_hex(manifest.manifest_json);
  files[std::string(kManifestFile)] = manifest.manifest_json;

  fs::path target = cfg.output_dir;
  if (target.filename().empty()) target = target.parent_path();
  const fs::path staging = target.string() + ".partial";
  try {
    fs::remove_all(staging);
    fs::create_directories(staging);
    for (const auto& [name, content] : files) detail::write_text(staging / name, content);
    detail::publish(staging, target);
  } catch (...) {
    std::error_code ec;
    fs::remove_all(staging, ec);
    throw;
  }
  return manifest;
}

}  // namespace sentiscope
