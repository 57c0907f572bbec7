#include <algorithm>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"
#include "sentiscope.hpp"

namespace fs = std::filesystem;
using namespace sentiscope;

namespace {

enum ExitCode { kOk = 0, kConfig = 2, kData = 3, kInternal = 4 };

int exit_code_for(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::ConfigError:
    case ErrorKind::InvalidRange:
    case ErrorKind::InvalidN:
      return kConfig;
    default:
      return kData;
  }
}

// Options shared by every subcommand that reads a corpus.
struct CommonOptions {
  std::string config;
  std::vector<std::string> sets;
  std::string input;
  std::string format;
  std::string stopwords, abusive, emotion_lexicon, polarity_lexicon, shifters;
  bool no_filter = false;

  void attach(CLI::App* cmd, bool allow_no_filter = true) {
    cmd->add_option("--config", config, "Flat key = value config file");
    cmd->add_option("--set", sets, "Override a config key (key=value); repeatable");
    cmd->add_option("-i,--input", input, "Corpus file (.csv or .jsonl)");
    cmd->add_option("--format", format, "Corpus format: csv or jsonl");
    cmd->add_option("--stopwords", stopwords, "Stopword list");
    cmd->add_option("--abusive", abusive, "Abusive-word list used for masking");
    cmd->add_option("--emotion-lexicon", emotion_lexicon, "Emotion lexicon (TSV)");
    cmd->add_option("--polarity-lexicon", polarity_lexicon, "Polarity lexicon (CSV)");
    cmd->add_option("--shifters", shifters, "Valence shifter table (CSV)");
    if (allow_no_filter) cmd->add_flag("--no-filter", no_filter, "Skip date, keyword, country and bot filters");
  }

  RunConfig build() const {
    const fs::path data_dir = SENTISCOPE_DATA_DIR;
    RunConfig cfg;
    cfg.stopwords = data_dir / "stopwords_en.txt";
    cfg.emotion_lexicon = data_dir / "emotion_fixture.tsv";
    cfg.polarity_lexicon = data_dir / "polarity.csv";
    cfg.shifters = data_dir / "shifters.csv";
    if (!config.empty()) cfg = load_run_config(config, cfg);
    const auto set = [&](const char* key, const std::string& v) {
      if (!v.empty()) apply_setting(cfg, key, v);
    };
    set("input", input);
    set("format", format);
    set("stopwords", stopwords);
    set("abusive", abusive);
    set("emotion_lexicon", emotion_lexicon);
    set("polarity_lexicon", polarity_lexicon);
    set("shifters", shifters);
    for (const auto& kv : sets) {
      const auto eq = kv.find('=');
      if (eq == std::string::npos) throw ConfigError("--set expects key=value, got '" + kv + "'");
      apply_setting(cfg, ascii::trim(std::string_view(kv).substr(0, eq)),
                    ascii::trim(std::string_view(kv).substr(eq + 1)));
    }
    return cfg;
  }

  Corpus corpus(const RunConfig& cfg) const {
    return no_filter ? load_corpus(cfg.input, cfg.input_format()) : load_and_filter(cfg);
  }
};

// Writes to `path`, or stdout when empty.
void emit(const std::string& path, const std::string& content) {
  if (path.empty()) {
    std::cout << content;
    return;
  }
  const fs::path p(path);
  if (p.has_parent_path()) fs::create_directories(p.parent_path());
  std::ofstream out(p, std::ios::binary);
  out << content;
  if (!out) throw std::runtime_error("cannot write " + path);
}

template <typename Writer>
std::string render(Writer&& w) {
  std::ostringstream ss;
  w(ss);
  return ss.str();
}

Analysis analyze_corpus(const CommonOptions& common, RunConfig& cfg) {
  validate_inputs(cfg);
  const Corpus corpus = common.corpus(cfg);
  if (corpus.empty()) throw EmptyCorpus("no records survive filtering");
  return analyze(corpus, load_resources(cfg), cfg.scoring);
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Lexicon-driven sentiment analytics for short-text corpora"};
  app.require_subcommand(1);

  // ingest
  CommonOptions ingest_opts;
  std::string ingest_output;
  bool ingest_provenance = false;
  auto* ingest = app.add_subcommand("ingest", "Load, filter and write a corpus");
  ingest_opts.attach(ingest);
  ingest->add_option("-o,--output", ingest_output, "Output corpus (.csv or .jsonl); stdout JSONL when omitted");
  ingest->add_flag("--provenance", ingest_provenance, "Also write <output>.provenance.json (stderr without --output)");

  // ngrams
  CommonOptions ngram_opts;
  int ngram_n = 1;
  std::size_t ngram_top = 25;
  bool ngram_json = false, ngram_cloud = false;
  std::string ngram_output;
  auto* ngrams = app.add_subcommand("ngrams", "Ranked n-gram frequency table");
  ngram_opts.attach(ngrams);
  ngrams->add_option("-n,--n", ngram_n, "Gram length, 1..4");
  ngrams->add_option("--top", ngram_top, "Rows to emit; 0 for all");
  ngrams->add_flag("--json", ngram_json, "Emit JSON instead of CSV");
  ngrams->add_flag("--cloud", ngram_cloud, "Emit word-cloud weights (requires -n 1)");
  ngrams->add_option("-o,--output", ngram_output, "Output file; stdout when omitted");

  // sentiment
  CommonOptions sent_opts;
  bool sent_json = false;
  std::string sent_output;
  auto* sentiment = app.add_subcommand("sentiment", "Per-record polarity and emotion scores");
  sent_opts.attach(sentiment);
  sentiment->add_flag("--json", sent_json, "Emit the corpus summary as JSON instead of per-record CSV");
  sentiment->add_option("-o,--output", sent_output, "Output file; stdout when omitted");

  // report
  CommonOptions report_opts;
  std::string report_what, report_output, report_field = "stated";
  bool report_json = false;
  std::size_t report_top = 25;
  auto* report = app.add_subcommand("report", "Descriptive analytics tables");
  report_opts.attach(report);
  report->add_option("--what", report_what, "mentions|hashtags|locations|devices|daily|distribution")
      ->required()
      ->check(CLI::IsMember({"mentions", "hashtags", "locations", "devices", "daily", "distribution"}));
  report->add_option("--field", report_field, "Location field: stated or tagged")
      ->check(CLI::IsMember({"stated", "tagged"}));
  report->add_option("--top", report_top, "Rows for ranked tables");
  report->add_flag("--json", report_json, "Emit JSON instead of CSV");
  report->add_option("-o,--output", report_output, "Output file; stdout when omitted");

  // scenario
  std::string scen_timing, scen_input, scen_output;
  auto* scenario = app.add_subcommand("scenario", "Map a sentiment report and timing to S1..S4");
  scenario->add_option("--timing", scen_timing, "now or later")->required()->check(CLI::IsMember({"now", "later"}));
  scenario->add_option("--input", scen_input, "summary.json or distribution JSON report")->required();
  scenario->add_option("-o,--output", scen_output, "Output file; stdout when omitted");

  // run
  CommonOptions run_opts;
  std::string run_output_dir;
  auto* run = app.add_subcommand("run", "Full pipeline with manifest");
  run_opts.attach(run, false);
  run->add_option("-o,--output-dir", run_output_dir, "Report directory");

  // synth
  std::uint64_t synth_seed = 42;
  std::size_t synth_n = 1000;
  std::string synth_output, synth_ledger, synth_abusive;
  auto* synth_cmd = app.add_subcommand("synth", "Generate a synthetic corpus with a planting ledger");
  synth_cmd->add_option("--seed", synth_seed, "RNG seed");
  synth_cmd->add_option("--n", synth_n, "Record count")->check(CLI::PositiveNumber);
  synth_cmd->add_option("-o,--output", synth_output, "Corpus file (.csv or .jsonl)")->required();
  synth_cmd->add_option("--ledger", synth_ledger, "Planting ledger CSV");
  synth_cmd->add_option("--abusive", synth_abusive, "Words to plant for masking tests");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? kOk : kConfig;
  }

  try {
    if (ingest->parsed()) {
      RunConfig cfg = ingest_opts.build();
      validate_inputs(cfg);
      const Corpus corpus = ingest_opts.corpus(cfg);
      const std::string provenance = to_json(corpus.provenance).dump(2) + "\n";
      if (ingest_output.empty()) {
        write_corpus(std::cout, corpus, CorpusFormat::jsonl);
        if (ingest_provenance) std::cerr << provenance;
      } else {
        save_corpus(ingest_output, corpus, format_from_extension(ingest_output));
        if (ingest_provenance) emit(ingest_output + ".provenance.json", provenance);
      }
    } else if (ngrams->parsed()) {
      check_ngram_order(ngram_n);
      RunConfig cfg = ngram_opts.build();
      const Analysis a = analyze_corpus(ngram_opts, cfg);
      const NgramTable t = ngram_table(a, ngram_n);
      if (ngram_cloud) {
        const auto weights = word_cloud_weights(t, ngram_top == 0 ? t.entries.size() : ngram_top);
        if (ngram_json) {
          nlohmann::json j = nlohmann::json::array();
          for (const auto& [w, weight] : weights) j.push_back({{"word", w}, {"weight", weight}});
          emit(ngram_output, j.dump(2) + "\n");
        } else {
          emit(ngram_output, render([&](std::ostream& o) {
                 csv::write_row(o, {"word", "weight"});
                 for (const auto& [w, weight] : weights) csv::write_row(o, {w, csv::number(weight)});
               }));
        }
      } else if (ngram_json) {
        emit(ngram_output, to_json(t, ngram_top).dump(2) + "\n");
      } else {
        emit(ngram_output, render([&](std::ostream& o) { write_csv(o, t, ngram_top); }));
      }
    } else if (sentiment->parsed()) {
      RunConfig cfg = sent_opts.build();
      const Analysis a = analyze_corpus(sent_opts, cfg);
      if (sent_json) {
        emit(sent_output, summary_json(a).dump(2) + "\n");
      } else {
        emit(sent_output, render([&](std::ostream& o) {
               std::vector<std::string> header{"status_id", "score", "class", "n_sentences"};
               for (auto name : kCategoryNames) header.emplace_back(name);
               csv::write_row(o, header);
               for (std::size_t i = 0; i < a.scores.size(); ++i) {
                 std::vector<std::string> row{a.masked.records[i].id, csv::number(a.scores[i].value),
                                              std::string(to_string(classify_polarity(a.scores[i]))),
                                              std::to_string(a.scores[i].n_sentences)};
                 for (auto v : a.profiles[i].counts) row.push_back(std::to_string(v));
                 csv::write_row(o, row);
               }
             }));
      }
    } else if (report->parsed()) {
      RunConfig cfg = report_opts.build();
      const Analysis a = analyze_corpus(report_opts, cfg);
      std::string out;
      const auto table = [&](const RankedTable& t) {
        return report_json ? to_json(t).dump(2) + "\n" : render([&](std::ostream& o) { write_csv(o, t); });
      };
      if (report_what == "mentions") {
        out = table(rank_mentions(a.masked, report_top));
      } else if (report_what == "hashtags") {
        out = table(rank_hashtags(a.masked, report_top));
      } else if (report_what == "locations") {
        out = table(rank_locations(a.masked, report_top,
                                   report_field == "tagged" ? LocationField::tagged : LocationField::stated));
      } else if (report_what == "devices") {
        const auto r = device_group_report(a.masked, default_device_categories());
        out = report_json ? to_json(r).dump(2) + "\n" : render([&](std::ostream& o) { write_csv(o, r); });
      } else if (report_what == "daily") {
        const auto s = daily_emotion_series(a.masked, a.profiles);
        out = report_json ? to_json(s).dump(2) + "\n" : render([&](std::ostream& o) { write_csv(o, s); });
      } else {
        const auto d = polarity_distribution(a.scores);
        if (report_json) {
          nlohmann::json j = to_json(d);
          j["emotions"] = to_json(aggregate_profiles(a.profiles));
          out = j.dump(2) + "\n";
        } else {
          out = render([&](std::ostream& o) { write_csv(o, d); });
        }
      }
      emit(report_output, out);
    } else if (scenario->parsed()) {
      std::ifstream in(scen_input);
      if (!in) throw FileNotFound(scen_input);
      nlohmann::json doc;
      try {
        doc = nlohmann::json::parse(in);
      } catch (const nlohmann::json::exception& e) {
        throw SchemaError(scen_input + ": " + e.what());
      }
      SentimentTrend trend;
      try {
        trend = trend_from_report(doc);
      } catch (const nlohmann::json::exception& e) {
        throw SchemaError(scen_input + ": " + e.what());
      }
      const Timing timing = *parse_timing(scen_timing);
      emit(scen_output, to_json(classify_scenario(trend, timing), trend, timing).dump(2) + "\n");
    } else if (run->parsed()) {
      RunConfig cfg = run_opts.build();
      if (!run_output_dir.empty()) cfg.output_dir = run_output_dir;
      const RunManifest m = run_pipeline(cfg);
      for (const auto& s : m.stage_counts) std::cout << s.stage << '\t' << s.records << '\n';
      std::cout << "manifest_sha256\t" << m.manifest_sha256 << '\n';
    } else if (synth_cmd->parsed()) {
      std::vector<std::string> abusive;
      if (!synth_abusive.empty()) {
        const WordSet words = load_word_list(synth_abusive);
        abusive.assign(words.begin(), words.end());
        std::sort(abusive.begin(), abusive.end());
      }
      const auto sc = synth::generate(synth_seed, synth_n, abusive);
      save_corpus(synth_output, sc.corpus, format_from_extension(synth_output));
      if (!synth_ledger.empty()) {
        std::ofstream out(synth_ledger, std::ios::binary);
        synth::write_ledger(out, sc.ledger);
        if (!out) throw std::runtime_error("cannot write " + synth_ledger);
      }
    }
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << '\n';
    return exit_code_for(e.kind());
  } catch (const std::exception& e) {
    std::cerr << "internal error: " << e.what() << '\n';
    return kInternal;
  }
  return kOk;
}
