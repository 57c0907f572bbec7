#include <gtest/gtest.h>

#include <sys/wait.h>

#include <array>
#include <cstdio>
#include <filesystem>
#include <fstream>

#include "sentiscope/pipeline.hpp"

using namespace sentiscope;
namespace fs = std::filesystem;

namespace {

const fs::path kFixtures = SENTISCOPE_FIXTURES;
const std::string kCli = SENTISCOPE_CLI;
const std::string kCorpus = (kFixtures / "synthetic_seed42.jsonl").string();

struct Result {
  int code = -1;
  std::string out;
};

Result run(const std::string& args) {
  Result r;
  FILE* pipe = ::popen((kCli + " " + args + " 2>/dev/null").c_str(), "r");
  if (!pipe) return r;
  std::array<char, 4096> buf{};
  std::size_t n;
  while ((n = std::fread(buf.data(), 1, buf.size(), pipe)) > 0) r.out.append(buf.data(), n);
  const int status = ::pclose(pipe);
  r.code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
  return r;
}

struct TempDir {
  fs::path path;
  TempDir() {
    path = fs::temp_directory_path() /
           (std::string("sentiscope_cli_") + ::testing::UnitTest::GetInstance()->current_test_info()->name());
    fs::remove_all(path);
    fs::create_directories(path);
  }
  ~TempDir() { fs::remove_all(path); }
};

std::string q(const fs::path& p) { return "'" + p.string() + "'"; }

}  // namespace

TEST(Cli, NoSubcommandIsUsageError) { EXPECT_EQ(run("").code, 2); }

TEST(Cli, UnknownOptionIsUsageError) { EXPECT_EQ(run("ngrams --bogus").code, 2); }

TEST(Cli, InvalidNIsUsageError) { EXPECT_EQ(run("ngrams -i " + kCorpus + " -n 5").code, 2); }

TEST(Cli, MissingInputIsDataError) { EXPECT_EQ(run("ngrams -i /nonexistent.jsonl -n 1").code, 3); }

TEST(Cli, UnknownConfigKeyIsUsageError) { EXPECT_EQ(run("ngrams -i " + kCorpus + " --set colour=blue").code, 2); }

TEST(Cli, NgramsCsvAndJson) {
  const Result csv = run("ngrams -i " + kCorpus + " -n 2 --top 5");
  ASSERT_EQ(csv.code, 0);
  EXPECT_EQ(csv.out.rfind("rank,gram,count", 0), 0u) << csv.out;
  const Result json = run("ngrams -i " + kCorpus + " -n 1 --top 3 --json");
  ASSERT_EQ(json.code, 0);
  const auto doc = nlohmann::json::parse(json.out);
  EXPECT_EQ(doc["entries"].size(), 3u);
}

TEST(Cli, SentimentSummaryMatchesRun) {
  TempDir tmp;
  const Result s = run("sentiment --config " + q(kFixtures / "golden.conf") + " --json");
  ASSERT_EQ(s.code, 0);
  ASSERT_EQ(run("run --config " + q(kFixtures / "golden.conf") + " -o " + q(tmp.path / "out")).code, 0);
  EXPECT_EQ(nlohmann::json::parse(s.out), nlohmann::json::parse(read_file(tmp.path / "out" / "summary.json")));
}

TEST(Cli, RunPrintsGoldenHash) {
  TempDir tmp;
  const Result r = run("run --config " + q(kFixtures / "golden.conf") + " -o " + q(tmp.path / "out"));
  ASSERT_EQ(r.code, 0);
  std::string golden = read_file(kFixtures / "golden_manifest.sha256");
  golden.erase(golden.find_last_not_of(" \r\n") + 1);
  EXPECT_NE(r.out.find("manifest_sha256\t" + golden), std::string::npos) << r.out;
  EXPECT_NE(r.out.find("bots\t780"), std::string::npos) << r.out;
}

TEST(Cli, ScenarioFromReport) {
  TempDir tmp;
  const fs::path report = tmp.path / "report.json";
  std::ofstream(report) << R"({"shares":{"positive":0.4827,"negative":0.3682},"emotions":{"counts":{"trust":5,"anticipation":4}}})";
  const Result r = run("scenario --timing later --input " + q(report));
  ASSERT_EQ(r.code, 0);
  const auto doc = nlohmann::json::parse(r.out);
  EXPECT_EQ(doc["id"], "S2");
  EXPECT_EQ(doc["narrative_key"], "b");
  EXPECT_EQ(doc["inputs"]["dominant_emotions"], (nlohmann::json{"trust", "anticipation"}));
}

TEST(Cli, ScenarioTiedTrendFails) {
  TempDir tmp;
  const fs::path report = tmp.path / "tied.json";
  std::ofstream(report) << R"({"shares":{"positive":0.4,"negative":0.4},"emotions":{"counts":{}}})";
  EXPECT_EQ(run("scenario --timing now --input " + q(report)).code, 3);
  EXPECT_EQ(run("scenario --timing someday --input " + q(report)).code, 2);
}

TEST(Cli, ReportTables) {
  const Result tags = run("report -i " + kCorpus + " --what hashtags --top 3");
  ASSERT_EQ(tags.code, 0);
  EXPECT_EQ(tags.out.rfind("rank,key,count", 0), 0u);
  const Result dist = run("report -i " + kCorpus + " --what distribution --json");
  ASSERT_EQ(dist.code, 0);
  const auto doc = nlohmann::json::parse(dist.out);
  EXPECT_TRUE(doc.contains("shares"));
  EXPECT_TRUE(doc.contains("emotions"));
  EXPECT_EQ(run("report -i " + kCorpus + " --what devices").code, 0);
  EXPECT_EQ(run("report -i " + kCorpus + " --what weather").code, 2);
}

TEST(Cli, IngestWritesFilteredCorpus) {
  TempDir tmp;
  const fs::path out = tmp.path / "clean.jsonl";
  ASSERT_EQ(run("ingest -i " + kCorpus + " -o " + q(out) + " --provenance").code, 0);
  EXPECT_EQ(load_corpus(out, CorpusFormat::jsonl).size(), 780u);
  const auto prov = nlohmann::json::parse(read_file(out.string() + ".provenance.json"));
  EXPECT_EQ(prov["parsed"], 1000);
}

TEST(Cli, SynthIsDeterministic) {
  TempDir tmp;
  ASSERT_EQ(run("synth --seed 5 --n 200 -o " + q(tmp.path / "a.jsonl")).code, 0);
  ASSERT_EQ(run("synth --seed 5 --n 200 -o " + q(tmp.path / "b.jsonl")).code, 0);
  EXPECT_EQ(read_file(tmp.path / "a.jsonl"), read_file(tmp.path / "b.jsonl"));
}
