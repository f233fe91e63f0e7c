// Copyright 2026 The memfix Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "memfix/experiment.h"

#include <gtest/gtest.h>

#include <algorithm>
#include <fstream>
#include <regex>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "memfix/dataset.h"
#include "memfix/error.h"
#include "memfix/text.h"
#include "test_support.h"

namespace memfix {
namespace {

using nlohmann::json;
using testing::FakeVerifierPath;
using testing::Fixture;

ErrorCode CodeOf(const std::function<void()>& body) {
  try {
    body();
  } catch (const Error& e) {
    return e.code();
  }
  return ErrorCode::kInternal;
}

json BaseConfig(const std::filesystem::path& scratch) {
  return {
      {"seed_corpus", Fixture("seed_corpus").string()},
      {"dataset", (scratch / "dataset").string()},
      {"runs_dir", (scratch / "runs").string()},
      {"verifier",
       {{"binary", FakeVerifierPath().string()}, {"timeout_seconds", 10}, {"workers", 4}}},
      {"compiler", {{"enabled", false}}},
      {"llm",
       {{"backend", "mock"},
        {"mock_script", Fixture("mock/echo.json").string()},
        {"retry_base_delay_ms", 0}}},
      {"repair",
       {{"prompts",
         json::array({{{"template", 0}, {"strategy", "one-line"}},
                      {{"template", 1}, {"strategy", "one-line"}}})},
        {"temperatures", {0.5}},
        {"history_formats", {"lso"}},
        {"max_attempts", 1},
        {"sample_count", 3},
        {"seed", 7},
        {"workers", 2}}},
  };
}

class PipelineTest : public ::testing::Test {
 protected:
  PipelineTest() : scratch_("memfix-exp-") {}

  ExperimentConfig Config(const json& patch = json::object()) const {
    return ExperimentConfig::FromJson(MergeConfig(BaseConfig(scratch_.path()), patch),
                                      scratch_.path());
  }

  std::filesystem::path root() const { return scratch_.path(); }

 private:
  ScratchDirectory scratch_;
};

TEST(ConfigTest, UnknownKeysAreRejected) {
  ScratchDirectory dir("memfix-cfg-");
  json j = BaseConfig(dir.path());
  j["verifier"]["timeout"] = 3;
  EXPECT_EQ(CodeOf([&] { ExperimentConfig::FromJson(j, dir.path()); }),
            ErrorCode::kConfigError);
  json top = BaseConfig(dir.path());
  top["extra"] = true;
  EXPECT_EQ(CodeOf([&] { ExperimentConfig::FromJson(top, dir.path()); }),
            ErrorCode::kConfigError);
}

TEST(ConfigTest, WrongTypesAndBadValuesAreConfigErrors) {
  ScratchDirectory dir("memfix-cfg-");
  for (const json& patch :
       {json{{"verifier", {{"timeout_seconds", "ten"}}}},
        json{{"repair", {{"workers", 0}}}},
        json{{"repair", {{"temperatures", json::array()}}}},
        json{{"repair", {{"history_formats", {"sideways"}}}}},
        json{{"llm", {{"backend", "carrier-pigeon"}}}},
        json{{"llm", {{"mock_script", "/nonexistent/script.json"}}}},
        json{{"mutation", {{"operators", {"Teleport"}}}}}}) {
    const json j = MergeConfig(BaseConfig(dir.path()), patch);
    EXPECT_EQ(CodeOf([&] { ExperimentConfig::FromJson(j, dir.path()); }),
              ErrorCode::kConfigError)
        << patch.dump();
  }
}

TEST(ConfigTest, ContextualWithIterativeHistoryIsRejected) {
  ScratchDirectory dir("memfix-cfg-");
  const json j = MergeConfig(
      BaseConfig(dir.path()),
      {{"repair",
        {{"prompts", json::array({{{"template", 0}, {"strategy", "contextual"}}})},
         {"history_formats", {"forward"}},
         {"max_attempts", 3}}}});
  EXPECT_EQ(CodeOf([&] { ExperimentConfig::FromJson(j, dir.path()); }),
            ErrorCode::kConfigError);
}

TEST(ConfigTest, DefaultPromptSelectionIsTheFullEnumeration) {
  ScratchDirectory dir("memfix-cfg-");
  json j = BaseConfig(dir.path());
  j["repair"].erase("prompts");
  const ExperimentConfig c = ExperimentConfig::FromJson(j, dir.path());
  EXPECT_EQ(c.prompt_specs.size(), 144u);
}

TEST(ConfigTest, RelativePathsResolveAgainstTheConfigDirectory) {
  ScratchDirectory dir("memfix-cfg-");
  json j = BaseConfig(dir.path());
  j["dataset"] = "data/set";
  const ExperimentConfig c = ExperimentConfig::FromJson(j, dir.path());
  EXPECT_EQ(c.dataset, dir.path() / "data/set");
  EXPECT_EQ(c.verifier.working_dir, c.dataset);
}

TEST(ConfigTest, LoadAppliesOverrides) {
  ScratchDirectory dir("memfix-cfg-");
  WriteFile(dir.path() / "c.json", BaseConfig(dir.path()).dump());
  const ExperimentConfig c = ExperimentConfig::Load(
      dir.path() / "c.json", {{"repair", {{"sample_count", 11}}}});
  EXPECT_EQ(c.sample_count, 11);
  EXPECT_EQ(c.seed, 7u);
  EXPECT_EQ(CodeOf([&] { ExperimentConfig::Load(dir.path() / "missing.json"); }),
            ErrorCode::kConfigError);
  WriteFile(dir.path() / "bad.json", "{ not json");
  EXPECT_EQ(CodeOf([&] { ExperimentConfig::Load(dir.path() / "bad.json"); }),
            ErrorCode::kConfigError);
}

TEST(MergeConfigTest, MergesObjectsRecursivelyAndNullDeletes) {
  const json base = {{"a", 1}, {"b", {{"c", 2}, {"d", 3}}}, {"e", {1, 2}}};
  const json patch = {{"b", {{"c", 20}, {"d", nullptr}}}, {"e", {9}}, {"f", "x"}};
  const json want = {{"a", 1}, {"b", {{"c", 20}}}, {"e", {9}}, {"f", "x"}};
  EXPECT_EQ(MergeConfig(base, patch), want);
  EXPECT_EQ(MergeConfig(base, json::object()), base);
}

TEST(SelectSamplesTest, DeterministicUniqueAndInRange) {
  for (std::uint64_t seed : {0ull, 1ull, 42ull, 123456789ull}) {
    for (std::size_t pop : {0u, 1u, 5u, 100u}) {
      for (std::size_t count : {0u, 1u, 3u, 100u, 1000u}) {
        const auto a = SelectSamples(pop, count, seed);
        EXPECT_EQ(a, SelectSamples(pop, count, seed));
        EXPECT_EQ(a.size(), std::min(pop, count));
        std::set<std::size_t> unique(a.begin(), a.end());
        EXPECT_EQ(unique.size(), a.size());
        for (std::size_t i : a) EXPECT_LT(i, pop);
      }
    }
  }
}

TEST(SelectSamplesTest, PrefixIsStableAcrossCounts) {
  const auto small = SelectSamples(50, 5, 9);
  const auto large = SelectSamples(50, 20, 9);
  EXPECT_TRUE(std::equal(small.begin(), small.end(), large.begin()));
  EXPECT_NE(SelectSamples(50, 20, 9), SelectSamples(50, 20, 10));
}

TEST(SelectSamplesTest, EveryIndexIsReachable) {
  std::set<std::size_t> seen;
  for (std::uint64_t seed = 0; seed < 200; ++seed) {
    seen.insert(SelectSamples(10, 1, seed).front());
  }
  EXPECT_EQ(seen.size(), 10u);
}

TEST_F(PipelineTest, RunIdHasTimestampAndConfigDigest) {
  const std::string id = MakeRunId(Config());
  EXPECT_TRUE(std::regex_match(id, std::regex(R"(\d{8}T\d{6}Z-[0-9a-f]{8})"))) << id;
  EXPECT_EQ(id.substr(16), MakeRunId(Config()).substr(16));
  EXPECT_NE(id.substr(16),
            MakeRunId(Config({{"repair", {{"seed", 8}}}})).substr(16));
}

TEST_F(PipelineTest, BuildCorpusWritesBasesAndSupportDirectories) {
  const CorpusSummary s = BuildCorpus(Config());
  EXPECT_EQ(s.files_read, 5u);
  EXPECT_EQ(s.samples, 5u);
  const auto samples = LoadDataset(root() / "dataset");
  ASSERT_EQ(samples.size(), 5u);
  for (const Sample& sample : samples) {
    EXPECT_FALSE(sample.mutation_id.has_value());
    EXPECT_EQ(sample.label, Label::kUnlabeled);
    for (const std::string& line : LineBuffer::Split(sample.source_text).lines) {
      if (line.find("__VERIFIER_assume") != std::string::npos ||
          line.find("__VERIFIER_assert") != std::string::npos) {
        EXPECT_TRUE(line.starts_with("extern void ")) << sample.id << ": " << line;
      }
    }
    EXPECT_TRUE(std::filesystem::is_regular_file(root() / "dataset" /
                                                 SampleRelativePath(sample)));
  }
  EXPECT_TRUE(std::filesystem::is_regular_file(
      root() / "dataset/includes/keras2c/k2c_tensor_include.h"));
  EXPECT_TRUE(
      std::filesystem::is_regular_file(root() / "dataset/networks/policy_weights.h"));
}

TEST_F(PipelineTest, BuildCorpusRejectsMissingOrEmptySeed) {
  std::filesystem::create_directories(root() / "empty");
  EXPECT_EQ(CodeOf([&] {
              BuildCorpus(Config({{"seed_corpus", (root() / "empty").string()}}));
            }),
            ErrorCode::kConfigError);
  EXPECT_EQ(CodeOf([&] {
              BuildCorpus(Config({{"seed_corpus", (root() / "absent").string()}}));
            }),
            ErrorCode::kConfigError);
}

TEST_F(PipelineTest, BuildCorpusDropsWhitespaceDuplicates) {
  const auto seed = root() / "seed";
  std::filesystem::create_directories(seed / "other");
  WriteFile(seed / "other/a.c", "int main(void) { return 0; }\n");
  WriteFile(seed / "other/b.c", "int main(void)\n{\n  return 0;\n}\n");
  WriteFile(seed / "other/c.c", "int main(void) { return 1; }\n");
  WriteFile(seed / "other/d.c",
            "int main(void) { __VERIFIER_assume(1);\n return 1; }\n");
  const CorpusSummary s = BuildCorpus(Config({{"seed_corpus", seed.string()}}));
  EXPECT_EQ(s.files_read, 4u);
  EXPECT_EQ(s.samples, 2u);
}

TEST_F(PipelineTest, MutateIsRepeatableAndWritesPatches) {
  const ExperimentConfig c = Config();
  BuildCorpus(c);
  const MutateSummary first = Mutate(c);
  EXPECT_EQ(first.bases, 5u);
  EXPECT_GE(first.mutants, 20 * first.bases);
  const auto ids_of = [&] {
    std::vector<std::string> ids;
    for (const Sample& s : LoadDataset(c.dataset)) ids.push_back(s.id);
    return ids;
  };
  const auto ids = ids_of();
  EXPECT_EQ(ids.size(), first.bases + first.mutants);
  const MutateSummary second = Mutate(c);
  EXPECT_EQ(second.mutants, first.mutants);
  EXPECT_EQ(ids_of(), ids);

  std::size_t patches = 0;
  for (const auto& entry : std::filesystem::recursive_directory_iterator(c.dataset)) {
    if (entry.path().extension() == ".patch") ++patches;
  }
  EXPECT_EQ(patches, first.mutants);
}

TEST_F(PipelineTest, MutateWithNoOperatorsAddsNothing) {
  const ExperimentConfig c = Config({{"mutation", {{"operators", json::array()}}}});
  BuildCorpus(c);
  const MutateSummary s = Mutate(c);
  EXPECT_EQ(s.bases, 5u);
  EXPECT_EQ(s.mutants, 0u);
}

TEST_F(PipelineTest, ClassifyLabelsEverythingAndResumes) {
  const ExperimentConfig c = Config({{"mutation", {{"operators", {"RelationalReplace"}}}}});
  BuildCorpus(c);
  const MutateSummary m = Mutate(c);
  ASSERT_GT(m.mutants, 0u);
  const ClassifySummary first = Classify(c);
  EXPECT_EQ(first.labeled, m.bases + m.mutants);
  EXPECT_EQ(first.skipped, 0u);
  EXPECT_EQ(first.safe + first.unsafe + first.unknown, first.labeled);
  EXPECT_GT(first.unsafe, 0u);
  EXPECT_GT(first.safe, 0u);
  for (const Sample& s : LoadDataset(c.dataset)) {
    EXPECT_NE(s.label, Label::kUnlabeled) << s.id;
    if (s.label == Label::kUnsafe) EXPECT_TRUE(s.fault_line.has_value()) << s.id;
  }

  const ClassifySummary again = Classify(c);
  EXPECT_EQ(again.labeled, 0u);
  EXPECT_EQ(again.skipped, first.labeled);

  // Regenerating identical mutants keeps their labels.
  Mutate(c);
  EXPECT_EQ(Classify(c).labeled, 0u);
}

TEST_F(PipelineTest, ClassifyUsesTheInjectedVerifier) {
  const ExperimentConfig c = Config({{"mutation", {{"operators", json::array()}}}});
  BuildCorpus(c);
  const ClassifySummary s = Classify(c, [] {
    return std::make_unique<testing::MarkerVerifier>("never-present-marker", 4);
  });
  EXPECT_EQ(s.unsafe, 5u);
  for (const Sample& sample : LoadDataset(c.dataset)) {
    EXPECT_EQ(sample.fault_line, 4);
  }
}

TEST_F(PipelineTest, ClassifyMissingBinaryIsARuntimeError) {
  const ExperimentConfig c =
      Config({{"mutation", {{"operators", json::array()}}},
              {"verifier", {{"binary", "/nonexistent/esbmc"}}}});
  BuildCorpus(c);
  EXPECT_EQ(CodeOf([&] { Classify(c); }), ErrorCode::kBinaryNotFound);
}

TEST_F(PipelineTest, RepairWithoutUnsafeSamplesIsAConfigError) {
  const ExperimentConfig c = Config({{"mutation", {{"operators", json::array()}}}});
  BuildCorpus(c);
  Classify(c);
  EXPECT_EQ(CodeOf([&] { RunRepair(c); }), ErrorCode::kConfigError);
}

json StripWall(const std::string& jsonl) {
  json out = json::array();
  std::istringstream in(jsonl);
  for (std::string line; std::getline(in, line);) {
    if (line.empty()) continue;
    json j = json::parse(line);
    j.erase("timing");
    out.push_back(j);
  }
  return out;
}

TEST_F(PipelineTest, RepairRunWritesOneDirectoryPerJobAndIsReproducible) {
  const ExperimentConfig c = Config({{"mutation", {{"operators", {"RelationalReplace"}}}}});
  BuildCorpus(c);
  Mutate(c);
  const ClassifySummary labels = Classify(c);
  ASSERT_GE(labels.unsafe, 3u);

  RepairRunOptions options;
  options.run_id = "first";
  const RunSummary a = RunRepair(c, options);
  EXPECT_EQ(a.run_dir, root() / "runs/first");
  EXPECT_EQ(a.jobs, 6u);
  EXPECT_EQ(a.records, 6u);
  EXPECT_EQ(a.failed_jobs, 0u);
  for (const char* name : {"config.json", "selection.json", "jobs.jsonl", "records.jsonl"}) {
    EXPECT_TRUE(std::filesystem::is_regular_file(a.run_dir / name)) << name;
  }

  const json selection = json::parse(ReadFile(a.run_dir / "selection.json"));
  ASSERT_EQ(selection["samples"].size(), 3u);
  std::size_t job_dirs = 0;
  for (const auto& sample : selection["samples"]) {
    std::string slug = sample.get<std::string>();
    for (char& ch : slug) {
      if (!std::isalnum(static_cast<unsigned char>(ch)) && ch != '.' && ch != '-' &&
          ch != '_') {
        ch = '_';
      }
    }
    const auto dir = a.run_dir / slug;
    ASSERT_TRUE(std::filesystem::is_directory(dir)) << dir;
    for (const auto& entry : std::filesystem::directory_iterator(dir)) {
      if (entry.is_directory()) ++job_dirs;
    }
  }
  EXPECT_EQ(job_dirs, 6u);

  std::istringstream jobs(ReadFile(a.run_dir / "jobs.jsonl"));
  std::set<std::string> keys;
  for (std::string line; std::getline(jobs, line);) {
    const json j = json::parse(line);
    keys.insert(j["prompt_key"].get<std::string>());
    EXPECT_EQ(j["attempts"], 1);
    EXPECT_EQ(j["initial_verdict"], "Unsafe");
  }
  EXPECT_EQ(keys, (std::set<std::string>{"0.0.0/one-line/bt", "1.0.0/one-line/bt"}));

  options.run_id = "second";
  const RunSummary b = RunRepair(c, options);
  EXPECT_EQ(ReadFile(b.run_dir / "selection.json"), ReadFile(a.run_dir / "selection.json"));
  EXPECT_EQ(ReadFile(b.run_dir / "jobs.jsonl"), ReadFile(a.run_dir / "jobs.jsonl"));
  EXPECT_EQ(StripWall(ReadFile(b.run_dir / "records.jsonl")),
            StripWall(ReadFile(a.run_dir / "records.jsonl")));

  const auto report = Report(a.run_dir);
  EXPECT_EQ(report, a.run_dir / "report");
  EXPECT_TRUE(std::filesystem::is_regular_file(report / "records.csv"));
  EXPECT_TRUE(std::filesystem::is_regular_file(report / "summary.txt"));
}

TEST_F(PipelineTest, ReportWithoutRecordsIsEmptyInput) {
  std::filesystem::create_directories(root() / "runs/nothing");
  EXPECT_EQ(CodeOf([&] { Report(root() / "runs/nothing"); }), ErrorCode::kEmptyInput);
}

}  // namespace
}  // namespace memfix
