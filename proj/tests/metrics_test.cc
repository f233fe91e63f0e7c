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


#include <algorithm>
#include <cmath>
#include <filesystem>
#include <random>
#include <string>
#include <vector>

#include <gtest/gtest.h>

#include "memfix/error.h"
#include "memfix/metrics.h"
#include "memfix/text.h"
#include "test_support.h"

namespace memfix {
namespace {

MetricRecord Rec(std::string job, std::string prompt, bool compiled, bool verified,
                 int attempt = 0, int max_attempts = 1) {
  MetricRecord r;
  r.job_id = std::move(job);
  r.sample_id = "s";
  r.prompt_id = std::move(prompt);
  r.template_family = "old";
  r.source_strategy = SourceStrategy::kOneLine;
  r.feedback_kind = FeedbackKind::kViolatedProperty;
  r.feedback_position = FeedbackPosition::kAfterSource;
  r.temperature = 1.0;
  r.compiled = compiled;
  r.verified = verified;
  r.attempt_index = attempt;
  r.max_attempts = max_attempts;
  r.verdict = verified ? Verdict::kSafe : Verdict::kUnsafe;
  return r;
}

std::size_t CountLinesOf(const std::string& text) {
  return static_cast<std::size_t>(std::count(text.begin(), text.end(), '\n'));
}

TEST(PercentTest, TwoDecimalsHalfUp) {
  EXPECT_EQ(Percent::Of(63, 100).ToString(), "63.00");
  EXPECT_EQ(Percent::Of(0, 400).ToString(), "0.00");
  EXPECT_EQ(Percent::Of(1, 3).ToString(), "33.33");
  EXPECT_EQ(Percent::Of(2, 3).ToString(), "66.67");
  EXPECT_EQ(Percent::Of(1, 20000).ToString(), "0.01");  // 0.005 rounds up
  EXPECT_EQ(Percent::Of(1, 40000).ToString(), "0.00");
  EXPECT_EQ(Percent::Of(400, 400).ToString(), "100.00");
  EXPECT_EQ(Percent::Of(0, 0).ToString(), "0.00");
  EXPECT_DOUBLE_EQ(Percent::Of(63, 100).value(), 63.0);
}

TEST(SummarizeTest, LinearInterpolationQuartiles) {
  const Distribution d = Summarize({4.0, 1.0, 3.0, 2.0});
  EXPECT_DOUBLE_EQ(d.min, 1.0);
  EXPECT_DOUBLE_EQ(d.q1, 1.75);
  EXPECT_DOUBLE_EQ(d.median, 2.5);
  EXPECT_DOUBLE_EQ(d.q3, 3.25);
  EXPECT_DOUBLE_EQ(d.max, 4.0);
  const Distribution five = Summarize({0.0, 0.25, 0.5, 0.75, 1.0});
  EXPECT_DOUBLE_EQ(five.q1, 0.25);
  EXPECT_DOUBLE_EQ(five.median, 0.5);
  EXPECT_DOUBLE_EQ(five.q3, 0.75);
}

TEST(SummarizeTest, SingleValue) {
  const Distribution d = Summarize({0.42});
  EXPECT_EQ(d, (Distribution{0.42, 0.42, 0.42, 0.42, 0.42}));
  EXPECT_THROW(Summarize({}), Error);
}

TEST(AggregateTest, OldOneLineCompileAndVerifyCells) {
  std::vector<MetricRecord> compile_cell;
  for (int i = 0; i < 100; ++i) {
    compile_cell.push_back(Rec("j" + std::to_string(i), "old.0.1", i < 63, false));
  }
  const SummaryTable t = Aggregate(compile_cell, {Dimension::kTemplateFamily,
                                                  Dimension::kSourceStrategy});
  ASSERT_EQ(t.groups.size(), 1u);
  EXPECT_EQ(t.groups[0].key, (std::vector<std::string>{"old", "one-line"}));
  EXPECT_EQ(t.groups[0].compile_rate.ToString(), "63.00");

  std::vector<MetricRecord> verify_cell;
  for (int i = 0; i < 400; ++i) {
    verify_cell.push_back(Rec("v" + std::to_string(i), "old.0.1", i % 2 == 0, false));
  }
  const SummaryTable v = Aggregate(verify_cell, {Dimension::kTemplateFamily});
  EXPECT_EQ(v.groups[0].verify_rate.ToString(), "0.00");
  EXPECT_EQ(v.groups[0].records, 400u);
}

TEST(AggregateTest, EmptyInput) {
  try {
    Aggregate({}, {Dimension::kPrompt});
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::kEmptyInput);
  }
}

std::vector<MetricRecord> RandomRecords(std::uint32_t seed, std::size_t n) {
  std::mt19937 rng(seed);
  std::vector<MetricRecord> out;
  const char* prompts[] = {"1.0.0", "3.0.1", "9.2.2", "11.5.1", "old.0.2"};
  for (std::size_t i = 0; i < n; ++i) {
    MetricRecord r = Rec("job" + std::to_string(rng() % 40), prompts[rng() % 5],
                         rng() % 3 != 0, rng() % 5 == 0,
                         static_cast<int>(rng() % 3), 3);
    r.temperature = std::vector<double>{0.0, 0.4, 0.7, 1.0, 1.3}[rng() % 5];
    r.syntax_score = (rng() % 1001) / 1000.0;
    r.relevance = (rng() % 1001) / 1000.0;
    r.history_format = static_cast<HistoryFormat>(rng() % 3);
    out.push_back(r);
  }
  return out;
}

TEST(AggregateTest, PermutationInvariant) {
  auto records = RandomRecords(1, 500);
  for (const auto& dims : StandardGroupings()) {
    const SummaryTable a = Aggregate(records, dims);
    auto shuffled = records;
    std::shuffle(shuffled.begin(), shuffled.end(), std::mt19937(99));
    EXPECT_EQ(a, Aggregate(shuffled, dims));
  }
}

TEST(AggregateTest, GroupsRecomposeToGlobalRates) {
  const auto records = RandomRecords(2, 700);
  const GroupSummary all = Aggregate(records, {}).groups.at(0);
  for (const auto& dims : StandardGroupings()) {
    const SummaryTable t = Aggregate(records, dims);
    std::size_t n = 0;
    std::size_t compiled = 0;
    std::size_t verified = 0;
    double weighted = 0.0;
    for (const auto& g : t.groups) {
      n += g.records;
      compiled += g.compiled;
      verified += g.verified;
      weighted += g.verify_rate.value() * static_cast<double>(g.records);
    }
    EXPECT_EQ(n, all.records);
    EXPECT_EQ(compiled, all.compiled);
    EXPECT_EQ(verified, all.verified);
    EXPECT_NEAR(weighted / static_cast<double>(n), all.verify_rate.value(), 0.01);
  }
}

TEST(AggregateTest, KeysSortNumerically) {
  std::vector<MetricRecord> records;
  for (const char* p : {"11.0.1", "2.0.1", "old.0.1", "9-2.0.1", "2.0.0"}) {
    records.push_back(Rec(p, p, true, false));
  }
  const SummaryTable t = Aggregate(records, {Dimension::kPrompt});
  std::vector<std::string> keys;
  for (const auto& g : t.groups) keys.push_back(g.key[0]);
  EXPECT_EQ(keys, (std::vector<std::string>{"2.0.0", "2.0.1", "9-2.0.1", "11.0.1",
                                            "old.0.1"}));
}

TEST(AggregateTest, SuccessByAttemptCountsFirstVerifiedAttempt) {
  std::vector<MetricRecord> records = {
      Rec("a", "9-2.0.1", true, true, 0, 3),
      Rec("b", "9-2.0.1", true, false, 0, 3), Rec("b", "9-2.0.1", true, true, 1, 3),
      Rec("c", "9-2.0.1", true, false, 0, 3), Rec("c", "9-2.0.1", false, false, 1, 3),
      Rec("c", "9-2.0.1", true, true, 2, 3),
      Rec("d", "9-2.0.1", true, false, 0, 3), Rec("d", "9-2.0.1", true, false, 1, 3),
      Rec("d", "9-2.0.1", true, false, 2, 3),
  };
  const SummaryTable t = Aggregate(records, {});
  ASSERT_EQ(t.max_attempts, 3);
  const GroupSummary& g = t.groups[0];
  EXPECT_EQ(g.jobs, 4u);
  EXPECT_EQ(g.success_by_attempt, (std::vector<std::size_t>{1, 1, 1}));
  EXPECT_EQ(g.success_by_attempt_rate[0].ToString(), "25.00");
  const std::string csv = SummaryCsv(t);
  const std::string header = csv.substr(0, csv.find('\n'));
  for (int k = 0; k < 3; ++k) {
    EXPECT_NE(header.find("success_attempt_" + std::to_string(k)), std::string::npos);
  }
  EXPECT_EQ(header.find("success_attempt_3"), std::string::npos);
}

TEST(EmitReportTest, TwoGroupsGiveTwoRows) {
  std::vector<MetricRecord> records = {Rec("a", "1.0.0", true, false),
                                       Rec("b", "3.0.1", false, false),
                                       Rec("c", "3.0.1", true, true)};
  const std::string csv = SummaryCsv(Aggregate(records, {Dimension::kPrompt}));
  EXPECT_EQ(CountLinesOf(csv), 3u);
  EXPECT_TRUE(csv.starts_with("prompt,records,jobs,compiled,verified,compile_pct,verify_pct,"));
}

TEST(EmitReportTest, ByteIdenticalOnReEmit) {
  const auto records = RandomRecords(3, 200);
  ScratchDirectory a("memfix-report-a");
  ScratchDirectory b("memfix-report-b");
  EmitReport(records, StandardGroupings(), a.path());
  EmitReport(records, StandardGroupings(), b.path());
  std::size_t files = 0;
  for (const auto& entry : std::filesystem::directory_iterator(a.path())) {
    ++files;
    const auto other = b.path() / entry.path().filename();
    ASSERT_TRUE(std::filesystem::exists(other));
    EXPECT_EQ(ReadFile(entry.path()), ReadFile(other)) << entry.path();
  }
  EXPECT_EQ(files, StandardGroupings().size() + 2);
  const std::string summary = ReadFile(a.path() / "summary.txt");
  EXPECT_NE(summary.find("attempt 2"), std::string::npos);
  EXPECT_EQ(CountLinesOf(ReadFile(a.path() / "records.csv")), 201u);
}

TEST(EmitReportTest, EmptyRecords) {
  ScratchDirectory dir("memfix-report-empty");
  EXPECT_THROW(EmitReport({}, StandardGroupings(), dir.path()), Error);
}

TEST(MetricRecordTest, JsonRoundTrip) {
  MetricRecord r = RandomRecords(4, 1)[0];
  r.error = "EndpointError: x";
  r.wall.llm_seconds = 1.5;
  r.wall.timestamp = "2026-01-01T00:00:00Z";
  const MetricRecord back = RecordFromJson(RecordToJson(r));
  EXPECT_EQ(RecordToJson(back), RecordToJson(r));
  EXPECT_EQ(back.prompt_id, r.prompt_id);
  EXPECT_EQ(back.history_format, r.history_format);
}

TEST(SyntaxScoreTest, Calibration) {
  EXPECT_EQ(SyntaxScore(""), 0.0);
  EXPECT_EQ(SyntaxScore("   \n"), 0.0);
  for (const char* file :
       {"seed_corpus/poly_approx/poly_sin.c", "seed_corpus/hopfield_nets/hopfield_4.c",
        "seed_corpus/other/relu_layer.c", "seed_corpus/reach_prob_density/gaussian_reach.c",
        "seed_corpus/reinforcement_learning/cartpole_policy.c"}) {
    EXPECT_GE(SyntaxScore(testing::ReadFixture(file)), 0.8) << file;
  }
  const std::string prose =
      "The weather in the valley was mild for most of the spring, and the farmers "
      "planted early. Rain arrived late in May, which pleased almost everyone in "
      "town. By summer the fields were green and the river ran high.";
  EXPECT_LE(SyntaxScore(prose), 0.2);
  EXPECT_GT(SyntaxScore("for (int i = 0; i < n; i++) {"), 0.5);
}

TEST(SyntaxScoreTest, AlwaysInUnitInterval) {
  std::mt19937 rng(5);
  for (int i = 0; i < 300; ++i) {
    std::string s;
    for (std::size_t n = rng() % 120; n > 0; --n) s.push_back(static_cast<char>(rng() % 128));
    const double v = SyntaxScore(s);
    EXPECT_TRUE(std::isfinite(v));
    EXPECT_GE(v, 0.0);
    EXPECT_LE(v, 1.0);
  }
}

TEST(DimensionTest, NamesRoundTrip) {
  for (const auto& dims : StandardGroupings()) {
    for (Dimension d : dims) EXPECT_EQ(ParseDimension(DimensionName(d)), d);
  }
}

}  // namespace
}  // namespace memfix
