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

#ifndef MEMFIX_METRICS_H_
#define MEMFIX_METRICS_H_

#include <cstdint>
#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

#include "json.hpp"
#include "memfix/prompt.h"
#include "memfix/verifier.h"

namespace memfix {

// How earlier attempts are replayed to the model in iterative repair.
enum class HistoryFormat { kLatestStateOnly, kForward, kReverse };

std::string_view HistoryFormatName(HistoryFormat format);  // "lso", ...
HistoryFormat ParseHistoryFormat(std::string_view name);

// Non-deterministic fields. Kept apart so that records can be compared
// across reruns with these masked out.
struct WallTimes {
  double llm_seconds = 0.0;
  double compile_seconds = 0.0;
  double verify_seconds = 0.0;
  std::string timestamp;  // ISO-8601 UTC
};

struct MetricRecord {
  std::string job_id;
  std::string sample_id;
  std::string prompt_id;  // x.y.z
  std::string template_family;
  SourceStrategy source_strategy = SourceStrategy::kOneLine;
  FeedbackKind feedback_kind = FeedbackKind::kNone;
  FeedbackPosition feedback_position = FeedbackPosition::kNone;
  bool backticks = true;
  double temperature = 0.0;
  HistoryFormat history_format = HistoryFormat::kLatestStateOnly;
  int attempt_index = 0;
  int max_attempts = 1;
  double syntax_score = 0.0;
  double relevance = 0.0;
  bool compiled = false;
  bool verified = false;
  Verdict verdict = Verdict::kUnknown;
  std::string error;  // set when the attempt failed before a verdict
  WallTimes wall;
};

nlohmann::json RecordToJson(const MetricRecord& record);
MetricRecord RecordFromJson(const nlohmann::json& j);
// One JSON object per line; blank lines ignored.
std::vector<MetricRecord> LoadRecords(const std::filesystem::path& path);

// Scores how much a text looks like C source, in [0, 1].
class SyntaxClassifier {
 public:
  virtual ~SyntaxClassifier() = default;
  virtual double Score(std::string_view text) const = 0;
};

// Token statistics: share of lines with C-shaped endings, density of C
// operators and brackets, and type keywords.
class HeuristicSyntaxClassifier : public SyntaxClassifier {
 public:
  double Score(std::string_view text) const override;
};

double SyntaxScore(std::string_view text);

enum class Dimension {
  kPrompt,
  kTemplateFamily,
  kSourceStrategy,
  kFeedbackKind,
  kFeedbackPosition,
  kBackticks,
  kTemperature,
  kHistoryFormat,
  kAttempt,
};

std::string_view DimensionName(Dimension dimension);
Dimension ParseDimension(std::string_view name);
std::string DimensionValue(const MetricRecord& record, Dimension dimension);

// A percentage held as an exact count of hundredths, rounded half up.
struct Percent {
  std::int64_t hundredths = 0;

  static Percent Of(std::size_t part, std::size_t whole);
  double value() const { return static_cast<double>(hundredths) / 100.0; }
  std::string ToString() const;  // two decimals, e.g. "63.00"
  friend bool operator==(Percent, Percent) = default;
};

struct Distribution {
  double min = 0.0;
  double q1 = 0.0;
  double median = 0.0;
  double q3 = 0.0;
  double max = 0.0;

  friend bool operator==(const Distribution&, const Distribution&) = default;
};

// Quartiles by linear interpolation between order statistics. Throws
// Error{kEmptyInput}.
Distribution Summarize(std::vector<double> values);

struct GroupSummary {
  std::vector<std::string> key;
  std::size_t records = 0;
  std::size_t jobs = 0;
  std::size_t compiled = 0;
  std::size_t verified = 0;
  Percent compile_rate;
  Percent verify_rate;
  Distribution syntax;
  Distribution relevance;
  // Entry k: jobs whose first Safe verdict came at attempt k, and its share
  // of the group's jobs.
  std::vector<std::size_t> success_by_attempt;
  std::vector<Percent> success_by_attempt_rate;

  friend bool operator==(const GroupSummary&, const GroupSummary&) = default;
};

struct SummaryTable {
  std::vector<Dimension> dimensions;
  int max_attempts = 1;
  std::vector<GroupSummary> groups;  // sorted by key

  friend bool operator==(const SummaryTable&, const SummaryTable&) = default;
};

// Throws Error{kEmptyInput}.
SummaryTable Aggregate(const std::vector<MetricRecord>& records,
                       const std::vector<Dimension>& group_by);

// Grouping sets emitted by `memfix report`.
std::vector<std::vector<Dimension>> StandardGroupings();

// Writes records.csv, one summary-<dims>.csv per grouping and summary.txt
// into `destination`. Throws Error{kEmptyInput}, Error{kIoError}.
void EmitReport(const std::vector<MetricRecord>& records,
                const std::vector<std::vector<Dimension>>& groupings,
                const std::filesystem::path& destination);

// CSV text for a single table; exposed for tests.
std::string SummaryCsv(const SummaryTable& table);
std::string RecordsCsv(const std::vector<MetricRecord>& records);

}  // namespace memfix

#endif  // MEMFIX_METRICS_H_
