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

#include "memfix/metrics.h"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <map>
#include <set>
#include <unordered_set>

#include "memfix/error.h"
#include "memfix/lexer.h"
#include "memfix/text.h"

namespace memfix {
namespace {

std::string FormatFixed(double value, int decimals) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.*f", decimals, value);
  return buf;
}

// Shortest text that reads back as the same double.
std::string FormatShortest(double value) {
  char buf[64];
  auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, value);
  return std::string(buf, ptr);
}

std::string CsvField(std::string_view field) {
  if (field.find_first_of(",\"\n\r") == std::string_view::npos) {
    return std::string(field);
  }
  std::string out = "\"";
  for (char c : field) {
    if (c == '"') out += '"';
    out += c;
  }
  out += '"';
  return out;
}

std::string CsvRow(const std::vector<std::string>& fields) {
  std::string row;
  for (std::size_t i = 0; i < fields.size(); ++i) {
    if (i > 0) row += ',';
    row += CsvField(fields[i]);
  }
  row += '\n';
  return row;
}

bool ParseNumber(std::string_view s, double* out) {
  if (s.empty()) return false;
  auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), *out);
  return ec == std::errc() && ptr == s.data() + s.size();
}

// Digit runs compare by value, so "9-2.0.1" precedes "11.0.1"; digits sort
// before letters.
bool NaturalLess(std::string_view a, std::string_view b) {
  auto is_digit = [](char c) { return c >= '0' && c <= '9'; };
  std::size_t i = 0;
  std::size_t j = 0;
  while (i < a.size() && j < b.size()) {
    if (is_digit(a[i]) && is_digit(b[j])) {
      std::size_t ei = i;
      std::size_t ej = j;
      while (ei < a.size() && is_digit(a[ei])) ++ei;
      while (ej < b.size() && is_digit(b[ej])) ++ej;
      std::string_view da = a.substr(i, ei - i);
      std::string_view db = b.substr(j, ej - j);
      while (da.size() > 1 && da.front() == '0') da.remove_prefix(1);
      while (db.size() > 1 && db.front() == '0') db.remove_prefix(1);
      if (da.size() != db.size()) return da.size() < db.size();
      if (da != db) return da < db;
      i = ei;
      j = ej;
      continue;
    }
    if (a[i] != b[j]) return static_cast<unsigned char>(a[i]) < static_cast<unsigned char>(b[j]);
    ++i;
    ++j;
  }
  return a.size() - i < b.size() - j;
}

// Numeric components compare as numbers so that attempt 10 sorts after 9.
bool KeyLess(const std::vector<std::string>& a, const std::vector<std::string>& b) {
  for (std::size_t i = 0; i < std::min(a.size(), b.size()); ++i) {
    if (a[i] == b[i]) continue;
    double x = 0.0;
    double y = 0.0;
    if (ParseNumber(a[i], &x) && ParseNumber(b[i], &y) && x != y) return x < y;
    if (NaturalLess(a[i], b[i])) return true;
    if (NaturalLess(b[i], a[i])) return false;
    return a[i] < b[i];
  }
  return a.size() < b.size();
}

double Interpolate(const std::vector<double>& sorted, double q) {
  const double pos = q * static_cast<double>(sorted.size() - 1);
  const auto lo = static_cast<std::size_t>(std::floor(pos));
  const std::size_t hi = std::min(lo + 1, sorted.size() - 1);
  const double frac = pos - static_cast<double>(lo);
  return sorted[lo] + (sorted[hi] - sorted[lo]) * frac;
}

bool EndsWithAny(std::string_view s, std::string_view chars) {
  return !s.empty() && chars.find(s.back()) != std::string_view::npos;
}

}  // namespace

std::string_view HistoryFormatName(HistoryFormat format) {
  switch (format) {
    case HistoryFormat::kLatestStateOnly:
      return "lso";
    case HistoryFormat::kForward:
      return "forward";
    case HistoryFormat::kReverse:
      return "reverse";
  }
  return "lso";
}

HistoryFormat ParseHistoryFormat(std::string_view name) {
  if (name == "lso" || name == "latest-state-only") {
    return HistoryFormat::kLatestStateOnly;
  }
  if (name == "forward") return HistoryFormat::kForward;
  if (name == "reverse") return HistoryFormat::kReverse;
  throw Error(ErrorCode::kConfigError,
              "unknown history format '" + std::string(name) + "'");
}

nlohmann::json RecordToJson(const MetricRecord& r) {
  return {
      {"job_id", r.job_id},
      {"sample_id", r.sample_id},
      {"prompt_id", r.prompt_id},
      {"template_family", r.template_family},
      {"source_strategy", SourceStrategyName(r.source_strategy)},
      {"feedback_kind", FeedbackKindName(r.feedback_kind)},
      {"feedback_position", FeedbackPositionName(r.feedback_position)},
      {"backticks", r.backticks},
      {"temperature", r.temperature},
      {"history_format", HistoryFormatName(r.history_format)},
      {"attempt_index", r.attempt_index},
      {"max_attempts", r.max_attempts},
      {"syntax_score", r.syntax_score},
      {"relevance", r.relevance},
      {"compiled", r.compiled},
      {"verified", r.verified},
      {"verdict", VerdictName(r.verdict)},
      {"error", r.error},
      {"timing",
       {{"llm_seconds", r.wall.llm_seconds},
        {"compile_seconds", r.wall.compile_seconds},
        {"verify_seconds", r.wall.verify_seconds},
        {"timestamp", r.wall.timestamp}}},
  };
}

MetricRecord RecordFromJson(const nlohmann::json& j) {
  MetricRecord r;
  try {
    r.job_id = j.at("job_id").get<std::string>();
    r.sample_id = j.at("sample_id").get<std::string>();
    r.prompt_id = j.at("prompt_id").get<std::string>();
    r.template_family = j.at("template_family").get<std::string>();
    r.source_strategy =
        ParseSourceStrategy(j.at("source_strategy").get<std::string>());
    r.feedback_kind = ParseFeedbackKind(j.at("feedback_kind").get<std::string>());
    r.feedback_position =
        ParseFeedbackPosition(j.at("feedback_position").get<std::string>());
    r.backticks = j.at("backticks").get<bool>();
    r.temperature = j.at("temperature").get<double>();
    r.history_format = ParseHistoryFormat(j.at("history_format").get<std::string>());
    r.attempt_index = j.at("attempt_index").get<int>();
    r.max_attempts = j.at("max_attempts").get<int>();
    r.syntax_score = j.at("syntax_score").get<double>();
    r.relevance = j.at("relevance").get<double>();
    r.compiled = j.at("compiled").get<bool>();
    r.verified = j.at("verified").get<bool>();
    r.verdict = ParseVerdict(j.at("verdict").get<std::string>());
    r.error = j.value("error", std::string());
    if (j.contains("timing")) {
      const auto& t = j.at("timing");
      r.wall.llm_seconds = t.value("llm_seconds", 0.0);
      r.wall.compile_seconds = t.value("compile_seconds", 0.0);
      r.wall.verify_seconds = t.value("verify_seconds", 0.0);
      r.wall.timestamp = t.value("timestamp", std::string());
    }
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorCode::kIoError, std::string("malformed record: ") + e.what());
  }
  return r;
}

std::vector<MetricRecord> LoadRecords(const std::filesystem::path& path) {
  std::vector<MetricRecord> records;
  int line_number = 0;
  for (const std::string& line : LineBuffer::Split(ReadFile(path)).lines) {
    ++line_number;
    if (IsBlank(line)) continue;
    try {
      records.push_back(RecordFromJson(nlohmann::json::parse(line)));
    } catch (const nlohmann::json::exception& e) {
      throw Error(ErrorCode::kIoError, path.string() + ":" +
                                           std::to_string(line_number) + ": " +
                                           e.what());
    }
  }
  return records;
}

double HeuristicSyntaxClassifier::Score(std::string_view text) const {
  if (IsBlank(text)) return 0.0;

  std::size_t lines = 0;
  std::size_t shaped = 0;
  for (const std::string& raw : LineBuffer::Split(text).lines) {
    std::string_view line = Trim(raw);
    if (line.empty()) continue;
    ++lines;
    if (line.starts_with('#') || line.starts_with("//") ||
        line.starts_with("/*") || line.starts_with('*') ||
        EndsWithAny(line, ";{}),:") || line == "else") {
      ++shaped;
    }
  }

  static const std::unordered_set<std::string_view> kCodePunctuators = {
      ";", "{", "}", "(", ")", "[", "]", "=", "==", "!=", "<=", ">=",
      "->", "++", "--", "+=", "-=", "*=", "/=", "&&", "||", "<<", ">>"};
  static const std::unordered_set<std::string_view> kTypeWords = {
      "int", "char", "void", "float", "struct", "unsigned", "sizeof",
      "typedef", "enum", "size_t", "NULL", "malloc", "free"};
  std::size_t tokens = 0;
  std::size_t code_punctuators = 0;
  std::size_t type_words = 0;
  for (const Token& t : Lex(text)) {
    if (t.kind == TokenKind::kComment) continue;
    ++tokens;
    if (t.kind == TokenKind::kPreprocessor ||
        (t.kind == TokenKind::kPunctuator && kCodePunctuators.contains(t.text))) {
      ++code_punctuators;
    } else if (t.kind == TokenKind::kIdentifier && kTypeWords.contains(t.text)) {
      ++type_words;
    }
  }
  const double line_shape =
      lines == 0 ? 0.0 : static_cast<double>(shaped) / static_cast<double>(lines);
  const double density =
      tokens == 0 ? 0.0
                  : std::min(1.0, static_cast<double>(code_punctuators) /
                                      static_cast<double>(tokens) / 0.25);
  const double types = std::min(1.0, static_cast<double>(type_words) / 3.0);
  return std::clamp(0.5 * line_shape + 0.3 * density + 0.2 * types, 0.0, 1.0);
}

double SyntaxScore(std::string_view text) {
  static const HeuristicSyntaxClassifier classifier;
  return classifier.Score(text);
}

std::string_view DimensionName(Dimension dimension) {
  switch (dimension) {
    case Dimension::kPrompt:
      return "prompt";
    case Dimension::kTemplateFamily:
      return "template_family";
    case Dimension::kSourceStrategy:
      return "source_strategy";
    case Dimension::kFeedbackKind:
      return "feedback_kind";
    case Dimension::kFeedbackPosition:
      return "feedback_position";
    case Dimension::kBackticks:
      return "backticks";
    case Dimension::kTemperature:
      return "temperature";
    case Dimension::kHistoryFormat:
      return "history_format";
    case Dimension::kAttempt:
      return "attempt";
  }
  return "prompt";
}

Dimension ParseDimension(std::string_view name) {
  for (Dimension d :
       {Dimension::kPrompt, Dimension::kTemplateFamily, Dimension::kSourceStrategy,
        Dimension::kFeedbackKind, Dimension::kFeedbackPosition,
        Dimension::kBackticks, Dimension::kTemperature, Dimension::kHistoryFormat,
        Dimension::kAttempt}) {
    if (DimensionName(d) == name) return d;
  }
  throw Error(ErrorCode::kConfigError,
              "unknown report dimension '" + std::string(name) + "'");
}

std::string DimensionValue(const MetricRecord& r, Dimension dimension) {
  switch (dimension) {
    case Dimension::kPrompt:
      return r.prompt_id;
    case Dimension::kTemplateFamily:
      return r.template_family;
    case Dimension::kSourceStrategy:
      return std::string(SourceStrategyName(r.source_strategy));
    case Dimension::kFeedbackKind:
      return std::string(FeedbackKindName(r.feedback_kind));
    case Dimension::kFeedbackPosition:
      return std::string(FeedbackPositionName(r.feedback_position));
    case Dimension::kBackticks:
      return r.backticks ? "true" : "false";
    case Dimension::kTemperature:
      return FormatShortest(r.temperature);
    case Dimension::kHistoryFormat:
      return std::string(HistoryFormatName(r.history_format));
    case Dimension::kAttempt:
      return std::to_string(r.attempt_index);
  }
  return {};
}

Percent Percent::Of(std::size_t part, std::size_t whole) {
  if (whole == 0) return {};
  // round(part * 10000 / whole), halves rounded up, in integers.
  const auto num = static_cast<std::int64_t>(part) * 20000 +
                   static_cast<std::int64_t>(whole);
  return {num / (2 * static_cast<std::int64_t>(whole))};
}

std::string Percent::ToString() const {
  const std::int64_t whole = hundredths / 100;
  const std::int64_t frac = hundredths % 100;
  return std::to_string(whole) + "." + (frac < 10 ? "0" : "") +
         std::to_string(frac);
}

Distribution Summarize(std::vector<double> values) {
  if (values.empty()) {
    throw Error(ErrorCode::kEmptyInput, "no values to summarize");
  }
  std::sort(values.begin(), values.end());
  return {values.front(), Interpolate(values, 0.25), Interpolate(values, 0.5),
          Interpolate(values, 0.75), values.back()};
}

SummaryTable Aggregate(const std::vector<MetricRecord>& records,
                       const std::vector<Dimension>& group_by) {
  if (records.empty()) {
    throw Error(ErrorCode::kEmptyInput, "no records to aggregate");
  }
  SummaryTable table;
  table.dimensions = group_by;
  for (const MetricRecord& r : records) {
    table.max_attempts = std::max(table.max_attempts, r.max_attempts);
  }

  std::map<std::vector<std::string>, std::vector<const MetricRecord*>> groups;
  for (const MetricRecord& r : records) {
    std::vector<std::string> key;
    key.reserve(group_by.size());
    for (Dimension d : group_by) key.push_back(DimensionValue(r, d));
    groups[key].push_back(&r);
  }

  for (auto& [key, members] : groups) {
    GroupSummary g;
    g.key = key;
    g.records = members.size();
    std::vector<double> syntax;
    std::vector<double> relevance;
    std::map<std::string, int> first_success;  // job -> attempt, -1 if none
    for (const MetricRecord* r : members) {
      if (r->compiled) ++g.compiled;
      if (r->verified) ++g.verified;
      syntax.push_back(r->syntax_score);
      relevance.push_back(r->relevance);
      auto [it, inserted] = first_success.try_emplace(r->job_id, -1);
      if (r->verified && (it->second < 0 || r->attempt_index < it->second)) {
        it->second = r->attempt_index;
      }
    }
    g.jobs = first_success.size();
    g.compile_rate = Percent::Of(g.compiled, g.records);
    g.verify_rate = Percent::Of(g.verified, g.records);
    g.syntax = Summarize(std::move(syntax));
    g.relevance = Summarize(std::move(relevance));
    g.success_by_attempt.assign(static_cast<std::size_t>(table.max_attempts), 0);
    for (const auto& [job, attempt] : first_success) {
      if (attempt >= 0 && attempt < table.max_attempts) {
        ++g.success_by_attempt[static_cast<std::size_t>(attempt)];
      }
    }
    for (std::size_t count : g.success_by_attempt) {
      g.success_by_attempt_rate.push_back(Percent::Of(count, g.jobs));
    }
    table.groups.push_back(std::move(g));
  }
  std::stable_sort(table.groups.begin(), table.groups.end(),
                   [](const GroupSummary& a, const GroupSummary& b) {
                     return KeyLess(a.key, b.key);
                   });
  return table;
}

std::vector<std::vector<Dimension>> StandardGroupings() {
  using D = Dimension;
  return {
      {D::kPrompt},
      {D::kTemplateFamily},
      {D::kSourceStrategy},
      {D::kFeedbackKind, D::kFeedbackPosition},
      {D::kBackticks},
      {D::kTemperature},
      {D::kHistoryFormat},
      {D::kAttempt},
      {D::kHistoryFormat, D::kPrompt},
      {D::kHistoryFormat, D::kTemperature},
  };
}

std::string RecordsCsv(const std::vector<MetricRecord>& records) {
  std::string out = CsvRow(
      {"job_id", "sample_id", "prompt_id", "template_family", "source_strategy",
       "feedback_kind", "feedback_position", "backticks", "temperature",
       "history_format", "attempt_index", "max_attempts", "syntax_score",
       "relevance", "compiled", "verified", "verdict", "error", "llm_seconds",
       "compile_seconds", "verify_seconds", "timestamp"});
  for (const MetricRecord& r : records) {
    out += CsvRow({r.job_id, r.sample_id, r.prompt_id, r.template_family,
                   std::string(SourceStrategyName(r.source_strategy)),
                   std::string(FeedbackKindName(r.feedback_kind)),
                   std::string(FeedbackPositionName(r.feedback_position)),
                   r.backticks ? "true" : "false", FormatShortest(r.temperature),
                   std::string(HistoryFormatName(r.history_format)),
                   std::to_string(r.attempt_index), std::to_string(r.max_attempts),
                   FormatFixed(r.syntax_score, 6), FormatFixed(r.relevance, 6),
                   r.compiled ? "true" : "false", r.verified ? "true" : "false",
                   std::string(VerdictName(r.verdict)), r.error,
                   FormatFixed(r.wall.llm_seconds, 3),
                   FormatFixed(r.wall.compile_seconds, 3),
                   FormatFixed(r.wall.verify_seconds, 3), r.wall.timestamp});
  }
  return out;
}

std::string SummaryCsv(const SummaryTable& table) {
  std::vector<std::string> header;
  for (Dimension d : table.dimensions) header.emplace_back(DimensionName(d));
  for (const char* name :
       {"records", "jobs", "compiled", "verified", "compile_pct", "verify_pct"}) {
    header.emplace_back(name);
  }
  for (const char* metric : {"syntax", "relevance"}) {
    for (const char* stat : {"min", "q1", "median", "q3", "max"}) {
      header.push_back(std::string(metric) + "_" + stat);
    }
  }
  for (int k = 0; k < table.max_attempts; ++k) {
    header.push_back("success_attempt_" + std::to_string(k));
  }
  for (int k = 0; k < table.max_attempts; ++k) {
    header.push_back("success_attempt_" + std::to_string(k) + "_pct");
  }
  std::string out = CsvRow(header);
  for (const GroupSummary& g : table.groups) {
    std::vector<std::string> row = g.key;
    row.push_back(std::to_string(g.records));
    row.push_back(std::to_string(g.jobs));
    row.push_back(std::to_string(g.compiled));
    row.push_back(std::to_string(g.verified));
    row.push_back(g.compile_rate.ToString());
    row.push_back(g.verify_rate.ToString());
    for (const Distribution* d : {&g.syntax, &g.relevance}) {
      for (double v : {d->min, d->q1, d->median, d->q3, d->max}) {
        row.push_back(FormatFixed(v, 6));
      }
    }
    for (std::size_t c : g.success_by_attempt) row.push_back(std::to_string(c));
    for (Percent p : g.success_by_attempt_rate) row.push_back(p.ToString());
    out += CsvRow(row);
  }
  return out;
}

void EmitReport(const std::vector<MetricRecord>& records,
                const std::vector<std::vector<Dimension>>& groupings,
                const std::filesystem::path& destination) {
  if (records.empty()) {
    throw Error(ErrorCode::kEmptyInput, "no records to report");
  }
  std::error_code ec;
  std::filesystem::create_directories(destination, ec);
  if (ec) {
    throw Error(ErrorCode::kIoError,
                "cannot create " + destination.string() + ": " + ec.message());
  }
  WriteFile(destination / "records.csv", RecordsCsv(records));
  for (const auto& dims : groupings) {
    std::string name = "summary";
    for (Dimension d : dims) name += "-" + std::string(DimensionName(d));
    WriteFile(destination / (name + ".csv"), SummaryCsv(Aggregate(records, dims)));
  }

  const SummaryTable overall = Aggregate(records, {});
  const GroupSummary& all = overall.groups.front();
  std::size_t successful_jobs = 0;
  for (std::size_t c : all.success_by_attempt) successful_jobs += c;
  std::string text;
  text += "records: " + std::to_string(all.records) + "\n";
  text += "jobs: " + std::to_string(all.jobs) + "\n";
  text += "compile rate: " + all.compile_rate.ToString() + "% (" +
          std::to_string(all.compiled) + "/" + std::to_string(all.records) + ")\n";
  text += "verify rate: " + all.verify_rate.ToString() + "% (" +
          std::to_string(all.verified) + "/" + std::to_string(all.records) + ")\n";
  text += "job success rate: " +
          Percent::Of(successful_jobs, all.jobs).ToString() + "% (" +
          std::to_string(successful_jobs) + "/" + std::to_string(all.jobs) + ")\n";
  text += "success by attempt:\n";
  for (std::size_t k = 0; k < all.success_by_attempt.size(); ++k) {
    text += "  attempt " + std::to_string(k) + ": " +
            std::to_string(all.success_by_attempt[k]) + " (" +
            all.success_by_attempt_rate[k].ToString() + "%)\n";
  }
  text += "relevance measure: whitespace-stripped LCS ratio\n";
  text += "syntax classifier: heuristic token statistics\n";
  WriteFile(destination / "summary.txt", text);
}

}  // namespace memfix
