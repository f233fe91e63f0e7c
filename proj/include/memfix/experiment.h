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

#ifndef MEMFIX_EXPERIMENT_H_
#define MEMFIX_EXPERIMENT_H_

#include <cstdint>
#include <filesystem>
#include <functional>
#include <iosfwd>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "json.hpp"
#include "memfix/corpus.h"
#include "memfix/llm.h"
#include "memfix/metrics.h"
#include "memfix/mutator.h"
#include "memfix/patch_engine.h"
#include "memfix/prompt.h"
#include "memfix/verifier.h"

namespace memfix {

// Everything one config file can set. Field-by-field reference: docs/config.md.
struct ExperimentConfig {
  std::filesystem::path base_dir;  // relative paths resolve against this
  std::filesystem::path seed_corpus;
  std::filesystem::path dataset;
  std::filesystem::path runs_dir = "runs";

  MutationConfig mutation;
  std::optional<std::filesystem::path> patch_dir;

  VerifierConfig verifier;
  int classify_workers = 4;

  bool compile_check = true;
  CompilerConfig compiler;

  enum class LlmBackend { kMock, kHttp };
  LlmBackend llm_backend = LlmBackend::kMock;
  LlmConfig llm;
  std::optional<std::filesystem::path> mock_script;

  std::optional<std::filesystem::path> prompt_templates;
  std::vector<PromptSpec> prompt_specs;  // resolved at load time
  std::vector<double> temperatures = {1.0};
  std::vector<HistoryFormat> history_formats = {HistoryFormat::kLatestStateOnly};
  int max_attempts = 1;
  int sample_count = 100;
  std::uint64_t seed = 0;
  int repair_workers = 4;

  nlohmann::json source;  // the document this was read from, after overrides

  // Reads and fully validates a config; throws Error{kConfigError}.
  static ExperimentConfig FromJson(const nlohmann::json& j,
                                   const std::filesystem::path& base_dir);
  static ExperimentConfig Load(const std::filesystem::path& path,
                               const nlohmann::json& overrides = {});

  std::filesystem::path Resolve(const std::filesystem::path& p) const;
  const PromptLibrary& library() const;

 private:
  std::shared_ptr<PromptLibrary> library_;
};

// Applies RFC 7386 merge semantics: objects merge recursively, null deletes.
nlohmann::json MergeConfig(nlohmann::json base, const nlohmann::json& patch);

using VerifierFactory = std::function<std::unique_ptr<Verifier>()>;

struct CorpusSummary {
  std::size_t files_read = 0;
  std::size_t samples = 0;
  std::vector<std::string> warnings;
};

// Seed corpus -> dataset root with base samples, support directories and a
// manifest. Throws Error{kConfigError} for a missing or empty seed corpus.
CorpusSummary BuildCorpus(const ExperimentConfig& config);

struct MutateSummary {
  std::size_t bases = 0;
  std::size_t mutants = 0;
};

// Adds one mutant per applicable mutation site (or per patch file when a
// patch directory is configured) and its unified diff next to it. Reruns
// produce the same ids and keep labels of unchanged mutants.
MutateSummary Mutate(const ExperimentConfig& config);

struct ClassifySummary {
  std::size_t labeled = 0;
  std::size_t skipped = 0;
  std::size_t safe = 0;
  std::size_t unsafe = 0;
  std::size_t unknown = 0;
};

// Labels every Unlabeled sample, saving progress as it goes.
ClassifySummary Classify(const ExperimentConfig& config,
                         const VerifierFactory& make_verifier = {},
                         std::ostream* log = nullptr);

// Uniform draw without replacement, deterministic in `seed` on every
// platform. Returns indices in draw order.
std::vector<std::size_t> SelectSamples(std::size_t population, std::size_t count,
                                       std::uint64_t seed);

std::string MakeRunId(const ExperimentConfig& config);

struct RunSummary {
  std::string run_id;
  std::filesystem::path run_dir;
  std::size_t jobs = 0;
  std::size_t successes = 0;
  std::size_t failed_jobs = 0;  // aborted by an error outside any attempt
  std::size_t records = 0;
};

struct RepairRunOptions {
  std::optional<std::string> run_id;
  VerifierFactory make_verifier;
  std::function<std::unique_ptr<CompileChecker>()> make_compiler;
  std::ostream* log = nullptr;
};

// Runs every (sample, prompt spec, temperature, history format) job and
// writes runs/<run-id>/: config.json, selection.json, jobs.jsonl,
// records.jsonl and per-attempt artifacts.
RunSummary RunRepair(const ExperimentConfig& config,
                     const RepairRunOptions& options = {});

// records.jsonl of a run -> <run>/report/. Throws Error{kEmptyInput}.
std::filesystem::path Report(const std::filesystem::path& run_dir);

}  // namespace memfix

#endif  // MEMFIX_EXPERIMENT_H_
