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

#include <algorithm>
#include <atomic>
#include <ctime>
#include <exception>
#include <map>
#include <mutex>
#include <ostream>
#include <set>
#include <thread>

#include "memfix/dataset.h"
#include "memfix/error.h"
#include "memfix/patch.h"
#include "memfix/repair.h"
#include "memfix/text.h"

namespace memfix {
namespace {

using nlohmann::json;

[[noreturn]] void ConfigFail(const std::string& message) {
  throw Error(ErrorCode::kConfigError, message);
}

void CheckKeys(const json& object, std::string_view where,
               std::initializer_list<std::string_view> allowed) {
  if (!object.is_object()) ConfigFail(std::string(where) + " must be an object");
  for (const auto& [key, value] : object.items()) {
    if (std::find(allowed.begin(), allowed.end(), key) == allowed.end()) {
      ConfigFail("unknown key '" + key + "' in " + std::string(where));
    }
  }
}

template <typename T>
T Get(const json& object, std::string_view where, const char* key, T fallback) {
  if (!object.contains(key) || object.at(key).is_null()) return fallback;
  try {
    return object.at(key).get<T>();
  } catch (const json::exception&) {
    ConfigFail(std::string(where) + "." + key + " has the wrong type");
  }
}

template <typename F>
void RunPool(std::size_t jobs, int workers, F&& body) {
  std::atomic<std::size_t> next{0};
  std::atomic<bool> stop{false};
  std::exception_ptr failure;
  std::mutex failure_mu;
  auto loop = [&] {
    while (!stop.load()) {
      const std::size_t i = next.fetch_add(1);
      if (i >= jobs) return;
      try {
        body(i);
      } catch (...) {
        std::lock_guard lock(failure_mu);
        if (!failure) failure = std::current_exception();
        stop.store(true);
      }
    }
  };
  const int n = std::max(1, std::min<int>(workers, static_cast<int>(jobs)));
  std::vector<std::thread> threads;
  for (int t = 1; t < n; ++t) threads.emplace_back(loop);
  loop();
  for (std::thread& t : threads) t.join();
  if (failure) std::rethrow_exception(failure);
}

std::string CompactTimestamp() {
  const std::time_t now = std::time(nullptr);
  std::tm tm{};
  gmtime_r(&now, &tm);
  char buf[32];
  std::strftime(buf, sizeof buf, "%Y%m%dT%H%M%SZ", &tm);
  return buf;
}

std::string Slug(std::string_view text) {
  std::string out;
  for (char c : text) {
    const bool keep = (c >= 'a' && c <= 'z') || (c >= 'A' && c <= 'Z') ||
                      (c >= '0' && c <= '9') || c == '.' || c == '-' || c == '_';
    out += keep ? c : '_';
  }
  return out;
}

std::string TemperatureText(double t) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.2f", t);
  return buf;
}

PromptSpec SpecFromJson(const json& j, const PromptLibrary& library) {
  CheckKeys(j, "repair.prompts[]",
            {"template", "role", "feedback", "strategy", "backticks"});
  if (!j.contains("template")) ConfigFail("repair.prompts[] needs a template");
  const json& t = j.at("template");
  const PromptTemplate& tpl =
      t.is_number_integer() ? library.Get(t.get<int>())
                            : library.GetByLabel(t.get<std::string>());
  std::optional<int> role;
  if (j.contains("role")) role = j.at("role").get<int>();
  const FeedbackKind kind = ParseFeedbackKind(Get<std::string>(
      j, "repair.prompts[]", "feedback",
      tpl.requires_feedback() ? "VP" : "none"));
  const SourceStrategy strategy = ParseSourceStrategy(
      Get<std::string>(j, "repair.prompts[]", "strategy", "one-line"));
  const bool backticks = Get<bool>(j, "repair.prompts[]", "backticks", true);
  return MakeSpec(library, tpl.id, role, kind, strategy, backticks);
}

std::vector<PromptSpec> SpecsFromJson(const json& prompts,
                                      const PromptLibrary& library) {
  if (prompts.is_string()) {
    if (prompts.get<std::string>() != "all") {
      ConfigFail("repair.prompts must be \"all\", an object or a list");
    }
    return library.EnumerateAll({});
  }
  if (prompts.is_array()) {
    std::vector<PromptSpec> specs;
    for (const json& entry : prompts) specs.push_back(SpecFromJson(entry, library));
    return specs;
  }
  CheckKeys(prompts, "repair.prompts",
            {"strategies", "templates", "roles", "feedback_kinds", "backticks"});
  EnumerateOptions options;
  const char* where = "repair.prompts";
  if (prompts.contains("strategies")) {
    options.source_strategies.clear();
    for (const auto& s : Get<std::vector<std::string>>(prompts, where, "strategies", {})) {
      options.source_strategies.push_back(ParseSourceStrategy(s));
    }
  }
  if (prompts.contains("templates")) {
    options.template_ids.clear();
    for (const json& t : prompts.at("templates")) {
      options.template_ids.push_back(t.is_number_integer()
                                         ? library.Get(t.get<int>()).id
                                         : library.GetByLabel(t.get<std::string>()).id);
    }
  }
  options.role_indices =
      Get<std::vector<int>>(prompts, where, "roles", options.role_indices);
  if (prompts.contains("feedback_kinds")) {
    options.feedback_kinds.clear();
    for (const auto& k :
         Get<std::vector<std::string>>(prompts, where, "feedback_kinds", {})) {
      options.feedback_kinds.push_back(ParseFeedbackKind(k));
    }
  }
  options.backticks = Get<bool>(prompts, where, "backticks", true);
  return library.EnumerateAll(options);
}

}  // namespace

json MergeConfig(json base, const json& patch) {
  if (!patch.is_object()) return patch;
  if (!base.is_object()) base = json::object();
  for (const auto& [key, value] : patch.items()) {
    if (value.is_null()) {
      base.erase(key);
    } else {
      base[key] = MergeConfig(base.contains(key) ? base[key] : json(), value);
    }
  }
  return base;
}

std::filesystem::path ExperimentConfig::Resolve(const std::filesystem::path& p) const {
  if (p.empty() || p.is_absolute()) return p;
  return base_dir / p;
}

const PromptLibrary& ExperimentConfig::library() const {
  return library_ ? *library_ : PromptLibrary::Default();
}

ExperimentConfig ExperimentConfig::FromJson(const json& j,
                                            const std::filesystem::path& base_dir) {
  ExperimentConfig c;
  c.base_dir = base_dir;
  c.source = j;
  try {
    CheckKeys(j, "config",
              {"seed_corpus", "dataset", "runs_dir", "mutation", "verifier",
               "compiler", "llm", "repair"});
    c.seed_corpus = c.Resolve(Get<std::string>(j, "config", "seed_corpus", ""));
    c.dataset = c.Resolve(Get<std::string>(j, "config", "dataset", "dataset"));
    c.runs_dir = c.Resolve(Get<std::string>(j, "config", "runs_dir", "runs"));

    const json m = j.value("mutation", json::object());
    CheckKeys(m, "mutation", {"operators", "removable_calls", "context_lines", "patch_dir"});
    if (m.contains("operators")) {
      for (MutationOperator& op : c.mutation.operators) op.enabled = false;
      for (const auto& name : Get<std::vector<std::string>>(m, "mutation", "operators", {})) {
        const MutationKind kind = ParseMutationKind(name);
        for (MutationOperator& op : c.mutation.operators) {
          if (op.kind == kind) op.enabled = true;
        }
      }
    }
    c.mutation.removable_calls = Get<std::vector<std::string>>(
        m, "mutation", "removable_calls", c.mutation.removable_calls);
    c.mutation.context_lines =
        Get<int>(m, "mutation", "context_lines", c.mutation.context_lines);
    if (c.mutation.context_lines < 0) ConfigFail("mutation.context_lines must be >= 0");
    if (m.contains("patch_dir") && !m.at("patch_dir").is_null()) {
      c.patch_dir = c.Resolve(Get<std::string>(m, "mutation", "patch_dir", ""));
    }

    const json v = j.value("verifier", json::object());
    CheckKeys(v, "verifier",
              {"binary", "flags", "timeout_seconds", "grace_seconds", "include_dirs",
               "working_dir", "keep_artifacts", "workers"});
    c.verifier.binary_path = Get<std::string>(v, "verifier", "binary", "esbmc");
    c.verifier.flags = Get<std::vector<std::string>>(v, "verifier", "flags",
                                                     c.verifier.flags);
    c.verifier.timeout_seconds =
        Get<int>(v, "verifier", "timeout_seconds", c.verifier.timeout_seconds);
    c.verifier.grace_seconds =
        Get<int>(v, "verifier", "grace_seconds", c.verifier.grace_seconds);
    for (const auto& dir : Get<std::vector<std::string>>(v, "verifier", "include_dirs", {})) {
      c.verifier.include_dirs.push_back(c.Resolve(dir));
    }
    const std::string wd = Get<std::string>(v, "verifier", "working_dir", "");
    c.verifier.working_dir = wd.empty() ? c.dataset : c.Resolve(wd);
    c.verifier.keep_artifacts = Get<bool>(v, "verifier", "keep_artifacts", false);
    c.classify_workers = Get<int>(v, "verifier", "workers", c.classify_workers);
    if (std::string problem = c.verifier.Validate(); !problem.empty()) {
      ConfigFail("verifier: " + problem);
    }
    if (c.classify_workers < 1) ConfigFail("verifier.workers must be >= 1");

    const json cc = j.value("compiler", json::object());
    CheckKeys(cc, "compiler",
              {"enabled", "command", "flags", "include_dirs", "timeout_seconds"});
    c.compile_check = Get<bool>(cc, "compiler", "enabled", true);
    c.compiler.compiler = Get<std::string>(cc, "compiler", "command", "cc");
    c.compiler.flags =
        Get<std::vector<std::string>>(cc, "compiler", "flags", c.compiler.flags);
    c.compiler.timeout_seconds =
        Get<int>(cc, "compiler", "timeout_seconds", c.compiler.timeout_seconds);
    if (cc.contains("include_dirs")) {
      for (const auto& dir :
           Get<std::vector<std::string>>(cc, "compiler", "include_dirs", {})) {
        c.compiler.include_dirs.push_back(c.Resolve(dir));
      }
    } else {
      c.compiler.include_dirs = {c.dataset / "includes", c.dataset / "networks"};
    }
    if (c.compiler.compiler.empty()) ConfigFail("compiler.command must not be empty");
    if (c.compiler.timeout_seconds <= 0) {
      ConfigFail("compiler.timeout_seconds must be positive");
    }

    const json l = j.value("llm", json::object());
    CheckKeys(l, "llm",
              {"backend", "mock_script", "model", "max_context_tokens",
               "request_timeout_seconds", "max_retries", "retry_base_delay_ms",
               "endpoint", "api_key_env", "max_in_flight"});
    const std::string backend = Get<std::string>(l, "llm", "backend", "mock");
    if (backend == "mock") {
      c.llm_backend = LlmBackend::kMock;
    } else if (backend == "http") {
      c.llm_backend = LlmBackend::kHttp;
    } else {
      ConfigFail("llm.backend must be \"mock\" or \"http\"");
    }
    if (l.contains("mock_script")) {
      c.mock_script = c.Resolve(Get<std::string>(l, "llm", "mock_script", ""));
    }
    c.llm.model_name = Get<std::string>(l, "llm", "model", c.llm.model_name);
    c.llm.max_context_tokens =
        Get<std::size_t>(l, "llm", "max_context_tokens", c.llm.max_context_tokens);
    c.llm.request_timeout_seconds = Get<int>(l, "llm", "request_timeout_seconds",
                                             c.llm.request_timeout_seconds);
    c.llm.max_retries = Get<int>(l, "llm", "max_retries", c.llm.max_retries);
    c.llm.retry_base_delay = std::chrono::milliseconds(
        Get<long long>(l, "llm", "retry_base_delay_ms", c.llm.retry_base_delay.count()));
    c.llm.endpoint = Get<std::string>(l, "llm", "endpoint", c.llm.endpoint);
    c.llm.api_key_env = Get<std::string>(l, "llm", "api_key_env", c.llm.api_key_env);
    c.llm.max_in_flight = Get<int>(l, "llm", "max_in_flight", c.llm.max_in_flight);
    if (std::string problem = c.llm.Validate(); !problem.empty()) {
      ConfigFail("llm: " + problem);
    }
    if (c.llm_backend == LlmBackend::kMock) {
      if (!c.mock_script) ConfigFail("llm.backend \"mock\" needs llm.mock_script");
      if (!std::filesystem::is_regular_file(*c.mock_script)) {
        ConfigFail("mock script not found: " + c.mock_script->string());
      }
      MockLlmClient::LoadScript(c.mock_script->string());
    }

    const json r = j.value("repair", json::object());
    CheckKeys(r, "repair",
              {"prompt_templates", "prompts", "temperatures", "history_formats",
               "max_attempts", "sample_count", "seed", "workers"});
    if (r.contains("prompt_templates") && !r.at("prompt_templates").is_null()) {
      c.prompt_templates =
          c.Resolve(Get<std::string>(r, "repair", "prompt_templates", ""));
      c.library_ = std::make_shared<PromptLibrary>(
          PromptLibrary::LoadFile(*c.prompt_templates));
    }
    c.max_attempts = Get<int>(r, "repair", "max_attempts", c.max_attempts);
    c.temperatures = Get<std::vector<double>>(r, "repair", "temperatures", c.temperatures);
    if (r.contains("history_formats")) {
      c.history_formats.clear();
      for (const auto& h :
           Get<std::vector<std::string>>(r, "repair", "history_formats", {})) {
        c.history_formats.push_back(ParseHistoryFormat(h));
      }
    }
    c.sample_count = Get<int>(r, "repair", "sample_count", c.sample_count);
    c.seed = Get<std::uint64_t>(r, "repair", "seed", c.seed);
    c.repair_workers = Get<int>(r, "repair", "workers", c.repair_workers);
    if (r.contains("prompts")) {
      c.prompt_specs = SpecsFromJson(r.at("prompts"), c.library());
    } else {
      c.prompt_specs = c.library().EnumerateAll({});
    }

    if (c.sample_count < 0) ConfigFail("repair.sample_count must be >= 0");
    if (c.repair_workers < 1) ConfigFail("repair.workers must be >= 1");
    if (c.temperatures.empty()) ConfigFail("repair.temperatures must not be empty");
    if (c.history_formats.empty()) ConfigFail("repair.history_formats must not be empty");
    if (c.prompt_specs.empty()) ConfigFail("repair.prompts selects no prompt");
    std::set<std::string> keys;
    for (const PromptSpec& spec : c.prompt_specs) {
      if (!keys.insert(spec.Key(c.library())).second) {
        ConfigFail("repair.prompts lists " + spec.Key(c.library()) + " twice");
      }
      for (double t : c.temperatures) {
        for (HistoryFormat h : c.history_formats) {
          RepairConfig rc{spec, h, c.max_attempts, t, c.llm};
          if (std::string problem = rc.Validate(c.library()); !problem.empty()) {
            ConfigFail("repair: " + spec.Key(c.library()) + ": " + problem);
          }
        }
      }
    }
  } catch (const Error& e) {
    if (e.code() == ErrorCode::kConfigError) throw;
    throw Error(ErrorCode::kConfigError, e.what());
  } catch (const json::exception& e) {
    ConfigFail(std::string("config: ") + e.what());
  }
  return c;
}

ExperimentConfig ExperimentConfig::Load(const std::filesystem::path& path,
                                        const json& overrides) {
  json j;
  try {
    j = json::parse(ReadFile(path));
  } catch (const json::exception& e) {
    ConfigFail(path.string() + ": " + e.what());
  } catch (const Error& e) {
    ConfigFail(e.what());
  }
  if (!overrides.is_null()) j = MergeConfig(std::move(j), overrides);
  return FromJson(j, std::filesystem::absolute(path).parent_path());
}

CorpusSummary BuildCorpus(const ExperimentConfig& config) {
  if (config.seed_corpus.empty() || !std::filesystem::is_directory(config.seed_corpus)) {
    ConfigFail("seed corpus directory not found: " + config.seed_corpus.string());
  }
  SeedCorpus seed = LoadSeedCorpus(config.seed_corpus);
  if (seed.samples.empty()) {
    ConfigFail("seed corpus " + config.seed_corpus.string() + " has no C files");
  }
  std::error_code ec;
  for (const char* support : {"includes", "networks"}) {
    const auto from = config.seed_corpus / support;
    if (!std::filesystem::is_directory(from)) continue;
    const auto to = config.dataset / support;
    std::filesystem::create_directories(to, ec);
    std::filesystem::copy(from, to,
                          std::filesystem::copy_options::recursive |
                              std::filesystem::copy_options::overwrite_existing,
                          ec);
    if (ec) {
      throw Error(ErrorCode::kIoError,
                  "copying " + from.string() + ": " + ec.message());
    }
  }
  WriteDataset(config.dataset, seed.samples);
  return {seed.files_read, seed.samples.size(), std::move(seed.warnings)};
}

MutateSummary Mutate(const ExperimentConfig& config) {
  const std::vector<Sample> existing = LoadDataset(config.dataset);
  std::vector<Sample> bases;
  std::map<std::string, const Sample*> previous;
  for (const Sample& s : existing) {
    if (s.mutation_id) {
      previous[s.id] = &s;
    } else {
      bases.push_back(s);
    }
  }

  std::vector<Sample> mutants;
  if (config.patch_dir) {
    mutants = ExpandFromPatchDirectory(bases, *config.patch_dir);
  } else {
    mutants = Expand(bases, config.mutation);
    for (const Sample& base : bases) {
      const auto dir = config.dataset / SampleRelativePath(base).parent_path();
      for (const PatchFile& patch : EnumerateMutations(base.source_text, config.mutation)) {
        WriteFile(dir / (patch.id + ".patch"), ToUnifiedDiff(patch));
      }
    }
  }
  for (Sample& m : mutants) {
    auto it = previous.find(m.id);
    if (it != previous.end() && it->second->source_text == m.source_text) {
      m.label = it->second->label;
      m.fault_line = it->second->fault_line;
      m.verify_seconds = it->second->verify_seconds;
    }
  }

  std::vector<Sample> all = bases;
  all.insert(all.end(), mutants.begin(), mutants.end());
  WriteDataset(config.dataset, all);
  return {bases.size(), mutants.size()};
}

ClassifySummary Classify(const ExperimentConfig& config,
                         const VerifierFactory& make_verifier, std::ostream* log) {
  std::vector<Sample> samples = LoadDataset(config.dataset);
  ClassifySummary summary;
  std::vector<std::size_t> pending;
  for (std::size_t i = 0; i < samples.size(); ++i) {
    if (samples[i].label == Label::kUnlabeled) {
      pending.push_back(i);
    } else {
      ++summary.skipped;
    }
  }
  if (pending.empty()) return summary;

  auto factory = make_verifier ? make_verifier : [&config]() -> std::unique_ptr<Verifier> {
    return std::make_unique<ProcessVerifier>(config.verifier);
  };
  std::mutex mu;
  std::size_t since_save = 0;
  constexpr std::size_t kSaveEvery = 16;
  RunPool(pending.size(), config.classify_workers, [&](std::size_t job) {
    Sample& s = samples[pending[job]];
    std::unique_ptr<Verifier> verifier = factory();
    const VerifierOutcome outcome = verifier->Verify(s.source_text, s.id);
    std::lock_guard lock(mu);
    s.verify_seconds = outcome.wall_time_seconds;
    switch (outcome.verdict) {
      case Verdict::kSafe:
        s.label = Label::kSafe;
        ++summary.safe;
        break;
      case Verdict::kUnsafe:
        s.label = Label::kUnsafe;
        s.fault_line = outcome.fault_line;
        ++summary.unsafe;
        break;
      case Verdict::kUnknown:
        s.label = Label::kUnknown;
        ++summary.unknown;
        break;
    }
    ++summary.labeled;
    if (log) {
      *log << s.id << ": " << LabelName(s.label);
      if (s.fault_line) *log << " (line " << *s.fault_line << ")";
      *log << "\n";
    }
    if (++since_save >= kSaveEvery) {
      WriteManifest(config.dataset, samples);
      since_save = 0;
    }
  });
  WriteManifest(config.dataset, samples);
  return summary;
}

std::vector<std::size_t> SelectSamples(std::size_t population, std::size_t count,
                                       std::uint64_t seed) {
  std::vector<std::size_t> order(population);
  for (std::size_t i = 0; i < population; ++i) order[i] = i;
  count = std::min(count, population);
  // Partial Fisher-Yates with an explicit modulo draw: std::shuffle and the
  // standard distributions are not specified bit-for-bit across libraries.
  std::mt19937_64 rng(seed);
  for (std::size_t i = 0; i < count; ++i) {
    const std::size_t j = i + static_cast<std::size_t>(rng() % (population - i));
    std::swap(order[i], order[j]);
  }
  order.resize(count);
  return order;
}

std::string MakeRunId(const ExperimentConfig& config) {
  return CompactTimestamp() + "-" +
         HexDigest(Fnv1a64(config.source.dump())).substr(0, 8);
}

RunSummary RunRepair(const ExperimentConfig& config, const RepairRunOptions& options) {
  const std::vector<Sample> dataset = LoadDataset(config.dataset);
  std::vector<const Sample*> candidates;
  for (const Sample& s : dataset) {
    if (s.label == Label::kUnsafe && s.fault_line) candidates.push_back(&s);
  }
  if (candidates.empty()) {
    ConfigFail("dataset " + config.dataset.string() +
               " has no Unsafe samples; run classify first");
  }
  std::vector<const Sample*> chosen;
  for (std::size_t i : SelectSamples(candidates.size(),
                                     static_cast<std::size_t>(config.sample_count),
                                     config.seed)) {
    chosen.push_back(candidates[i]);
  }

  struct Job {
    const Sample* sample;
    PromptSpec spec;
    double temperature;
    HistoryFormat history;
    std::string slug;
  };
  std::vector<Job> jobs;
  const PromptLibrary& library = config.library();
  for (const Sample* s : chosen) {
    for (const PromptSpec& spec : config.prompt_specs) {
      for (double t : config.temperatures) {
        for (HistoryFormat h : config.history_formats) {
          jobs.push_back({s, spec, t, h,
                          Slug(spec.Key(library)) + "_t" + TemperatureText(t) + "_" +
                              std::string(HistoryFormatName(h))});
        }
      }
    }
  }

  RunSummary summary;
  summary.run_id = options.run_id.value_or(MakeRunId(config));
  summary.run_dir = config.runs_dir / summary.run_id;
  summary.jobs = jobs.size();
  std::filesystem::create_directories(summary.run_dir);
  WriteFile(summary.run_dir / "config.json", config.source.dump(2) + "\n");
  json selection = {{"seed", config.seed},
                    {"sample_count", config.sample_count},
                    {"samples", json::array()}};
  for (const Sample* s : chosen) selection["samples"].push_back(s->id);
  WriteFile(summary.run_dir / "selection.json", selection.dump(2) + "\n");

  std::optional<MockLlmClient::Script> script;
  std::unique_ptr<HttpLlmClient> http;
  if (config.llm_backend == ExperimentConfig::LlmBackend::kMock) {
    script = MockLlmClient::LoadScript(config.mock_script->string());
  } else {
    http = std::make_unique<HttpLlmClient>();
  }
  auto make_verifier = options.make_verifier
                           ? options.make_verifier
                           : [&config]() -> std::unique_ptr<Verifier> {
    return std::make_unique<ProcessVerifier>(config.verifier);
  };
  auto make_compiler =
      options.make_compiler
          ? options.make_compiler
          : [&config]() -> std::unique_ptr<CompileChecker> {
    if (!config.compile_check) return nullptr;
    return std::make_unique<ProcessCompileChecker>(config.compiler);
  };

  std::vector<RepairResult> results(jobs.size());
  std::vector<std::string> job_errors(jobs.size());
  std::mutex log_mu;
  RunPool(jobs.size(), config.repair_workers, [&](std::size_t index) {
    const Job& job = jobs[index];
    std::unique_ptr<MockLlmClient> mock;
    LlmClient* llm = http.get();
    if (script) {
      MockLlmClient::Script per_job = *script;
      per_job.seed = script->seed + index;
      mock = std::make_unique<MockLlmClient>(std::move(per_job));
      llm = mock.get();
    }
    std::unique_ptr<Verifier> verifier = make_verifier();
    std::unique_ptr<CompileChecker> compiler = make_compiler();

    RepairServices services;
    services.llm = llm;
    services.verifier = verifier.get();
    services.compiler = compiler.get();
    services.library = &library;
    services.job_id = job.sample->id + "/" + job.slug;
    services.artifact_dir = summary.run_dir / Slug(job.sample->id) / job.slug;

    RepairConfig rc{job.spec, job.history, config.max_attempts, job.temperature,
                    config.llm};
    try {
      results[index] = FixCode(*job.sample, rc, services);
    } catch (const Error& e) {
      if (e.code() == ErrorCode::kAuthMissing ||
          e.code() == ErrorCode::kBinaryNotFound) {
        throw;
      }
      job_errors[index] = e.what();
    }
    if (options.log) {
      std::lock_guard lock(log_mu);
      *options.log << services.job_id << ": "
                   << (results[index].success
                           ? "repaired at attempt " +
                                 std::to_string(*results[index].success_attempt)
                           : job_errors[index].empty() ? std::string("not repaired")
                                                       : job_errors[index])
                   << "\n";
    }
  });

  std::string records_text;
  std::string jobs_text;
  for (std::size_t i = 0; i < jobs.size(); ++i) {
    const RepairResult& r = results[i];
    const std::string job_id = jobs[i].sample->id + "/" + jobs[i].slug;
    json line = {{"job_id", job_id},
                 {"sample_id", jobs[i].sample->id},
                 {"prompt_key", jobs[i].spec.Key(library)},
                 {"temperature", jobs[i].temperature},
                 {"history_format", HistoryFormatName(jobs[i].history)},
                 {"success", r.success},
                 {"initial_verdict", VerdictName(r.initial_outcome.verdict)},
                 {"initial_safe", r.initial_safe},
                 {"attempts", r.attempts.size()},
                 {"error", job_errors[i]}};
    if (r.success_attempt) line["success_attempt"] = *r.success_attempt;
    jobs_text += line.dump() + "\n";
    if (r.success) ++summary.successes;
    if (!job_errors[i].empty()) ++summary.failed_jobs;
    for (const RepairAttempt& a : r.attempts) {
      records_text += RecordToJson(a.metrics).dump() + "\n";
      ++summary.records;
    }
  }
  WriteFile(summary.run_dir / "jobs.jsonl", jobs_text);
  WriteFile(summary.run_dir / "records.jsonl", records_text);
  return summary;
}

std::filesystem::path Report(const std::filesystem::path& run_dir) {
  const auto records_path = run_dir / "records.jsonl";
  if (!std::filesystem::is_regular_file(records_path)) {
    throw Error(ErrorCode::kEmptyInput, "no records.jsonl in " + run_dir.string());
  }
  const std::vector<MetricRecord> records = LoadRecords(records_path);
  const auto destination = run_dir / "report";
  EmitReport(records, StandardGroupings(), destination);
  return destination;
}

}  // namespace memfix
