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

#include <filesystem>
#include <iostream>
#include <optional>
#include <string>

#include "CLI11.hpp"
#include "memfix/error.h"
#include "memfix/experiment.h"

namespace {

constexpr int kExitOk = 0;
constexpr int kExitConfig = 1;
constexpr int kExitRuntime = 2;

struct CommonFlags {
  std::string config_path;
  std::optional<std::string> dataset;
  std::optional<std::string> seed_corpus;
  std::optional<std::string> runs_dir;
  std::optional<std::string> verifier;
  std::optional<int> verifier_timeout;
  std::optional<int> workers;
  std::optional<std::string> mock_script;
  std::optional<std::uint64_t> seed;
  std::optional<int> sample_count;
  std::optional<int> max_attempts;
};

// Flag values win over the file; absent flags leave it untouched.
nlohmann::json Overrides(const CommonFlags& f) {
  nlohmann::json o = nlohmann::json::object();
  if (f.dataset) o["dataset"] = std::filesystem::absolute(*f.dataset).string();
  if (f.seed_corpus) {
    o["seed_corpus"] = std::filesystem::absolute(*f.seed_corpus).string();
  }
  if (f.runs_dir) o["runs_dir"] = std::filesystem::absolute(*f.runs_dir).string();
  if (f.verifier) o["verifier"]["binary"] = *f.verifier;
  if (f.verifier_timeout) o["verifier"]["timeout_seconds"] = *f.verifier_timeout;
  if (f.mock_script) {
    o["llm"]["backend"] = "mock";
    o["llm"]["mock_script"] = std::filesystem::absolute(*f.mock_script).string();
  }
  if (f.seed) o["repair"]["seed"] = *f.seed;
  if (f.sample_count) o["repair"]["sample_count"] = *f.sample_count;
  if (f.max_attempts) o["repair"]["max_attempts"] = *f.max_attempts;
  if (f.workers) {
    o["verifier"]["workers"] = *f.workers;
    o["repair"]["workers"] = *f.workers;
  }
  return o;
}

void AddCommonFlags(CLI::App* cmd, CommonFlags* f) {
  cmd->add_option("-c,--config", f->config_path, "experiment config (JSON)")
      ->required()
      ->check(CLI::ExistingFile);
  cmd->add_option("--dataset", f->dataset, "dataset directory");
  cmd->add_option("--workers", f->workers, "parallel workers");
}

int RunCommand(const std::function<int()>& body) {
  try {
    return body();
  } catch (const memfix::Error& e) {
    std::cerr << "memfix: " << e.what() << "\n";
    return e.code() == memfix::ErrorCode::kConfigError ? kExitConfig : kExitRuntime;
  } catch (const std::exception& e) {
    std::cerr << "memfix: " << e.what() << "\n";
    return kExitRuntime;
  }
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Mutation-based benchmark building and LLM repair experiments "
               "for C programs checked by a bounded model checker."};
  app.require_subcommand(1);

  CommonFlags flags;
  std::string run_dir;
  std::optional<std::string> run_id;
  bool quiet = false;
  app.add_flag("-q,--quiet", quiet, "only print the final summary");

  auto* build = app.add_subcommand("build-corpus", "strip and dedupe the seed corpus");
  AddCommonFlags(build, &flags);
  build->add_option("--seed-corpus", flags.seed_corpus, "seed corpus directory");

  auto* mutate = app.add_subcommand("mutate", "generate mutants of every base sample");
  AddCommonFlags(mutate, &flags);

  auto* classify = app.add_subcommand("classify", "label samples with the verifier");
  AddCommonFlags(classify, &flags);
  classify->add_option("--verifier", flags.verifier, "verifier binary");
  classify->add_option("--timeout", flags.verifier_timeout, "per-sample timeout (s)");

  auto* repair = app.add_subcommand("repair", "run repair jobs over Unsafe samples");
  AddCommonFlags(repair, &flags);
  repair->add_option("--verifier", flags.verifier, "verifier binary");
  repair->add_option("--runs-dir", flags.runs_dir, "where run directories go");
  repair->add_option("--mock-script", flags.mock_script, "use the mock LLM with this script");
  repair->add_option("--seed", flags.seed, "sample selection seed");
  repair->add_option("--sample-count", flags.sample_count, "samples to draw");
  repair->add_option("--max-attempts", flags.max_attempts, "attempt limit T");
  repair->add_option("--run-id", run_id, "run directory name");

  auto* report = app.add_subcommand("report", "summarize the records of a run");
  report->add_option("run_dir", run_dir, "run directory")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kExitOk : kExitConfig;
  }
  std::ostream* log = quiet ? nullptr : &std::cerr;

  auto load = [&] {
    return memfix::ExperimentConfig::Load(flags.config_path, Overrides(flags));
  };

  if (build->parsed()) {
    return RunCommand([&] {
      const auto config = load();
      const auto s = memfix::BuildCorpus(config);
      if (log) {
        for (const auto& w : s.warnings) *log << "warning: " << w << "\n";
      }
      std::cout << "read " << s.files_read << " files, wrote " << s.samples
                << " base samples to " << config.dataset.string() << "\n";
      return kExitOk;
    });
  }
  if (mutate->parsed()) {
    return RunCommand([&] {
      const auto config = load();
      const auto s = memfix::Mutate(config);
      std::cout << s.bases << " bases, " << s.mutants << " mutants\n";
      return kExitOk;
    });
  }
  if (classify->parsed()) {
    return RunCommand([&] {
      const auto config = load();
      const auto s = memfix::Classify(config, {}, log);
      std::cout << "labeled " << s.labeled << " (safe " << s.safe << ", unsafe "
                << s.unsafe << ", unknown " << s.unknown << "), skipped "
                << s.skipped << " already labeled\n";
      return kExitOk;
    });
  }
  if (repair->parsed()) {
    return RunCommand([&] {
      const auto config = load();
      memfix::RepairRunOptions options;
      options.run_id = run_id;
      options.log = log;
      const auto s = memfix::RunRepair(config, options);
      std::cout << "run " << s.run_id << ": " << s.successes << "/" << s.jobs
                << " jobs repaired, " << s.records << " attempt records in "
                << s.run_dir.string() << "\n";
      return kExitOk;
    });
  }
  return RunCommand([&] {
    const auto destination = memfix::Report(run_dir);
    std::cout << "report written to " << destination.string() << "\n";
    return kExitOk;
  });
}
