// Copyright 2026 The hprobe Authors
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


#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "hprobe/analysis.hpp"
#include "hprobe/report.hpp"
#include "hprobe/response_parser.hpp"
#include "hprobe/session_engine.hpp"

namespace hprobe::cli {

struct AgentConfig {
  std::string label;
  std::string model_name;              // defaults to the label
  std::optional<std::string> base_url;  // else HYPOCRISY_PROBE_BASE_URL_<AGENT>
  std::optional<double> temperature;    // else the per-model default
  int retry_budget = 5;
  int timeout_ms = 120000;
};

struct ProbeConfig {
  std::vector<AgentConfig> agents;
  std::vector<Condition> conditions = {Condition::QV, Condition::VQ};
  int n_runs = 100;
  std::uint64_t master_seed = 0;
  int parallelism = 1;
  std::filesystem::path output_dir = "hprobe-out";
  std::filesystem::path bank_dir;  // empty: bundled bank
  std::optional<std::filesystem::path> replay_dir;
  std::optional<std::filesystem::path> record_dir;
  VerdictPolicy policy;
  std::string attention_profile = "paper";
  stats::SsType ss_type = stats::SsType::II;
  bool pool_conditions = true;
  std::optional<std::int64_t> clock_epoch;  // seconds; pins transcript timestamps

  std::filesystem::path transcript_dir() const { return output_dir / "transcripts"; }
  std::filesystem::path report_dir() const { return output_dir / "report"; }
};

/// Reads the declarative config file format. Unknown keys are rejected.
ProbeConfig config_from_json(const nlohmann::json& j);
ProbeConfig load_config(const std::filesystem::path& file);

/// Throws InvalidConfig on the first violated constraint.
void validate_config(const ProbeConfig& config);

AgentConfig agent_config(const ProbeConfig& config, std::string_view label);

/// Exclusive per-directory lock held for the lifetime of the object.
class OutputLock {
 public:
  explicit OutputLock(const std::filesystem::path& dir);
  ~OutputLock();
  OutputLock(const OutputLock&) = delete;
  OutputLock& operator=(const OutputLock&) = delete;

 private:
  std::filesystem::path file_;
};

struct RunOutcome {
  std::vector<std::filesystem::path> transcript_files;
  BatchSummary summary;
};

/// One batch per agent x condition. Transport failures are recorded on the
/// transcripts; configuration errors throw.
RunOutcome cmd_run(const ProbeConfig& config, std::ostream& log);

/// Validates, scores and analyzes every transcript under `transcripts`
/// (default: the run output) and writes the report bundle.
AnalysisReport cmd_analyze(const ProbeConfig& config, std::ostream& log,
                           const std::optional<std::filesystem::path>& transcripts = std::nullopt);

/// Renders report.md and regressions.csv next to the bundle. Returns the markdown.
std::string cmd_report(const ProbeConfig& config, std::ostream& log);

/// Loads and checks the bank, printing a short inventory.
InstrumentBank cmd_validate_bank(const ProbeConfig& config, std::ostream& log);

/// Full command-line entry point. Returns the process exit code.
int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace hprobe::cli
