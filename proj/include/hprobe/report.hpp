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

#include <filesystem>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include <json.hpp>

#include "hprobe/analysis.hpp"
#include "hprobe/response_parser.hpp"

namespace hprobe {

struct AnalysisOptions {
  VerdictPolicy policy;
  AttentionPolicy attention;
  std::string attention_profile = "paper";
  stats::SsType ss_type = stats::SsType::II;
  bool pool_conditions = true;  // false: one regression set per condition
  std::size_t min_regression_runs = kMinRegressionRuns;
  ReferenceBaselines baselines;
};

struct CoherenceBlock {
  std::optional<Condition> condition;  // empty: pooled
  std::optional<CoherenceReport> report;
  std::optional<ErrorCode> error;
  std::string detail;
  HypocrisyVerdict verdict;
};

struct AgentAnalysis {
  std::string agent;
  std::vector<FoundationScores> scores;
  ConsistencyReport consistency;
  std::vector<CoherenceBlock> coherence;
  Verdict verdict = Verdict::Undetermined;
  ConstancyReport constancy;
  ConditionContrast contrast;
};

struct AnovaOutcome {
  std::optional<stats::AnovaTable> table;
  std::optional<ErrorCode> error;
  std::string detail;
};

struct AnalysisReport {
  std::string bank_version;
  AnalysisOptions options;
  BatchSummary summary;
  std::vector<AgentAnalysis> agents;  // sorted by label
  AlphaTable alpha_table;
  AnovaOutcome alpha_anova;
  AnovaOutcome foundation_anova;

  const AgentAnalysis* find(std::string_view agent) const;
};

/// Validates every transcript. Throws BankVersionMismatch when a transcript
/// was produced under another bank.
std::vector<ParsedRun> parse_transcripts(std::span<const SessionTranscript> transcripts, const InstrumentBank& bank,
                                         const AttentionPolicy& policy);

/// Scores, consistency, coherence, verdict, constancy and contrasts per agent,
/// plus the cross-agent ANOVAs when there is more than one agent.
/// Throws NoValidRuns when nothing survived validation.
AnalysisReport analyze(std::span<const ParsedRun> parsed, const InstrumentBank& bank, const AnalysisOptions& options);

nlohmann::json to_json(const AnalysisReport& report);

/// Markdown rendering of a serialized report.
std::string render_markdown(const nlohmann::json& report);

void write_scores_csv(std::ostream& out, const AnalysisReport& report);
void write_alphas_csv(std::ostream& out, const AnalysisReport& report);
void write_regressions_csv(std::ostream& out, const nlohmann::json& report);

inline constexpr const char* kReportFile = "report.json";

/// report.json, parsed.csv, scores.csv and alphas.csv under `dir`.
void write_report_bundle(const std::filesystem::path& dir, const AnalysisReport& report,
                         std::span<const ParsedRun> parsed, const InstrumentBank& bank);

/// Reads `dir/report.json`. Throws MissingBundle.
nlohmann::json load_report_bundle(const std::filesystem::path& dir);

}  // namespace hprobe
