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

#include <map>
#include <optional>
#include <ostream>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "hprobe/instrument_bank.hpp"
#include "hprobe/session_engine.hpp"

namespace hprobe {

enum class ExclusionReason { WrongCount, OutOfRange, Unparseable, MathCheckFail, GoodCheckFail, TransportError };

std::string_view to_string(ExclusionReason r);
std::optional<ExclusionReason> parse_exclusion_reason(std::string_view s);

enum class RunStatus { Valid, Excluded };

struct AnswerPair {
  int position = 0;  // 1-based as printed in the prompt
  int value = 0;

  bool operator==(const AnswerPair&) const = default;
};

/// Finds enumerated answers of the form `<n>. <v>` (also `<n>) <v>` and
/// `<n>: <v>`), one per line, ignoring trailing label text. Succeeds only
/// when positions 1..expected_count each occur exactly once; otherwise throws
/// WrongCount, or Unparseable when nothing enumerated is found at all.
std::vector<AnswerPair> extract_answers(std::string_view text, int expected_count);

/// Maps the answer at position p to perm.order[p-1].
std::map<std::string, int> unshuffle(std::span<const AnswerPair> pairs, const Permutation& perm);

/// Attention-check acceptance regions. The default reproduces the exclusions
/// actually applied (good item rejected only at 0 or 1).
struct AttentionPolicy {
  int math_max = 2;
  int good_min = 2;

  static AttentionPolicy paper() { return {2, 2}; }
  static AttentionPolicy strict() { return {2, 3}; }
};

std::optional<AttentionPolicy> parse_attention_profile(std::string_view name);

struct ParsedRun {
  std::string run_id;
  std::string agent_label;
  Condition condition = Condition::QV;
  RunStatus status = RunStatus::Excluded;
  std::optional<ExclusionReason> reason;
  std::string detail;
  std::map<std::string, int> answers_mfq1;
  std::map<std::string, int> answers_mfq2;
  std::map<std::string, int> answers_mfv;

  bool valid() const { return status == RunStatus::Valid; }
  const std::map<std::string, int>& answers(Instrument i) const;
  /// Answer for any item id across the three maps.
  std::optional<int> answer(std::string_view id) const;
};

/// Gates, in order: transport error, per-part parse and count (MFQ part 1,
/// part 2, MFV), scale range, math check, good check. Total: never throws for
/// a well-formed transcript; the first failing gate is the recorded reason.
ParsedRun validate_run(const SessionTranscript& transcript, const InstrumentBank& bank,
                       const AttentionPolicy& policy = {});

struct SummaryRow {
  std::string agent_label;
  Condition condition = Condition::QV;
  int total = 0;
  int valid = 0;
  int excluded = 0;
  std::map<ExclusionReason, int> by_reason;
};

struct BatchSummary {
  std::vector<SummaryRow> rows;  // sorted by (agent, condition)

  const SummaryRow* find(std::string_view agent, Condition c) const;
};

BatchSummary batch_summary(std::span<const ParsedRun> parsed);

/// Valid counts per agent with one column per condition plus the total.
std::string render_summary_table(const BatchSummary& summary);

/// One row per run: run_id, agent, condition, status, reason, then one column
/// per bank item id (empty when excluded).
void write_parsed_csv(std::ostream& out, std::span<const ParsedRun> parsed, const InstrumentBank& bank);

}  // namespace hprobe
