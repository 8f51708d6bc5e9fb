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

#include "hprobe/response_parser.hpp"

#include <algorithm>
#include <regex>
#include <set>
#include <sstream>

#include "hprobe/error.hpp"

namespace hprobe {
namespace {

// Optional list bullet or markdown emphasis, the position, a separator, then
// the answer. A decimal answer such as "3.5" is not an enumerated integer.
const std::regex& answer_line() {
  static const std::regex re(R"(^\s*(?:[-*>]\s+)?\**\s*(\d{1,3})\s*\**\s*[.):]\s*\**\s*(-?\d{1,3})(?![\d.,]\d)(?:\D.*)?$)");
  return re;
}

std::string describe_positions(const std::vector<AnswerPair>& pairs, int expected) {
  std::ostringstream out;
  out << "found " << pairs.size() << " enumerated answers, expected " << expected;
  return out.str();
}

}  // namespace

std::string_view to_string(ExclusionReason r) {
  switch (r) {
    case ExclusionReason::WrongCount: return "WrongCount";
    case ExclusionReason::OutOfRange: return "OutOfRange";
    case ExclusionReason::Unparseable: return "Unparseable";
    case ExclusionReason::MathCheckFail: return "MathCheckFail";
    case ExclusionReason::GoodCheckFail: return "GoodCheckFail";
    case ExclusionReason::TransportError: return "TransportError";
  }
  return "?";
}

std::optional<ExclusionReason> parse_exclusion_reason(std::string_view s) {
  for (auto r : {ExclusionReason::WrongCount, ExclusionReason::OutOfRange, ExclusionReason::Unparseable,
                 ExclusionReason::MathCheckFail, ExclusionReason::GoodCheckFail, ExclusionReason::TransportError}) {
    if (to_string(r) == s) return r;
  }
  return std::nullopt;
}

std::optional<AttentionPolicy> parse_attention_profile(std::string_view name) {
  if (name == "paper") return AttentionPolicy::paper();
  if (name == "strict") return AttentionPolicy::strict();
  return std::nullopt;
}

std::vector<AnswerPair> extract_answers(std::string_view text, int expected_count) {
  std::vector<AnswerPair> pairs;
  std::istringstream in{std::string(text)};
  std::string line;
  std::smatch m;
  while (std::getline(in, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (std::regex_match(line, m, answer_line())) {
      pairs.push_back({std::stoi(m[1].str()), std::stoi(m[2].str())});
    }
  }
  if (pairs.empty()) throw Error(ErrorCode::Unparseable, "no enumerated answers found");
  if (static_cast<int>(pairs.size()) != expected_count) {
    throw Error(ErrorCode::WrongCount, describe_positions(pairs, expected_count));
  }
  std::vector<bool> seen(static_cast<std::size_t>(expected_count) + 1, false);
  for (const auto& p : pairs) {
    if (p.position < 1 || p.position > expected_count) {
      throw Error(ErrorCode::WrongCount, "position " + std::to_string(p.position) + " outside 1.." +
                                             std::to_string(expected_count));
    }
    if (seen[static_cast<std::size_t>(p.position)]) {
      throw Error(ErrorCode::WrongCount, "position " + std::to_string(p.position) + " answered twice");
    }
    seen[static_cast<std::size_t>(p.position)] = true;
  }
  return pairs;
}

std::map<std::string, int> unshuffle(std::span<const AnswerPair> pairs, const Permutation& perm) {
  if (pairs.size() != perm.order.size()) {
    throw Error(ErrorCode::PermutationMismatch, std::to_string(pairs.size()) + " answers for a " +
                                                    std::to_string(perm.order.size()) + "-item permutation");
  }
  std::map<std::string, int> out;
  for (const auto& p : pairs) {
    if (p.position < 1 || p.position > static_cast<int>(perm.order.size())) {
      throw Error(ErrorCode::PermutationMismatch, "position " + std::to_string(p.position) + " out of range");
    }
    if (!out.emplace(perm.order[static_cast<std::size_t>(p.position - 1)], p.value).second) {
      throw Error(ErrorCode::PermutationMismatch, "position " + std::to_string(p.position) + " repeated");
    }
  }
  return out;
}

const std::map<std::string, int>& ParsedRun::answers(Instrument i) const {
  switch (i) {
    case Instrument::MFQ_Part1: return answers_mfq1;
    case Instrument::MFQ_Part2: return answers_mfq2;
    case Instrument::MFV: return answers_mfv;
  }
  return answers_mfv;
}

std::optional<int> ParsedRun::answer(std::string_view id) const {
  for (const auto* m : {&answers_mfq1, &answers_mfq2, &answers_mfv}) {
    auto it = m->find(std::string(id));
    if (it != m->end()) return it->second;
  }
  return std::nullopt;
}

ParsedRun validate_run(const SessionTranscript& transcript, const InstrumentBank& bank,
                       const AttentionPolicy& policy) {
  ParsedRun run;
  run.run_id = transcript.run_id;
  run.agent_label = transcript.agent_label;
  run.condition = transcript.condition;
  auto exclude = [&run](ExclusionReason reason, std::string detail) {
    run.status = RunStatus::Excluded;
    run.reason = reason;
    run.detail = std::move(detail);
    run.answers_mfq1.clear();
    run.answers_mfq2.clear();
    run.answers_mfv.clear();
    return run;
  };

  if (transcript.error) {
    return exclude(ExclusionReason::TransportError, transcript.error->kind + ": " + transcript.error->message);
  }

  std::map<Instrument, std::map<std::string, int>> answers;
  for (Instrument i : kInstruments) {
    const auto& spec = bank.spec(i);
    const std::string part(to_string(i));
    auto reply = transcript.raw_replies.find(i);
    if (reply == transcript.raw_replies.end()) {
      return exclude(ExclusionReason::TransportError, part + ": no reply recorded");
    }
    const Permutation* perm = transcript.permutation(i);
    if (perm == nullptr) return exclude(ExclusionReason::Unparseable, part + ": no permutation recorded");
    try {
      check_permutation(spec, *perm);
      auto pairs = extract_answers(reply->second, static_cast<int>(spec.items.size()));
      answers[i] = unshuffle(pairs, *perm);
    } catch (const Error& e) {
      const auto reason = e.code() == ErrorCode::WrongCount ? ExclusionReason::WrongCount
                                                            : ExclusionReason::Unparseable;
      return exclude(reason, part + ": " + e.what());
    }
  }

  for (Instrument i : kInstruments) {
    const auto& scale = bank.spec(i).scale;
    for (const auto& [id, value] : answers[i]) {
      if (!scale.contains(value)) {
        return exclude(ExclusionReason::OutOfRange, id + " = " + std::to_string(value) + " outside " +
                                                        std::to_string(scale.min) + ".." + std::to_string(scale.max));
      }
    }
  }

  for (Instrument i : {Instrument::MFQ_Part1, Instrument::MFQ_Part2}) {
    for (const auto& item : bank.spec(i).items) {
      if (item.attention != AttentionRole::MathCheck) continue;
      const int v = answers[i].at(item.id);
      if (v > policy.math_max) {
        return exclude(ExclusionReason::MathCheckFail, item.id + " = " + std::to_string(v));
      }
    }
  }
  for (Instrument i : {Instrument::MFQ_Part1, Instrument::MFQ_Part2}) {
    for (const auto& item : bank.spec(i).items) {
      if (item.attention != AttentionRole::GoodCheck) continue;
      const int v = answers[i].at(item.id);
      if (v < policy.good_min) {
        return exclude(ExclusionReason::GoodCheckFail, item.id + " = " + std::to_string(v));
      }
    }
  }

  run.status = RunStatus::Valid;
  run.answers_mfq1 = std::move(answers[Instrument::MFQ_Part1]);
  run.answers_mfq2 = std::move(answers[Instrument::MFQ_Part2]);
  run.answers_mfv = std::move(answers[Instrument::MFV]);
  return run;
}

const SummaryRow* BatchSummary::find(std::string_view agent, Condition c) const {
  for (const auto& row : rows) {
    if (row.agent_label == agent && row.condition == c) return &row;
  }
  return nullptr;
}

BatchSummary batch_summary(std::span<const ParsedRun> parsed) {
  std::map<std::pair<std::string, Condition>, SummaryRow> rows;
  for (const auto& run : parsed) {
    auto& row = rows[{run.agent_label, run.condition}];
    row.agent_label = run.agent_label;
    row.condition = run.condition;
    ++row.total;
    if (run.valid()) {
      ++row.valid;
    } else {
      ++row.excluded;
      ++row.by_reason[run.reason.value_or(ExclusionReason::Unparseable)];
    }
  }
  BatchSummary summary;
  for (auto& [key, row] : rows) summary.rows.push_back(std::move(row));
  return summary;
}

std::string render_summary_table(const BatchSummary& summary) {
  std::map<std::string, std::map<Condition, int>> valid;
  for (const auto& row : summary.rows) valid[row.agent_label][row.condition] = row.valid;
  std::ostringstream out;
  out << "| Agent | QV | VQ | Overall (Total) |\n|---|---:|---:|---:|\n";
  for (const auto& [agent, counts] : valid) {
    auto get = [&counts](Condition c) {
      auto it = counts.find(c);
      return it == counts.end() ? 0 : it->second;
    };
    out << "| " << agent << " | " << get(Condition::QV) << " | " << get(Condition::VQ) << " | "
        << get(Condition::QV) + get(Condition::VQ) << " |\n";
  }
  return out.str();
}

void write_parsed_csv(std::ostream& out, std::span<const ParsedRun> parsed, const InstrumentBank& bank) {
  std::vector<std::string> ids;
  for (const auto& spec : bank.specs()) {
    for (const auto& item : spec.items) ids.push_back(item.id);
  }
  out << "run_id,agent,condition,status,reason";
  for (const auto& id : ids) out << ',' << id;
  out << '\n';
  for (const auto& run : parsed) {
    out << run.run_id << ',' << run.agent_label << ',' << to_string(run.condition) << ','
        << (run.valid() ? "Valid" : "Excluded") << ',' << (run.reason ? to_string(*run.reason) : "");
    for (const auto& id : ids) {
      out << ',';
      if (auto v = run.answer(id)) out << *v;
    }
    out << '\n';
  }
}

}  // namespace hprobe
