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

#include <array>
#include <chrono>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <functional>
#include <map>
#include <mutex>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "hprobe/chat_client.hpp"
#include "hprobe/instrument_bank.hpp"

namespace hprobe {

/// Instrument presentation order: QV = questionnaire first, VQ = vignettes first.
enum class Condition { QV, VQ };

std::string_view to_string(Condition c);
/// Accepts "qv"/"QV"/"vq"/"VQ".
std::optional<Condition> parse_condition(std::string_view name);
std::array<Instrument, 3> instrument_order(Condition c);

/// Default sampling temperature for an agent label (Claude-class 0.85,
/// GPT-4-class 1.2, Gemini/Llama 0.95, anything else 1.0).
double default_temperature(std::string_view agent_label);

struct RunConfig {
  std::string agent_label;
  std::string model_name;
  Condition condition = Condition::QV;
  int n_runs = 100;
  double temperature = 1.0;
  std::uint64_t master_seed = 0;
  int parallelism = 1;
};

struct Permutation {
  Instrument instrument = Instrument::MFV;
  std::vector<std::string> order;  // item ids in presentation order

  bool operator==(const Permutation&) const = default;
};

Permutation identity_permutation(const InstrumentSpec& spec);
/// Throws PermutationMismatch unless `perm` is a bijection over the spec's ids.
void check_permutation(const InstrumentSpec& spec, const Permutation& perm);

/// SplitMix64 finaliser over (parent, stream); the per-run and per-instrument
/// seed derivation scheme.
std::uint64_t derive_seed(std::uint64_t parent, std::uint64_t stream);

/// Uniform permutation by Fisher-Yates driven by mt19937_64 with rejection
/// sampling, so the draw is identical on every standard library.
Permutation draw_permutation(const InstrumentSpec& spec, std::uint64_t seed);

/// The fixed system prompt sent as message #1 of every conversation.
const std::string& system_prompt();

/// Preamble, scale legend, then the items numbered 1..k in permuted order.
std::string build_instrument_prompt(const InstrumentSpec& spec, const Permutation& perm);

struct PlannedTurn {
  Instrument instrument = Instrument::MFV;
  Permutation permutation;
  std::string prompt;
};

struct PromptPlan {
  int run_index = 0;
  std::uint64_t run_seed = 0;
  std::string system_prompt;
  std::vector<PlannedTurn> turns;  // condition order
};

/// Deterministic in (master_seed, run_index).
PromptPlan plan_run(const RunConfig& config, const InstrumentBank& bank, int run_index);

struct TranscriptError {
  std::string kind;  // ErrorCode name, e.g. TransportExhausted
  std::string message;

  bool operator==(const TranscriptError&) const = default;
};

struct SessionTranscript {
  std::string run_id;
  int run_index = 0;
  std::string agent_label;
  std::string model_name;
  Condition condition = Condition::QV;
  std::string bank_version;
  std::uint64_t master_seed = 0;
  std::uint64_t seed = 0;
  double temperature = 1.0;
  std::vector<Permutation> permutations;  // presentation order
  std::vector<ChatMessage> turns;
  std::map<Instrument, std::string> raw_replies;
  std::string started_at;
  std::string finished_at;
  std::optional<TranscriptError> error;

  const Permutation* permutation(Instrument i) const;
  bool operator==(const SessionTranscript&) const = default;
};

nlohmann::json to_json(const SessionTranscript& t);
SessionTranscript transcript_from_json(const nlohmann::json& j);

/// Reads one JSONL transcript file, or every *.jsonl in a directory (sorted by
/// file name, then in file order).
std::vector<SessionTranscript> read_transcripts(const std::filesystem::path& file_or_dir);

class Clock {
 public:
  virtual ~Clock() = default;
  virtual std::chrono::system_clock::time_point now() const = 0;
};

class SystemClock : public Clock {
 public:
  std::chrono::system_clock::time_point now() const override { return std::chrono::system_clock::now(); }
};

/// Always reports the same instant; used for replayed and scripted batches so
/// their transcripts are byte-reproducible.
class FixedClock : public Clock {
 public:
  explicit FixedClock(std::chrono::system_clock::time_point at = {}) : at_(at) {}
  std::chrono::system_clock::time_point now() const override { return at_; }

 private:
  std::chrono::system_clock::time_point at_;
};

/// ISO-8601 UTC with millisecond precision.
std::string format_timestamp(std::chrono::system_clock::time_point t);

/// `<agent>_<condition>_<YYYYMMDD>.jsonl`
std::string transcript_file_name(std::string_view agent_label, Condition c,
                                 std::chrono::system_clock::time_point t);

/// Write-ahead JSONL store: every finished run is appended and flushed at
/// once. finalize() rewrites the file ordered by run index.
class TranscriptWriter {
 public:
  explicit TranscriptWriter(std::filesystem::path file);

  void append(const SessionTranscript& t);
  void finalize();
  const std::filesystem::path& path() const { return file_; }

 private:
  std::filesystem::path file_;
  std::mutex mutex_;
  std::ofstream out_;
};

using TranscriptSink = std::function<void(const SessionTranscript&)>;

/// Runs config.n_runs conversations, up to config.parallelism at a time.
/// Provider failures are recorded on the transcript, never thrown.
std::vector<SessionTranscript> execute_batch(const RunConfig& config, const InstrumentBank& bank,
                                             ChatProvider& provider, const Clock& clock,
                                             const TranscriptSink& sink = {});

}  // namespace hprobe
