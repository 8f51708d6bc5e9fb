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

#include <cstddef>
#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "hprobe/foundation.hpp"

namespace hprobe {

enum class AttentionRole { None, MathCheck, GoodCheck };

std::string_view to_string(AttentionRole role);

struct Scale {
  int min = 0;
  int max = 0;
  std::vector<std::string> labels;  // one per point, min..max

  bool contains(int v) const { return v >= min && v <= max; }
  bool operator==(const Scale&) const = default;
};

struct Item {
  std::string id;
  Instrument instrument = Instrument::MFV;
  std::string text;
  std::optional<Foundation> foundation;  // empty for attention items
  AttentionRole attention = AttentionRole::None;

  bool scored() const { return attention == AttentionRole::None; }
  bool operator==(const Item&) const = default;
};

struct InstrumentSpec {
  Instrument instrument = Instrument::MFV;
  std::vector<Item> items;
  Scale scale;
  std::string preamble;
  std::string legend_heading;

  std::string_view name() const { return to_string(instrument); }
  /// Index of `id` in bank order, if present.
  std::optional<std::size_t> index_of(std::string_view id) const;
  bool operator==(const InstrumentSpec&) const = default;
};

/// The three instrument specs plus the bank version they were loaded under.
/// Immutable after load; share freely across threads.
class InstrumentBank {
 public:
  InstrumentBank(std::string version, std::vector<InstrumentSpec> specs);

  const std::string& version() const { return version_; }
  const std::vector<InstrumentSpec>& specs() const { return specs_; }
  const InstrumentSpec& spec(Instrument i) const;

  /// Looks an item up by stable id across all instruments.
  const Item* find(std::string_view id) const;

  bool operator==(const InstrumentBank&) const = default;

 private:
  std::string version_;
  std::vector<InstrumentSpec> specs_;
  std::map<std::string, std::pair<std::size_t, std::size_t>, std::less<>> index_;
};

/// Loads `mfq_part1.tsv`, `mfq_part2.tsv` and `mfv.tsv` from `dir` and checks
/// every count and coverage invariant. Throws Error with MissingFile,
/// SchemaViolation, CountMismatch or FoundationCoverage.
InstrumentBank load_instruments(const std::filesystem::path& dir);

/// Writes the bank back out in the same format load_instruments reads.
void save_instruments(const InstrumentBank& bank, const std::filesystem::path& dir);

/// Directory holding the bundled bank.
std::filesystem::path bundled_bank_dir();

/// Scored items of `f` in bank order. Throws IllegalFoundation when `f` is not
/// legal for the spec's instrument.
std::vector<Item> foundation_items(const InstrumentSpec& spec, Foundation f);

/// Scored items of `f` across both MFQ parts (part 1 first).
std::vector<Item> mfq_foundation_items(const InstrumentBank& bank, Foundation f);

}  // namespace hprobe
