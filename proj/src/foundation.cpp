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

#include "hprobe/foundation.hpp"

#include <algorithm>

namespace hprobe {
namespace {

constexpr std::array<std::pair<Foundation, std::string_view>, 8> kFoundationNames = {{
    {Foundation::Care, "Care"},
    {Foundation::Fairness, "Fairness"},
    {Foundation::Loyalty, "Loyalty"},
    {Foundation::Authority, "Authority"},
    {Foundation::Purity, "Purity"},
    {Foundation::Liberty, "Liberty"},
    {Foundation::CareEmotional, "CareEmotional"},
    {Foundation::CarePhysical, "CarePhysical"},
}};

constexpr std::array<std::pair<Instrument, std::string_view>, 3> kInstrumentNames = {{
    {Instrument::MFQ_Part1, "MFQ_Part1"},
    {Instrument::MFQ_Part2, "MFQ_Part2"},
    {Instrument::MFV, "MFV"},
}};

}  // namespace

std::string_view to_string(Foundation f) {
  for (const auto& [value, name] : kFoundationNames) {
    if (value == f) return name;
  }
  return "?";
}

std::optional<Foundation> parse_foundation(std::string_view name) {
  for (const auto& [value, n] : kFoundationNames) {
    if (n == name) return value;
  }
  return std::nullopt;
}

std::string_view to_string(Instrument i) {
  for (const auto& [value, name] : kInstrumentNames) {
    if (value == i) return name;
  }
  return "?";
}

std::optional<Instrument> parse_instrument(std::string_view name) {
  for (const auto& [value, n] : kInstrumentNames) {
    if (n == name) return value;
  }
  return std::nullopt;
}

bool is_legal(Instrument i, Foundation f) {
  if (is_mfq(i)) {
    return std::find(kMfqFoundations.begin(), kMfqFoundations.end(), f) != kMfqFoundations.end();
  }
  return std::find(kMfvFoundations.begin(), kMfvFoundations.end(), f) != kMfvFoundations.end();
}

}  // namespace hprobe
