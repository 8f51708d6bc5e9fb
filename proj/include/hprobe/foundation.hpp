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
#include <optional>
#include <string_view>

namespace hprobe {

enum class Foundation {
  Care,
  Fairness,
  Loyalty,
  Authority,
  Purity,
  Liberty,
  CareEmotional,
  CarePhysical,
};

enum class Instrument { MFQ_Part1, MFQ_Part2, MFV };

/// Foundations an MFQ item may carry, in report order.
inline constexpr std::array<Foundation, 5> kMfqFoundations = {
    Foundation::Authority, Foundation::Care, Foundation::Fairness, Foundation::Loyalty,
    Foundation::Purity};

/// MFV vignette categories, in report order.
inline constexpr std::array<Foundation, 7> kMfvFoundations = {
    Foundation::Authority, Foundation::CareEmotional, Foundation::CarePhysical,
    Foundation::Fairness,  Foundation::Liberty,       Foundation::Loyalty,
    Foundation::Purity};

inline constexpr std::array<Instrument, 3> kInstruments = {
    Instrument::MFQ_Part1, Instrument::MFQ_Part2, Instrument::MFV};

std::string_view to_string(Foundation f);
std::optional<Foundation> parse_foundation(std::string_view name);

std::string_view to_string(Instrument i);
std::optional<Instrument> parse_instrument(std::string_view name);

inline constexpr bool is_mfq(Instrument i) { return i != Instrument::MFV; }

/// Whether an item of instrument `i` may be tagged with `f`.
bool is_legal(Instrument i, Foundation f);

/// Cross-instrument parent: both MFV care categories map to Care.
inline constexpr Foundation parent_foundation(Foundation f) {
  return (f == Foundation::CareEmotional || f == Foundation::CarePhysical) ? Foundation::Care : f;
}

/// MFQ foundation whose score should predict an MFV category; none for Liberty.
inline constexpr std::optional<Foundation> matching_mfq_foundation(Foundation mfv_category) {
  if (mfv_category == Foundation::Liberty) return std::nullopt;
  return parent_foundation(mfv_category);
}

}  // namespace hprobe
