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
#include <map>
#include <optional>
#include <string>
#include <string_view>

#include "hprobe/chat_client.hpp"
#include "hprobe/instrument_bank.hpp"

namespace hprobe {

/// Offline respondents used for smoke runs and end-to-end fixtures.
///   Coherent:   one latent weight per foundation drives both MFQ and MFV.
///   Hypocrite:  MFQ and MFV answers come from independent latent weights.
///   Constant:   every scored MFQ item gets the same answer in every run.
///   Random:     uniform answers on scored items.
/// All behaviors pass the attention checks.
enum class ScriptedBehavior { Coherent, Hypocrite, Constant, Random };

std::string_view to_string(ScriptedBehavior b);

/// Recognizes "stub" (coherent) and "scripted-<behavior>".
std::optional<ScriptedBehavior> scripted_behavior_for(std::string_view agent);

/// Answers instrument prompts built from `bank`. A run is identified by the
/// first user turn, so the three turns of one session share one latent
/// profile, and per-item noise is keyed by item id (independent of the
/// presentation order). Thread-safe.
class ScriptedAgent : public ChatProvider {
 public:
  ScriptedAgent(const InstrumentBank& bank, ScriptedBehavior behavior, std::uint64_t seed = 0,
                double noise = 0.6);

  ChatReply complete(const ChatRequest& request) override;

  ScriptedBehavior behavior() const { return behavior_; }

 private:
  int answer(const Item& item, std::uint64_t run_seed) const;

  const InstrumentBank& bank_;
  ScriptedBehavior behavior_;
  std::uint64_t seed_;
  double noise_;
  std::map<Instrument, std::map<std::string, const Item*, std::less<>>> by_text_;
};

}  // namespace hprobe
