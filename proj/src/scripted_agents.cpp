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


#include "hprobe/scripted_agents.hpp"

#include <algorithm>
#include <cmath>
#include <regex>
#include <sstream>

#include "hprobe/error.hpp"
#include "hprobe/session_engine.hpp"

namespace hprobe {
namespace {

std::uint64_t fnv1a(std::string_view s) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : s) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  return h;
}

// Uniform [0, 1) from a hashed stream.
double unit(std::uint64_t parent, std::string_view stream) {
  const std::uint64_t bits = derive_seed(parent, fnv1a(stream));
  return static_cast<double>(bits >> 11) * 0x1.0p-53;
}

int clamp_round(double v, const Scale& s) { return std::clamp(static_cast<int>(std::lround(v)), s.min, s.max); }

std::string latent_key(std::string_view tag, Foundation f) {
  return std::string(tag) + ":" + std::string(to_string(parent_foundation(f)));
}

}  // namespace

std::string_view to_string(ScriptedBehavior b) {
  switch (b) {
    case ScriptedBehavior::Coherent: return "coherent";
    case ScriptedBehavior::Hypocrite: return "hypocrite";
    case ScriptedBehavior::Constant: return "constant";
    case ScriptedBehavior::Random: return "random";
  }
  return "?";
}

std::optional<ScriptedBehavior> scripted_behavior_for(std::string_view agent) {
  if (agent == "stub") return ScriptedBehavior::Coherent;
  constexpr std::string_view prefix = "scripted-";
  if (!agent.starts_with(prefix)) return std::nullopt;
  const auto rest = agent.substr(prefix.size());
  for (auto b : {ScriptedBehavior::Coherent, ScriptedBehavior::Hypocrite, ScriptedBehavior::Constant,
                 ScriptedBehavior::Random}) {
    if (to_string(b) == rest) return b;
  }
  return std::nullopt;
}

ScriptedAgent::ScriptedAgent(const InstrumentBank& bank, ScriptedBehavior behavior, std::uint64_t seed, double noise)
    : bank_(bank), behavior_(behavior), seed_(seed), noise_(noise) {
  for (const auto& spec : bank_.specs()) {
    for (const auto& item : spec.items) by_text_[spec.instrument][item.text] = &item;
  }
}

int ScriptedAgent::answer(const Item& item, std::uint64_t run_seed) const {
  const Scale& scale = bank_.spec(item.instrument).scale;
  const bool mfq = is_mfq(item.instrument);
  if (item.attention == AttentionRole::MathCheck) return scale.min + (unit(run_seed, item.id) < 0.5 ? 0 : 1);
  if (item.attention == AttentionRole::GoodCheck) return scale.max - (unit(run_seed, item.id) < 0.5 ? 0 : 1);

  const double span = scale.max - scale.min;
  const double jitter = (2.0 * unit(run_seed, "noise:" + item.id) - 1.0) * noise_;
  switch (behavior_) {
    case ScriptedBehavior::Random:
      return scale.min + static_cast<int>(unit(run_seed, item.id) * (span + 1.0));
    case ScriptedBehavior::Constant:
      if (mfq) return scale.min + static_cast<int>(span / 2.0 + 0.5);
      [[fallthrough]];
    case ScriptedBehavior::Coherent: {
      const double w = unit(run_seed, latent_key("w", *item.foundation));
      return clamp_round(scale.min + span * w + jitter, scale);
    }
    case ScriptedBehavior::Hypocrite: {
      const double w = unit(run_seed, latent_key(mfq ? "w" : "v", *item.foundation));
      return clamp_round(scale.min + span * w + jitter, scale);
    }
  }
  return scale.min;
}

ChatReply ScriptedAgent::complete(const ChatRequest& request) {
  validate_conversation(request.messages);
  if (request.messages.size() < 2) throw Error(ErrorCode::InvalidConversation, "no user turn");
  const std::string& prompt = request.messages.back().content;
  const InstrumentSpec* spec = nullptr;
  for (const auto& s : bank_.specs()) {
    if (prompt.starts_with(s.preamble)) spec = &s;
  }
  if (spec == nullptr) throw Error(ErrorCode::InvalidConversation, "prompt does not open with a known preamble");

  const std::uint64_t run_seed = derive_seed(seed_, fnv1a(request.messages[1].content));
  const auto& texts = by_text_.at(spec->instrument);
  static const std::regex numbered(R"(^(\d+)\. (.+)$)");

  std::ostringstream reply;
  std::istringstream lines(prompt);
  std::string line;
  std::smatch m;
  int count = 0;
  while (std::getline(lines, line)) {
    if (!std::regex_match(line, m, numbered)) continue;
    auto it = texts.find(m[2].str());
    if (it == texts.end()) continue;
    if (count++ > 0) reply << '\n';
    reply << m[1].str() << ". " << answer(*it->second, run_seed);
  }
  if (count != static_cast<int>(spec->items.size())) {
    throw Error(ErrorCode::InvalidConversation, "recognized " + std::to_string(count) + " of " +
                                                    std::to_string(spec->items.size()) + " items");
  }
  return {reply.str(), 0};
}

}  // namespace hprobe
