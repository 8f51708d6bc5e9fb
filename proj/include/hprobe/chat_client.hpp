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

#include <chrono>
#include <cstdint>
#include <filesystem>
#include <functional>
#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <random>
#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

namespace hprobe {

enum class Role { System, User, Assistant };

std::string_view to_string(Role role);
std::optional<Role> parse_role(std::string_view name);

struct ChatMessage {
  Role role = Role::User;
  std::string content;

  bool operator==(const ChatMessage&) const = default;
};

struct ChatRequest {
  std::string model;
  std::vector<ChatMessage> messages;
  double temperature = 1.0;
};

struct ChatReply {
  std::string content;
  int retries = 0;  // transient failures absorbed before success
};

/// Throws InvalidConversation unless: messages non-empty, every content
/// non-empty, first message is system, then strictly alternating
/// user/assistant ending on a user turn.
void validate_conversation(const std::vector<ChatMessage>& messages);

/// Request body in the common chat-completion shape. Key order is canonical,
/// so equal requests serialise to equal bytes.
nlohmann::json chat_request_body(const ChatRequest& request);

/// Hex SHA-256 over the canonical body: model, full message list, temperature.
std::string request_hash(const ChatRequest& request);

/// Anything that can answer a chat-completion request. Implementations must be
/// safe to call from several sessions at once.
class ChatProvider {
 public:
  virtual ~ChatProvider() = default;
  virtual ChatReply complete(const ChatRequest& request) = 0;
};

struct RetryPolicy {
  int budget = 5;
  std::chrono::milliseconds base{1000};
  double factor = 2.0;
  std::chrono::milliseconds cap{60000};

  /// Upper bound of the jitter window before retry number `retry` (0-based).
  std::chrono::milliseconds ceiling(int retry) const;
  /// Full jitter: uniform in [0, ceiling(retry)] given `unit` in [0, 1).
  std::chrono::milliseconds delay(int retry, double unit) const;
};

struct AgentEndpoint {
  std::string base_url;         // e.g. https://api.example.com/v1
  std::string model_name;
  std::string auth_secret_ref;  // name of the environment variable holding the key
  double temperature = 1.0;
  int retry_budget = 5;
  std::chrono::milliseconds timeout{120000};
};

/// Upper-cased label with every non-alphanumeric byte replaced by '_'.
std::string env_key(std::string_view agent_label);
/// `<AGENT>_API_KEY`
std::string api_key_variable(std::string_view agent_label);
/// `HYPOCRISY_PROBE_BASE_URL_<AGENT>`
std::string base_url_variable(std::string_view agent_label);

using Sleeper = std::function<void(std::chrono::milliseconds)>;

/// HTTP(S) chat-completion client with exponential backoff and full jitter.
class WireProvider : public ChatProvider {
 public:
  explicit WireProvider(AgentEndpoint endpoint, Sleeper sleeper = {},
                        std::uint64_t jitter_seed = std::random_device{}());

  ChatReply complete(const ChatRequest& request) override;

  const AgentEndpoint& endpoint() const { return endpoint_; }

 private:
  double next_unit();

  AgentEndpoint endpoint_;
  RetryPolicy policy_;
  Sleeper sleeper_;
  std::mutex rng_mutex_;
  std::mt19937_64 rng_;
};

/// Single request against a wire endpoint using the endpoint's temperature.
ChatReply send_chat(const AgentEndpoint& endpoint, const std::vector<ChatMessage>& messages,
                    Sleeper sleeper = {});

/// Delegates to a callback; used for scripted agents and fault injection.
class ScriptedProvider : public ChatProvider {
 public:
  using Script = std::function<std::string(const ChatRequest&)>;
  explicit ScriptedProvider(Script script) : script_(std::move(script)) {}

  ChatReply complete(const ChatRequest& request) override { return {script_(request), 0}; }

 private:
  Script script_;
};

/// One cassette line: the request identity and the reply that was recorded.
struct CassetteEntry {
  std::string key;
  ChatRequest request;
  std::string reply;
};

nlohmann::json to_json(const CassetteEntry& entry);
CassetteEntry cassette_entry_from_json(const nlohmann::json& j);

/// Answers strictly from recorded cassettes; an unknown request throws
/// CassetteMiss so a replayed test can never reach the network.
class ReplayProvider : public ChatProvider {
 public:
  /// `store` is a cassette file or a directory of *.jsonl cassettes.
  explicit ReplayProvider(const std::filesystem::path& store);

  ChatReply complete(const ChatRequest& request) override;
  std::size_t size() const { return replies_.size(); }

 private:
  std::map<std::string, std::string> replies_;
};

std::unique_ptr<ChatProvider> replay_provider(const std::filesystem::path& store);

/// Forwards to `inner` and appends every successful exchange to a cassette.
class RecordingProvider : public ChatProvider {
 public:
  RecordingProvider(std::shared_ptr<ChatProvider> inner, std::filesystem::path cassette_file);

  ChatReply complete(const ChatRequest& request) override;

 private:
  std::shared_ptr<ChatProvider> inner_;
  std::filesystem::path file_;
  std::mutex mutex_;
};

}  // namespace hprobe
