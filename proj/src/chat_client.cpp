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

#include <httplib.h>

#include "hprobe/chat_client.hpp"

#include <openssl/evp.h>

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <fstream>
#include <iomanip>
#include <regex>
#include <sstream>
#include <thread>

#include "hprobe/error.hpp"

namespace hprobe {
namespace {

using json = nlohmann::json;

bool retryable_status(int status) {
  return status == 408 || status == 409 || status == 429 || status >= 500;
}

struct ParsedUrl {
  std::string scheme_host_port;
  std::string path_prefix;
};

ParsedUrl parse_base_url(const std::string& url) {
  static const std::regex kUrl(R"(^(https?://[^/]+)(/.*)?$)");
  std::smatch m;
  if (!std::regex_match(url, m, kUrl)) {
    throw Error(ErrorCode::InvalidConfig, "base url '" + url + "' is not an http(s) URL");
  }
  std::string path = m[2].matched ? m[2].str() : std::string();
  while (!path.empty() && path.back() == '/') path.pop_back();
  return {m[1].str(), path};
}

std::string sha256_hex(std::string_view data) {
  unsigned char digest[EVP_MAX_MD_SIZE];
  unsigned int length = 0;
  if (EVP_Digest(data.data(), data.size(), digest, &length, EVP_sha256(), nullptr) != 1) {
    throw std::runtime_error("EVP_Digest failed");
  }
  std::ostringstream out;
  out << std::hex << std::setfill('0');
  for (unsigned int i = 0; i < length; ++i) out << std::setw(2) << static_cast<int>(digest[i]);
  return out.str();
}

std::string extract_content(const std::string& body) {
  json parsed = json::parse(body, nullptr, false);
  if (parsed.is_discarded()) throw Error(ErrorCode::MalformedReply, "response body is not JSON");
  const auto choices = parsed.find("choices");
  if (choices == parsed.end() || !choices->is_array() || choices->empty()) {
    throw Error(ErrorCode::MalformedReply, "response has no choices");
  }
  const auto& first = (*choices)[0];
  if (!first.contains("message") || !first["message"].contains("content") ||
      !first["message"]["content"].is_string()) {
    throw Error(ErrorCode::MalformedReply, "first choice has no assistant text");
  }
  auto content = first["message"]["content"].get<std::string>();
  if (content.empty()) throw Error(ErrorCode::MalformedReply, "assistant text is empty");
  return content;
}

}  // namespace

std::string_view to_string(Role role) {
  switch (role) {
    case Role::System: return "system";
    case Role::User: return "user";
    case Role::Assistant: return "assistant";
  }
  return "?";
}

std::optional<Role> parse_role(std::string_view name) {
  if (name == "system") return Role::System;
  if (name == "user") return Role::User;
  if (name == "assistant") return Role::Assistant;
  return std::nullopt;
}

void validate_conversation(const std::vector<ChatMessage>& messages) {
  if (messages.empty()) throw Error(ErrorCode::InvalidConversation, "no messages");
  if (messages.front().role != Role::System) {
    throw Error(ErrorCode::InvalidConversation, "first message must be the system prompt");
  }
  for (std::size_t i = 0; i < messages.size(); ++i) {
    if (messages[i].content.empty()) {
      throw Error(ErrorCode::InvalidConversation, "message " + std::to_string(i) + " is empty");
    }
    if (i == 0) continue;
    const Role expected = (i % 2 == 1) ? Role::User : Role::Assistant;
    if (messages[i].role != expected) {
      throw Error(ErrorCode::InvalidConversation,
                  "message " + std::to_string(i) + " should be " + std::string(to_string(expected)));
    }
  }
  if (messages.back().role != Role::User) {
    throw Error(ErrorCode::InvalidConversation, "conversation must end on a user turn");
  }
}

json chat_request_body(const ChatRequest& request) {
  json messages = json::array();
  for (const auto& m : request.messages) {
    messages.push_back({{"role", to_string(m.role)}, {"content", m.content}});
  }
  return {{"model", request.model}, {"messages", std::move(messages)}, {"temperature", request.temperature}};
}

std::string request_hash(const ChatRequest& request) {
  return sha256_hex(chat_request_body(request).dump());
}

std::chrono::milliseconds RetryPolicy::ceiling(int retry) const {
  const double ms = static_cast<double>(base.count()) * std::pow(factor, retry);
  return std::chrono::milliseconds(
      static_cast<long long>(std::min(ms, static_cast<double>(cap.count()))));
}

std::chrono::milliseconds RetryPolicy::delay(int retry, double unit) const {
  unit = std::clamp(unit, 0.0, 1.0);
  return std::chrono::milliseconds(
      static_cast<long long>(std::floor(unit * static_cast<double>(ceiling(retry).count()))));
}

std::string env_key(std::string_view agent_label) {
  std::string out;
  out.reserve(agent_label.size());
  for (char c : agent_label) {
    const auto u = static_cast<unsigned char>(c);
    out.push_back(std::isalnum(u) ? static_cast<char>(std::toupper(u)) : '_');
  }
  return out;
}

std::string api_key_variable(std::string_view agent_label) { return env_key(agent_label) + "_API_KEY"; }

std::string base_url_variable(std::string_view agent_label) {
  return "HYPOCRISY_PROBE_BASE_URL_" + env_key(agent_label);
}

WireProvider::WireProvider(AgentEndpoint endpoint, Sleeper sleeper, std::uint64_t jitter_seed)
    : endpoint_(std::move(endpoint)), sleeper_(std::move(sleeper)), rng_(jitter_seed) {
  policy_.budget = endpoint_.retry_budget;
  if (!sleeper_) sleeper_ = [](std::chrono::milliseconds d) { std::this_thread::sleep_for(d); };
}

double WireProvider::next_unit() {
  std::lock_guard lock(rng_mutex_);
  return static_cast<double>(rng_() >> 11) * 0x1.0p-53;
}

ChatReply WireProvider::complete(const ChatRequest& request) {
  validate_conversation(request.messages);
  const char* secret = endpoint_.auth_secret_ref.empty() ? nullptr
                                                         : std::getenv(endpoint_.auth_secret_ref.c_str());
  if (secret == nullptr || *secret == '\0') {
    throw Error(ErrorCode::AuthMissing, "environment variable '" + endpoint_.auth_secret_ref + "' is not set");
  }
  const ParsedUrl url = parse_base_url(endpoint_.base_url);
  const std::string body = chat_request_body(request).dump();
  const httplib::Headers headers = {{"Authorization", std::string("Bearer ") + secret}};
  const auto timeout_s = endpoint_.timeout.count() / 1000;
  const auto timeout_us = (endpoint_.timeout.count() % 1000) * 1000;

  std::string last_failure;
  for (int attempt = 0; attempt <= policy_.budget; ++attempt) {
    if (attempt > 0) sleeper_(policy_.delay(attempt - 1, next_unit()));

    httplib::Client client(url.scheme_host_port);
    client.set_connection_timeout(timeout_s, timeout_us);
    client.set_read_timeout(timeout_s, timeout_us);
    client.set_write_timeout(timeout_s, timeout_us);
    auto res = client.Post(url.path_prefix + "/chat/completions", headers, body, "application/json");
    if (!res) {
      last_failure = "transport error: " + httplib::to_string(res.error());
      continue;
    }
    if (res->status == 200) {
      return {extract_content(res->body), attempt};
    }
    last_failure = "HTTP " + std::to_string(res->status);
    if (!retryable_status(res->status)) {
      throw Error(ErrorCode::TransportExhausted, last_failure + " is not retryable");
    }
  }
  throw Error(ErrorCode::TransportExhausted, last_failure + " after " +
                                                 std::to_string(policy_.budget) + " retries");
}

ChatReply send_chat(const AgentEndpoint& endpoint, const std::vector<ChatMessage>& messages,
                    Sleeper sleeper) {
  WireProvider provider(endpoint, std::move(sleeper));
  return provider.complete({endpoint.model_name, messages, endpoint.temperature});
}

json to_json(const CassetteEntry& entry) {
  json j = chat_request_body(entry.request);
  j["key"] = entry.key;
  j["reply"] = entry.reply;
  return j;
}

CassetteEntry cassette_entry_from_json(const json& j) {
  CassetteEntry entry;
  entry.request.model = j.at("model").get<std::string>();
  entry.request.temperature = j.at("temperature").get<double>();
  for (const auto& m : j.at("messages")) {
    auto role = parse_role(m.at("role").get<std::string>());
    if (!role) throw Error(ErrorCode::SchemaViolation, "cassette message has unknown role");
    entry.request.messages.push_back({*role, m.at("content").get<std::string>()});
  }
  entry.key = j.at("key").get<std::string>();
  entry.reply = j.at("reply").get<std::string>();
  return entry;
}

ReplayProvider::ReplayProvider(const std::filesystem::path& store) {
  namespace fs = std::filesystem;
  if (!fs::exists(store)) throw Error(ErrorCode::MissingFile, "cassette store " + store.string());
  std::vector<fs::path> files;
  if (fs::is_directory(store)) {
    for (const auto& e : fs::directory_iterator(store)) {
      if (e.is_regular_file() && e.path().extension() == ".jsonl") files.push_back(e.path());
    }
    std::sort(files.begin(), files.end());
  } else {
    files.push_back(store);
  }
  for (const auto& file : files) {
    std::ifstream in(file);
    std::string line;
    while (std::getline(in, line)) {
      if (line.empty()) continue;
      json j = json::parse(line, nullptr, false);
      if (j.is_discarded()) throw Error(ErrorCode::SchemaViolation, "bad cassette line in " + file.string());
      auto entry = cassette_entry_from_json(j);
      replies_.emplace(entry.key, std::move(entry.reply));
    }
  }
}

ChatReply ReplayProvider::complete(const ChatRequest& request) {
  const auto key = request_hash(request);
  auto it = replies_.find(key);
  if (it == replies_.end()) throw Error(ErrorCode::CassetteMiss, "no recorded reply for request " + key);
  return {it->second, 0};
}

std::unique_ptr<ChatProvider> replay_provider(const std::filesystem::path& store) {
  return std::make_unique<ReplayProvider>(store);
}

RecordingProvider::RecordingProvider(std::shared_ptr<ChatProvider> inner, std::filesystem::path cassette_file)
    : inner_(std::move(inner)), file_(std::move(cassette_file)) {
  if (file_.has_parent_path()) std::filesystem::create_directories(file_.parent_path());
}

ChatReply RecordingProvider::complete(const ChatRequest& request) {
  ChatReply reply = inner_->complete(request);
  const std::string line = to_json(CassetteEntry{request_hash(request), request, reply.content}).dump() + "\n";
  std::lock_guard lock(mutex_);
  std::ofstream out(file_, std::ios::binary | std::ios::app);
  out.write(line.data(), static_cast<std::streamsize>(line.size()));
  out.flush();
  if (!out) throw Error(ErrorCode::MissingFile, "cannot append to cassette " + file_.string());
  return reply;
}

}  // namespace hprobe
