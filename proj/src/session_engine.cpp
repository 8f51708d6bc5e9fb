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

#include "hprobe/session_engine.hpp"

#include <algorithm>
#include <atomic>
#include <cctype>
#include <ctime>
#include <iomanip>
#include <random>
#include <set>
#include <sstream>
#include <thread>

#include "hprobe/error.hpp"

namespace hprobe {
namespace detail {
extern const char* const kSystemPromptText;
}  // namespace detail

namespace {

using json = nlohmann::json;

std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

std::uint64_t uniform_below(std::mt19937_64& rng, std::uint64_t bound) {
  const std::uint64_t threshold = (0 - bound) % bound;
  for (;;) {
    const std::uint64_t r = rng();
    if (r >= threshold) return r % bound;
  }
}

std::uint64_t instrument_stream(Instrument i) {
  switch (i) {
    case Instrument::MFQ_Part1: return 1;
    case Instrument::MFQ_Part2: return 2;
    case Instrument::MFV: return 3;
  }
  return 0;
}

std::string lower(std::string_view s) {
  std::string out(s);
  for (char& c : out) c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
  return out;
}

std::string make_run_id(const std::string& agent, Condition c, int index) {
  std::ostringstream out;
  out << agent << '-' << lower(to_string(c)) << '-' << std::setw(4) << std::setfill('0') << index;
  return out.str();
}

}  // namespace

std::string_view to_string(Condition c) { return c == Condition::QV ? "QV" : "VQ"; }

std::optional<Condition> parse_condition(std::string_view name) {
  const auto l = lower(name);
  if (l == "qv") return Condition::QV;
  if (l == "vq") return Condition::VQ;
  return std::nullopt;
}

std::array<Instrument, 3> instrument_order(Condition c) {
  if (c == Condition::QV) return {Instrument::MFQ_Part1, Instrument::MFQ_Part2, Instrument::MFV};
  return {Instrument::MFV, Instrument::MFQ_Part1, Instrument::MFQ_Part2};
}

double default_temperature(std::string_view agent_label) {
  const auto l = lower(agent_label);
  if (l.find("claude") != std::string::npos) return 0.85;
  if (l.find("gpt-4") != std::string::npos || l.find("gpt4") != std::string::npos) return 1.2;
  if (l.find("gemini") != std::string::npos || l.find("llama") != std::string::npos) return 0.95;
  return 1.0;
}

Permutation identity_permutation(const InstrumentSpec& spec) {
  Permutation p{spec.instrument, {}};
  for (const auto& item : spec.items) p.order.push_back(item.id);
  return p;
}

void check_permutation(const InstrumentSpec& spec, const Permutation& perm) {
  if (perm.instrument != spec.instrument) {
    throw Error(ErrorCode::PermutationMismatch, "permutation is for " + std::string(to_string(perm.instrument)) +
                                                    ", spec is " + std::string(spec.name()));
  }
  if (perm.order.size() != spec.items.size()) {
    throw Error(ErrorCode::PermutationMismatch, "permutation has " + std::to_string(perm.order.size()) +
                                                    " ids, spec has " + std::to_string(spec.items.size()));
  }
  std::set<std::string_view> seen;
  for (const auto& id : perm.order) {
    if (!spec.index_of(id)) throw Error(ErrorCode::PermutationMismatch, "unknown id " + id);
    if (!seen.insert(id).second) throw Error(ErrorCode::PermutationMismatch, "repeated id " + id);
  }
}

std::uint64_t derive_seed(std::uint64_t parent, std::uint64_t stream) {
  return splitmix64(parent ^ splitmix64(stream));
}

Permutation draw_permutation(const InstrumentSpec& spec, std::uint64_t seed) {
  Permutation p = identity_permutation(spec);
  std::mt19937_64 rng(seed);
  for (std::size_t i = p.order.size(); i > 1; --i) {
    const auto j = static_cast<std::size_t>(uniform_below(rng, i));
    std::swap(p.order[i - 1], p.order[j]);
  }
  return p;
}

const std::string& system_prompt() {
  static const std::string prompt(detail::kSystemPromptText);
  return prompt;
}

std::string build_instrument_prompt(const InstrumentSpec& spec, const Permutation& perm) {
  check_permutation(spec, perm);
  std::ostringstream out;
  out << spec.preamble << "\n\n";
  if (!spec.legend_heading.empty()) out << spec.legend_heading << '\n';
  for (int p = spec.scale.min; p <= spec.scale.max; ++p) {
    out << p << " - " << spec.scale.labels[static_cast<std::size_t>(p - spec.scale.min)] << '\n';
  }
  out << '\n';
  for (std::size_t pos = 0; pos < perm.order.size(); ++pos) {
    const auto& item = spec.items[*spec.index_of(perm.order[pos])];
    out << pos + 1 << ". " << item.text;
    if (pos + 1 < perm.order.size()) out << '\n';
  }
  return out.str();
}

PromptPlan plan_run(const RunConfig& config, const InstrumentBank& bank, int run_index) {
  PromptPlan plan;
  plan.run_index = run_index;
  const std::uint64_t condition_seed =
      derive_seed(config.master_seed, config.condition == Condition::QV ? 0x5156 : 0x5651);
  plan.run_seed = derive_seed(condition_seed, static_cast<std::uint64_t>(run_index));
  plan.system_prompt = system_prompt();
  for (Instrument i : instrument_order(config.condition)) {
    const auto& spec = bank.spec(i);
    PlannedTurn turn;
    turn.instrument = i;
    turn.permutation = draw_permutation(spec, derive_seed(plan.run_seed, instrument_stream(i)));
    turn.prompt = build_instrument_prompt(spec, turn.permutation);
    plan.turns.push_back(std::move(turn));
  }
  return plan;
}

const Permutation* SessionTranscript::permutation(Instrument i) const {
  for (const auto& p : permutations) {
    if (p.instrument == i) return &p;
  }
  return nullptr;
}

json to_json(const SessionTranscript& t) {
  json perms = json::array();
  for (const auto& p : t.permutations) perms.push_back({{"instrument", to_string(p.instrument)}, {"order", p.order}});
  json turns = json::array();
  for (const auto& m : t.turns) turns.push_back({{"role", to_string(m.role)}, {"content", m.content}});
  json replies = json::object();
  for (const auto& [instrument, text] : t.raw_replies) replies[std::string(to_string(instrument))] = text;
  json j = {
      {"run_id", t.run_id},
      {"run_index", t.run_index},
      {"agent", t.agent_label},
      {"model", t.model_name},
      {"condition", to_string(t.condition)},
      {"bank_version", t.bank_version},
      {"master_seed", t.master_seed},
      {"seed", t.seed},
      {"temperature", t.temperature},
      {"permutations", std::move(perms)},
      {"turns", std::move(turns)},
      {"raw_replies", std::move(replies)},
      {"started_at", t.started_at},
      {"finished_at", t.finished_at},
  };
  if (t.error) {
    j["error"] = {{"kind", t.error->kind}, {"message", t.error->message}};
  } else {
    j["error"] = nullptr;
  }
  return j;
}

SessionTranscript transcript_from_json(const json& j) {
  auto fail = [](const std::string& what) { return Error(ErrorCode::SchemaViolation, "transcript: " + what); };
  try {
    SessionTranscript t;
    t.run_id = j.at("run_id").get<std::string>();
    t.run_index = j.at("run_index").get<int>();
    t.agent_label = j.at("agent").get<std::string>();
    t.model_name = j.value("model", std::string());
    auto condition = parse_condition(j.at("condition").get<std::string>());
    if (!condition) throw fail("unknown condition");
    t.condition = *condition;
    t.bank_version = j.at("bank_version").get<std::string>();
    t.master_seed = j.value("master_seed", std::uint64_t{0});
    t.seed = j.value("seed", std::uint64_t{0});
    t.temperature = j.value("temperature", 1.0);
    for (const auto& p : j.at("permutations")) {
      auto instrument = parse_instrument(p.at("instrument").get<std::string>());
      if (!instrument) throw fail("unknown instrument in permutation");
      t.permutations.push_back({*instrument, p.at("order").get<std::vector<std::string>>()});
    }
    for (const auto& m : j.at("turns")) {
      auto role = parse_role(m.at("role").get<std::string>());
      if (!role) throw fail("unknown role");
      t.turns.push_back({*role, m.at("content").get<std::string>()});
    }
    for (const auto& [key, value] : j.at("raw_replies").items()) {
      auto instrument = parse_instrument(key);
      if (!instrument) throw fail("unknown instrument in raw_replies");
      t.raw_replies[*instrument] = value.get<std::string>();
    }
    t.started_at = j.value("started_at", std::string());
    t.finished_at = j.value("finished_at", std::string());
    if (j.contains("error") && !j["error"].is_null()) {
      t.error = TranscriptError{j["error"].at("kind").get<std::string>(), j["error"].value("message", std::string())};
    }
    return t;
  } catch (const json::exception& e) {
    throw fail(e.what());
  }
}

std::vector<SessionTranscript> read_transcripts(const std::filesystem::path& file_or_dir) {
  namespace fs = std::filesystem;
  if (!fs::exists(file_or_dir)) throw Error(ErrorCode::MissingFile, file_or_dir.string());
  std::vector<fs::path> files;
  if (fs::is_directory(file_or_dir)) {
    for (const auto& e : fs::directory_iterator(file_or_dir)) {
      if (e.is_regular_file() && e.path().extension() == ".jsonl") files.push_back(e.path());
    }
    std::sort(files.begin(), files.end());
  } else {
    files.push_back(file_or_dir);
  }
  std::vector<SessionTranscript> out;
  for (const auto& file : files) {
    std::ifstream in(file);
    if (!in) throw Error(ErrorCode::MissingFile, file.string());
    std::string line;
    int line_no = 0;
    while (std::getline(in, line)) {
      ++line_no;
      if (line.empty()) continue;
      json j = json::parse(line, nullptr, false);
      if (j.is_discarded()) {
        throw Error(ErrorCode::SchemaViolation, file.string() + ":" + std::to_string(line_no) + ": not JSON");
      }
      out.push_back(transcript_from_json(j));
    }
  }
  return out;
}

std::string format_timestamp(std::chrono::system_clock::time_point t) {
  const auto ms = std::chrono::duration_cast<std::chrono::milliseconds>(t.time_since_epoch()).count();
  std::time_t secs = static_cast<std::time_t>(ms / 1000);
  long long frac = ms % 1000;
  if (frac < 0) {
    frac += 1000;
    --secs;
  }
  std::tm tm{};
  gmtime_r(&secs, &tm);
  std::ostringstream out;
  out << std::put_time(&tm, "%Y-%m-%dT%H:%M:%S") << '.' << std::setw(3) << std::setfill('0') << frac << 'Z';
  return out.str();
}

std::string transcript_file_name(std::string_view agent_label, Condition c,
                                 std::chrono::system_clock::time_point t) {
  std::time_t secs = std::chrono::system_clock::to_time_t(t);
  std::tm tm{};
  gmtime_r(&secs, &tm);
  std::string agent;
  for (char ch : agent_label) {
    const auto u = static_cast<unsigned char>(ch);
    agent.push_back(std::isalnum(u) || ch == '-' || ch == '.' ? ch : '_');
  }
  std::ostringstream out;
  out << agent << '_' << lower(to_string(c)) << '_' << std::put_time(&tm, "%Y%m%d") << ".jsonl";
  return out.str();
}

TranscriptWriter::TranscriptWriter(std::filesystem::path file) : file_(std::move(file)) {
  if (file_.has_parent_path()) std::filesystem::create_directories(file_.parent_path());
  out_.open(file_, std::ios::binary | std::ios::trunc);
  if (!out_) throw Error(ErrorCode::MissingFile, "cannot write " + file_.string());
}

void TranscriptWriter::append(const SessionTranscript& t) {
  const std::string line = to_json(t).dump() + "\n";
  std::lock_guard lock(mutex_);
  out_.write(line.data(), static_cast<std::streamsize>(line.size()));
  out_.flush();
}

void TranscriptWriter::finalize() {
  std::lock_guard lock(mutex_);
  out_.close();
  std::vector<std::pair<int, std::string>> lines;
  {
    std::ifstream in(file_, std::ios::binary);
    std::string line;
    while (std::getline(in, line)) {
      if (line.empty()) continue;
      lines.emplace_back(json::parse(line).at("run_index").get<int>(), line);
    }
  }
  std::stable_sort(lines.begin(), lines.end(), [](const auto& a, const auto& b) { return a.first < b.first; });
  const auto tmp = std::filesystem::path(file_.string() + ".tmp");
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    for (const auto& [index, line] : lines) out << line << '\n';
  }
  std::filesystem::rename(tmp, file_);
}

namespace {

SessionTranscript run_one(const RunConfig& config, const InstrumentBank& bank, ChatProvider& provider,
                          const Clock& clock, int run_index) {
  const PromptPlan plan = plan_run(config, bank, run_index);
  SessionTranscript t;
  t.run_id = make_run_id(config.agent_label, config.condition, run_index);
  t.run_index = run_index;
  t.agent_label = config.agent_label;
  t.model_name = config.model_name;
  t.condition = config.condition;
  t.bank_version = bank.version();
  t.master_seed = config.master_seed;
  t.seed = plan.run_seed;
  t.temperature = config.temperature;
  t.started_at = format_timestamp(clock.now());
  t.turns.push_back({Role::System, plan.system_prompt});
  for (const auto& turn : plan.turns) t.permutations.push_back(turn.permutation);

  try {
    for (const auto& turn : plan.turns) {
      t.turns.push_back({Role::User, turn.prompt});
      ChatReply reply = provider.complete({config.model_name, t.turns, config.temperature});
      t.turns.push_back({Role::Assistant, reply.content});
      t.raw_replies[turn.instrument] = std::move(reply.content);
    }
  } catch (const Error& e) {
    t.error = TranscriptError{std::string(to_string(e.code())), e.what()};
  } catch (const std::exception& e) {
    t.error = TranscriptError{"ProviderError", e.what()};
  }
  t.finished_at = format_timestamp(clock.now());
  return t;
}

}  // namespace

std::vector<SessionTranscript> execute_batch(const RunConfig& config, const InstrumentBank& bank,
                                             ChatProvider& provider, const Clock& clock,
                                             const TranscriptSink& sink) {
  if (config.n_runs < 1) throw Error(ErrorCode::InvalidConfig, "n_runs must be positive");
  if (config.parallelism < 1) throw Error(ErrorCode::InvalidConfig, "parallelism must be positive");
  if (config.temperature < 0.0 || config.temperature > 2.0) {
    throw Error(ErrorCode::InvalidConfig, "temperature must lie in [0, 2]");
  }

  std::vector<SessionTranscript> out(static_cast<std::size_t>(config.n_runs));
  std::atomic<int> next{0};
  std::mutex sink_mutex;
  auto worker = [&] {
    for (int i = next.fetch_add(1); i < config.n_runs; i = next.fetch_add(1)) {
      auto t = run_one(config, bank, provider, clock, i);
      if (sink) {
        std::lock_guard lock(sink_mutex);
        sink(t);
      }
      out[static_cast<std::size_t>(i)] = std::move(t);
    }
  };
  const int workers = std::min(config.parallelism, config.n_runs);
  if (workers == 1) {
    worker();
  } else {
    std::vector<std::jthread> pool;
    for (int w = 0; w < workers; ++w) pool.emplace_back(worker);
  }
  return out;
}

}  // namespace hprobe
