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


#include "hprobe/cli.hpp"

#include <CLI11.hpp>

#include <cerrno>
#include <cstdio>
#include <cstring>
#include <fstream>
#include <iostream>
#include <memory>
#include <set>
#include <sstream>

#include "hprobe/chat_client.hpp"
#include "hprobe/error.hpp"
#include "hprobe/scripted_agents.hpp"

namespace hprobe::cli {
namespace {

using nlohmann::json;

std::vector<Condition> parse_conditions(std::string_view s) {
  std::string lower(s);
  for (auto& c : lower) c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
  if (lower == "both") return {Condition::QV, Condition::VQ};
  if (auto c = parse_condition(lower)) return {*c};
  throw Error(ErrorCode::InvalidConfig, "unknown condition '" + std::string(s) + "' (expected qv, vq or both)");
}

template <typename T>
T get_as(const json& j, std::string_view key) {
  try {
    return j.get<T>();
  } catch (const json::exception&) {
    throw Error(ErrorCode::InvalidConfig, "config key '" + std::string(key) + "' has the wrong type");
  }
}

void check_keys(const json& j, const std::set<std::string>& allowed, std::string_view where) {
  if (!j.is_object()) throw Error(ErrorCode::InvalidConfig, std::string(where) + " must be an object");
  for (const auto& [key, value] : j.items()) {
    if (!allowed.contains(key)) {
      throw Error(ErrorCode::InvalidConfig, "unknown key '" + key + "' in " + std::string(where));
    }
  }
}

AttentionPolicy attention_policy(const ProbeConfig& config) {
  auto p = parse_attention_profile(config.attention_profile);
  if (!p) throw Error(ErrorCode::InvalidConfig, "unknown attention profile '" + config.attention_profile + "'");
  return *p;
}

InstrumentBank load_bank(const ProbeConfig& config) {
  return load_instruments(config.bank_dir.empty() ? bundled_bank_dir() : config.bank_dir);
}

// Distinct scripted agents in one batch should not share latent profiles.
std::uint64_t agent_stream(std::string_view label) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : label) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  return h;
}

AgentConfig labelled(std::string label) {
  AgentConfig a;
  a.model_name = label;
  a.label = std::move(label);
  return a;
}

std::string cassette_name(std::string_view agent, Condition c) {
  return std::string(agent) + "_" + std::string(to_string(c)) + ".jsonl";
}

}  // namespace

// ---- config -----------------------------------------------------------------

ProbeConfig config_from_json(const json& j) {
  check_keys(j,
             {"agents", "conditions", "n_runs", "master_seed", "parallelism", "output_dir", "bank_dir", "replay",
              "record", "policy_alpha", "attention_profile", "ss_type", "pool_conditions", "clock_epoch"},
             "config");
  ProbeConfig c;
  if (j.contains("agents")) {
    const auto& agents = j["agents"];
    if (!agents.is_array()) throw Error(ErrorCode::InvalidConfig, "'agents' must be an array");
    for (const auto& a : agents) {
      if (a.is_string()) {
        c.agents.push_back(labelled(a.get<std::string>()));
        continue;
      }
      check_keys(a, {"label", "model", "base_url", "temperature", "retry_budget", "timeout_ms"}, "agent");
      AgentConfig ac;
      if (!a.contains("label")) throw Error(ErrorCode::InvalidConfig, "agent entry without a label");
      ac.label = get_as<std::string>(a["label"], "label");
      ac.model_name = a.contains("model") ? get_as<std::string>(a["model"], "model") : ac.label;
      if (a.contains("base_url")) ac.base_url = get_as<std::string>(a["base_url"], "base_url");
      if (a.contains("temperature")) ac.temperature = get_as<double>(a["temperature"], "temperature");
      if (a.contains("retry_budget")) ac.retry_budget = get_as<int>(a["retry_budget"], "retry_budget");
      if (a.contains("timeout_ms")) ac.timeout_ms = get_as<int>(a["timeout_ms"], "timeout_ms");
      c.agents.push_back(std::move(ac));
    }
  }
  if (j.contains("conditions")) {
    const auto& cj = j["conditions"];
    if (cj.is_string()) {
      c.conditions = parse_conditions(cj.get<std::string>());
    } else if (cj.is_array()) {
      c.conditions.clear();
      for (const auto& e : cj) {
        for (Condition x : parse_conditions(get_as<std::string>(e, "conditions"))) c.conditions.push_back(x);
      }
    } else {
      throw Error(ErrorCode::InvalidConfig, "'conditions' must be a string or an array");
    }
  }
  if (j.contains("n_runs")) c.n_runs = get_as<int>(j["n_runs"], "n_runs");
  if (j.contains("master_seed")) c.master_seed = get_as<std::uint64_t>(j["master_seed"], "master_seed");
  if (j.contains("parallelism")) c.parallelism = get_as<int>(j["parallelism"], "parallelism");
  if (j.contains("output_dir")) c.output_dir = get_as<std::string>(j["output_dir"], "output_dir");
  if (j.contains("bank_dir")) c.bank_dir = get_as<std::string>(j["bank_dir"], "bank_dir");
  if (j.contains("replay")) c.replay_dir = get_as<std::string>(j["replay"], "replay");
  if (j.contains("record")) c.record_dir = get_as<std::string>(j["record"], "record");
  if (j.contains("policy_alpha")) c.policy.alpha_level = get_as<double>(j["policy_alpha"], "policy_alpha");
  if (j.contains("attention_profile")) {
    c.attention_profile = get_as<std::string>(j["attention_profile"], "attention_profile");
  }
  if (j.contains("ss_type")) c.ss_type = stats::parse_ss_type(get_as<std::string>(j["ss_type"], "ss_type"));
  if (j.contains("pool_conditions")) c.pool_conditions = get_as<bool>(j["pool_conditions"], "pool_conditions");
  if (j.contains("clock_epoch")) c.clock_epoch = get_as<std::int64_t>(j["clock_epoch"], "clock_epoch");
  return c;
}

ProbeConfig load_config(const std::filesystem::path& file) {
  std::ifstream in(file);
  if (!in) throw Error(ErrorCode::MissingFile, "cannot open config " + file.string());
  try {
    return config_from_json(json::parse(in));
  } catch (const json::parse_error& e) {
    throw Error(ErrorCode::InvalidConfig, file.string() + ": " + e.what());
  }
}

void validate_config(const ProbeConfig& c) {
  auto fail = [](const std::string& msg) { throw Error(ErrorCode::InvalidConfig, msg); };
  if (c.n_runs < 1) fail("n_runs must be at least 1");
  if (c.parallelism < 1) fail("parallelism must be at least 1");
  if (c.conditions.empty()) fail("no condition selected");
  if (!(c.policy.alpha_level > 0.0 && c.policy.alpha_level < 1.0)) fail("policy alpha must lie in (0, 1)");
  if (!parse_attention_profile(c.attention_profile)) fail("unknown attention profile '" + c.attention_profile + "'");
  if (c.output_dir.empty()) fail("output directory is empty");
  std::set<std::string> labels;
  for (const auto& a : c.agents) {
    if (a.label.empty()) fail("agent label is empty");
    if (!labels.insert(a.label).second) fail("agent '" + a.label + "' listed twice");
    if (a.temperature && !(*a.temperature >= 0.0 && *a.temperature <= 2.0)) {
      fail("temperature for " + a.label + " must lie in [0, 2]");
    }
    if (a.retry_budget < 0) fail("retry budget for " + a.label + " is negative");
    if (a.timeout_ms < 1) fail("timeout for " + a.label + " must be positive");
  }
}

AgentConfig agent_config(const ProbeConfig& config, std::string_view label) {
  for (const auto& a : config.agents) {
    if (a.label == label) return a;
  }
  return labelled(std::string(label));
}

// ---- lock -------------------------------------------------------------------

OutputLock::OutputLock(const std::filesystem::path& dir) : file_(dir / ".hprobe.lock") {
  std::filesystem::create_directories(dir);
  // "x" makes fopen fail if the file exists (C11), which is the atomic test we need.
  std::FILE* f = std::fopen(file_.c_str(), "wx");
  if (f == nullptr) {
    if (errno == EEXIST) {
      throw Error(ErrorCode::OutputLocked, "another hprobe command holds " + file_.string());
    }
    throw Error(ErrorCode::MissingFile, "cannot create " + file_.string() + ": " + std::strerror(errno));
  }
  std::fclose(f);
}

OutputLock::~OutputLock() {
  std::error_code ec;
  std::filesystem::remove(file_, ec);
}

// ---- commands ---------------------------------------------------------------

RunOutcome cmd_run(const ProbeConfig& config, std::ostream& log) {
  validate_config(config);
  if (config.agents.empty()) throw Error(ErrorCode::InvalidConfig, "no agent given");
  const AttentionPolicy policy = attention_policy(config);
  const InstrumentBank bank = load_bank(config);
  OutputLock lock(config.output_dir);

  std::shared_ptr<ChatProvider> replay;
  if (config.replay_dir) replay = replay_provider(*config.replay_dir);

  RunOutcome outcome;
  std::vector<SessionTranscript> all;
  for (const auto& agent : config.agents) {
    const auto behavior = scripted_behavior_for(agent.label);
    std::shared_ptr<ChatProvider> provider = replay;
    if (!provider && behavior) {
      provider = std::make_shared<ScriptedAgent>(bank, *behavior, derive_seed(config.master_seed, agent_stream(agent.label)));
    } else if (!provider) {
      AgentEndpoint endpoint;
      endpoint.model_name = agent.model_name;
      endpoint.auth_secret_ref = api_key_variable(agent.label);
      endpoint.retry_budget = agent.retry_budget;
      endpoint.timeout = std::chrono::milliseconds(agent.timeout_ms);
      if (agent.base_url) {
        endpoint.base_url = *agent.base_url;
      } else if (const char* env = std::getenv(base_url_variable(agent.label).c_str()); env && *env) {
        endpoint.base_url = env;
      } else {
        throw Error(ErrorCode::InvalidConfig, "no base URL for agent " + agent.label + " (set " +
                                                  base_url_variable(agent.label) + " or use --replay)");
      }
      if (std::getenv(endpoint.auth_secret_ref.c_str()) == nullptr) {
        throw Error(ErrorCode::AuthMissing, "environment variable " + endpoint.auth_secret_ref + " is not set");
      }
      provider = std::make_shared<WireProvider>(std::move(endpoint));
    }

    // Replayed and scripted batches get a pinned clock so reruns are byte-identical.
    std::unique_ptr<Clock> clock;
    if (config.clock_epoch || replay || behavior) {
      clock = std::make_unique<FixedClock>(std::chrono::system_clock::time_point{} +
                                           std::chrono::seconds(config.clock_epoch.value_or(0)));
    } else {
      clock = std::make_unique<SystemClock>();
    }

    for (Condition cond : config.conditions) {
      std::shared_ptr<ChatProvider> p = provider;
      if (config.record_dir) {
        p = std::make_shared<RecordingProvider>(provider, *config.record_dir / cassette_name(agent.label, cond));
      }
      RunConfig rc;
      rc.agent_label = agent.label;
      rc.model_name = agent.model_name;
      rc.condition = cond;
      rc.n_runs = config.n_runs;
      rc.temperature = agent.temperature.value_or(default_temperature(agent.model_name));
      rc.master_seed = config.master_seed;
      rc.parallelism = config.parallelism;

      const auto file = config.transcript_dir() / transcript_file_name(agent.label, cond, clock->now());
      TranscriptWriter writer(file);
      std::mutex progress_mutex;
      int done = 0;
      auto transcripts = execute_batch(rc, bank, *p, *clock, [&](const SessionTranscript& t) {
        writer.append(t);
        std::lock_guard guard(progress_mutex);
        if (++done % 10 == 0 || done == rc.n_runs) {
          log << agent.label << ' ' << to_string(cond) << ": " << done << '/' << rc.n_runs << '\n';
        }
      });
      writer.finalize();
      outcome.transcript_files.push_back(file);
      for (auto& t : transcripts) all.push_back(std::move(t));
    }
  }

  const auto parsed = parse_transcripts(all, bank, policy);
  outcome.summary = batch_summary(parsed);
  log << render_summary_table(outcome.summary);
  for (const auto& row : outcome.summary.rows) {
    for (const auto& [reason, n] : row.by_reason) {
      log << row.agent_label << ' ' << to_string(row.condition) << " excluded " << n << " (" << to_string(reason)
          << ")\n";
    }
  }
  return outcome;
}

AnalysisReport cmd_analyze(const ProbeConfig& config, std::ostream& log,
                           const std::optional<std::filesystem::path>& transcripts) {
  validate_config(config);
  const AttentionPolicy policy = attention_policy(config);
  const InstrumentBank bank = load_bank(config);
  OutputLock lock(config.output_dir);

  const auto source = transcripts.value_or(config.transcript_dir());
  std::vector<SessionTranscript> runs;
  if (std::filesystem::exists(source)) runs = read_transcripts(source);
  if (runs.empty()) throw Error(ErrorCode::NoValidRuns, "no transcripts under " + source.string());
  const auto parsed = parse_transcripts(runs, bank, policy);

  AnalysisOptions options;
  options.policy = config.policy;
  options.attention = policy;
  options.attention_profile = config.attention_profile;
  options.ss_type = config.ss_type;
  options.pool_conditions = config.pool_conditions;
  options.baselines = bundled_baselines();
  const AnalysisReport report = analyze(parsed, bank, options);
  write_report_bundle(config.report_dir(), report, parsed, bank);

  for (const auto& a : report.agents) {
    log << a.agent << ": " << a.scores.size() << " valid runs, verdict " << to_string(a.verdict) << '\n';
  }
  log << "report bundle: " << config.report_dir().string() << '\n';
  return report;
}

std::string cmd_report(const ProbeConfig& config, std::ostream& log) {
  const auto dir = config.report_dir();
  if (!std::filesystem::exists(dir / kReportFile)) {
    throw Error(ErrorCode::MissingBundle, "no report bundle in " + dir.string() + " (run analyze first)");
  }
  OutputLock lock(config.output_dir);
  const json bundle = load_report_bundle(dir);
  const std::string markdown = render_markdown(bundle);
  {
    std::ofstream out(dir / "report.md", std::ios::binary | std::ios::trunc);
    out << markdown;
  }
  {
    std::ofstream out(dir / "regressions.csv", std::ios::binary | std::ios::trunc);
    write_regressions_csv(out, bundle);
  }
  log << "wrote " << (dir / "report.md").string() << '\n';
  return markdown;
}

InstrumentBank cmd_validate_bank(const ProbeConfig& config, std::ostream& log) {
  const InstrumentBank bank = load_bank(config);
  log << "bank " << bank.version() << " OK\n";
  for (const auto& spec : bank.specs()) {
    int scored = 0;
    for (const auto& item : spec.items) scored += item.scored() ? 1 : 0;
    log << "  " << spec.name() << ": " << spec.items.size() << " items (" << scored << " scored), scale "
        << spec.scale.min << "-" << spec.scale.max << '\n';
  }
  return bank;
}

// ---- entry point ------------------------------------------------------------

int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Administers moral foundations instruments to chat models and analyzes the answers."};
  app.name("hprobe");
  app.require_subcommand(1);
  app.fallthrough();

  std::string config_file;
  std::string out_dir;
  std::string bank_dir;
  double policy_alpha = 0.05;
  std::string attention_profile;
  std::string ss_type;
  bool per_condition = false;
  app.add_option("--config", config_file, "Config file (JSON); flags override it");
  app.add_option("--out", out_dir, "Output directory");
  app.add_option("--bank", bank_dir, "Instrument bank directory");
  auto* policy_opt = app.add_option("--policy-alpha", policy_alpha, "Significance level for the verdict");
  app.add_option("--attention-profile", attention_profile, "Attention check profile")
      ->check(CLI::IsMember({"paper", "strict"}));
  app.add_option("--ss-type", ss_type, "ANOVA sums of squares type")->check(CLI::IsMember({"I", "II", "III"}));
  app.add_flag("--per-condition", per_condition, "Run the coherence regressions per condition");

  auto* run = app.add_subcommand("run", "Administer the instruments");
  std::vector<std::string> agents;
  std::string condition;
  int n_runs = 0;
  std::uint64_t seed = 0;
  double temperature = 0.0;
  int parallelism = 0;
  std::string replay_dir;
  std::string record_dir;
  std::int64_t clock_epoch = 0;
  run->add_option("--agent", agents, "Agent label (repeatable)");
  run->add_option("--condition", condition, "qv, vq or both")
      ->check(CLI::IsMember({"qv", "vq", "both"}, CLI::ignore_case));
  auto* n_opt = run->add_option("--n", n_runs, "Runs per condition");
  auto* seed_opt = run->add_option("--seed", seed, "Master seed");
  auto* temp_opt = run->add_option("--temperature", temperature, "Sampling temperature for every agent");
  auto* par_opt = run->add_option("--parallelism", parallelism, "Concurrent sessions");
  run->add_option("--replay", replay_dir, "Answer from recorded cassettes");
  run->add_option("--record", record_dir, "Record exchanges into this directory");
  auto* epoch_opt = run->add_option("--clock-epoch", clock_epoch, "Pin transcript timestamps (unix seconds)");

  auto* analyze_cmd = app.add_subcommand("analyze", "Validate transcripts and write the report bundle");
  std::string transcripts;
  analyze_cmd->add_option("--transcripts", transcripts, "Transcript file or directory");

  auto* report_cmd = app.add_subcommand("report", "Render the report bundle as markdown");
  auto* validate_cmd = app.add_subcommand("validate-bank", "Check the instrument bank");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e, out, err);
  }

  try {
    ProbeConfig config = config_file.empty() ? ProbeConfig{} : load_config(config_file);
    if (!out_dir.empty()) config.output_dir = out_dir;
    if (!bank_dir.empty()) config.bank_dir = bank_dir;
    if (policy_opt->count() > 0) config.policy.alpha_level = policy_alpha;
    if (!attention_profile.empty()) config.attention_profile = attention_profile;
    if (!ss_type.empty()) config.ss_type = stats::parse_ss_type(ss_type);
    if (per_condition) config.pool_conditions = false;

    if (run->parsed()) {
      if (!agents.empty()) {
        std::vector<AgentConfig> selected;
        for (const auto& label : agents) selected.push_back(agent_config(config, label));
        config.agents = std::move(selected);
      }
      if (!condition.empty()) config.conditions = parse_conditions(condition);
      if (n_opt->count() > 0) config.n_runs = n_runs;
      if (seed_opt->count() > 0) config.master_seed = seed;
      if (par_opt->count() > 0) config.parallelism = parallelism;
      if (temp_opt->count() > 0) {
        for (auto& a : config.agents) a.temperature = temperature;
      }
      if (!replay_dir.empty()) config.replay_dir = replay_dir;
      if (!record_dir.empty()) config.record_dir = record_dir;
      if (epoch_opt->count() > 0) config.clock_epoch = clock_epoch;
      cmd_run(config, out);
    } else if (analyze_cmd->parsed()) {
      cmd_analyze(config, out,
                  transcripts.empty() ? std::nullopt : std::optional<std::filesystem::path>(transcripts));
    } else if (report_cmd->parsed()) {
      cmd_report(config, out);
    } else if (validate_cmd->parsed()) {
      cmd_validate_bank(config, out);
    }
  } catch (const Error& e) {
    err << "error: " << e.what() << '\n';
    return 1;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return 1;
  }
  return 0;
}

}  // namespace hprobe::cli
