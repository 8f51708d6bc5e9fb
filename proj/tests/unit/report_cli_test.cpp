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


#include <gtest/gtest.h>

#include <fstream>
#include <sstream>

#include <json.hpp>

#include "fixtures.hpp"
#include "hprobe/cli.hpp"
#include "hprobe/error.hpp"
#include "hprobe/report.hpp"

using namespace hprobe;
using hprobe::testing::bundled_bank;
using hprobe::testing::TempDir;

namespace {

struct CliResult {
  int code;
  std::string out;
  std::string err;
};

CliResult invoke(std::vector<std::string> args) {
  args.insert(args.begin(), "hprobe");
  std::vector<const char*> argv;
  for (const auto& a : args) argv.push_back(a.c_str());
  std::ostringstream out, err;
  const int code = cli::run_cli(static_cast<int>(argv.size()), argv.data(), out, err);
  return {code, out.str(), err.str()};
}

std::string slurp(const std::filesystem::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

ErrorCode code_of(const std::function<void()>& f) {
  try {
    f();
  } catch (const Error& e) {
    return e.code();
  }
  ADD_FAILURE() << "expected an hprobe::Error";
  return ErrorCode::DomainError;
}

}  // namespace

TEST(Cli, StubRunAnalyzeReport) {
  TempDir dir;
  const auto out = dir.path().string();
  auto r = invoke({"--out", out, "run", "--agent", "stub", "--n", "5", "--condition", "qv", "--seed", "1"});
  ASSERT_EQ(r.code, 0) << r.err;
  ASSERT_TRUE(std::filesystem::exists(dir / "transcripts/stub_qv_19700101.jsonl"));
  EXPECT_EQ(read_transcripts(dir / "transcripts").size(), 5u);

  r = invoke({"--out", out, "analyze"});
  ASSERT_EQ(r.code, 0) << r.err;
  for (const char* f : {"report.json", "parsed.csv", "scores.csv", "alphas.csv"}) {
    EXPECT_TRUE(std::filesystem::exists(dir / "report" / f)) << f;
  }
  const auto j = load_report_bundle(dir / "report");
  EXPECT_EQ(j["bank_version"], bundled_bank().version());

  r = invoke({"--out", out, "report"});
  ASSERT_EQ(r.code, 0) << r.err;
  const auto md = slurp(dir / "report/report.md");
  EXPECT_NE(md.find("Intercept omitted. Standard errors in parentheses. * p<0.1, ** p<0.05, ***p<0.01"),
            std::string::npos);
  EXPECT_TRUE(std::filesystem::exists(dir / "report/regressions.csv"));
}

TEST(Cli, MatchedPredictorsCarryStars) {
  TempDir dir;
  const auto out = dir.path().string();
  ASSERT_EQ(invoke({"--out", out, "run", "--agent", "stub", "--n", "60", "--seed", "2", "--parallelism", "4"}).code, 0);
  ASSERT_EQ(invoke({"--out", out, "analyze"}).code, 0);
  ASSERT_EQ(invoke({"--out", out, "report"}).code, 0);
  const auto md = slurp(dir / "report/report.md");
  for (const char* row : {"| MFQ Authority |", "| MFQ Care |", "| MFQ Purity |"}) {
    const auto at = md.find(row);
    ASSERT_NE(at, std::string::npos) << row;
    EXPECT_NE(md.substr(at, md.find('\n', at) - at).find("***"), std::string::npos) << row;
  }
  const auto j = load_report_bundle(dir / "report");
  EXPECT_EQ(j["agents"][0]["verdict"], "coherent");
}

TEST(Cli, UnknownConditionFails) {
  TempDir dir;
  const auto r = invoke({"--out", dir.path().string(), "run", "--agent", "stub", "--condition", "xyz"});
  EXPECT_NE(r.code, 0);
  EXPECT_FALSE(std::filesystem::exists(dir / "transcripts"));
}

TEST(Cli, RerunIsByteIdentical) {
  std::string first;
  for (int rep = 0; rep < 2; ++rep) {
    TempDir dir;
    const auto out = dir.path().string();
    ASSERT_EQ(invoke({"--out", out, "run", "--agent", "stub", "--agent", "scripted-random", "--n", "8", "--seed", "5"}).code,
              0);
    ASSERT_EQ(invoke({"--out", out, "analyze"}).code, 0);
    ASSERT_EQ(invoke({"--out", out, "report"}).code, 0);
    std::string all;
    for (const char* f : {"transcripts/stub_qv_19700101.jsonl", "transcripts/scripted-random_vq_19700101.jsonl",
                          "report/report.json", "report/report.md", "report/alphas.csv"}) {
      all += slurp(dir / f);
    }
    if (rep == 0) first = all;
    else EXPECT_EQ(all, first);
  }
}

TEST(Cli, EmptyTranscriptDirIsNoValidRuns) {
  TempDir dir;
  std::filesystem::create_directories(dir / "transcripts");
  cli::ProbeConfig config;
  config.output_dir = dir.path();
  std::ostringstream log;
  EXPECT_EQ(code_of([&] { cli::cmd_analyze(config, log); }), ErrorCode::NoValidRuns);
  EXPECT_NE(invoke({"--out", dir.path().string(), "analyze"}).code, 0);
}

TEST(Cli, BankVersionMismatch) {
  auto ts = hprobe::testing::scripted_batch(ScriptedBehavior::Coherent, Condition::QV, 2, 1);
  ts[1].bank_version = "0.0.0-other";
  EXPECT_EQ(code_of([&] { parse_transcripts(ts, bundled_bank(), {}); }), ErrorCode::BankVersionMismatch);
}

TEST(Cli, ReportWithoutBundle) {
  TempDir dir;
  cli::ProbeConfig config;
  config.output_dir = dir.path();
  std::ostringstream log;
  EXPECT_EQ(code_of([&] { cli::cmd_report(config, log); }), ErrorCode::MissingBundle);
  EXPECT_NE(invoke({"--out", dir.path().string(), "report"}).code, 0);
}

TEST(Cli, TwoValidRunsAnnotateTooFewRuns) {
  TempDir dir;
  const auto out = dir.path().string();
  ASSERT_EQ(invoke({"--out", out, "run", "--agent", "stub", "--n", "1", "--condition", "both"}).code, 0);
  ASSERT_EQ(invoke({"--out", out, "analyze"}).code, 0);
  ASSERT_EQ(invoke({"--out", out, "report"}).code, 0);
  EXPECT_NE(slurp(dir / "report/alphas.csv").find("TooFewRuns"), std::string::npos);
  EXPECT_NE(slurp(dir / "report/report.md").find("TooFewRuns"), std::string::npos);
}

TEST(Cli, OutputLockIsExclusive) {
  TempDir dir;
  {
    cli::OutputLock lock(dir.path());
    EXPECT_EQ(code_of([&] { cli::OutputLock second(dir.path()); }), ErrorCode::OutputLocked);
    EXPECT_NE(invoke({"--out", dir.path().string(), "run", "--agent", "stub", "--n", "1"}).code, 0);
  }
  EXPECT_NO_THROW(cli::OutputLock again(dir.path()));
}

TEST(Cli, ValidateBank) {
  const auto r = invoke({"validate-bank"});
  EXPECT_EQ(r.code, 0) << r.err;
  EXPECT_NE(r.out.find("68"), std::string::npos);
}

TEST(Config, ParsesAndRejects) {
  const auto c = cli::config_from_json(nlohmann::json::parse(R"({
    "agents": [{"label": "gpt-4", "temperature": 0.5}, "stub"],
    "conditions": "both", "n_runs": 7, "master_seed": 3, "ss_type": "III", "policy_alpha": 0.01
  })"));
  ASSERT_EQ(c.agents.size(), 2u);
  EXPECT_EQ(c.agents[0].temperature, 0.5);
  EXPECT_EQ(c.agents[1].label, "stub");
  EXPECT_EQ(c.conditions.size(), 2u);
  EXPECT_EQ(c.n_runs, 7);
  EXPECT_EQ(c.ss_type, stats::SsType::III);
  EXPECT_DOUBLE_EQ(c.policy.alpha_level, 0.01);
  EXPECT_EQ(code_of([] { cli::config_from_json(nlohmann::json::parse(R"({"n_run": 3})")); }), ErrorCode::InvalidConfig);

  auto bad = c;
  bad.n_runs = 0;
  EXPECT_EQ(code_of([&] { cli::validate_config(bad); }), ErrorCode::InvalidConfig);
  bad = c;
  bad.policy.alpha_level = 1.5;
  EXPECT_EQ(code_of([&] { cli::validate_config(bad); }), ErrorCode::InvalidConfig);
}

TEST(Report, NonFiniteValuesSerializeAsStrings) {
  auto runs = hprobe::testing::parse_all(hprobe::testing::scripted_batch(ScriptedBehavior::Constant, Condition::QV, 40, 3, "flat"));
  const auto report = analyze(runs, bundled_bank(), {});
  const auto j = to_json(report);
  EXPECT_EQ(nlohmann::json::parse(j.dump()), j);
  EXPECT_EQ(j["agents"][0]["verdict"], "undetermined");
  EXPECT_NE(render_markdown(j).find("Constant answers"), std::string::npos);
}
