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

#include <atomic>
#include <chrono>
#include <filesystem>
#include <string>
#include <vector>

#include <unistd.h>

#include "hprobe/instrument_bank.hpp"
#include "hprobe/response_parser.hpp"
#include "hprobe/scripted_agents.hpp"
#include "hprobe/session_engine.hpp"

namespace hprobe::testing {

/// Fresh directory under the system temp dir, removed on destruction.
class TempDir {
 public:
  TempDir() {
    static std::atomic<int> counter{0};
    path_ = std::filesystem::temp_directory_path() /
            ("hprobe-test-" + std::to_string(::getpid()) + "-" + std::to_string(counter++));
    std::filesystem::remove_all(path_);
    std::filesystem::create_directories(path_);
  }
  ~TempDir() {
    std::error_code ec;
    std::filesystem::remove_all(path_, ec);
  }
  TempDir(const TempDir&) = delete;
  TempDir& operator=(const TempDir&) = delete;

  const std::filesystem::path& path() const { return path_; }
  std::filesystem::path operator/(const std::string& rel) const { return path_ / rel; }

 private:
  std::filesystem::path path_;
};

inline const InstrumentBank& bundled_bank() {
  static const InstrumentBank bank = load_instruments(bundled_bank_dir());
  return bank;
}

/// n scripted sessions in one condition.
inline std::vector<SessionTranscript> scripted_batch(ScriptedBehavior behavior, Condition c, int n,
                                                     std::uint64_t seed, std::string label = "scripted",
                                                     int parallelism = 4) {
  ScriptedAgent agent(bundled_bank(), behavior, seed);
  RunConfig rc;
  rc.agent_label = std::move(label);
  rc.model_name = "scripted-model";
  rc.condition = c;
  rc.n_runs = n;
  rc.master_seed = seed;
  rc.parallelism = parallelism;
  FixedClock clock;
  return execute_batch(rc, bundled_bank(), agent, clock);
}

inline std::vector<ParsedRun> parse_all(const std::vector<SessionTranscript>& ts) {
  std::vector<ParsedRun> out;
  for (const auto& t : ts) out.push_back(validate_run(t, bundled_bank()));
  return out;
}

}  // namespace hprobe::testing
