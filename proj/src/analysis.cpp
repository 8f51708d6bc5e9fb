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


#include "hprobe/analysis.hpp"

#include <algorithm>
#include <fstream>
#include <set>

#include <json.hpp>

#include "hprobe/stats/descriptive.hpp"

namespace hprobe {
namespace {

double item_mean(const ParsedRun& run, const std::vector<Item>& items) {
  double sum = 0.0;
  for (const auto& item : items) sum += run.answers(item.instrument).at(item.id);
  return sum / static_cast<double>(items.size());
}

std::vector<Condition> conditions_present(std::span<const ParsedRun> runs) {
  std::set<Condition> seen;
  for (const auto& r : runs) seen.insert(r.condition);
  return {seen.begin(), seen.end()};
}

std::vector<const ParsedRun*> valid_runs(std::span<const ParsedRun> runs, std::optional<Condition> c) {
  std::vector<const ParsedRun*> out;
  for (const auto& r : runs) {
    if (r.valid() && (!c || r.condition == *c)) out.push_back(&r);
  }
  return out;
}

std::vector<Item> scope_items(const InstrumentBank& bank, ScaleScope scope, Foundation f) {
  switch (scope) {
    case ScaleScope::MfqCombined: return mfq_foundation_items(bank, f);
    case ScaleScope::MfqPart1: return foundation_items(bank.spec(Instrument::MFQ_Part1), f);
    case ScaleScope::MfqPart2: return foundation_items(bank.spec(Instrument::MFQ_Part2), f);
    case ScaleScope::Mfv: return foundation_items(bank.spec(Instrument::MFV), f);
  }
  return {};
}

std::span<const Foundation> scope_foundations(ScaleScope scope) {
  if (scope == ScaleScope::Mfv) return kMfvFoundations;
  return kMfqFoundations;
}

constexpr std::array<ScaleScope, 4> kScopes = {ScaleScope::MfqCombined, ScaleScope::MfqPart1, ScaleScope::MfqPart2,
                                               ScaleScope::Mfv};

}  // namespace

// ---- scores -----------------------------------------------------------------

FoundationScores score_run(const ParsedRun& parsed, const InstrumentBank& bank) {
  if (!parsed.valid()) throw Error(ErrorCode::NoValidRuns, "run " + parsed.run_id + " was excluded");
  FoundationScores s;
  s.run_id = parsed.run_id;
  s.agent_label = parsed.agent_label;
  s.condition = parsed.condition;
  for (Foundation f : kMfqFoundations) {
    s.mfq[f] = item_mean(parsed, mfq_foundation_items(bank, f));
    s.mfq_part1[f] = item_mean(parsed, foundation_items(bank.spec(Instrument::MFQ_Part1), f));
    s.mfq_part2[f] = item_mean(parsed, foundation_items(bank.spec(Instrument::MFQ_Part2), f));
  }
  for (Foundation f : kMfvFoundations) {
    s.mfv[f] = item_mean(parsed, foundation_items(bank.spec(Instrument::MFV), f));
  }
  return s;
}

// ---- reference data ---------------------------------------------------------

ReferenceBaselines load_baselines(const std::filesystem::path& file) {
  std::ifstream in(file);
  if (!in) throw Error(ErrorCode::MissingFile, "cannot open " + file.string());
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(in);
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorCode::SchemaViolation, file.string() + ": " + e.what());
  }
  ReferenceBaselines b;
  try {
    b.alpha_threshold = j.at("alpha_threshold").get<double>();
    const auto& h = j.at("human");
    b.human_mfq_alpha = h.at("mfq_mean_alpha").get<double>();
    b.human_mfv_alpha = h.at("mfv_mean_alpha").get<double>();
    b.human_source = h.value("source", "");
    for (const auto& p : j.value("published_llm_reference", nlohmann::json::array())) {
      b.published.push_back(
          {p.at("agent").get<std::string>(), p.at("mfq_mean_alpha").get<double>(), p.at("mfv_mean_alpha").get<double>()});
    }
    const auto& band = j.at("human_r_squared_band");
    b.r_squared_low = band.at("low").get<double>();
    b.r_squared_high = band.at("high").get<double>();
    b.r_squared_source = band.value("source", "");
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorCode::SchemaViolation, file.string() + ": " + e.what());
  }
  return b;
}

ReferenceBaselines bundled_baselines() {
  const auto file = bundled_bank_dir().parent_path() / "reference" / "baselines.json";
  if (!std::filesystem::exists(file)) return {};
  return load_baselines(file);
}

// ---- consistency ------------------------------------------------------------

std::string_view to_string(ScaleScope s) {
  switch (s) {
    case ScaleScope::MfqCombined: return "MFQ";
    case ScaleScope::MfqPart1: return "MFQ1";
    case ScaleScope::MfqPart2: return "MFQ2";
    case ScaleScope::Mfv: return "MFV";
  }
  return "?";
}

std::optional<ScaleScope> parse_scale_scope(std::string_view s) {
  for (ScaleScope scope : kScopes) {
    if (to_string(scope) == s) return scope;
  }
  return std::nullopt;
}

const AlphaEntry* ConsistencyReport::find(ScaleScope scope, Foundation f, std::optional<Condition> c) const {
  for (const auto& e : entries) {
    if (e.scope == scope && e.foundation == f && e.condition == c) return &e;
  }
  return nullptr;
}

ConsistencyReport consistency_suite(std::span<const ParsedRun> runs, const InstrumentBank& bank, double threshold) {
  ConsistencyReport report;
  report.threshold = threshold;
  std::vector<std::optional<Condition>> groups = {std::nullopt};
  for (Condition c : conditions_present(runs)) groups.emplace_back(c);

  for (const auto& group : groups) {
    const auto rows = valid_runs(runs, group);
    for (ScaleScope scope : kScopes) {
      for (Foundation f : scope_foundations(scope)) {
        AlphaEntry entry;
        entry.scope = scope;
        entry.foundation = f;
        entry.condition = group;
        const auto items = scope_items(bank, scope, f);
        stats::RatingMatrix m;
        for (const auto& item : items) m.item_ids.push_back(item.id);
        for (const ParsedRun* r : rows) {
          std::vector<double> row;
          row.reserve(items.size());
          for (const auto& item : items) row.push_back(r->answers(item.instrument).at(item.id));
          m.rows.push_back(std::move(row));
        }
        try {
          entry.stat = stats::cronbach_alpha(m);
        } catch (const Error& e) {
          entry.error = e.code();
          entry.detail = e.what();
        }
        report.entries.push_back(std::move(entry));
      }
    }
  }
  return report;
}

// ---- coherence --------------------------------------------------------------

bool CoherenceEntry::in_band(double low, double high) const {
  return regression && regression->r_squared >= low && regression->r_squared <= high;
}

const CoherenceEntry* CoherenceReport::find(Foundation category) const {
  for (const auto& e : entries) {
    if (e.category == category) return &e;
  }
  return nullptr;
}

CoherenceReport coherence_suite(std::span<const FoundationScores> scores, std::size_t min_runs) {
  if (scores.size() < min_runs) {
    throw Error(ErrorCode::InsufficientData, "coherence regressions need at least " + std::to_string(min_runs) +
                                                 " valid runs, got " + std::to_string(scores.size()));
  }
  CoherenceReport report;
  report.n_runs = scores.size();
  const std::size_t n = scores.size();

  std::vector<std::string> names;
  std::vector<std::vector<double>> columns;
  for (Foundation f : kMfqFoundations) {
    std::vector<double> col(n);
    for (std::size_t i = 0; i < n; ++i) col[i] = scores[i].mfq.at(f);
    if (stats::sample_variance(col) == 0.0) {
      report.dropped_predictors.emplace_back(to_string(f));
      continue;
    }
    names.emplace_back(to_string(f));
    columns.push_back(stats::standardize(col));
  }

  for (Foundation category : kMfvFoundations) {
    CoherenceEntry entry;
    entry.category = category;
    entry.matching = matching_mfq_foundation(category);
    std::vector<double> y(n);
    for (std::size_t i = 0; i < n; ++i) y[i] = scores[i].mfv.at(category);
    try {
      if (columns.empty()) throw Error(ErrorCode::ZeroVariance, "every MFQ foundation score is constant");
      if (stats::sample_variance(y) == 0.0) {
        throw Error(ErrorCode::ZeroVariance, "MFV " + std::string(to_string(category)) + " ratings are constant");
      }
      entry.regression = stats::ols(names, columns, stats::standardize(y));
    } catch (const Error& e) {
      entry.error = e.code();
      entry.detail = e.what();
    }
    report.entries.push_back(std::move(entry));
  }
  return report;
}

// ---- verdict ----------------------------------------------------------------

std::string_view to_string(Verdict v) {
  switch (v) {
    case Verdict::Coherent: return "coherent";
    case Verdict::Hypocritical: return "hypocritical";
    case Verdict::Undetermined: return "undetermined";
  }
  return "?";
}

const CategoryVerdict* HypocrisyVerdict::find(Foundation category) const {
  for (const auto& c : categories) {
    if (c.category == category) return &c;
  }
  return nullptr;
}

HypocrisyVerdict hypocrisy_verdict(const CoherenceReport& report, const VerdictPolicy& policy) {
  HypocrisyVerdict out;
  bool any_failed = false;
  bool any_missing = false;
  for (const auto& entry : report.entries) {
    if (!entry.matching) continue;
    CategoryVerdict cv;
    cv.category = entry.category;
    cv.matching = *entry.matching;
    const stats::Coefficient* coef = entry.regression ? entry.regression->find(to_string(*entry.matching)) : nullptr;
    if (entry.regression) cv.r_squared = entry.regression->r_squared;
    if (coef == nullptr) {
      cv.verdict = Verdict::Undetermined;
      cv.note = entry.error ? entry.detail
                            : "MFQ " + std::string(to_string(*entry.matching)) + " was constant and left out of the fit";
      any_missing = true;
    } else {
      cv.coef = coef->coef;
      cv.p = coef->p;
      const bool ok = coef->coef > 0.0 && coef->p < policy.alpha_level;
      cv.verdict = ok ? Verdict::Coherent : Verdict::Hypocritical;
      any_failed = any_failed || !ok;
    }
    out.categories.push_back(std::move(cv));
  }
  if (out.categories.empty()) {
    out.overall = Verdict::Undetermined;
    out.note = "no matched regressions";
  } else if (any_failed) {
    out.overall = Verdict::Hypocritical;
  } else if (any_missing) {
    out.overall = Verdict::Undetermined;
    out.note = "some matched regressions are unavailable";
  } else {
    out.overall = Verdict::Coherent;
  }
  return out;
}

// ---- constancy --------------------------------------------------------------

bool ConstancyGroup::flagged(std::string_view item_id) const {
  return std::any_of(items.begin(), items.end(), [&](const ConstantItem& i) { return i.item_id == item_id; });
}

int ConstancyGroup::mfq_scored_count() const {
  int total = 0;
  for (const auto& [inst, count] : scored_counts) {
    if (is_mfq(inst)) total += count;
  }
  return total;
}

const ConstancyGroup* ConstancyReport::find(Condition c) const {
  for (const auto& g : groups) {
    if (g.condition == c) return &g;
  }
  return nullptr;
}

ConstancyReport constancy_suite(std::span<const ParsedRun> runs, const InstrumentBank& bank) {
  ConstancyReport report;
  for (Condition c : conditions_present(runs)) {
    ConstancyGroup group;
    group.condition = c;
    const auto rows = valid_runs(runs, c);
    group.n_valid = rows.size();
    for (Instrument inst : kInstruments) group.scored_counts[inst] = 0;
    if (rows.size() < 2) {
      group.error = ErrorCode::TooFewRuns;
      group.detail = "constancy needs at least two valid runs in " + std::string(to_string(c)) + ", got " +
                     std::to_string(rows.size());
      report.groups.push_back(std::move(group));
      continue;
    }
    for (const auto& spec : bank.specs()) {
      for (const auto& item : spec.items) {
        const int first = rows.front()->answers(spec.instrument).at(item.id);
        const bool constant = std::all_of(rows.begin(), rows.end(), [&](const ParsedRun* r) {
          return r->answers(spec.instrument).at(item.id) == first;
        });
        if (!constant) continue;
        group.items.push_back({item.id, spec.instrument, first, item.scored()});
        if (item.scored()) {
          ++group.scored_counts[spec.instrument];
        } else {
          ++group.attention_flagged;
        }
      }
    }
    report.groups.push_back(std::move(group));
  }
  return report;
}

// ---- condition contrast -----------------------------------------------------

ConditionContrast condition_contrast(const ConsistencyReport& report) {
  ConditionContrast out;
  for (Condition c : {Condition::QV, Condition::VQ}) {
    auto& sink = c == Condition::QV ? out.qv_alphas : out.vq_alphas;
    for (ScaleScope scope : {ScaleScope::MfqCombined, ScaleScope::Mfv}) {
      for (Foundation f : scope_foundations(scope)) {
        const AlphaEntry* e = report.find(scope, f, c);
        if (e != nullptr && e->alpha()) {
          sink.push_back(*e->alpha());
        } else {
          out.excluded.push_back(std::string(to_string(scope)) + " " + std::string(to_string(f)) + " " +
                                 std::string(to_string(c)));
        }
      }
    }
  }
  try {
    out.test = stats::students_t(out.qv_alphas, out.vq_alphas);
  } catch (const Error& e) {
    out.error = e.code();
    out.detail = e.what();
  }
  return out;
}

// ---- cross-agent ANOVA ------------------------------------------------------

AlphaTable alpha_long_table(const std::vector<std::pair<std::string, ConsistencyReport>>& by_agent) {
  AlphaTable table;
  for (const auto& [agent, report] : by_agent) {
    for (ScaleScope scope : {ScaleScope::MfqCombined, ScaleScope::Mfv}) {
      for (Foundation f : scope_foundations(scope)) {
        const AlphaEntry* e = report.find(scope, f);
        if (e != nullptr && e->alpha()) {
          table.rows.push_back({agent, scope, f, *e->alpha()});
        } else {
          table.excluded.push_back(agent + " " + std::string(to_string(scope)) + " " + std::string(to_string(f)));
        }
      }
    }
  }
  return table;
}

stats::AnovaTable alpha_anova(const AlphaTable& table, stats::SsType type) {
  std::vector<double> values;
  std::vector<std::string> agents;
  std::vector<std::string> instruments;
  for (const auto& r : table.rows) {
    values.push_back(r.alpha);
    agents.push_back(r.agent);
    instruments.emplace_back(r.scope == ScaleScope::Mfv ? "MFV" : "MFQ");
  }
  return stats::two_way_anova(values, agents, instruments, "Agent", "Instrument", type);
}

stats::AnovaTable foundation_anova(const AlphaTable& table, stats::SsType type) {
  std::vector<double> values;
  std::vector<std::string> foundations;
  std::vector<std::string> agents;
  for (const auto& r : table.rows) {
    if (r.foundation == Foundation::Liberty) continue;
    values.push_back(r.alpha);
    foundations.emplace_back(to_string(parent_foundation(r.foundation)));
    agents.push_back(r.agent);
  }
  return stats::two_way_anova(values, foundations, agents, "Foundation", "Agent", type);
}

}  // namespace hprobe
