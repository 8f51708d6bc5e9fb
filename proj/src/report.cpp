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


#include "hprobe/report.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <map>
#include <set>
#include <sstream>

namespace hprobe {
namespace {

using nlohmann::json;

// Non-finite doubles survive as strings; JSON has no literal for them.
json num(double v) {
  if (std::isfinite(v)) return v;
  if (std::isnan(v)) return "nan";
  return v > 0 ? "inf" : "-inf";
}

json opt_num(const std::optional<double>& v) { return v ? num(*v) : json(nullptr); }

json opt_code(const std::optional<ErrorCode>& c) { return c ? json(std::string(to_string(*c))) : json(nullptr); }

json opt_cond(const std::optional<Condition>& c) { return c ? json(std::string(to_string(*c))) : json(nullptr); }

json coefficient_json(const stats::Coefficient& c) {
  return {{"name", c.name}, {"coef", num(c.coef)}, {"std_err", num(c.std_err)},
          {"t", num(c.t)},  {"p", num(c.p)},       {"stars", c.stars}};
}

json anova_json(const AnovaOutcome& a) {
  json j = {{"error", opt_code(a.error)}, {"detail", a.detail}, {"table", nullptr}};
  if (a.table) {
    json terms = json::array();
    for (const auto& t : a.table->terms) {
      terms.push_back({{"name", t.name},
                       {"df", num(t.df)},
                       {"sum_sq", num(t.sum_sq)},
                       {"mean_sq", num(t.mean_sq)},
                       {"f", num(t.f)},
                       {"p", num(t.p)}});
    }
    j["table"] = {{"ss_type", std::string(to_string(a.table->ss_type))},
                  {"terms", terms},
                  {"residual", {{"df", num(a.table->residual.df)}, {"sum_sq", num(a.table->residual.sum_sq)}}}};
  }
  return j;
}

json verdict_json(const HypocrisyVerdict& v) {
  json cats = json::array();
  for (const auto& c : v.categories) {
    cats.push_back({{"category", std::string(to_string(c.category))},
                    {"matching", std::string(to_string(c.matching))},
                    {"verdict", std::string(to_string(c.verdict))},
                    {"coef", opt_num(c.coef)},
                    {"p", opt_num(c.p)},
                    {"r_squared", opt_num(c.r_squared)},
                    {"note", c.note}});
  }
  return {{"overall", std::string(to_string(v.overall))}, {"note", v.note}, {"categories", cats}};
}

json coherence_json(const CoherenceBlock& b, const ReferenceBaselines& ref) {
  json j = {{"condition", opt_cond(b.condition)},
            {"error", opt_code(b.error)},
            {"detail", b.detail},
            {"verdict", verdict_json(b.verdict)}};
  if (!b.report) {
    j["n_runs"] = nullptr;
    j["dropped_predictors"] = json::array();
    j["entries"] = json::array();
    return j;
  }
  j["n_runs"] = b.report->n_runs;
  j["dropped_predictors"] = b.report->dropped_predictors;
  json entries = json::array();
  for (const auto& e : b.report->entries) {
    json ej = {{"category", std::string(to_string(e.category))},
               {"matching", e.matching ? json(std::string(to_string(*e.matching))) : json(nullptr)},
               {"error", opt_code(e.error)},
               {"detail", e.detail}};
    if (e.regression) {
      const auto& r = *e.regression;
      json preds = json::array();
      for (const auto& c : r.predictors) preds.push_back(coefficient_json(c));
      ej["n"] = r.n;
      ej["df_residual"] = num(r.df_residual);
      ej["r_squared"] = num(r.r_squared);
      ej["adj_r_squared"] = num(r.adj_r_squared);
      ej["in_human_band"] = e.in_band(ref.r_squared_low, ref.r_squared_high);
      ej["intercept"] = coefficient_json(r.intercept);
      ej["predictors"] = preds;
    } else {
      ej["predictors"] = json::array();
    }
    entries.push_back(std::move(ej));
  }
  j["entries"] = entries;
  return j;
}

json agent_json(const AgentAnalysis& a, const ReferenceBaselines& ref) {
  json alphas = json::array();
  for (const auto& e : a.consistency.entries) {
    json ej = {{"scope", std::string(to_string(e.scope))},
               {"foundation", std::string(to_string(e.foundation))},
               {"condition", opt_cond(e.condition)},
               {"alpha", opt_num(e.alpha())},
               {"passes", e.passes(a.consistency.threshold)},
               {"error", opt_code(e.error)},
               {"detail", e.detail}};
    if (e.stat) {
      ej["k"] = e.stat->k;
      ej["n"] = e.stat->n;
      ej["zero_variance_items"] = e.stat->zero_variance_items;
    } else {
      ej["k"] = nullptr;
      ej["n"] = nullptr;
      ej["zero_variance_items"] = json::array();
    }
    alphas.push_back(std::move(ej));
  }

  json coherence = json::array();
  for (const auto& b : a.coherence) coherence.push_back(coherence_json(b, ref));

  json constancy = json::array();
  for (const auto& g : a.constancy.groups) {
    json counts = json::object();
    for (const auto& [inst, n] : g.scored_counts) counts[std::string(to_string(inst))] = n;
    json items = json::array();
    for (const auto& i : g.items) {
      items.push_back({{"id", i.item_id},
                       {"instrument", std::string(to_string(i.instrument))},
                       {"answer", i.answer},
                       {"scored", i.scored}});
    }
    constancy.push_back({{"condition", std::string(to_string(g.condition))},
                         {"n_valid", g.n_valid},
                         {"error", opt_code(g.error)},
                         {"detail", g.detail},
                         {"scored_counts", counts},
                         {"mfq_scored_flagged", g.mfq_scored_count()},
                         {"attention_flagged", g.attention_flagged},
                         {"items", items}});
  }

  const auto& c = a.contrast;
  json contrast = {{"qv_alphas", json::array()}, {"vq_alphas", json::array()}, {"excluded", c.excluded},
                   {"error", opt_code(c.error)},  {"detail", c.detail}};
  for (double v : c.qv_alphas) contrast["qv_alphas"].push_back(num(v));
  for (double v : c.vq_alphas) contrast["vq_alphas"].push_back(num(v));
  if (c.test) {
    contrast["t"] = num(c.test->t);
    contrast["df"] = num(c.test->df);
    contrast["p"] = num(c.test->p);
    contrast["cohens_d"] = num(c.test->cohens_d);
  } else {
    contrast["t"] = contrast["df"] = contrast["p"] = contrast["cohens_d"] = nullptr;
  }

  return {{"agent", a.agent},
          {"n_valid", a.scores.size()},
          {"verdict", std::string(to_string(a.verdict))},
          {"alphas", alphas},
          {"coherence", coherence},
          {"constancy", constancy},
          {"contrast", contrast}};
}

Verdict merge_verdicts(const std::vector<CoherenceBlock>& blocks) {
  if (blocks.empty()) return Verdict::Undetermined;
  bool all_coherent = true;
  for (const auto& b : blocks) {
    if (b.verdict.overall == Verdict::Hypocritical) return Verdict::Hypocritical;
    all_coherent = all_coherent && b.verdict.overall == Verdict::Coherent;
  }
  return all_coherent ? Verdict::Coherent : Verdict::Undetermined;
}

CoherenceBlock coherence_block(std::span<const FoundationScores> scores, std::optional<Condition> condition,
                               const AnalysisOptions& options) {
  CoherenceBlock block;
  block.condition = condition;
  try {
    block.report = coherence_suite(scores, options.min_regression_runs);
    block.report->condition = condition;
    block.report->band_low = options.baselines.r_squared_low;
    block.report->band_high = options.baselines.r_squared_high;
    block.verdict = hypocrisy_verdict(*block.report, options.policy);
  } catch (const Error& e) {
    block.error = e.code();
    block.detail = e.what();
    block.verdict.note = e.what();
  }
  return block;
}

AnovaOutcome run_anova(const AlphaTable& table, stats::SsType type, bool by_foundation) {
  AnovaOutcome out;
  try {
    out.table = by_foundation ? foundation_anova(table, type) : alpha_anova(table, type);
  } catch (const Error& e) {
    out.error = e.code();
    out.detail = e.what();
  }
  return out;
}

void write_file_atomic(const std::filesystem::path& path, const std::string& content) {
  auto tmp = path;
  tmp += ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw Error(ErrorCode::MissingFile, "cannot write " + tmp.string());
    out << content;
    if (!out) throw Error(ErrorCode::MissingFile, "write failed for " + tmp.string());
  }
  std::filesystem::rename(tmp, path);
}

std::string csv_num(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

}  // namespace

const AgentAnalysis* AnalysisReport::find(std::string_view agent) const {
  for (const auto& a : agents) {
    if (a.agent == agent) return &a;
  }
  return nullptr;
}

std::vector<ParsedRun> parse_transcripts(std::span<const SessionTranscript> transcripts, const InstrumentBank& bank,
                                         const AttentionPolicy& policy) {
  std::vector<ParsedRun> out;
  out.reserve(transcripts.size());
  for (const auto& t : transcripts) {
    if (t.bank_version != bank.version()) {
      throw Error(ErrorCode::BankVersionMismatch, "transcript " + t.run_id + " was produced under bank '" +
                                                      t.bank_version + "', loaded bank is '" + bank.version() + "'");
    }
    out.push_back(validate_run(t, bank, policy));
  }
  return out;
}

AnalysisReport analyze(std::span<const ParsedRun> parsed, const InstrumentBank& bank, const AnalysisOptions& options) {
  if (std::none_of(parsed.begin(), parsed.end(), [](const ParsedRun& r) { return r.valid(); })) {
    throw Error(ErrorCode::NoValidRuns, std::to_string(parsed.size()) + " runs, none valid");
  }
  AnalysisReport report;
  report.bank_version = bank.version();
  report.options = options;
  report.summary = batch_summary(parsed);

  std::map<std::string, std::vector<ParsedRun>> by_agent;
  for (const auto& r : parsed) by_agent[r.agent_label].push_back(r);

  std::vector<std::pair<std::string, ConsistencyReport>> consistency_by_agent;
  for (auto& [agent, runs] : by_agent) {
    // Stable order independent of input order.
    std::sort(runs.begin(), runs.end(), [](const ParsedRun& a, const ParsedRun& b) { return a.run_id < b.run_id; });
    AgentAnalysis a;
    a.agent = agent;
    for (const auto& r : runs) {
      if (r.valid()) a.scores.push_back(score_run(r, bank));
    }
    a.consistency = consistency_suite(runs, bank, options.baselines.alpha_threshold);
    if (options.pool_conditions) {
      a.coherence.push_back(coherence_block(a.scores, std::nullopt, options));
    } else {
      for (Condition c : {Condition::QV, Condition::VQ}) {
        std::vector<FoundationScores> subset;
        for (const auto& s : a.scores) {
          if (s.condition == c) subset.push_back(s);
        }
        if (!subset.empty()) a.coherence.push_back(coherence_block(subset, c, options));
      }
    }
    a.verdict = merge_verdicts(a.coherence);
    a.constancy = constancy_suite(runs, bank);
    a.contrast = condition_contrast(a.consistency);
    consistency_by_agent.emplace_back(agent, a.consistency);
    report.agents.push_back(std::move(a));
  }

  report.alpha_table = alpha_long_table(consistency_by_agent);
  report.alpha_anova = run_anova(report.alpha_table, options.ss_type, false);
  report.foundation_anova = run_anova(report.alpha_table, options.ss_type, true);
  return report;
}

json to_json(const AnalysisReport& report) {
  const auto& o = report.options;
  const auto& ref = o.baselines;
  json published = json::array();
  for (const auto& p : ref.published) {
    published.push_back({{"agent", p.agent}, {"mfq_mean_alpha", p.mfq_mean_alpha}, {"mfv_mean_alpha", p.mfv_mean_alpha}});
  }
  json summary = json::array();
  for (const auto& row : report.summary.rows) {
    json reasons = json::object();
    for (const auto& [reason, n] : row.by_reason) reasons[std::string(to_string(reason))] = n;
    summary.push_back({{"agent", row.agent_label},
                       {"condition", std::string(to_string(row.condition))},
                       {"total", row.total},
                       {"valid", row.valid},
                       {"excluded", row.excluded},
                       {"by_reason", reasons}});
  }
  json agents = json::array();
  for (const auto& a : report.agents) agents.push_back(agent_json(a, ref));

  return {{"format", "hprobe-report/1"},
          {"bank_version", report.bank_version},
          {"options",
           {{"policy_alpha", o.policy.alpha_level},
            {"attention_profile", o.attention_profile},
            {"math_max", o.attention.math_max},
            {"good_min", o.attention.good_min},
            {"ss_type", std::string(to_string(o.ss_type))},
            {"pool_conditions", o.pool_conditions},
            {"min_regression_runs", o.min_regression_runs}}},
          {"baselines",
           {{"alpha_threshold", ref.alpha_threshold},
            {"human_mfq_alpha", ref.human_mfq_alpha},
            {"human_mfv_alpha", ref.human_mfv_alpha},
            {"human_source", ref.human_source},
            {"published", published},
            {"r_squared_low", ref.r_squared_low},
            {"r_squared_high", ref.r_squared_high},
            {"r_squared_source", ref.r_squared_source}}},
          {"summary", summary},
          {"agents", agents},
          {"alpha_exclusions", report.alpha_table.excluded},
          {"alpha_anova", anova_json(report.alpha_anova)},
          {"foundation_anova", anova_json(report.foundation_anova)}};
}

// ---- markdown ---------------------------------------------------------------

namespace {

std::string fixed(const json& v, int decimals = 4) {
  if (v.is_null()) return "n/a";
  if (v.is_string()) return v.get<std::string>();
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.*f", decimals, v.get<double>());
  return buf;
}

std::string pval(const json& v) {
  if (v.is_number() && v.get<double>() < 0.0001) return "<0.0001";
  return fixed(v);
}

std::string str_or(const json& v, const std::string& fallback) {
  return v.is_string() ? v.get<std::string>() : fallback;
}

constexpr std::array<std::pair<const char*, const char*>, 7> kTable2Columns = {{
    {"Authority", "Authority"},
    {"CareEmotional", "Care (e)"},
    {"CarePhysical", "Care (p)"},
    {"Fairness", "Fairness"},
    {"Liberty", "Liberty"},
    {"Loyalty", "Loyalty"},
    {"Purity", "Purity"},
}};

constexpr const char* kStarCaption = "Intercept omitted. Standard errors in parentheses. * p<0.1, ** p<0.05, ***p<0.01";

const json* find_by(const json& arr, const char* key, const std::string& value) {
  for (const auto& e : arr) {
    if (e.contains(key) && e[key].is_string() && e[key].get<std::string>() == value) return &e;
  }
  return nullptr;
}

std::string alpha_cell(const json* e) {
  if (e == nullptr) return "";
  if (!(*e)["error"].is_null()) return (*e)["error"].get<std::string>();
  if ((*e)["alpha"].is_null()) return "undefined";
  return fixed((*e)["alpha"], 3);
}

const json* alpha_entry(const json& alphas, const std::string& scope, const std::string& foundation,
                        const json& condition) {
  for (const auto& e : alphas) {
    if (e["scope"] == scope && e["foundation"] == foundation && e["condition"] == condition) return &e;
  }
  return nullptr;
}

void render_regression_table(std::ostringstream& out, const json& block) {
  const auto& entries = block["entries"];
  out << "| |";
  for (const auto& [key, label] : kTable2Columns) out << ' ' << label << " |";
  out << "\n|---|";
  for (std::size_t i = 0; i < kTable2Columns.size(); ++i) out << "---:|";
  out << '\n';
  for (Foundation f : kMfqFoundations) {
    const std::string name(to_string(f));
    std::ostringstream coef_row;
    std::ostringstream se_row;
    coef_row << "| MFQ " << name << " |";
    se_row << "| |";
    for (const auto& [key, label] : kTable2Columns) {
      const json* e = find_by(entries, "category", key);
      const json* c = e ? find_by((*e)["predictors"], "name", name) : nullptr;
      if (c == nullptr) {
        coef_row << " n/a |";
        se_row << " |";
      } else {
        coef_row << ' ' << fixed((*c)["coef"]) << (*c)["stars"].get<std::string>() << " |";
        se_row << " (" << fixed((*c)["std_err"]) << ") |";
      }
    }
    out << coef_row.str() << '\n' << se_row.str() << '\n';
  }
  for (const auto& [field, label] : {std::pair{"r_squared", "R-squared"}, std::pair{"adj_r_squared", "R-squared Adj."}}) {
    out << "| " << label << " |";
    for (const auto& [key, col] : kTable2Columns) {
      const json* e = find_by(entries, "category", key);
      out << ' ' << (e && e->contains(field) ? fixed((*e)[field]) : std::string("n/a")) << " |";
    }
    out << '\n';
  }
  out << '\n' << kStarCaption << "\n\n";
}

void render_anova(std::ostringstream& out, const std::string& title, const json& a) {
  out << "### " << title << "\n\n";
  if (a["table"].is_null()) {
    out << "Not computed: " << str_or(a["detail"], "unavailable") << "\n\n";
    return;
  }
  const auto& t = a["table"];
  out << "Type " << t["ss_type"].get<std::string>() << " sums of squares.\n\n";
  out << "| Term | df | Sum Sq | Mean Sq | F | p |\n|---|---:|---:|---:|---:|---:|\n";
  for (const auto& term : t["terms"]) {
    out << "| " << term["name"].get<std::string>() << " | " << fixed(term["df"], 0) << " | " << fixed(term["sum_sq"])
        << " | " << fixed(term["mean_sq"]) << " | " << fixed(term["f"], 2) << " | " << pval(term["p"]) << " |\n";
  }
  out << "| Residual | " << fixed(t["residual"]["df"], 0) << " | " << fixed(t["residual"]["sum_sq"]) << " | | | |\n\n";
}

}  // namespace

std::string render_markdown(const json& report) {
  std::ostringstream out;
  const auto& opts = report["options"];
  const auto& base = report["baselines"];

  out << "# Moral foundations consistency report\n\n";
  out << "Bank version `" << report["bank_version"].get<std::string>() << "`. Attention profile "
      << opts["attention_profile"].get<std::string>() << " (math item <= " << opts["math_max"].get<int>()
      << ", good item >= " << opts["good_min"].get<int>() << "). Verdict level p < " << fixed(opts["policy_alpha"], 2)
      << ". ANOVA sums of squares: Type " << opts["ss_type"].get<std::string>() << ". Regressions "
      << (opts["pool_conditions"].get<bool>() ? "pool both conditions" : "run per condition") << ".\n\n";

  // Runs.
  out << "## Valid runs\n\n| Agent | QV | VQ | Overall (Total) |\n|---|---:|---:|---:|\n";
  std::map<std::string, std::map<std::string, std::pair<int, int>>> counts;
  for (const auto& row : report["summary"]) {
    counts[row["agent"].get<std::string>()][row["condition"].get<std::string>()] = {row["valid"].get<int>(),
                                                                                     row["total"].get<int>()};
  }
  for (const auto& [agent, by_cond] : counts) {
    auto cell = [&by_cond](const char* c) {
      auto it = by_cond.find(c);
      return it == by_cond.end() ? std::pair{0, 0} : it->second;
    };
    const auto qv = cell("QV");
    const auto vq = cell("VQ");
    out << "| " << agent << " | " << qv.first << " | " << vq.first << " | " << qv.first + vq.first << " ("
        << qv.second + vq.second << ") |\n";
  }
  out << '\n';
  bool any_excluded = false;
  for (const auto& row : report["summary"]) any_excluded = any_excluded || !row["by_reason"].empty();
  if (any_excluded) {
    out << "| Agent | Condition | Reason | Runs |\n|---|---|---|---:|\n";
  } else {
    out << "No runs were excluded.\n";
  }
  for (const auto& row : report["summary"]) {
    for (const auto& [reason, n] : row["by_reason"].items()) {
      out << "| " << row["agent"].get<std::string>() << " | " << row["condition"].get<std::string>() << " | "
          << reason << " | " << n.get<int>() << " |\n";
    }
  }
  out << '\n';

  // Verdicts.
  out << "## Verdicts\n\n";
  for (const auto& a : report["agents"]) {
    out << "**" << a["agent"].get<std::string>() << ": " << a["verdict"].get<std::string>() << "**\n\n";
    for (const auto& block : a["coherence"]) {
      const auto& v = block["verdict"];
      if (!block["condition"].is_null()) out << "Condition " << block["condition"].get<std::string>() << ": ";
      if (v["categories"].empty()) {
        out << "no verdict (" << str_or(v["note"], "") << ")\n\n";
        continue;
      }
      out << "| MFV category | MFQ match | coef | p | R-squared | verdict |\n|---|---|---:|---:|---:|---|\n";
      for (const auto& c : v["categories"]) {
        out << "| " << c["category"].get<std::string>() << " | " << c["matching"].get<std::string>() << " | "
            << fixed(c["coef"]) << " | " << pval(c["p"]) << " | " << fixed(c["r_squared"]) << " | "
            << c["verdict"].get<std::string>() << " |\n";
      }
      out << '\n';
    }
  }

  // Consistency.
  out << "## Internal consistency (Cronbach's alpha)\n\n";
  out << "Threshold alpha > " << fixed(base["alpha_threshold"], 2) << ". Human reference means: MFQ "
      << fixed(base["human_mfq_alpha"], 2) << ", MFV " << fixed(base["human_mfv_alpha"], 2) << ".\n\n";
  for (const auto& a : report["agents"]) {
    out << "### " << a["agent"].get<std::string>() << "\n\n";
    out << "| Instrument | Foundation | alpha | > " << fixed(base["alpha_threshold"], 2)
        << " | QV | VQ | zero-variance items |\n|---|---|---:|---|---:|---:|---|\n";
    std::map<std::string, std::pair<double, int>> means;
    for (const auto& e : a["alphas"]) {
      if (!e["condition"].is_null()) continue;
      const std::string scope = e["scope"].get<std::string>();
      const std::string f = e["foundation"].get<std::string>();
      std::string zv;
      for (const auto& id : e["zero_variance_items"]) zv += (zv.empty() ? "" : " ") + id.get<std::string>();
      out << "| " << scope << " | " << f << " | " << alpha_cell(&e) << " | "
          << (e["passes"].get<bool>() ? "yes" : "no") << " | " << alpha_cell(alpha_entry(a["alphas"], scope, f, "QV"))
          << " | " << alpha_cell(alpha_entry(a["alphas"], scope, f, "VQ")) << " | " << zv << " |\n";
      if (e["alpha"].is_number()) {
        means[scope].first += e["alpha"].get<double>();
        ++means[scope].second;
      }
    }
    out << '\n';
    for (const char* scope : {"MFQ", "MFV"}) {
      auto it = means.find(scope);
      if (it == means.end()) continue;
      char buf[32];
      std::snprintf(buf, sizeof buf, "%.3f", it->second.first / it->second.second);
      out << "Mean " << scope << " alpha: " << buf << " over " << it->second.second << " foundations.\n";
    }
    out << '\n';
  }
  if (!base["published"].empty()) {
    out << "Published reference means:\n\n| Agent | MFQ | MFV |\n|---|---:|---:|\n";
    out << "| humans | " << fixed(base["human_mfq_alpha"], 2) << " | " << fixed(base["human_mfv_alpha"], 2) << " |\n";
    for (const auto& p : base["published"]) {
      out << "| " << p["agent"].get<std::string>() << " | " << fixed(p["mfq_mean_alpha"], 2) << " | "
          << fixed(p["mfv_mean_alpha"], 2) << " |\n";
    }
    out << '\n';
  }

  // Contrast.
  out << "## Condition contrast (QV vs VQ alphas)\n\n| Agent | t | df | p | Cohen's d | excluded |\n"
      << "|---|---:|---:|---:|---:|---:|\n";
  for (const auto& a : report["agents"]) {
    const auto& c = a["contrast"];
    out << "| " << a["agent"].get<std::string>() << " | ";
    if (c["t"].is_null()) {
      out << str_or(c["error"], "n/a") << " | | | | " << c["excluded"].size() << " |\n";
    } else {
      out << fixed(c["t"], 2) << " | " << fixed(c["df"], 0) << " | " << pval(c["p"]) << " | "
          << fixed(c["cohens_d"], 2) << " | " << c["excluded"].size() << " |\n";
    }
  }
  out << '\n';

  // ANOVA.
  out << "## ANOVA of alphas\n\n";
  if (!report["alpha_exclusions"].empty()) {
    out << "Excluded (undefined or failed): ";
    bool first = true;
    for (const auto& e : report["alpha_exclusions"]) {
      out << (first ? "" : ", ") << e.get<std::string>();
      first = false;
    }
    out << ".\n\n";
  }
  render_anova(out, "Agent x Instrument", report["alpha_anova"]);
  render_anova(out, "Foundation x Agent (Liberty excluded)", report["foundation_anova"]);

  // Regressions.
  out << "## MFQ foundations predicting MFV ratings\n\n";
  out << "Standardized OLS per MFV category. Human reference R-squared band: [" << fixed(base["r_squared_low"], 2)
      << ", " << fixed(base["r_squared_high"], 2) << "]. Tables below: " << kStarCaption << "\n\n";
  for (const auto& a : report["agents"]) {
    for (const auto& block : a["coherence"]) {
      out << "### " << a["agent"].get<std::string>() << " ("
          << (block["condition"].is_null() ? std::string("pooled") : block["condition"].get<std::string>());
      if (!block["n_runs"].is_null()) out << ", n = " << block["n_runs"].get<std::size_t>();
      out << ")\n\n";
      if (!block["error"].is_null()) {
        out << "Not computed: " << block["detail"].get<std::string>() << "\n\n";
        continue;
      }
      if (!block["dropped_predictors"].empty()) {
        out << "Constant MFQ foundations left out:";
        for (const auto& d : block["dropped_predictors"]) out << ' ' << d.get<std::string>();
        out << "\n\n";
      }
      render_regression_table(out, block);
      bool listed = false;
      for (const auto& e : block["entries"]) {
        if (!e["error"].is_null()) {
          out << "- " << e["category"].get<std::string>() << ": " << e["detail"].get<std::string>() << '\n';
          listed = true;
        }
      }
      if (listed) out << '\n';
    }
  }

  // Constancy.
  out << "## Constant answers\n\n| Agent | Condition | Valid runs | MFQ1 | MFQ2 | MFV | Attention |\n"
      << "|---|---|---:|---:|---:|---:|---:|\n";
  for (const auto& a : report["agents"]) {
    for (const auto& g : a["constancy"]) {
      out << "| " << a["agent"].get<std::string>() << " | " << g["condition"].get<std::string>() << " | "
          << g["n_valid"].get<std::size_t>() << " | ";
      if (!g["error"].is_null()) {
        out << g["error"].get<std::string>() << " | | | |\n";
        continue;
      }
      const auto& sc = g["scored_counts"];
      out << sc.value("MFQ1", 0) << " | " << sc.value("MFQ2", 0) << " | " << sc.value("MFV", 0) << " | "
          << g["attention_flagged"].get<int>() << " |\n";
    }
  }
  out << '\n';
  for (const auto& a : report["agents"]) {
    for (const auto& g : a["constancy"]) {
      if (g["items"].empty()) continue;
      out << "- " << a["agent"].get<std::string>() << " " << g["condition"].get<std::string>() << ":";
      for (const auto& i : g["items"]) out << ' ' << i["id"].get<std::string>() << '=' << i["answer"].get<int>();
      out << '\n';
    }
  }
  return out.str();
}

// ---- CSV --------------------------------------------------------------------

void write_scores_csv(std::ostream& out, const AnalysisReport& report) {
  out << "run_id,agent,condition";
  for (Foundation f : kMfqFoundations) out << ",mfq_" << to_string(f);
  for (Foundation f : kMfqFoundations) out << ",mfq1_" << to_string(f);
  for (Foundation f : kMfqFoundations) out << ",mfq2_" << to_string(f);
  for (Foundation f : kMfvFoundations) out << ",mfv_" << to_string(f);
  out << '\n';
  for (const auto& a : report.agents) {
    for (const auto& s : a.scores) {
      out << s.run_id << ',' << s.agent_label << ',' << to_string(s.condition);
      for (Foundation f : kMfqFoundations) out << ',' << csv_num(s.mfq.at(f));
      for (Foundation f : kMfqFoundations) out << ',' << csv_num(s.mfq_part1.at(f));
      for (Foundation f : kMfqFoundations) out << ',' << csv_num(s.mfq_part2.at(f));
      for (Foundation f : kMfvFoundations) out << ',' << csv_num(s.mfv.at(f));
      out << '\n';
    }
  }
}

void write_alphas_csv(std::ostream& out, const AnalysisReport& report) {
  out << "agent,scope,foundation,condition,alpha,k,n,error\n";
  for (const auto& a : report.agents) {
    for (const auto& e : a.consistency.entries) {
      out << a.agent << ',' << to_string(e.scope) << ',' << to_string(e.foundation) << ','
          << (e.condition ? std::string(to_string(*e.condition)) : "pooled") << ','
          << (e.alpha() ? csv_num(*e.alpha()) : "") << ',' << (e.stat ? std::to_string(e.stat->k) : "") << ','
          << (e.stat ? std::to_string(e.stat->n) : "") << ',' << (e.error ? to_string(*e.error) : "") << '\n';
    }
  }
}

void write_regressions_csv(std::ostream& out, const json& report) {
  out << "agent,condition,category,predictor,coef,std_err,t,p,stars,r_squared,adj_r_squared,n\n";
  auto cell = [](const json& v) {
    if (v.is_null()) return std::string();
    if (v.is_string()) return v.get<std::string>();
    return csv_num(v.get<double>());
  };
  for (const auto& a : report["agents"]) {
    for (const auto& block : a["coherence"]) {
      const std::string cond = block["condition"].is_null() ? "pooled" : block["condition"].get<std::string>();
      for (const auto& e : block["entries"]) {
        for (const auto& c : e["predictors"]) {
          out << a["agent"].get<std::string>() << ',' << cond << ',' << e["category"].get<std::string>() << ','
              << c["name"].get<std::string>() << ',' << cell(c["coef"]) << ',' << cell(c["std_err"]) << ','
              << cell(c["t"]) << ',' << cell(c["p"]) << ',' << c["stars"].get<std::string>() << ','
              << cell(e["r_squared"]) << ',' << cell(e["adj_r_squared"]) << ',' << e["n"].get<std::size_t>() << '\n';
        }
      }
    }
  }
}

void write_report_bundle(const std::filesystem::path& dir, const AnalysisReport& report,
                         std::span<const ParsedRun> parsed, const InstrumentBank& bank) {
  std::filesystem::create_directories(dir);
  write_file_atomic(dir / kReportFile, to_json(report).dump(2) + "\n");
  std::ostringstream p;
  write_parsed_csv(p, parsed, bank);
  write_file_atomic(dir / "parsed.csv", p.str());
  std::ostringstream s;
  write_scores_csv(s, report);
  write_file_atomic(dir / "scores.csv", s.str());
  std::ostringstream a;
  write_alphas_csv(a, report);
  write_file_atomic(dir / "alphas.csv", a.str());
}

json load_report_bundle(const std::filesystem::path& dir) {
  const auto file = dir / kReportFile;
  std::ifstream in(file);
  if (!in) throw Error(ErrorCode::MissingBundle, "no " + std::string(kReportFile) + " in " + dir.string());
  try {
    return json::parse(in);
  } catch (const json::exception& e) {
    throw Error(ErrorCode::MissingBundle, file.string() + " is not a report bundle: " + e.what());
  }
}

}  // namespace hprobe
