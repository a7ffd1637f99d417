#pragma once

// Scores explanation sets produced under input-ablated generation
// conditions, one pipeline run per condition.

#include <fstream>
#include <map>
#include <optional>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "ftc/core.hpp"
#include "ftc/errors.hpp"
#include "ftc/meteor.hpp"
#include "ftc/pipeline.hpp"
#include "ftc/report.hpp"

namespace ftc {

enum class AblationCondition : std::uint8_t { FullYxu, YOnly, XOnly, UOnly };

inline constexpr AblationCondition kAllConditions[] = {AblationCondition::FullYxu, AblationCondition::YOnly,
                                                       AblationCondition::XOnly, AblationCondition::UOnly};

inline std::string to_string(AblationCondition c) {
  switch (c) {
    case AblationCondition::FullYxu: return "full_yxu";
    case AblationCondition::YOnly: return "y_only";
    case AblationCondition::XOnly: return "x_only";
    case AblationCondition::UOnly: return "u_only";
  }
  return {};
}

inline AblationCondition parse_ablation_condition(std::string_view s) {
  for (AblationCondition c : kAllConditions)
    if (to_string(c) == s) return c;
  throw ArgumentError("unknown condition '" + std::string(s) + "'");
}

struct ConditionedExplanationSet {
  AblationCondition condition = AblationCondition::FullYxu;
  std::map<std::string, std::string> explanations;  // instance id -> explanation
};

// JSONL of {"instance_id", "explanation"}.
inline ConditionedExplanationSet parse_explanation_set(std::istream& in, AblationCondition condition) {
  ConditionedExplanationSet set{condition, {}};
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (text::trim(line).empty()) continue;
    try {
      const json j = json::parse(line);
      const auto id = j.at("instance_id").get<std::string>();
      const auto expl = j.at("explanation").get<std::string>();
      if (!set.explanations.emplace(id, expl).second) throw ArgumentError("duplicate instance_id '" + id + "'");
    } catch (const std::exception& e) {
      throw DatasetError(to_string(condition) + " line " + std::to_string(lineno) + ": " + e.what());
    }
  }
  return set;
}

inline ConditionedExplanationSet load_explanation_set(const std::string& path, AblationCondition condition) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open explanation set '" + path + "'");
  return parse_explanation_set(in, condition);
}

struct SensitivityRow {
  AblationCondition condition = AblationCondition::FullYxu;
  std::optional<double> ftc_kl;
  std::optional<double> ftc_delta;
  std::optional<double> ftc_w;
  std::optional<double> las;
  std::optional<double> lra;
  std::optional<double> meteor;
  std::size_t scored = 0;
  std::size_t skipped = 0;
};

struct SensitivityReport {
  std::vector<SensitivityRow> rows;  // in kAllConditions order
};

// Every condition must be present exactly once and cover the same ids, all
// of which exist in `dataset`. METEOR compares each condition's explanation
// with the dataset explanation of the same instance.
inline SensitivityReport sensitivity_report(std::span<const Instance> dataset,
                                            std::span<const ConditionedExplanationSet> sets,
                                            const PipelineOptions& opts, const PipelineBackends& backends,
                                            bool with_meteor = true) {
  std::map<AblationCondition, const ConditionedExplanationSet*> by_cond;
  for (const auto& s : sets)
    if (!by_cond.emplace(s.condition, &s).second)
      throw ConfigError("sensitivity: condition " + to_string(s.condition) + " given twice");
  for (AblationCondition c : kAllConditions)
    if (!by_cond.count(c)) throw ConfigError("sensitivity: missing condition " + to_string(c));

  std::set<std::string> ids;
  for (const auto& [id, e] : by_cond.at(AblationCondition::FullYxu)->explanations) ids.insert(id);
  for (const auto& [c, s] : by_cond) {
    std::set<std::string> other;
    for (const auto& [id, e] : s->explanations) other.insert(id);
    if (other != ids)
      throw ConfigError("sensitivity: condition " + to_string(c) + " covers different instance ids");
  }
  std::map<std::string, const Instance*> index;
  for (const Instance& i : dataset) index[i.id] = &i;
  std::vector<const Instance*> base;  // dataset order
  for (const Instance& i : dataset)
    if (ids.count(i.id)) base.push_back(&i);
  for (const auto& id : ids)
    if (!index.count(id)) throw ConfigError("sensitivity: instance '" + id + "' is not in the dataset");

  SensitivityReport out;
  for (AblationCondition c : kAllConditions) {
    const auto& expl = by_cond.at(c)->explanations;
    std::vector<Instance> ablated;
    ablated.reserve(base.size());
    std::vector<double> meteors;
    for (const Instance* i : base) {
      Instance copy = *i;
      copy.explanation = expl.at(i->id);
      copy.annotator_labels.clear();
      copy.branch_annotator_labels.clear();
      if (with_meteor) meteors.push_back(meteor_single(copy.explanation, i->explanation));
      ablated.push_back(std::move(copy));
    }
    const Report r = run_pipeline(ablated, opts, backends);
    SensitivityRow row;
    row.condition = c;
    const auto& all = r.aggregates.ftc_means.at("all");
    row.ftc_kl = all.at(FtcVariant::Kl);
    row.ftc_delta = all.at(FtcVariant::Delta);
    row.ftc_w = all.at(FtcVariant::Wasserstein);
    row.las = r.aggregates.las.las;
    row.lra = r.aggregates.lra;
    if (with_meteor) row.meteor = detail::mean_of(meteors);
    row.scored = r.aggregates.scored;
    row.skipped = r.aggregates.skipped;
    out.rows.push_back(row);
  }
  return out;
}

inline std::string render_sensitivity(const SensitivityReport& report, ReportFormat format) {
  static constexpr const char* kCols[] = {"condition", "FTC-K", "FTC-delta", "FTC-W", "LAS",
                                          "LRA",       "METEOR", "scored",   "skipped"};
  auto cells = [](const SensitivityRow& r) {
    return std::vector<std::string>{to_string(r.condition),
                                    detail::fmt4(r.ftc_kl),
                                    detail::fmt4(r.ftc_delta),
                                    detail::fmt4(r.ftc_w),
                                    detail::fmt4(r.las),
                                    detail::fmt4(r.lra),
                                    detail::fmt4(r.meteor),
                                    std::to_string(r.scored),
                                    std::to_string(r.skipped)};
  };
  std::ostringstream os;
  if (format == ReportFormat::Json) {
    json rows = json::array();
    for (const auto& r : report.rows)
      rows.push_back({{"condition", to_string(r.condition)},
                      {"ftc_kl", detail::num4(r.ftc_kl)},
                      {"ftc_delta", detail::num4(r.ftc_delta)},
                      {"ftc_w", detail::num4(r.ftc_w)},
                      {"las", detail::num4(r.las)},
                      {"lra", detail::num4(r.lra)},
                      {"meteor", detail::num4(r.meteor)},
                      {"scored", r.scored},
                      {"skipped", r.skipped}});
    return json{{"rows", rows}}.dump(2) + "\n";
  }
  const bool md = format == ReportFormat::Markdown;
  auto line = [&](const std::vector<std::string>& cs) {
    if (md) os << "|";
    for (std::size_t i = 0; i < cs.size(); ++i) os << (md ? " " : (i ? "\t" : "")) << cs[i] << (md ? " |" : "");
    os << "\n";
  };
  line(std::vector<std::string>(std::begin(kCols), std::end(kCols)));
  if (md) {
    os << "|";
    for (std::size_t i = 0; i < std::size(kCols); ++i) os << "---|";
    os << "\n";
  }
  for (const auto& r : report.rows) line(cells(r));
  return os.str();
}

}  // namespace ftc
