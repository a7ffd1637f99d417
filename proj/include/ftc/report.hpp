#pragma once

// Report model and deterministic rendering to TSV, JSON and Markdown.

#include <cmath>
#include <cstdio>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include <nlohmann/json.hpp>

#include "ftc/cache.hpp"
#include "ftc/core.hpp"
#include "ftc/label.hpp"
#include "ftc/metrics.hpp"
#include "ftc/stats.hpp"

namespace ftc {

enum class RowStatus : std::uint8_t { Scored, Skipped, Filtered };

inline std::string to_string(RowStatus s) {
  switch (s) {
    case RowStatus::Scored: return "scored";
    case RowStatus::Skipped: return "skipped";
    case RowStatus::Filtered: return "filtered";
  }
  return {};
}

struct ReportRow {
  std::string instance_id;
  Label gold_label = Label::N;
  RowStatus status = RowStatus::Scored;
  std::string reason;
  std::optional<Branch> branch;
  std::string x_cf;
  std::optional<Label> y_cf;
  std::optional<Provenance> provenance;
  std::optional<LabelDistribution> pred;
  std::optional<double> ftc_delta;
  std::optional<double> ftc_kl;
  std::optional<double> ftc_w;

  std::optional<double> score(FtcVariant v) const {
    switch (v) {
      case FtcVariant::Delta: return ftc_delta;
      case FtcVariant::Kl: return ftc_kl;
      case FtcVariant::Wasserstein: return ftc_w;
    }
    return std::nullopt;
  }
};

struct RankSumEntry {
  std::string scope;  // "C", "E", "N" or "all"
  FtcVariant variant = FtcVariant::Kl;
  std::size_t n_agree = 0;
  std::size_t n_disagree = 0;
  std::optional<RankSumResult> result;  // undefined when either group is empty
};

struct Aggregates {
  std::size_t instances = 0;
  std::size_t scored = 0;
  std::size_t skipped = 0;
  std::size_t filtered = 0;
  // Instance-level means (branch scores averaged first), per gold class and
  // over all classes ("all").
  std::map<std::string, std::map<FtcVariant, std::optional<double>>> ftc_means;
  LasResult las;
  std::optional<double> lra;
  std::vector<RankSumEntry> rank_sums;
  std::optional<KappaResult> kappa;
};

struct Report {
  std::vector<ReportRow> rows;
  Aggregates aggregates;
  std::string config_hash;
  CacheStats cache;  // run metadata; deliberately not rendered
};

enum class ReportFormat : std::uint8_t { Tsv, Json, Markdown };

inline ReportFormat parse_report_format(std::string_view s) {
  if (s == "tsv") return ReportFormat::Tsv;
  if (s == "json") return ReportFormat::Json;
  if (s == "markdown" || s == "md") return ReportFormat::Markdown;
  throw ArgumentError("unknown report format '" + std::string(s) + "'");
}

inline constexpr const char* kScopes[] = {"C", "E", "N", "all"};

namespace detail {

inline double round4(double v) {
  const double r = std::round(v * 1e4) / 1e4;
  return r == 0.0 ? 0.0 : r;  // no negative zero
}

inline std::string fmt4(std::optional<double> v) {
  if (!v || !std::isfinite(*v)) return "NA";
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.4f", round4(*v));
  return buf;
}

inline json num4(std::optional<double> v) {
  if (!v || !std::isfinite(*v)) return nullptr;
  return round4(*v);
}

inline bool is_count(const std::string& name) {
  auto ends = [&](const std::string& t) {
    return name.size() >= t.size() && name.compare(name.size() - t.size(), t.size(), t) == 0;
  };
  return name == "instances" || name == "scored" || name == "skipped" || name == "filtered" || ends(".n_agree") ||
         ends(".n_disagree");
}

inline std::string fmt_value(const std::string& name, std::optional<double> v) {
  if (v && is_count(name)) return std::to_string(static_cast<long long>(*v));
  return fmt4(v);
}

inline json num_value(const std::string& name, std::optional<double> v) {
  if (v && is_count(name)) return static_cast<long long>(*v);
  return num4(v);
}

inline std::string variant_title(FtcVariant v) {
  switch (v) {
    case FtcVariant::Delta: return "FTC-delta";
    case FtcVariant::Kl: return "FTC-K";
    case FtcVariant::Wasserstein: return "FTC-W";
  }
  return {};
}

}  // namespace detail

// Flat (name, value) view of the aggregates shared by every format.
inline std::vector<std::pair<std::string, std::optional<double>>> aggregate_values(const Aggregates& a) {
  std::vector<std::pair<std::string, std::optional<double>>> out;
  auto count = [](std::size_t n) { return std::optional<double>(static_cast<double>(n)); };
  out.emplace_back("instances", count(a.instances));
  out.emplace_back("scored", count(a.scored));
  out.emplace_back("skipped", count(a.skipped));
  out.emplace_back("filtered", count(a.filtered));
  for (const char* scope : kScopes) {
    for (FtcVariant v : kAllVariants) {
      std::optional<double> val;
      if (auto it = a.ftc_means.find(scope); it != a.ftc_means.end())
        if (auto jt = it->second.find(v); jt != it->second.end()) val = jt->second;
      out.emplace_back("mean." + to_string(v) + "." + scope, val);
    }
  }
  out.emplace_back("las0", a.las.las0);
  out.emplace_back("las1", a.las.las1);
  out.emplace_back("las", a.las.las);
  out.emplace_back("lra", a.lra);
  for (const RankSumEntry& e : a.rank_sums) {
    const std::string base = "ranksum." + e.scope + "." + to_string(e.variant) + ".";
    out.emplace_back(base + "n_agree", count(e.n_agree));
    out.emplace_back(base + "n_disagree", count(e.n_disagree));
    out.emplace_back(base + "rho", e.result ? std::optional(e.result->rho) : std::nullopt);
    out.emplace_back(base + "p", e.result ? std::optional(e.result->p_value) : std::nullopt);
  }
  out.emplace_back("kappa", a.kappa ? std::optional(a.kappa->kappa) : std::nullopt);
  return out;
}

inline constexpr const char* kRowColumns[] = {"instance_id", "gold", "branch", "status", "reason",
                                              "x_cf", "y_cf", "p_E", "p_C", "p_N",
                                              "ftc_delta", "ftc_kl", "ftc_w"};

inline std::vector<std::string> row_cells(const ReportRow& r) {
  auto opt_label = [](std::optional<Label> l) { return l ? to_string(*l) : std::string(); };
  std::vector<std::string> c{r.instance_id,
                             to_string(r.gold_label),
                             r.branch ? to_string(*r.branch) : std::string(),
                             to_string(r.status),
                             r.reason,
                             r.x_cf,
                             opt_label(r.y_cf)};
  for (Label l : kAllLabels)
    c.push_back(r.pred ? detail::fmt4((*r.pred)[l]) : std::string("NA"));
  c.push_back(detail::fmt4(r.ftc_delta));
  c.push_back(detail::fmt4(r.ftc_kl));
  c.push_back(detail::fmt4(r.ftc_w));
  return c;
}

namespace detail {

inline std::string tsv_cell(std::string s) {
  for (char& ch : s)
    if (ch == '\t' || ch == '\n' || ch == '\r') ch = ' ';
  return s;
}

inline std::string md_cell(const std::string& s) {
  std::string out;
  for (char ch : s) {
    if (ch == '|') out += '\\';
    out += (ch == '\n' || ch == '\t') ? ' ' : ch;
  }
  return out;
}

inline std::string render_tsv(const Report& report) {
  std::ostringstream os;
  for (std::size_t i = 0; i < std::size(kRowColumns); ++i) os << (i ? "\t" : "") << kRowColumns[i];
  os << "\n";
  for (const ReportRow& r : report.rows) {
    const auto cells = row_cells(r);
    for (std::size_t i = 0; i < cells.size(); ++i) os << (i ? "\t" : "") << tsv_cell(cells[i]);
    os << "\n";
  }
  os << "\nmetric\tvalue\n";
  for (const auto& [name, value] : aggregate_values(report.aggregates)) os << name << "\t" << fmt_value(name, value) << "\n";
  return os.str();
}

inline std::string render_json(const Report& report) {
  json rows = json::array();
  for (const ReportRow& r : report.rows) {
    json row{{"instance_id", r.instance_id},
             {"gold", to_string(r.gold_label)},
             {"branch", r.branch ? json(to_string(*r.branch)) : json(nullptr)},
             {"status", to_string(r.status)},
             {"reason", r.reason},
             {"x_cf", r.x_cf},
             {"y_cf", r.y_cf ? json(to_string(*r.y_cf)) : json(nullptr)},
             {"provenance", r.provenance ? json(to_string(*r.provenance)) : json(nullptr)},
             {"ftc_delta", num4(r.ftc_delta)},
             {"ftc_kl", num4(r.ftc_kl)},
             {"ftc_w", num4(r.ftc_w)}};
    row["probs"] = r.pred ? json{{"E", num4(r.pred->e)}, {"C", num4(r.pred->c)}, {"N", num4(r.pred->n)}}
                          : json(nullptr);
    rows.push_back(std::move(row));
  }
  json agg = json::object();
  for (const auto& [name, value] : aggregate_values(report.aggregates)) agg[name] = num_value(name, value);
  return json{{"config_hash", report.config_hash}, {"rows", rows}, {"aggregates", agg}}.dump(2) + "\n";
}

inline std::string render_markdown(const Report& report) {
  const Aggregates& a = report.aggregates;
  std::ostringstream os;
  auto mean = [&](const char* scope, FtcVariant v) -> std::optional<double> {
    if (auto it = a.ftc_means.find(scope); it != a.ftc_means.end())
      if (auto jt = it->second.find(v); jt != it->second.end()) return jt->second;
    return std::nullopt;
  };

  os << "## FTC by gold label\n\n| Metric | C | E | N | All |\n|---|---|---|---|---|\n";
  if (a.instances > 0) {
    for (FtcVariant v : kAllVariants) {
      os << "| " << variant_title(v);
      for (const char* s : kScopes) os << " | " << fmt4(mean(s, v));
      os << " |\n";
    }
  }

  os << "\n## Rank-sum rho (agreement vs disagreement)\n\n| Metric | C | E | N | All |\n|---|---|---|---|---|\n";
  if (!a.rank_sums.empty()) {
    for (FtcVariant v : kAllVariants) {
      os << "| " << variant_title(v);
      for (const char* s : kScopes) {
        std::optional<double> rho;
        for (const auto& e : a.rank_sums)
          if (e.scope == s && e.variant == v && e.result) rho = e.result->rho;
        os << " | " << fmt4(rho);
      }
      os << " |\n";
    }
  }

  os << "\n## Summary\n\n| Quantity | Value |\n|---|---|\n";
  for (const auto& [name, value] : aggregate_values(a))
    if (name.rfind("mean.", 0) != 0 && name.rfind("ranksum.", 0) != 0)
      os << "| " << name << " | " << fmt_value(name, value) << " |\n";

  os << "\n## Records\n\n|";
  for (const char* c : kRowColumns) os << " " << c << " |";
  os << "\n|";
  for (std::size_t i = 0; i < std::size(kRowColumns); ++i) os << "---|";
  os << "\n";
  for (const ReportRow& r : report.rows) {
    os << "|";
    for (const auto& cell : row_cells(r)) os << " " << md_cell(cell) << " |";
    os << "\n";
  }
  return os.str();
}

}  // namespace detail

inline std::string render_report(const Report& report, ReportFormat format) {
  switch (format) {
    case ReportFormat::Tsv: return detail::render_tsv(report);
    case ReportFormat::Json: return detail::render_json(report);
    case ReportFormat::Markdown: return detail::render_markdown(report);
  }
  return {};
}

}  // namespace ftc
