#pragma once

// Canonical record types, dataset ingestion and annotator-consistency filtering.

#include <algorithm>
#include <array>
#include <cstddef>
#include <istream>
#include <map>
#include <optional>
#include <ostream>
#include <set>
#include <span>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include <nlohmann/json.hpp>

#include "ftc/errors.hpp"
#include "ftc/label.hpp"
#include "ftc/text.hpp"

namespace ftc {

using json = nlohmann::json;

enum class Branch : std::uint8_t { Main, ABranch, NegBBranch };

inline std::string to_string(Branch b) {
  switch (b) {
    case Branch::Main: return "main";
    case Branch::ABranch: return "A_branch";
    case Branch::NegBBranch: return "negB_branch";
  }
  return {};
}

inline Branch parse_branch(std::string_view s) {
  if (s == "main") return Branch::Main;
  if (s == "A_branch") return Branch::ABranch;
  if (s == "negB_branch") return Branch::NegBBranch;
  throw ArgumentError("unknown branch '" + std::string(s) + "'");
}

enum class Provenance : std::uint8_t { Regex, Fsp, Human };

inline std::string to_string(Provenance p) {
  switch (p) {
    case Provenance::Regex: return "regex";
    case Provenance::Fsp: return "fsp";
    case Provenance::Human: return "human";
  }
  return {};
}

inline Provenance parse_provenance(std::string_view s) {
  if (s == "regex") return Provenance::Regex;
  if (s == "fsp") return Provenance::Fsp;
  if (s == "human") return Provenance::Human;
  throw ArgumentError("unknown provenance '" + std::string(s) + "'");
}

struct Instance {
  std::string id;
  std::string premise_ref;  // opaque; only the classifier endpoint interprets it
  std::string hypothesis;
  Label gold_label = Label::N;
  std::string explanation;
  std::vector<Label> annotator_labels;
  // Labels collected for one specific counterfactual branch. When present
  // they take precedence over annotator_labels for that branch.
  std::map<Branch, std::vector<Label>> branch_annotator_labels;

  const std::vector<Label>& labels_for(Branch b) const {
    if (auto it = branch_annotator_labels.find(b); it != branch_annotator_labels.end())
      return it->second;
    return annotator_labels;
  }

  bool operator==(const Instance&) const = default;
};

struct CounterfactualRecord {
  std::string instance_id;
  Branch branch = Branch::Main;
  std::string x_cf;
  Label y_cf = Label::E;
  Provenance provenance = Provenance::Regex;
  std::optional<std::string> pattern_id;

  bool operator==(const CounterfactualRecord&) const = default;
};

// ---------------------------------------------------------------------------
// Dataset format

enum class DatasetFormat { Tsv, Jsonl };

struct ColumnMap {
  std::string id = "id";
  std::string premise = "premise";
  std::string hypothesis = "hypothesis";
  std::string label = "label";
  std::string explanation = "explanation";
  std::vector<std::string> annotator_labels;
  std::map<Branch, std::vector<std::string>> branch_annotator_labels;
};

struct DatasetFormatConfig {
  DatasetFormat format = DatasetFormat::Tsv;
  ColumnMap columns;
  std::map<std::string, Label> label_aliases;  // keys lower-cased and trimmed
  std::size_t max_errors = 100;

  // One-letter codes and the English label names are always accepted.
  std::optional<Label> resolve_label(std::string_view raw) const {
    const std::string key = text::to_lower(text::trim(raw));
    if (auto it = label_aliases.find(key); it != label_aliases.end()) return it->second;
    if (key == "e" || key == "entailment") return Label::E;
    if (key == "c" || key == "contradiction") return Label::C;
    if (key == "n" || key == "neutral") return Label::N;
    return std::nullopt;
  }

  std::array<std::pair<const char*, const std::string*>, 5> required() const {
    return {{{"id", &columns.id},
             {"premise", &columns.premise},
             {"hypothesis", &columns.hypothesis},
             {"label", &columns.label},
             {"explanation", &columns.explanation}}};
  }

  void validate() const {
    std::map<std::string, std::string> seen;
    for (const auto& [field, column] : required()) {
      if (column->empty()) throw ConfigError(std::string("no source column for '") + field + "'");
      auto [it, inserted] = seen.emplace(*column, field);
      if (!inserted)
        throw ConfigError("column '" + *column + "' is mapped to both '" + it->second + "' and '" +
                          field + "'");
    }
  }

  static DatasetFormatConfig from_json(const json& j) {
    DatasetFormatConfig cfg;
    try {
      const std::string fmt = j.value("format", std::string("tsv"));
      if (fmt == "tsv") {
        cfg.format = DatasetFormat::Tsv;
      } else if (fmt == "jsonl") {
        cfg.format = DatasetFormat::Jsonl;
      } else {
        throw ConfigError("unknown dataset format '" + fmt + "'");
      }
      if (j.contains("columns")) {
        const json& c = j.at("columns");
        cfg.columns.id = c.value("id", cfg.columns.id);
        cfg.columns.premise = c.value("premise", cfg.columns.premise);
        cfg.columns.hypothesis = c.value("hypothesis", cfg.columns.hypothesis);
        cfg.columns.label = c.value("label", cfg.columns.label);
        cfg.columns.explanation = c.value("explanation", cfg.columns.explanation);
        if (c.contains("annotator_labels"))
          cfg.columns.annotator_labels = c.at("annotator_labels").get<std::vector<std::string>>();
        if (c.contains("branch_annotator_labels"))
          for (const auto& [branch, cols] : c.at("branch_annotator_labels").items())
            cfg.columns.branch_annotator_labels[parse_branch(branch)] =
                cols.get<std::vector<std::string>>();
      }
      if (j.contains("label_aliases")) {
        for (const auto& [alias, code] : j.at("label_aliases").items())
          cfg.label_aliases[text::to_lower(text::trim(alias))] =
              parse_label_code(code.get<std::string>());
      }
      cfg.max_errors = j.value("max_errors", cfg.max_errors);
    } catch (const json::exception& e) {
      throw ConfigError(std::string("dataset format config: ") + e.what());
    } catch (const ArgumentError& e) {
      throw ConfigError(std::string("dataset format config: ") + e.what());
    }
    cfg.validate();
    return cfg;
  }
};

struct RowError {
  std::size_t row = 0;  // 1-based line number in the source
  std::string message;
};

struct ParseResult {
  std::vector<Instance> instances;
  std::vector<RowError> errors;
};

namespace detail {

class RowCollector {
 public:
  RowCollector(const DatasetFormatConfig& cfg, ParseResult& out) : cfg_(cfg), out_(out) {}

  void error(std::size_t row, std::string message) {
    out_.errors.push_back({row, std::move(message)});
    if (out_.errors.size() > cfg_.max_errors) {
      std::ostringstream os;
      os << "aborting after " << out_.errors.size() << " malformed rows (limit "
         << cfg_.max_errors << "); first: row " << out_.errors.front().row << ": "
         << out_.errors.front().message;
      throw DatasetError(os.str());
    }
  }

  // Checks instance-level invariants and appends; returns false on row error.
  bool accept(std::size_t row, Instance inst) {
    if (inst.id.empty()) {
      error(row, "empty id");
      return false;
    }
    if (text::trim(inst.hypothesis).empty()) {
      error(row, "empty hypothesis");
      return false;
    }
    if (text::trim(inst.explanation).empty()) {
      error(row, "empty explanation");
      return false;
    }
    if (!ids_.insert(inst.id).second) {
      error(row, "duplicate id '" + inst.id + "'");
      return false;
    }
    out_.instances.push_back(std::move(inst));
    return true;
  }

 private:
  const DatasetFormatConfig& cfg_;
  ParseResult& out_;
  std::set<std::string> ids_;
};

inline bool next_line(std::istream& in, std::string& line, bool& first) {
  if (!std::getline(in, line)) return false;
  if (!line.empty() && line.back() == '\r') line.pop_back();
  if (first) {
    first = false;
    if (line.rfind("\xEF\xBB\xBF", 0) == 0) line.erase(0, 3);
  }
  return true;
}

inline void parse_tsv(std::istream& in, const DatasetFormatConfig& cfg, ParseResult& out) {
  RowCollector rows(cfg, out);
  std::string line;
  bool first = true;
  if (!next_line(in, line, first)) throw ConfigError("TSV input has no header row");
  if (!text::is_valid_utf8(line)) throw ConfigError("TSV header is not valid UTF-8");

  const std::vector<std::string> header = text::split(line, '\t');
  auto column_index = [&](const std::string& name) -> std::size_t {
    auto it = std::find(header.begin(), header.end(), name);
    if (it == header.end()) throw ConfigError("missing required column '" + name + "'");
    return static_cast<std::size_t>(it - header.begin());
  };
  const std::size_t c_id = column_index(cfg.columns.id);
  const std::size_t c_premise = column_index(cfg.columns.premise);
  const std::size_t c_hyp = column_index(cfg.columns.hypothesis);
  const std::size_t c_label = column_index(cfg.columns.label);
  const std::size_t c_expl = column_index(cfg.columns.explanation);
  std::vector<std::size_t> c_ann;
  for (const auto& name : cfg.columns.annotator_labels) c_ann.push_back(column_index(name));
  std::map<Branch, std::vector<std::size_t>> c_branch;
  for (const auto& [branch, names] : cfg.columns.branch_annotator_labels)
    for (const auto& name : names) c_branch[branch].push_back(column_index(name));

  std::size_t row = 1;
  while (next_line(in, line, first)) {
    ++row;
    if (line.empty()) continue;
    if (!text::is_valid_utf8(line)) {
      rows.error(row, "invalid UTF-8");
      continue;
    }
    const std::vector<std::string> cells = text::split(line, '\t');
    if (cells.size() != header.size()) {
      rows.error(row, "expected " + std::to_string(header.size()) + " fields, found " +
                          std::to_string(cells.size()));
      continue;
    }
    Instance inst;
    inst.id = cells[c_id];
    inst.premise_ref = cells[c_premise];
    inst.hypothesis = cells[c_hyp];
    inst.explanation = cells[c_expl];
    auto gold = cfg.resolve_label(cells[c_label]);
    if (!gold) {
      rows.error(row, "unknown label '" + cells[c_label] + "'");
      continue;
    }
    inst.gold_label = *gold;

    bool ok = true;
    auto read_labels = [&](const std::vector<std::size_t>& cols, std::vector<Label>& dest) {
      for (std::size_t c : cols) {
        if (text::trim(cells[c]).empty()) continue;
        auto l = cfg.resolve_label(cells[c]);
        if (!l) {
          rows.error(row, "unknown annotator label '" + cells[c] + "'");
          ok = false;
          return;
        }
        dest.push_back(*l);
      }
    };
    read_labels(c_ann, inst.annotator_labels);
    for (const auto& [branch, cols] : c_branch) {
      if (!ok) break;
      std::vector<Label> labels;
      read_labels(cols, labels);
      if (!labels.empty()) inst.branch_annotator_labels[branch] = std::move(labels);
    }
    if (ok) rows.accept(row, std::move(inst));
  }
}

inline void parse_jsonl(std::istream& in, const DatasetFormatConfig& cfg, ParseResult& out) {
  RowCollector rows(cfg, out);
  std::string line;
  bool first = true;
  std::size_t row = 0;
  while (next_line(in, line, first)) {
    ++row;
    if (text::trim(line).empty()) continue;
    if (!text::is_valid_utf8(line)) {
      rows.error(row, "invalid UTF-8");
      continue;
    }
    json obj;
    try {
      obj = json::parse(line);
    } catch (const json::parse_error& e) {
      rows.error(row, std::string("malformed JSON: ") + e.what());
      continue;
    }
    if (!obj.is_object()) {
      rows.error(row, "expected a JSON object");
      continue;
    }
    std::string missing;
    auto field = [&](const std::string& key) -> std::string {
      auto it = obj.find(key);
      if (it == obj.end() || it->is_null()) {
        if (missing.empty()) missing = key;
        return {};
      }
      if (it->is_string()) return it->get<std::string>();
      if (it->is_number_integer()) return it->dump();
      if (missing.empty()) missing = key;
      return {};
    };
    Instance inst;
    inst.id = field(cfg.columns.id);
    inst.premise_ref = field(cfg.columns.premise);
    inst.hypothesis = field(cfg.columns.hypothesis);
    inst.explanation = field(cfg.columns.explanation);
    const std::string raw_label = field(cfg.columns.label);
    if (!missing.empty()) {
      rows.error(row, "missing or non-string key '" + missing + "'");
      continue;
    }
    auto gold = cfg.resolve_label(raw_label);
    if (!gold) {
      rows.error(row, "unknown label '" + raw_label + "'");
      continue;
    }
    inst.gold_label = *gold;

    bool ok = true;
    auto read_labels = [&](const std::vector<std::string>& keys, std::vector<Label>& dest) {
      for (const auto& key : keys) {
        auto it = obj.find(key);
        if (it == obj.end() || it->is_null()) continue;
        std::vector<std::string> raw;
        if (it->is_string()) {
          raw.push_back(it->get<std::string>());
        } else if (it->is_array() &&
                   std::all_of(it->begin(), it->end(), [](const json& v) { return v.is_string(); })) {
          raw = it->get<std::vector<std::string>>();
        } else {
          rows.error(row, "annotator key '" + key + "' must hold a string or string array");
          ok = false;
          return;
        }
        for (const auto& r : raw) {
          auto l = cfg.resolve_label(r);
          if (!l) {
            rows.error(row, "unknown annotator label '" + r + "'");
            ok = false;
            return;
          }
          dest.push_back(*l);
        }
      }
    };
    read_labels(cfg.columns.annotator_labels, inst.annotator_labels);
    for (const auto& [branch, keys] : cfg.columns.branch_annotator_labels) {
      if (!ok) break;
      std::vector<Label> labels;
      read_labels(keys, labels);
      if (!labels.empty()) inst.branch_annotator_labels[branch] = std::move(labels);
    }
    if (ok) rows.accept(row, std::move(inst));
  }
}

}  // namespace detail

// One Instance per well-formed row, in input order. Malformed rows are
// collected in ParseResult::errors; exceeding cfg.max_errors throws
// DatasetError, a missing required column throws ConfigError.
inline ParseResult parse_instances(std::istream& in, const DatasetFormatConfig& cfg) {
  cfg.validate();
  ParseResult out;
  if (cfg.format == DatasetFormat::Tsv) {
    detail::parse_tsv(in, cfg, out);
  } else {
    detail::parse_jsonl(in, cfg, out);
  }
  return out;
}

inline ParseResult parse_instances(const std::string& data, const DatasetFormatConfig& cfg) {
  std::istringstream in(data);
  return parse_instances(in, cfg);
}

// Inverse of parse_instances for the same config. TSV cannot carry tabs or
// line breaks inside a field; such instances raise ArgumentError.
inline void serialize_instances(std::ostream& out, std::span<const Instance> instances,
                                const DatasetFormatConfig& cfg) {
  const auto& cols = cfg.columns;
  auto label_cell = [](Label l) { return long_name(l); };

  if (cfg.format == DatasetFormat::Jsonl) {
    for (const Instance& inst : instances) {
      json obj;
      obj[cols.id] = inst.id;
      obj[cols.premise] = inst.premise_ref;
      obj[cols.hypothesis] = inst.hypothesis;
      obj[cols.label] = label_cell(inst.gold_label);
      obj[cols.explanation] = inst.explanation;
      auto put_labels = [&](const std::vector<std::string>& keys, const std::vector<Label>& ls) {
        if (keys.empty() || ls.empty()) return;
        json arr = json::array();
        for (Label l : ls) arr.push_back(label_cell(l));
        obj[keys.front()] = std::move(arr);
      };
      put_labels(cols.annotator_labels, inst.annotator_labels);
      for (const auto& [branch, keys] : cols.branch_annotator_labels)
        if (auto it = inst.branch_annotator_labels.find(branch);
            it != inst.branch_annotator_labels.end())
          put_labels(keys, it->second);
      out << obj.dump() << '\n';
    }
    return;
  }

  std::vector<std::string> header{cols.id, cols.premise, cols.hypothesis, cols.label,
                                  cols.explanation};
  header.insert(header.end(), cols.annotator_labels.begin(), cols.annotator_labels.end());
  for (const auto& [branch, names] : cols.branch_annotator_labels)
    header.insert(header.end(), names.begin(), names.end());

  auto write_row = [&](const std::vector<std::string>& cells) {
    for (std::size_t i = 0; i < cells.size(); ++i) {
      if (cells[i].find_first_of("\t\r\n") != std::string::npos)
        throw ArgumentError("field contains a tab or line break; not representable in TSV");
      if (i) out << '\t';
      out << cells[i];
    }
    out << '\n';
  };
  write_row(header);

  for (const Instance& inst : instances) {
    std::vector<std::string> cells{inst.id, inst.premise_ref, inst.hypothesis,
                                   label_cell(inst.gold_label), inst.explanation};
    auto put_labels = [&](std::size_t width, const std::vector<Label>& ls) {
      if (ls.size() > width)
        throw ArgumentError("instance '" + inst.id + "' has more annotator labels than columns");
      for (std::size_t k = 0; k < width; ++k)
        cells.push_back(k < ls.size() ? label_cell(ls[k]) : std::string());
    };
    put_labels(cols.annotator_labels.size(), inst.annotator_labels);
    for (const auto& [branch, names] : cols.branch_annotator_labels) {
      auto it = inst.branch_annotator_labels.find(branch);
      put_labels(names.size(), it == inst.branch_annotator_labels.end() ? std::vector<Label>{}
                                                                        : it->second);
    }
    write_row(cells);
  }
}

// ---------------------------------------------------------------------------
// Annotator aggregation

// Label held by more than half of the votes, or nullopt when none is.
inline std::optional<Label> majority_vote(std::span<const Label> labels) {
  if (labels.empty()) throw ArgumentError("majority_vote: empty label list");
  std::array<std::size_t, 3> counts{};
  for (Label l : labels) ++counts[index_of(l)];
  for (Label l : kAllLabels)
    if (2 * counts[index_of(l)] > labels.size()) return l;
  return std::nullopt;
}

enum class DropReason : std::uint8_t { Unannotated, Tie, MajorityMismatch };

inline std::string to_string(DropReason r) {
  switch (r) {
    case DropReason::Unannotated: return "unannotated";
    case DropReason::Tie: return "tie";
    case DropReason::MajorityMismatch: return "majority-mismatch";
  }
  return {};
}

struct AnnotatedRecord {
  Instance instance;
  CounterfactualRecord record;
};

struct DroppedRecord {
  AnnotatedRecord item;
  DropReason reason;
};

struct FilterResult {
  std::vector<AnnotatedRecord> kept;
  std::vector<DroppedRecord> dropped;
};

// Keeps records whose annotator majority equals the derived counterfactual label.
inline std::optional<DropReason> consistency_verdict(const Instance& inst,
                                                     const CounterfactualRecord& rec) {
  const auto& labels = inst.labels_for(rec.branch);
  if (labels.empty()) return DropReason::Unannotated;
  auto majority = majority_vote(labels);
  if (!majority) return DropReason::Tie;
  if (*majority != rec.y_cf) return DropReason::MajorityMismatch;
  return std::nullopt;
}

inline FilterResult filter_consistent(std::span<const AnnotatedRecord> records) {
  FilterResult out;
  for (const AnnotatedRecord& r : records) {
    if (auto reason = consistency_verdict(r.instance, r.record)) {
      out.dropped.push_back({r, *reason});
    } else {
      out.kept.push_back(r);
    }
  }
  return out;
}

}  // namespace ftc
