#pragma once

// rewrite -> classify -> score, plus the aggregate statistics.

#include <atomic>
#include <exception>
#include <fstream>
#include <map>
#include <mutex>
#include <optional>
#include <span>
#include <string>
#include <thread>
#include <utility>
#include <vector>

#include <nlohmann/json.hpp>

#include "ftc/core.hpp"
#include "ftc/errors.hpp"
#include "ftc/freelogic.hpp"
#include "ftc/metrics.hpp"
#include "ftc/protocol.hpp"
#include "ftc/report.hpp"
#include "ftc/rewrite.hpp"
#include "ftc/stats.hpp"

namespace ftc {

enum class RewriteMode : std::uint8_t { Regex, Fsp, Hybrid, External };

inline std::string to_string(RewriteMode m) {
  switch (m) {
    case RewriteMode::Regex: return "regex";
    case RewriteMode::Fsp: return "fsp";
    case RewriteMode::Hybrid: return "hybrid";
    case RewriteMode::External: return "external";
  }
  return {};
}

inline RewriteMode parse_rewrite_mode(std::string_view s) {
  if (s == "regex") return RewriteMode::Regex;
  if (s == "fsp") return RewriteMode::Fsp;
  if (s == "hybrid") return RewriteMode::Hybrid;
  if (s == "external") return RewriteMode::External;
  throw ArgumentError("unknown rewrite mode '" + std::string(s) + "'");
}

// Precomputed counterfactual, e.g. written by annotators.
struct ExternalCounterfactual {
  std::string instance_id;
  Branch branch = Branch::Main;
  std::string x_cf;
  std::vector<Label> annotator_labels;
};

using ExternalCounterfactuals = std::map<std::pair<std::string, Branch>, ExternalCounterfactual>;

// JSONL of {"instance_id", "branch", "x_cf", "annotator_labels"?}.
inline ExternalCounterfactuals parse_external_counterfactuals(std::istream& in,
                                                              const DatasetFormatConfig& labels = {}) {
  ExternalCounterfactuals out;
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (text::trim(line).empty()) continue;
    try {
      const json j = json::parse(line);
      ExternalCounterfactual e;
      e.instance_id = j.at("instance_id").get<std::string>();
      e.branch = parse_branch(j.at("branch").get<std::string>());
      e.x_cf = j.at("x_cf").get<std::string>();
      if (text::trim(e.x_cf).empty()) throw ArgumentError("empty x_cf");
      for (const auto& l : j.value("annotator_labels", json::array())) {
        auto label = labels.resolve_label(l.get<std::string>());
        if (!label) throw ArgumentError("unknown label '" + l.get<std::string>() + "'");
        e.annotator_labels.push_back(*label);
      }
      auto key = std::make_pair(e.instance_id, e.branch);
      if (!out.emplace(key, std::move(e)).second) throw ArgumentError("duplicate (instance_id, branch)");
    } catch (const std::exception& e) {
      throw DatasetError("counterfactual file line " + std::to_string(lineno) + ": " + e.what());
    }
  }
  return out;
}

inline ExternalCounterfactuals load_external_counterfactuals(const std::string& path,
                                                             const DatasetFormatConfig& labels = {}) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open counterfactual file '" + path + "'");
  return parse_external_counterfactuals(in, labels);
}

struct PipelineOptions {
  RewriteMode mode = RewriteMode::Hybrid;
  MetricConfig metrics;
  int jobs = 1;
  bool collect_las_lra = true;
  double lra_noise_sigma = 0.1;
  FspOptions fsp;
};

struct PipelineBackends {
  Classifier* classifier = nullptr;
  TextGenerator* generator = nullptr;  // required for fsp, optional for hybrid
  const PatternBank* patterns = nullptr;
  const PromptSet* prompts = nullptr;
  FspTemplates templates;
  const ExternalCounterfactuals* external = nullptr;
};

namespace detail {

struct InstanceOutcome {
  std::vector<ReportRow> rows;
  std::optional<LasRow> las;
  std::optional<LraRow> lra;
  // (row index, majority label) for annotated scored rows, used for rank-sum
  std::vector<std::pair<std::size_t, Label>> annotated;
  std::vector<std::vector<Label>> kappa_items;
};

inline RewriteOutcome rewrite_for_mode(const Instance& inst, const PipelineOptions& opts,
                                       PipelineBackends& b, Instance& annotated_copy) {
  switch (opts.mode) {
    case RewriteMode::Regex: return regex_rewrite(inst, *b.patterns);
    case RewriteMode::Fsp: return fsp_rewrite(inst, *b.generator, *b.prompts, b.templates, opts.fsp);
    case RewriteMode::Hybrid: {
      RewriteOutcome r = regex_rewrite(inst, *b.patterns);
      if (r.ok() || !b.generator) return r;
      RewriteOutcome f = fsp_rewrite(inst, *b.generator, *b.prompts, b.templates, opts.fsp);
      if (!f.ok()) f.reason = r.reason + "; fsp: " + f.reason;
      return f;
    }
    case RewriteMode::External: {
      RewriteOutcome out;
      for (const DerivedBranch& d : derive_counterfactual_labels(inst.gold_label)) {
        auto it = b.external->find({inst.id, d.branch});
        if (it == b.external->end()) return RewriteOutcome::failure("no-external-counterfactual");
        out.records.push_back({inst.id, d.branch, it->second.x_cf, d.y_cf, Provenance::Human, std::nullopt});
        if (!it->second.annotator_labels.empty())
          annotated_copy.branch_annotator_labels[d.branch] = it->second.annotator_labels;
      }
      return out;
    }
  }
  return RewriteOutcome::failure("unknown-mode");
}

inline InstanceOutcome process_instance(const Instance& original, const PipelineOptions& opts,
                                        PipelineBackends& b, bool annotated_dataset) {
  InstanceOutcome out;
  Instance inst = original;
  const RewriteOutcome rw = rewrite_for_mode(original, opts, b, inst);

  if (!rw.ok()) {
    ReportRow row;
    row.instance_id = inst.id;
    row.gold_label = inst.gold_label;
    row.status = RowStatus::Skipped;
    row.reason = rw.reason;
    out.rows.push_back(std::move(row));
  } else {
    bool filtered = false;
    std::string filter_reason;
    for (const CounterfactualRecord& rec : rw.records) {
      if (!inst.labels_for(rec.branch).empty()) {
        out.kappa_items.push_back(inst.labels_for(rec.branch));
      }
      if (annotated_dataset) {
        if (auto why = consistency_verdict(inst, rec); why && !filtered) {
          filtered = true;
          filter_reason = to_string(rec.branch) + ": " + to_string(*why);
        }
      }
    }
    for (const CounterfactualRecord& rec : rw.records) {
      ReportRow row;
      row.instance_id = inst.id;
      row.gold_label = inst.gold_label;
      row.branch = rec.branch;
      row.x_cf = rec.x_cf;
      row.y_cf = rec.y_cf;
      row.provenance = rec.provenance;
      ClassifyRequest req{inst.premise_ref, rec.x_cf, Condition::X, std::nullopt, std::nullopt};
      const LabelDistribution p = b.classifier->classify(req);
      row.pred = p;
      row.ftc_delta = ftc_delta(p, rec.y_cf, opts.metrics);
      row.ftc_kl = ftc_kl(p, rec.y_cf, opts.metrics);
      row.ftc_w = ftc_wasserstein(p, rec.y_cf, opts.metrics);
      if (filtered) {
        row.status = RowStatus::Filtered;
        row.reason = filter_reason;
      } else if (annotated_dataset) {
        out.annotated.emplace_back(out.rows.size(), *majority_vote(inst.labels_for(rec.branch)));
      }
      out.rows.push_back(std::move(row));
    }
  }

  if (opts.collect_las_lra) {
    const Label target = inst.gold_label;
    auto ask = [&](Condition c, std::optional<double> sigma) {
      ClassifyRequest req{inst.premise_ref, inst.hypothesis, c,
                          c == Condition::X ? std::nullopt : std::optional(inst.explanation), sigma};
      return b.classifier->classify(req).argmax();
    };
    const Label with_x = ask(Condition::X, std::nullopt);
    const Label with_xe = ask(Condition::XAndE, std::nullopt);
    const Label with_e = ask(Condition::EOnly, std::nullopt);
    const Label noisy = ask(Condition::X, opts.lra_noise_sigma);
    LasRow las{with_xe == target, with_x == target, with_e == target};
    out.las = las;
    out.lra = LraRow{noisy == with_x ? 1 : 0, las.correct_with_x_and_e - las.correct_with_x};
  }
  return out;
}

inline std::optional<double> mean_of(const std::vector<double>& v) {
  if (v.empty()) return std::nullopt;
  double s = 0.0;
  for (double x : v) s += x;
  return s / static_cast<double>(v.size());
}

// Runs fn(0..n-1) on up to `jobs` threads. The first exception stops the
// remaining work and is rethrown.
template <typename Fn>
void parallel_for(std::size_t n, int jobs, Fn fn) {
  std::atomic<std::size_t> next{0};
  std::exception_ptr failure;
  std::mutex failure_mu;
  auto worker = [&] {
    for (;;) {
      const std::size_t i = next.fetch_add(1);
      if (i >= n) return;
      try {
        fn(i);
      } catch (...) {
        std::lock_guard lock(failure_mu);
        if (!failure) failure = std::current_exception();
        next = n;
        return;
      }
    }
  };
  const auto threads = std::min<std::size_t>(static_cast<std::size_t>(std::max(jobs, 1)), n);
  if (threads <= 1) {
    worker();
  } else {
    std::vector<std::thread> pool;
    for (std::size_t t = 0; t < threads; ++t) pool.emplace_back(worker);
    for (auto& th : pool) th.join();
  }
  if (failure) std::rethrow_exception(failure);
}

}  // namespace detail

// Counterfactual construction only, no classification. Results are in input order.
inline std::vector<RewriteOutcome> rewrite_instances(std::span<const Instance> instances,
                                                     const PipelineOptions& opts, PipelineBackends backends) {
  if (!backends.patterns) backends.patterns = &PatternBank::builtin();
  if (!backends.prompts) backends.prompts = &PromptSet::builtin();
  if (opts.mode == RewriteMode::Fsp && !backends.generator)
    throw ConfigError("rewrite: mode fsp needs a generator endpoint");
  if (opts.mode == RewriteMode::External && !backends.external)
    throw ConfigError("rewrite: mode external needs a counterfactual file");
  if (opts.jobs < 1) throw ConfigError("rewrite: jobs must be >= 1");
  std::vector<RewriteOutcome> out(instances.size());
  detail::parallel_for(instances.size(), opts.jobs, [&](std::size_t i) {
    Instance scratch = instances[i];
    out[i] = detail::rewrite_for_mode(instances[i], opts, backends, scratch);
  });
  return out;
}

inline Report run_pipeline(std::span<const Instance> instances, const PipelineOptions& opts,
                           PipelineBackends backends) {
  opts.metrics.validate();
  if (!backends.classifier) throw ConfigError("pipeline: no classifier configured");
  if (!backends.patterns) backends.patterns = &PatternBank::builtin();
  if (!backends.prompts) backends.prompts = &PromptSet::builtin();
  if (opts.mode == RewriteMode::Fsp && !backends.generator)
    throw ConfigError("pipeline: rewrite mode fsp needs a generator endpoint");
  if (opts.mode == RewriteMode::External && !backends.external)
    throw ConfigError("pipeline: rewrite mode external needs a counterfactual file");
  if (opts.jobs < 1) throw ConfigError("pipeline: jobs must be >= 1");
  if (!(opts.lra_noise_sigma >= 0.0)) throw ConfigError("pipeline: lra_noise_sigma must be >= 0");

  bool annotated = false;
  for (const Instance& i : instances)
    if (!i.annotator_labels.empty() || !i.branch_annotator_labels.empty()) annotated = true;
  if (backends.external)
    for (const auto& [key, e] : *backends.external)
      if (!e.annotator_labels.empty()) annotated = true;

  std::vector<detail::InstanceOutcome> outcomes(instances.size());
  detail::parallel_for(instances.size(), opts.jobs, [&](std::size_t i) {
    outcomes[i] = detail::process_instance(instances[i], opts, backends, annotated);
  });

  Report report;
  Aggregates& agg = report.aggregates;
  agg.instances = instances.size();
  std::vector<LasRow> las_rows;
  std::vector<LraRow> lra_rows;
  std::vector<std::vector<Label>> kappa_items;
  std::map<std::string, std::map<FtcVariant, std::vector<double>>> inst_scores;
  struct Annotated {
    std::size_t row;
    Label majority;
  };
  std::vector<Annotated> annotated_rows;

  for (std::size_t i = 0; i < outcomes.size(); ++i) {
    auto& o = outcomes[i];
    const std::size_t base = report.rows.size();
    const RowStatus status = o.rows.front().status;
    if (status == RowStatus::Scored) ++agg.scored;
    if (status == RowStatus::Skipped) ++agg.skipped;
    if (status == RowStatus::Filtered) ++agg.filtered;
    if (status == RowStatus::Scored) {
      const std::string cls = to_string(instances[i].gold_label);
      for (FtcVariant v : kAllVariants) {
        double s = 0.0;
        for (const auto& r : o.rows) s += *r.score(v);
        s /= static_cast<double>(o.rows.size());
        inst_scores[cls][v].push_back(s);
        inst_scores["all"][v].push_back(s);
      }
    }
    for (const auto& [row, majority] : o.annotated) annotated_rows.push_back({base + row, majority});
    for (auto& k : o.kappa_items) kappa_items.push_back(std::move(k));
    if (o.las) las_rows.push_back(*o.las);
    if (o.lra) lra_rows.push_back(*o.lra);
    for (auto& r : o.rows) report.rows.push_back(std::move(r));
  }

  for (const char* scope : kScopes)
    for (FtcVariant v : kAllVariants) agg.ftc_means[scope][v] = detail::mean_of(inst_scores[scope][v]);

  if (!las_rows.empty()) agg.las = las_scores(las_rows);
  if (!lra_rows.empty()) agg.lra = lra_score(lra_rows);

  if (annotated) {
    for (const char* scope : kScopes) {
      for (FtcVariant v : kAllVariants) {
        std::vector<double> agree;
        std::vector<double> disagree;
        for (const Annotated& a : annotated_rows) {
          const ReportRow& r = report.rows[a.row];
          if (std::string(scope) != "all" && to_string(r.gold_label) != scope) continue;
          (r.pred->argmax() == a.majority ? agree : disagree).push_back(*r.score(v));
        }
        RankSumEntry e{scope, v, agree.size(), disagree.size(), std::nullopt};
        if (!agree.empty() && !disagree.empty()) e.result = rank_sum(agree, disagree);
        agg.rank_sums.push_back(std::move(e));
      }
    }
    // Fleiss needs a fixed rater count; items are grouped by the most common one.
    std::map<std::size_t, std::size_t> sizes;
    for (const auto& k : kappa_items) ++sizes[k.size()];
    std::size_t raters = 0;
    std::size_t best = 0;
    for (const auto& [n, c] : sizes)
      if (c > best) {
        best = c;
        raters = n;
      }
    if (raters >= 2) {
      std::vector<std::vector<Label>> same;
      for (const auto& k : kappa_items)
        if (k.size() == raters) same.push_back(k);
      agg.kappa = fleiss_kappa(label_count_matrix(same), static_cast<int>(raters));
    }
  }
  return report;
}

}  // namespace ftc
