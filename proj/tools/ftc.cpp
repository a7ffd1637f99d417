// ftc: command-line front end.
//
//   ftc derive      [--config run.json]          counterfactual labels only
//   ftc rewrite     --config run.json            build x_cf without classifying
//   ftc score       --config run.json            classify and score precomputed x_cf
//   ftc run         --config run.json            full pipeline
//   ftc sensitivity --config run.json --set cond=file ...
//   ftc stats       --scores s.tsv | --ratings r.tsv
//   ftc serve-mock  --mock mock.json [--port N]
//
// Exit status: 0 ok, 1 fatal (config, data, transport), 2 partial (skipped rows).

#include <csignal>
#include <fstream>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>

#include "ftc/ftc.hpp"
#include "ftc/mock_server.hpp"
#include "ftc/runner.hpp"

using namespace ftc;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitFatal = 1;
constexpr int kExitPartial = 2;

struct CommonFlags {
  std::string config;
  std::string mode;
  std::string out;
  std::string format = "tsv";
  std::optional<std::uint64_t> seed;
  std::optional<int> jobs;
  std::string cache_dir;

  void attach(CLI::App* app, bool config_required) {
    auto* c = app->add_option("--config", config, "pipeline config (JSON)");
    if (config_required) c->required();
    c->check(CLI::ExistingFile);
    app->add_option("--mode", mode, "rewrite mode: regex, fsp, hybrid, external");
    app->add_option("--out", out, "write the report here instead of stdout");
    app->add_option("--format", format, "tsv, json or markdown")->capture_default_str();
    app->add_option("--seed", seed, "run seed (recorded in the config hash)");
    app->add_option("--jobs", jobs, "instances processed in parallel");
    app->add_option("--cache-dir", cache_dir, "response cache directory");
  }

  // config file < environment < command line
  PipelineConfig load() const {
    PipelineConfig cfg = PipelineConfig::load(config);
    cfg.apply_env_overrides();
    if (!mode.empty()) cfg.mode = parse_rewrite_mode(mode);
    if (seed) cfg.seed = *seed;
    if (jobs) cfg.jobs = *jobs;
    if (!cache_dir.empty()) cfg.cache_dir = cache_dir;
    return cfg;
  }

  ReportFormat report_format() const { return parse_report_format(format); }

  void emit(const std::string& text) const {
    if (out.empty()) {
      std::cout << text;
      return;
    }
    std::ofstream f(out, std::ios::binary);
    if (!f) throw ConfigError("cannot write '" + out + "'");
    f << text;
  }
};

std::vector<Instance> read_dataset(const PipelineConfig& cfg) {
  std::vector<RowError> errors;
  auto instances = load_dataset(cfg, &errors);
  for (const RowError& e : errors)
    std::cerr << "warning: " << cfg.dataset_path << ":" << e.row << ": " << e.message << "\n";
  return instances;
}

// Plain table in any of the report formats.
std::string render_table(const std::vector<std::string>& header, const std::vector<std::vector<std::string>>& rows,
                         ReportFormat fmt) {
  std::ostringstream os;
  switch (fmt) {
    case ReportFormat::Tsv:
      for (std::size_t i = 0; i < header.size(); ++i) os << (i ? "\t" : "") << header[i];
      os << "\n";
      for (const auto& r : rows) {
        for (std::size_t i = 0; i < r.size(); ++i) os << (i ? "\t" : "") << detail::tsv_cell(r[i]);
        os << "\n";
      }
      break;
    case ReportFormat::Markdown:
      os << "|";
      for (const auto& h : header) os << " " << h << " |";
      os << "\n|";
      for (std::size_t i = 0; i < header.size(); ++i) os << "---|";
      os << "\n";
      for (const auto& r : rows) {
        os << "|";
        for (const auto& c : r) os << " " << detail::md_cell(c) << " |";
        os << "\n";
      }
      break;
    case ReportFormat::Json: {
      json arr = json::array();
      for (const auto& r : rows) {
        json o = json::object();
        for (std::size_t i = 0; i < header.size(); ++i) o[header[i]] = r[i];
        arr.push_back(o);
      }
      os << arr.dump(2) << "\n";
      break;
    }
  }
  return os.str();
}

int cmd_derive(const CommonFlags& f) {
  std::vector<std::vector<std::string>> rows;
  if (f.config.empty()) {
    for (Label l : kAllLabels)
      for (const DerivedBranch& d : derive_counterfactual_labels(l))
        rows.push_back({to_string(l), to_string(d.branch), to_string(d.y_cf)});
    f.emit(render_table({"gold", "branch", "y_cf"}, rows, f.report_format()));
    return kExitOk;
  }
  const PipelineConfig cfg = f.load();
  for (const Instance& inst : read_dataset(cfg))
    for (const DerivedBranch& d : derive_counterfactual_labels(inst.gold_label))
      rows.push_back({inst.id, to_string(inst.gold_label), to_string(d.branch), to_string(d.y_cf)});
  f.emit(render_table({"instance_id", "gold", "branch", "y_cf"}, rows, f.report_format()));
  return kExitOk;
}

// json output is JSONL in the external counterfactual format, so a rewrite
// can be edited and fed back with --mode external.
int cmd_rewrite(const CommonFlags& f) {
  PipelineRunner runner(f.load(), false);
  const auto instances = read_dataset(runner.config());
  const auto outcomes = runner.rewrite(instances);
  std::size_t skipped = 0;
  std::ostringstream jsonl;
  std::vector<std::vector<std::string>> rows;
  for (std::size_t i = 0; i < instances.size(); ++i) {
    const RewriteOutcome& o = outcomes[i];
    if (!o.ok()) {
      ++skipped;
      rows.push_back({instances[i].id, "", "", "", "", "skipped", o.reason});
      if (f.report_format() == ReportFormat::Json)
        std::cerr << "skipped " << instances[i].id << ": " << o.reason << "\n";
      continue;
    }
    for (const CounterfactualRecord& r : o.records) {
      rows.push_back({r.instance_id, to_string(r.branch), r.x_cf, to_string(r.y_cf), to_string(r.provenance),
                      "ok", ""});
      jsonl << json{{"instance_id", r.instance_id}, {"branch", to_string(r.branch)}, {"x_cf", r.x_cf},
                    {"y_cf", to_string(r.y_cf)}, {"provenance", to_string(r.provenance)}}
                   .dump()
            << "\n";
    }
  }
  if (f.report_format() == ReportFormat::Json) {
    f.emit(jsonl.str());
  } else {
    f.emit(render_table({"instance_id", "branch", "x_cf", "y_cf", "provenance", "status", "reason"}, rows,
                        f.report_format()));
  }
  return skipped ? kExitPartial : kExitOk;
}

int finish(const CommonFlags& f, const Report& r) {
  f.emit(render_report(r, f.report_format()));
  std::cerr << "scored " << r.aggregates.scored << ", skipped " << r.aggregates.skipped << ", filtered "
            << r.aggregates.filtered << " of " << r.aggregates.instances << " instances";
  if (r.cache.hits || r.cache.misses)
    std::cerr << "; cache " << r.cache.hits << " hits, " << r.cache.misses << " misses";
  std::cerr << "\n";
  return r.aggregates.skipped ? kExitPartial : kExitOk;
}

int cmd_run(const CommonFlags& f) {
  PipelineRunner runner(f.load());
  const auto instances = read_dataset(runner.config());
  return finish(f, runner.run(instances));
}

int cmd_score(const CommonFlags& f, const std::string& counterfactuals) {
  PipelineConfig cfg = f.load();
  cfg.mode = RewriteMode::External;
  if (!counterfactuals.empty()) cfg.counterfactuals_path = counterfactuals;
  PipelineRunner runner(cfg);
  const auto instances = read_dataset(runner.config());
  return finish(f, runner.run(instances));
}

int cmd_sensitivity(const CommonFlags& f, const std::vector<std::string>& set_args, bool no_meteor) {
  std::vector<ConditionedExplanationSet> sets;
  for (const std::string& a : set_args) {
    const auto eq = a.find('=');
    if (eq == std::string::npos) throw ConfigError("--set expects condition=file, got '" + a + "'");
    sets.push_back(load_explanation_set(a.substr(eq + 1), parse_ablation_condition(a.substr(0, eq))));
  }
  PipelineRunner runner(f.load());
  const auto instances = read_dataset(runner.config());
  const SensitivityReport r = runner.sensitivity(instances, sets, !no_meteor);
  f.emit(render_sensitivity(r, f.report_format()));
  for (const auto& row : r.rows)
    if (row.skipped) return kExitPartial;
  return kExitOk;
}

std::vector<std::vector<std::string>> read_tsv(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open '" + path + "'");
  std::vector<std::vector<std::string>> out;
  for (std::string line; std::getline(in, line);) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty() || line[0] == '#') continue;
    std::vector<std::string> cells;
    std::istringstream ls(line);
    for (std::string c; std::getline(ls, c, '\t');) cells.push_back(c);
    out.push_back(cells);
  }
  return out;
}

// --scores: TSV with a header containing `group` and `value`.
// --ratings: one item per line, tab-separated E/C/N labels.
int cmd_stats(const CommonFlags& f, const std::string& scores, const std::string& ratings,
              const std::string& group_a, const std::string& group_b) {
  if (scores.empty() == ratings.empty()) throw ConfigError("stats needs exactly one of --scores or --ratings");
  std::vector<std::vector<std::string>> rows;
  if (!scores.empty()) {
    const auto table = read_tsv(scores);
    if (table.empty()) throw DatasetError("'" + scores + "' is empty");
    const auto& head = table.front();
    const auto gcol = std::find(head.begin(), head.end(), "group") - head.begin();
    const auto vcol = std::find(head.begin(), head.end(), "value") - head.begin();
    if (gcol == static_cast<long>(head.size()) || vcol == static_cast<long>(head.size()))
      throw DatasetError("'" + scores + "' needs `group` and `value` columns");
    std::vector<double> a, b;
    for (std::size_t i = 1; i < table.size(); ++i) {
      const auto& r = table[i];
      if (r.size() <= static_cast<std::size_t>(std::max(gcol, vcol)))
        throw DatasetError(scores + ":" + std::to_string(i + 1) + ": short row");
      double v = 0.0;
      try {
        std::size_t used = 0;
        v = std::stod(r[vcol], &used);
        if (used != r[vcol].size()) throw std::invalid_argument("trailing");
      } catch (const std::exception&) {
        throw DatasetError(scores + ":" + std::to_string(i + 1) + ": bad value '" + r[vcol] + "'");
      }
      if (r[gcol] == group_a) a.push_back(v);
      else if (r[gcol] == group_b) b.push_back(v);
    }
    const RankSumResult res = rank_sum(a, b);
    rows.push_back({"n_a", std::to_string(res.n_a)});
    rows.push_back({"n_b", std::to_string(res.n_b)});
    rows.push_back({"u", detail::fmt4(res.u_statistic)});
    rows.push_back({"z", detail::fmt4(res.z_score)});
    rows.push_back({"p", detail::fmt4(res.p_value)});
    rows.push_back({"rho", detail::fmt4(res.rho)});
  } else {
    std::vector<std::vector<Label>> items;
    for (const auto& r : read_tsv(ratings)) {
      std::vector<Label> labels;
      for (const auto& c : r) labels.push_back(parse_label_code(c));
      items.push_back(labels);
    }
    if (items.empty()) throw DatasetError("'" + ratings + "' is empty");
    const KappaResult k = fleiss_kappa(label_count_matrix(items), static_cast<int>(items.front().size()));
    rows.push_back({"items", std::to_string(items.size())});
    rows.push_back({"raters", std::to_string(items.front().size())});
    rows.push_back({"observed_agreement", detail::fmt4(k.observed_agreement)});
    rows.push_back({"chance_agreement", detail::fmt4(k.chance_agreement)});
    rows.push_back({"kappa", detail::fmt4(k.kappa)});
  }
  f.emit(render_table({"statistic", "value"}, rows, f.report_format()));
  return kExitOk;
}

int cmd_serve_mock(const std::string& mock_file, const std::string& host, int port,
                   std::optional<std::uint64_t> seed) {
  MockConfig mc = MockConfig::from_json(MockConfig::read_json_file(mock_file),
                                        std::filesystem::path(mock_file).parent_path());
  if (seed) mc.oracle.seed = *seed;
  // block the signals before the server threads exist so only sigwait sees them
  sigset_t sigs;
  sigemptyset(&sigs);
  sigaddset(&sigs, SIGINT);
  sigaddset(&sigs, SIGTERM);
  pthread_sigmask(SIG_BLOCK, &sigs, nullptr);
  MockServer server(std::move(mc));
  server.start(host, port);
  std::cout << server.url() << std::endl;
  int sig = 0;
  sigwait(&sigs, &sig);
  server.stop();
  return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Counterfactual faithfulness scoring for NLI explanations"};
  app.require_subcommand(1);

  CommonFlags derive_f, rewrite_f, score_f, run_f, sens_f, stats_f;
  auto* derive = app.add_subcommand("derive", "counterfactual labels per instance (or the table)");
  derive_f.attach(derive, false);
  auto* rewrite = app.add_subcommand("rewrite", "construct counterfactual hypotheses");
  rewrite_f.attach(rewrite, true);
  auto* score = app.add_subcommand("score", "classify and score precomputed counterfactuals");
  score_f.attach(score, true);
  std::string counterfactuals;
  score->add_option("--counterfactuals", counterfactuals, "JSONL counterfactual file")->check(CLI::ExistingFile);
  auto* run = app.add_subcommand("run", "full pipeline: rewrite, classify, score, aggregate");
  run_f.attach(run, true);

  auto* sens = app.add_subcommand("sensitivity", "compare explanation conditions");
  sens_f.attach(sens, true);
  std::vector<std::string> sets;
  bool no_meteor = false;
  sens->add_option("--set", sets, "condition=file, one per condition (full_yxu, y_only, x_only, u_only)")
      ->required();
  sens->add_flag("--no-meteor", no_meteor, "skip the METEOR column");

  auto* stats = app.add_subcommand("stats", "rank-sum test or Fleiss' kappa on a file");
  stats->add_option("--out", stats_f.out, "write here instead of stdout");
  stats->add_option("--format", stats_f.format, "tsv, json or markdown")->capture_default_str();
  std::string scores, ratings, group_a = "agree", group_b = "disagree";
  stats->add_option("--scores", scores, "TSV with group and value columns")->check(CLI::ExistingFile);
  stats->add_option("--ratings", ratings, "TSV, one item per line of E/C/N labels")->check(CLI::ExistingFile);
  stats->add_option("--group-a", group_a, "first group name")->capture_default_str();
  stats->add_option("--group-b", group_b, "second group name")->capture_default_str();

  auto* serve = app.add_subcommand("serve-mock", "serve the mock classifier/generator until interrupted");
  std::string mock_file, host = "127.0.0.1";
  int port = 0;
  std::optional<std::uint64_t> mock_seed;
  serve->add_option("--mock", mock_file, "mock config (JSON)")->required()->check(CLI::ExistingFile);
  serve->add_option("--host", host)->capture_default_str();
  serve->add_option("--port", port, "0 picks a free port")->capture_default_str();
  serve->add_option("--seed", mock_seed, "oracle noise seed");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kExitOk : kExitFatal;
  }

  try {
    if (*derive) return cmd_derive(derive_f);
    if (*rewrite) return cmd_rewrite(rewrite_f);
    if (*score) return cmd_score(score_f, counterfactuals);
    if (*run) return cmd_run(run_f);
    if (*sens) return cmd_sensitivity(sens_f, sets, no_meteor);
    if (*stats) return cmd_stats(stats_f, scores, ratings, group_a, group_b);
    if (*serve) return cmd_serve_mock(mock_file, host, port, mock_seed);
  } catch (const std::exception& e) {
    std::cerr << "ftc: " << e.what() << "\n";
    return kExitFatal;
  }
  return kExitFatal;
}
