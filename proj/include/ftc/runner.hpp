#pragma once

// Config-file driven pipeline: resolves endpoints, cache and data files,
// then runs the pipeline against remote backends.

#include <filesystem>
#include <fstream>
#include <memory>
#include <optional>
#include <string>
#include <type_traits>

#include <nlohmann/json.hpp>

#include "ftc/cache.hpp"
#include "ftc/client.hpp"
#include "ftc/core.hpp"
#include "ftc/errors.hpp"
#include "ftc/pipeline.hpp"
#include "ftc/rewrite.hpp"
#include "ftc/sensitivity.hpp"

namespace ftc {

inline constexpr const char* kClassifierUrlEnv = "FTC_CLASSIFIER_URL";
inline constexpr const char* kGeneratorUrlEnv = "FTC_GENERATOR_URL";
inline constexpr const char* kCacheDirEnv = "FTC_CACHE_DIR";

struct PipelineConfig {
  std::string dataset_path;
  json format = json::object();  // DatasetFormatConfig document
  RewriteMode mode = RewriteMode::Hybrid;
  std::optional<std::string> counterfactuals_path;
  EndpointConfig classifier;
  std::optional<EndpointConfig> generator;
  std::optional<std::string> cache_dir;
  MetricConfig metrics;
  std::optional<std::string> patterns_path;
  std::optional<std::string> prompts_path;
  std::uint64_t seed = 0;
  int jobs = 1;
  bool collect_las_lra = true;
  double lra_noise_sigma = 0.1;

  DatasetFormatConfig dataset_format() const { return DatasetFormatConfig::from_json(format); }

  PipelineOptions options() const {
    PipelineOptions o;
    o.mode = mode;
    o.metrics = metrics;
    o.jobs = jobs;
    o.collect_las_lra = collect_las_lra;
    o.lra_noise_sigma = lra_noise_sigma;
    return o;
  }

  static EndpointConfig endpoint_from_json(const json& j) {
    EndpointConfig e;
    if (j.is_string()) {
      e.url = j.get<std::string>();
      return e;
    }
    e.url = j.value("url", std::string());
    if (j.contains("token")) e.bearer_token = j.at("token").get<std::string>();
    e.timeout_seconds = j.value("timeout_seconds", e.timeout_seconds);
    e.max_in_flight = j.value("max_in_flight", e.max_in_flight);
    if (j.contains("retry")) {
      e.retry.max_attempts = j.at("retry").value("max_attempts", e.retry.max_attempts);
      if (j.at("retry").contains("backoff_seconds"))
        e.retry.backoff_seconds = j.at("retry").at("backoff_seconds").get<std::vector<double>>();
    }
    return e;
  }

  static json endpoint_to_json(const EndpointConfig& e) {
    // the token is a secret and stays out of the hashed form
    return json{{"url", e.url},
                {"timeout_seconds", e.timeout_seconds},
                {"max_in_flight", e.max_in_flight},
                {"retry", {{"max_attempts", e.retry.max_attempts}, {"backoff_seconds", e.retry.backoff_seconds}}}};
  }

  // Relative paths are resolved against `base_dir`.
  static PipelineConfig from_json(const json& j, const std::filesystem::path& base_dir = {}) {
    PipelineConfig c;
    auto path = [&](const json& v) {
      std::filesystem::path p = v.get<std::string>();
      if (p.is_relative() && !base_dir.empty()) p = base_dir / p;
      return p.lexically_normal().string();
    };
    try {
      if (j.contains("dataset")) c.dataset_path = path(j.at("dataset"));
      c.format = j.value("format", json::object());
      c.mode = parse_rewrite_mode(j.value("mode", std::string("hybrid")));
      if (j.contains("counterfactuals")) c.counterfactuals_path = path(j.at("counterfactuals"));
      if (j.contains("classifier")) c.classifier = endpoint_from_json(j.at("classifier"));
      if (j.contains("generator")) c.generator = endpoint_from_json(j.at("generator"));
      if (j.contains("cache_dir")) c.cache_dir = path(j.at("cache_dir"));
      if (j.contains("metrics")) c.metrics.alpha = j.at("metrics").value("alpha", c.metrics.alpha);
      if (j.contains("patterns")) c.patterns_path = path(j.at("patterns"));
      if (j.contains("prompts")) c.prompts_path = path(j.at("prompts"));
      c.seed = j.value("seed", c.seed);
      c.jobs = j.value("jobs", c.jobs);
      c.collect_las_lra = j.value("las_lra", c.collect_las_lra);
      c.lra_noise_sigma = j.value("lra_noise_sigma", c.lra_noise_sigma);
    } catch (const json::exception& e) {
      throw ConfigError(std::string("pipeline config: ") + e.what());
    } catch (const ArgumentError& e) {
      throw ConfigError(std::string("pipeline config: ") + e.what());
    }
    return c;
  }

  static PipelineConfig load(const std::string& file) {
    std::ifstream in(file);
    if (!in) throw ConfigError("cannot open config '" + file + "'");
    try {
      return from_json(json::parse(in), std::filesystem::path(file).parent_path());
    } catch (const json::parse_error& e) {
      throw ConfigError("config '" + file + "': " + e.what());
    }
  }

  void apply_env_overrides() {
    classifier.url = env_or(kClassifierUrlEnv, classifier.url);
    if (const char* g = std::getenv(kGeneratorUrlEnv); g && *g) {
      if (!generator) generator = EndpointConfig{};
      generator->url = g;
    }
    if (const char* d = std::getenv(kCacheDirEnv); d && *d) cache_dir = d;
  }

  // Rewriting alone (derive, rewrite) runs without a classifier.
  void validate(bool need_classifier = true) const {
    metrics.validate();
    if (dataset_path.empty()) throw ConfigError("pipeline config: no dataset");
    auto exists = [](const std::string& p, const char* what) {
      if (!std::filesystem::exists(p)) throw ConfigError(std::string(what) + " '" + p + "' does not exist");
    };
    exists(dataset_path, "dataset");
    if (counterfactuals_path) exists(*counterfactuals_path, "counterfactual file");
    if (patterns_path) exists(*patterns_path, "pattern bank");
    if (prompts_path) exists(*prompts_path, "prompt set");
    if (need_classifier && classifier.url.empty())
      throw ConfigError(std::string("no classifier endpoint (config or ") + kClassifierUrlEnv + ")");
    if (mode == RewriteMode::Fsp && !generator)
      throw ConfigError(std::string("mode fsp needs a generator endpoint (config or ") + kGeneratorUrlEnv + ")");
    if (mode == RewriteMode::External && !counterfactuals_path)
      throw ConfigError("mode external needs a counterfactuals file");
    if (jobs < 1) throw ConfigError("jobs must be >= 1");
    (void)dataset_format();
  }

  json to_json() const {
    json j{{"dataset", dataset_path},
           {"format", format},
           {"mode", to_string(mode)},
           {"classifier", endpoint_to_json(classifier)},
           {"metrics", {{"alpha", metrics.alpha}}},
           {"seed", seed},
           {"las_lra", collect_las_lra},
           {"lra_noise_sigma", lra_noise_sigma}};
    if (counterfactuals_path) j["counterfactuals"] = *counterfactuals_path;
    if (generator) j["generator"] = endpoint_to_json(*generator);
    if (patterns_path) j["patterns"] = *patterns_path;
    if (prompts_path) j["prompts"] = *prompts_path;
    return j;
  }

  // Cache location and parallelism do not change results and are left out.
  std::string hash() const { return sha256_hex(canonical_json(to_json())); }
};

inline std::vector<Instance> load_dataset(const PipelineConfig& cfg, std::vector<RowError>* errors = nullptr) {
  std::ifstream in(cfg.dataset_path, std::ios::binary);
  if (!in) throw ConfigError("cannot open dataset '" + cfg.dataset_path + "'");
  ParseResult r = parse_instances(in, cfg.dataset_format());
  if (errors) *errors = r.errors;
  return std::move(r.instances);
}

// Owns the remote clients and cache for one run.
class PipelineRunner {
 public:
  explicit PipelineRunner(PipelineConfig cfg, bool need_classifier = true) : cfg_(std::move(cfg)) {
    cfg_.validate(need_classifier);
    if (!cfg_.classifier.url.empty()) {
      remote_classifier_ = std::make_unique<RemoteClassifier>(cfg_.classifier);
      classifier_ = remote_classifier_.get();
    }
    if (cfg_.generator) {
      remote_generator_ = std::make_unique<RemoteGenerator>(*cfg_.generator);
      generator_ = remote_generator_.get();
    }
    if (cfg_.cache_dir) {
      cache_ = std::make_unique<ResponseCache>(*cfg_.cache_dir);
      if (classifier_) {
        cached_classifier_ = std::make_unique<CachedClassifier>(*classifier_, *cache_);
        classifier_ = cached_classifier_.get();
      }
      if (generator_) {
        cached_generator_ = std::make_unique<CachedGenerator>(*generator_, *cache_);
        generator_ = cached_generator_.get();
      }
    }
    patterns_ = cfg_.patterns_path ? PatternBank::load(*cfg_.patterns_path) : PatternBank::builtin();
    prompts_ = cfg_.prompts_path ? PromptSet::load(*cfg_.prompts_path) : PromptSet::builtin();
    if (cfg_.counterfactuals_path)
      external_ = load_external_counterfactuals(*cfg_.counterfactuals_path, cfg_.dataset_format());
  }

  const PipelineConfig& config() const { return cfg_; }
  ResponseCache* cache() { return cache_.get(); }

  PipelineBackends backends() {
    PipelineBackends b;
    b.classifier = classifier_;
    b.generator = generator_;
    b.patterns = &patterns_;
    b.prompts = &prompts_;
    if (cfg_.counterfactuals_path) b.external = &external_;
    return b;
  }

  Report run(std::span<const Instance> instances) {
    Report r = with_resume_note([&] { return run_pipeline(instances, cfg_.options(), backends()); });
    r.config_hash = cfg_.hash();
    if (cache_) r.cache = cache_->stats();
    return r;
  }

  std::vector<RewriteOutcome> rewrite(std::span<const Instance> instances) {
    return with_resume_note([&] { return rewrite_instances(instances, cfg_.options(), backends()); });
  }

  SensitivityReport sensitivity(std::span<const Instance> dataset, const std::vector<ConditionedExplanationSet>& sets,
                                bool with_meteor = true) {
    return with_resume_note([&] { return sensitivity_report(dataset, sets, cfg_.options(), backends(), with_meteor); });
  }

 private:
  template <typename Fn>
  std::invoke_result_t<Fn> with_resume_note(Fn fn) {
    try {
      return fn();
    } catch (const TransportError& e) {
      std::string note = e.what();
      if (cache_) {
        note += " (responses received so far are cached in " + cache_->file().string() +
                "; re-run with the same cache to resume)";
      } else {
        note += " (no cache configured; set cache_dir to make runs resumable)";
      }
      throw TransportError(note);
    }
  }

  PipelineConfig cfg_;
  std::unique_ptr<RemoteClassifier> remote_classifier_;
  std::unique_ptr<RemoteGenerator> remote_generator_;
  std::unique_ptr<ResponseCache> cache_;
  std::unique_ptr<CachedClassifier> cached_classifier_;
  std::unique_ptr<CachedGenerator> cached_generator_;
  Classifier* classifier_ = nullptr;
  TextGenerator* generator_ = nullptr;
  PatternBank patterns_;
  PromptSet prompts_;
  ExternalCounterfactuals external_;
};

}  // namespace ftc
