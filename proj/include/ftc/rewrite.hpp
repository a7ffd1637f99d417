#pragma once

// Extract-and-transform engine for counterfactual hypotheses: a rule-based
// regex path and a two-step few-shot priming path through a text generator.

#include <fstream>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include <boost/regex.hpp>
#include <nlohmann/json.hpp>

#include "ftc/core.hpp"
#include "ftc/default_data.hpp"
#include "ftc/errors.hpp"
#include "ftc/freelogic.hpp"
#include "ftc/protocol.hpp"
#include "ftc/text.hpp"

namespace ftc {

// ---------------------------------------------------------------------------
// Pattern bank

enum class SpanNormalization : std::uint8_t { Articles, Punctuation };

inline std::string normalize_span(std::string_view span, const std::vector<SpanNormalization>& steps) {
  std::string s(text::trim(span));
  for (SpanNormalization step : steps) {
    if (step == SpanNormalization::Punctuation) {
      while (!s.empty() && std::string_view(".,;:!?\"'").find(s.back()) != std::string_view::npos)
        s.pop_back();
      while (!s.empty() && (s.front() == '"' || s.front() == '\'')) s.erase(0, 1);
      s = std::string(text::trim(s));
    } else {
      const auto words = text::split_whitespace(s);
      if (words.size() > 1 && detail::is_article(words.front()) && !text::iequals(words.front(), "some"))
        s = std::string(text::trim(std::string_view(s).substr(words.front().size())));
    }
  }
  return s;
}

struct PatternRule {
  std::string id;
  Label label_class = Label::E;
  std::string match_template;
  std::vector<SpanNormalization> normalize{SpanNormalization::Articles,
                                           SpanNormalization::Punctuation};
  boost::regex compiled;

  static PatternRule make(std::string id, Label label, std::string pattern,
                          std::vector<SpanNormalization> normalize = {
                              SpanNormalization::Articles, SpanNormalization::Punctuation}) {
    PatternRule r;
    r.id = std::move(id);
    r.label_class = label;
    r.match_template = std::move(pattern);
    r.normalize = std::move(normalize);
    if (r.match_template.find("(?<A>") == std::string::npos ||
        r.match_template.find("(?<B>") == std::string::npos)
      throw ConfigError("pattern '" + r.id + "' must define named groups A and B");
    try {
      r.compiled = boost::regex(r.match_template, boost::regex::perl | boost::regex::icase);
    } catch (const boost::regex_error& e) {
      throw ConfigError("pattern '" + r.id + "' does not compile: " + e.what());
    }
    return r;
  }

  std::optional<SpanPair> apply(std::string_view explanation) const {
    boost::match_results<std::string_view::const_iterator> m;
    if (!boost::regex_match(explanation.begin(), explanation.end(), m, compiled)) return std::nullopt;
    const std::string a = normalize_span(m["A"].str(), normalize);
    const std::string b = normalize_span(m["B"].str(), normalize);
    if (a.empty() || b.empty()) return std::nullopt;
    return SpanPair(a, b, SpanSource::Regex, id);
  }
};

class PatternBank {
 public:
  PatternBank() = default;
  explicit PatternBank(std::vector<PatternRule> rules) : rules_(std::move(rules)) {}

  // JSON array of {"id", "label", "pattern", "normalize"?}.
  static PatternBank from_json(const json& j) {
    if (!j.is_array()) throw ConfigError("pattern bank must be a JSON array");
    std::vector<PatternRule> rules;
    std::set<std::string> ids;
    try {
      for (const json& r : j) {
        std::vector<SpanNormalization> norm;
        if (r.contains("normalize")) {
          for (const auto& n : r.at("normalize")) {
            const auto s = n.get<std::string>();
            if (s == "articles") {
              norm.push_back(SpanNormalization::Articles);
            } else if (s == "punctuation") {
              norm.push_back(SpanNormalization::Punctuation);
            } else {
              throw ConfigError("unknown normalization '" + s + "'");
            }
          }
        } else {
          norm = {SpanNormalization::Articles, SpanNormalization::Punctuation};
        }
        rules.push_back(PatternRule::make(r.at("id").get<std::string>(),
                                          parse_label_code(r.at("label").get<std::string>()),
                                          r.at("pattern").get<std::string>(), std::move(norm)));
        if (!ids.insert(rules.back().id).second)
          throw ConfigError("duplicate pattern id '" + rules.back().id + "'");
      }
    } catch (const json::exception& e) {
      throw ConfigError(std::string("pattern bank: ") + e.what());
    } catch (const ArgumentError& e) {
      throw ConfigError(std::string("pattern bank: ") + e.what());
    }
    return PatternBank(std::move(rules));
  }

  static PatternBank load(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open pattern bank '" + path + "'");
    try {
      return from_json(json::parse(in));
    } catch (const json::parse_error& e) {
      throw ConfigError("pattern bank '" + path + "': " + e.what());
    }
  }

  static const PatternBank& builtin() {
    static const PatternBank bank = from_json(json::parse(kDefaultPatternBankJson));
    return bank;
  }

  const std::vector<PatternRule>& rules() const { return rules_; }

  // First rule of the label class that matches, in declaration order.
  std::optional<SpanPair> extract(std::string_view explanation, Label label) const {
    for (const PatternRule& r : rules_) {
      if (r.label_class != label) continue;
      if (auto pair = r.apply(explanation)) return pair;
    }
    return std::nullopt;
  }

 private:
  std::vector<PatternRule> rules_;
};

inline std::optional<SpanPair> regex_extract(std::string_view explanation, Label label,
                                             const PatternBank& bank = PatternBank::builtin()) {
  return bank.extract(explanation, label);
}

// Records for one instance, or an empty list plus a machine-readable reason.
struct RewriteOutcome {
  std::vector<CounterfactualRecord> records;
  std::string reason;

  bool ok() const { return !records.empty(); }

  static RewriteOutcome failure(std::string why) { return {{}, std::move(why)}; }
};

namespace reason {
inline constexpr const char* kNoPatternMatch = "no-pattern-match";
inline constexpr const char* kSubstitutionFailed = "substitution-failed";
inline constexpr const char* kEmptyGeneration = "empty-generation";
inline constexpr const char* kUnparseableExtraction = "unparseable-extraction";
inline constexpr const char* kEmptyTransform = "empty-transform";
inline constexpr const char* kGeneratorRejected = "generator-rejected";
}  // namespace reason

// Builds every derived branch from a span pair with the deterministic
// surface rules. All-or-nothing: a failing branch empties the outcome.
inline RewriteOutcome rewrite_with_spans(const Instance& inst, const SpanPair& pair,
                                         Provenance provenance) {
  RewriteOutcome out;
  for (const DerivedBranch& d : derive_counterfactual_labels(inst.gold_label)) {
    std::string x_cf;
    try {
      if (d.branch == Branch::Main) {
        try {
          x_cf = substitute_span(inst.hypothesis, pair, false);
        } catch (const NoMatchError&) {
          x_cf = substitute_span(inst.hypothesis, pair, true);
        }
      } else {
        x_cf = neutral_branch_rewrite(inst.hypothesis, pair, d.branch);
      }
    } catch (const NoMatchError&) {
      return RewriteOutcome::failure(reason::kSubstitutionFailed);
    }
    out.records.push_back({inst.id, d.branch, std::move(x_cf), d.y_cf, provenance, pair.pattern_id});
  }
  return out;
}

inline RewriteOutcome regex_rewrite(const Instance& inst,
                                    const PatternBank& bank = PatternBank::builtin()) {
  auto pair = bank.extract(inst.explanation, inst.gold_label);
  if (!pair) return RewriteOutcome::failure(reason::kNoPatternMatch);
  return rewrite_with_spans(inst, *pair, Provenance::Regex);
}

// ---------------------------------------------------------------------------
// Few-shot priming

struct PromptExample {
  std::string hypothesis;
  std::string explanation;
  std::string a;
  std::string b;
  std::string counterfactual;                     // main or A_branch rewrite
  std::optional<std::string> counterfactual_negb;  // negB_branch rewrite (neutral primes)
};

struct PromptSet {
  std::map<Label, std::vector<PromptExample>> primes;

  const std::vector<PromptExample>& for_label(Label l) const {
    auto it = primes.find(l);
    if (it == primes.end() || it->second.empty())
      throw ConfigError("prompt set has no primes for label " + to_string(l));
    return it->second;
  }

  void validate() const {
    for (Label l : kAllLabels) (void)for_label(l);
  }

  // {"E": [...], "C": [...], "N": [...]} of
  // {hypothesis, explanation, a, b, counterfactual, counterfactual_negb?}.
  static PromptSet from_json(const json& j) {
    PromptSet set;
    try {
      for (const auto& [key, arr] : j.items()) {
        DatasetFormatConfig aliases;
        auto label = aliases.resolve_label(key);
        if (!label) throw ConfigError("prompt set: unknown label key '" + key + "'");
        auto& dest = set.primes[*label];
        for (const json& p : arr) {
          PromptExample ex;
          ex.hypothesis = p.at("hypothesis").get<std::string>();
          ex.explanation = p.at("explanation").get<std::string>();
          ex.a = p.at("a").get<std::string>();
          ex.b = p.at("b").get<std::string>();
          ex.counterfactual = p.at("counterfactual").get<std::string>();
          if (p.contains("counterfactual_negb"))
            ex.counterfactual_negb = p.at("counterfactual_negb").get<std::string>();
          dest.push_back(std::move(ex));
        }
      }
    } catch (const json::exception& e) {
      throw ConfigError(std::string("prompt set: ") + e.what());
    }
    set.validate();
    return set;
  }

  static PromptSet load(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open prompt set '" + path + "'");
    try {
      return from_json(json::parse(in));
    } catch (const json::parse_error& e) {
      throw ConfigError("prompt set '" + path + "': " + e.what());
    }
  }

  static const PromptSet& builtin() {
    static const PromptSet set = from_json(json::parse(kDefaultPromptSetJson));
    return set;
  }
};

enum class PromptStage : std::uint8_t { Extract, Transform };

// A prime renders as input_pattern + answer_pattern + stop + separator; the
// query renders as input_pattern alone, leaving the answer slot to the
// generator. Placeholders: {hypothesis} {explanation} {a} {b}
// {counterfactual} {label} {branch}.
struct PromptTemplate {
  PromptStage stage = PromptStage::Extract;
  std::string header;
  std::string example_separator = "\n";
  std::string input_pattern;
  std::string answer_pattern;
  std::string stop = "\n";
  std::size_t word_budget = 900;

  static PromptTemplate default_extract() {
    PromptTemplate t;
    t.stage = PromptStage::Extract;
    t.header =
        "Extract the two logical spans A and B that the explanation relates. A appears in the "
        "hypothesis.\n\n";
    t.input_pattern = "Hypothesis: {hypothesis}\nExplanation: {explanation}\nSpans: ";
    t.answer_pattern = "A: {a} | B: {b}";
    return t;
  }

  static PromptTemplate default_transform() {
    PromptTemplate t;
    t.stage = PromptStage::Transform;
    t.header = "Rewrite the hypothesis so that it expresses the extracted spans.\n\n";
    t.input_pattern =
        "Hypothesis: {hypothesis}\nA: {a} | B: {b}\nGoal: {branch}\nRewrite: ";
    t.answer_pattern = "{counterfactual}";
    return t;
  }
};

struct PromptText {
  std::string text;
  std::size_t word_count = 0;
  std::size_t primes_used = 0;
};

struct PromptQuery {
  const Instance* instance = nullptr;
  std::optional<SpanPair> spans;  // required for the transform stage
  Branch branch = Branch::Main;
};

namespace detail {

inline std::string render(std::string_view pattern, const std::map<std::string, std::string>& slots) {
  std::string out;
  std::size_t i = 0;
  while (i < pattern.size()) {
    if (pattern[i] == '{') {
      const auto close = pattern.find('}', i);
      if (close != std::string_view::npos) {
        const std::string key(pattern.substr(i + 1, close - i - 1));
        if (auto it = slots.find(key); it != slots.end()) {
          out += it->second;
          i = close + 1;
          continue;
        }
      }
    }
    out += pattern[i++];
  }
  return out;
}

inline std::string branch_goal(Branch b) {
  switch (b) {
    case Branch::Main: return "replace A with B";
    case Branch::ABranch: return "keep A, drop B";
    case Branch::NegBBranch: return "drop A, negate B";
  }
  return {};
}

}  // namespace detail

// Header, primes in order, then the query with an empty answer slot. Primes
// are dropped from the end until the prompt fits the word budget; the query
// is never dropped.
inline PromptText build_prompt(PromptStage stage, const PromptSet& prompts,
                               const PromptTemplate& tmpl, const PromptQuery& query) {
  if (!query.instance) throw ArgumentError("build_prompt: query has no instance");
  if (stage == PromptStage::Transform && !query.spans)
    throw ArgumentError("build_prompt: transform stage needs a span pair");
  const Instance& inst = *query.instance;
  const auto& primes = prompts.for_label(inst.gold_label);

  std::vector<std::string> rendered;
  rendered.reserve(primes.size());
  for (const PromptExample& ex : primes) {
    std::string cf = ex.counterfactual;
    if (stage == PromptStage::Transform && query.branch == Branch::NegBBranch) {
      if (!ex.counterfactual_negb)
        throw ConfigError("prime '" + ex.hypothesis + "' lacks counterfactual_negb");
      cf = *ex.counterfactual_negb;
    }
    const std::map<std::string, std::string> slots{
        {"hypothesis", ex.hypothesis}, {"explanation", ex.explanation},
        {"a", ex.a},                   {"b", ex.b},
        {"counterfactual", cf},        {"label", to_string(inst.gold_label)},
        {"branch", detail::branch_goal(query.branch)}};
    rendered.push_back(detail::render(tmpl.input_pattern, slots) +
                       detail::render(tmpl.answer_pattern, slots) + tmpl.stop +
                       tmpl.example_separator);
  }

  std::map<std::string, std::string> qslots{{"hypothesis", inst.hypothesis},
                                            {"explanation", inst.explanation},
                                            {"label", to_string(inst.gold_label)},
                                            {"branch", detail::branch_goal(query.branch)}};
  if (query.spans) {
    qslots["a"] = query.spans->a;
    qslots["b"] = query.spans->b;
  }
  const std::string query_text = detail::render(tmpl.input_pattern, qslots);

  std::size_t fixed = text::word_count(tmpl.header) + text::word_count(query_text);
  std::size_t used = 0;
  std::size_t words = fixed;
  for (const auto& r : rendered) {
    const std::size_t w = text::word_count(r);
    if (words + w > tmpl.word_budget) break;
    words += w;
    ++used;
  }

  PromptText out;
  out.text = tmpl.header;
  for (std::size_t i = 0; i < used; ++i) out.text += rendered[i];
  out.text += query_text;
  out.word_count = text::word_count(out.text);
  out.primes_used = used;
  return out;
}

// Parses "A: <span> | B: <span>".
inline std::optional<std::pair<std::string, std::string>> parse_extraction(std::string_view raw) {
  static const boost::regex grammar(R"(^\s*A:\s*(.*?)\s*\|\s*B:\s*(.*?)\s*$)", boost::regex::perl);
  boost::match_results<std::string_view::const_iterator> m;
  if (!boost::regex_match(raw.begin(), raw.end(), m, grammar)) return std::nullopt;
  std::string a(text::trim(m[1].str()));
  std::string b(text::trim(m[2].str()));
  if (a.empty() || b.empty()) return std::nullopt;
  if (a.find('|') != std::string::npos || b.find('|') != std::string::npos) return std::nullopt;
  return std::make_pair(std::move(a), std::move(b));
}

struct FspTemplates {
  PromptTemplate extract = PromptTemplate::default_extract();
  PromptTemplate transform = PromptTemplate::default_transform();
};

struct FspOptions {
  int max_tokens = 64;
  double temperature = 0.0;
};

// Step 1 asks the generator for the span pair, step 2 for each branch's
// rewritten hypothesis. A 4xx answer fails this instance only; transport
// errors propagate.
inline RewriteOutcome fsp_rewrite(const Instance& inst, TextGenerator& generator,
                                  const PromptSet& prompts, const FspTemplates& templates = {},
                                  const FspOptions& opts = {}) {
  auto ask = [&](const PromptTemplate& tmpl, const PromptText& prompt) {
    GenerateRequest req;
    req.prompt = prompt.text;
    req.max_tokens = opts.max_tokens;
    req.stop = {tmpl.stop};
    req.temperature = opts.temperature;
    return truncate_at_stop(generator.generate(req), req.stop);
  };

  try {
    PromptQuery q{&inst, std::nullopt, Branch::Main};
    const std::string step1 =
        ask(templates.extract, build_prompt(PromptStage::Extract, prompts, templates.extract, q));
    if (text::trim(step1).empty()) return RewriteOutcome::failure(reason::kEmptyGeneration);
    auto spans = parse_extraction(step1);
    if (!spans) return RewriteOutcome::failure(reason::kUnparseableExtraction);
    const SpanPair pair(spans->first, spans->second, SpanSource::Fsp);

    RewriteOutcome out;
    for (const DerivedBranch& d : derive_counterfactual_labels(inst.gold_label)) {
      PromptQuery tq{&inst, pair, d.branch};
      std::string x_cf(text::trim(ask(
          templates.transform, build_prompt(PromptStage::Transform, prompts, templates.transform, tq))));
      if (x_cf.empty()) return RewriteOutcome::failure(reason::kEmptyTransform);
      out.records.push_back({inst.id, d.branch, std::move(x_cf), d.y_cf, Provenance::Fsp, std::nullopt});
    }
    return out;
  } catch (const ProtocolError& e) {
    if (e.status >= 400 && e.status < 500) return RewriteOutcome::failure(reason::kGeneratorRejected);
    throw;
  }
}

}  // namespace ftc
