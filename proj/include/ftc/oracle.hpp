#pragma once

// Oracle world: a small taxonomy plus per-premise scene facts with exact
// entailment. Stands in for a neural NLI model in tests and in the mock
// server.
//
// Hypothesis micro-grammar (lower-cased, final punctuation dropped):
//   [det] SUBJECT [copula] { [not] | RELATION [det] OBJECT | RELATION
//                           | [prep] [det] LOCATION | a/an TERM }
// Every RELATION/LOCATION/isa phrase yields one literal about SUBJECT; a
// "not" negates every literal that follows it.

#include <algorithm>
#include <cctype>
#include <cstdint>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include <nlohmann/json.hpp>

#include "ftc/cache.hpp"
#include "ftc/errors.hpp"
#include "ftc/label.hpp"
#include "ftc/protocol.hpp"
#include "ftc/text.hpp"

namespace ftc {

inline constexpr std::string_view kLocatedRelation = "located";
inline constexpr std::string_view kIsaRelation = "isa";

struct Fact {
  std::string subject;
  std::string relation;
  std::string object;  // empty for intransitive relations

  auto operator<=>(const Fact&) const = default;
};

inline std::string normalize_term(std::string_view s) {
  std::string out = text::to_lower(text::trim(s));
  for (char& ch : out)
    if (ch == '-' || ch == '_') ch = ' ';
  return out;
}

struct OracleWorld {
  std::set<std::pair<std::string, std::string>> isa_edges;       // (term, hypernym)
  std::set<std::pair<std::string, std::string>> disjoint_pairs;  // stored in both orders
  std::map<std::string, std::vector<Fact>> scene_facts;
  std::set<std::string> vocabulary;  // entity terms
  std::set<std::string> relations;
  std::set<std::string> locations;   // terms usable as bare location phrases

  void add_isa(std::string term, std::string hypernym) {
    isa_edges.emplace(normalize_term(term), normalize_term(hypernym));
  }

  void add_disjoint(std::string a, std::string b) {
    a = normalize_term(a);
    b = normalize_term(b);
    disjoint_pairs.emplace(a, b);
    disjoint_pairs.emplace(b, a);
  }

  void add_fact(const std::string& premise_ref, Fact f) {
    f.subject = normalize_term(f.subject);
    f.relation = normalize_term(f.relation);
    f.object = normalize_term(f.object);
    scene_facts[premise_ref].push_back(std::move(f));
  }

  // Reflexive-transitive isa.
  bool is_a(const std::string& term, const std::string& ancestor) const {
    if (term == ancestor) return true;
    std::vector<std::string> stack{term};
    std::set<std::string> seen{term};
    while (!stack.empty()) {
      const std::string cur = std::move(stack.back());
      stack.pop_back();
      for (auto it = isa_edges.lower_bound({cur, std::string()});
           it != isa_edges.end() && it->first == cur; ++it) {
        if (it->second == ancestor) return true;
        if (seen.insert(it->second).second) stack.push_back(it->second);
      }
    }
    return false;
  }

  std::vector<std::string> ancestors(const std::string& term) const {
    std::vector<std::string> out;
    for (const auto& t : all_terms())
      if (is_a(term, t)) out.push_back(t);
    return out;
  }

  // Disjointness is inherited by everything below either side.
  bool disjoint(const std::string& a, const std::string& b) const {
    for (const auto& [x, y] : disjoint_pairs)
      if (is_a(a, x) && is_a(b, y)) return true;
    return false;
  }

  std::set<std::string> all_terms() const {
    std::set<std::string> t = vocabulary;
    t.insert(locations.begin(), locations.end());
    return t;
  }

  void validate() const {
    const auto terms = all_terms();
    auto known = [&](const std::string& t, const char* what) {
      if (!terms.count(t)) throw ConfigError(std::string("oracle world: ") + what + " '" + t +
                                             "' is not in the vocabulary");
    };
    for (const auto& [a, b] : isa_edges) {
      known(a, "isa term");
      known(b, "isa term");
      if (a == b || is_a(b, a)) throw ConfigError("oracle world: isa cycle through '" + a + "'");
    }
    for (const auto& [a, b] : disjoint_pairs) {
      known(a, "disjoint term");
      known(b, "disjoint term");
      if (!disjoint_pairs.count({b, a})) throw ConfigError("oracle world: disjointness not symmetric");
    }
    for (const auto& [ref, facts] : scene_facts) {
      for (const Fact& f : facts) {
        known(f.subject, "fact subject");
        if (f.relation == kLocatedRelation) {
          if (!locations.count(f.object))
            throw ConfigError("oracle world: unknown location '" + f.object + "'");
          continue;
        }
        if (!relations.count(f.relation))
          throw ConfigError("oracle world: unknown relation '" + f.relation + "'");
        if (!f.object.empty()) known(f.object, "fact object");
      }
    }
  }

  json to_json() const {
    json j;
    j["isa_edges"] = json::array();
    for (const auto& [a, b] : isa_edges) j["isa_edges"].push_back(json::array({a, b}));
    j["disjoint_pairs"] = json::array();
    for (const auto& [a, b] : disjoint_pairs)
      if (a < b) j["disjoint_pairs"].push_back(json::array({a, b}));
    j["scene_facts"] = json::object();
    for (const auto& [ref, facts] : scene_facts) {
      json arr = json::array();
      for (const Fact& f : facts) arr.push_back(json::array({f.subject, f.relation, f.object}));
      j["scene_facts"][ref] = arr;
    }
    j["vocabulary"] = vocabulary;
    j["relations"] = relations;
    j["locations"] = locations;
    return j;
  }

  static OracleWorld from_json(const json& j) {
    OracleWorld w;
    try {
      for (const auto& t : j.at("vocabulary")) w.vocabulary.insert(normalize_term(t.get<std::string>()));
      for (const auto& t : j.value("relations", json::array()))
        w.relations.insert(normalize_term(t.get<std::string>()));
      for (const auto& t : j.value("locations", json::array()))
        w.locations.insert(normalize_term(t.get<std::string>()));
      for (const auto& e : j.value("isa_edges", json::array()))
        w.add_isa(e.at(0).get<std::string>(), e.at(1).get<std::string>());
      for (const auto& e : j.value("disjoint_pairs", json::array()))
        w.add_disjoint(e.at(0).get<std::string>(), e.at(1).get<std::string>());
      const json scenes = j.value("scene_facts", json::object());
      for (const auto& [ref, facts] : scenes.items()) {
        for (const auto& f : facts) {
          w.add_fact(ref, Fact{f.at(0).get<std::string>(), f.at(1).get<std::string>(),
                               f.size() > 2 ? f.at(2).get<std::string>() : std::string()});
        }
      }
    } catch (const json::exception& e) {
      throw ConfigError(std::string("oracle world: ") + e.what());
    }
    // relations mentioned only through facts are accepted implicitly
    for (const auto& [ref, facts] : w.scene_facts)
      for (const Fact& f : facts)
        if (f.relation != kLocatedRelation) w.relations.insert(f.relation);
    w.validate();
    return w;
  }
};

struct Literal {
  Fact atom;
  bool negated = false;

  auto operator<=>(const Literal&) const = default;
};

enum class ParseStatus : std::uint8_t { Ok, UnknownTerm, Unparseable };

struct ParsedHypothesis {
  ParseStatus status = ParseStatus::Unparseable;
  std::vector<Literal> literals;
  std::string detail;
};

namespace detail {

inline bool is_determiner(std::string_view w) {
  return w == "a" || w == "an" || w == "the" || w == "some" || w == "one" || w == "her" ||
         w == "his" || w == "their";
}

inline bool is_copula(std::string_view w) {
  return w == "is" || w == "are" || w == "was" || w == "were";
}

// Longest multi-word entry of `dict` starting at words[i]; returns the
// number of words consumed (0 when nothing matches).
inline std::size_t longest_match(const std::vector<std::string>& words, std::size_t i,
                                 const std::set<std::string>& dict, std::string& found) {
  std::size_t best = 0;
  std::string phrase;
  for (std::size_t k = i; k < words.size() && k < i + 6; ++k) {
    if (k > i) phrase += ' ';
    phrase += words[k];
    if (dict.count(phrase)) {
      best = k - i + 1;
      found = phrase;
    }
  }
  return best;
}

inline std::vector<std::string> grammar_words(std::string_view sentence) {
  std::vector<std::string> words;
  for (const auto& tok : text::tokenize(sentence)) {
    const auto v = tok.view(sentence);
    if (!tok.word) {
      if (v == "." || v == "!" || v == ",") continue;
      words.push_back(std::string(v));  // stray punctuation makes the sentence unparseable
      continue;
    }
    std::string w = text::to_lower(v);
    for (char& ch : w)
      if (ch == '-') ch = ' ';
    for (auto& part : text::split_whitespace(w)) words.push_back(part);
  }
  return words;
}

inline bool is_alpha_word(std::string_view w) {
  for (char ch : w)
    if (!(std::isalpha(static_cast<unsigned char>(ch)) || ch == '\'')) return false;
  return !w.empty();
}

}  // namespace detail

inline ParsedHypothesis parse_hypothesis(const OracleWorld& world, std::string_view sentence) {
  ParsedHypothesis out;
  const auto words = detail::grammar_words(sentence);
  const std::size_t n = words.size();
  auto fail = [&](ParseStatus s, std::string why) {
    out.status = s;
    out.literals.clear();
    out.detail = std::move(why);
    return out;
  };
  auto unknown_or_unparseable = [&](std::size_t at, const char* expected) {
    if (at < n && detail::is_alpha_word(words[at]))
      return fail(ParseStatus::UnknownTerm, "unknown " + std::string(expected) + " '" + words[at] + "'");
    return fail(ParseStatus::Unparseable, std::string("expected ") + expected);
  };
  auto skip_det = [&](std::size_t j) { return (j < n && detail::is_determiner(words[j])) ? j + 1 : j; };
  // [det] TERM from `dict`; returns the end index or 0.
  auto term_at = [&](std::size_t j, const std::set<std::string>& dict, std::string& found) -> std::size_t {
    j = skip_det(j);
    const std::size_t len = detail::longest_match(words, j, dict, found);
    return len ? j + len : 0;
  };
  // [prep] [det] LOCATION; returns the end index or 0.
  auto location_at = [&](std::size_t j, std::string& loc) -> std::size_t {
    if (std::size_t e = term_at(j, world.locations, loc)) return e;
    if (j + 1 < n && !detail::is_determiner(words[j]) && words[j] != "not") return term_at(j + 1, world.locations, loc);
    return 0;
  };
  auto starts_phrase = [&](std::size_t j) {
    std::string tmp;
    return j >= n || words[j] == "not" || detail::longest_match(words, j, world.relations, tmp) > 0 ||
           location_at(j, tmp) > 0;
  };

  std::size_t i = 0;
  std::string subject;
  i = term_at(0, world.vocabulary, subject);
  if (i == 0) return unknown_or_unparseable(skip_det(0), "subject");
  bool after_copula = false;
  if (i < n && detail::is_copula(words[i])) {
    ++i;
    after_copula = true;
  }

  bool negated = false;
  while (i < n) {
    if (words[i] == "not") {
      if (negated) return fail(ParseStatus::Unparseable, "double negation");
      negated = true;
      ++i;
      continue;
    }
    std::string rel;
    const std::size_t rlen = detail::longest_match(words, i, world.relations, rel);
    std::string found;
    if (rlen > 0) {
      if (std::size_t e = term_at(i + rlen, world.vocabulary, found)) {
        out.literals.push_back({{subject, rel, found}, negated});
        i = e;
        continue;
      }
    }
    if (std::size_t e = location_at(i, found)) {
      out.literals.push_back({{subject, std::string(kLocatedRelation), found}, negated});
      i = e;
      continue;
    }
    if (rlen > 0) {
      if (!starts_phrase(i + rlen)) return unknown_or_unparseable(skip_det(i + rlen), "object");
      out.literals.push_back({{subject, rel, std::string()}, negated});
      i += rlen;
      continue;
    }
    if (after_copula && (words[i] == "a" || words[i] == "an")) {
      const std::size_t e = term_at(i + 1, world.vocabulary, found);
      if (e == 0) return unknown_or_unparseable(i + 1, "class term");
      out.literals.push_back({{subject, std::string(kIsaRelation), found}, negated});
      i = e;
      continue;
    }
    return unknown_or_unparseable(i, "relation or location");
  }
  if (out.literals.empty()) return fail(ParseStatus::Unparseable, "no predicate");
  out.status = ParseStatus::Ok;
  return out;
}

enum class Truth : std::uint8_t { True, False, Unknown };

inline Truth evaluate_atom(const OracleWorld& world, const std::string& premise_ref, const Fact& atom) {
  if (atom.relation == kIsaRelation) {
    if (world.is_a(atom.subject, atom.object)) return Truth::True;
    if (world.disjoint(atom.subject, atom.object)) return Truth::False;
    return Truth::Unknown;
  }
  auto it = world.scene_facts.find(premise_ref);
  if (it == world.scene_facts.end()) return Truth::Unknown;
  bool contradicted = false;
  for (const Fact& f : it->second) {
    if (f.relation != atom.relation || !world.is_a(f.subject, atom.subject)) continue;
    if (atom.object.empty() || f.object.empty()) {
      if (atom.object.empty() && f.object.empty()) return Truth::True;
      continue;
    }
    if (world.is_a(f.object, atom.object)) return Truth::True;
    if (world.disjoint(f.object, atom.object)) contradicted = true;
  }
  return contradicted ? Truth::False : Truth::Unknown;
}

struct OracleVerdict {
  Label label = Label::N;
  ParseStatus parse = ParseStatus::Ok;
  std::string detail;

  bool parse_failure() const { return parse == ParseStatus::Unparseable; }
};

// Conjunction of the literals over independent atoms: any false literal (or
// an atom both asserted and denied) -> C, all true -> E, otherwise N.
// Unknown terms and parse failures are N.
inline OracleVerdict oracle_decide(const OracleWorld& world, const std::string& premise_ref,
                                   std::string_view hypothesis) {
  const ParsedHypothesis p = parse_hypothesis(world, hypothesis);
  if (p.status != ParseStatus::Ok) return {Label::N, p.status, p.detail};
  // the same atom asserted and denied can never hold
  for (const Literal& a : p.literals)
    for (const Literal& b : p.literals)
      if (a.atom == b.atom && a.negated != b.negated) return {Label::C, ParseStatus::Ok, {}};
  bool all_true = true;
  for (const Literal& lit : p.literals) {
    Truth t = evaluate_atom(world, premise_ref, lit.atom);
    if (lit.negated && t != Truth::Unknown) t = (t == Truth::True) ? Truth::False : Truth::True;
    if (t == Truth::False) return {Label::C, ParseStatus::Ok, {}};
    if (t == Truth::Unknown) all_true = false;
  }
  return {all_true ? Label::E : Label::N, ParseStatus::Ok, {}};
}

inline LabelDistribution smoothed_one_hot(Label l, double epsilon) {
  LabelDistribution d{epsilon / 2, epsilon / 2, epsilon / 2};
  d[l] = 1.0 - epsilon;
  return d;
}

struct OracleSettings {
  double epsilon = 0.02;
  double flip_rate = 0.0;  // simulated model error rate, independent of noise_sigma
  std::uint64_t seed = 0;

  void validate() const {
    if (!(epsilon >= 0.0 && epsilon < 2.0 / 3.0))
      throw ConfigError("oracle: epsilon must be in [0, 2/3)");
    if (!(flip_rate >= 0.0 && flip_rate <= 1.0)) throw ConfigError("oracle: flip_rate must be in [0, 1]");
  }
};

inline LabelDistribution oracle_classify(const OracleWorld& world, const std::string& premise_ref,
                                         std::string_view hypothesis, double epsilon = 0.02) {
  return smoothed_one_hot(oracle_decide(world, premise_ref, hypothesis).label, epsilon);
}

namespace detail {

// Deterministic draw in [0, 1) from a salt and arbitrary text.
inline double unit_draw(std::uint64_t seed, std::string_view salt, std::string_view data) {
  const std::string h = sha256_hex(std::to_string(seed) + "\x1f" + std::string(salt) + "\x1f" +
                                   std::string(data));
  const std::uint64_t v = std::stoull(h.substr(0, 13), nullptr, 16);  // 52 bits
  return static_cast<double>(v) / static_cast<double>(1ULL << 52);
}

inline Label flip_label(Label l, double draw) {
  const Label a = l == Label::E ? Label::C : Label::E;
  const Label b = l == Label::N ? Label::C : Label::N;
  return draw < 0.5 ? a : b;
}

}  // namespace detail

// Surface-form leakage heuristic used when only the explanation is visible.
inline Label explanation_only_label(std::string_view explanation) {
  const std::string e = " " + text::to_lower(explanation) + " ";
  for (const char* cue : {"not necessarily", "does not mean", "doesn't mean", "may not", "might not",
                          "not all", "not every"})
    if (e.find(cue) != std::string::npos) return Label::N;
  for (const char* cue : {" not ", "n't ", " never ", "cannot"})
    if (e.find(cue) != std::string::npos) return Label::C;
  return Label::E;
}

// Classifier backed by an oracle world. Conditions:
//   x        the hypothesis alone
//   e_only   the explanation alone, through explanation_only_label
//   x_and_e  the hypothesis label, unless it is N and the explanation is decisive
// noise_sigma: with probability min(1, sigma) the decided label is replaced by
// one of the other two, uniformly. flip_rate applies the same replacement to
// every request. Both draws are seeded from the request and the world seed.
class OracleClassifier : public Classifier {
 public:
  OracleClassifier(OracleWorld world, OracleSettings settings = {})
      : world_(std::move(world)), settings_(settings) {
    world_.validate();
    settings_.validate();
  }

  const OracleWorld& world() const { return world_; }
  const OracleSettings& settings() const { return settings_; }

  Label decide(const ClassifyRequest& req) const {
    switch (req.condition) {
      case Condition::X:
        return oracle_decide(world_, req.premise_ref, req.hypothesis).label;
      case Condition::EOnly:
        return explanation_only_label(req.explanation.value_or(""));
      case Condition::XAndE: {
        const Label h = oracle_decide(world_, req.premise_ref, req.hypothesis).label;
        if (h != Label::N) return h;
        const Label e = explanation_only_label(req.explanation.value_or(""));
        return e == Label::N ? h : e;
      }
    }
    return Label::N;
  }

  LabelDistribution classify(const ClassifyRequest& req) override {
    req.validate();
    Label label = decide(req);
    ClassifyRequest base = req;
    base.noise_sigma.reset();
    const std::string base_key = canonical_json(base.to_json());
    if (settings_.flip_rate > 0.0 &&
        detail::unit_draw(settings_.seed, "flip", base_key) < settings_.flip_rate)
      label = detail::flip_label(label, detail::unit_draw(settings_.seed, "flip-to", base_key));
    if (req.noise_sigma && *req.noise_sigma > 0.0) {
      const std::string key = canonical_json(req.to_json());
      if (detail::unit_draw(settings_.seed, "noise", key) < std::min(1.0, *req.noise_sigma))
        label = detail::flip_label(label, detail::unit_draw(settings_.seed, "noise-to", key));
    }
    return smoothed_one_hot(label, settings_.epsilon);
  }

 private:
  OracleWorld world_;
  OracleSettings settings_;
};

}  // namespace ftc
