#pragma once

// Predicate-relation forms per label, counterfactual label derivation and
// the span surgery that turns a hypothesis into its counterfactual.

#include <algorithm>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "ftc/core.hpp"
#include "ftc/errors.hpp"
#include "ftc/label.hpp"
#include "ftc/stem.hpp"
#include "ftc/text.hpp"

namespace ftc {

// R(A,B) implied by each label: A <=> B, not(A <=> B), not(A => B) == A and not B.
enum class RelationForm : std::uint8_t { Equivalence, NegatedEquivalence, NegatedImplication };

inline std::string to_string(RelationForm r) {
  switch (r) {
    case RelationForm::Equivalence: return "Equivalence";
    case RelationForm::NegatedEquivalence: return "NegatedEquivalence";
    case RelationForm::NegatedImplication: return "NegatedImplication";
  }
  return {};
}

constexpr RelationForm relation_form(Label label) {
  switch (label) {
    case Label::E: return RelationForm::Equivalence;
    case Label::C: return RelationForm::NegatedEquivalence;
    case Label::N: return RelationForm::NegatedImplication;
  }
  return RelationForm::NegatedImplication;
}

constexpr Label label_of(RelationForm r) {
  switch (r) {
    case RelationForm::Equivalence: return Label::E;
    case RelationForm::NegatedEquivalence: return Label::C;
    case RelationForm::NegatedImplication: return Label::N;
  }
  return Label::N;
}

struct DerivedBranch {
  Branch branch;
  Label y_cf;
  bool operator==(const DerivedBranch&) const = default;
};

// E -> E and C -> E on the main branch. N splits A and not-B: keeping A
// without B must be entailed, and the not-B rewrite stays truth-valueless.
inline std::vector<DerivedBranch> derive_counterfactual_labels(Label label) {
  switch (label) {
    case Label::E:
    case Label::C:
      return {{Branch::Main, Label::E}};
    case Label::N:
      return {{Branch::ABranch, Label::E}, {Branch::NegBBranch, Label::N}};
  }
  return {};
}

// True when (gold, branch, y_cf) is a row of the derivation table.
inline bool matches_derivation(Label gold, Branch branch, Label y_cf) {
  for (const DerivedBranch& d : derive_counterfactual_labels(gold))
    if (d.branch == branch) return d.y_cf == y_cf;
  return false;
}

enum class SpanSource : std::uint8_t { Regex, Fsp, Manual };

inline std::string to_string(SpanSource s) {
  switch (s) {
    case SpanSource::Regex: return "regex";
    case SpanSource::Fsp: return "fsp";
    case SpanSource::Manual: return "manual";
  }
  return {};
}

struct SpanPair {
  std::string a;
  std::string b;
  SpanSource source = SpanSource::Manual;
  std::optional<std::string> pattern_id;

  SpanPair() = default;
  SpanPair(std::string a_, std::string b_, SpanSource src = SpanSource::Manual,
           std::optional<std::string> pattern = std::nullopt)
      : a(text::trim(a_)), b(text::trim(b_)), source(src), pattern_id(std::move(pattern)) {
    if (a.empty() || b.empty()) throw ArgumentError("span pair requires two non-empty spans");
  }

  bool operator==(const SpanPair&) const = default;
};

namespace detail {

using text::Token;

struct TokenRange {
  std::size_t first;  // token index, inclusive
  std::size_t last;   // token index, inclusive
};

inline bool sentence_initial(std::string_view src, const std::vector<Token>& toks, std::size_t i) {
  if (i == 0) return true;
  const Token& prev = toks[i - 1];
  if (prev.word) return false;
  const char ch = src[prev.begin];
  return ch == '.' || ch == '!' || ch == '?';
}

// Non-overlapping occurrences of `span` in `src`, left to right. Tokens must
// agree exactly, except that a sentence-initial token compares
// case-insensitively; with stem_match, word tokens compare by stem.
inline std::vector<TokenRange> find_occurrences(std::string_view src, std::string_view span,
                                                bool stem_match) {
  const auto toks = text::tokenize(src);
  const auto pat = text::tokenize(span);
  std::vector<TokenRange> out;
  if (pat.empty() || pat.size() > toks.size()) return out;

  std::vector<std::string> stems_src;
  std::vector<std::string> stems_pat;
  if (stem_match) {
    for (const auto& t : toks) stems_src.push_back(stem(t.view(src)));
    for (const auto& t : pat) stems_pat.push_back(stem(t.view(span)));
  }

  auto token_eq = [&](std::size_t i, std::size_t k) {
    const auto h = toks[i].view(src);
    const auto p = pat[k].view(span);
    if (stem_match && toks[i].word && pat[k].word) return stems_src[i] == stems_pat[k];
    if (h == p) return true;
    return sentence_initial(src, toks, i) && text::iequals(h, p);
  };

  std::size_t i = 0;
  while (i + pat.size() <= toks.size()) {
    bool hit = true;
    for (std::size_t k = 0; k < pat.size() && hit; ++k) hit = token_eq(i + k, k);
    if (hit) {
      out.push_back({i, i + pat.size() - 1});
      i += pat.size();
    } else {
      ++i;
    }
  }
  return out;
}

inline std::vector<TokenRange> locate(std::string_view src, std::string_view span) {
  auto hits = find_occurrences(src, span, false);
  if (hits.empty()) hits = find_occurrences(src, span, true);
  return hits;
}

inline bool is_article(std::string_view w) {
  return text::iequals(w, "a") || text::iequals(w, "an") || text::iequals(w, "the") ||
         text::iequals(w, "some");
}

inline bool is_preposition(std::string_view w) {
  static constexpr std::string_view kPreps[] = {
      "on",     "in",    "at",     "under", "near",   "by",     "with",  "inside", "beside",
      "behind", "above", "below",  "over",  "into",   "onto",   "from",  "of",     "for",
      "to",     "across", "along", "around", "through", "beneath", "against", "outside"};
  for (auto p : kPreps)
    if (text::iequals(w, p)) return true;
  return false;
}

// Grows a range leftwards over one article and then one preposition.
inline std::size_t extend_left(std::string_view src, const std::vector<Token>& toks,
                               std::size_t first) {
  if (first > 0 && toks[first - 1].word && is_article(toks[first - 1].view(src))) --first;
  if (first > 0 && toks[first - 1].word && is_preposition(toks[first - 1].view(src))) --first;
  return first;
}

// Removes the byte range [begin, end) and the whitespace run that precedes
// it (or follows it, at the start of the string).
inline std::string erase_span(std::string_view src, std::size_t begin, std::size_t end) {
  std::size_t b = begin;
  std::size_t e = end;
  if (b == 0) {
    while (e < src.size() && text::is_space(src[e])) ++e;
  } else {
    while (b > 0 && text::is_space(src[b - 1])) --b;
    // keep one separator when deleting between two words
    if (b > 0 && e < src.size() && !text::is_space(src[e]) && text::detail::word_char(src[e]))
      return std::string(src.substr(0, b)) + " " + std::string(src.substr(e));
  }
  return std::string(src.substr(0, b)) + std::string(src.substr(e));
}

// Deletes every occurrence of `span`, each grown over a leading
// article/preposition. Sentence-initial capitalisation is carried over.
inline std::string delete_phrase(std::string_view src, std::string_view span) {
  const auto hits = locate(src, span);
  if (hits.empty())
    throw NoMatchError("span '" + std::string(span) + "' not found in '" + std::string(src) + "'");
  const auto toks = text::tokenize(src);
  const bool was_capitalized = text::starts_with_upper(src);

  std::string out(src);
  for (auto it = hits.rbegin(); it != hits.rend(); ++it) {
    const std::size_t first = extend_left(src, toks, it->first);
    out = erase_span(out, toks[first].begin, toks[it->last].end);
  }
  if (was_capitalized) out = text::capitalize_first(std::move(out));
  return out;
}

}  // namespace detail

// Replaces every occurrence of pair.a with pair.b. Text outside the matched
// regions is left untouched. Throws NoMatchError when a does not occur.
inline std::string substitute_span(std::string_view hypothesis, const SpanPair& pair,
                                   bool stem_match = false) {
  const auto hits = detail::find_occurrences(hypothesis, pair.a, stem_match);
  if (hits.empty())
    throw NoMatchError("span '" + pair.a + "' not found in '" + std::string(hypothesis) + "'");
  const auto toks = text::tokenize(hypothesis);

  std::string out;
  std::size_t cursor = 0;
  for (const auto& h : hits) {
    const std::size_t begin = toks[h.first].begin;
    const std::size_t end = toks[h.last].end;
    out.append(hypothesis.substr(cursor, begin - cursor));
    out.append(detail::sentence_initial(hypothesis, toks, h.first) ? text::capitalize_first(pair.b)
                                                                   : pair.b);
    cursor = end;
  }
  out.append(hypothesis.substr(cursor));
  return out;
}

// Surface rewrite for the two neutral branches.
//   A_branch:    drop B (with a leading article/preposition) so the sentence
//                asserts A without B.
//   negB_branch: drop A the same way, then place "not" in front of B's phrase.
inline std::string neutral_branch_rewrite(std::string_view hypothesis, const SpanPair& pair,
                                          Branch branch) {
  if (branch == Branch::ABranch) return detail::delete_phrase(hypothesis, pair.b);
  if (branch != Branch::NegBBranch)
    throw ArgumentError("neutral_branch_rewrite: branch must be A_branch or negB_branch");

  const std::string without_a = detail::delete_phrase(hypothesis, pair.a);
  const auto hits = detail::locate(without_a, pair.b);
  if (hits.empty())
    throw NoMatchError("span '" + pair.b + "' not found after removing '" + pair.a + "'");
  const auto toks = text::tokenize(without_a);
  const std::size_t first = detail::extend_left(without_a, toks, hits.front().first);
  const std::size_t at = toks[first].begin;
  if (at == 0) {
    std::string rest = without_a;
    if (!rest.empty()) rest[0] = static_cast<char>(std::tolower(static_cast<unsigned char>(rest[0])));
    return "Not " + rest;
  }
  return without_a.substr(0, at) + "not " + without_a.substr(at);
}

}  // namespace ftc
