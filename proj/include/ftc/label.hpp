#pragma once

#include <array>
#include <cmath>
#include <cstdint>
#include <optional>
#include <string>
#include <string_view>

#include "ftc/errors.hpp"

namespace ftc {

// NLI label. The enumerator order E < C < N is the tie-breaking order.
enum class Label : std::uint8_t { E = 0, C = 1, N = 2 };

inline constexpr std::array<Label, 3> kAllLabels{Label::E, Label::C, Label::N};

constexpr std::size_t index_of(Label l) { return static_cast<std::size_t>(l); }

constexpr char to_char(Label l) {
  switch (l) {
    case Label::E: return 'E';
    case Label::C: return 'C';
    case Label::N: return 'N';
  }
  return '?';
}

inline std::string to_string(Label l) { return std::string(1, to_char(l)); }

inline std::string long_name(Label l) {
  switch (l) {
    case Label::E: return "entailment";
    case Label::C: return "contradiction";
    case Label::N: return "neutral";
  }
  return {};
}

// Accepts only the canonical one-letter codes.
inline std::optional<Label> label_from_code(std::string_view s) {
  if (s == "E") return Label::E;
  if (s == "C") return Label::C;
  if (s == "N") return Label::N;
  return std::nullopt;
}

inline Label parse_label_code(std::string_view s) {
  if (auto l = label_from_code(s)) return *l;
  throw ArgumentError("unknown label code '" + std::string(s) + "'");
}

// Classifier output over {E, C, N}.
struct LabelDistribution {
  double e = 0.0;
  double c = 0.0;
  double n = 0.0;

  static constexpr double kSumTolerance = 1e-6;

  double operator[](Label l) const {
    switch (l) {
      case Label::E: return e;
      case Label::C: return c;
      case Label::N: return n;
    }
    return 0.0;
  }

  double& operator[](Label l) {
    switch (l) {
      case Label::C: return c;
      case Label::N: return n;
      default: return e;
    }
  }

  bool valid() const {
    for (double p : {e, c, n})
      if (!(p >= 0.0 && p <= 1.0)) return false;
    return std::abs(e + c + n - 1.0) <= kSumTolerance;
  }

  void validate() const {
    if (!valid())
      throw ArgumentError("invalid label distribution (" + std::to_string(e) + ", " +
                          std::to_string(c) + ", " + std::to_string(n) + ")");
  }

  // Highest-probability label; exact ties go to the lowest label (E < C < N).
  Label argmax() const {
    Label best = Label::E;
    for (Label l : {Label::C, Label::N})
      if ((*this)[l] > (*this)[best]) best = l;
    return best;
  }

  static LabelDistribution one_hot(Label l) {
    LabelDistribution d;
    d[l] = 1.0;
    return d;
  }

  friend bool operator==(const LabelDistribution&, const LabelDistribution&) = default;
};

}  // namespace ftc
