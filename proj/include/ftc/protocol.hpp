#pragma once

// JSON wire protocol shared by the classifier and generator endpoints.
//
//   POST /v1/classify  {"premise_ref", "hypothesis", "condition", "explanation", "noise_sigma"}
//                      -> {"probs": {"E": p, "C": p, "N": p}}
//   POST /v1/generate  {"prompt", "max_tokens", "stop", "temperature"} -> {"text": str}
//   errors             {"error": {"code": str, "message": str}}

#include <cmath>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include <nlohmann/json.hpp>

#include "ftc/errors.hpp"
#include "ftc/label.hpp"

namespace ftc {

using json = nlohmann::json;

inline constexpr std::string_view kClassifyPath = "/v1/classify";
inline constexpr std::string_view kGeneratePath = "/v1/generate";

// Which inputs the classifier sees: the hypothesis, hypothesis plus
// explanation, or the explanation alone (hypothesis ignored).
enum class Condition : std::uint8_t { X, XAndE, EOnly };

inline std::string to_string(Condition c) {
  switch (c) {
    case Condition::X: return "x";
    case Condition::XAndE: return "x_and_e";
    case Condition::EOnly: return "e_only";
  }
  return {};
}

inline Condition parse_condition(std::string_view s) {
  if (s == "x") return Condition::X;
  if (s == "x_and_e") return Condition::XAndE;
  if (s == "e_only") return Condition::EOnly;
  throw ArgumentError("unknown condition '" + std::string(s) + "'");
}

struct ClassifyRequest {
  std::string premise_ref;
  std::string hypothesis;
  Condition condition = Condition::X;
  std::optional<std::string> explanation;
  std::optional<double> noise_sigma;

  void validate() const {
    if (condition != Condition::X && !explanation)
      throw ArgumentError("classify: condition '" + to_string(condition) +
                          "' requires an explanation");
    if (noise_sigma && !(*noise_sigma >= 0.0 && std::isfinite(*noise_sigma)))
      throw ArgumentError("classify: noise_sigma must be a non-negative number");
  }

  json to_json() const {
    return json{{"premise_ref", premise_ref},
                {"hypothesis", hypothesis},
                {"condition", to_string(condition)},
                {"explanation", explanation ? json(*explanation) : json(nullptr)},
                {"noise_sigma", noise_sigma ? json(*noise_sigma) : json(nullptr)}};
  }

  static ClassifyRequest from_json(const json& j) {
    ClassifyRequest r;
    r.premise_ref = j.at("premise_ref").get<std::string>();
    r.hypothesis = j.at("hypothesis").get<std::string>();
    r.condition = parse_condition(j.value("condition", std::string("x")));
    if (auto it = j.find("explanation"); it != j.end() && !it->is_null())
      r.explanation = it->get<std::string>();
    if (auto it = j.find("noise_sigma"); it != j.end() && !it->is_null())
      r.noise_sigma = it->get<double>();
    r.validate();
    return r;
  }
};

struct GenerateRequest {
  static constexpr int kMaxTokensCap = 1024;

  std::string prompt;
  int max_tokens = 64;
  std::vector<std::string> stop;
  double temperature = 0.0;

  void validate(int cap = kMaxTokensCap) const {
    if (max_tokens <= 0 || max_tokens > cap)
      throw ArgumentError("generate: max_tokens must be in [1, " + std::to_string(cap) + "]");
    if (!(temperature >= 0.0)) throw ArgumentError("generate: temperature must be >= 0");
  }

  json to_json() const {
    return json{{"prompt", prompt}, {"max_tokens", max_tokens}, {"stop", stop},
                {"temperature", temperature}};
  }

  static GenerateRequest from_json(const json& j) {
    GenerateRequest r;
    r.prompt = j.at("prompt").get<std::string>();
    r.max_tokens = j.value("max_tokens", r.max_tokens);
    if (j.contains("stop")) r.stop = j.at("stop").get<std::vector<std::string>>();
    r.temperature = j.value("temperature", r.temperature);
    r.validate();
    return r;
  }
};

inline json to_json(const LabelDistribution& d) {
  return json{{"probs", {{"E", d.e}, {"C", d.c}, {"N", d.n}}}};
}

// Parses a classify response body; anything outside the distribution
// invariants is a protocol error, never silently renormalised.
inline LabelDistribution distribution_from_json(const json& body) {
  try {
    const json& p = body.at("probs");
    LabelDistribution d{p.at("E").get<double>(), p.at("C").get<double>(), p.at("N").get<double>()};
    if (!d.valid()) throw ProtocolError("classify response violates distribution invariants", 200,
                                        body.dump());
    return d;
  } catch (const json::exception& e) {
    throw ProtocolError(std::string("malformed classify response: ") + e.what(), 200, body.dump());
  }
}

// Cuts generated text at the earliest occurrence of any stop string.
inline std::string truncate_at_stop(std::string text, const std::vector<std::string>& stop) {
  std::size_t cut = text.size();
  for (const auto& s : stop) {
    if (s.empty()) continue;
    if (auto pos = text.find(s); pos != std::string::npos) cut = std::min(cut, pos);
  }
  text.resize(cut);
  return text;
}

inline json error_body(std::string_view code, std::string_view message) {
  return json{{"error", {{"code", code}, {"message", message}}}};
}

class Classifier {
 public:
  virtual ~Classifier() = default;
  virtual LabelDistribution classify(const ClassifyRequest& request) = 0;
};

class TextGenerator {
 public:
  virtual ~TextGenerator() = default;
  virtual std::string generate(const GenerateRequest& request) = 0;
};

}  // namespace ftc
