#pragma once

// In-process mock backends and the configuration shared with the mock HTTP
// server.

#include <filesystem>
#include <fstream>
#include <memory>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "ftc/errors.hpp"
#include "ftc/oracle.hpp"
#include "ftc/protocol.hpp"

namespace ftc {

struct CannedResponse {
  std::string prompt_suffix;
  std::string text;
};

// Answers a prompt with the text of the longest configured suffix it ends
// with. Unmatched prompts are protocol errors.
class CannedGenerator : public TextGenerator {
 public:
  CannedGenerator() = default;
  explicit CannedGenerator(std::vector<CannedResponse> responses) : responses_(std::move(responses)) {}

  void add(std::string prompt_suffix, std::string text) {
    responses_.push_back({std::move(prompt_suffix), std::move(text)});
  }

  std::size_t size() const { return responses_.size(); }

  std::string generate(const GenerateRequest& request) override {
    request.validate();
    const CannedResponse* best = nullptr;
    for (const auto& r : responses_) {
      if (r.prompt_suffix.size() > request.prompt.size()) continue;
      if (request.prompt.compare(request.prompt.size() - r.prompt_suffix.size(), r.prompt_suffix.size(),
                                 r.prompt_suffix) != 0)
        continue;
      if (!best || r.prompt_suffix.size() > best->prompt_suffix.size()) best = &r;
    }
    if (!best) throw ProtocolError("no canned response", 422);
    return truncate_at_stop(best->text, request.stop);
  }

 private:
  std::vector<CannedResponse> responses_;
};

// {"world": {...} | "world_file": path,
//  "oracle": {"epsilon", "flip_rate", "seed"},
//  "canned": [{"prompt_suffix", "text"}] | "canned_file": path,
//  "max_tokens_cap": int}
struct MockConfig {
  std::optional<OracleWorld> world;
  OracleSettings oracle;
  std::vector<CannedResponse> canned;
  int max_tokens_cap = GenerateRequest::kMaxTokensCap;

  static json read_json_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open '" + path + "'");
    try {
      return json::parse(in);
    } catch (const json::parse_error& e) {
      throw ConfigError("'" + path + "': " + e.what());
    }
  }

  // Relative world_file and canned_file paths are resolved against `base_dir`.
  static MockConfig from_json(const json& j, const std::filesystem::path& base_dir = {}) {
    MockConfig c;
    auto path = [&](const json& v) {
      std::filesystem::path p = v.get<std::string>();
      if (p.is_relative() && !base_dir.empty()) p = base_dir / p;
      return p.string();
    };
    try {
      if (j.contains("world")) {
        c.world = OracleWorld::from_json(j.at("world"));
      } else if (j.contains("world_file")) {
        c.world = OracleWorld::from_json(read_json_file(path(j.at("world_file"))));
      }
      if (j.contains("oracle")) {
        const json& o = j.at("oracle");
        c.oracle.epsilon = o.value("epsilon", c.oracle.epsilon);
        c.oracle.flip_rate = o.value("flip_rate", c.oracle.flip_rate);
        c.oracle.seed = o.value("seed", c.oracle.seed);
      }
      json canned = j.value("canned", json::array());
      if (j.contains("canned_file")) canned = read_json_file(path(j.at("canned_file")));
      for (const auto& r : canned)
        c.canned.push_back({r.at("prompt_suffix").get<std::string>(), r.at("text").get<std::string>()});
      c.max_tokens_cap = j.value("max_tokens_cap", c.max_tokens_cap);
    } catch (const json::exception& e) {
      throw ConfigError(std::string("mock config: ") + e.what());
    }
    c.oracle.validate();
    if (c.max_tokens_cap < 1) throw ConfigError("mock config: max_tokens_cap must be positive");
    return c;
  }
};

}  // namespace ftc
