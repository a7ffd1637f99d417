#pragma once

// Append-only JSONL response cache keyed by a content hash of the canonical
// request, plus caching decorators for the Classifier/TextGenerator
// interfaces.

#include <openssl/evp.h>

#include <atomic>
#include <chrono>
#include <cstdio>
#include <ctime>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <mutex>
#include <optional>
#include <shared_mutex>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include <nlohmann/json.hpp>

#include "ftc/errors.hpp"
#include "ftc/protocol.hpp"

namespace ftc {

inline std::string sha256_hex(std::string_view data) {
  unsigned char digest[EVP_MAX_MD_SIZE];
  unsigned int len = 0;
  if (EVP_Digest(data.data(), data.size(), digest, &len, EVP_sha256(), nullptr) != 1)
    throw Error("sha256: EVP_Digest failed");
  static constexpr char kHex[] = "0123456789abcdef";
  std::string out;
  out.reserve(2 * len);
  for (unsigned int i = 0; i < len; ++i) {
    out += kHex[digest[i] >> 4];
    out += kHex[digest[i] & 0xf];
  }
  return out;
}

// nlohmann::json objects are ordered maps, so a compact dump is already the
// sorted-key form with no insignificant whitespace.
inline std::string canonical_json(const json& j) { return j.dump(); }

inline std::string cache_key(std::string_view endpoint, const json& request) {
  return sha256_hex(canonical_json(json{{"endpoint", endpoint}, {"request", request}}));
}

struct CacheEntry {
  std::string key;
  std::string endpoint;
  json request;
  json response;
  std::string created_at;

  json to_json() const {
    return json{{"key", key},           {"endpoint", endpoint}, {"request", request},
                {"response", response}, {"created_at", created_at}};
  }
};

struct CacheStats {
  std::size_t hits = 0;
  std::size_t misses = 0;
  std::size_t skipped_lines = 0;
};

class ResponseCache {
 public:
  static constexpr const char* kFileName = "responses.jsonl";

  explicit ResponseCache(std::filesystem::path dir) : dir_(std::move(dir)) {
    std::error_code ec;
    std::filesystem::create_directories(dir_, ec);
    if (ec) throw ConfigError("cannot create cache directory '" + dir_.string() + "': " + ec.message());
    load();
    out_.open(file(), std::ios::app | std::ios::binary);
    if (!out_) throw ConfigError("cache file '" + file().string() + "' is not writable");
  }

  ResponseCache(const ResponseCache&) = delete;
  ResponseCache& operator=(const ResponseCache&) = delete;

  std::filesystem::path file() const { return dir_ / kFileName; }

  std::optional<json> lookup(const std::string& key) {
    std::shared_lock lock(mu_);
    auto it = entries_.find(key);
    if (it == entries_.end()) {
      ++misses_;
      return std::nullopt;
    }
    ++hits_;
    return it->second;
  }

  void store(const std::string& key, std::string_view endpoint, const json& request,
             const json& response) {
    CacheEntry e{key, std::string(endpoint), request, response, timestamp()};
    const std::string line = e.to_json().dump() + "\n";
    std::unique_lock lock(mu_);
    out_ << line;
    out_.flush();
    if (!out_) throw Error("cache append to '" + file().string() + "' failed");
    entries_[key] = response;
  }

  std::size_t size() const {
    std::shared_lock lock(mu_);
    return entries_.size();
  }

  CacheStats stats() const { return {hits_.load(), misses_.load(), skipped_lines_}; }

  const std::vector<std::string>& warnings() const { return warnings_; }

 private:
  std::filesystem::path dir_;
  std::unordered_map<std::string, json> entries_;
  mutable std::shared_mutex mu_;
  std::ofstream out_;
  std::atomic<std::size_t> hits_{0};
  std::atomic<std::size_t> misses_{0};
  std::size_t skipped_lines_ = 0;
  std::vector<std::string> warnings_;

  static std::string timestamp() {
    const auto now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
    std::tm tm{};
    gmtime_r(&now, &tm);
    char buf[32];
    std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
    return buf;
  }

  void load() {
    std::ifstream in(file(), std::ios::binary);
    if (!in) return;
    std::string line;
    std::size_t lineno = 0;
    while (std::getline(in, line)) {
      ++lineno;
      if (line.empty()) continue;
      try {
        json j = json::parse(line);
        entries_[j.at("key").get<std::string>()] = j.at("response");
      } catch (const json::exception& e) {
        ++skipped_lines_;
        warnings_.push_back(file().string() + ":" + std::to_string(lineno) +
                            ": skipping corrupt cache line (" + e.what() + ")");
        std::cerr << "warning: " << warnings_.back() << "\n";
      }
    }
  }
};

// Serves repeated requests from the cache; misses go to the inner backend
// and are appended before returning.
class CachedClassifier : public Classifier {
 public:
  CachedClassifier(Classifier& inner, ResponseCache& cache) : inner_(inner), cache_(cache) {}

  LabelDistribution classify(const ClassifyRequest& request) override {
    const json req = request.to_json();
    const std::string key = cache_key(kClassifyPath, req);
    if (auto hit = cache_.lookup(key)) return distribution_from_json(*hit);
    const LabelDistribution d = inner_.classify(request);
    cache_.store(key, kClassifyPath, req, to_json(d));
    return d;
  }

 private:
  Classifier& inner_;
  ResponseCache& cache_;
};

class CachedGenerator : public TextGenerator {
 public:
  CachedGenerator(TextGenerator& inner, ResponseCache& cache) : inner_(inner), cache_(cache) {}

  std::string generate(const GenerateRequest& request) override {
    const json req = request.to_json();
    const std::string key = cache_key(kGeneratePath, req);
    if (auto hit = cache_.lookup(key)) {
      try {
        return hit->at("text").get<std::string>();
      } catch (const json::exception& e) {
        throw ProtocolError(std::string("cached generate entry is malformed: ") + e.what(), 200,
                            hit->dump());
      }
    }
    std::string text = inner_.generate(request);
    cache_.store(key, kGeneratePath, req, json{{"text", text}});
    return text;
  }

 private:
  TextGenerator& inner_;
  ResponseCache& cache_;
};

}  // namespace ftc
