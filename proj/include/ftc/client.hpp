#pragma once

// HTTP clients for the classify/generate wire protocol.

#include <algorithm>
#include <chrono>
#include <cstdlib>
#include <optional>
#include <semaphore>
#include <string>
#include <thread>
#include <vector>

#include <httplib.h>
#include <nlohmann/json.hpp>

#include "ftc/errors.hpp"
#include "ftc/protocol.hpp"

namespace ftc {

struct RetryPolicy {
  int max_attempts = 3;
  std::vector<double> backoff_seconds{0.5, 1.0, 2.0};

  double delay_after(int attempt) const {
    if (backoff_seconds.empty()) return 0.0;
    const auto i = static_cast<std::size_t>(attempt);
    return backoff_seconds[std::min(i, backoff_seconds.size() - 1)];
  }
};

struct EndpointConfig {
  std::string url;  // scheme://host:port[/prefix]
  std::optional<std::string> bearer_token;
  double timeout_seconds = 60.0;
  int max_in_flight = 4;
  RetryPolicy retry;
};

namespace detail {

struct SplitUrl {
  std::string origin;
  std::string prefix;
};

inline SplitUrl split_url(const std::string& url) {
  const auto scheme = url.find("://");
  if (scheme == std::string::npos) throw ConfigError("endpoint url '" + url + "' has no scheme");
  const auto slash = url.find('/', scheme + 3);
  if (slash == std::string::npos) return {url, ""};
  std::string prefix = url.substr(slash);
  while (!prefix.empty() && prefix.back() == '/') prefix.pop_back();
  return {url.substr(0, slash), prefix};
}

}  // namespace detail

// POSTs JSON with bounded retries. Connection failures, 5xx and 429 are
// retried; other non-200 answers are protocol errors carrying the body.
class JsonTransport {
 public:
  explicit JsonTransport(EndpointConfig cfg)
      : cfg_(std::move(cfg)),
        url_(detail::split_url(cfg_.url)),
        slots_(std::clamp<std::ptrdiff_t>(cfg_.max_in_flight, 1, kMaxSlots)) {
    if (cfg_.max_in_flight < 1 || cfg_.max_in_flight > kMaxSlots)
      throw ConfigError("max_in_flight must be in [1, " + std::to_string(kMaxSlots) + "]");
    if (cfg_.retry.max_attempts < 1) throw ConfigError("retry.max_attempts must be >= 1");
  }

  const EndpointConfig& config() const { return cfg_; }

  json post(std::string_view path, const json& body) {
    slots_.acquire();
    struct Release {
      std::counting_semaphore<kMaxSlots>& s;
      ~Release() { s.release(); }
    } release{slots_};

    const std::string full_path = url_.prefix + std::string(path);
    const std::string payload = body.dump();
    std::string last_error;
    for (int attempt = 0; attempt < cfg_.retry.max_attempts; ++attempt) {
      if (attempt > 0)
        std::this_thread::sleep_for(std::chrono::duration<double>(cfg_.retry.delay_after(attempt - 1)));
      httplib::Client cli(url_.origin);
      const auto timeout = std::chrono::duration_cast<std::chrono::microseconds>(
          std::chrono::duration<double>(cfg_.timeout_seconds));
      cli.set_connection_timeout(timeout);
      cli.set_read_timeout(timeout);
      cli.set_write_timeout(timeout);
      if (cfg_.bearer_token) cli.set_bearer_token_auth(*cfg_.bearer_token);
      auto res = cli.Post(full_path, payload, "application/json");
      if (!res) {
        last_error = httplib::to_string(res.error());
        continue;
      }
      if (res->status == 200) {
        try {
          return json::parse(res->body);
        } catch (const json::parse_error& e) {
          throw ProtocolError(std::string("response is not JSON: ") + e.what(), res->status, res->body);
        }
      }
      if (res->status >= 500 || res->status == 429) {
        last_error = "HTTP " + std::to_string(res->status) + ": " + res->body;
        continue;
      }
      throw ProtocolError("HTTP " + std::to_string(res->status) + " from " + cfg_.url + full_path +
                              ": " + describe_error(res->body),
                          res->status, res->body);
    }
    throw TransportError(cfg_.url + full_path + " failed after " +
                         std::to_string(cfg_.retry.max_attempts) + " attempts: " + last_error);
  }

 private:
  static constexpr std::ptrdiff_t kMaxSlots = 256;

  EndpointConfig cfg_;
  detail::SplitUrl url_;
  std::counting_semaphore<kMaxSlots> slots_;

  static std::string describe_error(const std::string& body) {
    try {
      const json j = json::parse(body);
      return j.at("error").at("code").get<std::string>() + ": " +
             j.at("error").at("message").get<std::string>();
    } catch (const json::exception&) {
      return body;
    }
  }
};

class RemoteClassifier : public Classifier {
 public:
  explicit RemoteClassifier(EndpointConfig cfg) : transport_(std::move(cfg)) {}

  LabelDistribution classify(const ClassifyRequest& request) override {
    request.validate();
    return distribution_from_json(transport_.post(kClassifyPath, request.to_json()));
  }

 private:
  JsonTransport transport_;
};

class RemoteGenerator : public TextGenerator {
 public:
  explicit RemoteGenerator(EndpointConfig cfg) : transport_(std::move(cfg)) {}

  std::string generate(const GenerateRequest& request) override {
    request.validate();
    const json body = transport_.post(kGeneratePath, request.to_json());
    try {
      return truncate_at_stop(body.at("text").get<std::string>(), request.stop);
    } catch (const json::exception& e) {
      throw ProtocolError(std::string("malformed generate response: ") + e.what(), 200, body.dump());
    }
  }

 private:
  JsonTransport transport_;
};

// Environment overrides win over configured values.
inline std::string env_or(const char* name, const std::string& fallback) {
  if (const char* v = std::getenv(name); v && *v) return v;
  return fallback;
}

}  // namespace ftc
