#pragma once

// Mock HTTP server speaking the classify/generate protocol, backed by an
// oracle world and/or canned generator responses.

#include <memory>
#include <mutex>
#include <string>
#include <thread>

#include <httplib.h>
#include <nlohmann/json.hpp>

#include "ftc/errors.hpp"
#include "ftc/mock.hpp"
#include "ftc/oracle.hpp"
#include "ftc/protocol.hpp"

namespace ftc {

class MockServer {
 public:
  explicit MockServer(MockConfig config) : config_(std::move(config)) {
    if (config_.world) classifier_ = std::make_unique<OracleClassifier>(*config_.world, config_.oracle);
    generator_ = std::make_unique<CannedGenerator>(config_.canned);
    install_routes();
  }

  ~MockServer() { stop(); }

  MockServer(const MockServer&) = delete;
  MockServer& operator=(const MockServer&) = delete;

  // Binds (port 0 picks a free port) and serves on a background thread.
  int start(const std::string& host = "127.0.0.1", int port = 0) {
    if (port == 0) {
      port_ = server_.bind_to_any_port(host);
    } else {
      port_ = server_.bind_to_port(host, port) ? port : -1;
    }
    if (port_ < 0) throw ConfigError("mock server: cannot bind " + host + ":" + std::to_string(port));
    host_ = host;
    thread_ = std::thread([this] { server_.listen_after_bind(); });
    server_.wait_until_ready();
    return port_;
  }

  // Serves on the calling thread until stop() is called from elsewhere.
  void run(const std::string& host, int port) {
    host_ = host;
    port_ = port;
    if (!server_.listen(host, port)) throw ConfigError("mock server: cannot listen on " + url());
  }

  void stop() {
    server_.stop();
    if (thread_.joinable()) thread_.join();
  }

  std::string url() const { return "http://" + host_ + ":" + std::to_string(port_); }
  int port() const { return port_; }

 private:
  MockConfig config_;
  std::unique_ptr<OracleClassifier> classifier_;
  std::unique_ptr<CannedGenerator> generator_;
  httplib::Server server_;
  std::thread thread_;
  std::string host_ = "127.0.0.1";
  int port_ = -1;

  static void send(httplib::Response& res, int status, const json& body) {
    res.status = status;
    res.set_content(body.dump(), "application/json");
  }

  template <typename Handler>
  void post(const std::string& path, Handler handler) {
    server_.Post(path, [handler](const httplib::Request& req, httplib::Response& res) {
      json body;
      try {
        body = json::parse(req.body);
      } catch (const json::parse_error& e) {
        send(res, 400, error_body("bad_json", e.what()));
        return;
      }
      try {
        send(res, 200, handler(body));
      } catch (const json::exception& e) {
        send(res, 400, error_body("bad_request", e.what()));
      } catch (const ArgumentError& e) {
        send(res, 400, error_body("bad_request", e.what()));
      } catch (const ProtocolError& e) {
        const int status = e.status ? e.status : 422;
        send(res, status, error_body(status == 503 ? "unavailable" : "no_canned_response", e.what()));
      } catch (const std::exception& e) {
        send(res, 500, error_body("internal", e.what()));
      }
    });
  }

  void install_routes() {
    post(std::string(kClassifyPath), [this](const json& body) {
      if (!classifier_) throw ProtocolError("mock server has no oracle world configured", 503);
      return to_json(classifier_->classify(ClassifyRequest::from_json(body)));
    });
    post(std::string(kGeneratePath), [this](const json& body) {
      GenerateRequest req = GenerateRequest::from_json(body);
      req.validate(config_.max_tokens_cap);
      return json{{"text", generator_->generate(req)}};
    });
    auto not_found = [](const httplib::Request& req, httplib::Response& res) {
      send(res, 404, error_body("not_found", "no endpoint " + req.method + " " + req.path));
    };
    server_.set_error_handler([](const httplib::Request& req, httplib::Response& res) {
      if (res.status == 404 && res.body.empty())
        send(res, 404, error_body("not_found", "no endpoint " + req.method + " " + req.path));
    });
    server_.Get(".*", not_found);
  }
};

}  // namespace ftc
