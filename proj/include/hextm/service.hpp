#pragma once

#include <filesystem>
#include <map>
#include <memory>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "hextm/interpret.hpp"
#include "hextm/json_io.hpp"
#include "hextm/tsetlin.hpp"

namespace hextm::service {

struct Options {
  std::optional<std::filesystem::path> model;
  std::optional<std::filesystem::path> data;  // reference dataset for clause stats
  std::vector<std::string> origins;           // CORS allow-list; "*" allows any
};

struct Response {
  int status = 200;
  Json body;
};

// Request handlers over an immutable model. Everything is loaded in the
// constructor; handlers only read, so one instance serves concurrent
// requests.
class PredictionService {
 public:
  explicit PredictionService(const Options& options);

  bool has_model() const { return bank_.has_value(); }
  bool has_stats() const { return !stats_.empty(); }
  const std::vector<std::string>& origins() const { return origins_; }

  Response health() const;
  // Body: {"board": "<36 chars of . B W>"}.
  Response predict(std::string_view body) const;
  Response interpret(std::string_view body) const;
  // Missing parameters default to polarity=positive, k=10, alpha=10.
  Response top_clauses(const std::map<std::string, std::string>& params) const;

 private:
  std::optional<ClauseBank> bank_;
  std::vector<ClauseStats> stats_;
  std::string model_path_;
  double load_ms_ = 0.0;
  std::vector<std::string> origins_;
};

// HTTP/1.1 front end. start() returns once the socket is listening.
class HttpServer {
 public:
  explicit HttpServer(const PredictionService& service);
  ~HttpServer();
  HttpServer(const HttpServer&) = delete;
  HttpServer& operator=(const HttpServer&) = delete;

  // Binds host:port (port 0 picks a free one) and serves on a background
  // thread. Returns the bound port.
  int start(const std::string& host, int port);
  // Serves on the calling thread until stop() is called elsewhere.
  void listen(const std::string& host, int port);
  void stop();

 private:
  struct Impl;
  std::unique_ptr<Impl> impl_;
};

}  // namespace hextm::service
