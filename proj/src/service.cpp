#include "hextm/service.hpp"

#include <httplib.h>

#include <algorithm>
#include <chrono>
#include <charconv>
#include <cmath>
#include <thread>
#include <variant>

#include "hextm/datagen.hpp"
#include "hextm/errors.hpp"
#include "hextm/model_io.hpp"

namespace hextm::service {

namespace {

Response error(int status, const std::string& message) { return {status, Json{{"error", message}}}; }

// Parses {"board": "..."} into a legal board, or returns the 400 response.
std::variant<Board, Response> parse_board_request(std::string_view body) {
  Json req;
  try {
    req = Json::parse(body);
  } catch (const nlohmann::json::exception&) {
    return error(400, "request body is not valid JSON");
  }
  if (!req.is_object() || !req.contains("board") || !req["board"].is_string()) {
    return error(400, "request must be an object with a string field 'board'");
  }
  try {
    return parse_flat(req["board"].get<std::string>());
  } catch (const ParseError& e) {
    return error(400, e.what());
  } catch (const InvalidEncoding& e) {
    return error(400, e.what());
  }
}

}  // namespace

PredictionService::PredictionService(const Options& options) : origins_(options.origins) {
  if (options.model) {
    const auto t0 = std::chrono::steady_clock::now();
    bank_.emplace(load_model(*options.model));
    load_ms_ = std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - t0).count();
    model_path_ = options.model->string();
    if (options.data) {
      const auto records = read_dataset(*options.data);
      if (!records.empty()) stats_ = clause_stats(*bank_, records);
    }
  }
}

Response PredictionService::health() const {
  if (!bank_) return {200, Json{{"status", "no_model"}, {"modelInfo", nullptr}}};
  return {200, Json{{"status", "ok"},
                    {"modelInfo",
                     {{"path", model_path_},
                      {"nClauses", bank_->num_clauses()},
                      {"o", bank_->num_features()},
                      {"loadTimeMs", std::round(load_ms_ * 1000.0) / 1000.0},
                      {"clauseStats", has_stats()}}}}};
}

Response PredictionService::predict(std::string_view body) const {
  if (!bank_) return error(503, "no model loaded");
  auto parsed = parse_board_request(body);
  if (auto* r = std::get_if<Response>(&parsed)) return *r;
  return {200, prediction_json(hextm::predict(*bank_, encode(std::get<Board>(parsed))))};
}

Response PredictionService::interpret(std::string_view body) const {
  if (!bank_) return error(503, "no model loaded");
  auto parsed = parse_board_request(body);
  if (auto* r = std::get_if<Response>(&parsed)) return *r;
  return {200, heatmap_json(local_interpretation(*bank_, std::get<Board>(parsed)))};
}

Response PredictionService::top_clauses(const std::map<std::string, std::string>& params) const {
  if (!bank_) return error(503, "no model loaded");
  if (!has_stats()) return error(503, "clause statistics unavailable (start the service with a reference dataset)");

  auto param = [&](const char* key, const char* fallback) {
    const auto it = params.find(key);
    return it == params.end() ? std::string(fallback) : it->second;
  };
  const std::string pol = param("polarity", "positive");
  Polarity polarity;
  if (pol == "positive" || pol == "+" || pol == "pos") {
    polarity = Polarity::Positive;
  } else if (pol == "negative" || pol == "-" || pol == "neg") {
    polarity = Polarity::Negative;
  } else {
    return error(400, "polarity must be 'positive' or 'negative'");
  }

  const std::string k_text = param("k", "10");
  int k = 0;
  const auto [kp, kec] = std::from_chars(k_text.data(), k_text.data() + k_text.size(), k);
  if (kec != std::errc{} || kp != k_text.data() + k_text.size() || k < 1) return error(400, "k must be a positive integer");

  const std::string a_text = param("alpha", "10");
  double alpha = 0.0;
  const auto [ap, aec] = std::from_chars(a_text.data(), a_text.data() + a_text.size(), alpha);
  if (aec != std::errc{} || ap != a_text.data() + a_text.size() || !(alpha >= 0.0) || !std::isfinite(alpha)) {
    return error(400, "alpha must be a non-negative number");
  }

  const TopClauses top = hextm::top_clauses(*bank_, stats_, polarity, k, alpha);
  return {200, top_clauses_json(top, polarity, k, alpha)};
}

struct HttpServer::Impl {
  explicit Impl(const PredictionService& s) : service(s) {}

  void write(const httplib::Request& req, httplib::Response& res, const Response& r) const {
    allow_origin(req, res);
    res.status = r.status;
    res.set_content(r.body.dump(), "application/json");
  }

  void allow_origin(const httplib::Request& req, httplib::Response& res) const {
    const auto& allowed = service.origins();
    if (allowed.empty()) return;
    const std::string origin = req.get_header_value("Origin");
    const bool any = std::find(allowed.begin(), allowed.end(), "*") != allowed.end();
    if (any) {
      res.set_header("Access-Control-Allow-Origin", "*");
    } else if (!origin.empty() && std::find(allowed.begin(), allowed.end(), origin) != allowed.end()) {
      res.set_header("Access-Control-Allow-Origin", origin);
      res.set_header("Vary", "Origin");
    }
  }

  void routes() {
    server.Get("/health", [this](const httplib::Request& req, httplib::Response& res) {
      write(req, res, service.health());
    });
    server.Post("/predict", [this](const httplib::Request& req, httplib::Response& res) {
      write(req, res, service.predict(req.body));
    });
    server.Post("/interpret", [this](const httplib::Request& req, httplib::Response& res) {
      write(req, res, service.interpret(req.body));
    });
    server.Get("/clauses/top", [this](const httplib::Request& req, httplib::Response& res) {
      std::map<std::string, std::string> params;
      for (const auto& [key, value] : req.params) params.emplace(key, value);
      write(req, res, service.top_clauses(params));
    });
    server.Options(R"(/.*)", [this](const httplib::Request& req, httplib::Response& res) {
      allow_origin(req, res);
      res.set_header("Access-Control-Allow-Methods", "GET, POST, OPTIONS");
      res.set_header("Access-Control-Allow-Headers", "Content-Type");
      res.status = 204;
    });
  }

  const PredictionService& service;
  httplib::Server server;
  std::thread thread;
};

HttpServer::HttpServer(const PredictionService& service) : impl_(std::make_unique<Impl>(service)) { impl_->routes(); }

HttpServer::~HttpServer() { stop(); }

int HttpServer::start(const std::string& host, int port) {
  const int bound = port == 0 ? impl_->server.bind_to_any_port(host) : (impl_->server.bind_to_port(host, port) ? port : -1);
  if (bound < 0) throw std::runtime_error("cannot bind " + host + ":" + std::to_string(port));
  impl_->thread = std::thread([this] { impl_->server.listen_after_bind(); });
  impl_->server.wait_until_ready();
  return bound;
}

void HttpServer::listen(const std::string& host, int port) {
  if (!impl_->server.listen(host, port)) throw std::runtime_error("cannot listen on " + host + ":" + std::to_string(port));
}

void HttpServer::stop() {
  if (!impl_) return;
  impl_->server.stop();
  if (impl_->thread.joinable()) impl_->thread.join();
}

}  // namespace hextm::service
