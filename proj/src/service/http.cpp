#include <chrono>

#include <httplib.h>
#include <json.hpp>

#include "bugrank/error.hpp"
#include "bugrank/service.hpp"

namespace bugrank {

namespace {

HttpReply error_reply(int status, const std::string& message) {
  return {status, nlohmann::ordered_json{{"error", message}}.dump()};
}

bool blank(const std::string& s) {
  return s.find_first_not_of(" \t\r\n") == std::string::npos;
}

}  // namespace

HttpReply handle_recommend(const Engine& engine, const std::string& request_body) {
  const auto start = std::chrono::steady_clock::now();
  nlohmann::json req;
  try {
    req = nlohmann::json::parse(request_body);
  } catch (const nlohmann::json::exception&) {
    return error_reply(400, "request body is not valid JSON");
  }
  if (!req.is_object()) return error_reply(400, "request body must be a JSON object");
  const auto q = req.find("query");
  if (q == req.end() || !q->is_string()) return error_reply(400, "\"query\" must be a string");
  const auto text = q->get<std::string>();
  if (blank(text)) return error_reply(400, "\"query\" is empty");
  std::size_t k = 10;
  if (const auto kk = req.find("k"); kk != req.end()) {
    if (!kk->is_number_integer()) return error_reply(400, "\"k\" must be an integer");
    const auto v = kk->get<std::int64_t>();
    if (v < 1 || v > static_cast<std::int64_t>(kMaxResults))
      return error_reply(400, "\"k\" must be between 1 and " + std::to_string(kMaxResults));
    k = static_cast<std::size_t>(v);
  }

  try {
    const auto list = engine.recommend_text(text, k);
    const std::chrono::duration<double, std::milli> elapsed =
        std::chrono::steady_clock::now() - start;
    nlohmann::ordered_json out;
    out["results"] = nlohmann::ordered_json::parse(list.results_json());
    out["latency_ms"] = elapsed.count();
    return {200, out.dump()};
  } catch (const InvalidArgument& e) {
    return error_reply(400, e.what());
  } catch (const std::exception& e) {
    return error_reply(500, e.what());
  }
}

HttpReply handle_health(const Engine& engine) {
  return {200, nlohmann::ordered_json{{"status", "ok"}, {"model_version", engine.version()}}.dump()};
}

struct RecommendServer::Impl {
  const Engine& engine;
  httplib::Server server;
  explicit Impl(const Engine& e) : engine(e) {}
};

RecommendServer::RecommendServer(const Engine& engine) : impl_(std::make_unique<Impl>(engine)) {
  const auto send = [](httplib::Response& res, const HttpReply& reply) {
    res.status = reply.status;
    res.set_content(reply.body, "application/json; charset=utf-8");
  };
  impl_->server.Post("/api/v1/recommend", [this, send](const httplib::Request& req,
                                                        httplib::Response& res) {
    send(res, handle_recommend(impl_->engine, req.body));
  });
  impl_->server.Get("/api/v1/health", [this, send](const httplib::Request&, httplib::Response& res) {
    send(res, handle_health(impl_->engine));
  });
}

RecommendServer::~RecommendServer() { stop(); }

int RecommendServer::bind(const std::string& host, int port) {
  if (port == 0) return impl_->server.bind_to_any_port(host);
  return impl_->server.bind_to_port(host, port) ? port : -1;
}

bool RecommendServer::listen() { return impl_->server.listen_after_bind(); }

void RecommendServer::stop() {
  if (impl_) impl_->server.stop();
}

}  // namespace bugrank
