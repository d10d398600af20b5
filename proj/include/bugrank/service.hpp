#pragma once

#include <memory>
#include <string>

#include "bugrank/pipeline.hpp"

namespace bugrank {

inline constexpr std::size_t kMaxResults = 50;

struct HttpReply {
  int status = 200;
  std::string body;
};

/// Request handlers without the socket layer, for tests and the server.
HttpReply handle_recommend(const Engine& engine, const std::string& request_body);
HttpReply handle_health(const Engine& engine);

/// POST /api/v1/recommend and GET /api/v1/health over cpp-httplib.
class RecommendServer {
 public:
  explicit RecommendServer(const Engine& engine);
  ~RecommendServer();
  RecommendServer(const RecommendServer&) = delete;
  RecommendServer& operator=(const RecommendServer&) = delete;

  /// Port 0 picks a free port. Returns the bound port or -1.
  int bind(const std::string& host, int port);
  /// Blocks until stop().
  bool listen();
  void stop();

 private:
  struct Impl;
  std::unique_ptr<Impl> impl_;
};

}  // namespace bugrank
