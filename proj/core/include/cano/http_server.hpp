#pragma once

#include <filesystem>
#include <memory>
#include <optional>
#include <string>

#include "cano/annotation_service.hpp"

namespace cano {

struct HttpOptions {
  std::string host = "127.0.0.1";
  int port = 8080;  // 0 picks a free port
  /// Directory served at `/` (the annotation UI bundle), if any.
  std::optional<std::filesystem::path> static_dir;
};

/// JSON API over an AnnotationService:
///   GET  /api/next?annotator=ID
///   GET  /api/object/{id}
///   POST /api/submit   {"annotator_id", "object_id", "decision", "reason"?, "elapsed_ms"}
///   GET  /api/stats
///   GET  /healthz
class HttpServer {
 public:
  HttpServer(AnnotationService& service, HttpOptions opts);
  ~HttpServer();
  HttpServer(const HttpServer&) = delete;
  HttpServer& operator=(const HttpServer&) = delete;

  /// Binds the socket; returns the bound port. Throws io-error on failure.
  int bind();
  /// Serves until stop(); bind() must have succeeded.
  void listen();
  void stop();

 private:
  struct Impl;
  std::unique_ptr<Impl> impl_;
};

}  // namespace cano
