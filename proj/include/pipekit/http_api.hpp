// http_api.hpp
//
// JSON over HTTP for the service:
//   POST /models                  {"dsl": "...", "id"?: "..."} or DSL text -> {"id"}
//   GET  /models                  -> {"models": [...]}
//   GET  /models/{id}             -> {"id", "dsl", "program"}
//   POST /sessions                {"model": id} -> View
//   GET  /sessions/{id}/view      -> View
//   POST /sessions/{id}/input     {"input": {key: value}} or {"text": "Party=Dem, CA"} -> View
//   POST /sessions/{id}/browse    {"test": "Sen"} -> View
//   POST /sessions/{id}/undo      -> View
//   POST /sessions/{id}/reset     -> View
// Errors come back as {"error": kind, "message": text} with 400, 404 or 409.

#pragma once

#include <memory>
#include <string>

#include "pipekit/service.hpp"

namespace pipekit {

struct HttpReply {
  int status = 200;
  std::string body;  // JSON
};

/// Routes one request; never throws.
HttpReply handle_request(Service& svc, const std::string& method, const std::string& path, const std::string& body);

int http_status(ErrorKind kind);

struct ServeOptions {
  std::string host = "127.0.0.1";
  int port = 8080;  // 0 picks a free port
  std::string snapshot;  // written on shutdown when set
};

class HttpServer {
 public:
  HttpServer(Service& svc, ServeOptions opts);
  ~HttpServer();
  HttpServer(const HttpServer&) = delete;
  HttpServer& operator=(const HttpServer&) = delete;

  /// Binds the port; returns the port actually bound. Throws IoError.
  int bind();
  /// Serves until stop(); writes the snapshot afterwards.
  void run();
  void stop();

 private:
  struct Impl;
  std::unique_ptr<Impl> impl_;
};

}  // namespace pipekit
