// JSON routing for the service, plus the socket server around it.

#include "pipekit/http_api.hpp"

#include <httplib.h>

#include <vector>

namespace pipekit {

int http_status(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::UnknownModel:
    case ErrorKind::UnknownSession:
      return 404;
    case ErrorKind::InconsistentAssignment:
    case ErrorKind::EmptyResidual:
    case ErrorKind::EmptyHistory:
    case ErrorKind::NoSuchArm:
    case ErrorKind::DuplicateId:
      return 409;
    case ErrorKind::IoError:
      return 500;
    default:
      return 400;
  }
}

namespace {

std::vector<std::string> split_path(const std::string& path) {
  std::vector<std::string> parts;
  std::string cur;
  for (char c : path) {
    if (c == '/') {
      if (!cur.empty()) parts.push_back(std::move(cur));
      cur.clear();
    } else {
      cur.push_back(c);
    }
  }
  if (!cur.empty()) parts.push_back(std::move(cur));
  return parts;
}

HttpReply ok(const json& j, int status = 200) { return HttpReply{status, j.dump()}; }

HttpReply fail(int status, std::string_view kind, const std::string& message) {
  return HttpReply{status, json{{"error", kind}, {"message", message}}.dump()};
}

json parse_body(const std::string& body) {
  if (body.empty()) return json::object();
  try {
    return json::parse(body);
  } catch (const json::exception& e) {
    throw Error(ErrorKind::InvalidJson, std::string("request body: ") + e.what());
  }
}

std::string string_field(const json& j, const char* name) {
  if (!j.is_object() || !j.contains(name) || !j[name].is_string()) {
    throw Error(ErrorKind::InvalidJson, std::string("expected string field '") + name + "'");
  }
  return j[name].get<std::string>();
}

HttpReply upload(Service& svc, const std::string& body) {
  std::string dsl = body;
  std::string id;
  // JSON envelope when it looks like one; DSL text otherwise.
  auto first = body.find_first_not_of(" \t\r\n");
  if (first != std::string::npos && body[first] == '{') {
    json j = json::parse(body, nullptr, false);
    if (!j.is_discarded() && j.is_object() && j.contains("dsl")) {
      dsl = string_field(j, "dsl");
      if (j.contains("id")) id = string_field(j, "id");
    }
  }
  return ok(json{{"id", svc.upload_model(dsl, id)}}, 201);
}

HttpReply session_route(Service& svc, const std::string& method, const std::string& sid, const std::string& action,
                        const std::string& body) {
  if (action == "view" && method == "GET") return ok(to_json(svc.view(sid)));
  if (method != "POST") return fail(405, "MethodNotAllowed", method + " not allowed here");
  if (action == "input") {
    json j = parse_body(body);
    if (j.is_object() && j.contains("text")) return ok(to_json(svc.apply_input(sid, parse_input_text(string_field(j, "text")))));
    const json& input = j.is_object() && j.contains("input") ? j["input"] : j;
    auto m = svc.model(svc.view(sid).model);
    return ok(to_json(svc.apply_input(sid, assignment_from_json(*m, input))));
  }
  if (action == "browse") {
    json j = parse_body(body);
    LinkTest t = j.contains("key") ? LinkTest(string_field(j, "key"), j.value("value", std::string(kFlagValue)))
                                   : LinkTest::parse(string_field(j, "test"));
    return ok(to_json(svc.browse(sid, t)));
  }
  if (action == "undo") return ok(to_json(svc.undo(sid)));
  if (action == "reset") return ok(to_json(svc.reset(sid)));
  return fail(404, "NotFound", "no route " + action);
}

}  // namespace

HttpReply handle_request(Service& svc, const std::string& method, const std::string& path, const std::string& body) {
  try {
    auto parts = split_path(path);
    if (!parts.empty() && parts[0] == "api") parts.erase(parts.begin());
    if (parts.size() == 1 && parts[0] == "models") {
      if (method == "GET") return ok(json{{"models", svc.list_models()}});
      if (method == "POST") return upload(svc, body);
    }
    if (parts.size() == 2 && parts[0] == "models" && method == "GET") {
      auto m = svc.model(parts[1]);
      return ok(json{{"id", parts[1]}, {"dsl", serialize(*m)}, {"program", to_json(*m)}});
    }
    if (parts.size() == 1 && parts[0] == "sessions") {
      if (method == "GET") return ok(json{{"sessions", svc.list_sessions()}});
      if (method == "POST") return ok(to_json(svc.create_session(string_field(parse_body(body), "model"))), 201);
    }
    if (parts.size() == 2 && parts[0] == "sessions" && method == "GET") return ok(to_json(svc.view(parts[1])));
    if (parts.size() == 3 && parts[0] == "sessions") return session_route(svc, method, parts[1], parts[2], body);
    return fail(404, "NotFound", "no route " + method + " " + path);
  } catch (const Error& e) {
    return fail(http_status(e.kind()), to_string(e.kind()), e.what());
  } catch (const json::exception& e) {
    return fail(400, to_string(ErrorKind::InvalidJson), e.what());
  } catch (const std::exception& e) {
    return fail(500, "Internal", e.what());
  }
}

// ---------------------------------------------------------------------------

struct HttpServer::Impl {
  Impl(Service& s, ServeOptions o) : svc(s), opts(std::move(o)) {}
  Service& svc;
  ServeOptions opts;
  httplib::Server server;
};

HttpServer::HttpServer(Service& svc, ServeOptions opts) : impl_(std::make_unique<Impl>(svc, std::move(opts))) {
  auto handler = [this](const httplib::Request& req, httplib::Response& res) {
    HttpReply r = handle_request(impl_->svc, req.method, req.path, req.body);
    res.status = r.status;
    res.set_content(r.body, "application/json");
  };
  impl_->server.set_default_headers({{"Access-Control-Allow-Origin", "*"},
                                     {"Access-Control-Allow-Headers", "Content-Type"},
                                     {"Access-Control-Allow-Methods", "GET, POST, OPTIONS"}});
  impl_->server.Get(".*", handler);
  impl_->server.Post(".*", handler);
  impl_->server.Options(".*", [](const httplib::Request&, httplib::Response& res) { res.status = 204; });
}

HttpServer::~HttpServer() = default;

int HttpServer::bind() {
  const auto& o = impl_->opts;
  int port = o.port;
  if (port == 0) {
    port = impl_->server.bind_to_any_port(o.host);
    if (port < 0) throw Error(ErrorKind::IoError, "cannot bind " + o.host);
  } else if (!impl_->server.bind_to_port(o.host, port)) {
    throw Error(ErrorKind::IoError, "cannot bind " + o.host + ":" + std::to_string(port));
  }
  return port;
}

void HttpServer::run() {
  impl_->server.listen_after_bind();
  if (!impl_->opts.snapshot.empty()) impl_->svc.save_snapshot(impl_->opts.snapshot);
}

void HttpServer::stop() { impl_->server.stop(); }

}  // namespace pipekit
