#include "fairdiv/http_service.hpp"

#include <algorithm>

#include <httplib.h>
#include <spdlog/spdlog.h>

namespace fairdiv {

namespace {

void send_json(httplib::Response& res, int status, const json& body) {
  res.status = status;
  res.set_content(body.dump(2) + "\n", "application/json");
}

void send_error(httplib::Response& res, int status, const std::string& message, json extra = json::object()) {
  extra["error"] = message;
  send_json(res, status, extra);
}

json status_json(const Session& s, const Session::Snapshot& snap) {
  json out{{"session_id", s.id()}, {"status", to_string(snap.state)}, {"answered", snap.answered}};
  if (!snap.error.empty()) out["error"] = snap.error;
  return out;
}

}  // namespace

HttpService::HttpService(SessionRegistry& registry) : registry_(registry), server_(std::make_unique<httplib::Server>()) {
  install_routes();
}

HttpService::~HttpService() { stop(); }

void HttpService::install_routes() {
  auto& srv = *server_;
  srv.set_default_headers({{"Access-Control-Allow-Origin", "*"},
                           {"Access-Control-Allow-Headers", "Content-Type"},
                           {"Access-Control-Allow-Methods", "GET, POST, OPTIONS"}});
  srv.Options(R"(/.*)", [](const httplib::Request&, httplib::Response& res) { res.status = 204; });

  srv.Get("/healthz", [this](const httplib::Request&, httplib::Response& res) {
    send_json(res, 200, {{"status", "ok"}, {"sessions", registry_.size()}});
  });

  srv.Post("/sessions", [this](const httplib::Request& req, httplib::Response& res) {
    try {
      const json body = parse_json_text(req.body, "body");
      auto session = registry_.create(session_spec_from_json(body));
      const auto snap = session->snapshot();
      send_json(res, 201, {{"session_id", session->id()}, {"status", to_string(snap.state)}});
    } catch (const JsonError& e) {
      send_error(res, 400, e.what(), {{"field", e.where()}});
    } catch (const std::invalid_argument& e) {
      send_error(res, 422, e.what());
    }
  });

  srv.Get(R"(/sessions/([^/]+)/next)", [this](const httplib::Request& req, httplib::Response& res) {
    auto session = registry_.find(req.matches[1]);
    if (!session) return send_error(res, 404, "unknown session");
    long wait_ms = 0;
    if (req.has_param("wait_ms")) {
      try {
        wait_ms = std::clamp(std::stol(req.get_param_value("wait_ms")), 0L, 30000L);
      } catch (const std::exception&) {
        return send_error(res, 400, "wait_ms must be an integer");
      }
    }
    const auto snap = wait_ms > 0 ? session->wait(std::chrono::milliseconds(wait_ms)) : session->snapshot();
    json out = status_json(*session, snap);
    if (snap.pending) out["query"] = query_to_json(*snap.pending, session->spec().framing);
    send_json(res, 200, out);
  });

  srv.Post(R"(/sessions/([^/]+)/answers)", [this](const httplib::Request& req, httplib::Response& res) {
    auto session = registry_.find(req.matches[1]);
    if (!session) return send_error(res, 404, "unknown session");
    std::uint64_t query_id = 0;
    Selection selection;
    try {
      const json body = parse_json_text(req.body, "body");
      if (!body.is_object() || !body.contains("query_id") || !body["query_id"].is_number_unsigned()) {
        throw JsonError("$.query_id", "expected a query id");
      }
      query_id = body["query_id"].get<std::uint64_t>();
      if (!body.contains("selection")) throw JsonError("$.selection", "missing field");
      selection = selection_from_json(body["selection"], "$.selection");
    } catch (const JsonError& e) {
      return send_error(res, 400, e.what(), {{"field", e.where()}});
    }
    const auto result = session->submit(query_id, selection);
    switch (result.status) {
      case Session::SubmitStatus::accepted:
        return send_json(res, 200, {{"accepted", true}});
      case Session::SubmitStatus::stale:
        return send_error(res, 409, "query " + std::to_string(query_id) + " is not the pending query");
      case Session::SubmitStatus::closed:
        return send_error(res, 409, "session is " + std::string(to_string(session->snapshot().state)));
      case Session::SubmitStatus::invalid:
        return send_error(res, 422, "invalid selection: " + result.violation->message,
                          {{"rule", result.violation->rule}});
    }
  });

  srv.Get(R"(/sessions/([^/]+)/result)", [this](const httplib::Request& req, httplib::Response& res) {
    auto session = registry_.find(req.matches[1]);
    if (!session) return send_error(res, 404, "unknown session");
    const auto snap = session->snapshot();
    if (snap.state == SessionState::done) {
      auto report = session->report();
      res.status = 200;
      res.set_content(render_report(*report), "application/json");
      return;
    }
    send_json(res, snap.state == SessionState::failed ? 409 : 202, status_json(*session, snap));
  });

  srv.Get(R"(/sessions/([^/]+)/log)", [this](const httplib::Request& req, httplib::Response& res) {
    auto session = registry_.find(req.matches[1]);
    if (!session) return send_error(res, 404, "unknown session");
    json answers = json::array();
    for (const auto& a : session->answers()) answers.push_back(answer_to_json(a));
    send_json(res, 200, {{"spec", session_spec_to_json(session->spec())}, {"answers", std::move(answers)}});
  });

  srv.set_exception_handler([](const httplib::Request&, httplib::Response& res, std::exception_ptr ep) {
    try {
      std::rethrow_exception(ep);
    } catch (const std::exception& e) {
      send_error(res, 500, e.what());
    } catch (...) {
      send_error(res, 500, "internal error");
    }
  });
}

bool HttpService::listen(const std::string& host, int port) {
  spdlog::info("listening on {}:{}", host, port);
  return server_->listen(host, port);
}

int HttpService::bind_any_port(const std::string& host) { return server_->bind_to_any_port(host); }

bool HttpService::listen_after_bind() { return server_->listen_after_bind(); }

void HttpService::stop() {
  if (server_) server_->stop();
}

void HttpService::wait_until_ready() const { server_->wait_until_ready(); }

}  // namespace fairdiv
