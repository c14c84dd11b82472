#pragma once

#include <memory>
#include <string>

#include "fairdiv/session.hpp"

namespace httplib {
class Server;
}

namespace fairdiv {

/// HTTP+JSON front end over a SessionRegistry.
///
///   POST /sessions                 create, 201 {session_id, state}
///   GET  /sessions/{id}/next       pending query or {status}; ?wait_ms=N long-polls
///   POST /sessions/{id}/answers    {query_id, selection}; 409 stale, 422 invalid
///   GET  /sessions/{id}/result     report when done, 202 while running
///   GET  /sessions/{id}/log        spec and answer log
///   GET  /healthz
class HttpService {
 public:
  explicit HttpService(SessionRegistry& registry);
  ~HttpService();

  /// Binds and serves until stop(); returns false if the port is unavailable.
  bool listen(const std::string& host, int port);
  /// Binds an ephemeral port; serve with listen_after_bind().
  int bind_any_port(const std::string& host);
  bool listen_after_bind();
  void stop();
  void wait_until_ready() const;

 private:
  void install_routes();

  SessionRegistry& registry_;
  std::unique_ptr<httplib::Server> server_;
};

}  // namespace fairdiv
