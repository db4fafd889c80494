#pragma once

#include <string>

#include "rewardkit/service/store.hpp"

namespace httplib {
class Server;
}

namespace rewardkit::service {

struct Response {
  int status = 200;
  Json body;
};

/// JSON request router for the session wire API. Transport-free so it can be
/// driven directly from tests; serve() puts it behind an HTTP listener.
///
///   POST /sessions                {alphabet, epsilon?, query_budget?}   -> {id, status, pending_query}
///   GET  /sessions/{id}                                                 -> full view
///   POST /sessions/{id}/answer    {verdict}     -> {status, pending_query | result | inconsistency}
///   POST /sessions/{id}/requery   {seq?}        -> same shape as answer
///   GET  /sessions/{id}/result
///
/// `alphabet` is either a list of observation names (designer alphabet) or a
/// full Alphabet object. Errors come back as {"error": message}.
class Service {
 public:
  explicit Service(SessionStore& store) : store_(store) {}
  Response handle(const std::string& method, const std::string& path, const std::string& body);

 private:
  SessionStore& store_;
};

/// Registers the routes (plus permissive CORS for a browser frontend) on `server`.
void mount(Service& service, httplib::Server& server);

/// Blocks serving on host:port until the process is stopped.
void serve(Service& service, const std::string& host, int port);

}  // namespace rewardkit::service
