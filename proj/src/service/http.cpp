#include "rewardkit/service/http.hpp"

#include <httplib.h>

#include <regex>

namespace rewardkit::service {

namespace {

Response error(int status, const std::string& message) { return {status, {{"error", message}}}; }

SessionConfig parse_config(const Json& j) {
  SessionConfig c;
  const auto& a = j.at("alphabet");
  c.alphabet = a.is_array() ? Alphabet::designer(a.get<std::vector<std::string>>()) : alphabet_from_json(a);
  c.epsilon = j.value("epsilon", 1e-6);
  if (j.contains("query_budget") && !j.at("query_budget").is_null())
    c.query_budget = j.at("query_budget").get<std::uint64_t>();
  return c;
}

}  // namespace

Response Service::handle(const std::string& method, const std::string& path, const std::string& body) {
  static const std::regex session_path(R"(^/sessions/([A-Za-z0-9_-]+)(/(answer|requery|result))?/?$)");
  try {
    if (path == "/sessions" || path == "/sessions/") {
      if (method != "POST") return error(405, "use POST to create a session");
      const Json j = Json::parse(body);
      return {201, store_.create(parse_config(j))};
    }
    std::smatch m;
    if (!std::regex_match(path, m, session_path)) return error(404, "no route for " + path);
    const std::string id = m[1], action = m[3];
    if (action.empty()) {
      if (method != "GET") return error(405, "use GET to view a session");
      return {200, store_.view(id)};
    }
    if (action == "result") {
      if (method != "GET") return error(405, "use GET for the result");
      return {200, store_.result(id)};
    }
    if (method != "POST") return error(405, "use POST for " + action);
    if (action == "answer") {
      const Json j = Json::parse(body);
      return {200, store_.answer(id, parse_verdict(j.at("verdict").get<std::string>()))};
    }
    std::optional<std::uint64_t> seq;
    if (!body.empty()) {
      const Json j = Json::parse(body);
      if (j.contains("seq") && !j.at("seq").is_null()) seq = j.at("seq").get<std::uint64_t>();
    }
    return {200, store_.requery(id, seq)};
  } catch (const SessionNotFound& e) {
    return error(404, e.what());
  } catch (const SessionStateError& e) {
    return error(409, e.what());
  } catch (const design::QueryBudgetExceeded& e) {
    return error(422, e.what());
  } catch (const Json::exception& e) {
    return error(400, std::string("malformed request: ") + e.what());
  } catch (const std::invalid_argument& e) {
    return error(400, e.what());
  } catch (const std::exception& e) {
    return error(500, e.what());
  }
}

void mount(Service& service, httplib::Server& server) {
  auto route = [&service](const httplib::Request& req, httplib::Response& res) {
    auto r = service.handle(req.method, req.path, req.body);
    res.status = r.status;
    res.set_content(r.body.dump(), "application/json");
  };
  server.Get(R"(/sessions.*)", route);
  server.Post(R"(/sessions.*)", route);
  server.set_default_headers({{"Access-Control-Allow-Origin", "*"}});
  server.Options(R"(.*)", [](const httplib::Request&, httplib::Response& res) {
    res.set_header("Access-Control-Allow-Methods", "GET, POST, OPTIONS");
    res.set_header("Access-Control-Allow-Headers", "Content-Type");
    res.status = 204;
  });
}

void serve(Service& service, const std::string& host, int port) {
  httplib::Server server;
  mount(service, server);
  if (!server.listen(host, port)) throw std::runtime_error("cannot listen on " + host + ":" + std::to_string(port));
}

}  // namespace rewardkit::service
