#include <httplib.h>

#include "imitation/arena.hpp"

namespace imitation {
namespace {

void send(httplib::Response& res, int status, const Json& body) {
  res.status = status;
  res.set_header("Access-Control-Allow-Origin", "*");
  res.set_content(body.dump(), "application/json");
}

void send_error(httplib::Response& res, int status, const std::string& what) {
  send(res, status, Json{{"error", what}, {"status", status}});
}

template <typename Handler>
void guarded(httplib::Response& res, int ok_status, Handler&& handler) {
  try {
    send(res, ok_status, handler());
  } catch (const ArenaError& e) {
    send_error(res, e.status(), e.what());
  } catch (const std::exception& e) {
    send_error(res, 500, e.what());
  }
}

Json parse_body(const httplib::Request& req) {
  Json body = Json::parse(req.body, nullptr, /*allow_exceptions=*/false);
  if (body.is_discarded()) throw ArenaError(400, "malformed JSON body");
  return body;
}

}  // namespace

void install_routes(httplib::Server& server, SessionStore& store) {
  server.Post("/sessions", [&store](const httplib::Request& req,
                                    httplib::Response& res) {
    guarded(res, 201, [&] { return store.create(parse_body(req)); });
  });
  server.Post(R"(/sessions/([0-9a-f]+)/moves)",
              [&store](const httplib::Request& req, httplib::Response& res) {
                guarded(res, 200, [&] {
                  return store.post_move(req.matches[1], parse_body(req));
                });
              });
  server.Get(R"(/sessions/([^/]+))",
             [&store](const httplib::Request& req, httplib::Response& res) {
               guarded(res, 200, [&] { return store.get_state(req.matches[1]); });
             });
  server.Get("/presets", [](const httplib::Request&, httplib::Response& res) {
    guarded(res, 200, [] { return SessionStore::list_presets(); });
  });
  server.Options(R"(/.*)", [](const httplib::Request&, httplib::Response& res) {
    res.set_header("Access-Control-Allow-Origin", "*");
    res.set_header("Access-Control-Allow-Methods", "GET, POST, OPTIONS");
    res.set_header("Access-Control-Allow-Headers", "Content-Type");
    res.status = 204;
  });
  server.set_error_handler([](const httplib::Request&, httplib::Response& res) {
    if (res.body.empty()) send_error(res, res.status, "not found");
  });
}

bool serve(SessionStore& store, const std::string& host, int port) {
  httplib::Server server;
  install_routes(server, store);
  return server.listen(host, port);
}

}  // namespace imitation
