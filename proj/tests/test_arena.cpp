#include <doctest.h>
#include <httplib.h>

#include <filesystem>
#include <thread>

#include "imitation/arena.hpp"

using namespace imitation;

namespace {

int status_of(const std::function<void()>& f) {
  try {
    f();
  } catch (const ArenaError& e) {
    return e.status();
  }
  return 0;
}

}  // namespace

TEST_CASE("create: presets, hints and validation") {
  SessionStore store;
  const Json rps = store.create({{"preset", "rps"}, {"y0", "R"}});
  CHECK(rps["t"] == 0);
  CHECK(rps["imitator"] == "R");
  CHECK(rps["status"] == "OPEN");
  CHECK(rps["history"].empty());
  CHECK(rps["delta"][0] == Json::array({"0", "-2", "2"}));
  CHECK(rps["verdict"]["kind"] == "MONEY_PUMP");
  CHECK(rps["hint"]["unbounded"] == true);
  CHECK(rps["hint"]["next_action"] == "P");

  const Json chicken = store.create({{"preset", "chicken"}, {"y0", "swerve"}});
  CHECK(chicken["hint"]["max_achievable_total"]["exact"] == "3");
  CHECK(chicken["hint"]["text"].get<std::string>().rfind("max achievable total: 3", 0) == 0);
  CHECK(chicken["D"]["decimal"] == "0.000000");

  CHECK(status_of([&] { store.create({{"preset", "chicken"}, {"y0", "north"}}); }) == 422);
  CHECK(status_of([&] { store.create({{"preset", "nope"}, {"y0", "a"}}); }) == 422);
  CHECK(status_of([&] { store.create({{"y0", "a"}}); }) == 400);
  CHECK(status_of([&] { store.create(Json::array()); }) == 400);
  CHECK(status_of([&] {
          store.create({{"preset", "rps"}, {"y0", "R"}, {"horizon", 0}});
        }) == 400);
  CHECK(status_of([&] {
          store.create({{"game", {{"actions", {"a"}}, {"payoffs", {{"0"}}}}}, {"y0", "a"}});
        }) == 0);
  CHECK(status_of([&] {
          store.create({{"game", {{"actions", {"a", "b"}}, {"payoffs", {{"0", "1"}}}}},
                        {"y0", "a"}});
        }) == 400);
}

TEST_CASE("moves follow the imitation rule") {
  SessionStore store;
  const std::string chicken =
      store.create({{"preset", "chicken"}, {"y0", "swerve"}, {"horizon", 3}})["id"];
  const Json m1 = store.post_move(chicken, {{"action", "straight"}});
  CHECK(m1["round"]["delta"]["exact"] == "3");
  CHECK(m1["imitator"] == "straight");
  CHECK(m1["copied"] == true);
  CHECK(m1["D"]["exact"] == "3");
  const Json m2 = store.post_move(chicken, {{"action", "swerve"}});
  CHECK(m2["copied"] == false);
  CHECK(m2["D"]["exact"] == "0");
  store.post_move(chicken, {{"action", "straight"}});
  const Json state = store.get_state(chicken);
  CHECK(state["status"] == "FINISHED");
  CHECK(state["history"].size() == 3);
  CHECK(status_of([&] { store.post_move(chicken, {{"action", "swerve"}}); }) == 409);

  const std::string rps = store.create({{"preset", "rps"}, {"y0", "R"}})["id"];
  const Json p = store.post_move(rps, {{"action", "P"}});
  CHECK(p["round"]["delta"]["exact"] == "2");
  CHECK(p["imitator"] == "P");
  CHECK(p["D"]["exact"] == "2");
  CHECK(status_of([&] { store.post_move(rps, {{"action", "Q"}}); }) == 400);
  CHECK(status_of([&] { store.post_move(rps, Json::object()); }) == 400);
  CHECK(status_of([&] { store.post_move("ffff", {{"action", "P"}}); }) == 404);
  CHECK(status_of([&] { store.get_state("ffff"); }) == 404);
}

TEST_CASE("history bookkeeping and server-side replay") {
  SessionStore store;
  const std::string id = store.create({{"preset", "rps"}, {"y0", "S"}})["id"];
  for (const char* a : {"R", "R", "S"}) store.post_move(id, {{"action", a}});
  const Json state = store.get_state(id);
  CHECK(state["t"] == 3);
  CHECK(state["history"].size() == 3);
  Rational sum;
  for (const auto& r : state["history"]) sum += Rational::parse(r["delta"]["exact"].get<std::string>());
  CHECK(Rational::parse(state["D"]["exact"].get<std::string>()) == sum);
  CHECK(store.replay_matches(id));
}

TEST_CASE("following the hint achieves the bound") {
  SessionStore store;
  const std::string id = store.create({{"preset", "ngrps_gop"}, {"y0", "a"}})["id"];
  const std::string bound =
      store.get_state(id)["hint"]["max_achievable_total"]["exact"];
  for (int i = 0; i < 5; ++i) {
    const Json hint = store.get_state(id)["hint"];
    if (hint["next_action"].is_null()) break;
    store.post_move(id, {{"action", hint["next_action"]}});
  }
  const Json state = store.get_state(id);
  CHECK(state["D"]["exact"] == bound);
  CHECK(bound == "2");
  CHECK(state["hint"]["text"] == "no gain available");
}

TEST_CASE("hints can be disabled") {
  SessionStore store(ArenaOptions{false, 3, std::nullopt});
  const Json s = store.create({{"preset", "chicken"}, {"y0", "swerve"}});
  CHECK_FALSE(s.contains("hint"));
  CHECK(s["D"]["decimal"] == "0.000");
}

TEST_CASE("snapshots restore sessions") {
  const auto dir = std::filesystem::temp_directory_path() / "imitation_arena_snapshots";
  std::filesystem::remove_all(dir);
  std::string id;
  {
    SessionStore store(ArenaOptions{true, 6, dir});
    id = store.create({{"preset", "chicken"}, {"y0", "swerve"}})["id"];
    store.post_move(id, {{"action", "straight"}});
  }
  SessionStore restored(ArenaOptions{true, 6, dir});
  CHECK(restored.restore_snapshots() == 1);
  const Json state = restored.get_state(id);
  CHECK(state["D"]["exact"] == "3");
  CHECK(state["imitator"] == "straight");
  CHECK(restored.replay_matches(id));
  std::filesystem::remove_all(dir);
}

TEST_CASE("presets listing") {
  const Json p = SessionStore::list_presets();
  CHECK(p["presets"].size() >= 18);
  CHECK(p["presets"][0]["name"] == "rps");
}

TEST_CASE("HTTP routes") {
  SessionStore store;
  httplib::Server server;
  install_routes(server, store);
  const int port = server.bind_to_any_port("127.0.0.1");
  REQUIRE(port > 0);
  std::thread thread([&] { server.listen_after_bind(); });
  server.wait_until_ready();

  httplib::Client client("127.0.0.1", port);
  auto created = client.Post("/sessions", R"({"preset":"chicken","y0":"swerve"})",
                             "application/json");
  REQUIRE(created);
  CHECK(created->status == 201);
  const Json session = Json::parse(created->body);
  const std::string id = session["id"];

  auto moved = client.Post("/sessions/" + id + "/moves", R"({"action":"straight"})",
                           "application/json");
  REQUIRE(moved);
  CHECK(moved->status == 200);
  CHECK(Json::parse(moved->body)["D"]["exact"] == "3");

  auto state = client.Get("/sessions/" + id);
  REQUIRE(state);
  CHECK(state->status == 200);
  CHECK(Json::parse(state->body)["history"].size() == 1);

  CHECK(client.Get("/sessions/deadbeef")->status == 404);
  CHECK(client.Post("/sessions", "{oops", "application/json")->status == 400);
  CHECK(client.Post("/sessions", R"({"preset":"chicken","y0":"north"})", "application/json")
            ->status == 422);
  CHECK(client.Post("/sessions/" + id + "/moves", R"({"action":"fly"})", "application/json")
            ->status == 400);
  auto presets = client.Get("/presets");
  REQUIRE(presets);
  CHECK(presets->status == 200);
  CHECK(client.Get("/nowhere")->status == 404);

  server.stop();
  thread.join();
}
