#include "imitation/arena.hpp"

#include <ctime>
#include <fstream>
#include <mutex>
#include <random>

#include "imitation/generators.hpp"

namespace imitation {

struct SessionStore::Session {
  Session(std::shared_ptr<const SymmetricGame> g,
          std::shared_ptr<const RelativePayoffGame> r, ActionIndex y0,
          std::optional<std::size_t> horizon)
      : game(std::move(g)), rel(r), verdict(imitation::verdict(*r)),
        match(std::move(r), y0, horizon) {}

  std::string id;
  std::string preset;  // empty for uploaded games
  std::string created_at;
  std::shared_ptr<const SymmetricGame> game;
  std::shared_ptr<const RelativePayoffGame> rel;
  Verdict verdict;
  Match match;
  mutable std::shared_mutex mutex;
};

namespace {

std::string utc_now() {
  const std::time_t now =
      std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
  std::tm tm{};
  gmtime_r(&now, &tm);
  char buf[32];
  std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

std::string labels_text(const RelativePayoffGame& rel,
                        const std::vector<ActionIndex>& seq) {
  std::string out;
  for (ActionIndex a : seq) {
    if (!out.empty()) out += ", ";
    out += rel.label(a);
  }
  return out;
}

Json labels_json(const RelativePayoffGame& rel,
                 const std::vector<ActionIndex>& seq) {
  Json out = Json::array();
  for (ActionIndex a : seq) out.push_back(rel.label(a));
  return out;
}

Params params_from_json(const Json& j) {
  Params out;
  if (j.is_null()) return out;
  if (!j.is_object()) throw ArenaError(400, "\"params\" must be an object");
  for (const auto& [key, value] : j.items()) {
    out[key] = value.is_string() ? value.get<std::string>() : value.dump();
  }
  return out;
}

ActionIndex action_from(const RelativePayoffGame& rel, const Json& body,
                        const char* key, int status) {
  if (!body.contains(key) || !body[key].is_string()) {
    throw ArenaError(400, std::string("missing string field \"") + key + "\"");
  }
  const auto label = body[key].get<std::string>();
  const auto idx = rel.index_of(label);
  if (!idx) throw ArenaError(status, "unknown action '" + label + "'");
  return *idx;
}

}  // namespace

Json rational_view(const Rational& r, int precision) {
  Json j;
  j["exact"] = r.str();
  j["decimal"] = r.decimal(precision);
  return j;
}

SessionStore::SessionStore(ArenaOptions options)
    : options_(std::move(options)), id_state_(std::random_device{}()) {
  id_state_ = (id_state_ << 32) ^ std::random_device{}();
  if (options_.snapshot_dir) {
    std::filesystem::create_directories(*options_.snapshot_dir);
  }
}

SessionStore::~SessionStore() = default;

std::string SessionStore::new_id() {
  // splitmix64 stream; caller holds the store lock.
  auto next = [this] {
    std::uint64_t z = (id_state_ += 0x9e3779b97f4a7c15ULL);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
  };
  static constexpr char kHex[] = "0123456789abcdef";
  std::string id;
  for (int word = 0; word < 2; ++word) {
    std::uint64_t v = next();
    for (int i = 0; i < 16; ++i, v >>= 4) id += kHex[v & 15];
  }
  return id;
}

std::shared_ptr<SessionStore::Session> SessionStore::find(
    const std::string& id) const {
  std::shared_lock lock(mutex_);
  const auto it = sessions_.find(id);
  if (it == sessions_.end()) throw ArenaError(404, "unknown session " + id);
  return it->second;
}

std::size_t SessionStore::size() const {
  std::shared_lock lock(mutex_);
  return sessions_.size();
}

Json SessionStore::create(const Json& request) {
  if (!request.is_object()) throw ArenaError(400, "request must be an object");
  const bool has_preset = request.contains("preset");
  const bool has_game = request.contains("game");
  if (has_preset == has_game) {
    throw ArenaError(400, "give exactly one of \"preset\" or \"game\"");
  }

  std::string preset;
  std::shared_ptr<const SymmetricGame> game;
  if (has_preset) {
    if (!request["preset"].is_string()) {
      throw ArenaError(400, "\"preset\" must be a string");
    }
    preset = request["preset"].get<std::string>();
    const Params params =
        params_from_json(request.value("params", Json()));
    std::optional<GridSpec> grid;
    try {
      if (request.contains("grid")) {
        if (!request["grid"].is_string()) {
          throw ArenaError(400, "\"grid\" must be a string \"low,high,points\"");
        }
        grid = GridSpec::parse(request["grid"].get<std::string>());
      }
      game = std::make_shared<const SymmetricGame>(
          generate(preset, params, grid).game);
    } catch (const GeneratorError& e) {
      throw ArenaError(422, e.what());
    } catch (const std::invalid_argument& e) {
      throw ArenaError(422, e.what());
    }
  } else {
    try {
      game = std::make_shared<const SymmetricGame>(parse_game(request["game"]));
    } catch (const std::invalid_argument& e) {
      throw ArenaError(400, std::string("invalid game: ") + e.what());
    }
  }

  std::optional<std::size_t> horizon;
  if (request.contains("horizon") && !request["horizon"].is_null()) {
    const Json& h = request["horizon"];
    if (!h.is_number_integer() || h.get<std::int64_t>() < 1) {
      throw ArenaError(400, "\"horizon\" must be a positive integer");
    }
    horizon = h.get<std::size_t>();
  }

  auto rel = std::make_shared<const RelativePayoffGame>(
      relative_payoff_game(*game));
  const ActionIndex y0 = action_from(*rel, request, "y0", 422);

  auto session = std::make_shared<Session>(game, rel, y0, horizon);
  session->preset = preset;
  session->created_at = utc_now();
  {
    std::unique_lock lock(mutex_);
    do {
      session->id = new_id();
    } while (sessions_.count(session->id));
    sessions_[session->id] = session;
  }
  std::shared_lock session_lock(session->mutex);
  snapshot(*session);
  return view(*session);
}

Json SessionStore::post_move(const std::string& id, const Json& body) {
  const auto session = find(id);
  std::unique_lock lock(session->mutex);
  if (session->match.finished()) {
    throw ArenaError(409, "session " + id + " is finished");
  }
  if (!body.is_object()) throw ArenaError(400, "request must be an object");
  const ActionIndex x = action_from(*session->rel, body, "action", 400);
  const Round round = session->match.play(x);
  snapshot(*session);

  const auto& rel = *session->rel;
  const int p = options_.precision;
  Json out;
  out["schema"] = "imitation.arena.move/1";
  out["round"] = {{"t", round.t},
                  {"x", rel.label(round.x)},
                  {"y", rel.label(round.y)},
                  {"payoff_x", rational_view(round.payoff_x, p)},
                  {"payoff_y", rational_view(round.payoff_y, p)},
                  {"delta", rational_view(round.delta, p)},
                  {"D", rational_view(round.total, p)}};
  out["copied"] = session->match.imitator() != round.y;
  out["imitator"] = rel.label(session->match.imitator());
  out["t"] = session->match.round();
  out["D"] = rational_view(session->match.total(), p);
  out["status"] = session->match.finished() ? "FINISHED" : "OPEN";
  return out;
}

Json SessionStore::get_state(const std::string& id) const {
  const auto session = find(id);
  std::shared_lock lock(session->mutex);
  return view(*session);
}

Json SessionStore::view(const Session& s) const {
  const auto& rel = *s.rel;
  const int p = options_.precision;
  const auto& v = s.verdict;
  Json out;
  out["schema"] = "imitation.arena.session/1";
  out["id"] = s.id;
  out["role"] = "HUMAN_AS_MAXIMIZER";
  out["status"] = s.match.finished() ? "FINISHED" : "OPEN";
  out["created_at"] = s.created_at;
  out["preset"] = s.preset.empty() ? Json() : Json(s.preset);
  out["precision"] = p;
  out["actions"] = rel.actions();
  out["payoffs"] = matrix_json(s.game->payoff_matrix());
  out["delta"] = matrix_json(rel.delta_matrix());
  out["y0"] = rel.label(s.match.y0());
  out["horizon"] =
      s.match.horizon() ? Json(*s.match.horizon()) : Json();
  out["t"] = s.match.round();
  out["imitator"] = rel.label(s.match.imitator());
  out["D"] = rational_view(s.match.total(), p);

  Json verdict;
  verdict["kind"] = to_string(v.kind);
  verdict["delta_hat"] = rational_view(v.delta_hat, p);
  verdict["bound"] = v.bound ? rational_view(*v.bound, p) : Json();
  verdict["fess"] = labels_json(rel, v.fess);
  verdict["grps_core"] = labels_json(rel, v.grps_core);
  out["verdict"] = std::move(verdict);

  Json history = Json::array();
  const auto& rounds = s.match.history();
  for (std::size_t t = 0; t < rounds.size(); ++t) {
    const Round& r = rounds[t];
    const ActionIndex next =
        t + 1 < rounds.size() ? rounds[t + 1].y : s.match.imitator();
    history.push_back({{"t", r.t},
                       {"x", rel.label(r.x)},
                       {"y", rel.label(r.y)},
                       {"payoff_x", rational_view(r.payoff_x, p)},
                       {"payoff_y", rational_view(r.payoff_y, p)},
                       {"delta", rational_view(r.delta, p)},
                       {"D", rational_view(r.total, p)},
                       {"imitator_next", rel.label(next)},
                       {"copied", next != r.y}});
  }
  out["history"] = std::move(history);

  if (options_.hints) {
    // The report for the current imitator state is the remaining plan.
    const ExploitReport& report = v.reports[s.match.imitator()];
    Json hint;
    hint["from"] = rel.label(report.start);
    hint["unbounded"] = report.unbounded();
    hint["max_achievable_total"] =
        report.value ? rational_view(*report.value, p) : Json();
    std::optional<ActionIndex> next;
    if (const auto* path = report.path()) {
      hint["path"] = labels_json(rel, path->moves);
      if (!path->moves.empty()) next = path->moves.front();
      hint["text"] = path->moves.empty()
                         ? std::string("no gain available")
                         : "max achievable total: " + report.value->str() +
                               " (play " + labels_text(rel, path->moves) + ")";
    } else {
      const auto* pump = report.pump();
      hint["approach"] = labels_json(rel, pump->approach);
      hint["cycle"] = labels_json(rel, pump->cycle);
      hint["lap_gain"] = rational_view(pump->lap_gain, p);
      next = pump->approach.empty() ? pump->cycle.front()
                                    : pump->approach.front();
      hint["text"] = "money pump: unbounded (cycle " +
                     labels_text(rel, pump->cycle) + ", +" +
                     pump->lap_gain.str() + " per lap)";
    }
    hint["next_action"] = next ? Json(rel.label(*next)) : Json();
    hint["next_gain"] =
        next ? rational_view(rel.delta(*next, report.start), p) : Json();
    out["hint"] = std::move(hint);
  }
  return out;
}

Json SessionStore::list_presets() {
  Json out;
  out["schema"] = "imitation.arena.presets/1";
  Json list = Json::array();
  for (const auto& info : presets()) {
    Json j;
    j["name"] = info.name;
    j["description"] = info.description;
    j["defaults"] = info.defaults;
    j["default_grid"] =
        info.default_grid ? Json(info.default_grid->str()) : Json();
    j["aggregative"] = info.aggregative;
    j["actions"] = generate(info.name).game.actions();
    list.push_back(std::move(j));
  }
  out["presets"] = std::move(list);
  return out;
}

bool SessionStore::replay_matches(const std::string& id) const {
  const auto session = find(id);
  std::shared_lock lock(session->mutex);
  Match replay(session->rel, session->match.y0(), session->match.horizon());
  for (const Round& r : session->match.history()) replay.play(r.x);
  return replay.history() == session->match.history() &&
         replay.imitator() == session->match.imitator() &&
         !replay_mismatch(*session->rel, session->match.y0(),
                          session->match.history());
}

void SessionStore::snapshot(const Session& s) const {
  if (!options_.snapshot_dir) return;
  Json j;
  j["id"] = s.id;
  j["created_at"] = s.created_at;
  j["preset"] = s.preset;
  j["game"] = game_to_json(*s.game);
  j["y0"] = s.rel->label(s.match.y0());
  j["horizon"] = s.match.horizon() ? Json(*s.match.horizon()) : Json();
  Json moves = Json::array();
  for (const Round& r : s.match.history()) moves.push_back(s.rel->label(r.x));
  j["moves"] = std::move(moves);

  const auto path = *options_.snapshot_dir / (s.id + ".json");
  const auto tmp = *options_.snapshot_dir / (s.id + ".json.tmp");
  {
    std::ofstream out(tmp);
    out << j.dump(2) << '\n';
  }
  std::filesystem::rename(tmp, path);
}

std::size_t SessionStore::restore_snapshots() {
  if (!options_.snapshot_dir) return 0;
  std::size_t restored = 0;
  for (const auto& entry :
       std::filesystem::directory_iterator(*options_.snapshot_dir)) {
    if (entry.path().extension() != ".json") continue;
    std::ifstream in(entry.path());
    const Json j = Json::parse(in, nullptr, /*allow_exceptions=*/false);
    if (j.is_discarded() || !j.is_object()) continue;
    try {
      auto game = std::make_shared<const SymmetricGame>(parse_game(j.at("game")));
      auto rel = std::make_shared<const RelativePayoffGame>(
          relative_payoff_game(*game));
      const auto y0 = rel->index_of(j.at("y0").get<std::string>());
      if (!y0) continue;
      std::optional<std::size_t> horizon;
      if (!j.at("horizon").is_null()) horizon = j["horizon"].get<std::size_t>();
      auto session = std::make_shared<Session>(game, rel, *y0, horizon);
      session->id = j.at("id").get<std::string>();
      session->preset = j.value("preset", "");
      session->created_at = j.value("created_at", "");
      for (const auto& m : j.at("moves")) {
        const auto x = rel->index_of(m.get<std::string>());
        if (!x) throw GameError("snapshot move is not an action");
        session->match.play(*x);
      }
      std::unique_lock lock(mutex_);
      sessions_[session->id] = std::move(session);
      ++restored;
    } catch (const std::exception&) {
      // A damaged snapshot is skipped rather than taking the service down.
    }
  }
  return restored;
}

}  // namespace imitation
