#pragma once

// Live human-vs-imitator sessions. The human always holds the maximizer
// seat; the imitator follows the copy-if-strictly-better rule.
//
// SessionStore is the transport-free core (JSON in, JSON out, ArenaError
// carrying the HTTP status); arena_http wires it to cpp-httplib.

#include <chrono>
#include <filesystem>
#include <map>
#include <memory>
#include <optional>
#include <shared_mutex>
#include <stdexcept>
#include <string>

#include "imitation/analysis.hpp"
#include "imitation/game_json.hpp"
#include "imitation/simulator.hpp"

namespace httplib {
class Server;
}

namespace imitation {

class ArenaError : public std::runtime_error {
 public:
  ArenaError(int status, const std::string& what)
      : std::runtime_error(what), status_(status) {}
  int status() const { return status_; }

 private:
  int status_;
};

struct ArenaOptions {
  bool hints = true;
  /// Decimal places of the convenience "decimal" fields.
  int precision = 6;
  /// When set, every session is written here as <id>.json after each change.
  std::optional<std::filesystem::path> snapshot_dir;
};

/// {"exact": "p/q", "decimal": "..."}.
Json rational_view(const Rational& r, int precision);

class SessionStore {
 public:
  explicit SessionStore(ArenaOptions options = {});
  ~SessionStore();

  /// {"preset": name, "params"?: {...}, "grid"?: "lo,hi,n"} or
  /// {"game": <game document>}, plus "y0": label and optional "horizon".
  /// 400 malformed request, 422 unknown preset / bad parameters / bad y0.
  Json create(const Json& request);
  /// {"action": label}. 404 unknown id, 409 finished, 400 bad action.
  Json post_move(const std::string& id, const Json& body);
  /// Full view: matrices, history, running total, hint. 404 unknown id.
  Json get_state(const std::string& id) const;
  static Json list_presets();

  /// Recomputes the session from (game, y0, posted actions) and compares it
  /// with the stored history; true when identical. 404 unknown id.
  bool replay_matches(const std::string& id) const;

  /// Loads every snapshot from the configured directory by replaying the
  /// recorded moves. Returns the number of sessions restored.
  std::size_t restore_snapshots();

  std::size_t size() const;
  const ArenaOptions& options() const { return options_; }

 private:
  struct Session;

  std::shared_ptr<Session> find(const std::string& id) const;
  Json view(const Session& s) const;
  void snapshot(const Session& s) const;
  std::string new_id();

  ArenaOptions options_;
  mutable std::shared_mutex mutex_;
  std::map<std::string, std::shared_ptr<Session>> sessions_;
  std::uint64_t id_state_;
};

/// POST /sessions, POST /sessions/{id}/moves, GET /sessions/{id},
/// GET /presets.
void install_routes(httplib::Server& server, SessionStore& store);

/// Blocks serving on host:port until the process is stopped.
/// Returns false if the socket could not be bound.
bool serve(SessionStore& store, const std::string& host, int port);

}  // namespace imitation
