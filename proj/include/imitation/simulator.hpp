#pragma once

// Repeated play against the imitate-the-best rule
//
//   y_t = x_{t-1}  if Delta(x_{t-1}, y_{t-1}) > 0,   else y_{t-1},
//
// with the opponent's cumulative relative payoff D(T) = sum_t Delta(x_t, y_t).
// Round 0 is played simultaneously from (x0, y0); the imitator's first
// possible copy is at t = 1.

#include <array>
#include <cstdint>
#include <memory>
#include <optional>
#include <ostream>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "imitation/analysis.hpp"
#include "imitation/game.hpp"
#include "imitation/game_json.hpp"

namespace imitation {

class SimulationError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Imitation update: copy x_prev iff it earned strictly more than y_prev.
ActionIndex imitator_step(const RelativePayoffGame& rel, ActionIndex x_prev,
                          ActionIndex y_prev);

struct Round {
  std::size_t t = 0;
  ActionIndex x = 0;
  ActionIndex y = 0;
  Rational payoff_x;  // pi(x_t, y_t)
  Rational payoff_y;  // pi(y_t, x_t)
  Rational delta;     // Delta(x_t, y_t)
  Rational total;     // D(t)

  friend bool operator==(const Round&, const Round&) = default;
};

enum class Termination { kHorizon, kFixpoint };

std::string to_string(Termination reason);

struct Trajectory {
  ActionIndex x0 = 0;
  ActionIndex y0 = 0;
  std::string policy_name;
  std::vector<Round> rounds;
  Termination terminated = Termination::kHorizon;

  /// D after the last recorded round (0 when nothing was played).
  Rational total() const {
    return rounds.empty() ? Rational(0) : rounds.back().total;
  }
};

/// One JSON object per round; rationals as "p/q" strings, actions as labels.
Json round_json(const RelativePayoffGame& rel, const Round& round);
void write_jsonl(std::ostream& out, const RelativePayoffGame& rel,
                 const Trajectory& trajectory);

/// First index t with y_{t+1} != imitator_step(x_t, y_t) (or y_0 != start);
/// nullopt when the history is a faithful imitation run with correct running
/// sums.
std::optional<std::size_t> replay_mismatch(const RelativePayoffGame& rel,
                                           ActionIndex y0,
                                           const std::vector<Round>& rounds);

/// The engine's state machine: one simultaneous round per play() call.
class Match {
 public:
  /// horizon = number of rounds; nullopt = open-ended.
  Match(std::shared_ptr<const RelativePayoffGame> rel, ActionIndex y0,
        std::optional<std::size_t> horizon = std::nullopt);

  const RelativePayoffGame& game() const { return *rel_; }
  ActionIndex y0() const { return y0_; }
  ActionIndex imitator() const { return y_; }
  std::size_t round() const { return rounds_.size(); }
  std::optional<std::size_t> horizon() const { return horizon_; }
  bool finished() const { return horizon_ && rounds_.size() >= *horizon_; }
  const std::vector<Round>& history() const { return rounds_; }
  Rational total() const {
    return rounds_.empty() ? Rational(0) : rounds_.back().total;
  }

  /// Resolves one round with opponent action x. Throws SimulationError when
  /// the match is finished and std::out_of_range for a bad action.
  const Round& play(ActionIndex x);

 private:
  std::shared_ptr<const RelativePayoffGame> rel_;
  ActionIndex y0_;
  ActionIndex y_;
  std::optional<std::size_t> horizon_;
  std::vector<Round> rounds_;
};

enum class PolicyKind {
  kOptimalExploiter,
  kMyopicRelative,
  kImitator,
  kConstant,
  kRandom,
  kScripted,
  kExternal,
};

struct Policy {
  PolicyKind kind = PolicyKind::kOptimalExploiter;
  ActionIndex action = 0;             // kConstant
  std::uint64_t seed = 0;             // kRandom
  std::vector<ActionIndex> sequence;  // kScripted (cycled) / kExternal

  static Policy with_kind(PolicyKind k) {
    Policy p;
    p.kind = k;
    return p;
  }

  static Policy optimal() { return with_kind(PolicyKind::kOptimalExploiter); }
  static Policy myopic() { return with_kind(PolicyKind::kMyopicRelative); }
  static Policy imitator() { return with_kind(PolicyKind::kImitator); }
  static Policy constant(ActionIndex a) {
    Policy p = with_kind(PolicyKind::kConstant);
    p.action = a;
    return p;
  }
  static Policy random(std::uint64_t seed) {
    Policy p = with_kind(PolicyKind::kRandom);
    p.seed = seed;
    return p;
  }
  static Policy scripted(std::vector<ActionIndex> seq) {
    Policy p = with_kind(PolicyKind::kScripted);
    p.sequence = std::move(seq);
    return p;
  }
  static Policy external(std::vector<ActionIndex> moves) {
    Policy p = with_kind(PolicyKind::kExternal);
    p.sequence = std::move(moves);
    return p;
  }

  /// "optimal", "myopic", "imitator", "constant:LABEL", "random:SEED",
  /// "scripted:L1,L2,...", "external:L1,L2,...". std::invalid_argument on
  /// anything else.
  static Policy parse(std::string_view spec, const RelativePayoffGame& rel);
  std::string name(const RelativePayoffGame& rel) const;
};

/// Plays `horizon` rounds (t = 0..horizon-1). x0 overrides the policy's
/// round-0 action. Stops early once a stationary zero-gain profile repeats
/// (deterministic, history-free policies only). Throws std::invalid_argument
/// for horizon 0 or out-of-range actions and SimulationError when an
/// EXTERNAL policy runs out of moves.
Trajectory run_match(const RelativePayoffGame& rel, const Policy& policy,
                     std::optional<ActionIndex> x0, ActionIndex y0,
                     std::size_t horizon);
Trajectory run_match(const SymmetricGame& game, const Policy& policy,
                     std::optional<ActionIndex> x0, ActionIndex y0,
                     std::size_t horizon);

/// Brute-force oracle: the best D(T), T < horizon, over every opponent action
/// sequence of length horizon. Cost |X|^horizon.
Rational best_total_over_all_sequences(const RelativePayoffGame& rel,
                                       ActionIndex y0, std::size_t horizon);

// ---------------------------------------------------------------------------
// Three-player Cournot: one imitator against two coordinated maximizers
// (p(Q) = 100 - Q, c(q) = 10 q).

/// n-player imitate-the-best: copy the strictly best-paid other player of
/// the previous round (lowest index among equals); otherwise keep.
std::size_t imitation_target(std::size_t self,
                             const std::vector<Rational>& payoffs);

struct CournotRound {
  std::size_t t = 0;
  /// {imitator, maximizer 1, maximizer 2}.
  std::array<Rational, 3> quantity;
  Rational price;
  std::array<Rational, 3> profit;
  std::array<Rational, 3> cumulative;
};

struct DemoCheck {
  std::string name;
  bool passed = false;
  std::string detail;
};

struct CournotDemoReport {
  std::size_t laps = 0;
  std::vector<CournotRound> rounds;
  /// Average maximizer profit minus imitator profit, accumulated over each
  /// lap (one flooding round plus one sharing round).
  std::vector<Rational> lap_shortfall;
  /// Cumulative shortfall at the end of each lap, round 0 included.
  std::vector<Rational> cumulative_shortfall;
  std::vector<DemoCheck> checks;

  bool passed() const;
};

/// Round 0 is (0, 45/2, 45/2); thereafter the maximizers alternate flooding
/// with 68 while the other idles. The imitator's quantity is produced by the
/// imitation rule, not scripted. Throws std::invalid_argument if laps == 0.
CournotDemoReport run_three_player_cournot_demo(std::size_t laps = 2);

}  // namespace imitation
