#pragma once

// Decision procedures for the imitate-the-best heuristic against an
// omniscient relative-payoff maximizer:
//
//   * fESS actions (rows of Delta that are componentwise >= 0),
//   * the generalized rock-paper-scissors core (greatest action subset in
//     which every column has a strictly positive entry),
//   * imitation cycles in the beaten-digraph (edge y -> x iff Delta(x,y) > 0),
//   * the maximizer's optimal total relative payoff from each imitator start,
//   * the game-level verdict tying the three money-pump routes together.
//
// A money pump exists iff the core is nonempty iff the beaten-digraph has a
// cycle iff some start action yields unbounded exploitation. verdict()
// computes all three and throws InternalError if they ever disagree.

#include <cstdint>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "imitation/game.hpp"

namespace imitation {

/// Maximizer moves x_1..x_k against an imitator starting at the report's
/// start action. gains[t] = Delta(moves[t], imitator state before move t).
struct OptimalPath {
  std::vector<ActionIndex> moves;
  std::vector<Rational> gains;
};

/// Play `approach` once, then repeat `cycle` forever. After the approach the
/// imitator sits on cycle.back(); every step of the lap gains strictly.
struct PumpCycle {
  std::vector<ActionIndex> approach;
  std::vector<ActionIndex> cycle;
  Rational lap_gain;
};

struct ExploitReport {
  ActionIndex start = 0;
  /// nullopt means unbounded.
  std::optional<Rational> value;
  std::variant<OptimalPath, PumpCycle> witness;

  bool unbounded() const { return !value.has_value(); }
  const OptimalPath* path() const { return std::get_if<OptimalPath>(&witness); }
  const PumpCycle* pump() const { return std::get_if<PumpCycle>(&witness); }
};

enum class VerdictKind { kMoneyPump, kNoPump, kEssentiallyUnbeatable };

std::string to_string(VerdictKind kind);

struct Verdict {
  VerdictKind kind = VerdictKind::kEssentiallyUnbeatable;
  /// max over start actions of the exploitation value; absent for a pump.
  std::optional<Rational> bound;
  Rational delta_hat;
  std::vector<ActionIndex> fess;
  std::vector<ActionIndex> grps_core;
  /// Imitator states c_0..c_{k-1} with Delta(c_{t+1}, c_t) > 0 (cyclically).
  std::optional<std::vector<ActionIndex>> imitation_cycle;
  std::vector<ExploitReport> reports;
};

/// x* with Delta(x*, x) >= 0 for every x. May be empty.
std::vector<ActionIndex> fess_set(const RelativePayoffGame& rel);

/// True iff every column has a strictly positive entry.
bool is_grps_matrix(const RelativePayoffGame& rel);
/// Same test on a raw matrix; throws GameError unless it is antisymmetric.
bool is_grps_matrix(const PayoffMatrix& delta);

/// Greatest S with: every y in S is strictly beaten by some x in S.
/// Computed by iterated elimination of columns without a positive entry.
std::vector<ActionIndex> grps_core(const RelativePayoffGame& rel);

/// Any directed cycle of the beaten-digraph, as imitator states
/// c_0..c_{k-1}; the maximizer plays c_1, c_2, ..., c_0 against it.
/// Depth-first in index order, so the result is deterministic.
std::optional<std::vector<ActionIndex>> find_imitation_cycle(
    const RelativePayoffGame& rel);

/// Optimal total relative payoff of the maximizer against an imitator that
/// starts on `start`. Among optimal finite paths the lexicographically
/// smallest move sequence is reported. Throws std::out_of_range.
ExploitReport exploitation(const RelativePayoffGame& rel, ActionIndex start);

/// exploitation() for every start action. OpenMP-parallel over starts.
std::vector<ExploitReport> exploit_all(const RelativePayoffGame& rel);
/// Serial reference for exploit_all.
std::vector<ExploitReport> exploit_all_serial(const RelativePayoffGame& rel);

Verdict verdict(const RelativePayoffGame& rel);
Verdict verdict(const SymmetricGame& game);

/// Independent oracle: enumerates every simple improving path of the
/// beaten-digraph from `start`. Returns nullopt when some path can be closed
/// into a cycle (unbounded), else the best total gain.
std::optional<Rational> brute_force_exploitation(const RelativePayoffGame& rel,
                                                 ActionIndex start);

/// Checks the structural contract of a report against Delta: positive step
/// gains, gains summing to the value, a sink terminal state for finite
/// paths, and a closed strictly-gaining lap for pumps. Empty string if valid.
std::string witness_problem(const RelativePayoffGame& rel,
                            const ExploitReport& report);

struct CrosscheckOptions {
  std::uint64_t seed = 42;
  std::size_t trials = 1000;
  std::size_t max_actions = 5;
  std::int64_t value_range = 5;
};

struct CrosscheckFailure {
  std::size_t trial = 0;
  std::string reason;
  std::string game_json;

  friend bool operator==(const CrosscheckFailure&,
                         const CrosscheckFailure&) = default;
};

struct CrosscheckReport {
  CrosscheckOptions options;
  std::size_t trials = 0;
  std::size_t pumps = 0;
  std::size_t bounded_games = 0;
  std::size_t essentially_unbeatable = 0;
  std::size_t bounded_starts_checked = 0;
  std::size_t mismatches = 0;
  std::vector<CrosscheckFailure> failures;

  bool passed() const { return mismatches == 0; }
  friend bool operator==(const CrosscheckReport& a, const CrosscheckReport& b) {
    return a.trials == b.trials && a.pumps == b.pumps &&
           a.bounded_games == b.bounded_games &&
           a.essentially_unbeatable == b.essentially_unbeatable &&
           a.bounded_starts_checked == b.bounded_starts_checked &&
           a.mismatches == b.mismatches && a.failures == b.failures;
  }
};

/// Throws std::invalid_argument unless trials >= 1, 2 <= max_actions <= 9
/// and value_range >= 1.
void validate(const CrosscheckOptions& options);

/// Seed of trial `index` of a run seeded with `seed`; exposed so a failing
/// trial can be regenerated in isolation.
std::uint64_t trial_seed(std::uint64_t seed, std::size_t index);

/// Random games through every money-pump route plus the brute-force path
/// oracle. OpenMP-parallel over trials; the report depends only on options.
CrosscheckReport crosscheck_theorem1(const CrosscheckOptions& options);
/// Serial reference for crosscheck_theorem1.
CrosscheckReport crosscheck_theorem1_serial(const CrosscheckOptions& options);

}  // namespace imitation
