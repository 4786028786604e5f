#include "imitation/analysis.hpp"

#include <algorithm>
#include <stdexcept>
#include <utility>

namespace imitation {
namespace {

enum class Mark : unsigned char { kWhite, kGray, kBlack };

struct Frame {
  ActionIndex node;
  std::size_t next_edge;
};

// Iterative DFS from `root` over the beaten-digraph. On the first back edge
// returns the DFS stack (imitator states from root) and the index on the
// stack where the cycle starts. `marks` is shared across calls so a caller
// can sweep all roots.
std::optional<std::pair<std::vector<ActionIndex>, std::size_t>> dfs_back_edge(
    const RelativePayoffGame& rel, ActionIndex root, std::vector<Mark>& marks) {
  if (marks[root] != Mark::kWhite) return std::nullopt;
  std::vector<Frame> stack{{root, 0}};
  std::vector<std::size_t> position(rel.size(), 0);
  marks[root] = Mark::kGray;
  position[root] = 0;
  while (!stack.empty()) {
    Frame& top = stack.back();
    const auto succ = rel.beating(top.node);
    if (top.next_edge == succ.size()) {
      marks[top.node] = Mark::kBlack;
      stack.pop_back();
      continue;
    }
    const ActionIndex next = succ[top.next_edge++];
    if (marks[next] == Mark::kGray) {
      std::vector<ActionIndex> states;
      states.reserve(stack.size());
      for (const auto& f : stack) states.push_back(f.node);
      return std::pair{std::move(states), position[next]};
    }
    if (marks[next] == Mark::kWhite) {
      marks[next] = Mark::kGray;
      position[next] = stack.size();
      stack.push_back({next, 0});
    }
  }
  return std::nullopt;
}

ExploitReport pump_report(const RelativePayoffGame& rel, ActionIndex start,
                          const std::vector<ActionIndex>& states,
                          std::size_t entry) {
  PumpCycle pump;
  // Moves that walk the imitator from states[0] to states[entry].
  for (std::size_t i = 1; i <= entry; ++i) pump.approach.push_back(states[i]);
  for (std::size_t i = entry + 1; i < states.size(); ++i) {
    pump.cycle.push_back(states[i]);
  }
  pump.cycle.push_back(states[entry]);
  ActionIndex at = states[entry];
  for (ActionIndex move : pump.cycle) {
    pump.lap_gain += rel.delta(move, at);
    at = move;
  }
  return ExploitReport{start, std::nullopt, std::move(pump)};
}

// Longest weighted path from `start` in an acyclic reachable subgraph.
ExploitReport longest_path_report(const RelativePayoffGame& rel,
                                  ActionIndex start) {
  const std::size_t n = rel.size();
  std::vector<std::optional<Rational>> value(n);
  std::vector<ActionIndex> choice(n, n);

  // Post-order evaluation without recursion.
  std::vector<Frame> stack{{start, 0}};
  while (!stack.empty()) {
    Frame& top = stack.back();
    const auto succ = rel.beating(top.node);
    if (top.next_edge < succ.size()) {
      const ActionIndex next = succ[top.next_edge++];
      if (!value[next]) stack.push_back({next, 0});
      continue;
    }
    Rational best;  // zero: staying put is always available
    ActionIndex best_move = n;
    for (ActionIndex x : succ) {
      Rational candidate = rel.delta(x, top.node) + *value[x];
      // Ascending x with strict improvement keeps the smallest argmax.
      if (best_move == n || best < candidate) {
        best = std::move(candidate);
        best_move = x;
      }
    }
    value[top.node] = std::move(best);
    choice[top.node] = best_move;
    stack.pop_back();
  }

  OptimalPath path;
  for (ActionIndex at = start; choice[at] != n; at = choice[at]) {
    path.moves.push_back(choice[at]);
    path.gains.push_back(rel.delta(choice[at], at));
  }
  return ExploitReport{start, value[start], std::move(path)};
}

}  // namespace

std::string to_string(VerdictKind kind) {
  switch (kind) {
    case VerdictKind::kMoneyPump:
      return "MONEY_PUMP";
    case VerdictKind::kNoPump:
      return "NO_PUMP";
    case VerdictKind::kEssentiallyUnbeatable:
      return "ESSENTIALLY_UNBEATABLE";
  }
  return "UNKNOWN";
}

std::vector<ActionIndex> fess_set(const RelativePayoffGame& rel) {
  std::vector<ActionIndex> out;
  for (ActionIndex x = 0; x < rel.size(); ++x) {
    const auto row = rel.delta_matrix().row(x);
    if (std::none_of(row.begin(), row.end(),
                     [](const Rational& v) { return v.is_negative(); })) {
      out.push_back(x);
    }
  }
  return out;
}

bool is_grps_matrix(const RelativePayoffGame& rel) {
  for (ActionIndex y = 0; y < rel.size(); ++y) {
    if (rel.is_sink(y)) return false;
  }
  return true;
}

bool is_grps_matrix(const PayoffMatrix& delta) {
  if (auto bad = antisymmetry_violation(delta)) {
    throw GameError("not a symmetric zero-sum matrix", bad->first,
                    bad->second);
  }
  for (std::size_t col = 0; col < delta.size(); ++col) {
    bool beaten = false;
    for (std::size_t row = 0; row < delta.size() && !beaten; ++row) {
      beaten = delta(row, col).is_positive();
    }
    if (!beaten) return false;
  }
  return true;
}

std::vector<ActionIndex> grps_core(const RelativePayoffGame& rel) {
  const std::size_t n = rel.size();
  std::vector<bool> alive(n, true);
  // positives[y] = #{x alive : Delta(x, y) > 0}
  std::vector<std::size_t> positives(n);
  std::vector<ActionIndex> queue;
  for (ActionIndex y = 0; y < n; ++y) {
    positives[y] = rel.beating(y).size();
    if (positives[y] == 0) queue.push_back(y);
  }
  while (!queue.empty()) {
    const ActionIndex gone = queue.back();
    queue.pop_back();
    if (!alive[gone]) continue;
    alive[gone] = false;
    // Columns that `gone` used to beat lose one positive entry.
    for (ActionIndex y = 0; y < n; ++y) {
      if (alive[y] && rel.delta(gone, y).is_positive() && --positives[y] == 0) {
        queue.push_back(y);
      }
    }
  }
  std::vector<ActionIndex> core;
  for (ActionIndex y = 0; y < n; ++y) {
    if (alive[y]) core.push_back(y);
  }
  return core;
}

std::optional<std::vector<ActionIndex>> find_imitation_cycle(
    const RelativePayoffGame& rel) {
  std::vector<Mark> marks(rel.size(), Mark::kWhite);
  for (ActionIndex root = 0; root < rel.size(); ++root) {
    if (auto hit = dfs_back_edge(rel, root, marks)) {
      auto& [states, entry] = *hit;
      return std::vector<ActionIndex>(
          states.begin() + static_cast<std::ptrdiff_t>(entry), states.end());
    }
  }
  return std::nullopt;
}

ExploitReport exploitation(const RelativePayoffGame& rel, ActionIndex start) {
  if (start >= rel.size()) {
    throw std::out_of_range("start action " + std::to_string(start) +
                            " out of range");
  }
  std::vector<Mark> marks(rel.size(), Mark::kWhite);
  if (auto hit = dfs_back_edge(rel, start, marks)) {
    return pump_report(rel, start, hit->first, hit->second);
  }
  return longest_path_report(rel, start);
}

std::vector<ExploitReport> exploit_all_serial(const RelativePayoffGame& rel) {
  std::vector<ExploitReport> out;
  out.reserve(rel.size());
  for (ActionIndex y = 0; y < rel.size(); ++y) {
    out.push_back(exploitation(rel, y));
  }
  return out;
}

std::vector<ExploitReport> exploit_all(const RelativePayoffGame& rel) {
  const auto n = static_cast<std::int64_t>(rel.size());
  std::vector<ExploitReport> out(rel.size());
#pragma omp parallel for schedule(dynamic) if (n > 16)
  for (std::int64_t y = 0; y < n; ++y) {
    out[static_cast<std::size_t>(y)] =
        exploitation(rel, static_cast<ActionIndex>(y));
  }
  return out;
}

Verdict verdict(const RelativePayoffGame& rel) {
  Verdict v;
  v.delta_hat = rel.delta_hat();
  v.fess = fess_set(rel);
  v.grps_core = grps_core(rel);
  v.imitation_cycle = find_imitation_cycle(rel);
  v.reports = exploit_all(rel);

  const bool any_unbounded =
      std::any_of(v.reports.begin(), v.reports.end(),
                  [](const ExploitReport& r) { return r.unbounded(); });
  const bool core_route = !v.grps_core.empty();
  const bool cycle_route = v.imitation_cycle.has_value();
  if (core_route != cycle_route || core_route != any_unbounded) {
    throw InternalError(
        "money-pump routes disagree: core=" + std::to_string(core_route) +
        " cycle=" + std::to_string(cycle_route) +
        " unbounded=" + std::to_string(any_unbounded));
  }

  if (core_route) {
    v.kind = VerdictKind::kMoneyPump;
    return v;
  }
  Rational bound;
  for (const auto& r : v.reports) bound = max(bound, *r.value);
  v.kind = bound <= v.delta_hat ? VerdictKind::kEssentiallyUnbeatable
                                : VerdictKind::kNoPump;
  v.bound = std::move(bound);
  return v;
}

Verdict verdict(const SymmetricGame& game) {
  return verdict(relative_payoff_game(game));
}

std::optional<Rational> brute_force_exploitation(const RelativePayoffGame& rel,
                                                 ActionIndex start) {
  const std::size_t n = rel.size();
  std::vector<bool> on_path(n, false);
  Rational best;
  bool closes_cycle = false;

  // Plain recursion: the oracle stays obviously correct, and callers keep n
  // small enough for exhaustive enumeration.
  auto walk = [&](auto&& self, ActionIndex at, const Rational& total) -> void {
    if (closes_cycle) return;
    best = max(best, total);
    for (ActionIndex x = 0; x < n; ++x) {
      if (!rel.delta(x, at).is_positive()) continue;
      if (on_path[x]) {
        closes_cycle = true;
        return;
      }
      on_path[x] = true;
      self(self, x, total + rel.delta(x, at));
      on_path[x] = false;
    }
  };
  on_path[start] = true;
  walk(walk, start, Rational{});
  if (closes_cycle) return std::nullopt;
  return best;
}

std::string witness_problem(const RelativePayoffGame& rel,
                            const ExploitReport& report) {
  ActionIndex at = report.start;
  if (const auto* path = report.path()) {
    if (report.unbounded()) return "finite path attached to unbounded value";
    if (path->moves.size() != path->gains.size()) return "gain count mismatch";
    Rational total;
    for (std::size_t t = 0; t < path->moves.size(); ++t) {
      const Rational& gain = rel.delta(path->moves[t], at);
      if (!gain.is_positive()) return "non-positive step gain";
      if (gain != path->gains[t]) return "recorded gain differs from Delta";
      total += gain;
      at = path->moves[t];
    }
    if (total != *report.value) return "gains do not sum to value";
    if (!rel.is_sink(at)) return "terminal state still beatable";
    return {};
  }
  const auto* pump = report.pump();
  if (!report.unbounded()) return "pump attached to finite value";
  for (ActionIndex move : pump->approach) {
    if (!rel.delta(move, at).is_positive()) return "approach step not gaining";
    at = move;
  }
  if (pump->cycle.empty()) return "empty pump cycle";
  const ActionIndex entry = at;
  Rational lap;
  for (ActionIndex move : pump->cycle) {
    if (!rel.delta(move, at).is_positive()) return "cycle step not gaining";
    lap += rel.delta(move, at);
    at = move;
  }
  if (at != entry) return "cycle does not close";
  if (lap != pump->lap_gain) return "lap gain mismatch";
  return {};
}

}  // namespace imitation
