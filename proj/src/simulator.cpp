#include "imitation/simulator.hpp"

#include <algorithm>
#include <functional>
#include <random>
#include <sstream>

namespace imitation {

ActionIndex imitator_step(const RelativePayoffGame& rel, ActionIndex x_prev,
                          ActionIndex y_prev) {
  return rel.delta(x_prev, y_prev).is_positive() ? x_prev : y_prev;
}

std::string to_string(Termination reason) {
  return reason == Termination::kHorizon ? "horizon" : "fixpoint";
}

Json round_json(const RelativePayoffGame& rel, const Round& round) {
  Json j;
  j["t"] = round.t;
  j["x"] = rel.label(round.x);
  j["y"] = rel.label(round.y);
  j["payoff_x"] = round.payoff_x.str();
  j["payoff_y"] = round.payoff_y.str();
  j["delta"] = round.delta.str();
  j["D"] = round.total.str();
  return j;
}

void write_jsonl(std::ostream& out, const RelativePayoffGame& rel,
                 const Trajectory& trajectory) {
  for (const Round& r : trajectory.rounds) out << round_json(rel, r).dump() << '\n';
}

std::optional<std::size_t> replay_mismatch(const RelativePayoffGame& rel,
                                           ActionIndex y0,
                                           const std::vector<Round>& rounds) {
  ActionIndex y = y0;
  Rational total;
  for (std::size_t t = 0; t < rounds.size(); ++t) {
    const Round& r = rounds[t];
    if (r.t != t || r.y != y || r.x >= rel.size()) return t;
    total += rel.delta(r.x, r.y);
    if (r.delta != rel.delta(r.x, r.y) || r.total != total) return t;
    y = imitator_step(rel, r.x, r.y);
  }
  return std::nullopt;
}

// ---------------------------------------------------------------------------

Match::Match(std::shared_ptr<const RelativePayoffGame> rel, ActionIndex y0,
             std::optional<std::size_t> horizon)
    : rel_(std::move(rel)), y0_(y0), y_(y0), horizon_(horizon) {
  if (!rel_) throw std::invalid_argument("match needs a game");
  if (y0 >= rel_->size()) throw std::out_of_range("start action out of range");
  if (horizon_ && *horizon_ == 0) {
    throw std::invalid_argument("horizon must be >= 1");
  }
}

const Round& Match::play(ActionIndex x) {
  if (finished()) throw SimulationError("match is finished");
  if (x >= rel_->size()) throw std::out_of_range("action out of range");
  Round r;
  r.t = rounds_.size();
  r.x = x;
  r.y = y_;
  r.delta = rel_->delta(x, y_);
  if (const auto& base = rel_->base()) {
    r.payoff_x = base->payoff(x, y_);
    r.payoff_y = base->payoff(y_, x);
  } else {
    // A bare relative payoff game is its own (zero-sum) payoff table.
    r.payoff_x = r.delta;
    r.payoff_y = -r.delta;
  }
  r.total = total() + r.delta;
  y_ = imitator_step(*rel_, x, y_);
  rounds_.push_back(std::move(r));
  return rounds_.back();
}

// ---------------------------------------------------------------------------
// Policies

namespace {

std::vector<std::string> split(std::string_view text, char sep) {
  std::vector<std::string> out;
  std::size_t start = 0;
  while (true) {
    const auto pos = text.find(sep, start);
    out.emplace_back(text.substr(start, pos - start));
    if (pos == std::string_view::npos) break;
    start = pos + 1;
  }
  return out;
}

ActionIndex label_index(const RelativePayoffGame& rel, const std::string& l) {
  const auto idx = rel.index_of(l);
  if (!idx) throw std::invalid_argument("unknown action '" + l + "'");
  return *idx;
}

std::vector<ActionIndex> label_list(const RelativePayoffGame& rel,
                                    std::string_view text) {
  std::vector<ActionIndex> out;
  if (text.empty()) return out;
  for (const auto& l : split(text, ',')) out.push_back(label_index(rel, l));
  return out;
}

std::string label_csv(const RelativePayoffGame& rel,
                      const std::vector<ActionIndex>& seq) {
  std::string out;
  for (ActionIndex a : seq) {
    if (!out.empty()) out += ',';
    out += rel.label(a);
  }
  return out;
}

// Follows the exploitation witness from the current imitator state and
// replans whenever the imitator is somewhere the plan did not predict.
class OptimalPlanner {
 public:
  explicit OptimalPlanner(const RelativePayoffGame& rel) : rel_(rel) {}

  ActionIndex next(ActionIndex y) {
    if (!expected_ || *expected_ != y) replan(y);
    ActionIndex x;
    if (pos_ < moves_.size()) {
      x = moves_[pos_];
    } else if (!loop_.empty()) {
      x = loop_[(pos_ - moves_.size()) % loop_.size()];
    } else {
      x = y;  // sink: nothing left to gain
    }
    ++pos_;
    expected_ = imitator_step(rel_, x, y);
    return x;
  }

 private:
  void replan(ActionIndex y) {
    const ExploitReport report = exploitation(rel_, y);
    pos_ = 0;
    loop_.clear();
    if (const auto* path = report.path()) {
      moves_ = path->moves;
    } else {
      moves_ = report.pump()->approach;
      loop_ = report.pump()->cycle;
    }
  }

  const RelativePayoffGame& rel_;
  std::vector<ActionIndex> moves_;
  std::vector<ActionIndex> loop_;
  std::size_t pos_ = 0;
  std::optional<ActionIndex> expected_;
};

ActionIndex myopic_choice(const RelativePayoffGame& rel, ActionIndex y) {
  ActionIndex best = y;
  for (ActionIndex x = 0; x < rel.size(); ++x) {
    if (rel.delta(best, y) < rel.delta(x, y)) best = x;
  }
  return best;
}

bool history_free(PolicyKind kind) {
  return kind != PolicyKind::kRandom && kind != PolicyKind::kScripted &&
         kind != PolicyKind::kExternal;
}

}  // namespace

Policy Policy::parse(std::string_view spec, const RelativePayoffGame& rel) {
  const auto colon = spec.find(':');
  const std::string_view kind = spec.substr(0, colon);
  const std::string_view arg =
      colon == std::string_view::npos ? std::string_view{} : spec.substr(colon + 1);
  const bool has_arg = colon != std::string_view::npos;
  auto no_arg = [&](Policy p) {
    if (has_arg) {
      throw std::invalid_argument("policy '" + std::string(kind) +
                                  "' takes no argument");
    }
    return p;
  };
  if (kind == "optimal") return no_arg(optimal());
  if (kind == "myopic") return no_arg(myopic());
  if (kind == "imitator") return no_arg(imitator());
  if (kind == "constant" && has_arg) {
    return constant(label_index(rel, std::string(arg)));
  }
  if (kind == "random" && has_arg) {
    try {
      std::size_t used = 0;
      const auto seed = std::stoull(std::string(arg), &used);
      if (used == arg.size()) return random(seed);
    } catch (const std::exception&) {
    }
    throw std::invalid_argument("random policy needs an integer seed");
  }
  if ((kind == "scripted" || kind == "external") && has_arg) {
    auto seq = label_list(rel, arg);
    if (seq.empty()) {
      throw std::invalid_argument(std::string(kind) + " policy needs actions");
    }
    return kind == "scripted" ? scripted(std::move(seq))
                              : external(std::move(seq));
  }
  throw std::invalid_argument("invalid policy spec '" + std::string(spec) +
                              "' (optimal, myopic, imitator, constant:A, "
                              "random:SEED, scripted:A,B,..., external:A,B,...)");
}

std::string Policy::name(const RelativePayoffGame& rel) const {
  switch (kind) {
    case PolicyKind::kOptimalExploiter: return "optimal";
    case PolicyKind::kMyopicRelative: return "myopic";
    case PolicyKind::kImitator: return "imitator";
    case PolicyKind::kConstant: return "constant:" + rel.label(action);
    case PolicyKind::kRandom: return "random:" + std::to_string(seed);
    case PolicyKind::kScripted: return "scripted:" + label_csv(rel, sequence);
    case PolicyKind::kExternal: return "external:" + label_csv(rel, sequence);
  }
  return "?";
}

Trajectory run_match(const RelativePayoffGame& rel, const Policy& policy,
                     std::optional<ActionIndex> x0, ActionIndex y0,
                     std::size_t horizon) {
  if (horizon == 0) throw std::invalid_argument("horizon must be >= 1");
  const std::size_t n = rel.size();
  if (y0 >= n || (x0 && *x0 >= n)) {
    throw std::invalid_argument("start action out of range");
  }
  if (policy.kind == PolicyKind::kConstant && policy.action >= n) {
    throw std::invalid_argument("constant action out of range");
  }
  for (ActionIndex a : policy.sequence) {
    if (a >= n) throw std::invalid_argument("scripted action out of range");
  }
  if (policy.kind == PolicyKind::kScripted && policy.sequence.empty()) {
    throw std::invalid_argument("scripted policy needs at least one action");
  }

  // Non-owning view: the match never outlives this call.
  Match match(std::shared_ptr<const RelativePayoffGame>(
                  std::shared_ptr<const RelativePayoffGame>{}, &rel),
              y0, horizon);
  OptimalPlanner planner(rel);
  std::mt19937_64 rng(policy.seed);
  std::uniform_int_distribution<ActionIndex> pick(0, n - 1);

  Trajectory out;
  out.y0 = y0;
  out.policy_name = policy.name(rel);
  std::optional<ActionIndex> last_x;

  for (std::size_t t = 0; t < horizon; ++t) {
    const ActionIndex y = match.imitator();
    ActionIndex x = 0;
    // Random draws are taken every round so x0 does not shift the stream.
    const ActionIndex drawn =
        policy.kind == PolicyKind::kRandom ? pick(rng) : 0;
    switch (policy.kind) {
      case PolicyKind::kOptimalExploiter: x = planner.next(y); break;
      case PolicyKind::kMyopicRelative: x = myopic_choice(rel, y); break;
      case PolicyKind::kImitator:
        x = last_x ? imitator_step(rel, y, *last_x) : y;
        break;
      case PolicyKind::kConstant: x = policy.action; break;
      case PolicyKind::kRandom: x = drawn; break;
      case PolicyKind::kScripted:
        x = policy.sequence[t % policy.sequence.size()];
        break;
      case PolicyKind::kExternal:
        if (t >= policy.sequence.size()) {
          throw SimulationError("external policy supplied " +
                                std::to_string(policy.sequence.size()) +
                                " actions but round " + std::to_string(t) +
                                " needs one");
        }
        x = policy.sequence[t];
        break;
    }
    if (t == 0 && x0) x = *x0;
    if (t == 0) out.x0 = x;
    last_x = x;
    const Round& r = match.play(x);

    const auto& h = match.history();
    if (history_free(policy.kind) && h.size() >= 2 && r.delta.is_zero() &&
        h[h.size() - 2].x == r.x && h[h.size() - 2].y == r.y) {
      out.terminated = Termination::kFixpoint;
      break;
    }
  }
  out.rounds = match.history();
  return out;
}

Trajectory run_match(const SymmetricGame& game, const Policy& policy,
                     std::optional<ActionIndex> x0, ActionIndex y0,
                     std::size_t horizon) {
  return run_match(relative_payoff_game(game), policy, x0, y0, horizon);
}

Rational best_total_over_all_sequences(const RelativePayoffGame& rel,
                                       ActionIndex y0, std::size_t horizon) {
  if (horizon == 0) throw std::invalid_argument("horizon must be >= 1");
  if (y0 >= rel.size()) throw std::out_of_range("start action out of range");
  std::optional<Rational> best;
  std::function<void(ActionIndex, const Rational&, std::size_t)> go =
      [&](ActionIndex y, const Rational& total, std::size_t left) {
        if (left == 0) return;
        for (ActionIndex x = 0; x < rel.size(); ++x) {
          const Rational next = total + rel.delta(x, y);
          if (!best || *best < next) best = next;
          go(imitator_step(rel, x, y), next, left - 1);
        }
      };
  go(y0, Rational(0), horizon);
  return *best;
}

}  // namespace imitation
