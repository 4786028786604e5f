#include <algorithm>
#include <random>
#include <stdexcept>

#include "imitation/analysis.hpp"
#include "imitation/game_json.hpp"
#include "imitation/generators.hpp"

namespace imitation {
namespace {

struct TrialOutcome {
  bool pump = false;
  bool essentially_unbeatable = false;
  std::size_t bounded_starts = 0;
  std::vector<std::string> problems;
  std::string game_json;
};

TrialOutcome run_trial(const CrosscheckOptions& options, std::size_t index) {
  const std::uint64_t seed = trial_seed(options.seed, index);
  std::mt19937_64 size_rng(seed);
  std::uniform_int_distribution<std::size_t> size_dist(2, options.max_actions);
  const std::size_t n = size_dist(size_rng);
  // Decorrelate the payoff stream from the size draw.
  const SymmetricGame game =
      random_game(seed ^ 0x9e3779b97f4a7c15ULL, n, options.value_range);
  const RelativePayoffGame rel = relative_payoff_game(game);

  TrialOutcome out;
  const bool core_route = !grps_core(rel).empty();
  const bool cycle_route = find_imitation_cycle(rel).has_value();
  const auto reports = exploit_all_serial(rel);
  const bool dp_route = std::any_of(reports.begin(), reports.end(),
                                    [](const auto& r) { return r.unbounded(); });

  bool oracle_route = false;
  for (ActionIndex start = 0; start < n; ++start) {
    const auto& report = reports[start];
    const auto oracle = brute_force_exploitation(rel, start);
    oracle_route = oracle_route || !oracle;
    if (report.unbounded() != !oracle) {
      out.problems.push_back("start " + rel.label(start) +
                             ": DP and path enumeration disagree on "
                             "boundedness");
    } else if (oracle) {
      ++out.bounded_starts;
      if (*oracle != *report.value) {
        out.problems.push_back("start " + rel.label(start) + ": DP value " +
                               report.value->str() + " != enumerated " +
                               oracle->str());
      }
    }
    if (auto problem = witness_problem(rel, report); !problem.empty()) {
      out.problems.push_back("start " + rel.label(start) + ": " + problem);
    }
  }

  if (core_route != cycle_route || core_route != dp_route ||
      core_route != oracle_route) {
    out.problems.push_back(
        "money-pump routes disagree: core=" + std::to_string(core_route) +
        " cycle=" + std::to_string(cycle_route) +
        " dp=" + std::to_string(dp_route) +
        " enumeration=" + std::to_string(oracle_route));
  }

  out.pump = core_route;
  if (!core_route && out.problems.empty()) {
    Rational bound;
    for (const auto& r : reports) bound = max(bound, *r.value);
    out.essentially_unbeatable = bound <= rel.delta_hat();
  }
  if (!out.problems.empty()) out.game_json = serialize_game(game);
  return out;
}

CrosscheckReport aggregate(const CrosscheckOptions& options,
                           const std::vector<TrialOutcome>& outcomes) {
  CrosscheckReport report;
  report.options = options;
  report.trials = outcomes.size();
  for (std::size_t i = 0; i < outcomes.size(); ++i) {
    const auto& o = outcomes[i];
    if (o.pump) {
      ++report.pumps;
    } else {
      ++report.bounded_games;
    }
    if (o.essentially_unbeatable) ++report.essentially_unbeatable;
    report.bounded_starts_checked += o.bounded_starts;
    if (!o.problems.empty()) {
      ++report.mismatches;
      std::string reason;
      for (const auto& p : o.problems) {
        if (!reason.empty()) reason += "; ";
        reason += p;
      }
      report.failures.push_back({i, std::move(reason), o.game_json});
    }
  }
  return report;
}

}  // namespace

void validate(const CrosscheckOptions& options) {
  if (options.trials < 1) {
    throw std::invalid_argument("crosscheck: trials must be >= 1");
  }
  if (options.max_actions < 2 || options.max_actions > 9) {
    throw std::invalid_argument("crosscheck: max_actions must be in [2, 9]");
  }
  if (options.value_range < 1) {
    throw std::invalid_argument("crosscheck: value_range must be >= 1");
  }
}

std::uint64_t trial_seed(std::uint64_t seed, std::size_t index) {
  // splitmix64 finaliser over (seed, index).
  std::uint64_t z = seed + 0x9e3779b97f4a7c15ULL * (index + 1);
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

CrosscheckReport crosscheck_theorem1_serial(const CrosscheckOptions& options) {
  validate(options);
  std::vector<TrialOutcome> outcomes;
  outcomes.reserve(options.trials);
  for (std::size_t i = 0; i < options.trials; ++i) {
    outcomes.push_back(run_trial(options, i));
  }
  return aggregate(options, outcomes);
}

CrosscheckReport crosscheck_theorem1(const CrosscheckOptions& options) {
  validate(options);
  std::vector<TrialOutcome> outcomes(options.trials);
  const auto trials = static_cast<std::int64_t>(options.trials);
#pragma omp parallel for schedule(dynamic, 8)
  for (std::int64_t i = 0; i < trials; ++i) {
    outcomes[static_cast<std::size_t>(i)] =
        run_trial(options, static_cast<std::size_t>(i));
  }
  return aggregate(options, outcomes);
}

}  // namespace imitation
