// Three-player Cournot counterexample: two coordinated maximizers take turns
// flooding the market so the imitator copies the idle one's zero quantity.

#include <algorithm>

#include "imitation/simulator.hpp"

namespace imitation {

std::size_t imitation_target(std::size_t self,
                             const std::vector<Rational>& payoffs) {
  std::size_t target = self;
  for (std::size_t i = 0; i < payoffs.size(); ++i) {
    if (payoffs[target] < payoffs[i]) target = i;
  }
  return target;
}

bool CournotDemoReport::passed() const {
  return !checks.empty() &&
         std::all_of(checks.begin(), checks.end(),
                     [](const DemoCheck& c) { return c.passed; });
}

namespace {

const Rational kIntercept(100);
const Rational kUnitCost(10);
const Rational kShare(45, 2);  // half the monopoly quantity (100 - 10) / 4
const Rational kFlood(68);

CournotRound play_round(std::size_t t, const std::array<Rational, 3>& q,
                        const std::array<Rational, 3>& before) {
  CournotRound r;
  r.t = t;
  r.quantity = q;
  r.price = kIntercept - (q[0] + q[1] + q[2]);
  for (std::size_t i = 0; i < 3; ++i) {
    r.profit[i] = q[i] * (r.price - kUnitCost);
    r.cumulative[i] = before[i] + r.profit[i];
  }
  return r;
}

std::string show(const std::array<Rational, 3>& v) {
  return "(" + v[0].str() + ", " + v[1].str() + ", " + v[2].str() + ")";
}

}  // namespace

CournotDemoReport run_three_player_cournot_demo(std::size_t laps) {
  if (laps == 0) throw std::invalid_argument("laps must be >= 1");
  CournotDemoReport report;
  report.laps = laps;

  Rational imitator_q(0);
  std::array<Rational, 3> cumulative{};
  const std::size_t rounds = 1 + 2 * laps;
  for (std::size_t t = 0; t < rounds; ++t) {
    std::array<Rational, 3> q;
    q[0] = imitator_q;
    if (t % 2 == 0) {
      q[1] = q[2] = kShare;
    } else {
      // Odd rounds: maximizer 2 floods first, then they alternate.
      const bool second_floods = (t / 2) % 2 == 0;
      q[1] = second_floods ? Rational(0) : kFlood;
      q[2] = second_floods ? kFlood : Rational(0);
    }
    report.rounds.push_back(play_round(t, q, cumulative));
    const CournotRound& r = report.rounds.back();
    cumulative = r.cumulative;
    const std::vector<Rational> payoffs(r.profit.begin(), r.profit.end());
    imitator_q = r.quantity[imitation_target(0, payoffs)];
  }

  auto shortfall_at = [&](std::size_t t) {
    const auto& c = report.rounds[t].cumulative;
    return (c[1] + c[2]) / Rational(2) - c[0];
  };
  for (std::size_t lap = 0; lap < laps; ++lap) {
    const std::size_t end = 2 * lap + 2;
    report.cumulative_shortfall.push_back(shortfall_at(end));
    report.lap_shortfall.push_back(shortfall_at(end) - shortfall_at(end - 2));
  }

  auto check = [&](std::string name, bool ok, std::string detail) {
    report.checks.push_back({std::move(name), ok, std::move(detail)});
  };

  const CournotRound& r0 = report.rounds[0];
  check("sharing round profits",
        r0.price == Rational(55) && r0.profit[0].is_zero() &&
            r0.profit[1] == Rational(2025, 2) &&
            r0.profit[2] == Rational(2025, 2),
        "price " + r0.price.str() + ", profits " + show(r0.profit));

  const CournotRound& r1 = report.rounds[1];
  check("flooding round profits",
        r1.quantity[0] == kShare && r1.price == Rational(19, 2) &&
            r1.profit[0] == Rational(-45, 4) && r1.profit[1].is_zero() &&
            r1.profit[2] == Rational(-34),
        "profile " + show(r1.quantity) + ", price " + r1.price.str() +
            ", profits " + show(r1.profit));

  bool cycle = true;
  std::string cycle_detail = "imitator quantities:";
  for (const auto& r : report.rounds) {
    const Rational expected = r.t % 2 == 0 ? Rational(0) : kShare;
    cycle = cycle && r.quantity[0] == expected;
    cycle_detail += " " + r.quantity[0].str();
  }
  for (std::size_t t = 2; t < report.rounds.size(); t += 2) {
    cycle = cycle && report.rounds[t].quantity == r0.quantity;
  }
  for (std::size_t t = 5; t < report.rounds.size(); ++t) {
    cycle = cycle && report.rounds[t].quantity == report.rounds[t - 4].quantity;
  }
  check("imitation 2-cycle", cycle, cycle_detail);

  bool behind = true;
  for (const auto& r : report.rounds) {
    behind = behind && r.cumulative[0] < r.cumulative[1] &&
             r.cumulative[0] < r.cumulative[2];
  }
  check("imitator behind both maximizers every round", behind,
        "final cumulative " + show(report.rounds.back().cumulative));

  bool growing = true;
  std::string lap_detail = "per-lap shortfall:";
  for (std::size_t lap = 0; lap < laps; ++lap) {
    growing = growing && report.lap_shortfall[lap].is_positive() &&
              report.lap_shortfall[lap] == report.lap_shortfall[0];
    lap_detail += " " + report.lap_shortfall[lap].str();
  }
  const Rational pumped = report.cumulative_shortfall.back() - shortfall_at(0);
  growing = growing && pumped == report.lap_shortfall[0] * Rational(
                                     static_cast<std::int64_t>(laps));
  check("shortfall strictly increasing per lap", growing, lap_detail);
  return report;
}

}  // namespace imitation
