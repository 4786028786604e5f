// Acceptance suite: one PASS/FAIL line per headline property. Exits nonzero
// if any criterion fails.

#include <functional>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "imitation/analysis.hpp"
#include "imitation/classifiers.hpp"
#include "imitation/generators.hpp"
#include "imitation/simulator.hpp"
#include "support.hpp"

using namespace imitation;

namespace {

// Collects failure messages; a criterion passes when none were recorded.
struct Check {
  std::vector<std::string> failures;

  void expect(bool ok, const std::string& what) {
    if (!ok && failures.size() < 8) failures.push_back(what);
  }
};

bool report(const std::string& name, const std::function<void(Check&)>& body) {
  Check c;
  try {
    body(c);
  } catch (const std::exception& e) {
    c.failures.push_back(std::string("exception: ") + e.what());
  }
  std::cout << (c.failures.empty() ? "PASS " : "FAIL ") << name << '\n';
  for (const auto& f : c.failures) std::cout << "    " << f << '\n';
  return c.failures.empty();
}

std::string labels(const RelativePayoffGame& rel, const std::vector<ActionIndex>& v) {
  std::string s;
  for (auto a : v) s += (s.empty() ? "" : ",") + rel.label(a);
  return s;
}

bool separable(const RelativePayoffGame& rel) {
  return std::holds_alternative<SeparabilityCertificate>(check_separable(rel));
}

// separable => valuation => no improvement cycle => no money pump.
void implication_chain(Check& c, const RelativePayoffGame& rel, const std::string& name) {
  const bool sep = separable(rel);
  const bool valuation = check_differences(rel).valuation();
  const bool potential = std::holds_alternative<PotentialFunction>(improvement_analysis(rel));
  const bool pump = verdict(rel).kind == VerdictKind::kMoneyPump;
  c.expect(!sep || valuation, name + ": separable but not valuation");
  c.expect(!valuation || potential, name + ": valuation but improvement cycle");
  c.expect(!potential || !pump, name + ": potential but money pump");
}

SymmetricGame two_by_two(int a, int b, int c, int d) {
  PayoffMatrix m(2);
  m(0, 0) = Rational(a);
  m(0, 1) = Rational(b);
  m(1, 0) = Rational(c);
  m(1, 1) = Rational(d);
  return SymmetricGame({"u", "v"}, m);
}

void equivalence(Check& c) {
  CrosscheckOptions o;
  o.seed = 42;
  o.trials = 1000;
  o.max_actions = 5;
  o.value_range = 5;
  const auto r = crosscheck_theorem1(o);
  c.expect(r.trials == 1000, "trial count");
  c.expect(r.mismatches == 0, std::to_string(r.mismatches) + " mismatches");
  c.expect(r.pumps > 0 && r.bounded_starts_checked > 0, "both regimes exercised");
  c.expect(r == crosscheck_theorem1_serial(o), "parallel differs from serial");
  for (const auto& f : r.failures) c.expect(false, f.reason);
}

void worked_examples(Check& c) {
  const auto rps = relative_payoff_game(generate("rps").game);
  const auto vr = verdict(rps);
  c.expect(vr.kind == VerdictKind::kMoneyPump, "rps verdict");
  c.expect(vr.imitation_cycle && labels(rps, *vr.imitation_cycle) == "R,P,S",
           "rps cycle R->P->S");

  const auto chicken = relative_payoff_game(generate("chicken").game);
  const auto vc = verdict(chicken);
  c.expect(vc.kind == VerdictKind::kEssentiallyUnbeatable, "chicken verdict");
  c.expect(vc.bound == Rational(3) && vc.delta_hat == Rational(3), "chicken M = 3 = delta_hat");

  const auto gop = relative_payoff_game(fixtures::gopotential());
  c.expect(exploitation(gop, 0).value == Rational(3), "gopotential exploitation(A) = 3");
  c.expect(fess_set(gop) == std::vector<ActionIndex>{1, 2}, "gopotential fESS = {B, C}");
  c.expect(!separable(gop), "gopotential not separable");
  const auto cert = improvement_analysis(gop);
  const auto* p = std::get_if<PotentialFunction>(&cert);
  c.expect(p && verify_generalized_ordinal_potential(gop, p->level),
           "gopotential potential certificate");

  const auto ng = relative_payoff_game(generate("ngrps_gop").game);
  c.expect(!is_grps_matrix(ng), "ngrps_gop is GRPS");
  c.expect(single_peaked_under(ng, {0, 1, 2}), "ngrps_gop quasiconcave under a<b<c");
  const auto nc = improvement_analysis(ng);
  const auto* cyc = std::get_if<ImprovementCycle>(&nc);
  const std::vector<Profile> expected{{1, 0}, {2, 0}, {2, 2}, {1, 2}, {1, 0}};
  c.expect(cyc && cyc->profiles == expected, "ngrps_gop improvement cycle");
  c.expect(verdict(ng).bound == Rational(2), "ngrps_gop bound 2");
}

void all_two_by_two(Check& c) {
  std::size_t games = 0;
  for (int a = -3; a <= 3; ++a) {
    for (int b = -3; b <= 3; ++b) {
      for (int x = -3; x <= 3; ++x) {
        for (int d = -3; d <= 3; ++d) {
          ++games;
          const auto v = verdict(two_by_two(a, b, x, d));
          std::ostringstream name;
          name << "[[" << a << ',' << b << "],[" << x << ',' << d << "]]";
          c.expect(v.kind == VerdictKind::kEssentiallyUnbeatable, name.str() + " verdict");
          for (const auto& r : v.reports) {
            c.expect(r.path() && r.path()->moves.size() <= 1, name.str() + " path length");
          }
        }
      }
    }
  }
  c.expect(games == 2401, "game count");
}

void separable_families(Check& c) {
  for (const char* name : {"cournot_linear", "bertrand_diff", "public_goods", "common_pool",
                           "min_effort", "synergistic", "arms_race", "diamond_search"}) {
    const auto rel = relative_payoff_game(generate(name).game);
    c.expect(separable(rel), std::string(name) + " not separable");
    c.expect(verdict(rel).kind == VerdictKind::kEssentiallyUnbeatable,
             std::string(name) + " verdict");
    // The three-point identity, checked directly on every triple.
    const std::size_t n = rel.size();
    bool identity = true;
    for (ActionIndex x2 = 0; x2 < n && identity; ++x2) {
      for (ActionIndex x1 = 0; x1 < n && identity; ++x1) {
        for (ActionIndex x = 0; x < n && identity; ++x) {
          identity = rel.delta(x2, x) == rel.delta(x2, x1) + rel.delta(x1, x);
        }
      }
    }
    c.expect(identity, std::string(name) + " three-point identity");
  }
}

void single_crossing_families(Check& c) {
  for (const char* name : {"nash_demand", "ratio_game"}) {
    const auto rel = relative_payoff_game(generate(name).game);
    c.expect(check_quasiconcave(rel, false).holds, std::string(name) + " quasiconcave");
    c.expect(verdict(rel).kind != VerdictKind::kMoneyPump, std::string(name) + " pump");
  }
  for (const char* name : {"rent_seeking", "cournot_general"}) {
    const auto gen = generate(name);
    const auto r = check_aggregative(*gen.aggregative, gen.game);
    c.expect(r.quasisubmodular.holds, std::string(name) + " quasisubmodular");
    c.expect(r.quasiconcave_in_x.holds, std::string(name) + " quasiconcave in x");
    c.expect(r.fess_exists && !r.fess.empty(), std::string(name) + " aggregative fESS");
  }
  for (const auto& info : presets()) {
    implication_chain(c, relative_payoff_game(generate(info.name).game), info.name);
  }
  for (std::uint64_t seed = 0; seed < 500; ++seed) {
    implication_chain(c, relative_payoff_game(random_game(seed, 2 + seed % 5, 4)),
                      "random " + std::to_string(seed));
  }
}

void certificates(Check& c) {
  std::size_t separable_certs = 0, potentials = 0;
  for (std::uint64_t seed = 0; seed < 500; ++seed) {
    const std::size_t n = 2 + seed % 5;
    // Narrow value ranges on small games make separable inputs common.
    const auto rel = relative_payoff_game(random_game(seed, n, seed % 2 ? 1 : 4));
    const auto sep = check_separable(rel);
    if (const auto* s = std::get_if<SeparabilityCertificate>(&sep)) {
      ++separable_certs;
      c.expect(verify_separable(rel, *s), "separability " + std::to_string(seed));
    }
    const auto pot = improvement_analysis(rel);
    if (const auto* p = std::get_if<PotentialFunction>(&pot)) {
      ++potentials;
      c.expect(verify_generalized_ordinal_potential(rel, p->level),
               "potential " + std::to_string(seed));
    } else {
      c.expect(is_strict_improvement_cycle(rel, std::get<ImprovementCycle>(pot).profiles),
               "improvement cycle " + std::to_string(seed));
    }
  }
  c.expect(separable_certs > 0 && potentials > 0, "no certificates exercised");
}

void cournot_demo(Check& c) {
  const auto r = run_three_player_cournot_demo(4);
  for (const auto& chk : r.checks) c.expect(chk.passed, chk.name + ": " + chk.detail);
  c.expect(r.rounds[0].profit == std::array<Rational, 3>{Rational(0), Rational(2025, 2),
                                                         Rational(2025, 2)},
           "sharing round profits");
  c.expect(r.rounds[1].profit[0] == Rational(-45, 4) && r.rounds[1].profit[2] == Rational(-34),
           "flooding round profits");
  for (std::size_t i = 1; i < r.cumulative_shortfall.size(); ++i) {
    c.expect(r.cumulative_shortfall[i - 1] < r.cumulative_shortfall[i], "shortfall growth");
  }
}

void simulator_agreement(Check& c) {
  for (const auto& info : presets()) {
    const auto rel = relative_payoff_game(generate(info.name).game);
    for (ActionIndex y0 = 0; y0 < rel.size(); ++y0) {
      const auto rep = exploitation(rel, y0);
      const auto tr = run_match(rel, Policy::optimal(), std::nullopt, y0, 50);
      const std::string where = info.name + " from " + rel.label(y0);
      if (rep.value) {
        c.expect(tr.total() == *rep.value, where + " total");
        continue;
      }
      const auto* pump = rep.pump();
      const std::size_t a = pump->approach.size(), lap = pump->cycle.size();
      Rational previous = a ? tr.rounds[a - 1].total : Rational(0);
      for (std::size_t end = a + lap; end <= tr.rounds.size(); end += lap) {
        const Rational now = tr.rounds[end - 1].total;
        c.expect(previous < now, where + " lap growth");
        c.expect(now - previous == pump->lap_gain, where + " lap gain");
        previous = now;
      }
    }
  }
  // Every move sequence up to horizon 6 on small games.
  std::size_t compared = 0;
  for (std::uint64_t seed = 0; seed < 60; ++seed) {
    const auto rel = relative_payoff_game(random_game(seed, 2 + seed % 3, 3));
    for (ActionIndex y0 = 0; y0 < rel.size(); ++y0) {
      const auto rep = exploitation(rel, y0);
      if (!rep.value) continue;
      for (std::size_t h = 1; h <= 6; ++h) {
        c.expect(best_total_over_all_sequences(rel, y0, h) <= *rep.value,
                 "sequence beats value, seed " + std::to_string(seed));
        ++compared;
      }
    }
  }
  c.expect(compared > 0, "no bounded starts compared");
}

}  // namespace

int main() {
  bool ok = true;
  ok &= report("three-way money-pump equivalence and DP = brute force", equivalence);
  ok &= report("worked example regressions", worked_examples);
  ok &= report("all 2x2 integer games in [-3,3] essentially unbeatable", all_two_by_two);
  ok &= report("separable families", separable_families);
  ok &= report("quasiconcave and aggregative families, implication chain",
               single_crossing_families);
  ok &= report("certificate soundness", certificates);
  ok &= report("three-player Cournot counterexample", cournot_demo);
  ok &= report("simulator agrees with analysis", simulator_agreement);
  return ok ? 0 : 1;
}
