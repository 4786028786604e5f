#include <doctest.h>

#include <algorithm>
#include <numeric>
#include <random>

#include "imitation/analysis.hpp"
#include "imitation/classifiers.hpp"
#include "imitation/generators.hpp"
#include "support.hpp"

using namespace imitation;
using V = std::vector<ActionIndex>;

namespace {

// Single-peaked by definition: some k with a nondecreasing prefix up to k
// and a nonincreasing suffix from k.
bool peaked(const std::vector<Rational>& col) {
  for (std::size_t k = 0; k < col.size(); ++k) {
    bool ok = true;
    for (std::size_t i = 0; i + 1 <= k && ok; ++i) ok = col[i] <= col[i + 1];
    for (std::size_t i = k; i + 1 < col.size() && ok; ++i) ok = col[i] >= col[i + 1];
    if (ok) return true;
  }
  return false;
}

bool all_columns_peaked(const RelativePayoffGame& rel, const V& order) {
  for (ActionIndex y = 0; y < rel.size(); ++y) {
    std::vector<Rational> col;
    for (ActionIndex x : order) col.push_back(rel.delta(x, y));
    if (!peaked(col)) return false;
  }
  return true;
}

// Transitive closure of the improvement digraph; true iff some profile
// reaches itself.
bool has_improvement_cycle_by_closure(const RelativePayoffGame& rel) {
  const std::size_t n = rel.size(), v = n * n;
  std::vector<std::vector<bool>> reach(v, std::vector<bool>(v, false));
  for (ActionIndex x = 0; x < n; ++x) {
    for (ActionIndex y = 0; y < n; ++y) {
      for (ActionIndex z = 0; z < n; ++z) {
        if (rel.delta(x, y) < rel.delta(z, y)) reach[x * n + y][z * n + y] = true;
        if (rel.delta(y, x) < rel.delta(z, x)) reach[x * n + y][x * n + z] = true;
      }
    }
  }
  for (std::size_t k = 0; k < v; ++k) {
    for (std::size_t i = 0; i < v; ++i) {
      if (!reach[i][k]) continue;
      for (std::size_t j = 0; j < v; ++j) {
        if (reach[k][j]) reach[i][j] = true;
      }
    }
  }
  for (std::size_t i = 0; i < v; ++i) {
    if (reach[i][i]) return true;
  }
  return false;
}

// pi(x, y) = f(x) + s(x, y) with s symmetric: Delta = f(x) - f(y).
SymmetricGame random_separable(std::uint64_t seed, std::size_t n) {
  std::mt19937_64 rng(seed);
  std::uniform_int_distribution<int> d(-6, 6);
  std::vector<Rational> f(n);
  for (auto& v : f) v = Rational(d(rng));
  PayoffMatrix s(n);
  for (ActionIndex x = 0; x < n; ++x) {
    for (ActionIndex y = x; y < n; ++y) s(x, y) = s(y, x) = Rational(d(rng));
  }
  PayoffMatrix pi(n);
  std::vector<std::string> labels;
  for (ActionIndex x = 0; x < n; ++x) {
    labels.push_back("s" + std::to_string(x));
    for (ActionIndex y = 0; y < n; ++y) pi(x, y) = f[x] + s(x, y);
  }
  return SymmetricGame(labels, pi);
}

}  // namespace

TEST_CASE("separability: chicken certificate") {
  const auto rel = relative_payoff_game(fixtures::chicken());
  const auto result = check_separable(rel);
  const auto* cert = std::get_if<SeparabilityCertificate>(&result);
  REQUIRE(cert);
  CHECK(cert->f == std::vector<Rational>{0, 3});
  CHECK(cert->reference_action == 0u);
  CHECK(verify_separable(rel, *cert));
  SeparabilityCertificate broken = *cert;
  broken.f[1] = Rational(2);
  CHECK_FALSE(verify_separable(rel, broken));
}

TEST_CASE("separability: gopotential is not separable") {
  const auto rel = relative_payoff_game(fixtures::gopotential());
  // The four-cell identity: Delta(A,B) - Delta(B,B) = -3 but
  // Delta(A,C) - Delta(B,C) = 0.
  CHECK(rel.delta(0, 1) - rel.delta(1, 1) == Rational(-3));
  CHECK(rel.delta(0, 2) - rel.delta(1, 2) == Rational(0));
  const auto result = check_separable(rel);
  const auto* v = std::get_if<SeparabilityViolation>(&result);
  REQUIRE(v);
  CHECK(v->direct != v->via_mid);
  CHECK(v->direct == rel.delta(v->far, v->near));
  CHECK(v->via_mid == rel.delta(v->far, v->mid) + rel.delta(v->mid, v->near));
  CHECK(one_large_step_violation(rel).has_value());
}

TEST_CASE("differences") {
  const auto rps = check_differences(relative_payoff_game(fixtures::rps()));
  CHECK_FALSE(rps.increasing);
  CHECK_FALSE(rps.decreasing);
  CHECK(rps.increasing_violation.has_value());
  const auto chicken = check_differences(relative_payoff_game(fixtures::chicken()));
  CHECK(chicken.valuation());
  CHECK(check_differences(fixtures::relative({"a"}, {{0}})).valuation());
}

TEST_CASE("quasiconcavity") {
  const auto gop = check_quasiconcave(fixtures::ngrps_gop(), false);
  CHECK(gop.holds);
  CHECK(gop.order_used == V{0, 1, 2});

  const auto rps_rel = relative_payoff_game(fixtures::rps());
  const auto rps = check_quasiconcave(rps_rel, true);
  CHECK_FALSE(rps.holds);
  CHECK(rps.violating_column.has_value());
  V perm{0, 1, 2};
  do {
    CHECK_FALSE(all_columns_peaked(rps_rel, perm));
  } while (std::next_permutation(perm.begin(), perm.end()));

  // A game single-peaked only under a non-index order is found by search.
  const auto rel = fixtures::relative({"a", "b", "c"}, {{0, 1, 0}, {-1, 0, -2}, {0, 2, 0}});
  const auto plain = check_quasiconcave(rel, false);
  const auto searched = check_quasiconcave(rel, true);
  CHECK(plain.holds == all_columns_peaked(rel, {0, 1, 2}));
  CHECK(searched.holds);
  CHECK(all_columns_peaked(rel, searched.order_used));

  CHECK_THROWS_AS(
      check_quasiconcave(relative_payoff_game(random_game(1, 11, 3)), true),
      std::invalid_argument);
}

TEST_CASE("improvement analysis: ngrps_gop cycle") {
  const auto rel = fixtures::ngrps_gop();
  const auto cert = improvement_analysis(rel);
  const auto* cycle = std::get_if<ImprovementCycle>(&cert);
  REQUIRE(cycle);
  const std::vector<Profile> expected{{1, 0}, {2, 0}, {2, 2}, {1, 2}, {1, 0}};
  CHECK(cycle->profiles == expected);
  CHECK(is_strict_improvement_cycle(rel, expected));
}

TEST_CASE("improvement analysis: gopotential potential") {
  const auto rel = relative_payoff_game(fixtures::gopotential());
  const auto cert = improvement_analysis(rel);
  const auto* p = std::get_if<PotentialFunction>(&cert);
  REQUIRE(p);
  CHECK(verify_generalized_ordinal_potential(rel, p->level));
  // The hand-written potential also qualifies.
  SquareMatrix<std::int64_t> g(3);
  const std::int64_t hand[3][3] = {{0, 1, 0}, {1, 2, 2}, {0, 2, 0}};
  for (int i = 0; i < 3; ++i) {
    for (int j = 0; j < 3; ++j) g(i, j) = hand[i][j];
  }
  CHECK(verify_generalized_ordinal_potential(rel, g));
}

TEST_CASE("improvement analysis: zero game") {
  const auto rel = fixtures::relative({"a", "b"}, {{0, 0}, {0, 0}});
  const auto cert = improvement_analysis(rel);
  const auto* p = std::get_if<PotentialFunction>(&cert);
  REQUIRE(p);
  CHECK(p->level == SquareMatrix<std::int64_t>(2, 0));
}

TEST_CASE("certificates re-verify on seeded random games") {
  for (std::uint64_t seed = 0; seed < 200; ++seed) {
    const std::size_t n = 2 + seed % 4;
    const auto rel = relative_payoff_game(
        seed % 2 ? random_game(seed, n, 3) : random_separable(seed, n));
    const auto sep = check_separable(rel);
    if (const auto* c = std::get_if<SeparabilityCertificate>(&sep)) {
      CHECK(verify_separable(rel, *c));
      CHECK_FALSE(one_large_step_violation(rel).has_value());
    } else {
      CHECK(one_large_step_violation(rel).has_value());
    }
    const auto pot = improvement_analysis(rel);
    if (const auto* p = std::get_if<PotentialFunction>(&pot)) {
      CHECK(verify_generalized_ordinal_potential(rel, p->level));
      CHECK_FALSE(has_improvement_cycle_by_closure(rel));
    } else {
      CHECK(is_strict_improvement_cycle(rel, std::get<ImprovementCycle>(pot).profiles));
      CHECK(has_improvement_cycle_by_closure(rel));
    }
  }
}

TEST_CASE("implication chain on random games") {
  for (std::uint64_t seed = 0; seed < 200; ++seed) {
    const std::size_t n = 2 + seed % 5;
    const auto rel = relative_payoff_game(
        seed % 3 == 0 ? random_separable(seed, n) : random_game(seed, n, 4));
    const bool separable =
        std::holds_alternative<SeparabilityCertificate>(check_separable(rel));
    const bool valuation = check_differences(rel).valuation();
    const bool no_improvement_cycle =
        std::holds_alternative<PotentialFunction>(improvement_analysis(rel));
    const bool no_imitation_cycle = !find_imitation_cycle(rel).has_value();
    const auto v = verdict(rel);
    if (separable) {
      CHECK(valuation);
      CHECK(v.kind == VerdictKind::kEssentiallyUnbeatable);
      // One step already attains the optimum: Delta telescopes.
      for (const auto& r : v.reports) {
        Rational best;
        for (ActionIndex x = 0; x < n; ++x) best = std::max(best, rel.delta(x, r.start));
        CHECK(r.value == best);
      }
    }
    if (valuation) CHECK(no_improvement_cycle);
    if (no_improvement_cycle) CHECK(no_imitation_cycle);
    if (no_imitation_cycle) CHECK(v.kind != VerdictKind::kMoneyPump);
    if (n <= 6 && check_quasiconcave(rel, true).holds) {
      CHECK(v.kind != VerdictKind::kMoneyPump);
    }
  }
}

TEST_CASE("aggregative: bilinear x*z is supermodular") {
  const std::vector<Rational> values{1, 2, 3};
  const AggregativeGame agg(
      {"1", "2", "3"}, values,
      [](const Rational& x, const Rational& y) { return x + y; },
      [](const Rational& x, const Rational& z) -> std::optional<Rational> {
        return x * z;
      });
  PayoffMatrix pi(3);
  for (ActionIndex x = 0; x < 3; ++x) {
    for (ActionIndex y = 0; y < 3; ++y) pi(x, y) = values[x] * (values[x] + values[y]);
  }
  const auto report = check_aggregative(agg, SymmetricGame(agg.actions(), pi));
  CHECK(report.supermodular.holds);
  CHECK(report.quasisupermodular.holds);
  CHECK_FALSE(report.submodular.holds);
  CHECK(report.submodular.counterexample.has_value());

  // A table that disagrees with the game is rejected.
  pi(0, 0) = Rational(99);
  CHECK_THROWS_AS(check_aggregative(agg, SymmetricGame(agg.actions(), pi)), GameError);
}

TEST_CASE("aggregative: aggregator validation") {
  const auto payoff = [](const Rational& x, const Rational&) -> std::optional<Rational> {
    return x;
  };
  CHECK_THROWS_AS(AggregativeGame({"a", "b"}, {0, 1},
                                  [](const Rational& x, const Rational&) { return x; },
                                  payoff),
                  GameError);
  CHECK_THROWS_AS(AggregativeGame({"a", "b"}, {0, 1},
                                  [](const Rational& x, const Rational& y) {
                                    return x + Rational(2) * y;
                                  },
                                  payoff),
                  GameError);
}
