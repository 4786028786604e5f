#include <doctest.h>

#include "imitation/game_json.hpp"
#include "support.hpp"

using namespace imitation;

TEST_CASE("rational parsing and lowest terms") {
  CHECK(Rational::parse("6/4") == Rational(3, 2));
  CHECK(Rational::parse("6/4").str() == "3/2");
  CHECK(Rational::parse("-10").str() == "-10");
  CHECK(Rational::parse("-2/4").str() == "-1/2");
  CHECK(Rational::parse("0/7").str() == "0");
  CHECK_THROWS_AS(Rational::parse("1/0"), RationalFormatError);
  CHECK_THROWS_AS(Rational::parse("1/-2"), RationalFormatError);
  CHECK_THROWS_AS(Rational::parse("1.5"), RationalFormatError);
  CHECK_THROWS_AS(Rational::parse(""), RationalFormatError);
  CHECK_THROWS_AS(Rational(1) / Rational(0), std::domain_error);
}

TEST_CASE("rational arithmetic is exact") {
  const Rational third(1, 3);
  CHECK(third + third + third == Rational(1));
  CHECK(Rational(45, 2) * Rational(45) == Rational(2025, 2));
  CHECK(Rational(1, 3) < Rational(1, 2));
  CHECK(Rational(2025, 2).decimal(2) == "1012.50");
  CHECK(Rational(-45, 4).decimal(1) == "-11.3");  // half away from zero
  CHECK(Rational(2, 3).decimal(0) == "1");
}

TEST_CASE("parse_game: rock-paper-scissors") {
  const auto g = parse_game(
      R"({"actions":["R","P","S"], "payoffs":[["0","-1","1"],["1","0","-1"],["-1","1","0"]]})");
  CHECK(g.size() == 3);
  CHECK(g.payoff(0, 1) == Rational(-1));
  CHECK_FALSE(g.meta().has_value());
}

TEST_CASE("parse_game: minimal and rational entries") {
  CHECK(parse_game(R"({"actions":["a"], "payoffs":[["0"]]})").size() == 1);
  const auto g =
      parse_game(R"({"actions":["x","y"], "payoffs":[["1/2","-3/4"],["2","0"]]})");
  CHECK(g.payoff(0, 1) == Rational(-3, 4));
}

TEST_CASE("parse_game: errors carry positions") {
  try {
    parse_game(R"({"actions":["a","b"], "payoffs":[["0","1"]]})");
    FAIL("expected an error");
  } catch (const GameError& e) {
    CHECK(std::string(e.what()).find("non-square") != std::string::npos);
  }
  try {
    parse_game(R"({"actions":["a","b"], "payoffs":[["0","1"],["2","3/0"]]})");
    FAIL("expected an error");
  } catch (const GameError& e) {
    CHECK(e.row() == 1u);
    CHECK(e.column() == 1u);
  }
  try {
    parse_game(R"({"actions":["a","b"], "payoffs":[["0","1"],["2","x"]]})");
    FAIL("expected an error");
  } catch (const GameError& e) {
    CHECK(e.row() == 1u);
    CHECK(e.column() == 1u);
  }
  CHECK_THROWS_AS(parse_game(R"({"actions":["a","a"], "payoffs":[["0","1"],["2","3"]]})"),
                  GameError);
  CHECK_THROWS_AS(parse_game(R"({"actions":[], "payoffs":[]})"), GameError);
  CHECK_THROWS_AS(parse_game("{not json"), GameError);
  CHECK_THROWS_AS(parse_game(R"({"actions":["a"], "payoffs":[[0]]})"), GameError);
}

TEST_CASE("serialization round-trips exactly") {
  GameMeta meta{"custom", {{"b", "100"}}, {Rational(0), Rational(5, 2)}};
  PayoffMatrix m(2);
  m(0, 0) = Rational(1, 3);
  m(0, 1) = Rational(-7);
  m(1, 0) = Rational(22, 7);
  m(1, 1) = Rational(0);
  const SymmetricGame g({"lo", "hi"}, m, meta);
  const std::string text = serialize_game(g);
  CHECK(parse_game(text) == g);
  CHECK(serialize_game(parse_game(text)) == text);
  CHECK(text.find(R"("payoffs":[["1/3","-7"],["22/7","0"]])") != std::string::npos);
}

TEST_CASE("relative payoff game: chicken and rps") {
  const auto chicken = relative_payoff_game(fixtures::chicken());
  CHECK(chicken.delta(0, 1) == Rational(-3));
  CHECK(chicken.delta(1, 0) == Rational(3));
  CHECK(chicken.delta_hat() == Rational(3));

  const auto rps = relative_payoff_game(fixtures::rps());
  for (ActionIndex x = 0; x < 3; ++x) {
    for (ActionIndex y = 0; y < 3; ++y) {
      CHECK(rps.delta(x, y) == Rational(2) * fixtures::rps().payoff(x, y));
    }
  }
}

TEST_CASE("symmetric payoff function gives a zero relative game") {
  const auto g = fixtures::game({"a", "b", "c"}, {{1, 2, 3}, {2, 5, 7}, {3, 7, -1}});
  const auto rel = relative_payoff_game(g);
  for (ActionIndex x = 0; x < 3; ++x) {
    for (ActionIndex y = 0; y < 3; ++y) CHECK(rel.delta(x, y).is_zero());
  }
}

TEST_CASE("relative game of a zero-sum relative game doubles it") {
  const auto rel = relative_payoff_game(fixtures::gopotential());
  const SymmetricGame as_game(rel.actions(), rel.delta_matrix());
  const auto twice = relative_payoff_game(as_game);
  for (ActionIndex x = 0; x < 3; ++x) {
    for (ActionIndex y = 0; y < 3; ++y) {
      CHECK(twice.delta(x, y) == Rational(2) * rel.delta(x, y));
      CHECK(twice.delta(x, y).sign() == rel.delta(x, y).sign());
      CHECK(rel.delta(x, y) + rel.delta(y, x) == Rational(0));
    }
  }
}

TEST_CASE("from_delta rejects non-antisymmetric matrices") {
  CHECK_THROWS_AS(fixtures::relative({"a", "b"}, {{0, 1}, {1, 0}}), GameError);
  CHECK_THROWS_AS(fixtures::relative({"a", "b"}, {{1, 0}, {0, -1}}), GameError);
  CHECK(antisymmetry_violation(fixtures::matrix({{0, 2}, {-2, 0}})) == std::nullopt);
}

TEST_CASE("beaten-digraph adjacency") {
  const auto rps = relative_payoff_game(fixtures::rps());
  // P beats R, S beats P, R beats S.
  REQUIRE(rps.beating(0).size() == 1);
  CHECK(rps.beating(0)[0] == 1u);
  CHECK(rps.beating(1)[0] == 2u);
  CHECK(rps.beating(2)[0] == 0u);
  const auto chicken = relative_payoff_game(fixtures::chicken());
  CHECK(chicken.is_sink(1));
  CHECK_FALSE(chicken.is_sink(0));
}
