#include "imitation/generators.hpp"

#include <algorithm>
#include <functional>
#include <random>
#include <set>
#include <sstream>
#include <utility>

namespace imitation {
namespace {

std::vector<std::string> split(std::string_view text, char sep) {
  std::vector<std::string> out;
  std::size_t begin = 0;
  while (true) {
    const auto end = text.find(sep, begin);
    out.emplace_back(text.substr(begin, end - begin));
    if (end == std::string_view::npos) break;
    begin = end + 1;
  }
  return out;
}

Rational parse_rational(std::string_view what, std::string_view text) {
  try {
    return Rational::parse(text);
  } catch (const RationalFormatError& e) {
    throw GeneratorError(std::string(what) + ": " + e.what());
  }
}

/// Effective parameters: defaults overlaid with user values.
class ParamReader {
 public:
  ParamReader(const PresetInfo& info, const Params& user)
      : preset_(info.name), values_(info.defaults) {
    for (const auto& [k, v] : user) {
      if (!values_.contains(k)) {
        throw GeneratorError("preset " + preset_ + " has no parameter \"" + k +
                             "\"");
      }
      values_[k] = v;
    }
  }

  Rational number(const std::string& key) const {
    return parse_rational(preset_ + "." + key, values_.at(key));
  }
  Polynomial polynomial(const std::string& key) const {
    try {
      return Polynomial::parse(values_.at(key));
    } catch (const GeneratorError& e) {
      throw GeneratorError(preset_ + "." + key + ": " + e.what());
    }
  }
  const std::string& text(const std::string& key) const {
    return values_.at(key);
  }
  void set(const std::string& key, std::string value) {
    values_[key] = std::move(value);
  }
  const Params& all() const { return values_; }

 private:
  std::string preset_;
  Params values_;
};

void require(bool ok, const std::string& message) {
  if (!ok) throw GeneratorError("parameter out of domain: " + message);
}

void require_increasing(const Polynomial& p, const std::vector<Rational>& at,
                        bool strict, const std::string& name) {
  for (std::size_t i = 1; i < at.size(); ++i) {
    const Rational lo = p(at[i - 1]);
    const Rational hi = p(at[i]);
    require(strict ? lo < hi : lo <= hi,
            name + " must be " + (strict ? "strictly " : "") +
                "increasing on the grid");
  }
}

std::vector<Rational> pair_sums(const std::vector<Rational>& values) {
  std::set<Rational> sums;
  for (const auto& a : values) {
    for (const auto& b : values) sums.insert(a + b);
  }
  return {sums.begin(), sums.end()};
}

using Payoff = std::function<Rational(const Rational&, const Rational&)>;

SymmetricGame matrix_game(std::vector<std::string> actions,
                          const std::vector<std::vector<std::int64_t>>& rows,
                          const std::string& preset) {
  PayoffMatrix m(actions.size());
  for (std::size_t i = 0; i < rows.size(); ++i) {
    for (std::size_t j = 0; j < rows[i].size(); ++j) m(i, j) = rows[i][j];
  }
  return SymmetricGame(std::move(actions), std::move(m),
                       GameMeta{preset, {}, {}});
}

SymmetricGame grid_game(const std::vector<Rational>& grid,
                        const Payoff& payoff, GameMeta meta) {
  std::vector<std::string> labels;
  labels.reserve(grid.size());
  for (const auto& v : grid) labels.push_back(v.str());
  PayoffMatrix m(grid.size());
  for (std::size_t i = 0; i < grid.size(); ++i) {
    for (std::size_t j = 0; j < grid.size(); ++j) m(i, j) = payoff(grid[i], grid[j]);
  }
  return SymmetricGame(std::move(labels), std::move(m), std::move(meta));
}

AggregativeGame sum_aggregative(const std::vector<Rational>& grid,
                                AggregativeGame::ExtendedPayoff extended) {
  std::vector<std::string> labels;
  for (const auto& v : grid) labels.push_back(v.str());
  return AggregativeGame(
      std::move(labels), grid,
      [](const Rational& x, const Rational& y) { return x + y; },
      std::move(extended));
}

const std::vector<PresetInfo>& preset_table() {
  static const std::vector<PresetInfo> table = {
      {"rps", "rock-paper-scissors", {}, std::nullopt, false},
      {"chicken", "chicken (swerve/straight)", {}, std::nullopt, false},
      {"pd", "prisoners' dilemma", {}, std::nullopt, false},
      {"stag_hunt", "stag hunt", {}, std::nullopt, false},
      {"cournot_linear",
       "Cournot duopoly, linear demand: x(b - x - y) - c(x)",
       {{"b", "100"}, {"cost", "0,10"}},
       GridSpec{0, 100, 41},
       true},
      {"bertrand_diff",
       "differentiated Bertrand: (x - c)(a + b y - x/2)",
       {{"a", "10"}, {"b", "1/4"}, {"c", "1"}},
       GridSpec{0, 20, 41},
       false},
      {"public_goods",
       "public goods: g(x + y) - c(x); shape=linear|quadratic",
       {{"shape", "linear"}, {"benefit", ""}, {"cost", "0,2"}},
       GridSpec{0, 10, 11},
       true},
      {"common_pool",
       "common pool resource: c(e - x) + x/(x+y)(a(x+y) - b(x+y)^2)",
       {{"e", "10"}, {"c", "1"}, {"a", "5"}, {"b", "1/4"}},
       GridSpec{0, 10, 21},
       true},
      {"min_effort",
       "minimum effort coordination: min(x, y) - c(x)",
       {{"cost", "0,1/2"}},
       GridSpec{1, 7, 7},
       false},
      {"synergistic",
       "synergistic relationship: x(c + y - x)",
       {{"c", "4"}},
       GridSpec{0, 10, 21},
       false},
      {"arms_race",
       "arms race: h(x - y) - c(x), h odd and concave",
       {{"h", "0,1"}, {"cost", "0,1/2"}},
       GridSpec{0, 10, 11},
       false},
      {"diamond_search",
       "Diamond search: alpha x y - c(x)",
       {{"alpha", "1"}, {"cost", "0,0,1/2"}},
       GridSpec{0, 4, 9},
       false},
      {"coordination_outside",
       "coordination game with outside option C",
       {},
       std::nullopt,
       false},
      {"ngrps_gop",
       "quasiconcave relative game with a strict improvement cycle",
       {},
       std::nullopt,
       false},
      {"nash_demand",
       "Nash demand game: x if x + y <= s else 0",
       {{"s", "10"}},
       GridSpec{0, 10, 11},
       false},
      {"ratio_game", "ratio game: x / y on [1, 2]", {}, GridSpec{1, 2, 5},
       false},
      {"rent_seeking",
       "Tullock rent seeking: v x/(x+y) - x",
       {{"v", "100"}},
       GridSpec{0, 50, 51},
       true},
      {"cournot_general",
       "Cournot duopoly, polynomial demand: x p(x + y) - c(x)",
       {{"demand", "106,-1,-1/100"}, {"cost", "0,10"}},
       GridSpec{0, 50, 26},
       true},
  };
  return table;
}

GameMeta meta_for(const PresetInfo& info, const ParamReader& params,
                  const std::vector<Rational>& grid) {
  return GameMeta{info.name, params.all(), grid};
}

}  // namespace

GridSpec GridSpec::parse(std::string_view text) {
  const auto parts = split(text, ',');
  if (parts.size() != 3) {
    throw GeneratorError("grid must be \"low,high,points\": \"" +
                         std::string(text) + "\"");
  }
  GridSpec g{parse_rational("grid.low", parts[0]),
             parse_rational("grid.high", parts[1]), 0};
  const Rational points = parse_rational("grid.points", parts[2]);
  if (!points.is_integer() || !points.is_positive()) {
    throw GeneratorError("grid.points must be a positive integer");
  }
  g.points = static_cast<std::size_t>(std::stoull(points.str()));
  return g;
}

std::vector<Rational> GridSpec::values() const {
  if (points == 0) throw GeneratorError("grid needs at least one point");
  if (high < low) throw GeneratorError("grid low exceeds high");
  if (points == 1) {
    if (low != high) {
      throw GeneratorError("a one-point grid needs low == high");
    }
    return {low};
  }
  if (low == high) throw GeneratorError("grid points collapse (low == high)");
  const Rational step =
      (high - low) / Rational(static_cast<std::int64_t>(points - 1));
  std::vector<Rational> out;
  out.reserve(points);
  for (std::size_t i = 0; i < points; ++i) {
    out.push_back(low + step * Rational(static_cast<std::int64_t>(i)));
  }
  return out;
}

std::string GridSpec::str() const {
  return low.str() + "," + high.str() + "," + std::to_string(points);
}

Polynomial::Polynomial(std::vector<Rational> coefficients)
    : coefficients_(std::move(coefficients)) {
  while (coefficients_.size() > 1 && coefficients_.back().is_zero()) {
    coefficients_.pop_back();
  }
  if (coefficients_.empty()) coefficients_.push_back(Rational{});
}

Polynomial Polynomial::parse(std::string_view text) {
  if (text.empty()) throw GeneratorError("empty polynomial");
  std::vector<Rational> coefficients;
  for (const auto& part : split(text, ',')) {
    coefficients.push_back(parse_rational("polynomial coefficient", part));
  }
  return Polynomial(std::move(coefficients));
}

Rational Polynomial::operator()(const Rational& x) const {
  Rational acc;
  for (auto it = coefficients_.rbegin(); it != coefficients_.rend(); ++it) {
    acc = acc * x + *it;
  }
  return acc;
}

std::size_t Polynomial::degree() const { return coefficients_.size() - 1; }

std::string Polynomial::str() const {
  std::string out;
  for (std::size_t i = 0; i < coefficients_.size(); ++i) {
    if (i) out += ",";
    out += coefficients_[i].str();
  }
  return out;
}

const std::vector<PresetInfo>& presets() { return preset_table(); }

const PresetInfo& preset_info(std::string_view name) {
  for (const auto& p : preset_table()) {
    if (p.name == name) return p;
  }
  throw UnknownPresetError("unknown preset \"" + std::string(name) + "\"");
}

Generated generate(std::string_view preset, const Params& user_params,
                   const std::optional<GridSpec>& grid_spec) {
  const PresetInfo& info = preset_info(preset);
  ParamReader params(info, user_params);

  if (!info.default_grid) {
    if (grid_spec) {
      throw GeneratorError("preset " + info.name + " does not take a grid");
    }
    if (info.name == "rps") {
      return {matrix_game({"R", "P", "S"},
                          {{0, -1, 1}, {1, 0, -1}, {-1, 1, 0}}, info.name),
              std::nullopt};
    }
    if (info.name == "chicken") {
      return {matrix_game({"swerve", "straight"}, {{3, 1}, {4, 0}}, info.name),
              std::nullopt};
    }
    if (info.name == "pd") {
      return {matrix_game({"cooperate", "defect"}, {{3, 0}, {5, 1}},
                          info.name),
              std::nullopt};
    }
    if (info.name == "stag_hunt") {
      return {matrix_game({"stag", "hare"}, {{4, 0}, {3, 3}}, info.name),
              std::nullopt};
    }
    if (info.name == "coordination_outside") {
      return {matrix_game({"A", "B", "C"},
                          {{4, -1, 0}, {2, 3, 0}, {0, 0, 0}}, info.name),
              std::nullopt};
    }
    if (info.name == "ngrps_gop") {
      // pi(x, y) = max(Delta(x, y), 0): the winner of each pairing collects
      // the relative margin, so the relative payoff game is exactly
      // [[0,0,-1],[0,0,1],[1,-1,0]].
      return {matrix_game({"a", "b", "c"}, {{0, 0, 0}, {0, 0, 1}, {1, 0, 0}},
                          info.name),
              std::nullopt};
    }
    throw InternalError("fixed preset without a constructor: " + info.name);
  }

  const GridSpec spec = grid_spec.value_or(*info.default_grid);
  const std::vector<Rational> grid = spec.values();
  const Rational zero;
  const auto nonnegative_grid = [&] {
    require(grid.front() >= zero, "grid must be nonnegative");
  };

  if (info.name == "cournot_linear") {
    const Rational b = params.number("b");
    const Polynomial cost = params.polynomial("cost");
    require(b.is_positive(), "b > 0");
    nonnegative_grid();
    auto pi = [=](const Rational& x, const Rational& y) {
      return x * (b - x - y) - cost(x);
    };
    return {grid_game(grid, pi, meta_for(info, params, grid)),
            sum_aggregative(grid, [=](const Rational& x, const Rational& z) {
              return std::optional<Rational>(x * (b - z) - cost(x));
            })};
  }

  if (info.name == "bertrand_diff") {
    const Rational a = params.number("a");
    const Rational b = params.number("b");
    const Rational c = params.number("c");
    require(a.is_positive(), "a > 0");
    require(!b.is_negative() && b < Rational(1, 2), "b in [0, 1/2)");
    auto pi = [=](const Rational& x, const Rational& y) {
      return (x - c) * (a + b * y - x / Rational(2));
    };
    return {grid_game(grid, pi, meta_for(info, params, grid)), std::nullopt};
  }

  if (info.name == "public_goods") {
    const std::string& shape = params.text("shape");
    require(shape == "linear" || shape == "quadratic",
            "shape must be linear or quadratic");
    if (params.text("benefit").empty()) {
      params.set("benefit", shape == "linear" ? "0,3/2" : "0,4,-1/20");
    }
    const Polynomial g = params.polynomial("benefit");
    const Polynomial cost = params.polynomial("cost");
    require(shape == "linear" ? g.degree() <= 1 : g.degree() == 2,
            "benefit degree does not match shape " + shape);
    if (shape == "quadratic") {
      require(!g.coefficients()[2].is_positive(),
              "quadratic benefit must be concave");
    }
    nonnegative_grid();
    require_increasing(g, pair_sums(grid), true, "benefit g");
    require_increasing(cost, grid, false, "cost c");
    auto pi = [=](const Rational& x, const Rational& y) {
      return g(x + y) - cost(x);
    };
    return {grid_game(grid, pi, meta_for(info, params, grid)),
            sum_aggregative(grid, [=](const Rational& x, const Rational& z) {
              return std::optional<Rational>(g(z) - cost(x));
            })};
  }

  if (info.name == "common_pool") {
    const Rational e = params.number("e");
    const Rational c = params.number("c");
    const Rational a = params.number("a");
    const Rational b = params.number("b");
    require(e.is_positive() && c.is_positive() && a.is_positive() &&
                b.is_positive(),
            "e, c, a, b > 0");
    nonnegative_grid();
    require(grid.back() <= e, "investments must lie in [0, e]");
    // x/(x+y) (a(x+y) - b(x+y)^2) = x (a - b(x+y)) whenever x + y > 0, and
    // the closed form already equals c e at x = 0.
    auto pi = [=](const Rational& x, const Rational& y) {
      if ((x + y).is_zero()) return c * e;
      return c * (e - x) + x * (a - b * (x + y));
    };
    return {grid_game(grid, pi, meta_for(info, params, grid)),
            sum_aggregative(grid, [=](const Rational& x, const Rational& z) {
              return std::optional<Rational>(c * (e - x) + x * (a - b * z));
            })};
  }

  if (info.name == "min_effort") {
    const Polynomial cost = params.polynomial("cost");
    require_increasing(cost, grid, false, "cost c");
    auto pi = [=](const Rational& x, const Rational& y) {
      return min(x, y) - cost(x);
    };
    return {grid_game(grid, pi, meta_for(info, params, grid)), std::nullopt};
  }

  if (info.name == "synergistic") {
    const Rational c = params.number("c");
    require(c.is_positive(), "c > 0");
    nonnegative_grid();
    auto pi = [=](const Rational& x, const Rational& y) {
      return x * (c + y - x);
    };
    return {grid_game(grid, pi, meta_for(info, params, grid)), std::nullopt};
  }

  if (info.name == "arms_race") {
    const Polynomial h = params.polynomial("h");
    const Polynomial cost = params.polynomial("cost");
    const auto& coeff = h.coefficients();
    for (std::size_t k = 0; k < coeff.size(); k += 2) {
      require(coeff[k].is_zero(), "h must be odd: h(d) = -h(-d)");
    }
    std::set<Rational> diffs;
    for (const auto& x : grid) {
      for (const auto& y : grid) diffs.insert(x - y);
    }
    const std::vector<Rational> d(diffs.begin(), diffs.end());
    for (std::size_t i = 1; i + 1 < d.size(); ++i) {
      // Slopes must not increase along the sorted differences.
      const Rational left = (h(d[i]) - h(d[i - 1])) / (d[i] - d[i - 1]);
      const Rational right = (h(d[i + 1]) - h(d[i])) / (d[i + 1] - d[i]);
      require(right <= left, "h must be concave on the action differences");
    }
    auto pi = [=](const Rational& x, const Rational& y) {
      return h(x - y) - cost(x);
    };
    return {grid_game(grid, pi, meta_for(info, params, grid)), std::nullopt};
  }

  if (info.name == "diamond_search") {
    const Rational alpha = params.number("alpha");
    const Polynomial cost = params.polynomial("cost");
    require(alpha.is_positive(), "alpha > 0");
    nonnegative_grid();
    require_increasing(cost, grid, false, "cost c");
    auto pi = [=](const Rational& x, const Rational& y) {
      return alpha * x * y - cost(x);
    };
    return {grid_game(grid, pi, meta_for(info, params, grid)), std::nullopt};
  }

  if (info.name == "nash_demand") {
    const Rational s = params.number("s");
    require(s.is_positive(), "s > 0");
    nonnegative_grid();
    auto pi = [=](const Rational& x, const Rational& y) {
      return x + y <= s ? x : Rational{};
    };
    return {grid_game(grid, pi, meta_for(info, params, grid)), std::nullopt};
  }

  if (info.name == "ratio_game") {
    require(grid.front() >= Rational(1) && grid.back() <= Rational(2),
            "ratio_game grid must lie in [1, 2]");
    auto pi = [](const Rational& x, const Rational& y) { return x / y; };
    return {grid_game(grid, pi, meta_for(info, params, grid)), std::nullopt};
  }

  if (info.name == "rent_seeking") {
    const Rational v = params.number("v");
    require(v.is_positive(), "v > 0");
    nonnegative_grid();
    auto pi = [=](const Rational& x, const Rational& y) {
      if ((x + y).is_zero()) return Rational{};
      return v * x / (x + y) - x;
    };
    return {grid_game(grid, pi, meta_for(info, params, grid)),
            sum_aggregative(grid, [=](const Rational& x, const Rational& z)
                                      -> std::optional<Rational> {
              if (z.is_zero()) {
                if (x.is_zero()) return Rational{};
                return std::nullopt;
              }
              return v * x / z - x;
            })};
  }

  if (info.name == "cournot_general") {
    const Polynomial demand = params.polynomial("demand");
    const Polynomial cost = params.polynomial("cost");
    nonnegative_grid();
    require_increasing(cost, grid, false, "cost c");
    const auto sums = pair_sums(grid);
    for (std::size_t i = 1; i < sums.size(); ++i) {
      require(demand(sums[i]) < demand(sums[i - 1]),
              "inverse demand must be strictly decreasing on the aggregates");
    }
    auto pi = [=](const Rational& x, const Rational& y) {
      return x * demand(x + y) - cost(x);
    };
    return {grid_game(grid, pi, meta_for(info, params, grid)),
            sum_aggregative(grid, [=](const Rational& x, const Rational& z) {
              return std::optional<Rational>(x * demand(z) - cost(x));
            })};
  }

  throw InternalError("grid preset without a constructor: " + info.name);
}

SymmetricGame random_game(std::uint64_t seed, std::size_t actions,
                          std::int64_t value_range) {
  if (actions == 0) throw GeneratorError("random_game needs >= 1 action");
  if (value_range < 1) throw GeneratorError("random_game needs value_range >= 1");
  std::mt19937_64 rng(seed);
  std::uniform_int_distribution<std::int64_t> dist(-value_range, value_range);
  std::vector<std::string> labels;
  for (std::size_t i = 0; i < actions; ++i) labels.push_back("a" + std::to_string(i));
  PayoffMatrix m(actions);
  for (std::size_t i = 0; i < actions; ++i) {
    for (std::size_t j = 0; j < actions; ++j) m(i, j) = dist(rng);
  }
  GameMeta meta{"random",
                {{"seed", std::to_string(seed)},
                 {"actions", std::to_string(actions)},
                 {"value_range", std::to_string(value_range)}},
                {}};
  return SymmetricGame(std::move(labels), std::move(m), std::move(meta));
}

}  // namespace imitation
