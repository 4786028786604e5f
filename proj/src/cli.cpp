#include "imitation/cli.hpp"

#include <CLI11.hpp>

#include <algorithm>
#include <cstdlib>
#include <fstream>
#include <iomanip>
#include <map>
#include <optional>
#include <sstream>

#include "imitation/analysis.hpp"
#include "imitation/arena.hpp"
#include "imitation/classifiers.hpp"
#include "imitation/game_json.hpp"
#include "imitation/generators.hpp"
#include "imitation/simulator.hpp"

namespace imitation {
namespace {

class UsageError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

constexpr int kDefaultPort = 8080;

// ---------------------------------------------------------------------------
// Config file: key = value lines (TOML subset), read with CLI11's parser.
// Recognised keys: host, port, precision, hints, snapshot_dir,
// grid.<preset> = "low,high,points".

struct Config {
  std::map<std::string, std::string> values;

  std::optional<std::string> get(const std::string& key) const {
    const auto it = values.find(key);
    if (it == values.end()) return std::nullopt;
    return it->second;
  }
};

Config load_config(const std::string& path) {
  Config config;
  if (path.empty()) return config;
  std::ifstream in(path);
  if (!in) throw UsageError("cannot read config file '" + path + "'");
  CLI::ConfigTOML parser;
  for (const auto& item : parser.from_config(in)) {
    if (item.name == "++" || item.name == "--") continue;  // section markers
    std::string joined;
    for (const auto& v : item.inputs) {
      if (!joined.empty()) joined += ',';
      joined += v;
    }
    config.values[item.fullname()] = joined;
  }
  return config;
}

// ---------------------------------------------------------------------------
// Rendering

struct Render {
  int precision = 6;

  std::string num(const Rational& r) const {
    return r.is_integer() ? r.str() : r.str() + " (" + r.decimal(precision) + ")";
  }
};

std::string labels(const RelativePayoffGame& rel,
                   const std::vector<ActionIndex>& seq,
                   const std::string& sep = ", ") {
  std::string out;
  for (ActionIndex a : seq) {
    if (!out.empty()) out += sep;
    out += rel.label(a);
  }
  return out;
}

std::string set_text(const RelativePayoffGame& rel,
                     const std::vector<ActionIndex>& seq) {
  return "{" + labels(rel, seq) + "}";
}

Json labels_json(const RelativePayoffGame& rel,
                 const std::vector<ActionIndex>& seq) {
  Json out = Json::array();
  for (ActionIndex a : seq) out.push_back(rel.label(a));
  return out;
}

Json rationals_json(const std::vector<Rational>& values) {
  Json out = Json::array();
  for (const auto& v : values) out.push_back(v.str());
  return out;
}

/// Left-aligned text table.
class Table {
 public:
  explicit Table(std::vector<std::string> header) {
    rows_.push_back(std::move(header));
  }
  void add(std::vector<std::string> row) { rows_.push_back(std::move(row)); }
  void print(std::ostream& out) const {
    std::vector<std::size_t> width;
    for (const auto& row : rows_) {
      width.resize(std::max(width.size(), row.size()));
      for (std::size_t c = 0; c < row.size(); ++c) {
        width[c] = std::max(width[c], row[c].size());
      }
    }
    for (const auto& row : rows_) {
      std::string line;
      for (std::size_t c = 0; c < row.size(); ++c) {
        line += row[c];
        if (c + 1 < row.size()) line += std::string(width[c] - row[c].size() + 2, ' ');
      }
      out << line << '\n';
    }
  }

 private:
  std::vector<std::vector<std::string>> rows_;
};

// ---------------------------------------------------------------------------
// Game input shared by analyze / classify / simulate / exploit / generate

struct GameInput {
  std::string file;
  std::string preset;
  std::vector<std::string> params;
  std::string grid;
};

void add_game_input(CLI::App* sub, GameInput& in, bool allow_file = true) {
  if (allow_file) sub->add_option("game", in.file, "Game JSON file ('-' for stdin)");
  sub->add_option("--preset", in.preset, "Generator preset name");
  sub->add_option("--param", in.params, "Preset parameter key=value (repeatable)");
  sub->add_option("--grid", in.grid, "Action grid low,high,points");
}

struct LoadedGame {
  SymmetricGame game;
  std::optional<AggregativeGame> aggregative;
  std::string source;
};

LoadedGame load_game(const GameInput& in, const Config& config) {
  if (!in.file.empty() == !in.preset.empty()) {
    throw UsageError("give exactly one of a game file or --preset");
  }
  if (!in.file.empty()) {
    if (!in.params.empty() || !in.grid.empty()) {
      throw UsageError("--param and --grid only apply to --preset");
    }
    std::stringstream buffer;
    if (in.file == "-") {
      buffer << std::cin.rdbuf();
    } else {
      std::ifstream f(in.file);
      if (!f) throw UsageError("cannot read game file '" + in.file + "'");
      buffer << f.rdbuf();
    }
    return {parse_game(buffer.str()), std::nullopt, in.file};
  }

  Params params;
  for (const auto& kv : in.params) {
    const auto eq = kv.find('=');
    if (eq == std::string::npos || eq == 0) {
      throw UsageError("--param expects key=value, got '" + kv + "'");
    }
    params[kv.substr(0, eq)] = kv.substr(eq + 1);
  }
  std::optional<GridSpec> grid;
  if (!in.grid.empty()) {
    grid = GridSpec::parse(in.grid);
  } else if (auto g = config.get("grid." + in.preset)) {
    grid = GridSpec::parse(*g);
  }
  Generated generated = generate(in.preset, params, grid);
  return {std::move(generated.game), std::move(generated.aggregative),
          in.preset};
}

ActionIndex require_action(const RelativePayoffGame& rel, const std::string& label,
                           const std::string& what) {
  const auto idx = rel.index_of(label);
  if (!idx) throw UsageError(what + ": unknown action '" + label + "'");
  return *idx;
}

// ---------------------------------------------------------------------------
// analyze / exploit

Json report_json(const RelativePayoffGame& rel, const ExploitReport& r) {
  Json j;
  j["start"] = rel.label(r.start);
  j["unbounded"] = r.unbounded();
  j["value"] = r.value ? Json(r.value->str()) : Json();
  if (const auto* path = r.path()) {
    j["path"] = labels_json(rel, path->moves);
    j["gains"] = rationals_json(path->gains);
  } else {
    const auto* pump = r.pump();
    j["approach"] = labels_json(rel, pump->approach);
    j["cycle"] = labels_json(rel, pump->cycle);
    j["lap_gain"] = pump->lap_gain.str();
  }
  return j;
}

std::string witness_text(const RelativePayoffGame& rel, const ExploitReport& r,
                         const Render& render) {
  if (const auto* path = r.path()) {
    if (path->moves.empty()) return "(no gain available)";
    std::string out;
    for (std::size_t i = 0; i < path->moves.size(); ++i) {
      if (i) out += ", ";
      out += rel.label(path->moves[i]) + " +" + render.num(path->gains[i]);
    }
    return out;
  }
  const auto* pump = r.pump();
  std::string out;
  if (!pump->approach.empty()) out = labels(rel, pump->approach) + " then ";
  return out + "repeat [" + labels(rel, pump->cycle) + "] +" +
         render.num(pump->lap_gain) + " per lap";
}

void print_cycle(std::ostream& out, const RelativePayoffGame& rel,
                 const std::vector<ActionIndex>& cycle) {
  out << "cycle=" << labels(rel, cycle, "->") << "->" << rel.label(cycle.front())
      << '\n';
}

Json verdict_json(const RelativePayoffGame& rel, const Verdict& v) {
  Json j;
  j["schema"] = "imitation.analyze/1";
  j["actions"] = rel.actions();
  j["kind"] = to_string(v.kind);
  j["delta_hat"] = v.delta_hat.str();
  j["bound"] = v.bound ? Json(v.bound->str()) : Json();
  j["fess"] = labels_json(rel, v.fess);
  j["grps_core"] = labels_json(rel, v.grps_core);
  j["imitation_cycle"] =
      v.imitation_cycle ? labels_json(rel, *v.imitation_cycle) : Json();
  Json reports = Json::array();
  for (const auto& r : v.reports) reports.push_back(report_json(rel, r));
  j["reports"] = std::move(reports);
  return j;
}

int cmd_analyze(const LoadedGame& loaded, bool json, bool witness,
                const Render& render, std::ostream& out) {
  const RelativePayoffGame rel = relative_payoff_game(loaded.game);
  const Verdict v = verdict(rel);
  if (json) {
    out << verdict_json(rel, v).dump() << '\n';
    return kExitOk;
  }
  out << "game: " << loaded.source << " (" << rel.size() << " actions)\n";
  out << "kind=" << to_string(v.kind) << '\n';
  out << "M=" << (v.bound ? render.num(*v.bound) : "unbounded") << '\n';
  out << "delta_hat=" << render.num(v.delta_hat) << '\n';
  out << "fESS=" << set_text(rel, v.fess) << '\n';
  out << "GRPS core=" << set_text(rel, v.grps_core) << '\n';
  if (v.imitation_cycle) print_cycle(out, rel, *v.imitation_cycle);
  Table table(witness ? std::vector<std::string>{"start", "value", "witness"}
                      : std::vector<std::string>{"start", "value"});
  for (const auto& r : v.reports) {
    std::vector<std::string> row{rel.label(r.start),
                                 r.value ? render.num(*r.value) : "unbounded"};
    if (witness) row.push_back(witness_text(rel, r, render));
    table.add(std::move(row));
  }
  table.print(out);
  return kExitOk;
}

int cmd_exploit(const LoadedGame& loaded, const std::string& start, bool json,
                const Render& render, std::ostream& out) {
  const RelativePayoffGame rel = relative_payoff_game(loaded.game);
  std::vector<ExploitReport> reports;
  if (start.empty()) {
    reports = exploit_all(rel);
  } else {
    reports.push_back(exploitation(rel, require_action(rel, start, "--start")));
  }
  if (json) {
    Json j;
    j["schema"] = "imitation.exploit/1";
    Json list = Json::array();
    for (const auto& r : reports) list.push_back(report_json(rel, r));
    j["reports"] = std::move(list);
    out << j.dump() << '\n';
    return kExitOk;
  }
  Table table({"start", "value", "witness"});
  for (const auto& r : reports) {
    table.add({rel.label(r.start), r.value ? render.num(*r.value) : "unbounded",
               witness_text(rel, r, render)});
  }
  table.print(out);
  return kExitOk;
}

// ---------------------------------------------------------------------------
// classify

struct ClassifyFlags {
  std::string order;
  bool search_orders = false;
  bool aggregative = false;
};

Json flag_json(const AggregativeFlag& flag, const AggregativeGame& agg) {
  Json j;
  j["holds"] = flag.holds;
  if (flag.counterexample) {
    Json actions = Json::array();
    for (ActionIndex a : flag.counterexample->actions) actions.push_back(agg.actions()[a]);
    Json aggregates = Json::array();
    for (std::size_t z : flag.counterexample->aggregates) {
      aggregates.push_back(agg.aggregates()[z].str());
    }
    j["counterexample"] = {{"actions", actions}, {"aggregates", aggregates}};
  } else {
    j["counterexample"] = Json();
  }
  return j;
}

std::string flag_text(const AggregativeFlag& flag, const AggregativeGame& agg) {
  if (flag.holds) return "yes";
  std::string out = "no (";
  const auto& w = *flag.counterexample;
  for (std::size_t i = 0; i < w.actions.size(); ++i) {
    out += (i ? ", x=" : "x=") + agg.actions()[w.actions[i]];
  }
  for (std::size_t z : w.aggregates) out += ", z=" + agg.aggregates()[z].str();
  return out + ")";
}

int cmd_classify(const LoadedGame& loaded, const ClassifyFlags& flags, bool json,
                 const Render& render, std::ostream& out) {
  const RelativePayoffGame rel = relative_payoff_game(loaded.game);
  if (flags.aggregative && !loaded.aggregative) {
    throw UsageError("--aggregative needs an aggregative preset (" +
                     loaded.source + " has no aggregator)");
  }
  if (flags.search_orders && rel.size() > kMaxOrderSearchActions) {
    throw UsageError("--search-orders supports at most " +
                     std::to_string(kMaxOrderSearchActions) + " actions");
  }
  std::optional<std::vector<ActionIndex>> order;
  if (!flags.order.empty()) {
    std::vector<ActionIndex> o;
    std::stringstream ss(flags.order);
    for (std::string l; std::getline(ss, l, ',');) {
      o.push_back(require_action(rel, l, "--order"));
    }
    std::vector<ActionIndex> sorted = o;
    std::sort(sorted.begin(), sorted.end());
    if (sorted.size() != rel.size() ||
        std::adjacent_find(sorted.begin(), sorted.end()) != sorted.end()) {
      throw UsageError("--order must list every action exactly once");
    }
    order = std::move(o);
  }

  const SeparabilityResult sep = check_separable(rel);
  const DifferencesReport diff = check_differences(rel);
  const QuasiconcavityReport qc = check_quasiconcave(rel, flags.search_orders, order);
  const PotentialCertificate pot = improvement_analysis(rel);
  const Verdict v = verdict(rel);
  std::optional<AggregativeReport> agg;
  if (flags.aggregative) agg = check_aggregative(*loaded.aggregative, loaded.game);

  const auto* cert = std::get_if<SeparabilityCertificate>(&sep);
  const auto* viol = std::get_if<SeparabilityViolation>(&sep);
  const auto* potential = std::get_if<PotentialFunction>(&pot);
  const auto* cycle = std::get_if<ImprovementCycle>(&pot);

  if (json) {
    Json j;
    j["schema"] = "imitation.classify/1";
    j["actions"] = rel.actions();
    Json s;
    s["holds"] = cert != nullptr;
    if (cert) {
      s["f"] = rationals_json(cert->f);
      s["reference_action"] = rel.label(cert->reference_action);
    } else {
      s["violation"] = {{"far", rel.label(viol->far)},
                        {"mid", rel.label(viol->mid)},
                        {"near", rel.label(viol->near)},
                        {"direct", viol->direct.str()},
                        {"via_mid", viol->via_mid.str()}};
    }
    j["separable"] = std::move(s);
    auto quad = [&](const std::optional<Quadruple>& q) -> Json {
      if (!q) return Json();
      return {rel.label(q->x_hi), rel.label(q->x_lo), rel.label(q->y_hi),
              rel.label(q->y_lo)};
    };
    j["differences"] = {{"increasing", diff.increasing},
                        {"decreasing", diff.decreasing},
                        {"valuation", diff.valuation()},
                        {"increasing_violation", quad(diff.increasing_violation)},
                        {"decreasing_violation", quad(diff.decreasing_violation)}};
    j["quasiconcave"] = {
        {"holds", qc.holds},
        {"order", labels_json(rel, qc.order_used)},
        {"violating_column",
         qc.violating_column ? Json(rel.label(*qc.violating_column)) : Json()}};
    Json p;
    p["holds"] = potential != nullptr;
    if (potential) {
      Json levels = Json::array();
      for (ActionIndex x = 0; x < rel.size(); ++x) {
        Json row = Json::array();
        for (ActionIndex y = 0; y < rel.size(); ++y) row.push_back(potential->level(x, y));
        levels.push_back(std::move(row));
      }
      p["potential"] = std::move(levels);
    } else {
      Json steps = Json::array();
      for (const auto& [x, y] : cycle->profiles) {
        steps.push_back({rel.label(x), rel.label(y)});
      }
      p["cycle"] = std::move(steps);
    }
    j["generalized_ordinal_potential"] = std::move(p);
    if (agg) {
      const auto& a = *loaded.aggregative;
      j["aggregative"] = {
          {"quasisubmodular", flag_json(agg->quasisubmodular, a)},
          {"quasisupermodular", flag_json(agg->quasisupermodular, a)},
          {"submodular", flag_json(agg->submodular, a)},
          {"supermodular", flag_json(agg->supermodular, a)},
          {"quasiconcave_in_x", flag_json(agg->quasiconcave_in_x, a)},
          {"strictly_quasiconvex_in_x", flag_json(agg->strictly_quasiconvex_in_x, a)},
          {"fess", labels_json(rel, agg->fess)},
          {"fess_exists", agg->fess_exists},
          {"corner_fess_only", flag_json(agg->corner_fess_only, a)}};
    }
    j["verdict"] = {{"kind", to_string(v.kind)},
                    {"bound", v.bound ? Json(v.bound->str()) : Json()},
                    {"delta_hat", v.delta_hat.str()}};
    out << j.dump() << '\n';
    return kExitOk;
  }

  out << "game: " << loaded.source << " (" << rel.size() << " actions)\n";
  Table table({"classifier", "result", "implies"});
  if (cert) {
    std::string f;
    for (ActionIndex x = 0; x < rel.size() && x < 6; ++x) {
      f += (x ? ", " : "") + rel.label(x) + ": " + render.num(cert->f[x]);
    }
    if (rel.size() > 6) f += ", ...";
    table.add({"separable", "yes (f = {" + f + "})", "essentially unbeatable"});
  } else {
    table.add({"separable",
               "no (Delta(" + rel.label(viol->far) + "," + rel.label(viol->near) +
                   ") = " + render.num(viol->direct) + " but via " +
                   rel.label(viol->mid) + " = " + render.num(viol->via_mid) + ")",
               "-"});
  }
  std::string diff_text = diff.valuation() ? "valuation (increasing and decreasing)"
                                           : "neither increasing nor decreasing";
  table.add({"differences", diff_text,
             diff.valuation() ? "essentially unbeatable" : "-"});
  table.add({"quasiconcave",
             qc.holds ? "yes (order " + labels(rel, qc.order_used, "<") + ")"
                      : "no" + (qc.violating_column
                                    ? " (column " + rel.label(*qc.violating_column) +
                                          " not single-peaked)"
                                    : std::string()),
             qc.holds ? "no money pump" : "-"});
  if (potential) {
    table.add({"generalized ordinal potential", "yes (longest-path levels)",
               "no money pump"});
  } else {
    std::string steps;
    for (const auto& [x, y] : cycle->profiles) {
      if (!steps.empty()) steps += " ";
      steps += "(" + rel.label(x) + "," + rel.label(y) + ")";
    }
    table.add({"generalized ordinal potential", "no (cycle " + steps + ")", "-"});
  }
  if (agg) {
    const auto& a = *loaded.aggregative;
    table.add({"quasisubmodular", flag_text(agg->quasisubmodular, a), ""});
    table.add({"quasisupermodular", flag_text(agg->quasisupermodular, a), ""});
    table.add({"submodular", flag_text(agg->submodular, a), ""});
    table.add({"supermodular", flag_text(agg->supermodular, a), ""});
    table.add({"quasiconcave in x", flag_text(agg->quasiconcave_in_x, a), ""});
    table.add({"strictly quasiconvex in x",
               flag_text(agg->strictly_quasiconvex_in_x, a), ""});
    table.add({"aggregative fESS",
               agg->fess_exists ? set_text(rel, agg->fess) : "none", ""});
    const bool sub_route = agg->quasisubmodular.holds &&
                           agg->quasiconcave_in_x.holds && agg->fess_exists;
    const bool super_route = agg->quasisupermodular.holds &&
                             agg->strictly_quasiconvex_in_x.holds &&
                             agg->fess_exists;
    table.add({"aggregative sufficient condition",
               sub_route || super_route ? "yes" : "no",
               sub_route || super_route ? "no money pump" : "-"});
  }
  table.add({"verdict", to_string(v.kind),
             v.bound ? "M = " + render.num(*v.bound) + ", delta_hat = " +
                           render.num(v.delta_hat)
                     : "unbounded"});
  table.print(out);
  return kExitOk;
}

// ---------------------------------------------------------------------------
// simulate

struct SimulateFlags {
  std::string policy = "optimal";
  std::string x0;
  std::string y0;
  std::size_t horizon = 10;
  bool jsonl = false;
  std::string demo;
  std::size_t laps = 2;
};

int cmd_demo(const SimulateFlags& flags, bool json, const Render& render,
             std::ostream& out) {
  if (flags.demo != "cournot3") {
    throw UsageError("unknown demo '" + flags.demo + "' (available: cournot3)");
  }
  if (flags.laps == 0) throw UsageError("--laps must be >= 1");
  const CournotDemoReport report = run_three_player_cournot_demo(flags.laps);
  if (json) {
    Json j;
    j["schema"] = "imitation.demo.cournot3/1";
    j["laps"] = report.laps;
    Json rounds = Json::array();
    for (const auto& r : report.rounds) {
      auto triple = [](const std::array<Rational, 3>& v) {
        return Json{v[0].str(), v[1].str(), v[2].str()};
      };
      rounds.push_back({{"t", r.t},
                        {"quantity", triple(r.quantity)},
                        {"price", r.price.str()},
                        {"profit", triple(r.profit)},
                        {"cumulative", triple(r.cumulative)}});
    }
    j["rounds"] = std::move(rounds);
    j["lap_shortfall"] = rationals_json(report.lap_shortfall);
    j["cumulative_shortfall"] = rationals_json(report.cumulative_shortfall);
    Json checks = Json::array();
    for (const auto& c : report.checks) {
      checks.push_back({{"name", c.name}, {"passed", c.passed}, {"detail", c.detail}});
    }
    j["checks"] = std::move(checks);
    j["passed"] = report.passed();
    out << j.dump() << '\n';
  } else {
    out << "three-player Cournot: p(Q) = 100 - Q, c(q) = 10q; "
           "players (imitator, maximizer 1, maximizer 2)\n";
    Table table({"t", "quantities", "price", "profits", "cumulative"});
    auto triple = [&](const std::array<Rational, 3>& v) {
      return "(" + render.num(v[0]) + ", " + render.num(v[1]) + ", " +
             render.num(v[2]) + ")";
    };
    for (const auto& r : report.rounds) {
      table.add({std::to_string(r.t), triple(r.quantity), render.num(r.price),
                 triple(r.profit), triple(r.cumulative)});
    }
    table.print(out);
    for (std::size_t lap = 0; lap < report.laps; ++lap) {
      out << "lap " << lap + 1 << ": shortfall +" << render.num(report.lap_shortfall[lap])
          << ", cumulative " << render.num(report.cumulative_shortfall[lap]) << '\n';
    }
    for (const auto& c : report.checks) {
      out << (c.passed ? "PASS " : "FAIL ") << c.name << ": " << c.detail << '\n';
    }
  }
  return report.passed() ? kExitOk : kExitCounterexample;
}

int cmd_simulate(const LoadedGame& loaded, const SimulateFlags& flags,
                 std::uint64_t seed, bool json, const Render& render,
                 std::ostream& out) {
  const RelativePayoffGame rel = relative_payoff_game(loaded.game);
  if (flags.y0.empty()) throw UsageError("simulate needs --y0");
  const ActionIndex y0 = require_action(rel, flags.y0, "--y0");
  std::optional<ActionIndex> x0;
  if (!flags.x0.empty()) x0 = require_action(rel, flags.x0, "--x0");
  const std::string spec =
      flags.policy == "random" ? "random:" + std::to_string(seed) : flags.policy;
  Policy policy;
  try {
    policy = Policy::parse(spec, rel);
  } catch (const std::invalid_argument& e) {
    throw UsageError(e.what());
  }
  // --horizon T reports D(T): rounds t = 0..T.
  const Trajectory tr = run_match(rel, policy, x0, y0, flags.horizon + 1);

  if (flags.jsonl) {
    write_jsonl(out, rel, tr);
    return kExitOk;
  }
  if (json) {
    Json j;
    j["schema"] = "imitation.simulate/1";
    j["policy"] = tr.policy_name;
    j["x0"] = rel.label(tr.x0);
    j["y0"] = rel.label(tr.y0);
    j["horizon"] = flags.horizon;
    j["terminated"] = to_string(tr.terminated);
    Json rounds = Json::array();
    for (const auto& r : tr.rounds) rounds.push_back(round_json(rel, r));
    j["rounds"] = std::move(rounds);
    j["D"] = tr.total().str();
    out << j.dump() << '\n';
    return kExitOk;
  }
  out << "policy " << tr.policy_name << ", y0 = " << rel.label(y0) << '\n';
  Table table({"t", "x", "y", "pi(x,y)", "pi(y,x)", "Delta", "D(t)", "imitator"});
  for (std::size_t i = 0; i < tr.rounds.size(); ++i) {
    const Round& r = tr.rounds[i];
    const ActionIndex next = imitator_step(rel, r.x, r.y);
    table.add({std::to_string(r.t), rel.label(r.x), rel.label(r.y),
               render.num(r.payoff_x), render.num(r.payoff_y), render.num(r.delta),
               render.num(r.total),
               next == r.y ? "stays" : "copies " + rel.label(next)});
  }
  table.print(out);
  const std::size_t last = tr.rounds.back().t;
  out << "terminated: " << to_string(tr.terminated) << " after round " << last
      << '\n';
  out << "D(" << flags.horizon << ")=" << render.num(tr.total()) << '\n';
  return kExitOk;
}

// ---------------------------------------------------------------------------
// generate / verify / serve

int cmd_generate(const LoadedGame& loaded, const std::string& output,
                 std::ostream& out) {
  const std::string text = game_to_json(loaded.game).dump(2) + "\n";
  if (output.empty() || output == "-") {
    out << text;
  } else {
    std::ofstream f(output);
    if (!f) throw UsageError("cannot write '" + output + "'");
    f << text;
  }
  return kExitOk;
}

int cmd_list_presets(bool json, std::ostream& out) {
  if (json) {
    out << SessionStore::list_presets().dump() << '\n';
    return kExitOk;
  }
  Table table({"preset", "grid", "description"});
  for (const auto& info : presets()) {
    table.add({info.name, info.default_grid ? info.default_grid->str() : "fixed",
               info.description});
  }
  table.print(out);
  return kExitOk;
}

struct VerifyFlags {
  std::size_t trials = 1000;
  std::size_t max_actions = 5;
  std::int64_t value_range = 5;
  bool serial = false;
};

int cmd_verify(const VerifyFlags& flags, std::uint64_t seed, bool json,
               std::ostream& out) {
  CrosscheckOptions options;
  options.seed = seed;
  options.trials = flags.trials;
  options.max_actions = flags.max_actions;
  options.value_range = flags.value_range;
  try {
    validate(options);
  } catch (const std::invalid_argument& e) {
    throw UsageError(e.what());
  }
  const CrosscheckReport r = flags.serial ? crosscheck_theorem1_serial(options)
                                          : crosscheck_theorem1(options);
  if (json) {
    Json j;
    j["schema"] = "imitation.verify/1";
    j["seed"] = options.seed;
    j["trials"] = r.trials;
    j["max_actions"] = options.max_actions;
    j["value_range"] = options.value_range;
    j["pumps"] = r.pumps;
    j["bounded_games"] = r.bounded_games;
    j["essentially_unbeatable"] = r.essentially_unbeatable;
    j["bounded_starts_checked"] = r.bounded_starts_checked;
    j["mismatches"] = r.mismatches;
    Json failures = Json::array();
    for (const auto& f : r.failures) {
      failures.push_back({{"trial", f.trial},
                          {"reason", f.reason},
                          {"game", Json::parse(f.game_json)}});
    }
    j["failures"] = std::move(failures);
    j["passed"] = r.passed();
    out << j.dump() << '\n';
  } else {
    out << "trials=" << r.trials << " seed=" << options.seed
        << " max_actions=" << options.max_actions
        << " value_range=" << options.value_range << '\n';
    out << r.pumps << " pumps found, " << r.bounded_games << " bounded games ("
        << r.essentially_unbeatable << " essentially unbeatable)\n";
    out << "bounded starts checked against path enumeration: "
        << r.bounded_starts_checked << '\n';
    out << "mismatches=" << r.mismatches << '\n';
    for (const auto& f : r.failures) {
      out << "trial " << f.trial << ": " << f.reason << '\n'
          << "  game: " << f.game_json << '\n';
    }
  }
  return r.passed() ? kExitOk : kExitCounterexample;
}

struct ServeFlags {
  std::string host;
  int port = 0;
  bool no_hints = false;
  std::string snapshot_dir;
};

int parse_port(const std::string& text, const std::string& source) {
  try {
    std::size_t used = 0;
    const int port = std::stoi(text, &used);
    if (used == text.size() && port > 0 && port < 65536) return port;
  } catch (const std::exception&) {
  }
  throw UsageError(source + ": invalid port '" + text + "'");
}

int cmd_serve(const ServeFlags& flags, const Config& config, int precision,
              std::ostream& out, std::ostream& err) {
  // Precedence: --port, then IMITATION_ARENA_PORT, then config, then default.
  int port = kDefaultPort;
  if (auto p = config.get("port")) port = parse_port(*p, "config port");
  if (const char* env = std::getenv("IMITATION_ARENA_PORT"); env && *env) {
    port = parse_port(env, "IMITATION_ARENA_PORT");
  }
  if (flags.port != 0) port = flags.port;
  std::string host = flags.host;
  if (host.empty()) host = config.get("host").value_or("127.0.0.1");

  ArenaOptions options;
  options.precision = precision;
  options.hints = !flags.no_hints && config.get("hints").value_or("true") != "false";
  std::string dir = flags.snapshot_dir;
  if (dir.empty()) dir = config.get("snapshot_dir").value_or("");
  if (!dir.empty()) options.snapshot_dir = dir;

  SessionStore store(options);
  const std::size_t restored = store.restore_snapshots();
  out << "arena listening on http://" << host << ":" << port;
  if (restored) out << " (" << restored << " sessions restored)";
  out << std::endl;
  if (!serve(store, host, port)) {
    err << "error: cannot bind " << host << ":" << port << '\n';
    return kExitUsage;
  }
  return kExitOk;
}

}  // namespace

int run_cli(const std::vector<std::string>& args, std::ostream& out,
            std::ostream& err) {
  CLI::App app{"Exact analysis of the imitate-the-best heuristic in finite "
               "symmetric two-player games",
               "imitation"};
  app.fallthrough();
  app.require_subcommand(0, 1);

  bool json = false;
  int precision = 6;
  std::uint64_t seed = 42;
  std::string config_path;
  bool list_presets_flag = false;
  app.add_flag("--json", json, "Machine-readable JSON output");
  app.add_option("--precision", precision, "Decimal places in tables")
      ->check(CLI::Range(0, 60));
  app.add_option("--seed", seed, "Seed for verify and random policies");
  app.add_option("--config", config_path, "key=value config file");
  app.add_flag("--list-presets", list_presets_flag, "List generator presets");

  GameInput analyze_in, classify_in, simulate_in, exploit_in, generate_in;
  bool witness = false;
  auto* analyze = app.add_subcommand("analyze", "Verdict, bound M, fESS, GRPS core");
  add_game_input(analyze, analyze_in);
  analyze->add_flag("--witness", witness, "Print witness paths and cycles");

  ClassifyFlags classify_flags;
  auto* classify = app.add_subcommand("classify", "Sufficient-condition classifiers");
  add_game_input(classify, classify_in);
  classify->add_option("--order", classify_flags.order,
                       "Action order for quasiconcavity, e.g. a,b,c");
  classify->add_flag("--search-orders", classify_flags.search_orders,
                     "Search all orders (at most 10 actions)");
  classify->add_flag("--aggregative", classify_flags.aggregative,
                     "Run the aggregative-game checks");

  SimulateFlags sim;
  auto* simulate = app.add_subcommand("simulate", "Play against the imitator");
  add_game_input(simulate, simulate_in);
  simulate->add_option("--policy", sim.policy,
                       "optimal | myopic | imitator | constant:A | random[:SEED] | "
                       "scripted:A,B,.. | external:A,B,..");
  simulate->add_option("--x0", sim.x0, "Override the opponent's round-0 action");
  simulate->add_option("--y0", sim.y0, "Imitator's initial action");
  simulate->add_option("--horizon", sim.horizon, "Report D(T) after rounds 0..T");
  simulate->add_flag("--jsonl", sim.jsonl, "Export rounds as JSON lines");
  simulate->add_option("--demo", sim.demo, "Scripted scenario (cournot3)");
  simulate->add_option("--laps", sim.laps, "Laps of the demo cycle");

  std::string start;
  auto* exploit = app.add_subcommand("exploit", "Optimal exploitation per start");
  add_game_input(exploit, exploit_in);
  exploit->add_option("--start", start, "Single imitator start action");

  std::string output;
  bool generate_list = false;
  auto* generate_cmd = app.add_subcommand("generate", "Emit a preset as game JSON");
  add_game_input(generate_cmd, generate_in, /*allow_file=*/false);
  generate_cmd->add_option("-o,--output", output, "Output file (default stdout)");
  generate_cmd->add_flag("--list-presets", generate_list, "List presets");

  VerifyFlags verify_flags;
  auto* verify = app.add_subcommand("verify", "Random cross-check of the money-pump routes");
  verify->add_option("--trials", verify_flags.trials, "Number of random games");
  verify->add_option("--max-actions", verify_flags.max_actions, "Largest game size");
  verify->add_option("--value-range", verify_flags.value_range,
                     "Payoffs drawn from [-R, R]");
  verify->add_flag("--serial", verify_flags.serial, "Use the serial reference");

  ServeFlags serve_flags;
  auto* serve_cmd = app.add_subcommand("serve", "Run the arena HTTP service");
  serve_cmd->add_option("--host", serve_flags.host, "Bind address (default 127.0.0.1)");
  serve_cmd->add_option("--port", serve_flags.port, "Port (overrides env and config)")
      ->check(CLI::Range(1, 65535));
  serve_cmd->add_flag("--no-hints", serve_flags.no_hints, "Disable hints");
  serve_cmd->add_option("--snapshot-dir", serve_flags.snapshot_dir,
                        "Persist sessions as JSON here");

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::ParseError& e) {
    return app.exit(e, out, err) == 0 ? kExitOk : kExitUsage;
  }

  try {
    const Config config = load_config(config_path);
    if (app.get_option("--precision")->count() == 0) {
      if (auto p = config.get("precision")) precision = std::stoi(*p);
    }
    const Render render{precision};

    if (list_presets_flag || generate_list) return cmd_list_presets(json, out);
    if (analyze->parsed()) {
      return cmd_analyze(load_game(analyze_in, config), json, witness, render, out);
    }
    if (classify->parsed()) {
      return cmd_classify(load_game(classify_in, config), classify_flags, json,
                          render, out);
    }
    if (simulate->parsed()) {
      if (!sim.demo.empty()) return cmd_demo(sim, json, render, out);
      return cmd_simulate(load_game(simulate_in, config), sim, seed, json, render,
                          out);
    }
    if (exploit->parsed()) {
      return cmd_exploit(load_game(exploit_in, config), start, json, render, out);
    }
    if (generate_cmd->parsed()) {
      return cmd_generate(load_game(generate_in, config), output, out);
    }
    if (verify->parsed()) return cmd_verify(verify_flags, seed, json, out);
    if (serve_cmd->parsed()) {
      return cmd_serve(serve_flags, config, precision, out, err);
    }
    err << app.help();
    return kExitUsage;
  } catch (const InternalError& e) {
    err << "internal error: " << e.what() << '\n';
    return kExitInternal;
  } catch (const std::exception& e) {
    // Usage, parse, generator and simulation errors all mean "bad input".
    err << "error: " << e.what() << '\n';
    return kExitUsage;
  }
}

}  // namespace imitation
