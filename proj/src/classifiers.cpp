#include "imitation/classifiers.hpp"

#include <algorithm>
#include <deque>
#include <numeric>
#include <stdexcept>
#include <string>

namespace imitation {

// ---------------------------------------------------------------------------
// Separability

bool verify_separable(const RelativePayoffGame& rel,
                      const SeparabilityCertificate& cert) {
  const std::size_t n = rel.size();
  if (cert.f.size() != n || cert.reference_action >= n) return false;
  if (!cert.f[cert.reference_action].is_zero()) return false;
  for (ActionIndex x = 0; x < n; ++x) {
    for (ActionIndex y = 0; y < n; ++y) {
      if (rel.delta(x, y) != cert.f[x] - cert.f[y]) return false;
    }
  }
  return true;
}

SeparabilityResult check_separable(const RelativePayoffGame& rel) {
  const std::size_t n = rel.size();
  const ActionIndex ref = 0;
  SeparabilityCertificate cert;
  cert.reference_action = ref;
  cert.f.reserve(n);
  for (ActionIndex x = 0; x < n; ++x) cert.f.push_back(rel.delta(x, ref));

  for (ActionIndex x = 0; x < n; ++x) {
    for (ActionIndex y = 0; y < n; ++y) {
      // f(x) - f(y) = Delta(x, ref) + Delta(ref, y).
      if (rel.delta(x, y) != cert.f[x] - cert.f[y]) {
        return SeparabilityViolation{x, ref, y, rel.delta(x, y),
                                     rel.delta(x, ref) + rel.delta(ref, y)};
      }
    }
  }
  if (!verify_separable(rel, cert)) {
    throw InternalError("separability certificate failed re-verification");
  }
  return cert;
}

std::optional<SeparabilityViolation> one_large_step_violation(
    const RelativePayoffGame& rel) {
  const std::size_t n = rel.size();
  for (ActionIndex far = 0; far < n; ++far) {
    for (ActionIndex mid = 0; mid < n; ++mid) {
      for (ActionIndex near = 0; near < n; ++near) {
        Rational via = rel.delta(far, mid) + rel.delta(mid, near);
        if (rel.delta(far, near) != via) {
          return SeparabilityViolation{far, mid, near, rel.delta(far, near),
                                       std::move(via)};
        }
      }
    }
  }
  return std::nullopt;
}

// ---------------------------------------------------------------------------
// Differences

DifferencesReport check_differences(const RelativePayoffGame& rel) {
  const std::size_t n = rel.size();
  DifferencesReport report;
  for (ActionIndex x_hi = 1; x_hi < n; ++x_hi) {
    for (ActionIndex x_lo = 0; x_lo < x_hi; ++x_lo) {
      for (ActionIndex y_hi = 1; y_hi < n; ++y_hi) {
        for (ActionIndex y_lo = 0; y_lo < y_hi; ++y_lo) {
          const Rational at_hi = rel.delta(x_hi, y_hi) - rel.delta(x_lo, y_hi);
          const Rational at_lo = rel.delta(x_hi, y_lo) - rel.delta(x_lo, y_lo);
          if (report.decreasing && at_lo < at_hi) {
            report.decreasing = false;
            report.decreasing_violation = Quadruple{x_hi, x_lo, y_hi, y_lo};
          }
          if (report.increasing && at_hi < at_lo) {
            report.increasing = false;
            report.increasing_violation = Quadruple{x_hi, x_lo, y_hi, y_lo};
          }
        }
      }
    }
  }
  if (report.increasing != report.decreasing) {
    throw InternalError(
        "increasing and decreasing differences disagree on an antisymmetric "
        "relative payoff matrix");
  }
  return report;
}

// ---------------------------------------------------------------------------
// Quasiconcavity

namespace {

// rank[y][x]: dense rank of Delta(x, y) within column y, so the permutation
// search compares small integers instead of rationals.
std::vector<std::vector<int>> column_ranks(const RelativePayoffGame& rel) {
  const std::size_t n = rel.size();
  std::vector<std::vector<int>> rank(n, std::vector<int>(n));
  for (ActionIndex y = 0; y < n; ++y) {
    std::vector<ActionIndex> idx(n);
    std::iota(idx.begin(), idx.end(), 0);
    std::sort(idx.begin(), idx.end(), [&](ActionIndex a, ActionIndex b) {
      return rel.delta(a, y) < rel.delta(b, y);
    });
    int r = 0;
    for (std::size_t k = 0; k < n; ++k) {
      if (k > 0 && rel.delta(idx[k - 1], y) < rel.delta(idx[k], y)) ++r;
      rank[y][idx[k]] = r;
    }
  }
  return rank;
}

bool column_single_peaked(const std::vector<int>& column,
                          const std::vector<ActionIndex>& order) {
  std::size_t k = 1;
  while (k < order.size() && column[order[k - 1]] <= column[order[k]]) ++k;
  while (k < order.size() && column[order[k - 1]] >= column[order[k]]) ++k;
  return k >= order.size();
}

std::optional<ActionIndex> first_bad_column(
    const std::vector<std::vector<int>>& rank,
    const std::vector<ActionIndex>& order) {
  for (ActionIndex y = 0; y < rank.size(); ++y) {
    if (!column_single_peaked(rank[y], order)) return y;
  }
  return std::nullopt;
}

}  // namespace

bool single_peaked_under(const RelativePayoffGame& rel,
                         const std::vector<ActionIndex>& order,
                         std::optional<ActionIndex>* violating_column) {
  std::vector<ActionIndex> sorted = order;
  std::sort(sorted.begin(), sorted.end());
  for (std::size_t i = 0; i < sorted.size(); ++i) {
    if (sorted[i] != i || sorted.size() != rel.size()) {
      throw std::invalid_argument("order must be a permutation of the actions");
    }
  }
  const auto bad = first_bad_column(column_ranks(rel), order);
  if (violating_column) *violating_column = bad;
  return !bad.has_value();
}

QuasiconcavityReport check_quasiconcave(
    const RelativePayoffGame& rel, bool search_orders,
    const std::optional<std::vector<ActionIndex>>& order) {
  const std::size_t n = rel.size();
  if (search_orders && n > kMaxOrderSearchActions) {
    throw std::invalid_argument("order search is limited to " +
                                std::to_string(kMaxOrderSearchActions) +
                                " actions");
  }
  std::vector<ActionIndex> first(n);
  std::iota(first.begin(), first.end(), 0);
  if (order) first = *order;

  QuasiconcavityReport report;
  std::optional<ActionIndex> bad;
  if (single_peaked_under(rel, first, &bad)) {
    report.holds = true;
    report.order_used = first;
    return report;
  }
  report.violating_column = bad;
  if (!search_orders) return report;

  const auto rank = column_ranks(rel);
  std::vector<ActionIndex> perm(n);
  std::iota(perm.begin(), perm.end(), 0);
  do {
    // Single-peakedness is invariant under reversal.
    if (n > 1 && perm.front() > perm.back()) continue;
    if (!first_bad_column(rank, perm)) {
      report.holds = true;
      report.order_used = perm;
      return report;
    }
  } while (std::next_permutation(perm.begin(), perm.end()));
  return report;
}

// ---------------------------------------------------------------------------
// Improvement digraph

namespace {

// Node id of profile (x, y): player-2 action major.
struct ProfileGraph {
  std::size_t n;
  std::vector<std::vector<std::size_t>> out;

  std::size_t id(ActionIndex x, ActionIndex y) const { return y * n + x; }
  Profile profile(std::size_t id) const { return {id % n, id / n}; }
};

ProfileGraph improvement_graph(const RelativePayoffGame& rel) {
  const std::size_t n = rel.size();
  ProfileGraph g{n, std::vector<std::vector<std::size_t>>(n * n)};
  for (ActionIndex y = 0; y < n; ++y) {
    for (ActionIndex x = 0; x < n; ++x) {
      auto& out = g.out[g.id(x, y)];
      for (ActionIndex y2 = 0; y2 < n; ++y2) {
        if (rel.delta(y, x) < rel.delta(y2, x)) out.push_back(g.id(x, y2));
      }
      for (ActionIndex x2 = 0; x2 < n; ++x2) {
        if (rel.delta(x, y) < rel.delta(x2, y)) out.push_back(g.id(x2, y));
      }
      std::sort(out.begin(), out.end());
    }
  }
  return g;
}

// Iterative Tarjan; returns the component id of every node.
std::vector<std::size_t> strongly_connected(const ProfileGraph& g,
                                            std::vector<std::size_t>* sizes) {
  const std::size_t v = g.out.size();
  constexpr std::size_t kUnset = static_cast<std::size_t>(-1);
  std::vector<std::size_t> index(v, kUnset), low(v, 0), comp(v, kUnset);
  std::vector<bool> on_stack(v, false);
  std::vector<std::size_t> stack;
  std::vector<std::pair<std::size_t, std::size_t>> calls;
  std::size_t counter = 0;
  sizes->clear();

  for (std::size_t root = 0; root < v; ++root) {
    if (index[root] != kUnset) continue;
    calls.push_back({root, 0});
    index[root] = low[root] = counter++;
    stack.push_back(root);
    on_stack[root] = true;
    while (!calls.empty()) {
      auto& [node, edge] = calls.back();
      if (edge < g.out[node].size()) {
        const std::size_t next = g.out[node][edge++];
        if (index[next] == kUnset) {
          index[next] = low[next] = counter++;
          stack.push_back(next);
          on_stack[next] = true;
          calls.push_back({next, 0});
        } else if (on_stack[next]) {
          low[node] = std::min(low[node], index[next]);
        }
        continue;
      }
      const std::size_t done = node;
      calls.pop_back();
      if (!calls.empty()) {
        low[calls.back().first] = std::min(low[calls.back().first], low[done]);
      }
      if (low[done] == index[done]) {
        const std::size_t c = sizes->size();
        std::size_t count = 0;
        std::size_t w;
        do {
          w = stack.back();
          stack.pop_back();
          on_stack[w] = false;
          comp[w] = c;
          ++count;
        } while (w != done);
        sizes->push_back(count);
      }
    }
  }
  return comp;
}

}  // namespace

bool is_strict_improvement_cycle(const RelativePayoffGame& rel,
                                 const std::vector<Profile>& profiles) {
  if (profiles.size() < 3 || profiles.front() != profiles.back()) return false;
  for (std::size_t t = 0; t + 1 < profiles.size(); ++t) {
    const auto [x, y] = profiles[t];
    const auto [x2, y2] = profiles[t + 1];
    if (x >= rel.size() || y >= rel.size() || x2 >= rel.size() ||
        y2 >= rel.size()) {
      return false;
    }
    if (y == y2 && x != x2) {
      if (!(rel.delta(x, y) < rel.delta(x2, y))) return false;
    } else if (x == x2 && y != y2) {
      if (!(rel.delta(y, x) < rel.delta(y2, x))) return false;
    } else {
      return false;
    }
  }
  return true;
}

PotentialCertificate improvement_analysis(const RelativePayoffGame& rel) {
  const ProfileGraph g = improvement_graph(rel);
  const std::size_t v = g.out.size();
  std::vector<std::size_t> sizes;
  const auto comp = strongly_connected(g, &sizes);

  std::size_t cyclic_root = v;
  for (std::size_t node = 0; node < v && cyclic_root == v; ++node) {
    if (sizes[comp[node]] > 1) cyclic_root = node;
  }

  if (cyclic_root == v) {
    // Kahn order; level = longest improvement path ending at the profile.
    std::vector<std::size_t> indegree(v, 0);
    for (const auto& out : g.out) {
      for (std::size_t w : out) ++indegree[w];
    }
    std::deque<std::size_t> ready;
    for (std::size_t node = 0; node < v; ++node) {
      if (indegree[node] == 0) ready.push_back(node);
    }
    std::vector<std::int64_t> level(v, 0);
    std::size_t processed = 0;
    while (!ready.empty()) {
      const std::size_t node = ready.front();
      ready.pop_front();
      ++processed;
      for (std::size_t w : g.out[node]) {
        level[w] = std::max(level[w], level[node] + 1);
        if (--indegree[w] == 0) ready.push_back(w);
      }
    }
    if (processed != v) {
      throw InternalError("improvement digraph: SCC and Kahn disagree");
    }
    PotentialFunction cert{SquareMatrix<std::int64_t>(rel.size())};
    for (std::size_t node = 0; node < v; ++node) {
      const auto [x, y] = g.profile(node);
      cert.level(x, y) = level[node];
    }
    if (!verify_generalized_ordinal_potential(rel, cert.level)) {
      throw InternalError("potential certificate failed re-verification");
    }
    return cert;
  }

  // Shortest cycle through cyclic_root, BFS inside its component.
  const std::size_t c = comp[cyclic_root];
  constexpr std::size_t kUnset = static_cast<std::size_t>(-1);
  std::vector<std::size_t> parent(v, kUnset);
  std::deque<std::size_t> frontier{cyclic_root};
  std::size_t closing = kUnset;
  while (!frontier.empty() && closing == kUnset) {
    const std::size_t node = frontier.front();
    frontier.pop_front();
    for (std::size_t w : g.out[node]) {
      if (comp[w] != c) continue;
      if (w == cyclic_root) {
        closing = node;
        break;
      }
      if (parent[w] == kUnset) {
        parent[w] = node;
        frontier.push_back(w);
      }
    }
  }
  if (closing == kUnset) {
    throw InternalError("improvement digraph: cyclic component without cycle");
  }
  std::vector<std::size_t> nodes{cyclic_root};
  for (std::size_t at = closing; at != cyclic_root; at = parent[at]) {
    nodes.push_back(at);
  }
  std::reverse(nodes.begin() + 1, nodes.end());
  nodes.push_back(cyclic_root);

  ImprovementCycle cycle;
  for (std::size_t node : nodes) cycle.profiles.push_back(g.profile(node));
  if (!is_strict_improvement_cycle(rel, cycle.profiles)) {
    throw InternalError("improvement cycle failed re-verification");
  }
  return cycle;
}

// ---------------------------------------------------------------------------
// Aggregative games

namespace {

using Cell = std::optional<Rational>;

// Walks z upward over the aggregates where both Pi(x_hi, z) and Pi(x_lo, z)
// exist and hands consecutive (z_lo, z_hi) pairs with their differences to
// `visit`.
template <typename Visit>
void for_adjacent_differences(const AggregativeGame& agg, ActionIndex x_hi,
                              ActionIndex x_lo, Visit&& visit) {
  std::optional<std::size_t> prev_z;
  Rational prev_diff;
  for (std::size_t z = 0; z < agg.aggregate_count(); ++z) {
    const Cell& hi = agg.extended(x_hi, z);
    const Cell& lo = agg.extended(x_lo, z);
    if (!hi || !lo) continue;
    Rational diff = *hi - *lo;
    if (prev_z) visit(*prev_z, prev_diff, z, diff);
    prev_z = z;
    prev_diff = std::move(diff);
  }
}

void fail(AggregativeFlag& flag, AggregativeWitness witness) {
  if (!flag.holds) return;
  flag.holds = false;
  flag.counterexample = std::move(witness);
}

}  // namespace

AggregativeReport check_aggregative(const AggregativeGame& agg,
                                    const SymmetricGame& game) {
  const std::size_t n = agg.size();
  if (game.size() != n) {
    throw GameError("aggregative representation has a different action count");
  }
  for (ActionIndex x = 0; x < n; ++x) {
    for (ActionIndex y = 0; y < n; ++y) {
      const Cell& cell = agg.extended(x, agg.aggregate_index(x, y));
      if (!cell || *cell != game.payoff(x, y)) {
        throw GameError("aggregator consistency failure: Pi(x, a(x, y)) != "
                        "pi(x, y)",
                        x, y);
      }
    }
  }

  AggregativeReport report;

  // Single-crossing and differences: the sign (resp. value) of
  // Pi(x_hi, z) - Pi(x_lo, z) must be monotone in z; adjacent defined
  // aggregates suffice by transitivity.
  for (ActionIndex x_hi = 1; x_hi < n; ++x_hi) {
    for (ActionIndex x_lo = 0; x_lo < x_hi; ++x_lo) {
      for_adjacent_differences(
          agg, x_hi, x_lo,
          [&](std::size_t z_lo, const Rational& d_lo, std::size_t z_hi,
              const Rational& d_hi) {
            const AggregativeWitness w{{x_hi, x_lo}, {z_hi, z_lo}};
            if (d_hi.sign() > d_lo.sign()) fail(report.quasisubmodular, w);
            if (d_hi.sign() < d_lo.sign()) fail(report.quasisupermodular, w);
            if (d_lo < d_hi) fail(report.submodular, w);
            if (d_hi < d_lo) fail(report.supermodular, w);
          });
    }
  }
  if ((report.submodular.holds && !report.quasisubmodular.holds) ||
      (report.supermodular.holds && !report.quasisupermodular.holds)) {
    throw InternalError("modularity does not imply quasi-modularity");
  }

  // Shape in x for each aggregate, over actions where Pi(., z) is defined.
  for (std::size_t z = 0; z < agg.aggregate_count(); ++z) {
    std::vector<ActionIndex> xs;
    for (ActionIndex x = 0; x < n; ++x) {
      if (agg.extended(x, z)) xs.push_back(x);
    }
    const auto value = [&](std::size_t k) -> const Rational& {
      return *agg.extended(xs[k], z);
    };
    const std::size_t m = xs.size();
    if (m < 3) continue;
    // Prefix/suffix extrema: Pi(x') >= min over pairs of max(...) etc.
    std::vector<std::size_t> max_left(m), max_right(m), min_left(m),
        min_right(m);
    max_left[0] = min_left[0] = 0;
    for (std::size_t k = 1; k < m; ++k) {
      max_left[k] = value(k) > value(max_left[k - 1]) ? k : max_left[k - 1];
      min_left[k] = value(k) < value(min_left[k - 1]) ? k : min_left[k - 1];
    }
    max_right[m - 1] = min_right[m - 1] = m - 1;
    for (std::size_t k = m - 1; k-- > 0;) {
      max_right[k] = value(k) > value(max_right[k + 1]) ? k : max_right[k + 1];
      min_right[k] = value(k) < value(min_right[k + 1]) ? k : min_right[k + 1];
    }
    for (std::size_t k = 1; k + 1 < m; ++k) {
      const std::size_t l = max_left[k - 1], r = max_right[k + 1];
      if (value(k) < min(value(l), value(r))) {
        fail(report.quasiconcave_in_x, {{xs[l], xs[k], xs[r]}, {z}});
      }
      const std::size_t l2 = min_left[k - 1], r2 = min_right[k + 1];
      if (!(value(k) < max(value(l2), value(r2)))) {
        fail(report.strictly_quasiconvex_in_x, {{xs[l2], xs[k], xs[r2]}, {z}});
      }
    }
  }

  for (ActionIndex star = 0; star < n; ++star) {
    bool stable = true;
    for (ActionIndex x = 0; x < n && stable; ++x) {
      stable = agg.payoff(star, x) >= agg.payoff(x, star);
    }
    if (stable) report.fess.push_back(star);
  }
  report.fess_exists = !report.fess.empty();
  for (ActionIndex star : report.fess) {
    if (star != 0 && star + 1 != n) {
      fail(report.corner_fess_only, {{star}, {}});
    }
  }
  if (agg.table_complete() && report.strictly_quasiconvex_in_x.holds &&
      report.quasisupermodular.holds && !report.corner_fess_only.holds) {
    throw InternalError(
        "interior fESS in a strictly quasiconvex quasisupermodular game");
  }
  return report;
}

}  // namespace imitation
