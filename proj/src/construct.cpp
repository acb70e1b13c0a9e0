#include "mate/construct.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

namespace mate {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();
// Costs closer than this count as equal, so ties fall to the scan order.
constexpr double kTieEps = 1e-9;

bool less_than(double a, double b) { return a < b - kTieEps; }
bool near(double a, double b) { return a == b || std::abs(a - b) <= kTieEps; }

// Attributes of `route` with `v` inserted before position `pos`, from the table.
SubseqAttr inserted_attr(const Instance& inst, const RouteAttrTable& t, NodeId v, int pos) {
  const SubseqAttr head = concat(inst, t.forward(0, pos - 1), leaf(inst.node(v)));
  if (!head.feasible(inst.capacity())) return head;
  return concat(inst, head, t.forward(pos, t.size() - 1));
}

bool single_route_feasible(const Instance& inst, NodeId v) {
  const NodeId seq[] = {kDepot, v, kDepot};
  return fold_sequence(inst, seq).feasible(inst.capacity());
}

}  // namespace

std::optional<InsertionCandidate> best_insertion(const Instance& inst, const RouteAttrTable& table,
                                                 NodeId v, int route_index) {
  std::optional<InsertionCandidate> best;
  const double base = table.whole().w;
  for (int pos = 1; pos < table.size(); ++pos) {
    const SubseqAttr a = inserted_attr(inst, table, v, pos);
    if (!a.feasible(inst.capacity())) continue;
    const double cost = inst.unit_cost() * (a.w - base);
    if (!best || less_than(cost, best->cost)) best = InsertionCandidate{v, route_index, pos, cost};
  }
  return best;
}

double rcrs_score(const Instance& inst, const RcrsWeights& w, NodeId customer, const Route& route,
                  int position) {
  const NodeId i = route[static_cast<std::size_t>(position - 1)];
  const NodeId j = route[static_cast<std::size_t>(position)];
  const double extra = inst.dist(i, customer) + inst.dist(customer, j) - inst.dist(i, j);

  Route with = route;
  with.insert(with.begin() + position, customer);
  const double peak = fold_sequence(inst, with).c_h;
  const double residual = inst.capacity() - peak;
  const double radial = inst.dist(kDepot, customer) + inst.dist(customer, kDepot);
  return extra - w.lambda * residual - w.gamma_rs * radial;
}

Solution rcrs_construct(const Instance& inst, const RcrsWeights& w) {
  const int m = inst.num_customers();
  std::vector<char> assigned(static_cast<std::size_t>(m) + 1, 0);
  int remaining = m;

  Solution sol;
  if (m == 0) return sol;
  if (inst.fleet_size() < 1) throw FleetExhausted("fleet size 0 cannot serve any customer");

  Route active{kDepot, kDepot};
  RouteAttrTable table(inst, active);

  while (remaining > 0) {
    double best_score = kInf;
    NodeId best_v = -1;
    int best_pos = -1;
    // Position-major scan: strict '<' keeps the lowest (position, customer).
    for (int pos = 1; pos < table.size(); ++pos) {
      const NodeId i = active[static_cast<std::size_t>(pos - 1)];
      const NodeId j = active[static_cast<std::size_t>(pos)];
      for (NodeId v = 1; v <= m; ++v) {
        if (assigned[static_cast<std::size_t>(v)]) continue;
        const SubseqAttr a = inserted_attr(inst, table, v, pos);
        if (!a.feasible(inst.capacity())) continue;
        const double extra = inst.dist(i, v) + inst.dist(v, j) - inst.dist(i, j);
        const double residual = inst.capacity() - a.c_h;
        const double radial = inst.dist(kDepot, v) + inst.dist(v, kDepot);
        const double score = extra - w.lambda * residual - w.gamma_rs * radial;
        if (score < best_score) {
          best_score = score;
          best_v = v;
          best_pos = pos;
        }
      }
    }

    if (best_v >= 0) {
      active.insert(active.begin() + best_pos, best_v);
      table = RouteAttrTable(inst, active);
      assigned[static_cast<std::size_t>(best_v)] = 1;
      --remaining;
      continue;
    }

    if (active.size() == 2) {
      for (NodeId v = 1; v <= m; ++v) {
        if (!assigned[static_cast<std::size_t>(v)]) {
          throw InsertionImpossible(v, "customer " + std::to_string(v) +
                                           " cannot be served by a dedicated vehicle");
        }
      }
    }
    sol.routes.push_back(active);
    if (sol.num_routes() >= inst.fleet_size()) {
      throw FleetExhausted("construction needs more than " + std::to_string(inst.fleet_size()) +
                           " vehicles");
    }
    active = Route{kDepot, kDepot};
    table = RouteAttrTable(inst, active);
  }
  if (active.size() > 2) sol.routes.push_back(active);
  return sol;
}

double regret_of(std::span<const double> costs) {
  if (costs.size() < 2) return kInf;
  double lo = kInf;
  double second = kInf;
  for (double c : costs) {
    if (c < lo) {
      second = lo;
      lo = c;
    } else if (c < second) {
      second = c;
    }
  }
  return second - lo;
}

namespace {

struct Option {
  bool feasible = false;
  int position = 0;
  double cost = 0.0;
};

}  // namespace

Solution regret_insert(const Instance& inst, Solution partial, std::vector<NodeId> unassigned) {
  if (unassigned.empty()) return partial;
  std::sort(unassigned.begin(), unassigned.end());

  std::vector<Route>& routes = partial.routes;
  std::vector<RouteAttrTable> tables;
  tables.reserve(routes.size() + unassigned.size());
  for (const Route& r : routes) tables.emplace_back(inst, r);

  // options[u][r]: best insertion of unassigned[u] into route r.
  std::vector<std::vector<Option>> options(unassigned.size());
  auto refresh = [&](std::size_t u, std::size_t r) {
    auto& row = options[u];
    if (row.size() <= r) row.resize(r + 1);
    const auto cand = best_insertion(inst, tables[r], unassigned[u], static_cast<int>(r));
    row[r] = cand ? Option{true, cand->position, cand->cost} : Option{};
  };
  for (std::size_t u = 0; u < unassigned.size(); ++u) {
    for (std::size_t r = 0; r < routes.size(); ++r) refresh(u, r);
  }

  std::vector<char> alone(unassigned.size(), 0);
  for (std::size_t u = 0; u < unassigned.size(); ++u) {
    alone[u] = single_route_feasible(inst, unassigned[u]) ? 1 : 0;
  }

  std::vector<double> costs;
  while (!unassigned.empty()) {
    const bool fresh_allowed = partial.num_routes() < inst.fleet_size();

    std::size_t pick = 0;
    double pick_regret = -kInf;
    double pick_cost = kInf;
    int pick_route = kNewRoute;
    int pick_pos = 1;

    for (std::size_t u = 0; u < unassigned.size(); ++u) {
      const NodeId v = unassigned[u];
      costs.clear();
      double best = kInf;
      int best_route = kNewRoute;
      int best_pos = 1;
      for (std::size_t r = 0; r < routes.size(); ++r) {
        const Option& o = options[u][r];
        if (!o.feasible) continue;
        costs.push_back(o.cost);
        if (less_than(o.cost, best)) {
          best = o.cost;
          best_route = static_cast<int>(r);
          best_pos = o.position;
        }
      }
      if (fresh_allowed && alone[u]) {
        const double c0 = inst.dispatch_cost() +
                          inst.unit_cost() * (inst.dist(kDepot, v) + inst.dist(v, kDepot));
        costs.push_back(c0);
        if (less_than(c0, best)) {
          best = c0;
          best_route = kNewRoute;
          best_pos = 1;
        }
      }
      if (costs.empty()) {
        throw InsertionImpossible(v, "customer " + std::to_string(v) +
                                         " has no feasible insertion");
      }
      const double regret = regret_of(costs);
      // unassigned is sorted, so strict comparisons keep the lowest id on ties.
      if (less_than(pick_regret, regret) || (near(regret, pick_regret) && less_than(best, pick_cost))) {
        pick = u;
        pick_regret = regret;
        pick_cost = best;
        pick_route = best_route;
        pick_pos = best_pos;
      }
    }

    const NodeId v = unassigned[pick];
    std::size_t changed;
    if (pick_route == kNewRoute) {
      routes.push_back(Route{kDepot, v, kDepot});
      tables.emplace_back(inst, routes.back());
      changed = routes.size() - 1;
    } else {
      changed = static_cast<std::size_t>(pick_route);
      Route& r = routes[changed];
      r.insert(r.begin() + pick_pos, v);
      tables[changed] = RouteAttrTable(inst, r);
    }

    unassigned.erase(unassigned.begin() + static_cast<std::ptrdiff_t>(pick));
    options.erase(options.begin() + static_cast<std::ptrdiff_t>(pick));
    alone.erase(alone.begin() + static_cast<std::ptrdiff_t>(pick));
    for (std::size_t u = 0; u < unassigned.size(); ++u) refresh(u, changed);
  }
  return partial;
}

}  // namespace mate
