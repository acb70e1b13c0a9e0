#include "mate/model.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>
#include <stdexcept>

namespace mate {

namespace {

void require(bool cond, const std::string& what) {
  if (!cond) throw std::invalid_argument(what);
}

bool finite_nonneg(double v) { return std::isfinite(v) && v >= 0.0; }

}  // namespace

Instance Instance::create(std::string name, std::vector<Node> nodes, std::vector<double> dist,
                          std::vector<double> time, int fleet_size, double capacity,
                          double dispatch_cost, double unit_cost) {
  require(!nodes.empty(), "instance has no depot");
  const std::size_t n = nodes.size();
  require(dist.size() == n * n, "distance matrix is not (M+1)x(M+1)");
  require(time.size() == n * n, "time matrix is not (M+1)x(M+1)");
  require(fleet_size >= 0, "fleet size must be nonnegative");
  require(finite_nonneg(capacity), "capacity must be finite and nonnegative");
  require(finite_nonneg(dispatch_cost), "dispatch cost must be finite and nonnegative");
  require(finite_nonneg(unit_cost), "unit cost must be finite and nonnegative");

  for (std::size_t i = 0; i < n; ++i) {
    const Node& nd = nodes[i];
    std::ostringstream who;
    who << "node " << i;
    require(nd.id == static_cast<NodeId>(i), who.str() + ": id does not match its index");
    require(finite_nonneg(nd.delivery) && finite_nonneg(nd.pickup),
            who.str() + ": demands must be finite and nonnegative");
    require(finite_nonneg(nd.service), who.str() + ": service time must be nonnegative");
    require(std::isfinite(nd.tw_start) && std::isfinite(nd.tw_end),
            who.str() + ": time window must be finite");
    require(nd.tw_start <= nd.tw_end, who.str() + ": tw_start exceeds tw_end");
    if (i == 0) {
      require(nd.delivery == 0.0 && nd.pickup == 0.0 && nd.service == 0.0,
              "depot must have zero delivery, pickup and service");
    } else {
      require(std::max(nd.delivery, nd.pickup) <= capacity,
              who.str() + ": demand exceeds vehicle capacity");
    }
    for (std::size_t j = 0; j < n; ++j) {
      require(finite_nonneg(dist[i * n + j]) && finite_nonneg(time[i * n + j]),
              "matrix entries must be finite and nonnegative");
    }
    require(dist[i * n + i] == 0.0 && time[i * n + i] == 0.0, "matrix diagonal must be zero");
  }

  Instance inst;
  inst.name_ = std::move(name);
  inst.nodes_ = std::move(nodes);
  inst.dist_ = std::move(dist);
  inst.time_ = std::move(time);
  inst.fleet_size_ = fleet_size;
  inst.capacity_ = capacity;
  inst.dispatch_cost_ = dispatch_cost;
  inst.unit_cost_ = unit_cost;
  return inst;
}

Instance Instance::euclidean(std::string name, std::vector<Node> nodes, int fleet_size,
                             double capacity, double dispatch_cost, double unit_cost) {
  const std::size_t n = nodes.size();
  std::vector<double> dist(n * n, 0.0);
  for (std::size_t i = 0; i < n; ++i) {
    require(nodes[i].x.has_value() && nodes[i].y.has_value(),
            "euclidean instance requires coordinates on every node");
  }
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) {
      if (i == j) continue;
      const double dx = *nodes[i].x - *nodes[j].x;
      const double dy = *nodes[i].y - *nodes[j].y;
      dist[i * n + j] = std::sqrt(dx * dx + dy * dy);
    }
  }
  std::vector<double> time = dist;
  return create(std::move(name), std::move(nodes), std::move(dist), std::move(time), fleet_size,
                capacity, dispatch_cost, unit_cost);
}

Instance Instance::with_costs(double dispatch_cost, double unit_cost) const {
  require(finite_nonneg(dispatch_cost) && finite_nonneg(unit_cost),
          "cost coefficients must be finite and nonnegative");
  Instance copy = *this;
  copy.dispatch_cost_ = dispatch_cost;
  copy.unit_cost_ = unit_cost;
  return copy;
}

RouteEval evaluate_route_direct(const Instance& inst, const Route& route) {
  RouteEval ev;
  const std::size_t len = route.size();
  ev.arr.assign(len, 0.0);
  ev.dep.assign(len, 0.0);
  ev.load.assign(len, 0.0);
  if (len == 0) return ev;

  double deliveries = 0.0;
  for (NodeId v : route) deliveries += inst.node(v).delivery;

  const double a0 = inst.node(kDepot).tw_start;
  ev.arr[0] = a0;
  ev.dep[0] = a0;
  ev.load[0] = deliveries;
  ev.feasible_cap = ev.load[0] <= inst.capacity() + kFeasEps;

  for (std::size_t j = 1; j < len; ++j) {
    const NodeId prev = route[j - 1];
    const NodeId cur = route[j];
    const Node& pn = inst.node(prev);
    const Node& cn = inst.node(cur);
    ev.td += inst.dist(prev, cur);
    ev.arr[j] = ev.dep[j - 1] + inst.time(prev, cur);
    ev.dep[j] = std::max(ev.arr[j], cn.tw_start) + cn.service;
    ev.load[j] = ev.load[j - 1] - pn.delivery + pn.pickup;
    if (ev.arr[j] > cn.tw_end + kFeasEps) ev.feasible_tw = false;
    if (ev.load[j] > inst.capacity() + kFeasEps) ev.feasible_cap = false;
  }
  return ev;
}

double route_distance(const Instance& inst, const Route& route) {
  double td = 0.0;
  for (std::size_t j = 1; j < route.size(); ++j) td += inst.dist(route[j - 1], route[j]);
  return td;
}

double total_distance(const Instance& inst, const Solution& s) {
  double td = 0.0;
  for (const Route& r : s.routes) td += route_distance(inst, r);
  return td;
}

double total_cost(const Instance& inst, const Solution& s) {
  return inst.dispatch_cost() * s.num_routes() + inst.unit_cost() * total_distance(inst, s);
}

bool is_route_well_formed(const Route& route) {
  return route.size() >= 3 && route.front() == kDepot && route.back() == kDepot;
}

const char* to_string(ViolationKind kind) {
  switch (kind) {
    case ViolationKind::FleetBound: return "fleet-bound";
    case ViolationKind::DepotBracket: return "depot-bracket";
    case ViolationKind::UnknownNode: return "unknown-node";
    case ViolationKind::MissingCustomer: return "missing-customer";
    case ViolationKind::DuplicateCustomer: return "duplicate-customer";
    case ViolationKind::EmptyRoute: return "empty-route";
    case ViolationKind::Capacity: return "capacity";
    case ViolationKind::TimeWindow: return "time-window";
    case ViolationKind::DepotWindow: return "depot-window";
  }
  return "unknown";
}

bool FeasibilityReport::has(ViolationKind kind) const {
  return std::any_of(violations.begin(), violations.end(),
                     [kind](const Violation& v) { return v.kind == kind; });
}

FeasibilityReport check_solution(const Instance& inst, const Solution& s) {
  FeasibilityReport rep;
  auto add = [&rep](ViolationKind k, int r, int p, NodeId node, std::string msg) {
    rep.violations.push_back(Violation{k, r, p, node, std::move(msg)});
  };

  if (s.num_routes() > inst.fleet_size()) {
    std::ostringstream os;
    os << s.num_routes() << " routes exceed fleet size " << inst.fleet_size();
    add(ViolationKind::FleetBound, -1, -1, -1, os.str());
  }

  const int m = inst.num_customers();
  std::vector<int> seen(static_cast<std::size_t>(m) + 1, 0);

  for (int r = 0; r < s.num_routes(); ++r) {
    const Route& route = s.routes[static_cast<std::size_t>(r)];
    if (route.size() < 2 || route.front() != kDepot || route.back() != kDepot) {
      add(ViolationKind::DepotBracket, r, -1, -1,
          "route " + std::to_string(r) + " does not start and end at the depot");
      continue;
    }
    if (route.size() == 2) {
      add(ViolationKind::EmptyRoute, r, -1, -1,
          "route " + std::to_string(r) + " serves no customer");
      continue;
    }
    bool nodes_ok = true;
    for (std::size_t p = 1; p + 1 < route.size(); ++p) {
      const NodeId v = route[p];
      if (v < 1 || v > m) {
        add(ViolationKind::UnknownNode, r, static_cast<int>(p), v,
            "route " + std::to_string(r) + " position " + std::to_string(p) +
                " references unknown customer " + std::to_string(v));
        nodes_ok = false;
        continue;
      }
      if (++seen[static_cast<std::size_t>(v)] == 2) {
        add(ViolationKind::DuplicateCustomer, r, static_cast<int>(p), v,
            "customer " + std::to_string(v) + " is served more than once");
      }
    }
    if (!nodes_ok) continue;

    const RouteEval ev = evaluate_route_direct(inst, route);
    for (std::size_t p = 0; p < route.size(); ++p) {
      if (ev.load[p] > inst.capacity() + kFeasEps) {
        std::ostringstream os;
        os << "route " << r << " position " << p << " load " << ev.load[p] << " exceeds capacity "
           << inst.capacity();
        add(ViolationKind::Capacity, r, static_cast<int>(p), route[p], os.str());
      }
    }
    for (std::size_t p = 1; p < route.size(); ++p) {
      const NodeId v = route[p];
      if (ev.arr[p] > inst.node(v).tw_end + kFeasEps) {
        const bool at_depot = p + 1 == route.size();
        std::ostringstream os;
        os << "route " << r << " position " << p << " arrives at " << ev.arr[p]
           << (at_depot ? " after depot closing " : " after due time ") << inst.node(v).tw_end;
        add(at_depot ? ViolationKind::DepotWindow : ViolationKind::TimeWindow, r,
            static_cast<int>(p), v, os.str());
      }
    }
  }

  for (int v = 1; v <= m; ++v) {
    if (seen[static_cast<std::size_t>(v)] == 0) {
      add(ViolationKind::MissingCustomer, -1, -1, v,
          "customer " + std::to_string(v) + " is not served");
    }
  }
  return rep;
}

}  // namespace mate
