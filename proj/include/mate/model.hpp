#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <vector>

namespace mate {

/// Tolerance for every feasibility comparison (loads and times).
inline constexpr double kFeasEps = 1e-9;

using NodeId = int;
inline constexpr NodeId kDepot = 0;

struct Node {
  NodeId id = 0;
  std::optional<double> x;
  std::optional<double> y;
  double delivery = 0.0;
  double pickup = 0.0;
  double tw_start = 0.0;
  double tw_end = 0.0;
  double service = 0.0;

  bool operator==(const Node&) const = default;
};

/// Immutable problem data. Node 0 is the depot, 1..M are customers.
/// Build through `Instance::create`, which validates every invariant.
class Instance {
 public:
  Instance() = default;

  /// Validates and takes ownership. `dist` and `time` are row-major
  /// (M+1)x(M+1). Throws std::invalid_argument on any violated invariant.
  static Instance create(std::string name, std::vector<Node> nodes,
                         std::vector<double> dist, std::vector<double> time,
                         int fleet_size, double capacity, double dispatch_cost,
                         double unit_cost);

  /// Euclidean instance: dist(i,j) is the exact Euclidean distance and
  /// time equals dist. Every node must carry coordinates.
  static Instance euclidean(std::string name, std::vector<Node> nodes, int fleet_size,
                            double capacity, double dispatch_cost, double unit_cost);

  const std::string& name() const { return name_; }
  std::span<const Node> nodes() const { return nodes_; }
  const Node& node(NodeId i) const { return nodes_[static_cast<std::size_t>(i)]; }
  int num_nodes() const { return static_cast<int>(nodes_.size()); }
  int num_customers() const { return num_nodes() - 1; }

  double dist(NodeId i, NodeId j) const { return dist_[index(i, j)]; }
  double time(NodeId i, NodeId j) const { return time_[index(i, j)]; }
  std::span<const double> dist_matrix() const { return dist_; }
  std::span<const double> time_matrix() const { return time_; }

  int fleet_size() const { return fleet_size_; }
  double capacity() const { return capacity_; }
  double dispatch_cost() const { return dispatch_cost_; }
  double unit_cost() const { return unit_cost_; }

  /// Copy with different cost coefficients.
  Instance with_costs(double dispatch_cost, double unit_cost) const;

  bool operator==(const Instance&) const = default;

 private:
  std::size_t index(NodeId i, NodeId j) const {
    return static_cast<std::size_t>(i) * nodes_.size() + static_cast<std::size_t>(j);
  }

  std::string name_;
  std::vector<Node> nodes_;
  std::vector<double> dist_;
  std::vector<double> time_;
  int fleet_size_ = 0;
  double capacity_ = 0.0;
  double dispatch_cost_ = 0.0;
  double unit_cost_ = 0.0;
};

/// Depot-bracketed node sequence, e.g. {0, 3, 7, 0}.
using Route = std::vector<NodeId>;

struct Solution {
  std::vector<Route> routes;

  int num_routes() const { return static_cast<int>(routes.size()); }
  bool operator==(const Solution&) const = default;
};

struct RouteEval {
  double td = 0.0;
  std::vector<double> arr;
  std::vector<double> dep;
  std::vector<double> load;
  bool feasible_tw = true;
  bool feasible_cap = true;

  bool feasible() const { return feasible_tw && feasible_cap; }
};

/// Traversal-based evaluation: distance, schedule with forced departure at
/// a_0, and load on arrival at every position.
RouteEval evaluate_route_direct(const Instance& inst, const Route& route);

double route_distance(const Instance& inst, const Route& route);

/// u1 * K + u2 * sum TD. Feasibility is not checked.
double total_cost(const Instance& inst, const Solution& s);
double total_distance(const Instance& inst, const Solution& s);

enum class ViolationKind {
  FleetBound,
  DepotBracket,
  UnknownNode,
  MissingCustomer,
  DuplicateCustomer,
  EmptyRoute,
  Capacity,
  TimeWindow,
  DepotWindow,
};

const char* to_string(ViolationKind kind);

struct Violation {
  ViolationKind kind;
  int route = -1;     // -1 when the violation is solution-wide
  int position = -1;  // index within the route, -1 when not applicable
  NodeId node = -1;
  std::string message;
};

struct FeasibilityReport {
  std::vector<Violation> violations;

  bool feasible() const { return violations.empty(); }
  bool has(ViolationKind kind) const;
};

FeasibilityReport check_solution(const Instance& inst, const Solution& s);

/// True when every route is depot-bracketed and has at least one customer.
bool is_route_well_formed(const Route& route);

/// Number of customers on a route (length minus the two depot visits).
inline int customer_count(const Route& route) {
  return route.size() < 2 ? 0 : static_cast<int>(route.size()) - 2;
}

}  // namespace mate
