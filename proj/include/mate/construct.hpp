#pragma once

#include <optional>
#include <span>
#include <stdexcept>
#include <vector>

#include "mate/model.hpp"
#include "mate/seqeval.hpp"

namespace mate {

/// More routes would be needed than the fleet provides.
class FleetExhausted : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Some customer has no feasible insertion left.
class InsertionImpossible : public std::runtime_error {
 public:
  InsertionImpossible(NodeId customer, const std::string& what)
      : std::runtime_error(what), customer_(customer) {}
  NodeId customer() const { return customer_; }

 private:
  NodeId customer_;
};

struct RcrsWeights {
  double lambda = 0.0;    // residual capacity weight
  double gamma_rs = 0.0;  // radial surcharge weight
};

inline constexpr int kNewRoute = -1;

struct InsertionCandidate {
  NodeId customer = 0;
  int route = kNewRoute;
  int position = 1;  // inserted before route[position]
  double cost = 0.0;
};

/// Cheapest feasible position for `v` in a route, cost being the change of
/// u2 * TD. Ties go to the lowest position.
std::optional<InsertionCandidate> best_insertion(const Instance& inst, const RouteAttrTable& table,
                                                 NodeId v, int route_index);

/// RCRS criterion for inserting `customer` before route[position]; lower is
/// better. Precondition: the insertion is feasible.
double rcrs_score(const Instance& inst, const RcrsWeights& w, NodeId customer, const Route& route,
                  int position);

/// Sequential RCRS insertion construction. Deterministic.
/// Throws FleetExhausted, or InsertionImpossible when a customer cannot be
/// served even on a route of its own.
Solution rcrs_construct(const Instance& inst, const RcrsWeights& w);

/// Difference between the second-smallest and smallest entry; +inf with
/// fewer than two entries.
double regret_of(std::span<const double> costs);

/// Regret-2 insertion of `unassigned` into `partial`, with a fresh route as
/// an extra option while the fleet allows. Throws InsertionImpossible.
Solution regret_insert(const Instance& inst, Solution partial, std::vector<NodeId> unassigned);

}  // namespace mate
