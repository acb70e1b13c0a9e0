#pragma once

#include <optional>
#include <vector>

#include "mate/model.hpp"
#include "mate/rng.hpp"

namespace mate::testing {

struct GenOptions {
  int customers = 10;
  int routes = 2;         // routes of the planted solution
  int spare_vehicles = 2; // fleet = routes + spare_vehicles
  double extent = 100.0;  // coordinates in [0, extent]^2
  double max_demand = 20.0;
  double cap_slack = 0.2;  // Q = (1 + cap_slack) * planted peak load
  double tw_slack = 30.0;  // windows are the planted arrival +- U(0, tw_slack)
  double max_service = 10.0;
  bool integral = true;  // integer coordinates and demands
  std::vector<int> route_lengths;  // when set, overrides customers and routes
};

struct Generated {
  Instance inst;
  Solution planted;  // feasible by construction
};

/// Random instance built around a planted solution whose routes have
/// random lengths (each at least 1) summing to `customers`.
Generated generate(Rng& rng, const GenOptions& opt);

/// Random permutation split greedily into feasible routes; none when a
/// customer cannot stand alone or the fleet runs out.
std::optional<Solution> random_solution(const Instance& inst, Rng& rng);

/// Same instance with customers relabelled by a random permutation; the
/// permutation maps old id to new id.
Instance relabel(const Instance& inst, Rng& rng, std::vector<NodeId>* perm = nullptr);

}  // namespace mate::testing
