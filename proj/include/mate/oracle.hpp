#pragma once

#include <cstdint>
#include <optional>
#include <stdexcept>

#include "mate/model.hpp"
#include "mate/search.hpp"

namespace mate::oracle {

inline constexpr int kMaxExactCustomers = 10;

class BudgetExhausted : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct ExactResult {
  std::optional<Solution> best;  // empty when the instance has no feasible solution
  double tc = 0.0;
  std::uint64_t expansions = 0;
};

/// Depth-first branch-and-bound over sequenced route partitions.
/// Throws std::invalid_argument above kMaxExactCustomers customers and
/// BudgetExhausted after `budget` node expansions.
ExactResult exact_solve(const Instance& inst, std::uint64_t budget = 200'000'000);

/// Apply-then-recheck evaluation of one move.
struct ModelEval {
  bool feasible = false;
  double delta_cost = 0.0;
};

ModelEval evaluate_by_model(const Instance& inst, const Solution& s, const Move& mv);

struct ScanResult {
  Move move;
  double delta_cost = 0.0;
};

/// Best strictly improving feasible move (first in enumeration order when
/// deltas are within 1e-9), or none.
std::optional<ScanResult> scan_all_moves(const Instance& inst, const Solution& s);

}  // namespace mate::oracle
