#include "mate/oracle.hpp"

#include <limits>
#include <string>
#include <vector>

#include "mate/seqeval.hpp"

namespace mate::oracle {

namespace {

constexpr double kImproveEps = 1e-9;

class ExactSearch {
 public:
  ExactSearch(const Instance& inst, std::uint64_t budget)
      : inst_(inst),
        budget_(budget),
        m_(inst.num_customers()),
        assigned_(static_cast<std::size_t>(m_) + 1, 0) {}

  ExactResult solve() {
    if (m_ == 0) {
      result_.best = Solution{};
      result_.tc = 0.0;
      return result_;
    }
    best_tc_ = std::numeric_limits<double>::infinity();
    open_route();
    result_.tc = best_tc_;
    return result_;
  }

 private:
  NodeId smallest_unassigned() const {
    for (NodeId v = 1; v <= m_; ++v) {
      if (!assigned_[static_cast<std::size_t>(v)]) return v;
    }
    return 0;
  }

  double closed_cost() const {
    return inst_.dispatch_cost() * static_cast<double>(closed_.size()) + inst_.unit_cost() * closed_dist_;
  }

  void expand() {
    if (++result_.expansions > budget_) {
      throw BudgetExhausted("exact search exceeded " + std::to_string(budget_) + " expansions");
    }
  }

  // Starts a new route; it must eventually contain the smallest unassigned
  // customer, which orders routes by their minimum id.
  void open_route() {
    if (static_cast<int>(closed_.size()) >= inst_.fleet_size()) return;
    const NodeId anchor = smallest_unassigned();
    Route route{kDepot};
    extend(route, leaf(inst_.node(kDepot)), anchor, false);
  }

  void extend(Route& route, const SubseqAttr& prefix, NodeId anchor, bool has_anchor) {
    expand();
    const double open_cost =
        closed_cost() + inst_.dispatch_cost() + inst_.unit_cost() * prefix.w;
    if (open_cost >= best_tc_) return;

    if (has_anchor) close(route, prefix);

    for (NodeId v = 1; v <= m_; ++v) {
      if (assigned_[static_cast<std::size_t>(v)]) continue;
      const SubseqAttr next = concat(inst_, prefix, leaf(inst_.node(v)));
      if (!next.feasible(inst_.capacity())) continue;
      assigned_[static_cast<std::size_t>(v)] = 1;
      route.push_back(v);
      extend(route, next, anchor, has_anchor || v == anchor);
      route.pop_back();
      assigned_[static_cast<std::size_t>(v)] = 0;
    }
  }

  void close(Route& route, const SubseqAttr& prefix) {
    const SubseqAttr whole = concat(inst_, prefix, leaf(inst_.node(kDepot)));
    if (!whole.feasible(inst_.capacity())) return;
    route.push_back(kDepot);
    closed_.push_back(route);
    closed_dist_ += whole.w;
    if (smallest_unassigned() == 0) {
      const double tc = closed_cost();
      if (tc < best_tc_) {
        best_tc_ = tc;
        result_.best = Solution{closed_};
      }
    } else {
      open_route();
    }
    closed_dist_ -= whole.w;
    closed_.pop_back();
    route.pop_back();
  }

  const Instance& inst_;
  std::uint64_t budget_;
  int m_;
  std::vector<char> assigned_;
  std::vector<Route> closed_;
  double closed_dist_ = 0.0;
  double best_tc_ = 0.0;
  ExactResult result_;
};

}  // namespace

ExactResult exact_solve(const Instance& inst, std::uint64_t budget) {
  if (inst.num_customers() > kMaxExactCustomers) {
    throw std::invalid_argument("exact_solve handles at most " + std::to_string(kMaxExactCustomers) +
                                " customers, got " + std::to_string(inst.num_customers()));
  }
  return ExactSearch(inst, budget).solve();
}

ModelEval evaluate_by_model(const Instance& inst, const Solution& s, const Move& mv) {
  Solution t = s;
  apply_move(t, mv);
  ModelEval out;
  out.feasible = check_solution(inst, t).feasible();
  out.delta_cost = total_cost(inst, t) - total_cost(inst, s);
  return out;
}

std::optional<ScanResult> scan_all_moves(const Instance& inst, const Solution& s) {
  std::optional<ScanResult> best;
  for_each_move(s, [&](const Move& mv) {
    const ModelEval e = evaluate_by_model(inst, s, mv);
    if (!e.feasible || e.delta_cost >= -kImproveEps) return;
    if (!best || e.delta_cost < best->delta_cost - kImproveEps) best = ScanResult{mv, e.delta_cost};
  });
  return best;
}

}  // namespace mate::oracle
