#pragma once

#include <array>
#include <cstddef>
#include <span>
#include <vector>

#include "mate/model.hpp"

namespace mate {

/// Attributes of a contiguous node sequence, closed under concatenation.
///
/// `e` and `l` bound the service start at the first node such that the
/// sequence is traversed in its minimum duration `d`. Once any join
/// produces a time-window violation `tw_feasible` stays false; e/l/d of
/// such a record are still computed but carry no meaning.
struct SubseqAttr {
  double w = 0.0;    // travel distance
  double c_e = 0.0;  // load on entry (total deliveries)
  double c_l = 0.0;  // load on exit (total pickups)
  double c_h = 0.0;  // highest load
  double d = 0.0;    // minimum duration
  double e = 0.0;    // earliest start
  double l = 0.0;    // latest start
  bool tw_feasible = true;
  NodeId first = kDepot;
  NodeId last = kDepot;

  bool feasible(double capacity) const { return tw_feasible && c_h <= capacity + kFeasEps; }
};

SubseqAttr leaf(const Node& node);

/// Join `a` then `b`. `dist_jk`/`time_jk` are the arc values from the last
/// node of `a` to the first node of `b`.
SubseqAttr concat(const SubseqAttr& a, const SubseqAttr& b, double dist_jk, double time_jk);

/// Arc values looked up from the instance.
inline SubseqAttr concat(const Instance& inst, const SubseqAttr& a, const SubseqAttr& b) {
  return concat(a, b, inst.dist(a.last, b.first), inst.time(a.last, b.first));
}

/// Left fold of leaves over an explicit node list (empty list -> default record).
SubseqAttr fold_sequence(const Instance& inst, std::span<const NodeId> nodes);

/// Attributes of every contiguous span of one route, forward and reversed.
class RouteAttrTable {
 public:
  RouteAttrTable() = default;
  RouteAttrTable(const Instance& inst, const Route& route);

  int size() const { return n_; }
  std::size_t entry_count() const { return forward_.size(); }

  /// Span route[p..q], p <= q.
  const SubseqAttr& forward(int p, int q) const { return forward_[slot(p, q)]; }
  /// Span route[q], route[q-1], ..., route[p].
  const SubseqAttr& backward(int p, int q) const { return backward_[slot(p, q)]; }
  const SubseqAttr& whole() const { return forward(0, n_ - 1); }

 private:
  std::size_t slot(int p, int q) const {
    const auto up = static_cast<std::size_t>(p);
    const auto n = static_cast<std::size_t>(n_);
    return up * n - up * (up - 1) / 2 + static_cast<std::size_t>(q - p);
  }

  int n_ = 0;
  std::vector<SubseqAttr> forward_;
  std::vector<SubseqAttr> backward_;
};

RouteAttrTable build_table(const Instance& inst, const Route& route);

/// One precomputed span of an existing route.
struct SpanRef {
  int route = 0;
  int from = 0;
  int to = 0;
  bool reversed = false;

  int length() const { return to - from + 1; }
};

/// Ordered span list that assembles one produced route. Capped at five
/// spans; pushing a sixth throws std::length_error.
class RoutePlan {
 public:
  static constexpr int kMaxSpans = 5;

  void push(SpanRef s);
  int size() const { return size_; }
  const SpanRef& operator[](int i) const { return spans_[static_cast<std::size_t>(i)]; }
  int node_count() const;

 private:
  std::array<SpanRef, kMaxSpans> spans_{};
  int size_ = 0;
};

/// A move expressed as span reassemblies: the routes it replaces and the
/// routes it produces (same count; produced routes may be empty).
struct MovePlan {
  std::array<int, 2> replaced{};
  std::array<RoutePlan, 2> produced{};
  int count = 0;
};

struct MoveEval {
  bool feasible = false;
  double delta_cost = 0.0;  // meaningful only when feasible
  int concat_calls = 0;
};

/// Constant-time evaluation of a planned move against per-route tables.
MoveEval eval_move(const Instance& inst, std::span<const RouteAttrTable> tables,
                   const MovePlan& plan);

/// Attributes of a single produced route, folding its span list.
/// `concat_calls` is incremented once per join.
SubseqAttr eval_route_plan(const Instance& inst, std::span<const RouteAttrTable> tables,
                           const RoutePlan& plan, int& concat_calls);

}  // namespace mate
