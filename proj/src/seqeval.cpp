#include "mate/seqeval.hpp"

#include <algorithm>
#include <stdexcept>

namespace mate {

SubseqAttr leaf(const Node& node) {
  SubseqAttr a;
  a.w = 0.0;
  a.c_e = node.delivery;
  a.c_l = node.pickup;
  a.c_h = std::max(node.delivery, node.pickup);
  a.d = node.service;
  a.e = node.tw_start;
  a.l = node.tw_end;
  a.tw_feasible = true;
  a.first = node.id;
  a.last = node.id;
  return a;
}

SubseqAttr concat(const SubseqAttr& a, const SubseqAttr& b, double dist_jk, double time_jk) {
  SubseqAttr r;
  r.w = a.w + b.w + dist_jk;
  r.c_e = a.c_e + b.c_e;
  r.c_l = a.c_l + b.c_l;
  r.c_h = std::max(a.c_h + b.c_e, a.c_l + b.c_h);

  const double delta = a.d + time_jk;
  const double wait = std::max(b.e - delta - a.l, 0.0);
  const double warp = a.e + delta - b.l;
  r.d = a.d + b.d + time_jk + wait;
  r.e = std::max(b.e - delta, a.e) - wait;
  r.l = std::min(b.l - delta, a.l);
  r.tw_feasible = a.tw_feasible && b.tw_feasible && warp <= kFeasEps;
  r.first = a.first;
  r.last = b.last;
  return r;
}

SubseqAttr fold_sequence(const Instance& inst, std::span<const NodeId> nodes) {
  if (nodes.empty()) return {};
  SubseqAttr acc = leaf(inst.node(nodes.front()));
  for (std::size_t i = 1; i < nodes.size(); ++i) acc = concat(inst, acc, leaf(inst.node(nodes[i])));
  return acc;
}

RouteAttrTable::RouteAttrTable(const Instance& inst, const Route& route)
    : n_(static_cast<int>(route.size())) {
  const auto n = static_cast<std::size_t>(n_);
  forward_.resize(n * (n + 1) / 2);
  backward_.resize(n * (n + 1) / 2);
  for (int p = 0; p < n_; ++p) {
    const SubseqAttr lp = leaf(inst.node(route[static_cast<std::size_t>(p)]));
    forward_[slot(p, p)] = lp;
    backward_[slot(p, p)] = lp;
    for (int q = p + 1; q < n_; ++q) {
      const SubseqAttr lq = leaf(inst.node(route[static_cast<std::size_t>(q)]));
      forward_[slot(p, q)] = concat(inst, forward_[slot(p, q - 1)], lq);
      backward_[slot(p, q)] = concat(inst, lq, backward_[slot(p, q - 1)]);
    }
  }
}

RouteAttrTable build_table(const Instance& inst, const Route& route) {
  return RouteAttrTable(inst, route);
}

void RoutePlan::push(SpanRef s) {
  if (size_ >= kMaxSpans) throw std::length_error("route plan exceeds five spans");
  spans_[static_cast<std::size_t>(size_++)] = s;
}

int RoutePlan::node_count() const {
  int n = 0;
  for (int i = 0; i < size_; ++i) n += spans_[static_cast<std::size_t>(i)].length();
  return n;
}

namespace {

const SubseqAttr& span_attr(std::span<const RouteAttrTable> tables, const SpanRef& s) {
  const RouteAttrTable& t = tables[static_cast<std::size_t>(s.route)];
  return s.reversed ? t.backward(s.from, s.to) : t.forward(s.from, s.to);
}

}  // namespace

SubseqAttr eval_route_plan(const Instance& inst, std::span<const RouteAttrTable> tables,
                           const RoutePlan& plan, int& concat_calls) {
  if (plan.size() == 0) return {};
  SubseqAttr acc = span_attr(tables, plan[0]);
  for (int i = 1; i < plan.size(); ++i) {
    // Infeasibility is monotone under concatenation, so stop at the first failure.
    if (!acc.feasible(inst.capacity())) return acc;
    acc = concat(inst, acc, span_attr(tables, plan[i]));
    ++concat_calls;
  }
  return acc;
}

MoveEval eval_move(const Instance& inst, std::span<const RouteAttrTable> tables,
                   const MovePlan& plan) {
  MoveEval out;
  double old_w = 0.0;
  double new_w = 0.0;
  int route_delta = 0;
  for (int k = 0; k < plan.count; ++k) {
    const RouteAttrTable& old = tables[static_cast<std::size_t>(plan.replaced[static_cast<std::size_t>(k)])];
    old_w += old.whole().w;
    if (old.size() > 2) --route_delta;

    const RoutePlan& rp = plan.produced[static_cast<std::size_t>(k)];
    const SubseqAttr attr = eval_route_plan(inst, tables, rp, out.concat_calls);
    if (!attr.feasible(inst.capacity())) {
      out.feasible = false;
      return out;
    }
    new_w += attr.w;
    if (rp.node_count() > 2) ++route_delta;
  }
  out.feasible = true;
  out.delta_cost = inst.unit_cost() * (new_w - old_w) + inst.dispatch_cost() * route_delta;
  return out;
}

}  // namespace mate
