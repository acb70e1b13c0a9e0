#include "mate/search.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "mate/construct.hpp"

namespace mate {

namespace {

constexpr double kImproveEps = 1e-9;

}  // namespace

const char* to_string(MoveKind kind) {
  switch (kind) {
    case MoveKind::TwoOpt: return "2-opt";
    case MoveKind::TwoOptStar: return "2-opt*";
    case MoveKind::OrOpt: return "or-opt";
    case MoveKind::Swap: return "swap";
  }
  return "unknown";
}

std::vector<Move> enumerate_moves(const Solution& s) {
  std::vector<Move> out;
  for_each_move(s, [&out](const Move& m) { out.push_back(m); });
  return out;
}

MovePlan plan_move(const Solution& s, const Move& mv) {
  auto n_of = [&s](int r) { return static_cast<int>(s.routes[static_cast<std::size_t>(r)].size()); };
  const int a = mv.route_a;
  const int b = mv.route_b;
  const int na = n_of(a);
  const int nb = n_of(b);

  MovePlan plan;
  auto fwd = [](int r, int from, int to) { return SpanRef{r, from, to, false}; };

  switch (mv.kind) {
    case MoveKind::TwoOpt: {
      const int i = mv.pos_a;
      plan.count = 1;
      plan.replaced[0] = a;
      RoutePlan& p = plan.produced[0];
      p.push(fwd(a, 0, i - 1));
      p.push(SpanRef{a, i, i + 1, true});
      p.push(fwd(a, i + 2, na - 1));
      break;
    }
    case MoveKind::TwoOptStar: {
      const int i = mv.pos_a;
      const int j = mv.pos_b;
      plan.count = 2;
      plan.replaced = {a, b};
      plan.produced[0].push(fwd(a, 0, i));
      plan.produced[0].push(fwd(b, j + 1, nb - 1));
      plan.produced[1].push(fwd(b, 0, j));
      plan.produced[1].push(fwd(a, i + 1, na - 1));
      break;
    }
    case MoveKind::OrOpt: {
      const int i = mv.pos_a;
      const int last = i + mv.len_a - 1;
      const int j = mv.pos_b;
      const SpanRef seg = fwd(a, i, last);
      if (a != b) {
        plan.count = 2;
        plan.replaced = {a, b};
        plan.produced[0].push(fwd(a, 0, i - 1));
        plan.produced[0].push(fwd(a, last + 1, na - 1));
        plan.produced[1].push(fwd(b, 0, j));
        plan.produced[1].push(seg);
        plan.produced[1].push(fwd(b, j + 1, nb - 1));
      } else {
        plan.count = 1;
        plan.replaced[0] = a;
        RoutePlan& p = plan.produced[0];
        if (j < i) {
          p.push(fwd(a, 0, j));
          p.push(seg);
          p.push(fwd(a, j + 1, i - 1));
          p.push(fwd(a, last + 1, na - 1));
        } else {
          p.push(fwd(a, 0, i - 1));
          p.push(fwd(a, last + 1, j));
          p.push(seg);
          p.push(fwd(a, j + 1, na - 1));
        }
      }
      break;
    }
    case MoveKind::Swap: {
      const int i = mv.pos_a;
      const int j = mv.pos_b;
      const SpanRef seg_a = fwd(a, i, i + mv.len_a - 1);
      const SpanRef seg_b = fwd(b, j, j + mv.len_b - 1);
      if (a != b) {
        plan.count = 2;
        plan.replaced = {a, b};
        plan.produced[0].push(fwd(a, 0, i - 1));
        plan.produced[0].push(seg_b);
        plan.produced[0].push(fwd(a, seg_a.to + 1, na - 1));
        plan.produced[1].push(fwd(b, 0, j - 1));
        plan.produced[1].push(seg_a);
        plan.produced[1].push(fwd(b, seg_b.to + 1, nb - 1));
      } else {
        plan.count = 1;
        plan.replaced[0] = a;
        RoutePlan& p = plan.produced[0];
        p.push(fwd(a, 0, i - 1));
        p.push(seg_b);
        if (seg_a.to + 1 <= j - 1) p.push(fwd(a, seg_a.to + 1, j - 1));
        p.push(seg_a);
        p.push(fwd(a, seg_b.to + 1, na - 1));
      }
      break;
    }
  }
  return plan;
}

void remove_empty_routes(Solution& s) {
  std::erase_if(s.routes, [](const Route& r) { return r.size() <= 2; });
}

namespace {

Route slice(const Route& r, int from, int to) {
  if (from > to) return {};
  return Route(r.begin() + from, r.begin() + to + 1);
}

void append(Route& dst, const Route& src) { dst.insert(dst.end(), src.begin(), src.end()); }

// Leaves emptied routes in place so indices stay stable.
void apply_in_place(Solution& s, const Move& mv) {
  Route& ra = s.routes[static_cast<std::size_t>(mv.route_a)];
  Route& rb = s.routes[static_cast<std::size_t>(mv.route_b)];
  switch (mv.kind) {
    case MoveKind::TwoOpt:
      std::swap(ra[static_cast<std::size_t>(mv.pos_a)], ra[static_cast<std::size_t>(mv.pos_a) + 1]);
      break;
    case MoveKind::TwoOptStar: {
      Route head_a = slice(ra, 0, mv.pos_a);
      Route tail_a = slice(ra, mv.pos_a + 1, static_cast<int>(ra.size()) - 1);
      Route head_b = slice(rb, 0, mv.pos_b);
      Route tail_b = slice(rb, mv.pos_b + 1, static_cast<int>(rb.size()) - 1);
      append(head_a, tail_b);
      append(head_b, tail_a);
      ra = std::move(head_a);
      rb = std::move(head_b);
      break;
    }
    case MoveKind::OrOpt: {
      const auto first = ra.begin() + mv.pos_a;
      Route seg(first, first + mv.len_a);
      ra.erase(first, first + mv.len_a);
      int at = mv.pos_b + 1;
      if (mv.route_a == mv.route_b && mv.pos_b > mv.pos_a) at -= mv.len_a;
      rb.insert(rb.begin() + at, seg.begin(), seg.end());
      break;
    }
    case MoveKind::Swap: {
      Route seg_a(ra.begin() + mv.pos_a, ra.begin() + mv.pos_a + mv.len_a);
      Route seg_b(rb.begin() + mv.pos_b, rb.begin() + mv.pos_b + mv.len_b);
      if (mv.route_a != mv.route_b) {
        ra.erase(ra.begin() + mv.pos_a, ra.begin() + mv.pos_a + mv.len_a);
        ra.insert(ra.begin() + mv.pos_a, seg_b.begin(), seg_b.end());
        rb.erase(rb.begin() + mv.pos_b, rb.begin() + mv.pos_b + mv.len_b);
        rb.insert(rb.begin() + mv.pos_b, seg_a.begin(), seg_a.end());
      } else {
        // Replace the later segment first so earlier indices stay valid.
        ra.erase(ra.begin() + mv.pos_b, ra.begin() + mv.pos_b + mv.len_b);
        ra.insert(ra.begin() + mv.pos_b, seg_a.begin(), seg_a.end());
        ra.erase(ra.begin() + mv.pos_a, ra.begin() + mv.pos_a + mv.len_a);
        ra.insert(ra.begin() + mv.pos_a, seg_b.begin(), seg_b.end());
      }
      break;
    }
  }
}

}  // namespace

void apply_move(Solution& s, const Move& mv) {
  apply_in_place(s, mv);
  remove_empty_routes(s);
}

Solution find_local_optimum(const Instance& inst, Solution s) {
  std::vector<RouteAttrTable> tables;
  tables.reserve(s.routes.size());
  for (const Route& r : s.routes) tables.emplace_back(inst, r);

  for (;;) {
    double best_delta = -kImproveEps;
    Move best{};
    bool found = false;
    for_each_move(s, [&](const Move& mv) {
      const MoveEval ev = eval_move(inst, tables, plan_move(s, mv));
      // ties within kImproveEps keep the earlier move
      if (ev.feasible && ev.delta_cost < best_delta - (found ? kImproveEps : 0.0)) {
        best_delta = ev.delta_cost;
        best = mv;
        found = true;
      }
    });
    if (!found) break;

    apply_in_place(s, best);
    tables[static_cast<std::size_t>(best.route_a)] =
        RouteAttrTable(inst, s.routes[static_cast<std::size_t>(best.route_a)]);
    if (best.route_b != best.route_a) {
      tables[static_cast<std::size_t>(best.route_b)] =
          RouteAttrTable(inst, s.routes[static_cast<std::size_t>(best.route_b)]);
    }
    for (std::size_t r = s.routes.size(); r-- > 0;) {
      if (s.routes[r].size() <= 2) {
        s.routes.erase(s.routes.begin() + static_cast<std::ptrdiff_t>(r));
        tables.erase(tables.begin() + static_cast<std::ptrdiff_t>(r));
      }
    }
  }
  return s;
}

double distance_time_ratio(const Instance& inst) {
  const int n = inst.num_nodes();
  double sd = 0.0;
  double st = 0.0;
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) {
      if (i == j) continue;
      sd += inst.dist(i, j);
      st += inst.time(i, j);
    }
  }
  if (st <= 0.0 || sd <= 0.0) return 1.0;
  return sd / st;
}

double correlation(const Instance& inst, const EscapeParams& esc, NodeId i, NodeId j) {
  const Node& ni = inst.node(i);
  const Node& nj = inst.node(j);
  const double t = inst.time(i, j);
  const double wait = std::max(nj.tw_start - t - ni.service - ni.tw_end, 0.0);
  const double violation = std::max(ni.tw_start + ni.service + t - nj.tw_end, 0.0);
  return inst.dist(i, j) + esc.corr_eta * (wait + esc.corr_penalty * violation);
}

int draw_removal_count(int num_customers, const EscapeParams& esc, Rng& rng) {
  if (num_customers <= 0) return 0;
  const int lo = static_cast<int>(std::ceil(esc.omega1 * num_customers - 1e-9));
  const int hi = static_cast<int>(std::floor(esc.omega2 * num_customers + 1e-9));
  int q;
  if (lo <= hi) {
    q = uniform_int(rng, lo, hi);
  } else {
    q = std::max(1, static_cast<int>(std::lround(esc.omega1 * num_customers)));
  }
  return std::clamp(q, 1, num_customers);
}

Removal shaw_removal(const Instance& inst, const EscapeParams& esc, const Solution& s, int q,
                     Rng& rng) {
  std::vector<NodeId> present;
  for (const Route& r : s.routes) {
    for (std::size_t p = 1; p + 1 < r.size(); ++p) present.push_back(r[p]);
  }
  std::sort(present.begin(), present.end());
  q = std::clamp(q, 0, static_cast<int>(present.size()));

  Removal out;
  out.partial = s;
  if (q == 0) return out;

  std::vector<char> gone(static_cast<std::size_t>(inst.num_nodes()), 0);
  NodeId last = present[static_cast<std::size_t>(uniform_int(rng, 0, static_cast<int>(present.size()) - 1))];
  gone[static_cast<std::size_t>(last)] = 1;
  out.removed.push_back(last);

  while (static_cast<int>(out.removed.size()) < q) {
    NodeId c1 = -1;
    NodeId c2 = -1;
    double k1 = std::numeric_limits<double>::infinity();
    double k2 = k1;
    for (NodeId v : present) {
      if (gone[static_cast<std::size_t>(v)]) continue;
      const double c = correlation(inst, esc, last, v);
      if (c < k1) {
        c2 = c1;
        k2 = k1;
        c1 = v;
        k1 = c;
      } else if (c < k2) {
        c2 = v;
        k2 = c;
      }
    }
    NodeId chosen = c1;
    if (c2 >= 0) {
      const double w1 = 1.0 / std::max(k1, 1e-9);
      const double w2 = 1.0 / std::max(k2, 1e-9);
      if (uniform_real(rng, 0.0, w1 + w2) >= w1) chosen = c2;
    }
    gone[static_cast<std::size_t>(chosen)] = 1;
    out.removed.push_back(chosen);
    last = chosen;
  }

  for (Route& r : out.partial.routes) {
    std::erase_if(r, [&gone](NodeId v) { return v != kDepot && gone[static_cast<std::size_t>(v)]; });
  }
  remove_empty_routes(out.partial);
  return out;
}

Solution local_search(const Instance& inst, const EscapeParams& esc, Solution s, Rng& rng) {
  Solution x = find_local_optimum(inst, std::move(s));
  const int m = inst.num_customers();
  if (m == 0) return x;
  double x_cost = total_cost(inst, x);
  for (;;) {
    const int q = draw_removal_count(m, esc, rng);
    Removal rem = shaw_removal(inst, esc, x, q, rng);
    const bool partial_ok = std::all_of(rem.partial.routes.begin(), rem.partial.routes.end(),
                                        [&inst](const Route& r) {
                                          return evaluate_route_direct(inst, r).feasible();
                                        });
    if (!partial_ok) break;
    Solution cand;
    try {
      cand = regret_insert(inst, std::move(rem.partial), std::move(rem.removed));
    } catch (const InsertionImpossible&) {
      break;
    }
    cand = find_local_optimum(inst, std::move(cand));
    const double cand_cost = total_cost(inst, cand);
    if (cand_cost < x_cost - kImproveEps) {
      x = std::move(cand);
      x_cost = cand_cost;
    } else {
      break;
    }
  }
  return x;
}

}  // namespace mate
