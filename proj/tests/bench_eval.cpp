// Microbenchmark: table-based move evaluation against apply-and-traverse,
// as a function of route length. Prints CSV to standard output.

#include <chrono>
#include <cstdio>
#include <vector>

#include "mate/search.hpp"
#include "mate/seqeval.hpp"
#include "support/gen.hpp"

using namespace mate;

namespace {

double traverse_delta(const Instance& inst, const Solution& s, const Move& mv, bool& feasible) {
  Solution t = s;
  apply_move(t, mv);
  feasible = true;
  double after = 0;
  for (const Route& r : t.routes) {
    const RouteEval ev = evaluate_route_direct(inst, r);
    feasible = feasible && ev.feasible();
    after += ev.td;
  }
  return after - total_distance(inst, s);
}

}  // namespace

int main() {
  using Clock = std::chrono::steady_clock;
  std::printf("route_length,moves,ns_table,ns_traverse,speedup\n");
  Rng rng(1);
  volatile double sink = 0;
  for (int len = 10; len <= 200; len += 10) {
    testing::GenOptions opt;
    opt.route_lengths = {len, len};
    opt.tw_slack = 1000;
    const auto g = testing::generate(rng, opt);
    std::vector<RouteAttrTable> tables;
    for (const Route& r : g.planted.routes) tables.emplace_back(g.inst, r);
    const std::vector<Move> all = enumerate_moves(g.planted);
    std::vector<Move> moves;
    for (int k = 0; k < 2000; ++k) {
      moves.push_back(all[static_cast<std::size_t>(uniform_int(rng, 0, static_cast<int>(all.size()) - 1))]);
    }
    std::vector<MovePlan> plans;
    for (const Move& mv : moves) plans.push_back(plan_move(g.planted, mv));

    auto t0 = Clock::now();
    for (int rep = 0; rep < 20; ++rep) {
      for (const MovePlan& p : plans) sink = sink + eval_move(g.inst, tables, p).delta_cost;
    }
    const double ns_table =
        std::chrono::duration<double, std::nano>(Clock::now() - t0).count() / (20.0 * static_cast<double>(plans.size()));
    t0 = Clock::now();
    for (const Move& mv : moves) {
      bool f;
      sink = sink + traverse_delta(g.inst, g.planted, mv, f);
    }
    const double ns_trav =
        std::chrono::duration<double, std::nano>(Clock::now() - t0).count() / static_cast<double>(moves.size());
    std::printf("%d,%zu,%.1f,%.1f,%.1f\n", len, moves.size(), ns_table, ns_trav, ns_trav / ns_table);
  }
  return 0;
}
