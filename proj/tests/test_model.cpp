#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "mate/model.hpp"
#include "support/gen.hpp"

using namespace mate;

namespace {

Node node(NodeId id, double x, double y, double d = 0, double p = 0, double a = 0, double b = 1000,
          double s = 0) {
  Node n;
  n.id = id;
  n.x = x;
  n.y = y;
  n.delivery = d;
  n.pickup = p;
  n.tw_start = a;
  n.tw_end = b;
  n.service = s;
  return n;
}

// Straight transcription of the schedule and load recursions.
struct Sim {
  double td = 0;
  std::vector<double> arr, dep, load;
  bool tw = true, cap = true;
};

Sim simulate(const Instance& inst, const Route& r) {
  Sim s;
  const std::size_t n = r.size();
  s.arr.resize(n);
  s.dep.resize(n);
  s.load.resize(n);
  double total_delivery = 0;
  for (std::size_t j = 1; j + 1 < n; ++j) total_delivery += inst.node(r[j]).delivery;
  s.dep[0] = inst.node(0).tw_start;
  s.arr[0] = s.dep[0];
  s.load[0] = total_delivery;
  if (s.load[0] > inst.capacity() + 1e-9) s.cap = false;
  for (std::size_t j = 1; j < n; ++j) {
    const Node& h = inst.node(r[j]);
    const Node& g = inst.node(r[j - 1]);
    s.td += inst.dist(r[j - 1], r[j]);
    s.arr[j] = s.dep[j - 1] + inst.time(r[j - 1], r[j]);
    const double start = s.arr[j] < h.tw_start ? h.tw_start : s.arr[j];
    s.dep[j] = start + h.service;
    s.load[j] = s.load[j - 1] - g.delivery + g.pickup;
    if (s.arr[j] > h.tw_end + 1e-9) s.tw = false;
    if (s.load[j] > inst.capacity() + 1e-9) s.cap = false;
  }
  return s;
}

Instance line_instance() {
  // depot at origin, customer 1 at distance 5
  std::vector<Node> nodes{node(0, 0, 0, 0, 0, 0, 100), node(1, 3, 4, 3, 5, 5, 50, 2)};
  return Instance::euclidean("toy", nodes, 2, 10, 2000, 1);
}

}  // namespace

TEST_CASE("two-node toy instance") {
  const Instance inst = line_instance();
  CHECK(inst.num_customers() == 1);
  CHECK(inst.dist(0, 1) == 5.0);
  CHECK(inst.time(0, 1) == 5.0);
  CHECK(inst.dist(1, 0) == 5.0);
}

TEST_CASE("empty route evaluates to zero") {
  const Instance inst = line_instance();
  const RouteEval ev = evaluate_route_direct(inst, Route{0, 0});
  CHECK(ev.td == 0.0);
  CHECK(ev.feasible());
  CHECK(ev.load == std::vector<double>{0, 0});
}

TEST_CASE("single customer route") {
  const Instance inst = line_instance();
  const RouteEval ev = evaluate_route_direct(inst, Route{0, 1, 0});
  CHECK(ev.td == 10.0);
  CHECK(ev.load[1] == 3.0);
  CHECK(ev.load[2] == 5.0);
  CHECK(ev.arr[1] == 5.0);
  CHECK(ev.dep[1] == 7.0);
  CHECK(ev.arr[2] == 12.0);
  CHECK(ev.feasible());
}

TEST_CASE("waiting and lateness") {
  std::vector<Node> nodes{node(0, 0, 0, 0, 0, 10, 100), node(1, 0, 5, 0, 0, 30, 40, 5),
                          node(2, 0, 10, 0, 0, 0, 39, 0)};
  const Instance inst = Instance::euclidean("w", nodes, 1, 10, 0, 1);
  const RouteEval ev = evaluate_route_direct(inst, Route{0, 1, 2, 0});
  CHECK(ev.dep[0] == 10.0);
  CHECK(ev.arr[1] == 15.0);
  CHECK(ev.dep[1] == 35.0);
  CHECK(ev.arr[2] == 40.0);
  CHECK_FALSE(ev.feasible_tw);
  CHECK(ev.feasible_cap);
}

TEST_CASE("direct evaluation matches an independent simulation") {
  Rng rng(11);
  for (int trial = 0; trial < 300; ++trial) {
    testing::GenOptions opt;
    opt.customers = uniform_int(rng, 1, 12);
    opt.routes = uniform_int(rng, 1, 3);
    opt.integral = trial % 2 == 0;
    opt.tw_slack = uniform_real(rng, 0.0, 40.0);
    const auto g = testing::generate(rng, opt);
    // random subsets in random order, feasible or not
    std::vector<NodeId> ids(static_cast<std::size_t>(opt.customers));
    for (int i = 0; i < opt.customers; ++i) ids[static_cast<std::size_t>(i)] = i + 1;
    std::shuffle(ids.begin(), ids.end(), rng);
    Route r{0};
    r.insert(r.end(), ids.begin(), ids.begin() + uniform_int(rng, 0, opt.customers));
    r.push_back(0);
    const RouteEval ev = evaluate_route_direct(g.inst, r);
    const Sim sim = simulate(g.inst, r);
    REQUIRE(ev.arr.size() == r.size());
    for (std::size_t j = 0; j < r.size(); ++j) {
      CHECK(ev.arr[j] == doctest::Approx(sim.arr[j]).epsilon(1e-12));
      CHECK(ev.dep[j] == doctest::Approx(sim.dep[j]).epsilon(1e-12));
      CHECK(ev.load[j] == doctest::Approx(sim.load[j]).epsilon(1e-12));
      CHECK(ev.load[j] >= 0.0);
      if (j > 0) {
        CHECK(ev.arr[j] >= ev.dep[j - 1]);
        CHECK(ev.dep[j] >= ev.dep[j - 1]);
      }
    }
    CHECK(ev.td == doctest::Approx(sim.td).epsilon(1e-12));
    CHECK(ev.td == doctest::Approx(route_distance(g.inst, r)).epsilon(1e-12));
    CHECK(ev.feasible_tw == sim.tw);
    CHECK(ev.feasible_cap == sim.cap);
  }
}

TEST_CASE("total cost") {
  const Instance inst = line_instance();
  CHECK(total_cost(inst, Solution{}) == 0.0);
  const Solution one{{Route{0, 1, 0}}};
  CHECK(total_cost(inst, one) == 2010.0);
  CHECK(total_cost(inst.with_costs(0, 1), one) == 10.0);
  CHECK(total_cost(inst.with_costs(2000, 2), one) == 2020.0);

  // figures of a three-route solution with total distance 348.98
  std::vector<Node> nodes{node(0, 0, 0), node(1, 0, 100), node(2, 0, 50), node(3, 0, 24.49)};
  const Instance lin = Instance::euclidean("lin", nodes, 3, 10, 2000, 1);
  const Solution three{{Route{0, 1, 0}, Route{0, 2, 0}, Route{0, 3, 0}}};
  CHECK(total_distance(lin, three) == doctest::Approx(348.98).epsilon(1e-12));
  CHECK(total_cost(lin, three) == doctest::Approx(6348.98).epsilon(1e-12));
}

TEST_CASE("total cost is additive over routes") {
  Rng rng(5);
  for (int t = 0; t < 50; ++t) {
    testing::GenOptions opt;
    opt.customers = uniform_int(rng, 2, 20);
    opt.routes = uniform_int(rng, 1, 4);
    const auto g = testing::generate(rng, opt);
    Solution s = g.planted;
    const double before = total_cost(g.inst, s);
    const auto k = static_cast<std::size_t>(uniform_int(rng, 0, s.num_routes() - 1));
    const double td = route_distance(g.inst, s.routes[k]);
    s.routes.erase(s.routes.begin() + static_cast<std::ptrdiff_t>(k));
    CHECK(before - total_cost(g.inst, s) == doctest::Approx(2000.0 + td).epsilon(1e-12));
  }
}

TEST_CASE("instance validation") {
  std::vector<Node> ok{node(0, 0, 0), node(1, 1, 1, 5, 5)};
  CHECK_NOTHROW(Instance::euclidean("v", ok, 1, 10, 1, 1));

  auto bad = ok;
  bad[1].tw_start = 2000;
  CHECK_THROWS_AS(Instance::euclidean("v", bad, 1, 10, 1, 1), std::invalid_argument);
  bad = ok;
  bad[1].delivery = 11;
  CHECK_THROWS_AS(Instance::euclidean("v", bad, 1, 10, 1, 1), std::invalid_argument);
  bad = ok;
  bad[0].pickup = 1;
  CHECK_THROWS_AS(Instance::euclidean("v", bad, 1, 10, 1, 1), std::invalid_argument);
  bad = ok;
  bad[1].pickup = -1;
  CHECK_THROWS_AS(Instance::euclidean("v", bad, 1, 10, 1, 1), std::invalid_argument);
  bad = ok;
  bad[1].id = 5;
  CHECK_THROWS_AS(Instance::euclidean("v", bad, 1, 10, 1, 1), std::invalid_argument);

  CHECK_THROWS_AS(Instance::create("m", ok, {0, 1, 1}, {0, 1, 1, 0}, 1, 10, 1, 1),
                  std::invalid_argument);
  CHECK_THROWS_AS(Instance::create("m", ok, {1, 1, 1, 0}, {0, 1, 1, 0}, 1, 10, 1, 1),
                  std::invalid_argument);
  CHECK_THROWS_AS(Instance::create("m", ok, {0, -1, 1, 0}, {0, 1, 1, 0}, 1, 10, 1, 1),
                  std::invalid_argument);
  const Instance m = Instance::create("m", ok, {0, 2, 3, 0}, {0, 4, 5, 0}, 1, 10, 1, 1);
  CHECK(m.dist(0, 1) == 2.0);
  CHECK(m.dist(1, 0) == 3.0);
  CHECK(m.time(0, 1) == 4.0);
}

TEST_CASE("check_solution reports each violation") {
  std::vector<Node> nodes{node(0, 0, 0, 0, 0, 0, 100), node(1, 0, 10, 6, 2, 0, 100),
                          node(2, 0, 20, 6, 2, 0, 25), node(3, 10, 0, 2, 2, 0, 100)};
  const Instance inst = Instance::euclidean("c", nodes, 2, 10, 2000, 1);

  CHECK(check_solution(inst, Solution{{Route{0, 1, 0}, Route{0, 3, 2, 0}}}).has(ViolationKind::TimeWindow));
  CHECK(check_solution(inst, Solution{{Route{0, 2, 0}, Route{0, 1, 3, 0}}}).feasible());
  CHECK(check_solution(inst, Solution{{Route{0, 1, 2, 3, 0}}}).has(ViolationKind::Capacity));

  const auto missing = check_solution(inst, Solution{{Route{0, 2, 0}, Route{0, 1, 0}}});
  REQUIRE(missing.has(ViolationKind::MissingCustomer));
  bool names_three = false;
  for (const auto& v : missing.violations) {
    if (v.kind == ViolationKind::MissingCustomer && v.node == 3) names_three = true;
  }
  CHECK(names_three);

  CHECK(check_solution(inst, Solution{{Route{0, 2, 0}, Route{0, 1, 0}, Route{0, 3, 0}}})
            .has(ViolationKind::FleetBound));
  CHECK(check_solution(inst, Solution{{Route{0, 2, 0}, Route{0, 1, 3, 1, 0}}})
            .has(ViolationKind::DuplicateCustomer));
  CHECK(check_solution(inst, Solution{{Route{0, 2, 0}, Route{1, 3, 0}}}).has(ViolationKind::DepotBracket));
  CHECK(check_solution(inst, Solution{{Route{0, 2, 1, 3, 0}, Route{0, 0}}}).has(ViolationKind::EmptyRoute));
  CHECK(check_solution(inst, Solution{{Route{0, 2, 0}, Route{0, 1, 7, 3, 0}}}).has(ViolationKind::UnknownNode));

  // late return to the depot
  std::vector<Node> far{node(0, 0, 0, 0, 0, 0, 30), node(1, 0, 10, 1, 1, 0, 100, 15)};
  const Instance late = Instance::euclidean("late", far, 1, 10, 2000, 1);
  const auto rep = check_solution(late, Solution{{Route{0, 1, 0}}});
  CHECK(rep.has(ViolationKind::DepotWindow));
  CHECK_FALSE(rep.has(ViolationKind::TimeWindow));
}

TEST_CASE("planted solutions are feasible") {
  Rng rng(99);
  for (int t = 0; t < 100; ++t) {
    testing::GenOptions opt;
    opt.customers = uniform_int(rng, 1, 60);
    opt.routes = uniform_int(rng, 1, 5);
    opt.integral = t % 3 != 0;
    const auto g = testing::generate(rng, opt);
    const auto rep = check_solution(g.inst, g.planted);
    CHECK_MESSAGE(rep.feasible(), (rep.violations.empty() ? "" : rep.violations.front().message));
  }
}
