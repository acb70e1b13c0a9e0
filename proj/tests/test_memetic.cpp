#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>
#include <numeric>
#include <stdexcept>

#include "mate/construct.hpp"
#include "mate/memetic.hpp"
#include "support/gen.hpp"

using namespace mate;

namespace {

testing::Generated random_case(Rng& rng, int lo, int hi) {
  testing::GenOptions opt;
  opt.customers = uniform_int(rng, lo, hi);
  opt.routes = uniform_int(rng, 1, 4);
  opt.tw_slack = uniform_real(rng, 10.0, 80.0);
  opt.spare_vehicles = 3;
  opt.integral = false;
  return testing::generate(rng, opt);
}

std::vector<Route> sorted_routes(const Solution& s) {
  std::vector<Route> r = s.routes;
  std::sort(r.begin(), r.end());
  return r;
}

}  // namespace

TEST_CASE("population size rules") {
  CHECK(default_population_size(10) == 16);
  CHECK(default_population_size(100) == 16);
  CHECK(default_population_size(101) == 36);
  for (int n : {4, 9, 16, 25, 36, 49, 64}) CHECK(is_valid_population_size(n));
  for (int n : {-4, 0, 1, 2, 3, 8, 15, 17, 35}) CHECK_FALSE(is_valid_population_size(n));
}

TEST_CASE("grid initialisation") {
  Rng rng(61);
  const auto g = random_case(rng, 10, 20);
  const auto pop16 = initialize_population(g.inst, 16);
  REQUIRE(pop16.size() == 16);
  const double w[] = {0.0, 1.0 / 3.0, 2.0 / 3.0, 1.0};
  for (int i = 0; i < 4; ++i) {
    for (int j = 0; j < 4; ++j) {
      CHECK(pop16[static_cast<std::size_t>(i * 4 + j)] == rcrs_construct(g.inst, RcrsWeights{w[i], w[j]}));
    }
  }
  const auto pop4 = initialize_population(g.inst, 4);
  CHECK(pop4[0] == rcrs_construct(g.inst, RcrsWeights{0, 0}));
  CHECK(pop4[1] == rcrs_construct(g.inst, RcrsWeights{0, 1}));
  CHECK(pop4[2] == rcrs_construct(g.inst, RcrsWeights{1, 0}));
  CHECK(pop4[3] == rcrs_construct(g.inst, RcrsWeights{1, 1}));
  for (const Solution& s : pop16) CHECK(check_solution(g.inst, s).feasible());
  CHECK_THROWS_AS(initialize_population(g.inst, 15), std::invalid_argument);
}

TEST_CASE("crossover of a solution with itself") {
  Rng rng(62);
  for (int t = 0; t < 50; ++t) {
    const auto g = random_case(rng, 3, 25);
    Rng r(static_cast<std::uint64_t>(t));
    const Solution child = rari_crossover(g.inst, g.planted, g.planted, r);
    CHECK(sorted_routes(child) == sorted_routes(g.planted));
  }
}

TEST_CASE("crossover children are complete and feasible") {
  Rng rng(63);
  for (int t = 0; t < 100; ++t) {
    const auto g = random_case(rng, 6, t < 50 ? 6 : 30);
    Rng r(static_cast<std::uint64_t>(t));
    const auto p1 = testing::random_solution(g.inst, r);
    const auto p2 = testing::random_solution(g.inst, r);
    if (!p1 || !p2) continue;
    const Solution child = rari_crossover(g.inst, *p1, *p2, r);
    CHECK(check_solution(g.inst, child).feasible());
    CHECK(child.num_routes() <= g.inst.fleet_size());
  }
}

TEST_CASE("run invariants") {
  Rng rng(64);
  for (int t = 0; t < 8; ++t) {
    const auto g = random_case(rng, 8, 30);
    MateParams p;
    p.g_max = 8;
    p.population = 9;
    p.seed = static_cast<std::uint64_t>(t) + 1;
    std::vector<double> means;
    bool all_feasible = true;
    const RunReport rep = run(g.inst, p, [&](int, std::span<const Solution> pop) {
      double sum = 0;
      for (const Solution& s : pop) {
        if (!check_solution(g.inst, s).feasible()) all_feasible = false;
        sum += total_cost(g.inst, s);
      }
      means.push_back(sum / static_cast<double>(pop.size()));
    });
    CHECK(all_feasible);
    CHECK(check_solution(g.inst, rep.best).feasible());
    CHECK(rep.best_tc == doctest::Approx(total_cost(g.inst, rep.best)));
    CHECK(rep.best_nv == rep.best.num_routes());
    CHECK(rep.best_td == doctest::Approx(total_distance(g.inst, rep.best)));
    CHECK(static_cast<int>(rep.trace.size()) == rep.generations);
    CHECK(rep.generations >= p.g_max);
    CHECK(std::is_sorted(rep.trace.rbegin(), rep.trace.rend()));
    CHECK(rep.trace.back() == rep.best_tc);
    for (std::size_t i = 1; i < means.size(); ++i) CHECK(means[i] <= means[i - 1] + 1e-9);
    CHECK_FALSE(rep.hit_time_limit);

    const RunReport again = run(g.inst, p);
    CHECK(again.best == rep.best);
    CHECK(again.trace == rep.trace);
  }
}

TEST_CASE("empty instance") {
  Node depot;
  depot.x = 0;
  depot.y = 0;
  depot.tw_end = 100;
  const Instance inst = Instance::euclidean("empty", {depot}, 1, 10, 2000, 1);
  MateParams p;
  p.g_max = 5;
  const RunReport rep = run(inst, p);
  CHECK(rep.best.num_routes() == 0);
  CHECK(rep.best_tc == 0.0);
  CHECK(rep.generations == 5);
}

TEST_CASE("time limit") {
  Rng rng(65);
  testing::GenOptions opt;
  opt.customers = 60;
  opt.routes = 5;
  const auto g = testing::generate(rng, opt);
  MateParams p;
  p.g_max = 1000000;
  p.time_limit = 0.2;
  const RunReport rep = run(g.inst, p);
  CHECK(rep.hit_time_limit);
  CHECK(rep.seconds < 5.0);
  CHECK(check_solution(g.inst, rep.best).feasible());
}

TEST_CASE("invalid parameters") {
  Rng rng(66);
  const auto g = random_case(rng, 5, 5);
  MateParams p;
  p.population = 10;
  CHECK_THROWS_AS(run(g.inst, p), std::invalid_argument);
  p.population = 4;
  p.g_max = 0;
  CHECK_THROWS_AS(run(g.inst, p), std::invalid_argument);
}
