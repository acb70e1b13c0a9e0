#include "mate/memetic.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <numeric>
#include <stdexcept>
#include <string>

#include "mate/construct.hpp"

namespace mate {

namespace {

constexpr double kImproveEps = 1e-9;

int int_sqrt(int n) {
  int r = static_cast<int>(std::lround(std::sqrt(static_cast<double>(n))));
  while (r * r > n) --r;
  while ((r + 1) * (r + 1) <= n) ++r;
  return r;
}

}  // namespace

int default_population_size(int num_customers) { return num_customers <= 100 ? 16 : 36; }

bool is_valid_population_size(int n) {
  if (n < 4) return false;
  const int r = int_sqrt(n);
  return r * r == n;
}

std::vector<Solution> initialize_population(const Instance& inst, int population) {
  if (!is_valid_population_size(population)) {
    throw std::invalid_argument("population size must be a perfect square >= 4, got " +
                                std::to_string(population));
  }
  const int side = int_sqrt(population);
  const double step = 1.0 / (side - 1);
  std::vector<Solution> pop;
  pop.reserve(static_cast<std::size_t>(population));
  for (int i = 0; i < side; ++i) {
    for (int j = 0; j < side; ++j) {
      pop.push_back(rcrs_construct(inst, RcrsWeights{step * i, step * j}));
    }
  }
  return pop;
}

Solution rari_crossover(const Instance& inst, const Solution& p1, const Solution& p2, Rng& rng) {
  const int m = inst.num_customers();
  std::vector<char> used(static_cast<std::size_t>(m) + 1, 0);
  Solution child;

  auto conflict_free = [&used](const Route& r) {
    for (std::size_t p = 1; p + 1 < r.size(); ++p) {
      if (used[static_cast<std::size_t>(r[p])]) return false;
    }
    return true;
  };

  const Solution* donors[2] = {&p1, &p2};
  std::vector<int> candidates;
  bool progressed = true;
  while (progressed && child.num_routes() < inst.fleet_size()) {
    progressed = false;
    for (const Solution* donor : donors) {
      if (child.num_routes() >= inst.fleet_size()) break;
      candidates.clear();
      for (int r = 0; r < donor->num_routes(); ++r) {
        if (conflict_free(donor->routes[static_cast<std::size_t>(r)])) candidates.push_back(r);
      }
      if (candidates.empty()) continue;
      const int pick = candidates[static_cast<std::size_t>(
          uniform_int(rng, 0, static_cast<int>(candidates.size()) - 1))];
      const Route& r = donor->routes[static_cast<std::size_t>(pick)];
      child.routes.push_back(r);
      for (std::size_t p = 1; p + 1 < r.size(); ++p) used[static_cast<std::size_t>(r[p])] = 1;
      progressed = true;
    }
  }

  std::vector<NodeId> rest;
  for (NodeId v = 1; v <= m; ++v) {
    if (!used[static_cast<std::size_t>(v)]) rest.push_back(v);
  }
  try {
    return regret_insert(inst, std::move(child), std::move(rest));
  } catch (const InsertionImpossible&) {
  }
  try {
    const double lambda = uniform_real(rng, 0.0, 1.0);
    const double gamma = uniform_real(rng, 0.0, 1.0);
    return rcrs_construct(inst, RcrsWeights{lambda, gamma});
  } catch (const std::runtime_error&) {
    return p1;
  }
}

RunReport run(const Instance& inst, const MateParams& params, const GenerationObserver& observer) {
  using Clock = std::chrono::steady_clock;
  const auto start = Clock::now();
  auto elapsed = [&start] { return std::chrono::duration<double>(Clock::now() - start).count(); };
  auto out_of_time = [&] { return params.time_limit && elapsed() >= *params.time_limit; };

  if (params.g_max < 1) throw std::invalid_argument("g_max must be at least 1");
  const int n = params.population > 0 ? params.population
                                      : default_population_size(inst.num_customers());
  EscapeParams esc = params.escape;
  if (params.derive_eta) esc.corr_eta = distance_time_ratio(inst);

  Rng rng(params.seed);
  std::vector<Solution> pop = initialize_population(inst, n);
  std::vector<double> cost(pop.size());
  for (std::size_t i = 0; i < pop.size(); ++i) cost[i] = total_cost(inst, pop[i]);

  RunReport rep;
  auto best_index = [&cost] {
    return static_cast<std::size_t>(std::min_element(cost.begin(), cost.end()) - cost.begin());
  };
  std::size_t bi = best_index();
  rep.best = pop[bi];
  rep.best_tc = cost[bi];

  std::vector<int> perm(static_cast<std::size_t>(n));
  int stall = 0;
  while (stall < params.g_max) {
    if (out_of_time()) {
      rep.hit_time_limit = true;
      break;
    }
    std::iota(perm.begin(), perm.end(), 0);
    std::shuffle(perm.begin(), perm.end(), rng);
    bool cut = false;
    for (int i = 0; i < n; ++i) {
      const auto a = static_cast<std::size_t>(perm[static_cast<std::size_t>(i)]);
      const auto b = static_cast<std::size_t>(perm[static_cast<std::size_t>((i + 1) % n)]);
      Solution child = rari_crossover(inst, pop[a], pop[b], rng);
      child = local_search(inst, esc, std::move(child), rng);
      const double c = total_cost(inst, child);
      if (c < cost[a] - kImproveEps) {
        pop[a] = std::move(child);
        cost[a] = c;
      }
      if (out_of_time()) {
        cut = true;
        break;
      }
    }
    ++rep.generations;
    bi = best_index();
    if (cost[bi] < rep.best_tc - kImproveEps) {
      rep.best = pop[bi];
      rep.best_tc = cost[bi];
      stall = 0;
    } else {
      ++stall;
    }
    rep.trace.push_back(rep.best_tc);
    if (observer) observer(rep.generations, pop);
    if (cut) {
      rep.hit_time_limit = true;
      break;
    }
  }

  rep.best_nv = rep.best.num_routes();
  rep.best_td = total_distance(inst, rep.best);
  rep.seconds = elapsed();
  return rep;
}

}  // namespace mate
