#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <span>
#include <vector>

#include "mate/model.hpp"
#include "mate/rng.hpp"
#include "mate/search.hpp"

namespace mate {

struct MateParams {
  int population = 0;  // 0: 16 when M <= 100, else 36
  int g_max = 50;
  EscapeParams escape{};
  bool derive_eta = true;  // replace escape.corr_eta by distance_time_ratio(inst)
  std::uint64_t seed = 1;
  std::optional<double> time_limit;  // seconds
};

struct RunReport {
  Solution best;
  double best_tc = 0.0;
  int best_nv = 0;
  double best_td = 0.0;
  int generations = 0;
  double seconds = 0.0;
  bool hit_time_limit = false;
  std::vector<double> trace;  // best TC after each generation
};

/// Called after every generation with the current population.
using GenerationObserver = std::function<void(int generation, std::span<const Solution> population)>;

int default_population_size(int num_customers);
bool is_valid_population_size(int n);

/// One RCRS construction per (lambda, gamma) grid point, in grid order.
std::vector<Solution> initialize_population(const Instance& inst, int population);

/// Route inheritance from both parents, completed by regret insertion.
Solution rari_crossover(const Instance& inst, const Solution& p1, const Solution& p2, Rng& rng);

RunReport run(const Instance& inst, const MateParams& params,
              const GenerationObserver& observer = {});

}  // namespace mate
