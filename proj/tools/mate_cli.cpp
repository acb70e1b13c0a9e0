#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdint>
#include <filesystem>
#include <iostream>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "mate/construct.hpp"
#include "mate/io.hpp"
#include "mate/memetic.hpp"
#include "mate/model.hpp"

namespace fs = std::filesystem;

namespace {

constexpr const char* kVersion = "0.1.0";

enum Exit : int { kOk = 0, kUsage = 1, kInfeasible = 2, kVerifyFailed = 3 };

struct InstanceArgs {
  std::string path;
  mate::io::InstanceFormat format = mate::io::InstanceFormat::Wc;
  mate::io::DistanceRounding rounding = mate::io::DistanceRounding::Exact;
  std::optional<double> u1;
  std::optional<double> u2;
};

struct SearchArgs {
  std::optional<std::uint64_t> seed;
  int pop = 0;
  int gmax = 50;
  double omega1 = 0.2;
  double omega2 = 0.4;
  std::optional<double> time_limit;
};

void add_instance_flags(CLI::App* cmd, InstanceArgs& a, bool with_path) {
  if (with_path) cmd->add_option("--instance", a.path, "instance file")->required();
  const std::map<std::string, mate::io::InstanceFormat> formats{
      {"wc", mate::io::InstanceFormat::Wc}, {"canonical", mate::io::InstanceFormat::Canonical}};
  cmd->add_option("--format", a.format, "instance format: wc or canonical")
      ->transform(CLI::CheckedTransformer(formats))
      ->option_text("wc|canonical");
  const std::map<std::string, mate::io::DistanceRounding> roundings{
      {"exact", mate::io::DistanceRounding::Exact},
      {"trunc1", mate::io::DistanceRounding::Truncate1},
      {"round2", mate::io::DistanceRounding::Round2}};
  cmd->add_option("--rounding", a.rounding, "wc distance rounding: exact, trunc1 or round2")
      ->transform(CLI::CheckedTransformer(roundings))
      ->option_text("exact|trunc1|round2");
  cmd->add_option("--u1", a.u1, "cost per vehicle (default 2000)");
  cmd->add_option("--u2", a.u2, "cost per distance unit (default 1)");
}

void add_search_flags(CLI::App* cmd, SearchArgs& a, bool with_seed) {
  if (with_seed) cmd->add_option("--seed", a.seed, "random seed (default 1)");
  cmd->add_option("--pop", a.pop, "population size, a perfect square >= 4 (default by size)")
      ->check([](const std::string& v) -> std::string {
        int n = 0;
        try {
          n = std::stoi(v);
        } catch (const std::exception&) {
          return "not an integer";
        }
        return mate::is_valid_population_size(n) ? "" : "population must be a perfect square >= 4";
      });
  cmd->add_option("--gmax", a.gmax, "generations without improvement before stopping")
      ->check(CLI::Range(1, 1'000'000));
  cmd->add_option("--omega1", a.omega1, "lower removal fraction")->check(CLI::Range(0.0, 1.0));
  cmd->add_option("--omega2", a.omega2, "upper removal fraction")->check(CLI::Range(0.0, 1.0));
  cmd->add_option("--time-limit", a.time_limit, "wall-clock limit in seconds")
      ->check(CLI::PositiveNumber);
}

mate::Instance load(const InstanceArgs& a, const fs::path& path) {
  mate::io::WcOptions opts;
  opts.rounding = a.rounding;
  if (a.u1) opts.dispatch_cost = *a.u1;
  if (a.u2) opts.unit_cost = *a.u2;
  mate::Instance inst = mate::io::load_instance(path, a.format, opts);
  if (a.format == mate::io::InstanceFormat::Canonical && (a.u1 || a.u2)) {
    inst = inst.with_costs(a.u1.value_or(inst.dispatch_cost()), a.u2.value_or(inst.unit_cost()));
  }
  return inst;
}

mate::MateParams make_params(const SearchArgs& a, std::uint64_t seed) {
  mate::MateParams p;
  p.population = a.pop;
  p.g_max = a.gmax;
  p.escape.omega1 = a.omega1;
  p.escape.omega2 = a.omega2;
  p.seed = seed;
  p.time_limit = a.time_limit;
  return p;
}

std::string fmt(double v) { return mate::io::format_number(v); }

// ---------------------------------------------------------------------------

int cmd_solve(const InstanceArgs& ia, const SearchArgs& sa, const std::string& out, bool json) {
  if (sa.omega1 > sa.omega2) {
    std::cerr << "error: --omega1 must not exceed --omega2\n";
    return kUsage;
  }
  mate::Instance inst;
  try {
    inst = load(ia, ia.path);
  } catch (const std::exception& e) {
    std::cerr << "error: " << ia.path << ": " << e.what() << "\n";
    return kUsage;
  }
  const std::uint64_t seed = sa.seed.value_or(1);
  mate::RunReport rep;
  try {
    rep = mate::run(inst, make_params(sa, seed));
  } catch (const mate::FleetExhausted& e) {
    std::cerr << "error: construction failed: " << e.what() << "\n";
    return kInfeasible;
  } catch (const mate::InsertionImpossible& e) {
    std::cerr << "error: construction failed: " << e.what() << "\n";
    return kInfeasible;
  } catch (const std::invalid_argument& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kUsage;
  }

  const std::string text = mate::io::write_solution(inst, rep.best, {seed, kVersion});
  if (!out.empty()) {
    try {
      mate::io::write_file(out, text);
    } catch (const std::exception& e) {
      std::cerr << "error: " << e.what() << "\n";
      return kUsage;
    }
  }

  const std::string name = inst.name().empty() ? "unnamed" : inst.name();
  if (json) {
    nlohmann::json j;
    j["instance"] = name;
    j["customers"] = inst.num_customers();
    j["nv"] = rep.best_nv;
    j["td"] = rep.best_td;
    j["tc"] = rep.best_tc;
    j["generations"] = rep.generations;
    j["seconds"] = rep.seconds;
    j["seed"] = seed;
    j["hit_time_limit"] = rep.hit_time_limit;
    nlohmann::json routes = nlohmann::json::array();
    for (const mate::Route& r : rep.best.routes) {
      routes.push_back(std::vector<mate::NodeId>(r.begin() + 1, r.end() - 1));
    }
    j["routes"] = std::move(routes);
    j["trace"] = rep.trace;
    std::cout << j.dump() << "\n";
  } else {
    std::cout << name << ' ' << rep.best_nv << ' ' << mate::io::format_2dp(rep.best_td) << ' '
              << mate::io::format_2dp(rep.best_tc) << ' ' << rep.generations << ' '
              << mate::io::format_2dp(rep.seconds) << ' ' << seed << "\n";
  }
  return kOk;
}

// ---------------------------------------------------------------------------

int cmd_verify(const InstanceArgs& ia, const std::string& solution_path) {
  mate::Instance inst;
  std::string text;
  try {
    inst = load(ia, ia.path);
    text = mate::io::read_file(solution_path);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kUsage;
  }

  mate::io::SolutionFile sf;
  try {
    sf = mate::io::read_solution(text, inst.num_customers());
  } catch (const mate::io::ParseError& e) {
    std::cerr << solution_path << ": " << e.what() << "\n";
    std::cout << "fail " << solution_path << "\n";
    return kVerifyFailed;
  }

  // Figures are recomputed with the coefficients recorded in the file
  // unless overridden on the command line.
  inst = inst.with_costs(ia.u1.value_or(sf.dispatch_cost), ia.u2.value_or(sf.unit_cost));
  const mate::Solution s = sf.to_solution();
  const mate::FeasibilityReport report = mate::check_solution(inst, s);

  std::vector<std::string> problems;
  for (const mate::Violation& v : report.violations) {
    problems.push_back(std::string(mate::to_string(v.kind)) + ": " + v.message);
  }
  const double td = mate::total_distance(inst, s);
  const double tc = mate::total_cost(inst, s);
  if (sf.nv != s.num_routes()) {
    problems.push_back("nv mismatch: reported " + std::to_string(sf.nv) + ", file has " +
                       std::to_string(s.num_routes()) + " routes");
  }
  if (!(std::fabs(sf.td - td) <= 0.005 + 1e-9)) {
    problems.push_back("td mismatch: reported " + fmt(sf.td) + ", recomputed " +
                       mate::io::format_2dp(td) + " (" + fmt(td) + ")");
  }
  if (!(std::fabs(sf.tc - tc) <= 0.005 + 1e-9)) {
    problems.push_back("tc mismatch: reported " + fmt(sf.tc) + ", recomputed " +
                       mate::io::format_2dp(tc) + " (" + fmt(tc) + ")");
  }
  if (!inst.name().empty() && sf.instance != inst.name()) {
    std::cerr << "warning: solution names instance '" << sf.instance << "', loaded '"
              << inst.name() << "'\n";
  }

  if (!problems.empty()) {
    for (const std::string& p : problems) std::cerr << p << "\n";
    std::cout << "fail " << sf.instance << ' ' << problems.size() << " problem(s)\n";
    return kVerifyFailed;
  }
  std::cout << "ok " << sf.instance << ' ' << s.num_routes() << ' ' << mate::io::format_2dp(td)
            << ' ' << mate::io::format_2dp(tc) << "\n";
  return kOk;
}

// ---------------------------------------------------------------------------

struct BenchJob {
  std::size_t instance = 0;
  std::uint64_t seed = 0;
  bool ok = false;
  std::string error;
  mate::RunReport report;
};

std::string csv_field(const std::string& s) {
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') out += '"';
    out += c == '\n' ? ' ' : c;
  }
  return out + "\"";
}

double mean_of(const std::vector<double>& v) {
  double s = 0.0;
  for (double x : v) s += x;
  return v.empty() ? 0.0 : s / static_cast<double>(v.size());
}

// Sample standard deviation; 0 for fewer than two values.
double std_of(const std::vector<double>& v) {
  if (v.size() < 2) return 0.0;
  const double m = mean_of(v);
  double s = 0.0;
  for (double x : v) s += (x - m) * (x - m);
  return std::sqrt(s / static_cast<double>(v.size() - 1));
}

int cmd_bench(const InstanceArgs& ia, const SearchArgs& sa, const std::string& suite, int runs,
              std::uint64_t seed_base, const std::string& csv_path, int jobs) {
  std::vector<fs::path> files;
  try {
    for (const auto& entry : fs::directory_iterator(suite)) {
      if (entry.is_regular_file() && entry.path().filename().string().front() != '.') {
        files.push_back(entry.path());
      }
    }
  } catch (const fs::filesystem_error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kUsage;
  }
  std::sort(files.begin(), files.end());
  if (files.empty()) {
    std::cerr << "error: no instance files in " << suite << "\n";
    return kUsage;
  }

  std::vector<std::optional<mate::Instance>> instances(files.size());
  std::vector<std::string> load_errors(files.size());
  for (std::size_t i = 0; i < files.size(); ++i) {
    try {
      instances[i] = load(ia, files[i]);
    } catch (const std::exception& e) {
      load_errors[i] = e.what();
      std::cerr << "error: " << files[i].string() << ": " << e.what() << "\n";
    }
  }

  std::vector<BenchJob> work;
  for (std::size_t i = 0; i < files.size(); ++i) {
    for (int r = 0; r < runs; ++r) {
      BenchJob job;
      job.instance = i;
      job.seed = seed_base + static_cast<std::uint64_t>(r);
      if (!instances[i]) job.error = "load failed: " + load_errors[i];
      work.push_back(std::move(job));
    }
  }

  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (std::size_t k = next++; k < work.size(); k = next++) {
      BenchJob& job = work[k];
      if (!instances[job.instance]) continue;
      try {
        job.report = mate::run(*instances[job.instance], make_params(sa, job.seed));
        job.ok = true;
      } catch (const std::exception& e) {
        job.error = e.what();
      }
      std::cerr << files[job.instance].filename().string() << " seed " << job.seed
                << (job.ok ? " done" : " failed") << "\n";
    }
  };
  const int threads = std::max(1, std::min<int>(jobs, static_cast<int>(work.size())));
  std::vector<std::thread> pool;
  for (int t = 1; t < threads; ++t) pool.emplace_back(worker);
  worker();
  for (auto& t : pool) t.join();

  std::ostringstream csv;
  csv << "kind,instance,M,seed,NV,TD,TC,generations,seconds,NV_std,TD_std,best_NV,best_TD,best_TC,"
         "status\n";
  bool all_ok = true;
  for (std::size_t i = 0; i < files.size(); ++i) {
    const std::string name =
        instances[i] && !instances[i]->name().empty() ? instances[i]->name() : files[i].stem().string();
    const std::string m = instances[i] ? std::to_string(instances[i]->num_customers()) : "";
    std::vector<double> nv, td, tc, gen, sec;
    const BenchJob* best = nullptr;
    for (const BenchJob& job : work) {
      if (job.instance != i) continue;
      if (!job.ok) {
        all_ok = false;
        csv << "run," << csv_field(name) << ',' << m << ',' << job.seed << ",,,,,,,,,,,"
            << csv_field("error: " + job.error) << "\n";
        continue;
      }
      const mate::RunReport& r = job.report;
      csv << "run," << csv_field(name) << ',' << m << ',' << job.seed << ',' << r.best_nv << ','
          << fmt(r.best_td) << ',' << fmt(r.best_tc) << ',' << r.generations << ','
          << fmt(r.seconds) << ",,,,,,ok\n";
      nv.push_back(r.best_nv);
      td.push_back(r.best_td);
      tc.push_back(r.best_tc);
      gen.push_back(r.generations);
      sec.push_back(r.seconds);
      if (!best || r.best_tc < best->report.best_tc) best = &job;
    }
    csv << "summary," << csv_field(name) << ',' << m << ",,";
    if (best) {
      csv << fmt(mean_of(nv)) << ',' << fmt(mean_of(td)) << ',' << fmt(mean_of(tc)) << ','
          << fmt(mean_of(gen)) << ',' << fmt(mean_of(sec)) << ',' << fmt(std_of(nv)) << ','
          << fmt(std_of(td)) << ',' << best->report.best_nv << ',' << fmt(best->report.best_td)
          << ',' << fmt(best->report.best_tc) << ',' << nv.size() << '/' << runs << " ok\n";
    } else {
      csv << ",,,,,,,,,,0/" << runs << " ok\n";
    }
  }

  if (csv_path.empty()) {
    std::cout << csv.str();
  } else {
    try {
      mate::io::write_file(csv_path, csv.str());
    } catch (const std::exception& e) {
      std::cerr << "error: " << e.what() << "\n";
      return kUsage;
    }
  }
  return all_ok ? kOk : kInfeasible;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Memetic solver for routing with simultaneous pickup-delivery and time windows"};
  app.set_version_flag("--version", kVersion);
  app.require_subcommand(1);

  InstanceArgs solve_ia;
  SearchArgs solve_sa;
  std::string out;
  bool json = false;
  auto* solve = app.add_subcommand("solve", "solve one instance");
  add_instance_flags(solve, solve_ia, true);
  add_search_flags(solve, solve_sa, true);
  solve->add_option("--out", out, "write the solution file here");
  solve->add_flag("--json", json, "print a JSON report instead of the summary line");

  InstanceArgs verify_ia;
  std::string solution;
  auto* verify = app.add_subcommand("verify", "check a solution file against an instance");
  add_instance_flags(verify, verify_ia, true);
  verify->add_option("--solution", solution, "solution file")->required();

  InstanceArgs bench_ia;
  SearchArgs bench_sa;
  std::string suite, csv;
  int runs = 5;
  std::uint64_t seed_base = 1;
  int jobs = 1;
  auto* bench = app.add_subcommand("bench", "run every instance of a directory over several seeds");
  add_instance_flags(bench, bench_ia, false);
  add_search_flags(bench, bench_sa, false);
  bench->add_option("--suite", suite, "directory of instance files")->required();
  bench->add_option("--runs", runs, "runs per instance")->check(CLI::Range(1, 100000));
  bench->add_option("--seed-base", seed_base, "seed of run 0; run r uses seed-base + r");
  bench->add_option("--csv", csv, "write the CSV here instead of standard output");
  bench->add_option("--jobs", jobs, "worker threads")->check(CLI::Range(1, 1024));

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e, std::cerr, std::cerr);
    return rc == 0 ? kOk : kUsage;
  }

  if (*solve) return cmd_solve(solve_ia, solve_sa, out, json);
  if (*verify) return cmd_verify(verify_ia, solution);
  if (bench_sa.omega1 > bench_sa.omega2) {
    std::cerr << "error: --omega1 must not exceed --omega2\n";
    return kUsage;
  }
  return cmd_bench(bench_ia, bench_sa, suite, runs, seed_base, csv, jobs);
}
