// Command line harness: solve one problem, run the benchmark suite, turn a
// benchmark directory into data/convergence profiles, or evaluate the
// hypervolume of a stored front.

#include <atomic>
#include <chrono>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <mutex>
#include <optional>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "momads/momads.hpp"

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

constexpr int kExitUsage = 2;
constexpr int kExitRuntime = 1;

std::uint64_t fnv1a64(const std::string& s) {
  std::uint64_t h = 1469598103934665603ULL;
  for (unsigned char c : s) {
    h ^= c;
    h *= 1099511628211ULL;
  }
  return h;
}

std::vector<double> parse_number_list(const std::string& text) {
  std::vector<double> out;
  std::stringstream in(text);
  std::string cell;
  while (std::getline(in, cell, ',')) out.push_back(std::stod(cell));
  return out;
}

struct CommonOptions {
  std::string problem;
  std::string variant = "basic";
  std::size_t budget = 1000;
  std::uint64_t seed = 1;
  std::string out_dir = "runs";
  std::string config_file;
  std::string external_cmd;
  std::size_t external_n = 0, external_m = 0, external_j = 0;
  std::string external_lower, external_upper;
  std::vector<std::string> starts;
};

void apply_config_file(const std::string& path, momads::SolverConfig& cfg,
                       std::string* variant_name) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot read config file " + path);
  std::string line;
  while (std::getline(in, line)) {
    const auto hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    const auto eq = line.find('=');
    if (eq == std::string::npos) continue;
    auto trim = [](std::string s) {
      const auto a = s.find_first_not_of(" \t\r");
      const auto b = s.find_last_not_of(" \t\r");
      return a == std::string::npos ? std::string() : s.substr(a, b - a + 1);
    };
    const std::string key = trim(line.substr(0, eq));
    const std::string value = trim(line.substr(eq + 1));
    if (key.empty()) continue;
    if (key == "budget") cfg.budget = std::stoul(value);
    else if (key == "seed") cfg.seed = std::stoull(value);
    else if (key == "delta0") cfg.delta0 = std::stod(value);
    else if (key == "tau") cfg.tau = std::stod(value);
    else if (key == "w_plus") cfg.w_plus = std::stoi(value);
    else if (key == "rho") cfg.rho = std::stod(value);
    else if (key == "opportunistic") cfg.variant.opportunistic = value == "true" || value == "1";
    else if (key == "nm_expansion") cfg.nm.expansion = std::stod(value);
    else if (key == "nm_outside_contraction") cfg.nm.outside_contraction = std::stod(value);
    else if (key == "nm_inside_contraction") cfg.nm.inside_contraction = std::stod(value);
    else if (key == "nm_zone_radius") cfg.nm.zone_radius = std::stod(value);
    else if (key == "nm_eval_budget") cfg.nm.eval_budget = std::stoul(value);
    else if (key == "variant" && variant_name) *variant_name = value;
    else throw std::runtime_error("unknown config key: " + key);
  }
}

std::string variant_list() {
  std::string s;
  for (momads::Variant v :
       {momads::Variant::basic, momads::Variant::nm_dom,
        momads::Variant::nm_multi, momads::Variant::quad_dms,
        momads::Variant::quad_dom, momads::Variant::quad_multi}) {
    if (!s.empty()) s += ", ";
    s += momads::variant_name(v);
  }
  return s;
}

momads::ProblemSpec resolve_problem(const CommonOptions& opt,
                                    const std::vector<momads::ProblemSpec>& reg) {
  if (!opt.external_cmd.empty()) {
    if (opt.external_n == 0 || opt.external_m == 0)
      throw CLI::ValidationError("--external-cmd needs --external-n and --external-m");
    std::vector<double> lo, hi;
    if (!opt.external_lower.empty()) lo = parse_number_list(opt.external_lower);
    if (!opt.external_upper.empty()) hi = parse_number_list(opt.external_upper);
    return momads::external_problem(opt.external_cmd, opt.external_n,
                                    opt.external_m, opt.external_j, lo, hi);
  }
  const momads::ProblemSpec* p = momads::find_problem(reg, opt.problem);
  if (!p)
    throw CLI::ValidationError("unknown problem '" + opt.problem + "'");
  return *p;
}

struct RunOutput {
  momads::SolveResult result;
  double wall_seconds = 0.0;
};

RunOutput run_one(const momads::ProblemSpec& problem,
                  const std::vector<momads::DecisionPoint>& starts,
                  const momads::SolverConfig& cfg) {
  const auto t0 = std::chrono::steady_clock::now();
  momads::SolveResult result = momads::solve(problem, starts, cfg);
  const auto t1 = std::chrono::steady_clock::now();
  return {std::move(result),
          std::chrono::duration<double>(t1 - t0).count()};
}

momads::Front front_objectives(const momads::SolveResult& r) {
  momads::Front front;
  for (const auto& p : r.front) front.push_back(p.result.objectives);
  return front;
}

void write_artifact(const fs::path& dir, const momads::ProblemSpec& problem,
                    const std::string& variant, const momads::SolverConfig& cfg,
                    const RunOutput& run) {
  fs::create_directories(dir);
  momads::io::write_history_csv((dir / "history.csv").string(), run.result.history,
                                problem.n, problem.m, problem.j);
  momads::io::write_front_csv((dir / "front.csv").string(),
                              front_objectives(run.result), problem.m);
  json meta;
  meta["problem"] = problem.name;
  meta["variant"] = variant;
  meta["seed"] = cfg.seed;
  meta["budget"] = cfg.budget;
  meta["n"] = problem.n;
  meta["m"] = problem.m;
  meta["j"] = problem.j;
  meta["evaluations"] = run.result.history.evaluations.size();
  meta["wall_seconds"] = run.wall_seconds;
  meta["history"] = "history.csv";
  meta["front"] = "front.csv";
  meta["config"] = {{"delta0", cfg.delta0},
                    {"tau", cfg.tau},
                    {"w_plus", cfg.w_plus},
                    {"rho", cfg.rho},
                    {"opportunistic", cfg.variant.opportunistic}};
  std::ofstream out(dir / "meta.json");
  out << meta.dump(2) << '\n';
}

int cmd_solve(const CommonOptions& opt, momads::SolverConfig cfg) {
  const auto reg = momads::registry();
  const momads::ProblemSpec problem = resolve_problem(opt, reg);
  const auto variant = momads::parse_variant(opt.variant);
  if (!variant)
    throw CLI::ValidationError("unknown variant '" + opt.variant +
                               "'; expected one of: " + variant_list());
  cfg.variant.variant = *variant;

  std::vector<momads::DecisionPoint> starts;
  for (const auto& s : opt.starts) starts.push_back(parse_number_list(s));
  if (starts.empty()) {
    if (!problem.bounded())
      throw CLI::ValidationError("unbounded problem: supply --start points");
    starts = momads::line_sample_initial_points(problem.lower, problem.upper,
                                                problem.n);
  }

  const RunOutput run = run_one(problem, starts, cfg);
  write_artifact(opt.out_dir, problem, opt.variant, cfg, run);
  std::cout << "wrote " << (fs::path(opt.out_dir) / "history.csv").string()
            << " (" << run.result.history.evaluations.size() << " evaluations), "
            << (fs::path(opt.out_dir) / "front.csv").string() << " ("
            << run.result.front.size() << " points)\n";
  return 0;
}

int cmd_bench(const std::string& filter, std::vector<std::string> variants,
              momads::SolverConfig base_cfg, const std::string& out_dir,
              std::size_t workers, bool smoke) {
  auto reg = momads::registry();
  std::vector<momads::ProblemSpec> problems;
  const std::vector<std::string> smoke_set = {"toy1d",  "zdt1_n10", "fonseca",
                                              "poloni", "bk1",      "bnh",
                                              "constr", "srn"};
  for (const auto& p : reg) {
    if (!filter.empty() && p.name.find(filter) == std::string::npos) continue;
    if (smoke && std::find(smoke_set.begin(), smoke_set.end(), p.name) ==
                     smoke_set.end())
      continue;
    problems.push_back(p);
  }
  if (problems.empty()) throw CLI::ValidationError("no problems match the filter");
  if (variants.empty())
    variants = {"basic",    "NM-DoM",  "NM-Multi",
                "Quad-DMS", "Quad-DoM", "Quad-Multi"};
  for (const auto& v : variants)
    if (!momads::parse_variant(v))
      throw CLI::ValidationError("unknown variant '" + v +
                                 "'; expected one of: " + variant_list());
  if (smoke) base_cfg.budget = std::min<std::size_t>(base_cfg.budget, 3000);

  struct Task {
    const momads::ProblemSpec* problem;
    std::string variant;
  };
  std::vector<Task> tasks;
  for (const auto& p : problems)
    for (const auto& v : variants) tasks.push_back({&p, v});

  std::atomic<std::size_t> next{0};
  std::atomic<bool> failed{false};
  std::mutex log_mutex;
  auto worker = [&] {
    for (;;) {
      const std::size_t i = next.fetch_add(1);
      if (i >= tasks.size()) return;
      const Task& task = tasks[i];
      momads::SolverConfig cfg = base_cfg;
      cfg.variant.variant = *momads::parse_variant(task.variant);
      cfg.seed = base_cfg.seed ^ fnv1a64(task.problem->name + "/" + task.variant);
      try {
        const auto starts = momads::line_sample_initial_points(
            task.problem->lower, task.problem->upper, task.problem->n);
        const RunOutput run = run_one(*task.problem, starts, cfg);
        write_artifact(fs::path(out_dir) / task.problem->name / task.variant,
                       *task.problem, task.variant, cfg, run);
        std::lock_guard<std::mutex> lock(log_mutex);
        std::cout << task.problem->name << "/" << task.variant << ": "
                  << run.result.history.evaluations.size() << " evals, "
                  << run.result.front.size() << " front points, "
                  << momads::io::format_double(run.wall_seconds, 3) << "s\n";
      } catch (const std::exception& e) {
        failed = true;
        std::lock_guard<std::mutex> lock(log_mutex);
        std::cerr << task.problem->name << "/" << task.variant
                  << " failed: " << e.what() << '\n';
      }
    }
  };
  std::vector<std::thread> pool;
  for (std::size_t w = 1; w < std::max<std::size_t>(workers, 1); ++w)
    pool.emplace_back(worker);
  worker();
  for (auto& t : pool) t.join();

  // Reference fronts: union of all variants' fronts per problem.
  for (const auto& p : problems) {
    std::vector<momads::Front> fronts;
    for (const auto& v : variants) {
      const fs::path f = fs::path(out_dir) / p.name / v / "front.csv";
      if (fs::exists(f)) fronts.push_back(momads::io::read_front_csv(f.string()));
    }
    const auto ref = momads::build_reference_front(fronts);
    const fs::path ref_path = fs::path(out_dir) / p.name / "reference_front.csv";
    if (ref) {
      momads::io::write_front_csv(ref_path.string(), *ref, p.m);
    } else {
      std::cerr << p.name << ": no feasible point found by any variant; "
                   "problem discarded\n";
      std::ofstream(fs::path(out_dir) / p.name / "discarded") << "";
    }
  }

  json meta;
  meta["budget"] = base_cfg.budget;
  meta["seed"] = base_cfg.seed;
  meta["variants"] = variants;
  json probs = json::array();
  for (const auto& p : problems)
    probs.push_back({{"name", p.name}, {"n", p.n}, {"m", p.m}, {"j", p.j}});
  meta["problems"] = probs;
  std::ofstream(fs::path(out_dir) / "bench.json") << meta.dump(2) << '\n';
  return failed ? kExitRuntime : 0;
}

int cmd_profiles(const std::string& bench_dir, std::vector<double> epsilons,
                 std::string out_dir) {
  if (out_dir.empty()) out_dir = bench_dir;
  if (epsilons.empty()) epsilons = {0.01, 0.05, 0.1};
  std::ifstream meta_in(fs::path(bench_dir) / "bench.json");
  if (!meta_in) throw std::runtime_error("missing bench.json in " + bench_dir);
  json meta = json::parse(meta_in);

  struct RunSeries {
    std::string variant;
    std::string problem;
    std::size_t n;
    std::size_t budget;
    std::vector<double> series;
  };
  std::vector<RunSeries> runs;

  for (const auto& pj : meta["problems"]) {
    const std::string name = pj["name"];
    const std::size_t n = pj["n"], m = pj["m"], j = pj["j"];
    const fs::path ref_path = fs::path(bench_dir) / name / "reference_front.csv";
    if (!fs::exists(ref_path)) {
      std::cerr << "warning: no reference front for " << name << ", skipped\n";
      continue;
    }
    const momads::Front reference = momads::io::read_front_csv(ref_path.string());
    const auto frame = momads::normalization_frame(reference);
    for (const auto& vj : meta["variants"]) {
      const std::string variant = vj;
      const fs::path hist = fs::path(bench_dir) / name / variant / "history.csv";
      if (!fs::exists(hist)) continue;
      const auto rows = momads::io::read_history_csv(hist.string(), n, m, j);
      std::vector<std::optional<momads::ObjectiveVector>> stream;
      stream.reserve(rows.size());
      for (const auto& r : rows) {
        if (r.h == 0.0)
          stream.emplace_back(r.objectives);
        else
          stream.emplace_back(std::nullopt);
      }
      RunSeries rs;
      rs.variant = variant;
      rs.problem = name;
      rs.n = n;
      rs.budget = meta["budget"];
      rs.series = momads::convergence_profile(stream, reference, frame);
      const fs::path conv = fs::path(out_dir) / name / variant;
      fs::create_directories(conv);
      momads::io::write_convergence_csv((conv / "convergence.csv").string(),
                                        rs.series);
      runs.push_back(std::move(rs));
    }
  }

  for (double eps : epsilons) {
    std::vector<momads::RunProfileInput> inputs;
    for (const auto& r : runs) {
      momads::RunProfileInput in;
      in.solver = r.variant;
      in.problem = r.problem;
      in.dimension = r.n;
      in.budget = r.budget;
      in.solve_eval = momads::first_solve_eval(r.series, eps);
      inputs.push_back(in);
    }
    const auto table = momads::data_profile(inputs, eps);
    std::ostringstream fname;
    fname << "data_profile_eps" << momads::io::format_double(eps, 6) << ".csv";
    momads::io::write_profile_csv((fs::path(out_dir) / fname.str()).string(),
                                  table);
    std::cout << "wrote " << (fs::path(out_dir) / fname.str()).string() << '\n';
  }
  return 0;
}

int cmd_hv(const std::string& front_path, const std::string& ref) {
  const momads::Front front = momads::io::read_front_csv(front_path);
  const std::vector<double> u = parse_number_list(ref);
  for (const auto& y : front)
    if (y.size() != u.size())
      throw std::runtime_error("front/reference dimension mismatch");
  std::cout << momads::io::format_double(momads::hypervolume(front, u), 12)
            << '\n';
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Multiobjective mesh adaptive direct search solver and "
               "benchmarking harness"};
  app.require_subcommand(1);

  CommonOptions opt;
  momads::SolverConfig cfg;

  auto* solve = app.add_subcommand("solve", "Run one problem with one variant");
  solve->add_option("--problem", opt.problem, "Registry problem name");
  solve->add_option("--variant", opt.variant, "Variant: " + variant_list());
  solve->add_option("--budget", opt.budget, "Blackbox evaluation budget");
  solve->add_option("--seed", opt.seed, "Random seed");
  solve->add_option("--out", opt.out_dir, "Output directory");
  solve->add_option("--config", opt.config_file, "Config file (key = value lines)");
  solve->add_option("--start", opt.starts,
                    "Start point 'x1,x2,...' (repeatable; default line sampling)");
  solve->add_option("--external-cmd", opt.external_cmd,
                    "External blackbox command (coords on stdin, f then c on stdout)");
  solve->add_option("--external-n", opt.external_n, "External problem dimension");
  solve->add_option("--external-m", opt.external_m, "External objective count");
  solve->add_option("--external-j", opt.external_j, "External constraint count");
  solve->add_option("--external-lower", opt.external_lower, "External lower bounds");
  solve->add_option("--external-upper", opt.external_upper, "External upper bounds");

  std::string bench_filter, bench_out = "bench";
  std::vector<std::string> bench_variants;
  std::size_t workers = 1;
  bool smoke = false;
  auto* bench = app.add_subcommand("bench", "Run the benchmark suite");
  bench->add_option("--filter", bench_filter, "Substring filter on problem names");
  bench->add_option("--variants", bench_variants, "Variants to run (default: all 6)");
  bench->add_option("--budget", opt.budget, "Budget per run");
  bench->add_option("--seed", opt.seed, "Base seed");
  bench->add_option("--out", bench_out, "Output directory");
  bench->add_option("--workers", workers, "Parallel runs");
  bench->add_flag("--smoke", smoke, "Small suite with budget <= 3000");
  bench->add_option("--config", opt.config_file, "Config file (key = value lines)");

  std::string profiles_dir, profiles_out;
  std::vector<double> epsilons;
  auto* profiles = app.add_subcommand("profiles",
                                      "Data/convergence profiles from a bench directory");
  profiles->add_option("--bench", profiles_dir, "Bench directory")->required();
  profiles->add_option("--epsilon", epsilons, "Tolerance (repeatable)");
  profiles->add_option("--out", profiles_out, "Output directory (default: bench dir)");

  std::string hv_front, hv_ref;
  auto* hv = app.add_subcommand("hv", "Hypervolume of a front CSV");
  hv->add_option("--front", hv_front, "Front CSV path")->required();
  hv->add_option("--ref", hv_ref, "Reference point 'u1,u2,...'")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    std::cerr << e.what() << '\n';
    return kExitUsage;
  }

  try {
    // Precedence: defaults, then config file, then explicit flags.
    std::string variant_from_config;
    if (!opt.config_file.empty())
      apply_config_file(opt.config_file, cfg, &variant_from_config);
    else {
      cfg.budget = opt.budget;
      cfg.seed = opt.seed;
    }
    CLI::App* active = *solve ? static_cast<CLI::App*>(solve)
                              : (*bench ? static_cast<CLI::App*>(bench) : nullptr);
    if (active) {
      if (active->count("--budget")) cfg.budget = opt.budget;
      if (active->count("--seed")) cfg.seed = opt.seed;
    }
    if (solve->count("--variant") == 0 && !variant_from_config.empty())
      opt.variant = variant_from_config;

    if (*solve) return cmd_solve(opt, cfg);
    if (*bench)
      return cmd_bench(bench_filter, bench_variants, cfg, bench_out, workers,
                       smoke);
    if (*profiles) return cmd_profiles(profiles_dir, epsilons, profiles_out);
    if (*hv) return cmd_hv(hv_front, hv_ref);
  } catch (const CLI::ValidationError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitUsage;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitRuntime;
  }
  return 0;
}
