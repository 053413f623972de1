#include <algorithm>
#include <chrono>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "gmtplan/errors.hpp"
#include "gmtplan/planner.hpp"
#include "gmtplan/problem.hpp"
#include "gmtplan/rng.hpp"
#include "gmtplan/simulator.hpp"
#include "gmtplan/text.hpp"

namespace {

using namespace gmt;
using Json = nlohmann::ordered_json;

const char* status_str(PlanStatus s) {
  switch (s) {
    case PlanStatus::success:
      return "success";
    case PlanStatus::failure_open_empty:
      return "failure-open-empty";
    case PlanStatus::infeasible_input:
      return "infeasible-input";
  }
  return "unknown";
}

void write_text(const std::string& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw std::runtime_error(path + ": cannot open for writing");
  out << text;
  if (!out) throw std::runtime_error(path + ": write failed");
}

std::string path_text(const PlanResult& res) {
  std::string s = "# planned path: " + std::to_string(res.path.size()) + " states, cost " +
                  double_str(res.cost) + "\n";
  s += "# columns: coordinates, then heading when the model carries one\n";
  for (const State& st : res.path) {
    std::string line;
    for (double c : st.coords) {
      line += double_str(c);
      line += ' ';
    }
    if (st.heading) {
      line += double_str(*st.heading);
      line += ' ';
    }
    if (!line.empty()) line.pop_back();
    s += line + "\n";
  }
  return s;
}

std::string tree_text(const PlanResult& res) {
  std::string s = "# search tree: one sample per line\n# columns: index parent cost\n";
  for (std::size_t i = 0; i < res.tree.parent.size(); ++i) {
    s += std::to_string(i) + " " + std::to_string(res.tree.parent[i]) + " " +
         double_str(res.tree.cost[i]) + "\n";
  }
  return s;
}

double ms_between(std::chrono::steady_clock::time_point a,
                  std::chrono::steady_clock::time_point b) {
  return std::chrono::duration<double, std::milli>(b - a).count();
}

// Reported timings are the median of five repetitions on the monotonic clock.
template <typename Fn>
double median_ms(Fn&& fn) {
  std::vector<double> times;
  for (int rep = 0; rep < 5; ++rep) {
    auto t0 = std::chrono::steady_clock::now();
    fn();
    times.push_back(ms_between(t0, std::chrono::steady_clock::now()));
  }
  std::sort(times.begin(), times.end());
  return times[2];
}

struct PlanOpts {
  std::string file;
  std::string algo = "gmt";
  std::optional<double> lambda;
  std::optional<double> eta;
  std::optional<int> n;
  std::optional<std::uint64_t> seed;
  std::optional<double> radius;
  int workers = 1;
  std::string emit_path;
  std::string emit_tree;
  std::string graph_cache;
};

void apply_overrides(ProblemFile& p, const PlanOpts& o) {
  if (o.lambda) {
    if (!(*o.lambda > 0.0) || *o.lambda > 1.0)
      throw InvalidInputError("--lambda: must be in (0, 1]");
    p.lambda = *o.lambda;
  }
  if (o.eta) {
    if (*o.eta < 0.0) throw InvalidInputError("--eta: must be non-negative");
    p.eta = *o.eta;
  }
  if (o.n) {
    if (*o.n < 1) throw InvalidInputError("--n: must be at least 1");
    p.n = *o.n;
  }
  if (o.radius) {
    if (!(*o.radius > 0.0)) throw InvalidInputError("--radius: must be positive");
    p.radius_override = *o.radius;
  }
  if (o.seed) {
    p.sampling.kind = SampleSource::Kind::uniform;
    p.sampling.seed = *o.seed;
  }
}

int run_plan(const PlanOpts& o) {
  ProblemFile p = load_problem(o.file);
  apply_overrides(p, o);

  PlanResult res;
  try {
    auto t0 = std::chrono::steady_clock::now();
    ProblemInstance inst = build_instance(p, o.workers, o.graph_cache);
    double build_ms = ms_between(t0, std::chrono::steady_clock::now());

    GmtParams params;
    params.lambda = p.lambda;
    params.radius = inst.radius;
    params.workers = o.workers;
    double plan_ms = median_ms([&] {
      if (o.algo == "gmt") {
        res = gmt_plan(inst.samples, inst.graph, p.obstacles, p.goal, inst.init_index, params);
      } else if (o.algo == "fmt") {
        res = fmt_plan(inst.samples, inst.graph, p.obstacles, p.goal, inst.init_index);
      } else {
        res = dijkstra_oracle(inst.samples, inst.graph, p.obstacles, p.goal, inst.init_index);
      }
    });

    std::cout << "status=" << status_str(res.status) << " cost=" << double_str(res.cost)
              << " iters=" << res.iterations << " checks=" << res.total_collision_checks
              << " samples=" << inst.samples.states.size() << " edges=" << inst.graph.edge_count()
              << " radius=" << double_str(inst.radius) << " build_ms=" << double_str(build_ms)
              << " plan_ms=" << double_str(plan_ms) << "\n";
  } catch (const GoalBlockedError& e) {
    std::cout << "status=goal-blocked (" << e.what() << ")\n";
    return 1;
  } catch (const InfeasibleSamplingError& e) {
    std::cout << "status=infeasible-sampling (" << e.what() << ")\n";
    return 1;
  }

  if (!o.emit_path.empty() && res.status == PlanStatus::success)
    write_text(o.emit_path, path_text(res));
  if (!o.emit_tree.empty()) write_text(o.emit_tree, tree_text(res));
  return res.status == PlanStatus::success ? 0 : 1;
}

struct BenchOpts {
  std::vector<std::string> scenes;
  std::vector<double> lambdas = {0.2, 0.5, 1.0};
  int n = 5000;
  int seeds = 50;
  std::uint64_t seed = 0;
  int workers = 1;
  std::string out_csv;
  std::string out_plot;
};

int run_bench(const BenchOpts& o) {
  if (o.lambdas.empty()) throw InvalidInputError("--lambdas: need at least one value");
  if (o.seeds < 1) throw InvalidInputError("--seeds: must be at least 1");
  std::string csv = "scene,lambda,n,seeds,failures,mean_error\n";
  std::string plot;

  for (const std::string& file : o.scenes) {
    ProblemFile p0 = load_problem(file);
    p0.n = o.n;
    p0.sampling.kind = SampleSource::Kind::uniform;
    std::string name = std::filesystem::path(file).stem().string();

    std::vector<double> sums(o.lambdas.size(), 0.0);
    std::vector<int> used(o.lambdas.size(), 0);
    std::vector<int> failures(o.lambdas.size(), 0);

    for (int s = 0; s < o.seeds; ++s) {
      ProblemFile p = p0;
      p.sampling.seed = mix64(o.seed, static_cast<std::uint64_t>(s));
      PlanResult fmt;
      try {
        // One instance per seed: every lambda (and the baseline) sees the same
        // samples and neighbor graph.
        ProblemInstance inst = build_instance(p, o.workers);
        fmt = fmt_plan(inst.samples, inst.graph, p.obstacles, p.goal, inst.init_index);
        if (fmt.status != PlanStatus::success) {
          for (auto& f : failures) ++f;
          continue;
        }
        for (std::size_t li = 0; li < o.lambdas.size(); ++li) {
          GmtParams params;
          params.lambda = o.lambdas[li];
          params.radius = inst.radius;
          params.workers = o.workers;
          PlanResult gmt_res =
              gmt_plan(inst.samples, inst.graph, p.obstacles, p.goal, inst.init_index, params);
          if (gmt_res.status != PlanStatus::success) {
            ++failures[li];
            continue;
          }
          sums[li] += gmt_res.cost / fmt.cost - 1.0;
          ++used[li];
        }
      } catch (const std::runtime_error&) {
        for (auto& f : failures) ++f;
      }
    }

    plot += "# " + name + ": lambda mean_error\n";
    for (std::size_t li = 0; li < o.lambdas.size(); ++li) {
      double mean = used[li] > 0 ? sums[li] / used[li] : std::nan("");
      csv += name + "," + double_str(o.lambdas[li]) + "," + std::to_string(o.n) + "," +
             std::to_string(o.seeds) + "," + std::to_string(failures[li]) + "," +
             double_str(mean) + "\n";
      plot += double_str(o.lambdas[li]) + " " + double_str(mean) + "\n";
      if (10 * failures[li] > o.seeds) {
        std::cerr << "warning: " << name << " lambda=" << double_str(o.lambdas[li]) << " failed "
                  << failures[li] << "/" << o.seeds << " runs\n";
      }
    }
    plot += "\n";
  }

  if (o.out_csv.empty()) {
    std::cout << csv;
  } else {
    write_text(o.out_csv, csv);
    std::cout << "wrote " << o.out_csv << "\n";
  }
  if (!o.out_plot.empty()) {
    write_text(o.out_plot, plot);
    std::cout << "wrote " << o.out_plot << "\n";
  }
  return 0;
}

struct ScalingOpts {
  std::string scene;
  std::vector<int> n_list;
  std::vector<int> obstacle_counts;
  int workers = 1;
  std::string out_csv;
};

int run_scaling(const ScalingOpts& o) {
  ProblemFile p0 = load_problem(o.scene);
  std::size_t base = p0.obstacles.boxes.size();
  if (base == 0) throw InvalidInputError("scaling needs a scene with at least one obstacle");

  std::string csv = "n,obstacles,build_ms,plan_ms,cost,status\n";
  for (int target : o.obstacle_counts) {
    if (target < static_cast<int>(base) || target % static_cast<int>(base) != 0) {
      throw InvalidInputError("--obstacle-counts: " + std::to_string(target) +
                              " is not a multiple of the scene's " + std::to_string(base) +
                              " boxes");
    }
    ProblemFile p = p0;
    p.obstacles = refine_obstacles(p0.obstacles, target / static_cast<int>(base));
    for (int n : o.n_list) {
      if (n < 1) throw InvalidInputError("--n-list: entries must be at least 1");
      p.n = n;
      auto t0 = std::chrono::steady_clock::now();
      ProblemInstance inst = build_instance(p, o.workers);
      double build_ms = ms_between(t0, std::chrono::steady_clock::now());
      GmtParams params;
      params.lambda = p.lambda;
      params.radius = inst.radius;
      params.workers = o.workers;
      PlanResult res;
      double plan_ms = median_ms([&] {
        res = gmt_plan(inst.samples, inst.graph, p.obstacles, p.goal, inst.init_index, params);
      });
      csv += std::to_string(n) + "," + std::to_string(target) + "," + double_str(build_ms) + "," +
             double_str(plan_ms) + "," + double_str(res.cost) + "," + status_str(res.status) +
             "\n";
    }
  }

  if (o.out_csv.empty()) {
    std::cout << csv;
  } else {
    write_text(o.out_csv, csv);
    std::cout << "wrote " << o.out_csv << "\n";
  }
  return 0;
}

struct Campaign {
  ScenarioConfig cfg;
  std::vector<double> latencies;
  std::vector<double> rates;
  std::vector<double> sigmas;
};

std::vector<double> number_list(const Json& v, const std::string& path) {
  if (!v.is_array() || v.empty()) throw InvalidInputError(path + ": expected a non-empty array");
  std::vector<double> out;
  for (std::size_t k = 0; k < v.size(); ++k) {
    const Json& e = v[k];
    if (!e.is_number())
      throw InvalidInputError(path + "[" + std::to_string(k) + "]: expected a number");
    out.push_back(e.get<double>());
  }
  return out;
}

double campaign_number(const Json& doc, const char* key, double fallback) {
  if (!doc.contains(key)) return fallback;
  if (!doc[key].is_number())
    throw InvalidInputError(std::string(key) + ": expected a number");
  return doc[key].get<double>();
}

Campaign parse_campaign(const std::string& file) {
  std::ifstream in(file, std::ios::binary);
  if (!in) throw InvalidInputError(file + ": cannot open file");
  Json doc;
  try {
    doc = Json::parse(in);
  } catch (const Json::parse_error& e) {
    throw InvalidInputError(std::string("invalid JSON: ") + e.what());
  }
  if (!doc.is_object()) throw InvalidInputError("top level: expected a JSON object");
  for (auto it = doc.begin(); it != doc.end(); ++it) {
    static const char* allowed[] = {"schema",     "problem",        "latencies", "rates",
                                    "sigmas",     "trials",         "seed",      "spawn_box_size",
                                    "control_dt", "robot_speed",    "time_limit"};
    bool known = false;
    for (const char* key : allowed) known = known || it.key() == key;
    if (!known) throw InvalidInputError(it.key() + ": unknown field");
  }
  if (!doc.contains("schema") || !doc["schema"].is_string() ||
      doc["schema"].get<std::string>() != "gmt-campaign/1") {
    throw InvalidInputError("schema: expected \"gmt-campaign/1\"");
  }
  if (!doc.contains("problem")) throw InvalidInputError("problem: required field is missing");

  ProblemFile p;
  if (doc["problem"].is_string()) {
    std::filesystem::path ref = doc["problem"].get<std::string>();
    if (ref.is_relative()) ref = std::filesystem::path(file).parent_path() / ref;
    p = load_problem(ref.string());
  } else if (doc["problem"].is_object()) {
    p = parse_problem(doc["problem"].dump());
  } else {
    throw InvalidInputError("problem: expected a file path or an inline problem object");
  }
  if (p.steering.kind != SteeringModel::Kind::euclidean)
    throw InvalidInputError("problem: the simulated robot tracks straight segments, so the "
                            "problem must use euclidean steering");

  Campaign c;
  c.cfg.base.obstacles = p.obstacles;
  c.cfg.base.goal = p.goal;
  c.cfg.base.init = p.init;
  c.cfg.base.n = p.n;
  c.cfg.base.lambda = p.lambda;
  c.cfg.base.eta = p.eta;
  c.cfg.base.radius_override = p.radius_override;
  c.latencies = number_list(doc.at("latencies"), "latencies");
  c.rates = number_list(doc.at("rates"), "rates");
  c.sigmas = number_list(doc.at("sigmas"), "sigmas");
  if (doc.contains("trials")) {
    if (!doc["trials"].is_number_integer() || doc["trials"].get<long long>() < 1)
      throw InvalidInputError("trials: expected a positive integer");
    c.cfg.trials = static_cast<int>(doc["trials"].get<long long>());
  }
  if (doc.contains("seed")) {
    if (!doc["seed"].is_number_integer() || doc["seed"].get<long long>() < 0)
      throw InvalidInputError("seed: expected a non-negative integer");
    c.cfg.seed = doc["seed"].get<std::uint64_t>();
  }
  c.cfg.spawn_box_size = campaign_number(doc, "spawn_box_size", c.cfg.spawn_box_size);
  c.cfg.control_dt = campaign_number(doc, "control_dt", c.cfg.control_dt);
  c.cfg.robot_speed = campaign_number(doc, "robot_speed", c.cfg.robot_speed);
  c.cfg.time_limit = campaign_number(doc, "time_limit", c.cfg.time_limit);
  return c;
}

struct SimulateOpts {
  std::string file;
  std::optional<std::uint64_t> seed;
  int workers = 1;
  std::string out_csv;
};

int run_simulate(const SimulateOpts& o) {
  Campaign c = parse_campaign(o.file);
  if (o.seed) c.cfg.seed = *o.seed;
  std::vector<CampaignCell> cells =
      run_campaign(c.cfg, c.latencies, c.rates, c.sigmas, o.workers);
  std::string csv = campaign_csv(cells);
  if (o.out_csv.empty()) {
    std::cout << csv;
  } else {
    write_text(o.out_csv, csv);
    std::cout << "wrote " << o.out_csv << "\n";
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Sampling-based motion planning with a group-marching wavefront"};
  app.require_subcommand(1);

  PlanOpts plan_opts;
  CLI::App* plan = app.add_subcommand("plan", "Plan on a problem file and report cost/status");
  plan->add_option("file", plan_opts.file, "problem JSON file")->required();
  plan->add_option("--algo", plan_opts.algo, "planner: gmt, fmt, or dijkstra")
      ->check(CLI::IsMember({"gmt", "fmt", "dijkstra"}));
  plan->add_option("--lambda", plan_opts.lambda, "group threshold factor in (0, 1]");
  plan->add_option("--eta", plan_opts.eta, "radius tuning margin");
  plan->add_option("--n", plan_opts.n, "sample count override");
  plan->add_option("--seed", plan_opts.seed, "draw uniform samples with this seed");
  plan->add_option("--radius", plan_opts.radius, "connection radius override");
  plan->add_option("--workers", plan_opts.workers, "threads (results are identical for any value)");
  plan->add_option("--emit-path", plan_opts.emit_path, "write the planned path to this file");
  plan->add_option("--emit-tree", plan_opts.emit_tree, "write parent/cost per sample to this file");
  plan->add_option("--graph-cache", plan_opts.graph_cache, "neighbor graph cache file");

  BenchOpts bench_opts;
  CLI::App* bench =
      app.add_subcommand("bench", "Mean cost error of gmt over the fmt baseline per scene");
  bench->add_option("scenes", bench_opts.scenes, "problem JSON files")->required();
  bench->add_option("--lambdas", bench_opts.lambdas, "group threshold factors")->delimiter(',');
  bench->add_option("--n", bench_opts.n, "samples per run");
  bench->add_option("--seeds", bench_opts.seeds, "number of sampling seeds");
  bench->add_option("--seed", bench_opts.seed, "master seed the per-run seeds derive from");
  bench->add_option("--workers", bench_opts.workers, "threads");
  bench->add_option("--out", bench_opts.out_csv, "CSV output file (default stdout)");
  bench->add_option("--plot", bench_opts.out_plot, "gnuplot data file");

  ScalingOpts scaling_opts;
  CLI::App* scaling =
      app.add_subcommand("scaling", "Runtime and cost over sample and obstacle counts");
  scaling->add_option("scene", scaling_opts.scene, "problem JSON file")->required();
  scaling->add_option("--n-list", scaling_opts.n_list, "sample counts")
      ->delimiter(',')
      ->required();
  scaling
      ->add_option("--obstacle-counts", scaling_opts.obstacle_counts,
                   "total box counts; each must be a multiple of the scene's count")
      ->delimiter(',')
      ->required();
  scaling->add_option("--workers", scaling_opts.workers, "threads");
  scaling->add_option("--out", scaling_opts.out_csv, "CSV output file (default stdout)");

  SimulateOpts sim_opts;
  CLI::App* simulate =
      app.add_subcommand("simulate", "Run a replanning campaign file and emit success rates");
  simulate->add_option("file", sim_opts.file, "campaign JSON file")->required();
  simulate->add_option("--seed", sim_opts.seed, "master seed override");
  simulate->add_option("--workers", sim_opts.workers, "threads (trial seeds ignore scheduling)");
  simulate->add_option("--out", sim_opts.out_csv, "CSV output file (default stdout)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  try {
    if (plan->parsed()) return run_plan(plan_opts);
    if (bench->parsed()) return run_bench(bench_opts);
    if (scaling->parsed()) return run_scaling(scaling_opts);
    return run_simulate(sim_opts);
  } catch (const InvalidInputError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const GoalBlockedError& e) {
    std::cout << "status=goal-blocked (" << e.what() << ")\n";
    return 1;
  } catch (const InfeasibleSamplingError& e) {
    std::cout << "status=infeasible-sampling (" << e.what() << ")\n";
    return 1;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
}
