#include "gmtplan/simulator.hpp"

#include <algorithm>
#include <bit>
#include <cmath>

#include "gmtplan/errors.hpp"
#include "gmtplan/graph.hpp"
#include "gmtplan/parallel.hpp"
#include "gmtplan/planner.hpp"
#include "gmtplan/rng.hpp"
#include "gmtplan/text.hpp"

namespace gmt {

namespace {

std::uint64_t draw_seed(Pcg32& rng) {
  std::uint64_t hi = rng.next_u32();
  return (hi << 32) | rng.next_u32();
}

double plan_radius(const PlanningSetup& setup) {
  if (setup.radius_override) return *setup.radius_override;
  RadiusParams rp;
  rp.dimension = setup.obstacles.dim;
  rp.n = setup.n;
  rp.eta = setup.eta;
  return connection_radius(rp);
}

// One replan from the robot's current position against the current obstacle
// field.  Failures (including a goal buried under collapsed obstacles) leave the
// previous plan in force.
std::optional<std::vector<State>> plan_from(const PlanningSetup& setup,
                                            const std::vector<double>& pos,
                                            const ObstacleSet& obstacles, std::uint64_t seed,
                                            bool* goal_blocked) {
  SampleSource src;
  src.kind = SampleSource::Kind::uniform;
  src.seed = seed;
  SampleSet samples;
  try {
    samples = sample_free(setup.n, obstacles, setup.goal, src);
  } catch (const GoalBlockedError&) {
    if (goal_blocked) *goal_blocked = true;
    return std::nullopt;
  } catch (const InfeasibleSamplingError&) {
    return std::nullopt;
  }
  State init;
  init.coords = pos;
  int init_index = append_init(samples, init, setup.goal);

  SteeringModel model;  // the simulated robot is a point tracking straight segments
  double r = plan_radius(setup);
  NeighborGraph graph = build_neighbor_graph(samples.states, model, r, 1);
  GmtParams params;
  params.lambda = setup.lambda;
  params.radius = r;
  PlanResult res = gmt_plan(samples, graph, obstacles, setup.goal, init_index, params);
  if (res.status != PlanStatus::success) return std::nullopt;
  return res.path;
}

}  // namespace

TrialOutcome run_trial(const ScenarioConfig& cfg, std::uint64_t trial_seed) {
  if (!(cfg.control_dt > 0.0) || !(cfg.time_limit > 0.0) || !(cfg.robot_speed >= 0.0) ||
      !(cfg.replan_latency > 0.0) || !(cfg.collapse_rate >= 0.0) ||
      !(cfg.disturbance_sigma >= 0.0) || !(cfg.spawn_box_size > 0.0)) {
    throw InvalidInputError("scenario timing/rate parameters must be positive");
  }
  const int d = cfg.base.obstacles.dim;
  Pcg32 rng(trial_seed);
  ObstacleSet obstacles = cfg.base.obstacles;
  std::vector<double> pos = cfg.base.init.coords;

  TrialOutcome outcome;
  outcome.path_travelled.push_back(cfg.base.init);
  bool goal_blocked = false;

  auto initial = plan_from(cfg.base, pos, obstacles, draw_seed(rng), &goal_blocked);
  if (!initial) {
    outcome.result = TrialOutcome::Result::timed_out;
    return outcome;
  }
  std::vector<State> plan = std::move(*initial);
  std::size_t waypoint = 1;

  double t = 0.0;
  double next_replan = cfg.replan_latency;
  const double half = 0.5 * cfg.spawn_box_size;

  while (true) {
    // (a) collapse events: Poisson spawns with centers that never cover the
    // robot's current position (old plans can still run into them later).
    int events = rng.poisson(cfg.collapse_rate * cfg.control_dt);
    for (int e = 0; e < events; ++e) {
      for (int attempt = 0; attempt < 1000; ++attempt) {
        Aabb box;
        box.lo.resize(d);
        box.hi.resize(d);
        for (int k = 0; k < d; ++k) {
          double c = rng.next_double();
          box.lo[k] = c - half;
          box.hi[k] = c + half;
        }
        if (box.contains(pos)) continue;
        obstacles.boxes.push_back(std::move(box));
        ++outcome.spawned;
        break;
      }
    }

    // (b) track the plan at robot_speed, then disturb.
    double advance = cfg.robot_speed * cfg.control_dt;
    while (advance > 0.0 && waypoint < plan.size()) {
      double seg_len = euclidean_distance(pos, plan[waypoint].coords);
      if (seg_len <= advance) {
        pos = plan[waypoint].coords;
        advance -= seg_len;
        ++waypoint;
      } else {
        double f = advance / seg_len;
        for (int k = 0; k < d; ++k) pos[k] += f * (plan[waypoint].coords[k] - pos[k]);
        advance = 0.0;
      }
    }
    if (cfg.disturbance_sigma > 0.0) {
      double norm_sq = 0.0;
      for (int k = 0; k < d; ++k) {
        double g = std::clamp(rng.gaussian(), -6.0, 6.0);
        double dx = g * cfg.disturbance_sigma;
        pos[k] += dx;
        norm_sq += dx * dx;
      }
      if (std::sqrt(norm_sq) > 3.0 * cfg.disturbance_sigma) ++outcome.noise_outliers;
    }
    for (int k = 0; k < d; ++k) pos[k] = std::clamp(pos[k], 0.0, 1.0);
    outcome.path_travelled.push_back(State{pos, std::nullopt});
    t += cfg.control_dt;

    // (c) replan completion: fresh samples from the current state and obstacle
    // field.  Once the goal is provably buried, further replans are pointless
    // and are skipped (the rejection budget makes each one expensive).
    if (t >= next_replan - 1e-9) {
      if (!goal_blocked) {
        ++outcome.replans;
        auto fresh = plan_from(cfg.base, pos, obstacles, draw_seed(rng), &goal_blocked);
        if (fresh) {
          plan = std::move(*fresh);
          waypoint = 1;
        }
      }
      next_replan += cfg.replan_latency;
      if (next_replan <= t) next_replan = t + cfg.replan_latency;
    }

    // (d) trial end conditions.
    if (!point_free(pos, obstacles)) {
      outcome.result = TrialOutcome::Result::collided;
      break;
    }
    if (cfg.base.goal.box.contains(pos)) {
      outcome.result = TrialOutcome::Result::reached_goal;
      break;
    }
    if (t >= cfg.time_limit - 1e-9) {
      outcome.result = TrialOutcome::Result::timed_out;
      break;
    }
  }
  outcome.time = t;
  return outcome;
}

std::vector<CampaignCell> run_campaign(const ScenarioConfig& cfg,
                                       const std::vector<double>& latencies,
                                       const std::vector<double>& rates,
                                       const std::vector<double>& sigmas, int workers) {
  if (latencies.empty() || rates.empty() || sigmas.empty() || cfg.trials < 1) {
    throw InvalidInputError("campaign needs at least one cell and one trial");
  }
  std::vector<CampaignCell> cells;
  for (double lat : latencies) {
    for (double rate : rates) {
      for (double sigma : sigmas) {
        cells.push_back({lat, rate, sigma, cfg.trials, 0});
      }
    }
  }

  struct Task {
    std::size_t cell;
    std::uint64_t seed;
  };
  std::vector<Task> tasks;
  tasks.reserve(cells.size() * cfg.trials);
  for (std::size_t c = 0; c < cells.size(); ++c) {
    // Seeds hash the cell parameters and the trial counter, so a cell's trials
    // replay identically under any grid ordering or trial-count extension.
    std::uint64_t cell_key = mix64(cfg.seed, std::bit_cast<std::uint64_t>(cells[c].latency));
    cell_key = mix64(cell_key, std::bit_cast<std::uint64_t>(cells[c].rate));
    cell_key = mix64(cell_key, std::bit_cast<std::uint64_t>(cells[c].sigma));
    for (int trial = 0; trial < cfg.trials; ++trial) {
      tasks.push_back({c, mix64(cell_key, static_cast<std::uint64_t>(trial))});
    }
  }

  std::vector<std::uint8_t> success(tasks.size(), 0);
  parallel_chunks(workers, tasks.size(), [&](std::size_t begin, std::size_t end) {
    for (std::size_t k = begin; k < end; ++k) {
      ScenarioConfig cell_cfg = cfg;
      const CampaignCell& cell = cells[tasks[k].cell];
      cell_cfg.replan_latency = cell.latency;
      cell_cfg.collapse_rate = cell.rate;
      cell_cfg.disturbance_sigma = cell.sigma;
      TrialOutcome out = run_trial(cell_cfg, tasks[k].seed);
      success[k] = out.result == TrialOutcome::Result::reached_goal ? 1 : 0;
    }
  });
  for (std::size_t k = 0; k < tasks.size(); ++k) {
    if (success[k]) ++cells[tasks[k].cell].successes;
  }
  return cells;
}

std::string campaign_csv(const std::vector<CampaignCell>& cells) {
  std::string csv = "latency_s,collapse_rate,sigma,trials,successes,success_rate\n";
  for (const auto& c : cells) {
    csv += double_str(c.latency) + "," + double_str(c.rate) + "," + double_str(c.sigma) + "," +
           std::to_string(c.trials) + "," + std::to_string(c.successes) + "," +
           double_str(c.success_rate()) + "\n";
  }
  return csv;
}

}  // namespace gmt
