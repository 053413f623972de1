#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "gmtplan/sampling.hpp"
#include "gmtplan/space.hpp"
#include "gmtplan/steering.hpp"

namespace gmt {

// Planning setup the simulator replans with (a point robot on straight segments).
struct PlanningSetup {
  ObstacleSet obstacles;  // static obstacles present at t = 0
  GoalRegion goal;
  State init;
  int n = 500;            // fresh samples per replan
  double lambda = 1.0;
  double eta = 0.0;
  std::optional<double> radius_override;
};

struct ScenarioConfig {
  PlanningSetup base;
  double collapse_rate = 0.0;      // expected obstacle spawns per second
  double spawn_box_size = 0.08;    // edge length of spawned cubes
  double disturbance_sigma = 0.0;  // per-axis Gaussian position noise per step
  double replan_latency = 0.1;     // seconds between plan refreshes
  double control_dt = 0.05;        // simulation step
  double robot_speed = 0.1;        // units per second along the plan
  double time_limit = 30.0;
  int trials = 50;
  std::uint64_t seed = 0;
};

struct TrialOutcome {
  enum class Result { reached_goal, collided, timed_out };

  Result result = Result::timed_out;
  double time = 0.0;       // simulated seconds until the trial ended
  int replans = 0;         // completed replans (successful or not), initial plan excluded
  int spawned = 0;         // obstacles that appeared during the trial
  int noise_outliers = 0;  // steps whose noise vector exceeded 3 sigma (draws are
                           // clamped per axis at 6 sigma, so these are logged, not fatal)
  std::vector<State> path_travelled;  // position after each step, starting at init
};

// One seeded trial: per step, obstacles spawn by a Poisson process (uniform
// centers that never cover the robot), the robot advances along its plan at
// robot_speed plus clamped Gaussian noise, a replan from the current state and
// obstacle set completes every replan_latency seconds, and collision / goal /
// timeout end the trial.  All randomness comes from one generator seeded here,
// so a (config, seed) pair replays exactly.
TrialOutcome run_trial(const ScenarioConfig& cfg, std::uint64_t trial_seed);

struct CampaignCell {
  double latency = 0.0;
  double rate = 0.0;
  double sigma = 0.0;
  int trials = 0;
  int successes = 0;

  double success_rate() const { return trials > 0 ? double(successes) / trials : 0.0; }
};

// Full (latency x rate x sigma) grid, cfg.trials trials per cell.  Trial seeds
// are derived from the master seed and the cell parameters plus trial counter,
// never from scheduling, so results are independent of worker count and adding
// trials never changes earlier ones.
std::vector<CampaignCell> run_campaign(const ScenarioConfig& cfg,
                                       const std::vector<double>& latencies,
                                       const std::vector<double>& rates,
                                       const std::vector<double>& sigmas, int workers = 1);

// CSV with header latency_s,collapse_rate,sigma,trials,successes,success_rate.
std::string campaign_csv(const std::vector<CampaignCell>& cells);

}  // namespace gmt
