#pragma once

#include <array>
#include <cstdint>
#include <utility>
#include <vector>

#include "gmtplan/graph.hpp"
#include "gmtplan/planner.hpp"
#include "gmtplan/rng.hpp"
#include "gmtplan/sampling.hpp"
#include "gmtplan/space.hpp"
#include "gmtplan/steering.hpp"

namespace gmt::test {

// Monte-Carlo estimate of the free fraction of the unit cube.
double mc_free_measure(const ObstacleSet& obs, int points, std::uint64_t seed);

// L2 star discrepancy by the direct (Warnock) formula, O(n^2 d).
double l2_star_discrepancy(const std::vector<State>& points);

// The plain double loop the grid-accelerated builder must reproduce exactly.
std::vector<std::vector<std::pair<int, double>>> brute_force_out_lists(
    const std::vector<State>& states, const SteeringModel& m, double radius);

// Independent minimum over discretized turn/straight/turn programs at unit-free
// scale: four turn-straight-turn words swept along a fine 1-D grid (the straight
// and final-turn lengths follow from each first-turn choice) plus both
// turn-turn-turn words on a coarse-to-fine 2-D grid.  Accurate to about 1e-3.
double dubins_bangbang_cost(const std::array<double, 3>& qa, const std::array<double, 3>& qb,
                            double rho);

// Exact infimum of path length from init to the goal box with the box interiors
// (not their boundaries) blocked: Dijkstra over init, every obstacle corner, and
// the goal corners.  Entry candidates are the goal's corners, which is exact
// whenever the taut path enters the region at a corner.  2D only.
double visibility_infimum(const ObstacleSet& obs, const std::vector<double>& init,
                          const Aabb& goal_box);

struct RandomProblemOptions {
  int dim = 2;
  bool dubins = false;
  bool with_obstacles = true;
  int n_min = 120;
  int n_max = 350;
};

struct RandomProblem {
  ObstacleSet obs;
  GoalRegion goal;
  State init;
  SteeringModel model;
  SampleSet samples;
  int init_index = -1;
  double radius = 0.0;
};

// Seeded problem generator shared by the property tests: scattered boxes, a free
// goal box, a free init, uniform samples.  Feasibility is not guaranteed; tests
// that need a plan filter on planner success.
RandomProblem make_random_problem(Pcg32& rng, const RandomProblemOptions& opt);

// Bit-level tree equality: status, parents, costs, path, iteration tags.
bool same_tree(const PlanResult& a, const PlanResult& b);

}  // namespace gmt::test
