#pragma once

#include <cstdint>
#include <functional>
#include <limits>
#include <vector>

#include "gmtplan/graph.hpp"
#include "gmtplan/sampling.hpp"
#include "gmtplan/space.hpp"

namespace gmt {

enum class PlanStatus { success, failure_open_empty, infeasible_input };

enum class NodeLabel : std::uint8_t { unexplored, open, closed };

// Mutable planner state; every sample carries exactly one label at all times.
struct Wavefront {
  std::vector<NodeLabel> label;
  std::vector<double> cost;  // cost-to-arrive; +inf until connected
  std::vector<int> parent;   // -1 for the root and unconnected nodes
  std::vector<long long> iteration_added;
};

struct GmtParams {
  double lambda = 1.0;  // group threshold factor in (0, 1]; the wavefront sweeps
                        // all open nodes with cost <= i * lambda * radius
  double radius = 0.0;  // must equal the radius the graph was built with
  int workers = 1;      // threads for the per-iteration expansion map; any value
                        // produces bit-identical results

  double delta() const { return lambda * radius; }
};

struct IterationStats {
  std::vector<int> group_sizes;
  std::vector<int> nodes_added;
  std::vector<long long> collision_checks;
};

struct PlanResult {
  PlanStatus status = PlanStatus::infeasible_input;
  std::vector<int> path_indices;  // root..goal sample indices
  std::vector<State> path;
  double cost = std::numeric_limits<double>::infinity();
  long long iterations = 0;
  long long total_collision_checks = 0;
  Wavefront tree;
  IterationStats stats;
};

// Called after each iteration's commit with the wavefront and the iteration
// index; lets tests assert label/cost invariants without instrumenting the loop.
using IterationHook = std::function<void(const Wavefront&, long long iteration)>;

// Group-marching planner.  Each iteration expands the whole group of open nodes
// with cost-to-arrive <= i * delta at once: every unexplored out-neighbor of the
// group picks its locally optimal parent among all open in-neighbors (ties to
// the smallest sample index) and only that one connection is collision-checked.
// The expansion map over candidates is the only parallel region; candidates read
// iteration-start labels and costs and write only their own slot, so any worker
// count yields bit-identical trees.  Terminates with success as soon as a group
// contains a goal sample (minimum-cost member returned, before expanding that
// group), or with failure once no open nodes remain.  When a group comes up
// empty the iteration index jumps straight to the next populated threshold.
PlanResult gmt_plan(const SampleSet& samples, const NeighborGraph& graph, const ObstacleSet& obs,
                    const GoalRegion& goal, int init_index, const GmtParams& params,
                    const IterationHook& hook = {});

// Baseline that expands one minimum-cost open node per iteration with the same
// lazy locally-optimal connections; the lambda -> 0 limit of gmt_plan.
PlanResult fmt_plan(const SampleSet& samples, const NeighborGraph& graph, const ObstacleSet& obs,
                    const GoalRegion& goal, int init_index);

// Ground truth: collision-checks every edge eagerly, then runs exact Dijkstra
// over the surviving graph.  Slow by design; planners are compared against it.
PlanResult dijkstra_oracle(const SampleSet& samples, const NeighborGraph& graph,
                           const ObstacleSet& obs, const GoalRegion& goal, int init_index);

// Verifies the corridor hypotheses (start at init, end in goal, gaps <= r, and
// every waypoint ball B(y, r) inside free space -- distance >= r from each box
// and from the cube boundary), throwing InvalidInputError naming the violated
// clause, then checks result.cost <= (1 + 2*lambda) * sum of gaps + 1e-9.
bool corridor_bound_check(const std::vector<State>& waypoints, double r, double lambda,
                          const PlanResult& result, const ObstacleSet& obs, const GoalRegion& goal,
                          const State& init);

}  // namespace gmt
