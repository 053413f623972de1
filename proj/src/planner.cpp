#include "gmtplan/planner.hpp"

#include <algorithm>
#include <cmath>
#include <queue>
#include <string>

#include "gmtplan/errors.hpp"
#include "gmtplan/parallel.hpp"

namespace gmt {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

void validate_plan_inputs(const SampleSet& samples, const NeighborGraph& graph, int init_index) {
  const int n = static_cast<int>(samples.states.size());
  if (graph.n != n) throw InvalidInputError("graph was built over a different sample count");
  if (init_index < 0 || init_index >= n) {
    throw InvalidInputError("init_index " + std::to_string(init_index) + " out of range");
  }
}

Wavefront make_wavefront(int n, int init_index) {
  Wavefront w;
  w.label.assign(n, NodeLabel::unexplored);
  w.cost.assign(n, kInf);
  w.parent.assign(n, -1);
  w.iteration_added.assign(n, -1);
  w.label[init_index] = NodeLabel::open;
  w.cost[init_index] = 0.0;
  w.iteration_added[init_index] = 0;
  return w;
}

// True when the problem statement itself rules out planning: init colliding or
// no goal sample to reach.
bool infeasible_input(const SampleSet& samples, const ObstacleSet& obs, int init_index) {
  return !point_free(samples.states[init_index], obs) || samples.goal_indices.empty();
}

void finalize_success(PlanResult& r, const SampleSet& samples, int goal_node) {
  r.status = PlanStatus::success;
  r.cost = r.tree.cost[goal_node];
  for (int v = goal_node; v >= 0; v = r.tree.parent[v]) r.path_indices.push_back(v);
  std::reverse(r.path_indices.begin(), r.path_indices.end());
  r.path.reserve(r.path_indices.size());
  for (int idx : r.path_indices) r.path.push_back(samples.states[idx]);
}

// The one lazily checked motion per candidate: straight edges are clipped
// exactly, Dubins edges check their cached discretized path.
bool motion_free(const NeighborGraph& graph, const SampleSet& samples, const ObstacleSet& obs,
                 int from, int to) {
  if (const std::vector<State>* path = graph.edge_path(from, to)) {
    return polyline_free(*path, obs);
  }
  return segment_free(samples.states[from], samples.states[to], obs);
}

struct CandidateResult {
  int parent = -1;
  double cost = kInf;
  std::uint8_t checked = 0;
};

// Locally optimal connection for candidate x: cheapest open in-neighbor wins,
// ties to the smallest index (in-lists are sorted, strict < keeps the first).
CandidateResult connect_candidate(int x, const Wavefront& w, const NeighborGraph& graph,
                                  const SampleSet& samples, const ObstacleSet& obs) {
  CandidateResult res;
  int best = -1;
  double best_cost = kInf;
  for (const auto& e : graph.in[x]) {
    if (w.label[e.other] != NodeLabel::open) continue;
    double c = w.cost[e.other] + e.cost;
    if (c < best_cost) {
      best_cost = c;
      best = e.other;
    }
  }
  if (best < 0) return res;
  res.checked = 1;
  if (motion_free(graph, samples, obs, best, x)) {
    res.parent = best;
    res.cost = best_cost;
  }
  return res;
}

}  // namespace

PlanResult gmt_plan(const SampleSet& samples, const NeighborGraph& graph, const ObstacleSet& obs,
                    const GoalRegion& goal, int init_index, const GmtParams& params,
                    const IterationHook& hook) {
  validate_plan_inputs(samples, graph, init_index);
  if (!(params.lambda > 0.0 && params.lambda <= 1.0)) {
    throw InvalidInputError("lambda must be in (0, 1]");
  }
  if (params.radius != graph.radius) {
    throw InvalidInputError("params.radius differs from the graph's connection radius");
  }
  const int n = graph.n;
  const double delta = params.delta();

  PlanResult r;
  if (infeasible_input(samples, obs, init_index)) return r;
  r.tree = make_wavefront(n, init_index);
  Wavefront& w = r.tree;

  std::vector<int> group;
  std::vector<int> candidates;
  std::vector<CandidateResult> results;
  long long i = 0;

  while (true) {
    // Termination (a): nothing left to expand.
    double min_open = kInf;
    for (int v = 0; v < n; ++v) {
      if (w.label[v] == NodeLabel::open) min_open = std::min(min_open, w.cost[v]);
    }
    if (min_open == kInf) {
      r.status = PlanStatus::failure_open_empty;
      r.iterations = i;
      return r;
    }

    // Group i holds every open node at or behind the wavefront threshold.  An
    // empty group fast-forwards i to the next populated threshold instead of
    // spinning one empty iteration per delta.
    if (min_open > i * delta) {
      long long jump = static_cast<long long>(std::ceil(min_open / delta));
      i = std::max(jump, i + 1);
      while (min_open > i * delta) ++i;
    }
    group.clear();
    for (int v = 0; v < n; ++v) {
      if (w.label[v] == NodeLabel::open && w.cost[v] <= i * delta) group.push_back(v);
    }
    r.stats.group_sizes.push_back(static_cast<int>(group.size()));

    // Termination (b): the wavefront reached the goal; return the cheapest goal
    // member of this group without expanding it.
    int goal_node = -1;
    for (int v : group) {
      if (!goal.contains(samples.states[v])) continue;
      if (goal_node < 0 || w.cost[v] < w.cost[goal_node]) goal_node = v;
    }
    if (goal_node >= 0) {
      r.stats.nodes_added.push_back(0);
      r.stats.collision_checks.push_back(0);
      r.iterations = i;
      finalize_success(r, samples, goal_node);
      return r;
    }

    // Deduplicated unexplored out-neighbors of the group, in index order.
    candidates.clear();
    for (int g : group) {
      for (const auto& e : graph.out[g]) {
        if (w.label[e.other] == NodeLabel::unexplored) candidates.push_back(e.other);
      }
    }
    std::sort(candidates.begin(), candidates.end());
    candidates.erase(std::unique(candidates.begin(), candidates.end()), candidates.end());

    // Parallel map: each candidate reads iteration-start labels/costs and writes
    // its own slot only; the commit below is sequential, so worker count can
    // never change the tree.
    results.assign(candidates.size(), CandidateResult{});
    parallel_chunks(params.workers, candidates.size(), [&](std::size_t begin, std::size_t end) {
      for (std::size_t k = begin; k < end; ++k) {
        results[k] = connect_candidate(candidates[k], w, graph, samples, obs);
      }
    });

    int added = 0;
    long long checks = 0;
    for (std::size_t k = 0; k < candidates.size(); ++k) {
      checks += results[k].checked;
      if (results[k].parent < 0) continue;
      int x = candidates[k];
      w.label[x] = NodeLabel::open;
      w.cost[x] = results[k].cost;
      w.parent[x] = results[k].parent;
      w.iteration_added[x] = i;
      ++added;
    }
    for (int g : group) w.label[g] = NodeLabel::closed;

    r.stats.nodes_added.push_back(added);
    r.stats.collision_checks.push_back(checks);
    r.total_collision_checks += checks;
    if (hook) hook(w, i);
    ++i;
  }
}

PlanResult fmt_plan(const SampleSet& samples, const NeighborGraph& graph, const ObstacleSet& obs,
                    const GoalRegion& goal, int init_index) {
  validate_plan_inputs(samples, graph, init_index);
  const int n = graph.n;

  PlanResult r;
  if (infeasible_input(samples, obs, init_index)) return r;
  r.tree = make_wavefront(n, init_index);
  Wavefront& w = r.tree;

  std::vector<CandidateResult> results;
  long long iter = 0;

  while (true) {
    int z = -1;
    for (int v = 0; v < n; ++v) {
      if (w.label[v] == NodeLabel::open && (z < 0 || w.cost[v] < w.cost[z])) z = v;
    }
    if (z < 0) {
      r.status = PlanStatus::failure_open_empty;
      r.iterations = iter;
      return r;
    }
    if (goal.contains(samples.states[z])) {
      r.stats.group_sizes.push_back(1);
      r.stats.nodes_added.push_back(0);
      r.stats.collision_checks.push_back(0);
      r.iterations = iter;
      finalize_success(r, samples, z);
      return r;
    }

    // Unexplored out-neighbors of z connect against the open set as it stood
    // when z was selected; additions commit only after the whole scan, exactly
    // like a singleton group expansion.
    const auto& out = graph.out[z];
    results.assign(out.size(), CandidateResult{});
    for (std::size_t k = 0; k < out.size(); ++k) {
      if (w.label[out[k].other] != NodeLabel::unexplored) continue;
      results[k] = connect_candidate(out[k].other, w, graph, samples, obs);
    }

    int added = 0;
    long long checks = 0;
    for (std::size_t k = 0; k < out.size(); ++k) {
      checks += results[k].checked;
      if (results[k].parent < 0) continue;
      int x = out[k].other;
      w.label[x] = NodeLabel::open;
      w.cost[x] = results[k].cost;
      w.parent[x] = results[k].parent;
      w.iteration_added[x] = iter;
      ++added;
    }
    w.label[z] = NodeLabel::closed;

    r.stats.group_sizes.push_back(1);
    r.stats.nodes_added.push_back(added);
    r.stats.collision_checks.push_back(checks);
    r.total_collision_checks += checks;
    ++iter;
  }
}

PlanResult dijkstra_oracle(const SampleSet& samples, const NeighborGraph& graph,
                           const ObstacleSet& obs, const GoalRegion& goal, int init_index) {
  validate_plan_inputs(samples, graph, init_index);
  const int n = graph.n;

  PlanResult r;
  if (infeasible_input(samples, obs, init_index)) return r;
  r.tree = make_wavefront(n, init_index);
  Wavefront& w = r.tree;

  // Eager phase: every edge is checked up front.  Symmetric (Euclidean) pairs
  // share one segment check; Dubins edges are distinct motions per direction.
  std::vector<std::vector<std::uint8_t>> edge_ok(n);
  long long checks = 0;
  const bool symmetric = graph.model.kind == SteeringModel::Kind::euclidean;
  for (int u = 0; u < n; ++u) edge_ok[u].assign(graph.out[u].size(), 0);
  for (int u = 0; u < n; ++u) {
    const auto& out = graph.out[u];
    for (std::size_t k = 0; k < out.size(); ++k) {
      int v = out[k].other;
      if (symmetric && v < u) {
        // Mirror of a pair already checked: costs are symmetric, reuse it.
        const auto& back = graph.out[v];
        auto it = std::lower_bound(back.begin(), back.end(), u,
                                   [](const NeighborGraph::Edge& e, int t) { return e.other < t; });
        edge_ok[u][k] = edge_ok[v][it - back.begin()];
        continue;
      }
      ++checks;
      edge_ok[u][k] = motion_free(graph, samples, obs, u, v) ? 1 : 0;
    }
  }
  r.total_collision_checks = checks;
  r.stats.collision_checks.push_back(checks);

  using HeapItem = std::pair<double, int>;
  std::priority_queue<HeapItem, std::vector<HeapItem>, std::greater<>> heap;
  std::vector<std::uint8_t> settled(n, 0);
  heap.push({0.0, init_index});
  long long pops = 0;

  while (!heap.empty()) {
    auto [cost, u] = heap.top();
    heap.pop();
    if (settled[u]) continue;
    settled[u] = 1;
    w.label[u] = NodeLabel::closed;
    ++pops;
    if (goal.contains(samples.states[u])) {
      r.iterations = pops;
      finalize_success(r, samples, u);
      return r;
    }
    const auto& out = graph.out[u];
    for (std::size_t k = 0; k < out.size(); ++k) {
      if (!edge_ok[u][k]) continue;
      int v = out[k].other;
      if (settled[v]) continue;
      double c = w.cost[u] + out[k].cost;
      if (c < w.cost[v]) {
        w.cost[v] = c;
        w.parent[v] = u;
        if (w.label[v] == NodeLabel::unexplored) w.label[v] = NodeLabel::open;
        heap.push({c, v});
      }
    }
  }
  r.status = PlanStatus::failure_open_empty;
  r.iterations = pops;
  return r;
}

bool corridor_bound_check(const std::vector<State>& waypoints, double r, double lambda,
                          const PlanResult& result, const ObstacleSet& obs, const GoalRegion& goal,
                          const State& init) {
  if (waypoints.empty()) throw InvalidInputError("corridor needs at least one waypoint");
  if (!(r > 0.0)) throw InvalidInputError("corridor radius must be positive");
  if (!(lambda > 0.0 && lambda <= 1.0)) throw InvalidInputError("lambda must be in (0, 1]");
  if (waypoints.front().coords != init.coords) {
    throw InvalidInputError("waypoints[0] is not the start state");
  }
  if (!goal.contains(waypoints.back())) {
    throw InvalidInputError("last waypoint lies outside the goal region");
  }
  double total = 0.0;
  for (std::size_t m = 0; m < waypoints.size(); ++m) {
    if (m > 0) {
      double gap = euclidean_distance(waypoints[m - 1].coords, waypoints[m].coords);
      if (gap > r) {
        throw InvalidInputError("waypoints[" + std::to_string(m) + "]: gap " +
                                std::to_string(gap) + " exceeds the connection radius");
      }
      total += gap;
    }
    if (cube_boundary_clearance(waypoints[m].coords) < r) {
      throw InvalidInputError("waypoints[" + std::to_string(m) +
                              "]: ball clearance to the cube boundary is below r");
    }
    for (std::size_t b = 0; b < obs.boxes.size(); ++b) {
      if (point_box_distance(waypoints[m].coords, obs.boxes[b]) < r) {
        throw InvalidInputError("waypoints[" + std::to_string(m) + "]: ball clearance to box " +
                                std::to_string(b) + " is below r");
      }
    }
  }
  if (result.status != PlanStatus::success) return false;
  return result.cost <= (1.0 + 2.0 * lambda) * total + 1e-9;
}

}  // namespace gmt
