#include <doctest.h>

#include <cmath>
#include <set>

#include "gmtplan/errors.hpp"
#include "gmtplan/planner.hpp"
#include "gmtplan/rng.hpp"
#include "support/oracles.hpp"

using namespace gmt;

namespace {

ObstacleSet no_obstacles(int dim) {
  ObstacleSet obs;
  obs.dim = dim;
  return obs;
}

GoalRegion goal_box(std::vector<double> lo, std::vector<double> hi) {
  return GoalRegion{Aabb{std::move(lo), std::move(hi)}};
}

struct Built {
  SampleSet samples;
  NeighborGraph graph;
  int init_index = -1;
  GmtParams params;
};

Built build_problem(const ObstacleSet& obs, const GoalRegion& goal, const State& init, int n,
                    double lambda, std::uint64_t seed = 0) {
  Built b;
  SampleSource src;
  if (seed != 0) {
    src.kind = SampleSource::Kind::uniform;
    src.seed = seed;
  }
  b.samples = sample_free(n, obs, goal, src);
  b.init_index = append_init(b.samples, init, goal);
  RadiusParams rp;
  rp.dimension = obs.dim;
  rp.n = n;
  double r = connection_radius(rp);
  b.graph = build_neighbor_graph(b.samples.states, SteeringModel{}, r);
  b.params.lambda = lambda;
  b.params.radius = r;
  return b;
}

double path_cost(const PlanResult& res, const NeighborGraph& g, const SampleSet& samples) {
  double total = 0.0;
  for (std::size_t k = 1; k < res.path_indices.size(); ++k) {
    total += connect_cost(samples.states[res.path_indices[k - 1]],
                          samples.states[res.path_indices[k]], g.model);
  }
  return total;
}

}  // namespace

TEST_CASE("open-field plan reaches a point goal near the straight-line cost") {
  ObstacleSet obs = no_obstacles(2);
  GoalRegion goal = goal_box({0.9, 0.9}, {0.9, 0.9});
  State init{{0.1, 0.1}, std::nullopt};
  Built b = build_problem(obs, goal, init, 2000, 1.0);

  PlanResult res = gmt_plan(b.samples, b.graph, obs, goal, b.init_index, b.params);
  REQUIRE(res.status == PlanStatus::success);
  double straight = 0.8 * std::sqrt(2.0);
  CHECK(res.cost >= straight - 1e-12);
  CHECK(res.cost <= 1.31);

  REQUIRE_FALSE(res.path_indices.empty());
  CHECK(res.path_indices.front() == b.init_index);
  CHECK(goal.contains(b.samples.states[res.path_indices.back()]));
  CHECK(res.path.size() == res.path_indices.size());
  CHECK(res.path.front().coords == init.coords);
  CHECK(polyline_free(res.path, obs));
  CHECK(res.cost == doctest::Approx(path_cost(res, b.graph, b.samples)).epsilon(1e-12));
  CHECK(res.cost == res.tree.cost[res.path_indices.back()]);

  PlanResult oracle = dijkstra_oracle(b.samples, b.graph, obs, goal, b.init_index);
  REQUIRE(oracle.status == PlanStatus::success);
  CHECK(res.cost >= oracle.cost - 1e-12);
}

TEST_CASE("an init already inside the goal succeeds immediately") {
  ObstacleSet obs = no_obstacles(2);
  GoalRegion goal = goal_box({0.4, 0.4}, {0.6, 0.6});
  State init{{0.5, 0.5}, std::nullopt};

  SampleSet samples = sample_free(1, obs, goal, SampleSource{});
  int init_index = append_init(samples, init, goal);
  NeighborGraph g = build_neighbor_graph(samples.states, SteeringModel{}, 0.3);
  GmtParams params;
  params.radius = 0.3;

  PlanResult res = gmt_plan(samples, g, obs, goal, init_index, params);
  CHECK(res.status == PlanStatus::success);
  CHECK(res.cost == 0.0);
  CHECK(res.iterations == 0);
  CHECK(res.path_indices == std::vector<int>{init_index});
  CHECK(res.total_collision_checks == 0);

  PlanResult fres = fmt_plan(samples, g, obs, goal, init_index);
  CHECK(fres.status == PlanStatus::success);
  CHECK(fres.cost == 0.0);
  CHECK(fres.path_indices == std::vector<int>{init_index});
}

TEST_CASE("a sealed goal pocket exhausts the open set") {
  ObstacleSet obs = no_obstacles(2);
  obs.boxes.push_back(Aabb{{0.6, 0.6}, {1.0, 0.7}});
  obs.boxes.push_back(Aabb{{0.6, 0.6}, {0.7, 1.0}});
  GoalRegion goal = goal_box({0.8, 0.8}, {0.9, 0.9});
  State init{{0.1, 0.1}, std::nullopt};
  Built b = build_problem(obs, goal, init, 800, 1.0);

  PlanResult res = gmt_plan(b.samples, b.graph, obs, goal, b.init_index, b.params);
  CHECK(res.status == PlanStatus::failure_open_empty);
  CHECK(res.path_indices.empty());
  CHECK(res.cost == std::numeric_limits<double>::infinity());
  CHECK(res.iterations > 0);

  CHECK(fmt_plan(b.samples, b.graph, obs, goal, b.init_index).status ==
        PlanStatus::failure_open_empty);
  CHECK(dijkstra_oracle(b.samples, b.graph, obs, goal, b.init_index).status ==
        PlanStatus::failure_open_empty);
}

TEST_CASE("colliding init or empty goal reports infeasible input") {
  ObstacleSet obs = no_obstacles(2);
  obs.boxes.push_back(Aabb{{0.4, 0.4}, {0.6, 0.6}});
  GoalRegion goal = goal_box({0.8, 0.8}, {0.9, 0.9});
  SampleSet samples = sample_free(50, obs, goal, SampleSource{});
  int init_index = append_init(samples, State{{0.5, 0.5}, std::nullopt}, goal);
  NeighborGraph g = build_neighbor_graph(samples.states, SteeringModel{}, 0.3);
  GmtParams params;
  params.radius = 0.3;

  PlanResult res = gmt_plan(samples, g, obs, goal, init_index, params);
  CHECK(res.status == PlanStatus::infeasible_input);

  SampleSet no_goal = samples;
  no_goal.goal_indices.clear();
  int free_init = 0;  // sample 0 is free by construction
  CHECK(gmt_plan(no_goal, g, obs, goal, free_init, params).status ==
        PlanStatus::infeasible_input);
}

TEST_CASE("parameter validation throws") {
  ObstacleSet obs = no_obstacles(2);
  GoalRegion goal = goal_box({0.8, 0.8}, {0.9, 0.9});
  SampleSet samples = sample_free(20, obs, goal, SampleSource{});
  int init_index = append_init(samples, State{{0.1, 0.1}, std::nullopt}, goal);
  NeighborGraph g = build_neighbor_graph(samples.states, SteeringModel{}, 0.3);

  GmtParams params;
  params.radius = 0.3;
  params.lambda = 0.0;
  CHECK_THROWS_AS(gmt_plan(samples, g, obs, goal, init_index, params), InvalidInputError);
  params.lambda = 1.5;
  CHECK_THROWS_AS(gmt_plan(samples, g, obs, goal, init_index, params), InvalidInputError);
  params.lambda = 1.0;
  params.radius = 0.25;
  CHECK_THROWS_AS(gmt_plan(samples, g, obs, goal, init_index, params), InvalidInputError);
  params.radius = 0.3;
  CHECK_THROWS_AS(gmt_plan(samples, g, obs, goal, -1, params), InvalidInputError);
  CHECK_THROWS_AS(gmt_plan(samples, g, obs, goal, g.n, params), InvalidInputError);
}

TEST_CASE("tiny lambda reproduces the one-node-at-a-time baseline") {
  Pcg32 rng(8080);
  int compared = 0;
  for (int rep = 0; rep < 8 && compared < 5; ++rep) {
    test::RandomProblemOptions opt;
    opt.n_min = 120;
    opt.n_max = 250;
    test::RandomProblem prob = test::make_random_problem(rng, opt);
    NeighborGraph g = build_neighbor_graph(prob.samples.states, prob.model, prob.radius);

    PlanResult fmt = fmt_plan(prob.samples, g, prob.obs, prob.goal, prob.init_index);
    if (fmt.status != PlanStatus::success) continue;

    // Pick lambda small enough that no two distinct tree costs ever share a
    // group: delta below half the smallest gap between distinct costs.
    std::vector<double> costs;
    for (double c : fmt.tree.cost) {
      if (std::isfinite(c)) costs.push_back(c);
    }
    std::sort(costs.begin(), costs.end());
    double min_gap = std::numeric_limits<double>::infinity();
    for (std::size_t k = 1; k < costs.size(); ++k) {
      if (costs[k] > costs[k - 1]) min_gap = std::min(min_gap, costs[k] - costs[k - 1]);
    }
    if (!std::isfinite(min_gap)) continue;

    GmtParams params;
    params.radius = prob.radius;
    params.lambda = std::min(1.0, 0.49 * min_gap / prob.radius);
    if (params.lambda <= 0.0) continue;
    PlanResult gmt = gmt_plan(prob.samples, g, prob.obs, prob.goal, prob.init_index, params);

    for (int size : gmt.stats.group_sizes) CHECK(size <= 1);
    CHECK(test::same_tree(gmt, fmt));
    ++compared;
  }
  CHECK(compared >= 3);
}

TEST_CASE("corridor guarantee holds and its checker rejects violations") {
  ObstacleSet obs = no_obstacles(2);
  GoalRegion goal = goal_box({0.83, 0.48}, {0.87, 0.52});
  const double r = 0.08;

  std::vector<State> waypoints;
  for (double x = 0.15; x < 0.8349; x += 0.04) waypoints.push_back(State{{x, 0.5}, std::nullopt});
  waypoints.push_back(State{{0.85, 0.5}, std::nullopt});
  State init = waypoints.front();

  // Samples: the waypoints themselves plus uniform filler, goal tags recomputed.
  SampleSet samples;
  samples.states = waypoints;
  Pcg32 rng(12);
  for (int k = 0; k < 300; ++k) {
    samples.states.push_back(State{{rng.next_double(), rng.next_double()}, std::nullopt});
  }
  for (int k = 0; k < static_cast<int>(samples.states.size()); ++k) {
    if (goal.contains(samples.states[k])) samples.goal_indices.push_back(k);
  }
  int init_index = append_init(samples, init, goal);
  REQUIRE(init_index == 0);

  NeighborGraph g = build_neighbor_graph(samples.states, SteeringModel{}, r);
  for (double lambda : {0.2, 0.5, 1.0}) {
    GmtParams params;
    params.radius = r;
    params.lambda = lambda;
    PlanResult res = gmt_plan(samples, g, obs, goal, init_index, params);
    REQUIRE(res.status == PlanStatus::success);
    CHECK(corridor_bound_check(waypoints, r, lambda, res, obs, goal, init));

    // A fabricated cost just past the bound must fail the check.
    PlanResult bad = res;
    double total = 0.0;
    for (std::size_t m = 1; m < waypoints.size(); ++m) {
      total += euclidean_distance(waypoints[m - 1].coords, waypoints[m].coords);
    }
    bad.cost = (1.0 + 2.0 * lambda) * total * 1.001;
    CHECK_FALSE(corridor_bound_check(waypoints, r, lambda, bad, obs, goal, init));
  }

  GmtParams params;
  params.radius = r;
  PlanResult res = gmt_plan(samples, g, obs, goal, init_index, params);

  // Hypothesis violations are input errors, not bound failures.
  CHECK_THROWS_AS(corridor_bound_check(waypoints, 0.03, 1.0, res, obs, goal, init),
                  InvalidInputError);
  ObstacleSet close_box = obs;
  close_box.boxes.push_back(Aabb{{0.0, 0.0}, {1.0, 0.5 - r + 1e-6}});
  CHECK_THROWS_AS(corridor_bound_check(waypoints, r, 1.0, res, close_box, goal, init),
                  InvalidInputError);
  std::vector<State> not_from_init(waypoints.begin() + 1, waypoints.end());
  CHECK_THROWS_AS(corridor_bound_check(not_from_init, r, 1.0, res, obs, goal, init),
                  InvalidInputError);
}

TEST_CASE("dijkstra on a two-sample line") {
  ObstacleSet obs = no_obstacles(2);
  GoalRegion goal = goal_box({0.49, 0.49}, {0.51, 0.51});
  SampleSet samples;
  samples.states = {State{{0.4, 0.5}, std::nullopt}, State{{0.5, 0.5}, std::nullopt}};
  samples.goal_indices = {1};
  NeighborGraph g = build_neighbor_graph(samples.states, SteeringModel{}, 0.15);

  PlanResult res = dijkstra_oracle(samples, g, obs, goal, 0);
  REQUIRE(res.status == PlanStatus::success);
  CHECK(res.cost == doctest::Approx(0.1).epsilon(1e-12));
  CHECK(res.path_indices == std::vector<int>{0, 1});
}

TEST_CASE("planner cost never beats exact search and matches it without obstacles") {
  Pcg32 rng(909);
  int succeeded = 0;
  for (int rep = 0; rep < 8; ++rep) {
    test::RandomProblemOptions opt;
    opt.n_min = 150;
    opt.n_max = 300;
    opt.with_obstacles = true;
    test::RandomProblem prob = test::make_random_problem(rng, opt);
    NeighborGraph g = build_neighbor_graph(prob.samples.states, prob.model, prob.radius);
    GmtParams params;
    params.radius = prob.radius;

    PlanResult d = dijkstra_oracle(prob.samples, g, prob.obs, prob.goal, prob.init_index);
    PlanResult a = gmt_plan(prob.samples, g, prob.obs, prob.goal, prob.init_index, params);
    PlanResult f = fmt_plan(prob.samples, g, prob.obs, prob.goal, prob.init_index);

    if (a.status == PlanStatus::success) {
      REQUIRE(d.status == PlanStatus::success);
      CHECK(a.cost >= d.cost - 1e-12);
      ++succeeded;
    }
    if (f.status == PlanStatus::success) CHECK(f.cost >= d.cost - 1e-12);

    // Lazy checking can only save work relative to the eager oracle.
    CHECK(a.total_collision_checks <= d.total_collision_checks);
  }
  CHECK(succeeded >= 4);

  for (int rep = 0; rep < 10; ++rep) {
    test::RandomProblemOptions opt;
    opt.with_obstacles = false;
    opt.n_min = 100;
    opt.n_max = 220;
    test::RandomProblem prob = test::make_random_problem(rng, opt);
    NeighborGraph g = build_neighbor_graph(prob.samples.states, prob.model, prob.radius);

    PlanResult d = dijkstra_oracle(prob.samples, g, prob.obs, prob.goal, prob.init_index);
    PlanResult f = fmt_plan(prob.samples, g, prob.obs, prob.goal, prob.init_index);
    REQUIRE(d.status == f.status);
    if (d.status == PlanStatus::success) {
      CHECK(f.cost == d.cost);
      CHECK(f.path_indices == d.path_indices);
    }
  }
}

TEST_CASE("wavefront invariants hold after every iteration") {
  Pcg32 rng(111);
  test::RandomProblemOptions opt;
  opt.n_min = 250;
  opt.n_max = 400;
  test::RandomProblem prob = test::make_random_problem(rng, opt);
  NeighborGraph g = build_neighbor_graph(prob.samples.states, prob.model, prob.radius);
  GmtParams params;
  params.radius = prob.radius;
  params.lambda = 0.5;
  const double delta = params.delta();

  long long hook_calls = 0;
  auto hook = [&](const Wavefront& w, long long iter) {
    ++hook_calls;
    const int n = static_cast<int>(w.label.size());
    for (int v = 0; v < n; ++v) {
      switch (w.label[v]) {
        case NodeLabel::unexplored:
          CHECK(w.cost[v] == std::numeric_limits<double>::infinity());
          CHECK(w.parent[v] == -1);
          CHECK(w.iteration_added[v] == -1);
          break;
        case NodeLabel::closed:
          // Closed nodes were group members at or before this threshold.
          CHECK(w.cost[v] <= iter * delta + 1e-12);
          [[fallthrough]];
        case NodeLabel::open:
          CHECK(std::isfinite(w.cost[v]));
          if (v != prob.init_index) {
            REQUIRE(w.parent[v] >= 0);
            CHECK(w.parent[v] != v);
            CHECK(w.label[w.parent[v]] != NodeLabel::unexplored);
            CHECK(w.cost[v] >= w.cost[w.parent[v]]);
            CHECK(w.cost[v] == w.cost[w.parent[v]] +
                                   connect_cost(prob.samples.states[w.parent[v]],
                                                prob.samples.states[v], g.model));
          }
          break;
      }
    }
  };

  PlanResult res =
      gmt_plan(prob.samples, g, prob.obs, prob.goal, prob.init_index, params, hook);
  CHECK(hook_calls > 0);

  // Every node the search added obeys the threshold-plus-one-edge cap.
  const double cap_slack = 1e-12;
  for (std::size_t v = 0; v < res.tree.cost.size(); ++v) {
    long long it = res.tree.iteration_added[v];
    if (it <= 0) continue;
    CHECK(std::isfinite(res.tree.cost[v]));
    CHECK(res.tree.cost[v] <= it * delta + params.radius + cap_slack);
  }
}

TEST_CASE("worker count never changes the result") {
  Pcg32 rng(222);
  for (int rep = 0; rep < 6; ++rep) {
    test::RandomProblemOptions opt;
    opt.dubins = (rep >= 4);
    opt.n_min = opt.dubins ? 80 : 150;
    opt.n_max = opt.dubins ? 140 : 280;
    test::RandomProblem prob = test::make_random_problem(rng, opt);
    NeighborGraph g = build_neighbor_graph(prob.samples.states, prob.model, prob.radius);

    PlanResult base;
    bool first = true;
    for (int workers : {1, 2, 8}) {
      GmtParams params;
      params.radius = prob.radius;
      params.lambda = 0.7;
      params.workers = workers;
      PlanResult res = gmt_plan(prob.samples, g, prob.obs, prob.goal, prob.init_index, params);
      if (first) {
        base = res;
        first = false;
      } else {
        CHECK(test::same_tree(res, base));
        CHECK(res.iterations == base.iterations);
        CHECK(res.total_collision_checks == base.total_collision_checks);
      }
    }
  }
}

TEST_CASE("group thresholds are swept in order") {
  // With lambda = 1 the group threshold grows by one radius per iteration; on a
  // fixed seed the recorded group sizes must be reproducible and their sum must
  // count every closed node exactly once.
  ObstacleSet obs = no_obstacles(2);
  obs.boxes.push_back(Aabb{{0.3, 0.0}, {0.4, 0.7}});
  GoalRegion goal = goal_box({0.8, 0.1}, {0.9, 0.2});
  State init{{0.1, 0.1}, std::nullopt};
  Built b = build_problem(obs, goal, init, 600, 1.0, 4242);

  PlanResult res = gmt_plan(b.samples, b.graph, obs, goal, b.init_index, b.params);
  REQUIRE(res.status == PlanStatus::success);

  long long closed = 0;
  for (NodeLabel l : res.tree.label) {
    if (l == NodeLabel::closed) ++closed;
  }
  long long swept = 0;
  // The final group returns before closing, so it stays open in the tree.
  REQUIRE_FALSE(res.stats.group_sizes.empty());
  for (std::size_t k = 0; k + 1 < res.stats.group_sizes.size(); ++k) {
    swept += res.stats.group_sizes[k];
  }
  CHECK(swept == closed);
  CHECK(res.stats.group_sizes.size() == res.stats.nodes_added.size());
  CHECK(res.stats.group_sizes.size() == res.stats.collision_checks.size());

  long long checks = 0;
  for (long long c : res.stats.collision_checks) checks += c;
  CHECK(checks == res.total_collision_checks);
}
