#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "gmtplan/space.hpp"
#include "gmtplan/steering.hpp"

namespace gmt {

struct RadiusParams {
  int dimension = 2;
  long long n = 0;       // number of drawn samples (start state excluded)
  double eta = 0.0;      // tuning margin, >= 0
  double mu_free = 1.0;  // upper bound on free-space measure, in (0, 1]
};

// Volume of the d-dimensional Euclidean unit ball, pi^(d/2) / Gamma(d/2 + 1).
double unit_ball_volume(int d);

// r(n) = 4 * (1+eta)^(1/d) * (1/d)^(1/d) * (mu_free/zeta_d)^(1/d) * (log n / n)^(1/d).
// Shrinks as n grows while keeping ~log n expected neighbors per sample.
double connection_radius(const RadiusParams& p);

// Directed r-disk graph over the samples: j is an out-neighbor of i iff the
// steering cost i->j is <= radius (inclusive).  Euclidean graphs are symmetric;
// Dubins graphs generally are not.  Lists are sorted by the other endpoint's
// index and never contain self-edges.
struct NeighborGraph {
  struct Edge {
    int other = -1;      // target for out-lists, source for in-lists
    double cost = 0.0;   // steering cost in edge direction
    int path_id = -1;    // index into paths; -1 for exact (straight) connections
  };

  int n = 0;
  double radius = 0.0;
  SteeringModel model;
  std::vector<std::vector<Edge>> out;
  std::vector<std::vector<Edge>> in;
  std::vector<std::vector<State>> paths;

  // Discretized path of edge u->v, or nullptr for exact connections.
  const std::vector<State>* edge_path(int u, int v) const;
  std::size_t edge_count() const;
};

// Uniform-grid bucket index over positions (cell size = radius) prunes candidate
// pairs; every surviving pair goes through the same cost predicate a brute-force
// double loop would use, so the result is identical to brute force.
NeighborGraph build_neighbor_graph(const std::vector<State>& states, const SteeringModel& m,
                                   double radius, int workers = 1);

// Binary adjacency cache: versioned header keyed by (problem_key, n, radius,
// steering model), then per-sample out-lists as (u32 index, f64 cost) pairs,
// little-endian.  Dubins edge paths are recomputed on load.  Writes go to a
// temp file renamed into place so concurrent readers never see a torn file.
bool save_graph_cache(const NeighborGraph& g, const std::string& file, std::uint64_t problem_key);

// Empty optional on any mismatch or corruption; callers rebuild and resave.
std::optional<NeighborGraph> load_graph_cache(const std::string& file, std::uint64_t problem_key,
                                              const std::vector<State>& states,
                                              const SteeringModel& m, double radius);

}  // namespace gmt
