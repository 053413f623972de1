#pragma once

#include <cstdint>
#include <optional>
#include <string>

#include "gmtplan/graph.hpp"
#include "gmtplan/sampling.hpp"
#include "gmtplan/space.hpp"
#include "gmtplan/steering.hpp"

namespace gmt {

// A self-contained planning problem as stored on disk.  The JSON document wraps
// exactly these fields under schema "gmt-problem/1"; unknown keys are rejected so
// typos fail loudly instead of silently falling back to defaults.
struct ProblemFile {
  int dimension = 0;
  SteeringModel steering;
  ObstacleSet obstacles;
  State init;
  GoalRegion goal;
  int n = 0;
  double lambda = 1.0;
  double eta = 0.0;
  std::optional<double> radius_override;
  SampleSource sampling;
  std::string notes;  // optional free text, preserved through round-trips
};

// Parse and fully validate.  Errors name the offending field by path, e.g.
// "obstacles[3].lo" or "steering.rho".
ProblemFile parse_problem(const std::string& json_text);
ProblemFile load_problem(const std::string& path);

// Serialization round-trips: parse_problem(problem_json(p)) reproduces p exactly
// (doubles are emitted shortest-round-trip).
std::string problem_json(const ProblemFile& p);
void save_problem(const ProblemFile& p, const std::string& path);

// Hash over every field that determines the sample set and neighbor graph; used
// to key the graph cache so a stale file is never accepted for an edited scene.
std::uint64_t problem_key(const ProblemFile& p);

// Splits every box into `factor` equal slabs along its widest axis.  The blocked
// region is exactly preserved, so planning outcomes may differ only through
// collision-check granularity, never through geometry.
ObstacleSet refine_obstacles(const ObstacleSet& obs, int factor);

// A problem made concrete: samples drawn, start appended, radius resolved,
// neighbor graph built (or loaded from cache_file when it matches).
struct ProblemInstance {
  SampleSet samples;
  int init_index = -1;
  double radius = 0.0;
  NeighborGraph graph;
};

ProblemInstance build_instance(const ProblemFile& p, int workers = 1,
                               const std::string& cache_file = "");

}  // namespace gmt
