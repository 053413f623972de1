#pragma once

#include <cstdint>
#include <vector>

#include "gmtplan/space.hpp"

namespace gmt {

// Radical inverse of a 1-based index in a prime base.  Index 0 is rejected rather
// than silently returning 0.0 so that off-by-one seeding bugs surface immediately.
double halton(std::uint64_t index, std::uint32_t base);

// k-th prime, 1-based: nth_prime(1) == 2.
std::uint32_t nth_prime(int k);

// Coordinate k of the d-dimensional Halton point uses the k-th prime.
std::vector<double> halton_point(std::uint64_t index, int d);

struct SampleSource {
  enum class Kind { halton, uniform };
  Kind kind = Kind::halton;
  std::uint64_t start_index = 1;  // halton: first index drawn
  std::uint64_t seed = 0;         // uniform: generator seed
  // Attach a heading coordinate (Dubins problems).  Halton headings come from the
  // (d+1)-th prime scaled to [0, 2*pi); uniform headings are drawn after the
  // position coordinates.
  bool with_heading = false;
};

struct SampleSet {
  std::vector<State> states;
  // Ascending indices of states inside the goal region; never empty after a
  // successful sample_free call.
  std::vector<int> goal_indices;
};

// Draws candidates from the source, rejecting collisions and exact duplicates,
// until n free samples are collected.  If none landed in the goal, the last
// sample is replaced by a deterministic goal sample: the goal box center if free
// (heading 0), else the first free Halton point rescaled into the goal box.
// Throws InfeasibleSamplingError / GoalBlockedError when the 1000*n candidate
// budgets run out.
SampleSet sample_free(int n, const ObstacleSet& obs, const GoalRegion& goal,
                      const SampleSource& source);

// Planners take the start as a sample index, so the start state is appended to
// the set (or its existing index reused on an exact duplicate).  goal_indices is
// updated if the start already satisfies the goal.  Freeness is not checked here;
// planners report infeasible input themselves.
int append_init(SampleSet& samples, const State& init, const GoalRegion& goal);

}  // namespace gmt
