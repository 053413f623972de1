#pragma once

#include <vector>

#include "gmtplan/space.hpp"

namespace gmt {

struct SteeringModel {
  enum class Kind { euclidean, dubins_airplane };

  Kind kind = Kind::euclidean;
  // Dubins parameters.  The airplane flies a planar Dubins path of minimum
  // turning radius rho in (x, y) while altitude (coordinate 2, if present)
  // changes linearly in planar arc length.
  double rho = 0.1;
  // Max arc length between consecutive discretized states; 0 means rho / 10.
  double discretization_step = 0.0;
  // Cost is sqrt(planar_length^2 + dz^2) by default; this drops the climb term.
  bool planar_cost_only = false;

  double step() const { return discretization_step > 0.0 ? discretization_step : rho / 10.0; }
};

struct Connection {
  double cost = 0.0;
  // Exact connections are straight segments that collision checkers can clip
  // analytically; only inexact (Dubins) connections need their sampled path.
  bool exact = true;
  // Source..target inclusive; path[0] and path.back() equal the endpoints bit
  // for bit.  For exact connections this is just {source, target}.
  std::vector<State> path;
};

// Steers from a toward b (directed: Dubins costs are asymmetric).
Connection connect(const State& a, const State& b, const SteeringModel& m);

// Same cost as connect() without materializing the discretized path.
double connect_cost(const State& a, const State& b, const SteeringModel& m);

// cost(a, b) <= r.  For Dubins pairs the Euclidean position distance is a lower
// bound on cost, so pairs beyond r in position are rejected without solving.
bool within_radius(const State& a, const State& b, const SteeringModel& m, double r);

}  // namespace gmt
