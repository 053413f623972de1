#pragma once

#include <optional>
#include <vector>

namespace gmt {

// A configuration.  Positions live in the closed unit cube [0,1]^d; Dubins states
// carry a heading in [0, 2*pi) attached to the first two coordinates.  Heading is
// ignored by every collision predicate (the robot is a point in position space).
struct State {
  std::vector<double> coords;
  std::optional<double> heading;

  int dim() const { return static_cast<int>(coords.size()); }
};

// Axis-aligned box, closed on all faces: boundary points count as inside.
struct Aabb {
  std::vector<double> lo;
  std::vector<double> hi;

  int dim() const { return static_cast<int>(lo.size()); }
  bool contains(const std::vector<double>& p) const;
  std::vector<double> center() const;
};

// Obstacles in the unit cube.  Boxes may overlap each other and may extend past
// the cube; only their intersection with the cube matters.  Zero-thickness boxes
// (lo == hi on some axis) are legal and act as blocking planes.
struct ObstacleSet {
  int dim = 0;
  std::vector<Aabb> boxes;
};

// Goal test is containment of the position in a closed box; heading never matters.
struct GoalRegion {
  Aabb box;

  bool contains(const State& s) const { return box.contains(s.coords); }
};

void validate_box(const Aabb& box, int dim);
void validate_obstacles(const ObstacleSet& obs);

// True iff p lies inside the unit cube (inclusive) and outside every box.
// A point on a box face is in collision; a point on the cube boundary is free.
bool point_free(const std::vector<double>& p, const ObstacleSet& obs);
bool point_free(const State& s, const ObstacleSet& obs);

// Exact test of the closed segment [a,b]: stays in the cube (endpoints suffice by
// convexity) and misses every box, decided by parametric slab clipping -- no
// discretization, so grazing contacts at box faces are caught.
bool segment_free(const State& a, const State& b, const ObstacleSet& obs);

// Every consecutive segment free; a single state degenerates to point_free.
bool polyline_free(const std::vector<State>& pts, const ObstacleSet& obs);

// Upper bound on the Lebesgue measure of free space used by the connection-radius
// formula; the unit-cube volume is always a valid (conservative) choice.
double free_measure_upper_bound(const ObstacleSet& obs);

// Euclidean distance from p to the closed box (0 if inside).
double point_box_distance(const std::vector<double>& p, const Aabb& box);

// Distance from p to the boundary of the unit cube (negative if outside).
double cube_boundary_clearance(const std::vector<double>& p);

double euclidean_distance(const std::vector<double>& a, const std::vector<double>& b);

}  // namespace gmt
